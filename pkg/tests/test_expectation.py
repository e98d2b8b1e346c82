import math

import numpy as np
import pytest
import torch

from cbounds.dependence import (LowerFrechet, UpperFrechet, Independence,
                                Checkerboard, Survival)
from cbounds.errors import InvalidInputError, ParseError
from cbounds.payoffs import (DIAGONAL_KINDS, IntegrationConfig, LogNormalMarginal,
                             PayoffDescriptor, UniformMarginal,
                             PiecewiseUniformMarginal,
                             PointMass, DensityMeasure, diagonal_payoff,
                             generic_payoff, basket_payoff, spread_payoff,
                             parse_payoff, order_of, quasi_expectation,
                             price_with_error, phi_recursion, dominance_check,
                             check_integrability, strike_grid)
from oracles import (permutation_checkerboard, checkerboard_expectation,
                     lognormal_call, lognormal_put)
from test_core import _assert_numerical


TIGHT = IntegrationConfig(epsabs=1e-12, epsrel=1e-10)


def _piecewise(rng, dim, cells):
    knots = [np.concatenate([[0.], np.cumsum(rng.uniform(0.5, 1.5, cells))])
             for _ in range(dim)]
    marginals = [PiecewiseUniformMarginal(k, [1. / cells] * cells) for k in knots]
    return knots, marginals


def _indicator(a, b):
    measures = {
        (0,): PointMass((a,), -1.),
        (1,): PointMass((b,), -1.),
        (0, 1): PointMass((a, b), 1.),
    }
    return generic_payoff(2, measures, 1., 'antitonic')


@pytest.mark.parametrize("kind", list(DIAGONAL_KINDS))
@pytest.mark.parametrize("dim, cells", [(2, 3), (3, 2)])
@pytest.mark.parametrize("seed", [0, 1])
def test_checkerboard_expectation(kind, dim, cells, seed):
    rng = np.random.default_rng(seed)
    masses = permutation_checkerboard(rng, dim, cells)
    knots, marginals = _piecewise(rng, dim, cells)
    strike = float(rng.uniform(0.3, 0.7) * min(k[-1] for k in knots))
    f = diagonal_payoff(kind, dim, strike)
    out = quasi_expectation(f, Checkerboard(masses), marginals, TIGHT)
    ref = checkerboard_expectation(masses, knots, kind, strike)
    _assert_numerical([kind], [out], [ref], 1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(DIAGONAL_KINDS))
def test_checkerboard_expectation_sweep(kind):
    # 100 checkerboards on 2x2x2 and 100 on 3x3
    for dim, cells in ((3, 2), (2, 3)):
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            masses = permutation_checkerboard(rng, dim, cells)
            knots, marginals = _piecewise(rng, dim, cells)
            strike = float(rng.uniform(0.3, 0.7) * min(k[-1] for k in knots))
            f = diagonal_payoff(kind, dim, strike)
            out = quasi_expectation(f, Checkerboard(masses), marginals, TIGHT)
            ref = checkerboard_expectation(masses, knots, kind, strike)
            assert abs(out - ref) <= 1e-8, (dim, seed, out, ref)


@pytest.mark.parametrize("kind", list(DIAGONAL_KINDS))
def test_survival_input_prices_alike(kind):
    rng = np.random.default_rng(5)
    q = Checkerboard(permutation_checkerboard(rng, 3, 3))
    _, marginals = _piecewise(rng, 3, 3)
    f = diagonal_payoff(kind, 3, 1.2)
    _assert_numerical([kind], [quasi_expectation(f, Survival(q), marginals, TIGHT)],
                      [quasi_expectation(f, q, marginals, TIGHT)], 1e-9)


def test_digital_put_on_max_independence():
    f = diagonal_payoff('digital-put-on-max', 2, 0.5)
    out = quasi_expectation(f, Independence(2), [UniformMarginal()] * 2)
    _assert_numerical(["digital"], [out], [0.25])


@pytest.mark.parametrize("strike", [0.6, 1., 1.5])
def test_comonotone_lognormal(strike):
    spots = (1., 1.2, 0.9)
    marginals = [LogNormalMarginal(s) for s in spots]
    call = quasi_expectation(diagonal_payoff('call-on-min', 3, strike),
                             UpperFrechet(3), marginals, TIGHT)
    put = quasi_expectation(diagonal_payoff('put-on-max', 3, strike),
                            UpperFrechet(3), marginals, TIGHT)
    _assert_numerical(["call on min", "put on max"], [call, put],
                      [lognormal_call(0.9, strike), lognormal_put(1.2, strike)], 1e-6)


@pytest.mark.parametrize("q, want", [
    (Independence(2), 1. / 6), (UpperFrechet(2), 0.25), (LowerFrechet(2), 0.)])
def test_basket(q, want):
    f = basket_payoff((1., 1.), 1.)
    _assert_numerical(["basket"], [quasi_expectation(f, q, [UniformMarginal()] * 2, TIGHT)],
                      [want], 1e-7)


@pytest.mark.parametrize("q, want", [
    (Independence(2), 1. / 6), (UpperFrechet(2), 0.), (LowerFrechet(2), 0.25)])
def test_spread(q, want):
    f = spread_payoff((1., 1.), 0.)
    _assert_numerical(["spread"], [quasi_expectation(f, q, [UniformMarginal()] * 2, TIGHT)],
                      [want], 1e-7)


def test_wide_baskets_refused():
    with pytest.raises(InvalidInputError):
        basket_payoff((1., 1., 1.), 1.)
    with pytest.raises(InvalidInputError):
        spread_payoff((1., -1.), 0.)


@pytest.mark.parametrize("q, want", [(Independence(2), 0.25), (UpperFrechet(2), 1. / 3)])
def test_product_payoff_density(q, want):
    # x1 * x2 charges the joint margin with Lebesgue density one
    f = generic_payoff(2, {(0, 1): DensityMeasure(lambda s, t: 1., (0., 0.),
                                                  (math.inf, math.inf))},
                       0., 'monotonic', lambda x: x[..., 0] * x[..., 1])
    _assert_numerical(["E[XY]"], [quasi_expectation(f, q, [UniformMarginal()] * 2, TIGHT)],
                      [want], 1e-7)


def test_zero_payoff():
    f = generic_payoff(3, {}, 0., 'monotonic')
    marginals = [LogNormalMarginal(1.)] * 3
    assert quasi_expectation(f, Independence(3), marginals) == 0.
    assert phi_recursion(f, Independence(3), marginals) == 0.


@pytest.mark.parametrize("seed", range(3))
def test_indicator_recovers_copula(seed):
    rng = np.random.default_rng(seed)
    q = Checkerboard(permutation_checkerboard(rng, 2, 4))
    marginals = [LogNormalMarginal(1.), LogNormalMarginal(1.3)]
    a, b = rng.uniform(0.5, 2., size=2)
    f = _indicator(a, b)
    u = (float(marginals[0].cdf(a)), float(marginals[1].cdf(b)))
    _assert_numerical(["pi", "phi", "phi_0"],
                      [quasi_expectation(f, q, marginals), phi_recursion(f, q, marginals),
                       phi_recursion(f, q, marginals, (0,))],
                      [q.evaluate(u), q.evaluate(u), u[0]])


@pytest.mark.parametrize("kind", ['call-on-max', 'put-on-max', 'digital-put-on-max'])
def test_phi_recursion_on_full_set(kind):
    rng = np.random.default_rng(9)
    q = Checkerboard(permutation_checkerboard(rng, 3, 3))
    _, marginals = _piecewise(rng, 3, 3)
    f = diagonal_payoff(kind, 3, 1.)
    _assert_numerical([kind], [phi_recursion(f, q, marginals, cfg=TIGHT)],
                      [quasi_expectation(f, q, marginals, TIGHT)], 1e-8)


def test_phi_recursion_bad_index():
    f = diagonal_payoff('call-on-min', 2, 1.)
    with pytest.raises(InvalidInputError):
        phi_recursion(f, Independence(2), [UniformMarginal()] * 2, (0, 2))


@pytest.mark.parametrize("kind", list(DIAGONAL_KINDS))
def test_dominance(kind):
    rng = np.random.default_rng(2)
    q = Checkerboard(permutation_checkerboard(rng, 2, 3))
    marginals = [LogNormalMarginal(1.)] * 2
    f = diagonal_payoff(kind, 2, 1.)
    report = dominance_check(f, LowerFrechet(2), q, marginals)
    assert report.hypothesis and report.holds, str(report)
    report = dominance_check(f, q, UpperFrechet(2), marginals)
    assert report.hypothesis and report.holds, str(report)
    report = dominance_check(f, UpperFrechet(2), LowerFrechet(2), marginals)
    assert not report.hypothesis and report.holds


def test_orders():
    assert order_of('antitonic') == order_of('negated-antitonic') == 'LO'
    assert order_of('monotonic') == order_of('negated-monotonic') == 'UO'
    assert order_of('none') is None
    assert spread_payoff((1., 1.), 0.).order == 'LO'


def test_integrability():
    marginals = [LogNormalMarginal(1.)] * 2
    assert check_integrability(diagonal_payoff('digital-call-on-min', 2, 1.), marginals)
    assert check_integrability(diagonal_payoff('call-on-min', 2, 1.), marginals)
    assert check_integrability(diagonal_payoff('put-on-max', 2, 1.), marginals)
    wild = generic_payoff(2, {}, 0., 'none', lambda x: torch.exp((x * x).sum(-1)))
    report = check_integrability(wild, marginals)
    assert not report and report.subset is not None


def test_price_error_estimate():
    f = diagonal_payoff('call-on-min', 2, 1.)
    value, err = price_with_error(f, Independence(2), [LogNormalMarginal(1.)] * 2)
    assert 0 < value < lognormal_call(1., 1.)
    assert 0 <= err < 1e-6


def test_marginal_count_mismatch():
    f = diagonal_payoff('call-on-min', 3, 1.)
    with pytest.raises(InvalidInputError):
        quasi_expectation(f, Independence(3), [UniformMarginal()] * 2)


@pytest.mark.parametrize("text", ['call-on-mid:1', 'call-on-min', 'call-on-min:x'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_payoff(text, 2)


def test_diagonal_tonicity_checked():
    with pytest.raises(InvalidInputError):
        PayoffDescriptor('call-on-min', 2, 1., 'antitonic')
    assert PayoffDescriptor('call-on-min', 2, 1., 'monotonic').order == 'UO'


def test_parse_and_grid():
    f = parse_payoff('put-on-min:1.5', 3)
    assert f.kind == 'put-on-min' and f.strike == 1.5 and f.origin_value == 1.5
    grid = strike_grid(UniformMarginal(0., 2.), 0.1, 0.9, 5)
    _assert_numerical(["first", "last"], [grid[0], grid[-1]], [0.2, 1.8])


if __name__ == '__main__':
    test_checkerboard_expectation('call-on-max', 3, 2, 0)
    test_indicator_recovers_copula(0)
