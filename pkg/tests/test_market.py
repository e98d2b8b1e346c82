import math

import numpy as np
import pytest
from scipy import special

from cbounds.errors import (IllConditionedError, InvalidInputError,
                            InvalidStrikeError)
from cbounds.market import (BSModel, CorrelationMatrix, MarketQuote,
                            bivariate_normal_cdf, trivariate_normal_cdf,
                            generate_pairwise_digital_quotes,
                            generate_min_digital_quotes, mc_benchmark_price)
from cbounds.payoffs import diagonal_payoff
from oracles import bivariate_orthant, trivariate_orthant
from test_core import _assert_numerical


MEDIAN = math.exp(-0.5)


def _model(dim, rho, spots=None):
    return BSModel(spots or (1.,) * dim, CorrelationMatrix.equicorrelated(dim, rho))


@pytest.mark.parametrize("rho", np.linspace(-0.98, 0.98, 50).tolist())
def test_bivariate_orthant(rho):
    _assert_numerical(["orthant"], [bivariate_normal_cdf(0., 0., rho)],
                      [bivariate_orthant(rho)], 1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_bivariate_symmetries(seed):
    rng = np.random.default_rng(seed)
    h, k = rng.normal(size=2) * 2
    for rho in rng.uniform(-0.99, 0.99, size=6).tolist():
        _assert_numerical(["swap", "reflect"],
                          [bivariate_normal_cdf(h, k, rho),
                           bivariate_normal_cdf(h, k, rho) + bivariate_normal_cdf(h, -k, -rho)],
                          [bivariate_normal_cdf(k, h, rho), special.ndtr(h)], 1e-11)


@pytest.mark.parametrize("h, k, rho, want", [
    (0., 0., 0., 0.25),
    (math.inf, 0.7, 0.4, float(special.ndtr(0.7))),
    (-math.inf, 0.7, 0.4, 0.),
    (1.2, 1.2, 1., float(special.ndtr(1.2))),
    (0.5, -0.5, -1., 0.),
])
def test_bivariate_limits(h, k, rho, want):
    _assert_numerical(["bvn"], [bivariate_normal_cdf(h, k, rho)], [want])


def test_bivariate_bad_correlation():
    with pytest.raises(InvalidInputError):
        bivariate_normal_cdf(0., 0., 1.5)


@pytest.mark.parametrize("rho", np.linspace(-0.45, 0.95, 20).tolist())
def test_trivariate_orthant(rho):
    corr = CorrelationMatrix.equicorrelated(3, rho)
    _assert_numerical(["orthant"], [trivariate_normal_cdf(0., 0., 0., corr)],
                      [trivariate_orthant(rho)], 1e-8)


def test_trivariate_independent():
    corr = CorrelationMatrix.equicorrelated(3, 0.)
    _assert_numerical(["identity", "product"],
                      [trivariate_normal_cdf(0., 0., 0., corr),
                       trivariate_normal_cdf(0.3, -0.2, 1., corr)],
                      [0.125, float(special.ndtr(0.3) * special.ndtr(-0.2) * special.ndtr(1.))],
                      1e-10)


def test_trivariate_reduces_to_bivariate():
    corr = CorrelationMatrix.from_upper(3, [0.3, -0.2, 0.5])
    _assert_numerical(["infinite limit"],
                      [trivariate_normal_cdf(0.4, math.inf, -0.1, corr)],
                      [bivariate_normal_cdf(0.4, -0.1, -0.2)])


def test_trivariate_ill_conditioned():
    with pytest.raises(IllConditionedError):
        trivariate_normal_cdf(0., 0., 0., CorrelationMatrix.equicorrelated(3, 1.))


@pytest.mark.parametrize("upper", [[0.9, 0.9, -0.9], [1.2, 0., 0.], [0.5]])
def test_bad_correlation(upper):
    with pytest.raises(InvalidInputError):
        CorrelationMatrix.from_upper(3, upper)


def test_median_quotes():
    model = _model(3, 0.)
    pairs = generate_pairwise_digital_quotes(model, [MEDIAN])
    assert [q.indices for q in pairs] == [(0, 1), (0, 2), (1, 2)]
    (triple,) = generate_min_digital_quotes(model, [MEDIAN])
    _assert_numerical(["pair", "min"], [pairs[0].price, triple.price], [0.25, 0.125])
    (triple,) = generate_min_digital_quotes(_model(3, 0.5), [MEDIAN])
    _assert_numerical(["min at 0.5"], [triple.price], [0.25], 1e-8)


def test_quotes_follow_strikes():
    model = _model(2, 0.3, (1., 1.4))
    prices = [q.price for q in generate_pairwise_digital_quotes(model, [0.5, 1., 2.])]
    assert prices == sorted(prices)


@pytest.mark.parametrize("strikes", [[0.], [1., -2.]])
def test_invalid_strikes(strikes):
    with pytest.raises(InvalidStrikeError):
        generate_pairwise_digital_quotes(_model(2, 0.), strikes)


def test_quote_validation():
    with pytest.raises(InvalidStrikeError):
        MarketQuote('pairwise-digital-max', (0, 1), 0., 0.2)
    with pytest.raises(InvalidInputError):
        MarketQuote('pairwise-digital-max', (0, 0), 1., 0.2)
    with pytest.raises(InvalidInputError):
        MarketQuote('vanilla', (0, 1), 1., 0.2)
    with pytest.raises(InvalidInputError):
        generate_min_digital_quotes(_model(2, 0.), [1.])


def test_model_config():
    model = BSModel.from_dict({'spots': [1., 2., 3.], 'correlations': [0.1, 0.2, 0.3]})
    assert model.vols == (1., 1., 1.)
    assert model.corr[2, 1] == 0.3
    assert BSModel.from_dict(model.to_dict()) == model
    with pytest.raises(InvalidInputError):
        BSModel.from_dict({'spots': [1., 2.]})
    with pytest.raises(InvalidInputError):
        BSModel((1., -1.), CorrelationMatrix.equicorrelated(2, 0.))


def test_mc_matches_orthant():
    model = _model(2, 0.3)
    f = diagonal_payoff('digital-put-on-max', 2, 1.)
    mean, stderr = mc_benchmark_price(f, model, 200000, seed=4)
    exact = bivariate_normal_cdf(0.5, 0.5, 0.3)
    assert abs(mean - exact) < 5 * stderr
    assert 0 < stderr < 2e-3


def test_mc_deterministic_across_threads(monkeypatch):
    model = _model(3, 0.2)
    f = diagonal_payoff('call-on-min', 3, 0.8)
    results = []
    for threads in ('1', '4'):
        monkeypatch.setenv('COPULA_BOUNDS_THREADS', threads)
        results.append(mc_benchmark_price(f, model, 30000, seed=7, shard_size=10000))
    assert results[0] == results[1]
    assert mc_benchmark_price(f, model, 30000, seed=8, shard_size=10000) != results[0]


def test_mc_path_floor():
    with pytest.raises(InvalidInputError):
        mc_benchmark_price(diagonal_payoff('call-on-min', 2, 1.), _model(2, 0.), 100)


if __name__ == '__main__':
    test_trivariate_orthant(0.5)
    test_median_quotes()
