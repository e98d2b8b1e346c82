import sys

import numpy as np
import pytest
import torch

from cbounds.bounds import Prescription, lower_bound_subset
from cbounds.core import (Box, frechet_lower, frechet_upper, survival_value,
                          box_volume, reflect, orthant_compare)
from cbounds.dependence import (LowerFrechet, UpperFrechet, Independence,
                                Checkerboard, FunctionDependence, Margin,
                                Survival)
from cbounds.errors import InvalidInputError, DimensionTooLargeError
from cbounds.grid import (GridFunction, check_quasi_copula, check_d_increasing,
                          cell_volumes)
from cbounds.utils import DTYPE, lattice
from oracles import permutation_checkerboard, checkerboard_cdf


def _assert_numerical(names, outs, refs, precision=1e-12):
    for name, out, ref in zip(names, outs, refs):
        err = abs(float(out) - float(ref))
        print("{} abs err {}".format(name, err))
        if err > precision:
            sys.stderr.write(f"=========== {name} out ==============\n")
            sys.stderr.write("{}\n".format(out))
            sys.stderr.write(f"=========== {name} ref ==============\n")
            sys.stderr.write("{}\n".format(ref))
            sys.stderr.write(f"=========== {name} diff ==============\n")
            sys.stderr.write("{}\n".format(err))
            assert False


@pytest.mark.parametrize("u, want", [
    ((0.5, 0.5, 0.5), 0.),
    ((1., 1., 1., 1.), 1.),
    ((0.7, 0.6), 0.3),
])
def test_frechet_lower(u, want):
    _assert_numerical(["W"], [frechet_lower(u)], [want])


@pytest.mark.parametrize("u, want", [
    ((0.2, 0.5, 0.9), 0.2),
    ((1., 1., 0.37, 1.), 0.37),
    ((0., 0.4, 0.8), 0.),
])
def test_frechet_upper(u, want):
    _assert_numerical(["M"], [frechet_upper(u)], [want])


@pytest.mark.parametrize("u", [(0.5,), (0.5, 1.2), (0.5, float('nan'))])
def test_bad_points(u):
    with pytest.raises(InvalidInputError):
        frechet_lower(u)


def test_survival_value():
    half = (0.5, 0.5, 0.5)
    _assert_numerical(["W_3", "M_3"],
                      [survival_value(LowerFrechet(3), half),
                       survival_value(UpperFrechet(3), half)],
                      [-0.5, 0.5])


@pytest.mark.parametrize("a", [0., 0.3, 0.75])
@pytest.mark.parametrize("b", [0.2, 0.9, 1.])
def test_survival_independence(a, b):
    _assert_numerical(["Pi_2"], [survival_value(Independence(2), (a, b))],
                      [(1 - a) * (1 - b)])


def test_survival_dimension_cap():
    with pytest.raises(DimensionTooLargeError):
        survival_value(Independence(13), (0.5,) * 13)


def test_box_volume():
    whole = box_volume(Independence(3), Box((0.,) * 3, (1.,) * 3))
    # independence copula on the diagonal track, gap at (0.5, 0.6)
    ts = [k / 20 for k in range(11)] + [k / 20 for k in range(12, 21)]
    track = Prescription(3, tuple((t, t, t) for t in ts), tuple(t ** 3 for t in ts))
    gap_volume = box_volume(lower_bound_subset(track), Box((0.56,) * 3, (0.6,) * 3))
    point = Prescription(3, ((0.5, 0.5, 0.5),), (0.125,))
    point_volume = box_volume(lower_bound_subset(point), Box((0.45,) * 3, (0.5,) * 3))
    _assert_numerical(["total mass", "gap track", "single point"],
                      [whole, gap_volume, point_volume], [1., -0.029, -1. / 40])


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_volume_additive(dim, seed):
    rng = np.random.default_rng(seed)
    q = Checkerboard(permutation_checkerboard(rng, dim, 3))
    lo = rng.uniform(0., 0.5, size=dim)
    hi = lo + rng.uniform(0., 0.5, size=dim)
    box = Box(tuple(lo), tuple(hi))
    left, right = box.split(0, float(rng.uniform(lo[0], hi[0])))
    _assert_numerical(["split"], [box_volume(q, left) + box_volume(q, right)],
                      [box_volume(q, box)])


def test_box_validation():
    with pytest.raises(InvalidInputError):
        Box((0.5, 0.5), (0.4, 0.6))
    with pytest.raises(InvalidInputError):
        box_volume(Independence(3), Box((0., 0.), (1., 1.)))


@pytest.mark.parametrize("q", [UpperFrechet(3), LowerFrechet(3), Independence(3)])
@pytest.mark.parametrize("n", [4, 8])
def test_quasi_copula_checks_pass(q, n):
    report = check_quasi_copula(GridFunction.sample(q, n))
    assert report.passed, report.checks()


def test_constant_fails_grounding():
    grid = GridFunction(3, 4, torch.full((5 ** 3,), 0.5, dtype=DTYPE))
    report = check_quasi_copula(grid)
    assert 'QC1-grounding' in report.checks()
    assert 'QC1-margin' in report.checks()


def test_grid_validation():
    with pytest.raises(InvalidInputError):
        GridFunction(2, 3, [0.] * 10)
    with pytest.raises(DimensionTooLargeError):
        cell_volumes(GridFunction(7, 1, [0.] * 2 ** 7))


def test_d_increasing():
    assert check_d_increasing(GridFunction.sample(Independence(3), 8)).passed
    report = check_d_increasing(GridFunction.sample(LowerFrechet(3), 4))
    assert not report.passed
    assert all(v.magnitude < 0 for v in report.violations)


def test_d_increasing_point_bound():
    point = Prescription(3, ((0.5, 0.5, 0.5),), (0.125,))
    report = check_d_increasing(GridFunction.sample(lower_bound_subset(point), 20))
    cells = {v.location: v.magnitude for v in report.violations}
    assert '9:9:9' in cells
    _assert_numerical(["cell"], [cells['9:9:9']], [-0.025])


@pytest.mark.parametrize("dim", [2, 3, 4])
@pytest.mark.parametrize("seed", [3, 4])
def test_reflect(dim, seed):
    rng = np.random.default_rng(seed)
    q = Checkerboard(permutation_checkerboard(rng, dim, 3))
    u = torch.tensor(rng.uniform(size=(16, dim)), dtype=DTYPE)
    twice = reflect(reflect(q))
    _assert_numerical(["involution"], [(twice(u) - q(u)).abs().max()], [0.])
    m = reflect(UpperFrechet(dim))
    _assert_numerical(["reflected M"], [(m(u) - (1. - u).min(-1).values).abs().max()], [0.])
    assert reflect(q).kind == 'unverified'


def test_reflect_lower_frechet():
    third = (1. / 3,) * 3
    _assert_numerical(["W_3"], [reflect(LowerFrechet(3)).evaluate(third)],
                      [LowerFrechet(3).evaluate((2. / 3,) * 3)])


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_orthant_compare_envelope(dim):
    assert orthant_compare(LowerFrechet(dim), UpperFrechet(dim), 6).verdict == 'both'
    q = Independence(dim)
    assert orthant_compare(q, q, 6).verdict == 'both'


@pytest.mark.parametrize("seed", range(6))
def test_orthant_orders_coincide_in_two_dimensions(seed):
    rng = np.random.default_rng(seed)
    q1 = Checkerboard(permutation_checkerboard(rng, 2, 4))
    q2 = Checkerboard(permutation_checkerboard(rng, 2, 4))
    for a, b in ((q1, q2), (q2, q1), (LowerFrechet(2), q1), (q1, UpperFrechet(2))):
        result = orthant_compare(a, b, 8)
        assert result.lo_dominated == result.uo_dominated


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("seed", range(4))
def test_checkerboard_within_envelope(dim, seed):
    rng = np.random.default_rng(seed)
    masses = permutation_checkerboard(rng, dim, 3)
    q = Checkerboard(masses)
    assert q.kind == 'copula'
    nodes = lattice(dim, 6)
    values = q(nodes)
    assert (values >= LowerFrechet(dim)(nodes) - 1e-12).all()
    assert (values <= UpperFrechet(dim)(nodes) + 1e-12).all()
    x = rng.uniform(size=dim)
    _assert_numerical(["checkerboard"], [q.evaluate(x)], [checkerboard_cdf(masses, x)])


def test_margin_and_survival():
    q = Margin(Independence(3), (0, 2))
    _assert_numerical(["margin"], [q.evaluate((0.3, 0.4))], [0.12])
    s = Survival(Independence(3))
    assert s.kind == 'quasi-survival'
    _assert_numerical(["survival margin"], [Margin(s, (0, 1)).evaluate((0.25, 0.5))],
                      [0.75 * 0.5])


def test_evaluate_rejects_batches():
    with pytest.raises(InvalidInputError):
        Independence(2).evaluate([[0.5, 0.5], [0.2, 0.3]])
    with pytest.raises(InvalidInputError):
        FunctionDependence(lambda u: u.prod(-1), 2, 'copulae')


if __name__ == '__main__':
    test_box_volume()
    test_d_increasing_point_bound()
