r"""
Point-level operations on quasi-copulas: Frechet-Hoeffding bounds, survival
values, box volumes, reflection and orthant-order comparison.
"""
from dataclasses import dataclass

import torch

from .dependence import LowerFrechet, UpperFrechet, Reflected, Survival
from .errors import InvalidInputError
from .utils import as_points, lattice, DEFAULT_TOL, DEFAULT_MAX_DIM


def check_point(u, dim=None):
    r"""
    Validate a point (or a batch of points) of the unit hypercube.
    """
    u = as_points(u, dim)
    if u.shape[-1] < 2:
        raise InvalidInputError(
            'points need dimension >= 2, got {}'.format(u.shape[-1]))
    if not torch.isfinite(u).all() or (u < 0).any() or (u > 1).any():
        raise InvalidInputError('point coordinates must lie in [0, 1]')
    return u


def _output(value):
    return float(value) if value.dim() == 0 else value


@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = check_point(self.lower)
        upper = check_point(self.upper, lower.shape[-1])
        if lower.dim() != 1 or upper.dim() != 1:
            raise InvalidInputError('a box is spanned by two single points')
        if (lower > upper).any():
            raise InvalidInputError('box lower corner exceeds upper corner')
        object.__setattr__(self, 'lower', tuple(lower.tolist()))
        object.__setattr__(self, 'upper', tuple(upper.tolist()))

    @property
    def dim(self):
        return len(self.lower)

    def split(self, axis, at):
        r"""
        Split into two boxes along `axis` at coordinate `at`.
        """
        assert self.lower[axis] <= at <= self.upper[axis], 'split outside box'
        upper = list(self.upper)
        lower = list(self.lower)
        upper[axis] = at
        lower[axis] = at
        return Box(self.lower, tuple(upper)), Box(tuple(lower), self.upper)


def frechet_lower(u):
    u = check_point(u)
    return _output(LowerFrechet(u.shape[-1])(u))


def frechet_upper(u):
    u = check_point(u)
    return _output(UpperFrechet(u.shape[-1])(u))


def box_volume(q, box, max_dim=DEFAULT_MAX_DIM):
    r"""
    V_Q(H) by the alternating-sign sum over the 2^d corners of H.
    """
    if box.dim != q.dim:
        raise InvalidInputError('box and function dimensions differ')
    return float(q.volume(box.lower, box.upper, max_dim=max_dim))


def survival_value(q, u, max_dim=DEFAULT_MAX_DIM):
    r"""
    V_Q((u_1, 1] x ... x (u_d, 1]). Uses the same corner expansion as
    `box_volume`, so both agree exactly.
    """
    u = check_point(u, q.dim)
    return _output(Survival(q, max_dim=max_dim)(u))


def reflect(q):
    return Reflected(q)


@dataclass(frozen=True)
class OrthantComparison:
    lo_dominated: bool
    uo_dominated: bool

    @property
    def verdict(self):
        if self.lo_dominated and self.uo_dominated:
            return 'both'
        if self.lo_dominated:
            return 'LO-dominated'
        if self.uo_dominated:
            return 'UO-dominated'
        return 'incomparable'


def orthant_compare(q1, q2, n, tol=DEFAULT_TOL, max_dim=DEFAULT_MAX_DIM):
    r"""
    Compare Q1 against Q2 on the lattice {0, 1/n, ..., 1}^d: Q1 is
    LO-dominated when Q1 <= Q2 at every node and UO-dominated when the same
    holds for their survival functions.
    """
    if q1.dim != q2.dim:
        raise InvalidInputError('cannot compare functions of different dimension')
    nodes = lattice(q1.dim, n)
    lo = bool((q1(nodes) <= q2(nodes) + tol).all())
    ones = torch.ones_like(nodes)
    uo = bool((q1.volume(nodes, ones, max_dim=max_dim)
               <= q2.volume(nodes, ones, max_dim=max_dim) + tol).all())
    return OrthantComparison(lo, uo)
