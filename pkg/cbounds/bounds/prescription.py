r"""
Partial dependence information: point prescriptions, prescribed functionals,
prescribed margins and gap-box sets.
"""
import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable, Tuple

import torch

from ..dependence import LowerFrechet, UpperFrechet, Reflected, BaseDependence
from ..errors import (InvalidInputError, InvalidPrescriptionError,
                      InfeasibleTargetError)
from ..utils import DTYPE, DEFAULT_TOL, lattice


logger = logging.getLogger(__name__)

SIDES = ('copula-scale', 'survival-scale')


def _envelope(points, side):
    r"""
    Frechet-Hoeffding envelope at `points`, on the copula or survival scale.
    """
    if side == 'survival-scale':
        points = 1. - points
    dim = points.shape[-1]
    return LowerFrechet(dim)(points), UpperFrechet(dim)(points)


@dataclass(frozen=True)
class Prescription:
    r"""
    Known values of a (quasi-)copula, or of a survival function when
    `side == 'survival-scale'`, on a finite set of points.
    """

    dim: int
    points: Tuple[Tuple[float, ...], ...] = ()
    values: Tuple[float, ...] = ()
    side: str = 'copula-scale'
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.side not in SIDES:
            raise InvalidInputError('unknown prescription side {}'.format(self.side))
        if self.dim < 2:
            raise InvalidInputError('prescriptions need dimension >= 2')
        points = tuple(tuple(float(c) for c in x) for x in self.points)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'values', values)
        if len(points) != len(values):
            raise InvalidInputError('{} points but {} values'.format(
                len(points), len(values)))
        if not points:
            return
        if any(len(x) != self.dim for x in points):
            raise InvalidInputError(
                'prescription points must have dimension {}'.format(self.dim))
        pts, vals = self.points_tensor(), self.values_tensor()
        if not torch.isfinite(pts).all() or not torch.isfinite(vals).all():
            raise InvalidInputError('prescription entries must be finite')
        if (pts < 0).any() or (pts > 1).any():
            raise InvalidInputError('prescription points must lie in [0, 1]^d')
        lower, upper = _envelope(pts, self.side)
        bad = (vals < lower - self.tol) | (vals > upper + self.tol)
        if bad.any():
            i = int(bad.nonzero()[0])
            raise InvalidPrescriptionError(
                'value {} at {} leaves the Frechet-Hoeffding envelope [{}, {}]'
                .format(values[i], points[i], float(lower[i]), float(upper[i])))
        seen = {}
        for x, v in zip(points, values):
            if x in seen and abs(seen[x] - v) > self.tol:
                raise InvalidPrescriptionError(
                    'conflicting values {} and {} at {}'.format(seen[x], v, x))
            seen[x] = v

    @classmethod
    def repaired(cls, dim, points, values, side='copula-scale', tol=DEFAULT_TOL):
        r"""
        Build a prescription after clipping every value into the envelope.
        """
        if not len(points):
            return cls(dim, (), (), side, tol)
        pts = torch.as_tensor(points, dtype=DTYPE)
        vals = torch.as_tensor(values, dtype=DTYPE)
        lower, upper = _envelope(pts, side)
        clipped = torch.minimum(torch.maximum(vals, lower), upper)
        moved = int((clipped != vals).sum())
        if moved:
            warnings.warn('{} prescribed values clipped to the envelope'.format(moved))
        return cls(dim, tuple(map(tuple, pts.tolist())), tuple(clipped.tolist()),
                   side, tol)

    def __len__(self):
        return len(self.points)

    def points_tensor(self):
        return torch.tensor(self.points, dtype=DTYPE).reshape(-1, self.dim)

    def values_tensor(self):
        return torch.tensor(self.values, dtype=DTYPE)

    def extended(self, points, values):
        return Prescription(self.dim, self.points + tuple(map(tuple, points)),
                            self.values + tuple(values), self.side, self.tol)

    def reflected(self):
        r"""
        The copula-scale prescription on the reflected points 1 - x that a
        survival-scale prescription induces.
        """
        assert self.side == 'survival-scale', 'only survival prescriptions reflect'
        points = tuple(tuple(1. - c for c in x) for x in self.points)
        return Prescription(self.dim, points, self.values, 'copula-scale', self.tol)


def envelope_functions(dim, side='copula-scale'):
    r"""
    (W_d, M_d), or (W_d(1 - .), M_d(1 - .)) on the survival scale.
    """
    if side == 'survival-scale':
        return (Reflected(LowerFrechet(dim), kind='quasi-survival'),
                Reflected(UpperFrechet(dim), kind='quasi-survival'))
    return LowerFrechet(dim), UpperFrechet(dim)


@dataclass(frozen=True)
class FunctionalPrescription:
    r"""
    A functional `rho` with prescribed value `theta`. On the copula scale rho
    must be increasing in the lower orthant order, on the survival scale in
    the upper orthant order; both must be continuous under pointwise
    convergence.
    """

    rho: Callable[[BaseDependence], float]
    theta: float
    dim: int
    side: str = 'copula-scale'
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.side not in SIDES:
            raise InvalidInputError('unknown prescription side {}'.format(self.side))
        lower, upper = self.envelope()
        if not lower - self.tol <= self.theta <= upper + self.tol:
            raise InfeasibleTargetError(
                'theta {} outside [rho(W), rho(M)] = [{}, {}]'.format(
                    self.theta, lower, upper))

    def envelope(self):
        w, m = envelope_functions(self.dim, self.side)
        return float(self.rho(w)), float(self.rho(m))


@dataclass(frozen=True)
class MarginBlock:
    index: Tuple[int, ...]
    lower: BaseDependence
    upper: BaseDependence


@dataclass(frozen=True)
class MarginalPrescription:
    r"""
    Lower and upper bounds on lower-dimensional margins. Index sets have at
    least two elements and pairwise share at most one.
    """

    dim: int
    blocks: Tuple[MarginBlock, ...] = field(default_factory=tuple)
    tol: float = DEFAULT_TOL
    resolution: int = 4

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, MarginBlock) else MarginBlock(*b)
                       for b in self.blocks)
        blocks = tuple(MarginBlock(tuple(sorted(b.index)), b.lower, b.upper)
                       for b in blocks)
        object.__setattr__(self, 'blocks', blocks)
        for b in blocks:
            if len(b.index) < 2 or len(set(b.index)) != len(b.index):
                raise InvalidPrescriptionError(
                    'margin index sets need >= 2 distinct elements, got {}'
                    .format(b.index))
            if any(i < 0 or i >= self.dim for i in b.index):
                raise InvalidPrescriptionError(
                    'margin index {} out of range'.format(b.index))
            if b.lower.dim != len(b.index) or b.upper.dim != len(b.index):
                raise InvalidPrescriptionError(
                    'block functions must have dimension {}'.format(len(b.index)))
            with torch.no_grad():
                nodes = lattice(len(b.index), self.resolution)
                if (b.lower(nodes) > b.upper(nodes) + self.tol).any():
                    raise InvalidPrescriptionError(
                        'block {} has lower bound above upper bound'.format(b.index))
        for i, a in enumerate(blocks):
            for b in blocks[i + 1:]:
                if len(set(a.index) & set(b.index)) > 1:
                    raise InvalidPrescriptionError(
                        'blocks {} and {} overlap in more than one index'
                        .format(a.index, b.index))


@dataclass(frozen=True)
class GapBoxSet:
    r"""
    The set whose three distinguished coordinates avoid the open intervals
    (s_i, s_i + eps_i), every other coordinate being free in [0, 1].
    """

    s: Tuple[float, float, float]
    eps: Tuple[float, float, float]
    index: Tuple[int, int, int] = (0, 1, 2)
    dim: int = 3

    def __post_init__(self):
        s = tuple(float(c) for c in self.s)
        eps = tuple(float(c) for c in self.eps)
        index = tuple(int(i) for i in self.index)
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'eps', eps)
        object.__setattr__(self, 'index', index)
        if len(s) != 3 or len(eps) != 3 or len(index) != 3:
            raise InvalidInputError('gap boxes carry exactly three gaps')
        if len(set(index)) != 3 or any(i < 0 or i >= self.dim for i in index):
            raise InvalidInputError('bad gap coordinates {}'.format(index))
        if any(e <= 0 for e in eps):
            raise InvalidInputError('gap widths must be positive')
        if any(a < 0 or a + e > 1 for a, e in zip(s, eps)):
            raise InvalidInputError('gaps must lie inside [0, 1]')

    @property
    def top(self):
        return tuple(a + e for a, e in zip(self.s, self.eps))

    def lift(self, coords, fill=1.):
        r"""
        Place the three gap coordinates into a d-vector filled with `fill`.
        Works on [..., 3] tensors.
        """
        coords = torch.as_tensor(coords, dtype=DTYPE)
        out = coords.new_full(coords.shape[:-1] + (self.dim,), fill)
        out[..., list(self.index)] = coords
        return out
