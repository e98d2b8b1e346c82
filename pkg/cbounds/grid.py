r"""
Lattice discretization of dependence functions and the QC1-QC4 checks.
A pass on a grid is evidence on that grid, not a proof.
"""
from dataclasses import dataclass, field
from typing import List

import torch

from .errors import InvalidInputError, DimensionTooLargeError
from .utils import (DTYPE, DEFAULT_TOL, GRID_MAX_DIM, GRID_MAX_CELLS,
                    corner_signs, lattice)


class GridFunction(object):
    r"""
    Values on the regular lattice {0, 1/n, ..., 1}^d, held as a tensor of
    shape [n+1] * d. Flattening is row-major lexicographic in the lattice
    indices.
    """

    def __init__(self, dim, n, values):
        values = torch.as_tensor(values, dtype=DTYPE)
        if dim < 1 or n < 1:
            raise InvalidInputError('grid needs dim >= 1 and n >= 1')
        if values.numel() != (n + 1) ** dim:
            raise InvalidInputError('expected {} grid values, got {}'.format(
                (n + 1) ** dim, values.numel()))
        if not torch.isfinite(values).all():
            raise InvalidInputError('grid values must be finite')
        self.dim = dim
        self.n = n
        self.values = values.reshape((n + 1,) * dim)

    @classmethod
    def sample(cls, q, n):
        with torch.no_grad():
            values = q(lattice(q.dim, n))
        return cls(q.dim, n, values)

    def flat(self):
        return self.values.reshape(-1)


@dataclass(frozen=True)
class Violation:
    check: str
    location: str
    magnitude: float


@dataclass
class PropertyReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def add(self, check, indices, magnitudes, suffix=''):
        for idx, mag in zip(indices.tolist(), magnitudes.tolist()):
            location = ':'.join(str(i) for i in idx) + suffix
            self.violations.append(Violation(check, location, mag))

    def checks(self):
        return sorted({v.check for v in self.violations})

    def __len__(self):
        return len(self.violations)


def check_quasi_copula(grid, tol=DEFAULT_TOL):
    r"""
    Report every lattice instance of a violated boundary condition (QC1),
    of monotonicity between adjacent nodes (QC2) and of the discrete
    Lipschitz condition between adjacent nodes (QC3).
    """
    report = PropertyReport()
    values, n, dim = grid.values, grid.n, grid.dim
    index = torch.stack(torch.meshgrid(
        *([torch.arange(n + 1)] * dim), indexing='ij'), dim=-1)

    grounded = (index == 0).any(-1)
    bad = grounded & (values.abs() > tol)
    report.add('QC1-grounding', index[bad], values[bad])

    margin = ((index != n).sum(-1) <= 1) & ~grounded
    expected = index.min(-1).values.to(DTYPE) / n
    err = values - expected
    bad = margin & (err.abs() > tol)
    report.add('QC1-margin', index[bad], err[bad])

    for axis in range(dim):
        diff = values.diff(dim=axis)
        lower = index.narrow(axis, 0, n)
        bad = diff < -tol
        report.add('QC2', lower[bad], diff[bad], '@{}'.format(axis))
        bad = diff.abs() > 1. / n + tol
        report.add('QC3', lower[bad], diff[bad], '@{}'.format(axis))
    return report


def cell_volumes(grid):
    r"""
    Volumes of all n^d unit cells, indexed by their lower corner.
    """
    dim, n = grid.dim, grid.n
    if dim > GRID_MAX_DIM:
        raise DimensionTooLargeError(
            'd-increasing checks are capped at d <= {}'.format(GRID_MAX_DIM))
    if n ** dim > GRID_MAX_CELLS:
        raise DimensionTooLargeError(
            '{} cells exceed the cap {}'.format(n ** dim, GRID_MAX_CELLS))
    picks, signs = corner_signs(dim)
    volumes = torch.zeros((n,) * dim, dtype=DTYPE)
    for pick, sign in zip(picks.tolist(), signs.tolist()):
        corner = grid.values[tuple(
            slice(1, None) if up else slice(None, -1) for up in pick)]
        volumes += sign * corner
    return volumes


def check_d_increasing(grid, tol=DEFAULT_TOL):
    r"""
    Report every unit lattice cell with negative volume (QC4).
    """
    report = PropertyReport()
    volumes = cell_volumes(grid)
    bad = volumes < -tol
    report.add('QC4', bad.nonzero(), volumes[bad])
    return report
