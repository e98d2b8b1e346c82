r"""
Checkerboard copulas: piecewise-constant density on a regular grid
"""
import string

import torch

from .base import BaseDependence
from ..errors import InvalidInputError
from ..utils import DTYPE


class Checkerboard(BaseDependence):
    r"""
    The distribution function of a probability measure with constant density
    on each cell of an n_1 x ... x n_d grid. `masses[c]` is the probability
    of cell c. With uniform one-dimensional margins this is a copula.
    """

    def __init__(self, masses, tol=1e-12):
        masses = torch.as_tensor(masses, dtype=DTYPE)
        if masses.dim() > len(string.ascii_lowercase) - 1:
            raise InvalidInputError('too many axes for a checkerboard')
        if (masses < -tol).any():
            raise InvalidInputError('checkerboard masses must be nonnegative')
        if abs(float(masses.sum()) - 1.) > tol * masses.numel():
            raise InvalidInputError('checkerboard masses must sum to one')
        uniform = all(
            torch.allclose(
                masses.sum(dim=[j for j in range(masses.dim()) if j != i]),
                torch.full((masses.shape[i],), 1. / masses.shape[i], dtype=DTYPE),
                rtol=0, atol=tol * masses.numel())
            for i in range(masses.dim()))
        super().__init__(masses.dim(), 'copula' if uniform else 'unverified')
        self.register_buffer('masses', masses)
        letters = string.ascii_lowercase[:self.dim]
        self._equation = ','.join('...' + c for c in letters) \
            + ',' + letters + '->...'

    def forward(self, u):
        # fraction of every cell covered along each axis
        fracs = []
        for i, cells in enumerate(self.masses.shape):
            offset = torch.arange(cells, dtype=DTYPE)
            fracs.append((u[..., i:i + 1] * cells - offset).clamp(0., 1.))
        return torch.einsum(self._equation, *fracs, self.masses)
