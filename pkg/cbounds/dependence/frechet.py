r"""
Frechet-Hoeffding bounds W_d and M_d
"""
from .base import BaseDependence


class LowerFrechet(BaseDependence):
    r"""
    W_d(u) = max{0, sum(u) - d + 1}. A copula only for d = 2, a proper
    quasi-copula otherwise.
    """

    def __init__(self, dim):
        super().__init__(dim, 'copula' if dim == 2 else 'quasi-copula')

    def forward(self, u):
        return (u.sum(-1) - self.dim + 1).clamp(min=0)


class UpperFrechet(BaseDependence):
    r"""
    M_d(u) = min{u_1, ..., u_d}, the comonotone copula.
    """

    kind = 'copula'

    def forward(self, u):
        return u.min(-1).values
