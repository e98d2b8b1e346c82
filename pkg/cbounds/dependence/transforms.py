r"""
Reflection, survival and margin transforms of dependence functions
"""
import torch

from .base import BaseDependence
from ..errors import InvalidInputError
from ..utils import DEFAULT_MAX_DIM


class Reflected(BaseDependence):
    r"""
    u -> Q(1 - u). The reflection of a quasi-copula need not be one, so the
    kind defaults to unverified.
    """

    def __init__(self, base, kind='unverified'):
        super().__init__(base.dim, kind)
        self.base = base

    def forward(self, u):
        return self.base(1. - u)


class Survival(BaseDependence):
    r"""
    The survival function u -> V_Q((u, 1]) of a copula or quasi-copula.
    """

    kind = 'quasi-survival'

    def __init__(self, base, max_dim=DEFAULT_MAX_DIM):
        if base.kind not in ('copula', 'quasi-copula'):
            raise InvalidInputError(
                'survival functions are defined for (quasi-)copulas, got {}'
                .format(base.kind))
        super().__init__(base.dim)
        self.base = base
        self.max_dim = max_dim

    def forward(self, u):
        return self.base.volume(u, torch.ones_like(u), max_dim=self.max_dim)


class Margin(BaseDependence):
    r"""
    The I-margin u_I -> Q(u_I'), where u_I' fills the coordinates outside I
    with ones (or zeros for survival functions).
    """

    def __init__(self, base, index):
        index = tuple(sorted(index))
        if len(set(index)) != len(index) or \
                any(i < 0 or i >= base.dim for i in index):
            raise InvalidInputError('bad margin index set {}'.format(index))
        super().__init__(len(index), base.kind)
        self.base = base
        self.index = index
        self.fill = 0. if base.kind == 'quasi-survival' else 1.

    def forward(self, v):
        u = v.new_full(v.shape[:-1] + (self.base.dim,), self.fill)
        u[..., list(self.index)] = v
        return self.base(u)
