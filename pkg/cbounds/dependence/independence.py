r"""
Independence copula
"""
from .base import BaseDependence


class Independence(BaseDependence):
    kind = 'copula'

    def forward(self, u):
        return u.prod(-1)
