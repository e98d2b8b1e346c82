r"""
Base dependence function with standard interface
"""
import torch
import torch.nn as nn

from ..errors import InvalidInputError, DimensionTooLargeError
from ..utils import as_points, corner_signs, DEFAULT_MAX_DIM


KINDS = ('copula', 'quasi-copula', 'quasi-survival', 'unverified')


class BaseDependence(nn.Module):
    r"""
    An evaluable map from [0,1]^d to the reals. `forward` takes a float64
    tensor of shape [..., d] and returns a tensor of shape [...]. Evaluation
    must be deterministic and free of side effects.
    """

    kind = 'unverified'

    def __init__(self, dim, kind=None):
        super().__init__()
        if dim < 2:
            raise InvalidInputError(
                'dependence functions need dimension >= 2, got {}'.format(dim))
        self.dim = dim
        if kind is not None:
            self.kind = kind
        if self.kind not in KINDS:
            raise InvalidInputError('unknown kind {}'.format(self.kind))

    def forward(self, u):
        raise NotImplementedError('Base dependence cannot be directly evaluated')

    def evaluate(self, u):
        r"""
        Value at a single point as a python float.
        """
        u = as_points(u, self.dim)
        if u.dim() != 1:
            raise InvalidInputError('evaluate takes a single point, got shape {}'
                                    .format(tuple(u.shape)))
        return float(self(u))

    def volume(self, lower, upper, max_dim=DEFAULT_MAX_DIM):
        r"""
        Volume of the boxes [lower, upper] by the alternating sum over the
        2^d corners. Batched over the leading dimensions.
        """
        if self.dim > max_dim:
            raise DimensionTooLargeError(
                'corner expansion of a {}-dimensional box exceeds the cap {}'
                .format(self.dim, max_dim))
        lower = as_points(lower, self.dim)
        upper = as_points(upper, self.dim)
        lower, upper = torch.broadcast_tensors(lower, upper)
        picks, signs = corner_signs(self.dim)
        corners = torch.where(picks, upper.unsqueeze(-2), lower.unsqueeze(-2))
        return (self(corners) * signs).sum(-1)

    def extra_repr(self):
        return 'dim={}, kind={}'.format(self.dim, self.kind)


class FunctionDependence(BaseDependence):
    r"""
    Wraps a vectorized callable mapping [..., d] tensors to [...] tensors.
    """

    def __init__(self, fn, dim, kind='unverified'):
        super().__init__(dim, kind)
        self.fn = fn

    def forward(self, u):
        return self.fn(u)
