r"""
One-dimensional marginal distributions on the nonnegative half-line
"""
import math

import torch

from ..errors import InvalidInputError
from ..utils import DTYPE


class MarginalDistribution(object):
    r"""
    A distribution function F on [0, inf) with its generalized inverse
    F^{-1}(p) = inf{x : F(x) >= p}. `knots` lists points where F is not
    smooth; quadrature splits there.
    """

    knots = ()

    def cdf(self, x):
        raise NotImplementedError('Base marginal cannot be directly used')

    def quantile(self, p):
        raise NotImplementedError('Base marginal cannot be directly used')

    def x_max(self, q_trunc):
        r"""
        Upper truncation point with F(x_max) >= 1 - q_trunc.
        """
        return float(self.quantile(torch.tensor(1. - q_trunc, dtype=DTYPE)))

    def __call__(self, x):
        return self.cdf(torch.as_tensor(x, dtype=DTYPE))


class LogNormalMarginal(MarginalDistribution):
    r"""
    Law of s * exp(-vol^2 / 2 + vol * X), X standard normal. The default unit
    volatility is the zero-rate, unit-variance normalization of the model.
    """

    def __init__(self, spot, vol=1.):
        if spot <= 0 or vol <= 0:
            raise InvalidInputError('lognormal marginals need spot > 0 and vol > 0')
        self.spot = float(spot)
        self.vol = float(vol)
        self.loc = math.log(self.spot) - 0.5 * self.vol ** 2

    def cdf(self, x):
        x = torch.as_tensor(x, dtype=DTYPE)
        z = (torch.log(x.clamp(min=1e-300)) - self.loc) / self.vol
        return torch.where(x > 0, torch.special.ndtr(z), torch.zeros_like(x))

    def quantile(self, p):
        p = torch.as_tensor(p, dtype=DTYPE)
        return torch.exp(self.loc + self.vol * torch.special.ndtri(p))

    def __repr__(self):
        return 'LogNormalMarginal(spot={}, vol={})'.format(self.spot, self.vol)


class UniformMarginal(MarginalDistribution):
    def __init__(self, a=0., b=1.):
        if not 0 <= a < b:
            raise InvalidInputError('uniform marginals need 0 <= a < b')
        self.a, self.b = float(a), float(b)
        self.knots = (self.a, self.b)

    def cdf(self, x):
        x = torch.as_tensor(x, dtype=DTYPE)
        return ((x - self.a) / (self.b - self.a)).clamp(0., 1.)

    def quantile(self, p):
        p = torch.as_tensor(p, dtype=DTYPE)
        return self.a + p.clamp(0., 1.) * (self.b - self.a)

    def __repr__(self):
        return 'UniformMarginal(a={}, b={})'.format(self.a, self.b)


class PiecewiseUniformMarginal(MarginalDistribution):
    r"""
    Mass `probs[j]` spread uniformly on [knots[j], knots[j+1]]: the CDF is
    piecewise linear through the knots.
    """

    def __init__(self, knots, probs):
        knots = torch.as_tensor(knots, dtype=DTYPE)
        probs = torch.as_tensor(probs, dtype=DTYPE)
        if knots.dim() != 1 or len(knots) != len(probs) + 1:
            raise InvalidInputError('need one more knot than pieces')
        if (knots[0] < 0) or (knots.diff() <= 0).any():
            raise InvalidInputError('knots must be nonnegative and increasing')
        if (probs < 0).any() or abs(float(probs.sum()) - 1.) > 1e-12:
            raise InvalidInputError('piece probabilities must be a distribution')
        self._knots = knots
        self.probs = probs
        self.cum = torch.cat([probs.new_zeros(1), probs.cumsum(0)])
        self.cum[-1] = 1.
        self.knots = tuple(knots.tolist())

    def cdf(self, x):
        x = torch.as_tensor(x, dtype=DTYPE)
        n = len(self.probs)
        j = (torch.searchsorted(self._knots, x.reshape(-1), right=True) - 1) \
            .clamp(0, n - 1).reshape(x.shape)
        left, right = self._knots[j], self._knots[j + 1]
        frac = ((x - left) / (right - left)).clamp(0., 1.)
        return (self.cum[j] + frac * self.probs[j]).clamp(0., 1.)

    def quantile(self, p):
        p = torch.as_tensor(p, dtype=DTYPE)
        n = len(self.probs)
        j = torch.searchsorted(self.cum[1:], p.reshape(-1)).clamp(0, n - 1) \
            .reshape(p.shape)
        width = self._knots[j + 1] - self._knots[j]
        mass = self.probs[j]
        frac = torch.where(mass > 0, (p - self.cum[j]) / mass.clamp(min=1e-300),
                           torch.zeros_like(p)).clamp(0., 1.)
        return self._knots[j] + frac * width

    def __repr__(self):
        return 'PiecewiseUniformMarginal(knots={})'.format(self.knots)


def marginal_cdfs(marginals, x):
    r"""
    (F_1(x), ..., F_d(x)) stacked on the last axis.
    """
    x = torch.as_tensor(x, dtype=DTYPE)
    return torch.stack([m.cdf(x) for m in marginals], dim=-1)


def strike_grid(marginal, q_min=0.01, q_max=0.99, count=21):
    r"""
    `count` strikes equally spaced between two quantiles of `marginal`.
    """
    if count < 2 or not 0 < q_min < q_max < 1:
        raise InvalidInputError('bad strike grid specification')
    lo = float(marginal.quantile(torch.tensor(q_min, dtype=DTYPE)))
    hi = float(marginal.quantile(torch.tensor(q_max, dtype=DTYPE)))
    return torch.linspace(lo, hi, count, dtype=DTYPE).tolist()
