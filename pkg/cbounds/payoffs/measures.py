r"""
Signed measures mu_{f_I} induced by payoffs on index subsets
"""
import logging
import math
import warnings

import torch
from scipy import integrate

from ..errors import IntegrabilityError, InvalidInputError
from ..utils import DTYPE


logger = logging.getLogger(__name__)


def _quad(fn, a, b, cfg, points=()):
    r"""
    Adaptive quadrature of a scalar function on [a, b], splitting at
    `points`. Returns (value, error estimate).
    """
    if b <= a:
        return 0., 0.
    inner = sorted({p for p in points if a < p < b})
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value, err = integrate.quad(
            fn, a, b, points=inner or None, epsabs=cfg.epsabs,
            epsrel=cfg.epsrel, limit=cfg.limit)
    if not math.isfinite(value):
        raise IntegrabilityError(
            'quadrature on [{}, {}] returned {}'.format(a, b, value))
    if err > max(cfg.epsabs, cfg.epsrel * abs(value)):
        logger.debug('quadrature on [%g, %g] error %g above tolerance', a, b, err)
    return value, err


class Measure(object):
    def integrate(self, g, size, cfg, x_max, x_max_escalated, points=()):
        r"""
        Integral of g against the measure. `g` maps a [k] tensor to a 0-d
        tensor; unbounded ranges are truncated at `x_max`, and extended to
        `x_max_escalated` when the tail estimate exceeds the tolerance.
        """
        raise NotImplementedError('Base measure cannot be directly integrated')


class PointMass(Measure):
    def __init__(self, point, weight=1.):
        self.point = tuple(float(c) for c in point)
        self.weight = float(weight)

    def integrate(self, g, size, cfg, x_max, x_max_escalated, points=()):
        value = float(g(torch.tensor(self.point, dtype=DTYPE)))
        return self.weight * value, 0.

    def __repr__(self):
        return 'PointMass({}, {})'.format(self.point, self.weight)


class CurveMeasure(Measure):
    r"""
    t -> density(t) dt carried by the curve t -> path(t), t in [lower, upper].
    The default path is the main diagonal (t, ..., t) of the subset.
    """

    def __init__(self, lower, upper, weight=1., path=None, density=None):
        if not lower <= upper:
            raise InvalidInputError('curve measure needs lower <= upper')
        self.lower = float(lower)
        self.upper = float(upper)
        self.weight = float(weight)
        self.path = path
        self.density = density

    @property
    def diagonal(self):
        return self.path is None and self.density is None

    def integrand(self, g, size):
        def fn(t):
            x = self.path(t) if self.path is not None else [t] * size
            value = float(g(torch.tensor(x, dtype=DTYPE)))
            if self.density is not None:
                value *= self.density(t)
            return value
        return fn

    def integrate(self, g, size, cfg, x_max, x_max_escalated, points=()):
        fn = self.integrand(g, size)
        return self.weight_integral(fn, cfg, x_max, x_max_escalated, points)

    def weight_integral(self, fn, cfg, x_max, x_max_escalated, points=()):
        upper = self.upper
        if math.isinf(upper):
            upper = max(x_max, self.lower)
        value, err = _quad(fn, self.lower, upper, cfg, points)
        if math.isinf(self.upper) and x_max_escalated > upper:
            # one escalation of the truncation point when the tail matters
            tail_estimate = abs(fn(upper)) * (x_max_escalated - upper)
            if not math.isfinite(tail_estimate):
                raise IntegrabilityError(
                    'integrand is not finite at the truncation point {}'.format(upper))
            if tail_estimate > cfg.epsabs:
                logger.debug('escalating truncation from %g to %g', upper,
                             x_max_escalated)
                tail, tail_err = _quad(fn, upper, x_max_escalated, cfg, points)
                value, err = value + tail, err + tail_err
        return self.weight * value, abs(self.weight) * err

    def __repr__(self):
        return 'CurveMeasure([{}, {}], {})'.format(self.lower, self.upper, self.weight)


class DensityMeasure(Measure):
    r"""
    An absolutely continuous measure with density on a box of R_+^k,
    integrated with nested adaptive quadrature.
    """

    def __init__(self, density, lower, upper, weight=1.):
        if len(lower) != len(upper):
            raise InvalidInputError('density box corners differ in dimension')
        self.density = density
        self.lower = tuple(float(a) for a in lower)
        self.upper = tuple(float(b) for b in upper)
        self.weight = float(weight)

    def integrate(self, g, size, cfg, x_max, x_max_escalated, points=()):
        ranges = [(a, b if math.isfinite(b) else max(x_max_escalated, a))
                  for a, b in zip(self.lower, self.upper)]

        def fn(*x):
            return float(g(torch.tensor(x, dtype=DTYPE))) * self.density(*x)

        with warnings.catch_warnings():
            warnings.simplefilter('ignore', integrate.IntegrationWarning)
            value, err = integrate.nquad(
                fn, ranges, opts={'epsabs': cfg.epsabs, 'epsrel': cfg.epsrel,
                                  'limit': cfg.limit})
        if not math.isfinite(value):
            raise IntegrabilityError('density integral returned {}'.format(value))
        return self.weight * value, abs(self.weight) * err
