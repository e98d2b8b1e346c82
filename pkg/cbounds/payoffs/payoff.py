r"""
Measure-inducing payoffs: the six diagonal payoffs on minima and maxima,
two-asset baskets and spreads, and caller-specified generic payoffs.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from .measures import Measure, PointMass, CurveMeasure
from ..errors import InvalidInputError, ParseError
from ..utils import subsets


TONICITIES = ('monotonic', 'antitonic', 'negated-monotonic',
              'negated-antitonic', 'none')

DIAGONAL_KINDS = {
    'digital-put-on-max': 'antitonic',
    'digital-call-on-min': 'monotonic',
    'call-on-min': 'monotonic',
    'put-on-min': 'negated-monotonic',
    'call-on-max': 'negated-antitonic',
    'put-on-max': 'antitonic',
}


def order_of(tonicity):
    r"""
    The orthant order a tonicity tag makes pi_f monotone in.
    """
    if tonicity in ('antitonic', 'negated-antitonic'):
        return 'LO'
    if tonicity in ('monotonic', 'negated-monotonic'):
        return 'UO'
    return None


def _diagonal_payoff(kind, strike):
    def fn(x):
        lo, hi = x.min(-1).values, x.max(-1).values
        if kind == 'digital-put-on-max':
            return (hi <= strike).to(x.dtype)
        if kind == 'digital-call-on-min':
            return (lo >= strike).to(x.dtype)
        if kind == 'call-on-min':
            return (lo - strike).clamp(min=0)
        if kind == 'put-on-min':
            return (strike - lo).clamp(min=0)
        if kind == 'call-on-max':
            return (hi - strike).clamp(min=0)
        return (strike - hi).clamp(min=0)
    return fn


def _diagonal_measures(kind, dim, strike):
    r"""
    mu_{f_I} of the diagonal payoffs, all concentrated on the main diagonal,
    together with f(0, ..., 0).
    """
    full = tuple(range(dim))
    measures = {}
    if kind == 'digital-put-on-max':
        for index in subsets(full, nonempty=True):
            measures[index] = PointMass((strike,) * len(index), (-1) ** len(index))
        return measures, 1.
    if kind == 'digital-call-on-min':
        measures[full] = PointMass((strike,) * dim, 1.)
        return measures, 0.
    if kind == 'call-on-min':
        measures[full] = CurveMeasure(strike, math.inf, 1.)
        return measures, 0.
    if kind == 'put-on-min':
        measures[full] = CurveMeasure(0., strike, -1.)
        return measures, strike
    if kind == 'call-on-max':
        for index in subsets(full, nonempty=True):
            measures[index] = CurveMeasure(strike, math.inf, (-1) ** (len(index) + 1))
        return measures, 0.
    for index in subsets(full, nonempty=True):
        measures[index] = CurveMeasure(0., strike, (-1) ** len(index))
    return measures, strike


@dataclass(frozen=True)
class PayoffDescriptor:
    r"""
    A payoff f on R_+^d together with its marginal measures mu_{f_I}, keyed by
    sorted 0-based index tuples, and the value f(0, ..., 0). `payoff` is the
    vectorized f, used by Monte Carlo and integrability checks.
    """

    kind: str
    dim: int
    strike: float = 0.
    tonicity: str = 'none'
    measures: Dict[Tuple[int, ...], Measure] = field(default_factory=dict)
    origin_value: float = 0.
    payoff: Optional[Callable] = None

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidInputError('payoffs need dimension >= 2')
        if self.strike < 0 or not math.isfinite(self.strike):
            raise InvalidInputError('strike must be finite and nonnegative')
        if self.tonicity not in TONICITIES:
            raise InvalidInputError('unknown tonicity {}'.format(self.tonicity))
        if self.kind in DIAGONAL_KINDS:
            if self.tonicity != DIAGONAL_KINDS[self.kind]:
                raise InvalidInputError('tonicity of {} is {}'.format(
                    self.kind, DIAGONAL_KINDS[self.kind]))
        elif self.kind != 'generic':
            raise InvalidInputError('unknown payoff kind {}'.format(self.kind))
        for index in self.measures:
            if not index or tuple(sorted(set(index))) != tuple(index) or \
                    index[-1] >= self.dim or index[0] < 0:
                raise InvalidInputError('bad measure subset {}'.format(index))

    @property
    def order(self):
        return order_of(self.tonicity)

    @property
    def negated(self):
        return self.tonicity.startswith('negated')

    def __call__(self, x):
        if self.payoff is None:
            raise InvalidInputError('payoff {} has no pointwise form'.format(self.kind))
        return self.payoff(x)

    def restricted(self, index):
        r"""
        f_I: the payoff with coordinates outside I set to zero, as a function
        of the I coordinates.
        """
        def fn(x_index):
            x = x_index.new_zeros(x_index.shape[:-1] + (self.dim,))
            x[..., list(index)] = x_index
            return self(x)
        return fn

    def __str__(self):
        return '{}:{}'.format(self.kind, self.strike)


def diagonal_payoff(kind, dim, strike):
    if kind not in DIAGONAL_KINDS:
        raise InvalidInputError('unknown payoff kind {}'.format(kind))
    if strike < 0:
        raise InvalidInputError('strike must be nonnegative')
    strike = float(strike)
    measures, origin = _diagonal_measures(kind, dim, strike)
    return PayoffDescriptor(kind, dim, strike, DIAGONAL_KINDS[kind], measures,
                            float(origin), _diagonal_payoff(kind, strike))


def generic_payoff(dim, measures, origin_value, tonicity, payoff=None):
    return PayoffDescriptor('generic', dim, 0., tonicity, dict(measures),
                            float(origin_value), payoff)


def basket_payoff(weights, strike):
    r"""
    (w_1 x_1 + w_2 x_2 - K)^+ with positive weights. Baskets of three or more
    assets are neither Delta-monotonic nor Delta-antitonic in general and are
    refused.
    """
    if len(weights) != 2:
        raise InvalidInputError(
            'basket options on {} assets are neither Delta-monotonic nor '
            'Delta-antitonic; only two-asset baskets are supported'.format(len(weights)))
    a, b = (float(w) for w in weights)
    if a <= 0 or b <= 0 or strike < 0:
        raise InvalidInputError('basket weights must be positive, strike nonnegative')
    k = float(strike)
    measures = {
        (0,): CurveMeasure(k / a, math.inf, a),
        (1,): CurveMeasure(k / b, math.inf, b),
        (0, 1): CurveMeasure(0., k / a, a, path=lambda t: (t, (k - a * t) / b)),
    }

    def fn(x):
        return (a * x[..., 0] + b * x[..., 1] - k).clamp(min=0)
    return PayoffDescriptor('generic', 2, k, 'monotonic', measures, 0., fn)


def spread_payoff(weights, strike):
    r"""
    (w_1 x_1 - w_2 x_2 - K)^+. Its negation is Delta-antitonic; with two assets
    both orthant orders coincide, so pi_f decreases in either.
    """
    if len(weights) != 2:
        raise InvalidInputError('spread options take exactly two assets')
    a, b = (float(w) for w in weights)
    if a <= 0 or b <= 0 or strike < 0:
        raise InvalidInputError('spread weights must be positive, strike nonnegative')
    k = float(strike)
    measures = {
        (0,): CurveMeasure(k / a, math.inf, a),
        (0, 1): CurveMeasure(k / a, math.inf, -a, path=lambda t: (t, (a * t - k) / b)),
    }

    def fn(x):
        return (a * x[..., 0] - b * x[..., 1] - k).clamp(min=0)
    return PayoffDescriptor('generic', 2, k, 'negated-antitonic', measures, 0., fn)


def parse_payoff(text, dim, strike=None):
    r"""
    Parse the `kind:K` text form; `strike` overrides or supplies K.
    """
    kind, _, value = text.strip().partition(':')
    if strike is None:
        if not value:
            raise ParseError('payoff {} lacks a strike'.format(text))
        try:
            strike = float(value)
        except ValueError:
            raise ParseError('bad strike in payoff {}'.format(text))
    if kind not in DIAGONAL_KINDS:
        raise ParseError('unknown payoff kind {}'.format(kind))
    return diagonal_payoff(kind, dim, strike)
