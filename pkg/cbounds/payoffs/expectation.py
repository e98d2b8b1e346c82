r"""
The quasi-expectation operator pi_f and its companions: the phi-recursion,
the orthant-order dominance check and the integrability test.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import torch

from .marginals import marginal_cdfs
from .measures import Measure, PointMass, CurveMeasure, _quad
from .payoff import PayoffDescriptor, DIAGONAL_KINDS
from ..errors import (InvalidInputError, DimensionTooLargeError,
                      IntegrabilityError)
from ..utils import DTYPE, DEFAULT_TOL, DEFAULT_MAX_DIM, lattice, subsets


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegrationConfig:
    r"""
    Truncation and quadrature settings. Semi-infinite integrals stop at the
    largest marginal quantile of level 1 - q_trunc and are extended once to
    level 1 - q_trunc_escalated when the tail matters.
    """

    q_trunc: float = 1e-9
    q_trunc_escalated: float = 1e-12
    epsabs: float = 1e-8
    epsrel: float = 1e-6
    limit: int = 200

    def __post_init__(self):
        if not 0 < self.q_trunc < 1 or not 0 < self.q_trunc_escalated <= self.q_trunc:
            raise InvalidInputError('truncation levels must satisfy '
                                    '0 < q_trunc_escalated <= q_trunc < 1')
        if self.epsabs <= 0 or self.epsrel <= 0:
            raise InvalidInputError('quadrature tolerances must be positive')
        if self.limit < 1:
            raise InvalidInputError('subdivision limit must be positive')

    def halved(self):
        return IntegrationConfig(self.q_trunc, self.q_trunc_escalated,
                                 self.epsabs / 2, self.epsrel / 2, 2 * self.limit)


def _is_survival(q):
    return q.kind == 'quasi-survival'


def survival_terms(index, dim, survival, max_dim=DEFAULT_MAX_DIM):
    r"""
    Terms of the I-margin survival value Q^_I as (picks, fill, signs):
    Q^_I(v) = sum_n signs[n] * Q(u_n), where u_n carries v on the coordinates
    picked by picks[n] and `fill` elsewhere. Quasi-survival inputs need a
    single evaluation with zeros off I.
    """
    picks = torch.zeros((1, dim), dtype=torch.bool)
    if survival:
        picks[0, list(index)] = True
        return picks, 0., torch.ones(1, dtype=DTYPE)
    if len(index) > max_dim:
        raise DimensionTooLargeError(
            'survival expansion over {} coordinates exceeds the cap {}'
            .format(len(index), max_dim))
    rows, signs = [], []
    for sub in subsets(index):
        row = torch.zeros(dim, dtype=torch.bool)
        row[list(sub)] = True
        rows.append(row)
        signs.append((-1.) ** len(sub))
    return torch.stack(rows), 1., torch.tensor(signs, dtype=DTYPE)


def _evaluate_terms(q, v, picks, fill, coefs):
    r"""
    sum_n coefs[n] * Q(where(picks[n], v, fill)) for a full-length vector v.
    """
    points = torch.where(picks, v.unsqueeze(-2), torch.full_like(v, fill).unsqueeze(-2))
    return (q(points) * coefs).sum(-1)


def survival_margin(q, index, v, max_dim=DEFAULT_MAX_DIM):
    r"""
    Q^_I(v_I): the survival function of the I-margin of Q. `v` holds the
    coordinates of I only.
    """
    index = tuple(index)
    v = torch.as_tensor(v, dtype=DTYPE)
    full = v.new_zeros(v.shape[:-1] + (q.dim,))
    full[..., list(index)] = v
    picks, fill, signs = survival_terms(index, q.dim, _is_survival(q), max_dim)
    return _evaluate_terms(q, full, picks, fill, signs)


class _Integrator(object):
    r"""
    Shared quadrature context of one (payoff, marginals, config) triple.
    """

    def __init__(self, f: PayoffDescriptor, marginals, cfg):
        if len(marginals) != f.dim:
            raise InvalidInputError('{} marginals for a {}-dimensional payoff'.format(
                len(marginals), f.dim))
        for index, measure in f.measures.items():
            if not isinstance(measure, Measure):
                raise InvalidInputError(
                    'measure for subset {} is not a Measure'.format(index))
        self.f = f
        self.marginals = list(marginals)
        self.cfg = cfg
        self.x_max = max(m.x_max(cfg.q_trunc) for m in marginals)
        self.x_max_escalated = max(m.x_max(cfg.q_trunc_escalated) for m in marginals)
        knots = {k for m in marginals for k in m.knots}
        if f.strike:
            knots.add(f.strike)
        self.points = tuple(sorted(knots))

    def cdfs(self, index, x):
        return torch.stack([self.marginals[i].cdf(x[..., k])
                            for k, i in enumerate(index)], dim=-1)

    def margin_integral(self, q, index):
        r"""
        A_I = integral of Q^_I(F_I(x)) against mu_{f_I}.
        """
        measure = self.f.measures.get(tuple(index))
        if measure is None:
            return 0., 0.

        def g(x):
            return survival_margin(q, index, self.cdfs(index, x))
        return measure.integrate(g, len(index), self.cfg, self.x_max,
                                 self.x_max_escalated, self.points)


def _diagonal_coefficients(f: PayoffDescriptor, survival):
    r"""
    Fold the diagonal payoff measures, which share one diagonal support, into a
    single integrand sum_J coef_J Q(F(x) on J, fill elsewhere).
    """
    dim = f.dim
    weights = {index: m.weight for index, m in f.measures.items()}
    if survival:
        picks, coefs = [], []
        for index, c in weights.items():
            row = torch.zeros(dim, dtype=torch.bool)
            row[list(index)] = True
            picks.append(row)
            coefs.append(c)
        return torch.stack(picks), 0., torch.tensor(coefs, dtype=DTYPE)
    picks, coefs = [], []
    for sub in subsets(range(dim)):
        total = sum(c for index, c in weights.items() if set(sub) <= set(index))
        if total == 0:
            continue
        row = torch.zeros(dim, dtype=torch.bool)
        row[list(sub)] = True
        picks.append(row)
        coefs.append((-1.) ** len(sub) * total)
    return torch.stack(picks), 1., torch.tensor(coefs, dtype=DTYPE)


def _diagonal_price(q, f, ctx):
    survival = _is_survival(q)
    if not survival and f.dim > DEFAULT_MAX_DIM:
        raise DimensionTooLargeError(
            'survival expansion over {} coordinates exceeds the cap {}'
            .format(f.dim, DEFAULT_MAX_DIM))
    picks, fill, coefs = _diagonal_coefficients(f, survival)
    template = next(iter(f.measures.values()))

    def at(t):
        v = marginal_cdfs(ctx.marginals, torch.tensor(t, dtype=DTYPE))
        return float(_evaluate_terms(q, v, picks, fill, coefs))

    if isinstance(template, PointMass):
        return f.origin_value + at(template.point[0]), 0.
    assert isinstance(template, CurveMeasure) and template.diagonal, \
        'diagonal payoffs carry diagonal curve measures'
    # weights are folded into coefs, so integrate the bare curve
    bare = CurveMeasure(template.lower, template.upper, 1.)
    value, err = bare.weight_integral(at, ctx.cfg, ctx.x_max,
                                      ctx.x_max_escalated, ctx.points)
    return f.origin_value + value, err


def price_with_error(f: PayoffDescriptor, q, marginals, cfg=None) -> Tuple[float, float]:
    r"""
    pi_f(Q) together with an absolute quadrature error estimate.

    Copula-scale inputs enter through the survival functions of their
    margins; quasi-survival inputs are used as those survival functions
    directly. Diagonal payoffs are priced by one diagonal integral, generic
    payoffs by the sum over their measures, f(0) + sum_I A_I, which is what
    the phi-recursion reduces to on the full index set.
    """
    cfg = cfg or IntegrationConfig()
    if q.dim != f.dim:
        raise InvalidInputError('payoff and dependence function dimensions differ')
    ctx = _Integrator(f, marginals, cfg)
    with torch.no_grad():
        if f.kind in DIAGONAL_KINDS:
            value, err = _diagonal_price(q, f, ctx)
        else:
            value, err = f.origin_value, 0.
            for index in sorted(f.measures, key=lambda i: (len(i), i)):
                a, e = ctx.margin_integral(q, index)
                value, err = value + a, err + e
    if not math.isfinite(value):
        raise IntegrabilityError('price of {} is not finite'.format(f))
    logger.debug('pi_%s = %.12g (+- %.3g)', f, value, err)
    return value, err


def quasi_expectation(f: PayoffDescriptor, q, marginals, cfg=None) -> float:
    return price_with_error(f, q, marginals, cfg)[0]


def phi_recursion(f: PayoffDescriptor, q, marginals, index=None, cfg=None):
    r"""
    phi^I_f(Q): phi of the empty set is f(0), and
    phi^I = A_I + sum over J strictly inside I of (-1)^{|I|+1-|J|} phi^J.
    Intermediate values are memoized per subset.
    """
    cfg = cfg or IntegrationConfig()
    index = tuple(sorted(range(f.dim) if index is None else index))
    if not index or len(set(index)) != len(index) or \
            index[0] < 0 or index[-1] >= f.dim:
        raise InvalidInputError('bad index set {}'.format(index))
    ctx = _Integrator(f, marginals, cfg)
    memo = {(): f.origin_value}
    with torch.no_grad():
        for sub in subsets(index, nonempty=True):
            value = ctx.margin_integral(q, sub)[0]
            for inner in subsets(sub, proper=True):
                value += (-1) ** (len(sub) + 1 - len(inner)) * memo[inner]
            memo[sub] = value
    return memo[index]


@dataclass(frozen=True)
class DominanceReport:
    tonicity: str
    order: Optional[str]
    hypothesis: bool
    price_1: float
    price_2: float
    error: float

    @property
    def expected(self):
        return '>=' if self.tonicity.startswith('negated') else '<='

    @property
    def conclusion(self):
        slack = self.error
        if self.expected == '<=':
            return self.price_1 <= self.price_2 + slack
        return self.price_1 >= self.price_2 - slack

    @property
    def holds(self):
        return not self.hypothesis or self.conclusion

    def __str__(self):
        return '{}: {}-dominated={}, pi_1={:.10g} {} pi_2={:.10g}: {}'.format(
            self.tonicity, self.order, self.hypothesis, self.price_1,
            self.expected, self.price_2, 'holds' if self.conclusion else 'fails')


def _dominated(q1, q2, order, n, tol):
    nodes = lattice(q1.dim, n)
    if _is_survival(q1) != _is_survival(q2):
        raise InvalidInputError('cannot compare copula and survival scales')
    if _is_survival(q1):
        # survival functions only order in the upper orthant
        if order == 'LO':
            return False
        return bool((q1(nodes) <= q2(nodes) + tol).all())
    if order == 'LO':
        return bool((q1(nodes) <= q2(nodes) + tol).all())
    ones = torch.ones_like(nodes)
    return bool((q1.volume(nodes, ones) <= q2.volume(nodes, ones) + tol).all())


def dominance_check(f: PayoffDescriptor, q1, q2, marginals, cfg=None, n=8,
                    tol=DEFAULT_TOL) -> DominanceReport:
    r"""
    Check on a lattice whether Q1 is dominated by Q2 in the orthant order that
    governs f, and whether the prices follow: pi_f(Q1) <= pi_f(Q2), reversed
    for negated tonicities. The conclusion allows for the quadrature error.
    """
    cfg = cfg or IntegrationConfig()
    if q1.dim != q2.dim:
        raise InvalidInputError('cannot compare functions of different dimension')
    order = f.order
    with torch.no_grad():
        hypothesis = order is not None and _dominated(q1, q2, order, n, tol)
    p1, e1 = price_with_error(f, q1, marginals, cfg)
    p2, e2 = price_with_error(f, q2, marginals, cfg)
    error = e1 + e2 + cfg.epsabs + cfg.epsrel * max(abs(p1), abs(p2))
    return DominanceReport(f.tonicity, order, hypothesis, p1, p2, error)


@dataclass(frozen=True)
class IntegrabilityReport:
    ok: bool
    subset: Optional[Tuple[int, ...]] = None
    index: Optional[int] = None
    detail: str = ''

    def __bool__(self):
        return self.ok


def check_integrability(f: PayoffDescriptor, marginals, cfg=None) -> IntegrabilityReport:
    r"""
    Test that every x -> |f_J(x, ..., x)| is integrable against every F_i,
    i in J. The integral runs in probability space up to 1 - q_trunc; the
    stretch up to 1 - q_trunc_escalated must stay negligible.
    """
    cfg = cfg or IntegrationConfig()
    if len(marginals) != f.dim:
        raise InvalidInputError('{} marginals for a {}-dimensional payoff'.format(
            len(marginals), f.dim))
    if f.payoff is None:
        return IntegrabilityReport(True, detail='no pointwise form, not checked')
    body_end, tail_end = 1. - cfg.q_trunc, 1. - cfg.q_trunc_escalated
    for sub in subsets(range(f.dim), nonempty=True):
        for i in sub:
            def fn(p, sub=sub, i=i):
                x = float(marginals[i].quantile(torch.tensor(p, dtype=DTYPE)))
                point = torch.zeros(f.dim, dtype=DTYPE)
                point[list(sub)] = x
                return abs(float(f(point)))

            try:
                body, _ = _quad(fn, 0., body_end, cfg)
                tail, _ = _quad(fn, body_end, tail_end, cfg)
            except (IntegrabilityError, OverflowError) as e:
                return IntegrabilityReport(False, sub, i, str(e))
            if not math.isfinite(body) or not math.isfinite(tail):
                return IntegrabilityReport(False, sub, i, 'integral is not finite')
            if tail > max(cfg.epsabs, math.sqrt(cfg.epsrel) * abs(body)):
                return IntegrabilityReport(
                    False, sub, i,
                    'tail {:.3g} beyond truncation is not negligible'.format(tail))
    return IntegrabilityReport(True)
