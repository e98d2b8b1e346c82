r"""
Price bounds from market quotes: quotes become prescriptions, prescriptions
become improved bounds, and bounds are priced with the quasi-expectation
operator next to the Frechet-Hoeffding envelope.
"""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import torch

from .bounds import (Prescription, FunctionalPrescription, LowerSubsetBound,
                     UpperSubsetBound, SurvivalSubsetBound, envelope_functions)
from .errors import (InvalidInputError, InvalidPrescriptionError,
                     InconsistentQuotesError, UnsupportedPayoffOrderError,
                     IntegrabilityError)
from .market import mc_benchmark_price
from .payoffs import (IntegrationConfig, price_with_error, check_integrability,
                      marginal_cdfs)
from .utils import DTYPE, get_num_threads


logger = logging.getLogger(__name__)

SHARP_KINDS = ('call-on-min', 'digital-call-on-min')
TRACK_TOL = 1e-9


@dataclass(frozen=True)
class PriceBounds:
    r"""
    Improved and standard price bounds of one payoff. `error` is the largest
    quadrature error estimate of the four prices.
    """

    strike: float
    std_lower: float
    imp_lower: float
    imp_upper: float
    std_upper: float
    benchmark: Optional[float] = None
    stderr: Optional[float] = None
    sharp: bool = False
    error: float = 0.

    def nested(self, tol=1e-8):
        return (self.std_lower <= self.imp_lower + self.error + tol and
                self.imp_lower <= self.imp_upper + self.error + tol and
                self.imp_upper <= self.std_upper + self.error + tol)

    def brackets_benchmark(self, sigmas=3.):
        if self.benchmark is None:
            return True
        slack = sigmas * self.stderr + self.error
        return self.imp_lower - slack <= self.benchmark <= self.imp_upper + slack

    def to_row(self):
        return [self.strike, self.std_lower, self.imp_lower, self.imp_upper,
                self.std_upper,
                '' if self.benchmark is None else self.benchmark,
                '' if self.stderr is None else self.stderr,
                int(self.sharp)]


class TrackDescriptor(object):
    r"""
    The increasing track x -> (F_1(x), ..., F_d(x)) of the marginals.
    """

    def __init__(self, marginals):
        self.marginals = list(marginals)

    def __call__(self, x):
        return marginal_cdfs(self.marginals, x)

    def is_continuous(self, lower, upper, samples=1001, tol=TRACK_TOL, depth=48):
        r"""
        Sample every F_i on [lower, upper] and refine each rise above `tol`
        by bisection; a rise that survives the refinement is a jump.
        """
        xs = torch.linspace(lower, upper, samples, dtype=DTYPE)
        for m in self.marginals:
            values = m.cdf(xs)
            for j in (values.diff() > tol).nonzero().flatten().tolist():
                a, b = float(xs[j]), float(xs[j + 1])
                for _ in range(depth):
                    mid = 0.5 * (a + b)
                    f_a, f_mid, f_b = (float(m.cdf(torch.tensor(t, dtype=DTYPE)))
                                       for t in (a, mid, b))
                    if f_mid - f_a >= f_b - f_mid:
                        b = mid
                    else:
                        a = mid
                if float(m.cdf(torch.tensor(b, dtype=DTYPE))) - \
                        float(m.cdf(torch.tensor(a, dtype=DTYPE))) > tol:
                    logger.debug('%r jumps near %g', m, a)
                    return False
        return True

    def on_track(self, point, tol=TRACK_TOL):
        r"""
        Whether `point` lies on the track: invert the first coordinate and
        compare the others.
        """
        point = torch.as_tensor(point, dtype=DTYPE)
        x = self.marginals[0].quantile(point[0])
        return bool(((self(x) - point).abs() <= tol).all())


def sharpness_flag(prescription: Prescription, f, marginals, tol=TRACK_TOL):
    r"""
    True when f is a call or digital call on the minimum and every point of
    the survival prescription lies on the marginal track; the survival price
    bounds are then sharp. Advisory for the digital call.
    """
    if prescription.side != 'survival-scale' or f.kind not in SHARP_KINDS:
        return False
    track = TrackDescriptor(marginals)
    flag = all(track.on_track(x, tol) for x in prescription.points)
    if flag and f.kind == 'digital-call-on-min':
        warnings.warn('sharpness of digital-call-on-min bounds is advisory')
    return flag


def _check_quotes(quotes, kind, dim):
    for q in quotes:
        if q.kind != kind:
            raise InvalidInputError('expected {} quotes, got {}'.format(kind, q.kind))
        if max(q.indices) >= dim:
            raise InvalidInputError('quote on asset {} of a {}-asset market'
                                    .format(max(q.indices), dim))


def _prescription(dim, points, values, side, repair):
    try:
        if repair:
            return Prescription.repaired(dim, points, values, side)
        return Prescription(dim, tuple(points), tuple(values), side)
    except InvalidPrescriptionError as e:
        raise InconsistentQuotesError('quotes admit arbitrage: {}'.format(e)) from e


def pairwise_prescription(quotes, marginals, repair=False):
    r"""
    Copula-scale prescription of pairwise digitals on the maximum: the quote
    of (i, j) at K fixes C at F_i(K), F_j(K) and ones elsewhere.
    """
    dim = len(marginals)
    _check_quotes(quotes, 'pairwise-digital-max', dim)
    points, values = [], []
    for q in quotes:
        point = [1.] * dim
        for i in q.indices:
            point[i] = float(marginals[i].cdf(torch.tensor(q.strike, dtype=DTYPE)))
        points.append(tuple(point))
        values.append(q.price)
    return _prescription(dim, points, values, 'copula-scale', repair)


def min_digital_prescription(quotes, marginals, repair=False):
    r"""
    Survival-scale prescription of digital calls on the minimum: the quote at
    K fixes the survival function at (F_1(K), ..., F_d(K)).
    """
    dim = len(marginals)
    _check_quotes(quotes, 'basket-digital-min', dim)
    points, values = [], []
    for q in quotes:
        if tuple(sorted(q.indices)) != tuple(range(dim)):
            raise InvalidInputError('minimum digitals must cover every asset')
        point = marginal_cdfs(marginals, torch.tensor(q.strike, dtype=DTYPE))
        points.append(tuple(point.tolist()))
        values.append(q.price)
    return _prescription(dim, points, values, 'survival-scale', repair)


class PricingPipeline(object):
    r"""
    The four functions priced for one prescription, ordered from the lower
    envelope to the upper one: copula-scale (W, lower, upper, M) for payoffs
    monotone in the lower orthant order, survival-scale
    (W(1 - .), lower, upper, M(1 - .)) for the upper orthant order.
    """

    def __init__(self, prescription: Prescription, marginals, cfg=None):
        self.prescription = prescription
        self.marginals = list(marginals)
        self.cfg = cfg or IntegrationConfig()
        dim = prescription.dim
        if len(self.marginals) != dim:
            raise InvalidInputError('{} marginals for a {}-dimensional prescription'
                                    .format(len(self.marginals), dim))
        w, m = envelope_functions(dim, prescription.side)
        if prescription.side == 'survival-scale':
            self.order = 'UO'
            lower = SurvivalSubsetBound(prescription, 'lower')
            upper = SurvivalSubsetBound(prescription, 'upper')
        else:
            self.order = 'LO'
            lower = LowerSubsetBound(prescription)
            upper = UpperSubsetBound(prescription)
        self.functions = (w, lower, upper, m)

    def check_payoff(self, f):
        if f.order != self.order:
            raise UnsupportedPayoffOrderError(
                '{} payoffs are not monotone in the {} order'.format(f.tonicity, self.order))
        report = check_integrability(f, self.marginals, self.cfg)
        if not report:
            raise IntegrabilityError('payoff {} is not integrable on subset {} '
                                     'against marginal {}: {}'.format(
                                         f, report.subset, report.index, report.detail))

    def price(self, f, model=None, n_paths=0, seed=0, checked=False):
        if not checked:
            self.check_payoff(f)
        results = [price_with_error(f, q, self.marginals, self.cfg)
                   for q in self.functions]
        prices = [p for p, _ in results]
        error = max(e for _, e in results)
        if f.negated:
            prices.reverse()
        benchmark = stderr = None
        if model is not None and n_paths:
            benchmark, stderr = mc_benchmark_price(f, model, n_paths, seed)
        sharp = sharpness_flag(self.prescription, f, self.marginals)
        bounds = PriceBounds(f.strike, *prices, benchmark, stderr, sharp, error)
        logger.debug('%s: [%.10g, %.10g] within [%.10g, %.10g]', f,
                     bounds.imp_lower, bounds.imp_upper, bounds.std_lower,
                     bounds.std_upper)
        return bounds

    def sweep(self, make_payoff, strikes, model=None, n_paths=0, seed=0):
        r"""
        Price `make_payoff(K)` for every strike on a worker pool; results come
        back in strike order.
        """
        payoffs = [make_payoff(k) for k in strikes]
        for f in payoffs:
            self.check_payoff(f)
        with ThreadPoolExecutor(get_num_threads()) as pool:
            return list(pool.map(
                lambda f: self.price(f, model, n_paths, seed, checked=True), payoffs))


def bounds_from_pairwise_quotes(quotes, marginals, f, cfg=None, repair=False,
                                model=None, n_paths=0, seed=0):
    r"""
    Price bounds of a payoff monotone in the lower orthant order, given
    pairwise digital quotes on the maximum.
    """
    if f.order != 'LO':
        raise UnsupportedPayoffOrderError(
            'pairwise quotes bound lower-orthant payoffs, got {}'.format(f.tonicity))
    pipeline = PricingPipeline(pairwise_prescription(quotes, marginals, repair),
                               marginals, cfg)
    return pipeline.price(f, model, n_paths, seed)


def bounds_from_min_digital_quotes(quotes, marginals, f, cfg=None, repair=False,
                                   model=None, n_paths=0, seed=0):
    r"""
    Price bounds of a payoff monotone in the upper orthant order, given
    digital calls on the minimum of all assets.
    """
    if f.order != 'UO':
        raise UnsupportedPayoffOrderError(
            'minimum digitals bound upper-orthant payoffs, got {}'.format(f.tonicity))
    pipeline = PricingPipeline(min_digital_prescription(quotes, marginals, repair),
                               marginals, cfg)
    return pipeline.price(f, model, n_paths, seed)


def standard_price_envelope(f, marginals, cfg=None):
    r"""
    (lower, upper) prices over all dependence structures as bounded by the
    Frechet-Hoeffding envelope. The upper end is attained by the comonotone
    copula; the lower end is attained only for two assets, as W_d is no
    copula beyond that.
    """
    order = f.order
    if order is None:
        raise UnsupportedPayoffOrderError('payoff {} has no orthant tonicity'.format(f))
    side = 'copula-scale' if order == 'LO' else 'survival-scale'
    w, m = envelope_functions(f.dim, side)
    lower = price_with_error(f, w, marginals, cfg)[0]
    upper = price_with_error(f, m, marginals, cfg)[0]
    if f.negated:
        lower, upper = upper, lower
    if f.dim > 2:
        logger.debug('%s: the W-side envelope value %.10g is not attained for d=%d',
                     f, lower if not f.negated else upper, f.dim)
    return lower, upper


def functional_from_quote(f, price, marginals, cfg=None):
    r"""
    Turn the price of a two-asset basket or spread into a functional
    prescription on 2-copulas: rho(C) = pi_f(C), negated for spreads, so that
    rho increases in the orthant order.
    """
    if f.dim != 2 or f.order is None:
        raise UnsupportedPayoffOrderError(
            'only two-asset payoffs with an orthant tonicity yield functionals')
    sign = -1. if f.negated else 1.

    def rho(q):
        return sign * price_with_error(f, q, marginals, cfg)[0]
    return FunctionalPrescription(rho, sign * float(price), 2)
