r"""
Improved bounds under a prescribed value of a monotone functional
"""
import logging

from .prescription import Prescription, FunctionalPrescription
from .subset import LowerSubsetBound, UpperSubsetBound, SurvivalSubsetBound
from ..core import check_point
from ..errors import ContractViolationError, InvalidInputError
from ..utils import BISECT_TOL, BISECT_MAX_ITER, DEFAULT_TOL


logger = logging.getLogger(__name__)

# largest jump of r -> rho(bound) tolerated at the bisection limit
_CONTINUITY_TOL = 1e-6


def _bisect(g, lo, hi, theta, keep_lower, tol, max_iter):
    r"""
    Bisection for the edge of {r : g(r) <= theta} (keep_lower) or of
    {r : g(r) >= theta} on [lo, hi], with g increasing.
    """
    g_lo, g_hi = g(lo), g(hi)
    if g_lo > g_hi + DEFAULT_TOL:
        raise ContractViolationError(
            'functional decreases along the point bounds: {} > {}'.format(g_lo, g_hi))
    if keep_lower and g_hi <= theta:
        return hi
    if not keep_lower and g_lo >= theta:
        return lo
    it = 0
    for it in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid < g_lo - DEFAULT_TOL or g_mid > g_hi + DEFAULT_TOL:
            raise ContractViolationError(
                'functional is not monotone in the prescribed value near r={}'
                .format(mid))
        if (g_mid <= theta) if keep_lower else (g_mid < theta):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    else:
        raise ContractViolationError(
            'bisection did not converge within {} iterations'.format(max_iter))
    if g_hi - g_lo > _CONTINUITY_TOL:
        raise ContractViolationError(
            'functional jumps by {} at r={}'.format(g_hi - g_lo, lo))
    logger.debug('bisection stopped after %d iterations at [%g, %g]', it, lo, hi)
    return lo if keep_lower else hi


def _point_bounds(fp, u, r):
    point = Prescription(fp.dim, (tuple(u.tolist()),), (r,), fp.side)
    if fp.side == 'survival-scale':
        return (SurvivalSubsetBound(point, 'lower'),
                SurvivalSubsetBound(point, 'upper'))
    return LowerSubsetBound(point), UpperSubsetBound(point)


def _functional_bounds(fp, u, tol, max_iter):
    u = check_point(u, fp.dim)
    if u.dim() != 1:
        raise InvalidInputError('functional bounds are evaluated at one point')
    v = 1. - u if fp.side == 'survival-scale' else u
    w = max(float(v.sum()) - fp.dim + 1, 0.)
    m = float(v.min())
    theta = fp.theta
    rho_w, rho_m = fp.envelope()

    def g(r):
        return float(fp.rho(_point_bounds(fp, u, r)[0]))

    def h(r):
        return float(fp.rho(_point_bounds(fp, u, r)[1]))

    # largest r whose lower point bound is consistent with theta
    if rho_w - fp.tol <= theta <= g(m) + fp.tol:
        upper = _bisect(g, w, m, theta, True, tol, max_iter)
    else:
        upper = m
    # smallest r whose upper point bound is consistent with theta
    if h(w) - fp.tol <= theta <= rho_m + fp.tol:
        lower = _bisect(h, w, m, theta, False, tol, max_iter)
    else:
        lower = w
    return lower, upper


def functional_bounds(fp: FunctionalPrescription, u, tol=BISECT_TOL,
                      max_iter=BISECT_MAX_ITER):
    r"""
    (lower, upper) bounds at u on every quasi-copula Q with rho(Q) = theta.
    """
    if fp.side != 'copula-scale':
        raise InvalidInputError('use survival_functional_bounds for survival functionals')
    return _functional_bounds(fp, u, tol, max_iter)


def survival_functional_bounds(fp: FunctionalPrescription, u, tol=BISECT_TOL,
                               max_iter=BISECT_MAX_ITER):
    r"""
    (lower, upper) bounds at u on every quasi-survival function S with
    rho(S) = theta, rho increasing in the upper orthant order.
    """
    if fp.side != 'survival-scale':
        raise InvalidInputError('survival functional bounds need a survival-scale functional')
    return _functional_bounds(fp, u, tol, max_iter)
