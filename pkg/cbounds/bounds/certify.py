r"""
Certificates that an improved bound is a proper quasi-copula: a box of
negative volume under the bound built on a gap-box set.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import torch

from .prescription import GapBoxSet, Prescription
from .subset import LowerSubsetBound, UpperSubsetBound
from ..core import Box
from ..dependence import BaseDependence
from ..errors import InvalidInputError
from ..utils import DTYPE, DEFAULT_TOL, WITNESS_MARGIN


logger = logging.getLogger(__name__)

# agreement required between measured and closed-form witness volume
_VOLUME_TOL = 1e-12
_LATTICE = 17


class GapBoxBound(BaseDependence):
    r"""
    The improved bound of a quasi-copula `base` prescribed on a gap-box set,
    evaluated exactly. Along each coordinate x_i -> base(x) -/+ (x_i - u_i)^+
    peaks at x_i = u_i, so the extremum over the set is attained at u_i
    itself or, inside a gap, at one of the two gap edges.
    """

    kind = 'quasi-copula'

    def __init__(self, base, gaps: GapBoxSet, which='lower'):
        if which not in ('lower', 'upper'):
            raise InvalidInputError('which must be lower or upper')
        if base.dim != gaps.dim:
            raise InvalidInputError('base and gap set dimensions differ')
        super().__init__(base.dim)
        self.base = base
        self.gaps = gaps
        self.which = which
        self.register_buffer('s', torch.tensor(gaps.s, dtype=DTYPE))
        self.register_buffer('top', torch.tensor(gaps.top, dtype=DTYPE))
        self._picks = list(itertools.product((0, 1), repeat=3))

    def forward(self, u):
        index = list(self.gaps.index)
        v = u[..., index]
        inside = (v > self.s) & (v < self.top)
        edges = (torch.where(inside, self.s, v), torch.where(inside, self.top, v))
        best = None
        for pick in self._picks:
            x = u.clone()
            x[..., index] = torch.stack(
                [edges[p][..., i] for i, p in enumerate(pick)], dim=-1)
            if self.which == 'lower':
                val = self.base(x) - (x - u).clamp(min=0).sum(-1)
                best = val if best is None else torch.maximum(best, val)
            else:
                val = self.base(x) + (u - x).clamp(min=0).sum(-1)
                best = val if best is None else torch.minimum(best, val)
        if self.which == 'lower':
            return torch.maximum(best, (u.sum(-1) - self.dim + 1).clamp(min=0))
        return torch.minimum(best, u.min(-1).values)


@dataclass(frozen=True)
class Certificate:
    gaps: GapBoxSet
    which: str
    u: Tuple[float, float, float]
    box: Box
    volume: float
    closed_form: float

    def header(self):
        dim = len(self.box.lower)
        return (['s{}'.format(i) for i in range(1, 4)] +
                ['eps{}'.format(i) for i in range(1, 4)] +
                ['u{}'.format(i) for i in range(1, 4)] +
                ['lower{}'.format(i) for i in range(1, dim + 1)] +
                ['upper{}'.format(i) for i in range(1, dim + 1)] + ['volume'])

    def to_row(self):
        return (list(self.gaps.s) + list(self.gaps.eps) + list(self.u) +
                list(self.box.lower) + list(self.box.upper) + [self.volume])


def embedding_base(prescription: Prescription, which='lower'):
    r"""
    The quasi-copula Q* of an embedding: the lower (upper) subset bound of
    the prescription, which the gap-box bound then reproduces on the set.
    """
    if which == 'lower':
        return LowerSubsetBound(prescription)
    return UpperSubsetBound(prescription)


class _Witness(object):
    def __init__(self, gaps, which, delta):
        self.gaps = gaps
        self.which = which
        self.delta = delta
        self.eps = torch.tensor(gaps.eps, dtype=DTYPE)
        self.s = torch.tensor(gaps.s, dtype=DTYPE)
        self.pairs = [list(p) for p in itertools.combinations(range(3), 2)]

    def lengths(self, u):
        # side lengths of the witness box in the gap coordinates
        if self.which == 'lower':
            return self.s + self.eps - u
        return u - self.s

    def feasible(self, u, margin=WITNESS_MARGIN):
        a = self.lengths(u)
        ok = (a.sum(-1) > self.delta + margin) & (a > margin).all(-1) & \
            (self.eps - a > margin).all(-1)
        for p in self.pairs:
            ok &= a[..., p].sum(-1) < self.delta - margin
        return ok

    def closed_form(self, u):
        return self.delta - self.lengths(u).sum(-1)

    def box(self, u):
        if self.which == 'lower':
            lo, hi = u, self.s + self.eps
        else:
            lo, hi = self.s, u
        lo, hi = torch.broadcast_tensors(lo, hi)
        return self.gaps.lift(lo, 0.), self.gaps.lift(hi, 1.)

    def at(self, t):
        return self.s + t * self.eps

    def diagonal(self):
        r"""
        t in (0, 1) with u = s + t eps: bisect for the two edges of the
        feasible t-interval, then take the point of the coarsest decimal
        lattice inside it nearest to its middle.
        """
        def ok(t):
            return bool(self.feasible(self.at(t)))

        # the sum condition holds on one side of the interval, pairs on the other
        def sum_ok(t):
            a = self.lengths(self.at(t))
            return float(a.sum()) > self.delta + WITNESS_MARGIN

        def pair_ok(t):
            a = self.lengths(self.at(t))
            return max(float(a[p].sum()) for p in self.pairs) \
                < self.delta - WITNESS_MARGIN

        shrinking = self.which == 'lower'
        t_sum = _edge(sum_ok, shrinking)
        t_pair = _edge(pair_ok, not shrinking)
        lo, hi = (t_pair, t_sum) if shrinking else (t_sum, t_pair)
        if lo is None or hi is None or lo >= hi:
            return None
        mid = 0.5 * (lo + hi)
        for digits in range(1, 10):
            scale = 10 ** digits
            grid = [k / scale for k in range(int(lo * scale), int(hi * scale) + 2)]
            grid = [t for t in grid if lo < t < hi and ok(t)]
            if grid:
                return min(grid, key=lambda t: (abs(t - mid), t))
        return mid if ok(mid) else None

    def lattice(self):
        steps = torch.arange(1, _LATTICE + 1, dtype=DTYPE) / (_LATTICE + 1)
        mesh = torch.stack(torch.meshgrid(steps, steps, steps, indexing='ij'), -1)
        u = self.s + mesh.reshape(-1, 3) * self.eps
        return u[self.feasible(u)]


def _edge(pred, holds_below, tol=1e-13):
    r"""
    Edge in (0, 1) of a predicate that holds exactly on one side of it:
    below the edge when `holds_below`, above it otherwise.
    """
    lo, hi = 0., 1.
    if holds_below:
        if not pred(lo):
            return None
        if pred(hi):
            return hi
    else:
        if not pred(hi):
            return None
        if pred(lo):
            return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == holds_below:
            lo = mid
        else:
            hi = mid
    return lo if holds_below else hi


def _conditions(base, gaps, which, tol):
    s = gaps.lift(gaps.s)
    top = gaps.lift(gaps.top)
    c_lo, c_hi = float(base(s)), float(base(top))
    delta = c_hi - c_lo
    if not sum(gaps.eps) - delta > tol or not delta > tol:
        return None
    if which == 'lower':
        w_top = max(sum(gaps.top) - 2., 0.)
        if c_lo < w_top - tol:
            return None
    elif c_hi > min(gaps.s) + tol:
        return None
    return delta


def certify_proper_quasi_copula(gaps: GapBoxSet, base, which='lower',
                                tol=DEFAULT_TOL) -> Optional[Certificate]:
    r"""
    Look for a box of negative volume under the improved bound of `base`
    on the gap-box set. `base` is a quasi-copula, or a Prescription whose
    subset bound is embedded. Returns None when the sufficient conditions
    fail or no witness reproduces the closed-form volume.
    """
    if which not in ('lower', 'upper'):
        raise InvalidInputError('which must be lower or upper')
    if not isinstance(gaps, GapBoxSet):
        raise InvalidInputError('certification needs a GapBoxSet')
    if isinstance(base, Prescription):
        base = embedding_base(base, which)
    if base.dim != gaps.dim:
        raise InvalidInputError('base and gap set dimensions differ')
    if base.kind not in ('copula', 'quasi-copula'):
        raise InvalidInputError(
            'certification needs a (quasi-)copula, got {}'.format(base.kind))

    with torch.no_grad():
        delta = _conditions(base, gaps, which, tol)
        if delta is None:
            logger.debug('certifier conditions fail for %s', gaps)
            return None
        bound = GapBoxBound(base, gaps, which)
        witness = _Witness(gaps, which, delta)

        t = witness.diagonal()
        candidates = [witness.at(t).unsqueeze(0)] if t is not None else []
        candidates.append(witness.lattice())
        for u in candidates:
            if not len(u):
                continue
            lo, hi = witness.box(u)
            measured = bound.volume(lo, hi)
            closed = witness.closed_form(u)
            good = (measured < 0) & ((measured - closed).abs() <= _VOLUME_TOL)
            if good.any():
                i = int(good.nonzero()[0])
                logger.debug('witness at %s, volume %g', u[i].tolist(),
                             float(measured[i]))
                return Certificate(
                    gaps, which, tuple(u[i].tolist()),
                    Box(tuple(lo[i].tolist()), tuple(hi[i].tolist())),
                    float(measured[i]), float(closed[i]))
    logger.debug('no witness reproduces the closed-form volume for %s', gaps)
    return None
