r"""
Synthetic multi-asset Black-Scholes market: Gaussian orthant probabilities,
digital quote generation and a Monte Carlo benchmark pricer.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import torch
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from .errors import (InvalidInputError, InvalidStrikeError,
                     IllConditionedError)
from .payoffs import LogNormalMarginal
from .utils import DTYPE, get_num_threads


logger = logging.getLogger(__name__)

QUOTE_KINDS = ('pairwise-digital-max', 'basket-digital-min')

# smallest eigenvalue a correlation matrix may have before conditioning on a
# coordinate loses accuracy
EIGEN_FLOOR = 1e-10
MC_MIN_PATHS = 10 ** 4
MC_SHARD = 2 ** 18

# Gauss-Legendre rules on [0, 2] used by the bivariate integral, by the size
# of |rho|
_GL_RULES = {n: (1. + leggauss(n)[0], leggauss(n)[1]) for n in (6, 12, 20)}


def _bvnu(h, k, r):
    r"""
    P(X > h, Y > k) for a standard bivariate normal with correlation r,
    after Genz's algorithm with Drezner's high-correlation expansion.
    """
    if h == math.inf or k == math.inf:
        return 0.
    if h == -math.inf:
        return 1. if k == -math.inf else float(special.ndtr(-k))
    if k == -math.inf:
        return float(special.ndtr(-h))
    if r == 0:
        return float(special.ndtr(-h) * special.ndtr(-k))
    two_pi = 2. * math.pi
    hk = h * k
    if abs(r) < 0.3:
        x, w = _GL_RULES[6]
    elif abs(r) < 0.75:
        x, w = _GL_RULES[12]
    else:
        x, w = _GL_RULES[20]
    if abs(r) < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = 0.5 * math.asin(r)
        sn = np.sin(asr * x)
        bvn = float(np.exp((sn * hk - hs) / (1. - sn * sn)) @ w)
        return bvn * asr / two_pi + float(special.ndtr(-h) * special.ndtr(-k))
    if r < 0:
        k, hk = -k, -hk
    bvn = 0.
    if abs(r) < 1:
        a2 = 1. - r * r
        a = math.sqrt(a2)
        bs = (h - k) ** 2
        asr = -0.5 * (bs / a2 + hk)
        c = (4. - hk) / 8.
        d = (12. - hk) / 80.
        if asr > -100:
            bvn = a * math.exp(asr) * (1. - c * (bs - a2) * (1. - d * bs) / 3.
                                       + c * d * a2 * a2)
        if hk > -100:
            b = math.sqrt(bs)
            sp = math.sqrt(two_pi) * float(special.ndtr(-b / a))
            bvn -= math.exp(-0.5 * hk) * sp * b * (1. - c * bs * (1. - d * bs) / 3.)
        a *= 0.5
        xs = (a * x) ** 2
        asr = -0.5 * (bs / xs + hk)
        keep = asr > -100
        xs, asr, wk = xs[keep], asr[keep], w[keep]
        sp = 1. + c * xs * (1. + 5. * d * xs)
        rs = np.sqrt(1. - xs)
        ep = np.exp(-0.5 * hk * xs / (1. + rs) ** 2) / rs
        bvn = (a * float((np.exp(asr) * (sp - ep)) @ wk) - bvn) / two_pi
    if r > 0:
        return bvn + float(special.ndtr(-max(h, k)))
    if h >= k:
        return -bvn
    if h < 0:
        span = float(special.ndtr(k) - special.ndtr(h))
    else:
        span = float(special.ndtr(-h) - special.ndtr(-k))
    return span - bvn


def bivariate_normal_cdf(h, k, rho):
    r"""
    P(X <= h, Y <= k) for standard normals with correlation rho.
    """
    h, k, rho = float(h), float(k), float(rho)
    if math.isnan(h) or math.isnan(k) or not abs(rho) <= 1. + 1e-15:
        raise InvalidInputError('need |rho| <= 1 and non-NaN limits')
    rho = max(-1., min(1., rho))
    return min(1., max(0., _bvnu(-h, -k, rho)))


@dataclass(frozen=True)
class CorrelationMatrix:
    r"""
    Symmetric, unit-diagonal and positive semidefinite.
    """

    values: Tuple[Tuple[float, ...], ...]
    tol: float = 1e-12

    def __post_init__(self):
        values = tuple(tuple(float(c) for c in row) for row in self.values)
        object.__setattr__(self, 'values', values)
        d = len(values)
        if d < 2 or any(len(row) != d for row in values):
            raise InvalidInputError('correlation matrices are square, d >= 2')
        m = self.tensor()
        if not torch.isfinite(m).all():
            raise InvalidInputError('correlations must be finite')
        if (m - m.T).abs().max() > self.tol:
            raise InvalidInputError('correlation matrix is not symmetric')
        if (m.diagonal() - 1.).abs().max() > self.tol:
            raise InvalidInputError('correlation matrix needs a unit diagonal')
        if (m.abs() > 1. + self.tol).any():
            raise InvalidInputError('correlations must lie in [-1, 1]')
        if self.min_eigenvalue < -1e-12:
            raise InvalidInputError(
                'correlation matrix is not positive semidefinite (eigenvalue {:.3g})'
                .format(self.min_eigenvalue))

    @classmethod
    def from_upper(cls, dim, upper):
        r"""
        Build from the strict upper triangle, row-major.
        """
        upper = [float(c) for c in upper]
        if len(upper) != dim * (dim - 1) // 2:
            raise InvalidInputError('{} correlations given, {} expected'.format(
                len(upper), dim * (dim - 1) // 2))
        m = [[1. if i == j else 0. for j in range(dim)] for i in range(dim)]
        for (i, j), c in zip(itertools.combinations(range(dim), 2), upper):
            m[i][j] = m[j][i] = c
        return cls(tuple(map(tuple, m)))

    @classmethod
    def equicorrelated(cls, dim, rho):
        return cls.from_upper(dim, [rho] * (dim * (dim - 1) // 2))

    @property
    def dim(self):
        return len(self.values)

    @property
    def min_eigenvalue(self):
        return float(torch.linalg.eigvalsh(self.tensor()).min())

    def tensor(self):
        return torch.tensor(self.values, dtype=DTYPE)

    def __getitem__(self, ij):
        i, j = ij
        return self.values[i][j]

    def upper(self):
        return [self.values[i][j]
                for i, j in itertools.combinations(range(self.dim), 2)]


def _conditional_bvn(h, r, j):
    a, b = [i for i in range(3) if i != j]
    ra, rb = r[a][j], r[b][j]
    sa, sb = math.sqrt(1. - ra * ra), math.sqrt(1. - rb * rb)
    rab = (r[a][b] - ra * rb) / (sa * sb)
    rab = max(-1., min(1., rab))

    def fn(x):
        return math.exp(-0.5 * x * x) / math.sqrt(2. * math.pi) * \
            bivariate_normal_cdf((h[a] - ra * x) / sa, (h[b] - rb * x) / sb, rab)
    return fn


def trivariate_normal_cdf(h, k, l, corr: CorrelationMatrix):
    r"""
    P(X <= h, Y <= k, Z <= l) by integrating the conditional bivariate CDF
    against the density of the coordinate least correlated with the others.
    """
    if corr.dim != 3:
        raise InvalidInputError('trivariate CDF needs a 3x3 correlation matrix')
    if corr.min_eigenvalue < EIGEN_FLOOR:
        raise IllConditionedError(
            'correlation matrix is near singular (eigenvalue {:.3g})'
            .format(corr.min_eigenvalue))
    limits = [float(h), float(k), float(l)]
    if any(math.isnan(x) for x in limits):
        raise InvalidInputError('limits must not be NaN')
    if any(x == -math.inf for x in limits):
        return 0.
    finite = [i for i, x in enumerate(limits) if x != math.inf]
    if not finite:
        return 1.
    if len(finite) == 1:
        return float(special.ndtr(limits[finite[0]]))
    if len(finite) == 2:
        i, j = finite
        return bivariate_normal_cdf(limits[i], limits[j], corr[i, j])

    r = corr.values
    j = min(range(3), key=lambda i: max(abs(r[i][m]) for m in range(3) if m != i))
    upper = min(limits[j], 10.)
    if upper <= -10.:
        return 0.
    value, err = integrate.quad(_conditional_bvn(limits, r, j), -10., upper,
                                epsabs=1e-13, epsrel=1e-12, limit=200)
    logger.debug('trivariate cdf %s conditioned on %d: %.15g (+- %.2g)',
                 limits, j, value, err)
    return min(1., max(0., value))


@dataclass(frozen=True)
class BSModel:
    r"""
    S_i = s_i exp(-vol_i^2 / 2 + vol_i X_i) with X standard normal with
    correlation `corr`, at zero rates. Unit volatilities by default.
    """

    spots: Tuple[float, ...]
    corr: CorrelationMatrix
    vols: Tuple[float, ...] = ()

    def __post_init__(self):
        spots = tuple(float(s) for s in self.spots)
        vols = tuple(float(v) for v in self.vols) or (1.,) * len(spots)
        object.__setattr__(self, 'spots', spots)
        object.__setattr__(self, 'vols', vols)
        if len(spots) != self.corr.dim or len(vols) != len(spots):
            raise InvalidInputError('spots, vols and correlations disagree in dimension')
        if any(s <= 0 for s in spots) or any(v <= 0 for v in vols):
            raise InvalidInputError('spots and vols must be positive')

    @classmethod
    def from_dict(cls, config):
        try:
            spots = list(config['spots'])
            corr = CorrelationMatrix.from_upper(len(spots), config['correlations'])
        except KeyError as e:
            raise InvalidInputError('model config misses {}'.format(e))
        return cls(tuple(spots), corr, tuple(config.get('vols', ())))

    def to_dict(self):
        return {'spots': list(self.spots), 'correlations': self.corr.upper(),
                'vols': list(self.vols)}

    @property
    def dim(self):
        return len(self.spots)

    def marginals(self):
        return [LogNormalMarginal(s, v) for s, v in zip(self.spots, self.vols)]

    def normal_limit(self, i, strike):
        r"""
        z with P(S_i <= K) = Phi(z).
        """
        if not strike > 0:
            raise InvalidStrikeError('strikes must be positive, got {}'.format(strike))
        vol = self.vols[i]
        return (math.log(strike / self.spots[i]) + 0.5 * vol * vol) / vol


@dataclass(frozen=True)
class MarketQuote:
    kind: str
    indices: Tuple[int, ...]
    strike: float
    price: float

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        if self.kind not in QUOTE_KINDS:
            raise InvalidInputError('unknown quote kind {}'.format(self.kind))
        if not self.strike > 0:
            raise InvalidStrikeError('strikes must be positive, got {}'.format(self.strike))
        if not -1e-12 <= self.price <= 1. + 1e-12:
            raise InvalidInputError('digital prices lie in [0, 1], got {}'.format(self.price))
        if len(set(self.indices)) != len(self.indices) or len(self.indices) < 2:
            raise InvalidInputError('quotes need at least two distinct assets')


def _check_strikes(strikes):
    for k in strikes:
        if not k > 0:
            raise InvalidStrikeError('strikes must be positive, got {}'.format(k))


def generate_pairwise_digital_quotes(model: BSModel, strikes):
    r"""
    P(S_i <= K, S_j <= K) for every strike and every pair i < j.
    """
    _check_strikes(strikes)
    quotes = []
    for k in strikes:
        z = [model.normal_limit(i, k) for i in range(model.dim)]
        for i, j in itertools.combinations(range(model.dim), 2):
            price = bivariate_normal_cdf(z[i], z[j], model.corr[i, j])
            quotes.append(MarketQuote('pairwise-digital-max', (i, j), float(k), price))
    return quotes


def generate_min_digital_quotes(model: BSModel, strikes):
    r"""
    P(S_1 >= K, S_2 >= K, S_3 >= K) per strike, by the reflection symmetry
    of the centred Gaussian.
    """
    if model.dim != 3:
        raise InvalidInputError('minimum digitals are generated for three assets')
    _check_strikes(strikes)
    quotes = []
    for k in strikes:
        z = [-model.normal_limit(i, k) for i in range(3)]
        price = trivariate_normal_cdf(*z, model.corr)
        quotes.append(MarketQuote('basket-digital-min', (0, 1, 2), float(k), price))
    return quotes


def _shard(f, model, chol, n, seed):
    gen = torch.Generator()
    gen.manual_seed(seed)
    u = torch.rand(n, model.dim, generator=gen, dtype=DTYPE).clamp(1e-16, 1. - 1e-16)
    x = torch.special.ndtri(u) @ chol.T
    spots = torch.tensor(model.spots, dtype=DTYPE)
    vols = torch.tensor(model.vols, dtype=DTYPE)
    paths = spots * torch.exp(vols * x - 0.5 * vols * vols)
    values = f(paths)
    return float(values.sum()), float((values * values).sum())


def mc_benchmark_price(f, model: BSModel, n_paths, seed=0, shard_size=MC_SHARD):
    r"""
    Monte Carlo E[f(S)] with its standard error. Paths are split in shards,
    each seeded from its own child of `SeedSequence(seed)`, and the shard sums
    are merged in shard order, so results do not depend on the worker count.
    """
    if n_paths < MC_MIN_PATHS:
        raise InvalidInputError('Monte Carlo needs at least {} paths'.format(MC_MIN_PATHS))
    if f.dim != model.dim:
        raise InvalidInputError('payoff and model dimensions differ')
    chol, info = torch.linalg.cholesky_ex(model.corr.tensor())
    if int(info) > 0:
        raise IllConditionedError('Cholesky factorization of the correlations failed')
    sizes = [shard_size] * (n_paths // shard_size)
    if n_paths % shard_size:
        sizes.append(n_paths % shard_size)
    seeds = [int(s.generate_state(1, dtype=np.uint64)[0])
             for s in np.random.SeedSequence(seed).spawn(len(sizes))]
    logger.debug('%d paths in %d shards', n_paths, len(sizes))
    with torch.no_grad(), ThreadPoolExecutor(get_num_threads()) as pool:
        sums = list(pool.map(lambda a: _shard(f, model, chol, *a), zip(sizes, seeds)))
    total = sum(s for s, _ in sums)
    total_sq = sum(q for _, q in sums)
    mean = total / n_paths
    var = max(total_sq / n_paths - mean * mean, 0.) * n_paths / (n_paths - 1)
    return mean, math.sqrt(var / n_paths)
