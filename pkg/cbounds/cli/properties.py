r"""
Randomized invariant suites run by `check-properties`. Every suite takes a
numpy generator and the dimension, resolution and trial count, and returns
a list of failure messages; an empty list is a pass.
"""
import numpy as np
import torch

from ..bounds import (Prescription, GapBoxSet, lower_bound_subset,
                      upper_bound_subset, certify_proper_quasi_copula)
from ..core import Box, box_volume, survival_value, frechet_lower, frechet_upper
from ..dependence import LowerFrechet, UpperFrechet, Independence, Checkerboard
from ..grid import GridFunction, check_quasi_copula, check_d_increasing
from ..utils import DTYPE, lattice


BOUND_FACTORIES = {
    'lower': lower_bound_subset,
    'upper': upper_bound_subset,
}


def random_quasi_copula(rng, dim):
    r"""
    A random convex combination of W_d, Pi_d and M_d.
    """
    a, b, c = rng.dirichlet((1., 1., 1.))

    def fn(u):
        return (a * LowerFrechet(dim)(u) + b * Independence(dim)(u) +
                c * UpperFrechet(dim)(u))
    return fn


def random_prescription(rng, dim, max_points=8):
    q = random_quasi_copula(rng, dim)
    points = rng.uniform(size=(rng.integers(1, max_points + 1), dim))
    values = q(torch.tensor(points, dtype=DTYPE))
    return Prescription(dim, tuple(map(tuple, points.tolist())),
                        tuple(values.tolist()))


def random_checkerboard(rng, dim, cells=3, components=4):
    r"""
    A mixture of permutation checkerboards: every component puts mass 1/n
    on cells (k, pi_2(k), ..., pi_d(k)), so the margins stay uniform.
    """
    masses = np.zeros((cells,) * dim)
    for w in rng.dirichlet(np.ones(components)):
        perms = [np.arange(cells)] + [rng.permutation(cells) for _ in range(dim - 1)]
        for k in range(cells):
            masses[tuple(p[k] for p in perms)] += w / cells
    return Checkerboard(masses)


def random_gap_configuration(rng, which='lower', valid=True, max_tries=1000):
    r"""
    A gap-box set with a two-point prescription {(s, c), (s + eps, c + delta)}.
    Valid configurations meet the certifier's conditions; invalid ones take
    delta >= sum(eps), where no witness exists.
    """
    for _ in range(max_tries):
        s = rng.uniform(0.05, 0.6, size=3)
        eps = rng.uniform(0.03, 0.3, size=3)
        if (s + eps > 0.98).any():
            continue
        top = s + eps
        w_s, w_top = max(s.sum() - 2., 0.), max(top.sum() - 2., 0.)
        if valid:
            delta = rng.uniform(0.05, 0.95) * eps.sum()
        else:
            delta = eps.sum() * rng.uniform(1.01, 1.5)
        if which == 'lower':
            c = max(w_s, w_top)
            if c > s.min() or c + delta > top.min():
                continue
        else:
            c = max(w_s, w_top - delta)
            if c + delta > s.min():
                continue
        try:
            prescription = Prescription(3, (tuple(s), tuple(top)), (c, c + delta))
        except ValueError:
            continue
        return GapBoxSet(tuple(s), tuple(eps)), prescription, delta
    raise RuntimeError('no gap configuration found in {} tries'.format(max_tries))


def suite_subset(rng, dim, n, trials):
    failures = []
    for trial in range(trials):
        d = int(rng.integers(2, 5)) if dim is None else dim
        prescription = random_prescription(rng, d)
        points = prescription.points_tensor()
        for side, make in BOUND_FACTORIES.items():
            bound = make(prescription)
            with torch.no_grad():
                err = (bound(points) - prescription.values_tensor()).abs().max()
            if err > 1e-12:
                failures.append('trial {}: {} bound misses its prescription by {:.3g}'
                                .format(trial, side, float(err)))
            report = check_quasi_copula(GridFunction.sample(bound, n))
            if not report.passed:
                failures.append('trial {}: {} bound fails {}'.format(
                    trial, side, ','.join(report.checks())))
    return failures


def suite_frechet(rng, dim, n, trials):
    failures = []
    nodes = lattice(dim, n)
    w, m = LowerFrechet(dim)(nodes), UpperFrechet(dim)(nodes)
    for trial in range(trials):
        bounds = [make(random_prescription(rng, dim)) for make in BOUND_FACTORIES.values()]
        with torch.no_grad():
            for bound in bounds:
                values = bound(nodes)
                if (values < w - 1e-12).any() or (values > m + 1e-12).any():
                    failures.append('trial {}: bound leaves [W, M]'.format(trial))
            if (bounds[0](nodes) > bounds[1](nodes) + 1e-12).any():
                failures.append('trial {}: lower bound exceeds upper bound'.format(trial))
    return failures


def suite_volume(rng, dim, n, trials):
    failures = []
    for trial in range(trials):
        q = random_checkerboard(rng, dim)
        lo = rng.uniform(0., 0.5, size=dim)
        hi = lo + rng.uniform(0., 0.5, size=dim)
        box = Box(tuple(lo), tuple(hi))
        axis = int(rng.integers(dim))
        left, right = box.split(axis, float(rng.uniform(lo[axis], hi[axis])))
        whole = box_volume(q, box)
        parts = box_volume(q, left) + box_volume(q, right)
        if abs(whole - parts) > 1e-12:
            failures.append('trial {}: volume not additive ({:.3g})'.format(
                trial, whole - parts))
        u = rng.uniform(size=dim)
        surv = survival_value(q, u)
        if not -1e-12 <= surv <= 1. + 1e-12:
            failures.append('trial {}: survival value {} outside [0, 1]'.format(trial, surv))
        if abs(surv - box_volume(q, Box(tuple(u), (1.,) * dim))) > 1e-12:
            failures.append('trial {}: survival differs from box volume'.format(trial))
        x = tuple(u.tolist())
        if not frechet_lower(x) - 1e-12 <= q.evaluate(u) <= frechet_upper(x) + 1e-12:
            failures.append('trial {}: copula leaves [W, M]'.format(trial))
    return failures


def suite_qc4(rng, dim, n, trials):
    r"""
    Pi_d must pass the d-increasing check; W_d for d >= 3 must not. Negative
    cells of W_d are reported, not counted as failures.
    """
    failures = []
    if not check_d_increasing(GridFunction.sample(Independence(dim), n)).passed:
        failures.append('independence copula has negative cells')
    report = check_d_increasing(GridFunction.sample(LowerFrechet(dim), n))
    if dim >= 3 and report.passed:
        failures.append('W_{} shows no negative cell at n={}'.format(dim, n))
    if dim >= 3:
        worst = min(v.magnitude for v in report.violations)
        print('qc4: W_{} has {} negative cells at n={} (expected), smallest '
              'volume {:.6g}'.format(dim, len(report), n, worst))
    return failures


def suite_certify(rng, dim, n, trials):
    failures = []
    for trial in range(trials):
        which = 'lower' if trial % 2 == 0 else 'upper'
        valid = trial % 4 < 2
        gaps, prescription, delta = random_gap_configuration(rng, which, valid)
        cert = certify_proper_quasi_copula(gaps, prescription, which)
        if not valid:
            if cert is not None:
                failures.append('trial {}: certificate despite delta >= sum(eps)'
                                .format(trial))
            continue
        if cert is None:
            failures.append('trial {}: no {} certificate found'.format(trial, which))
        elif cert.volume >= 0 or abs(cert.volume - cert.closed_form) > 1e-12:
            failures.append('trial {}: witness volume {} vs closed form {}'.format(
                trial, cert.volume, cert.closed_form))
    return failures


SUITES = {
    'subset': suite_subset,
    'frechet': suite_frechet,
    'volume': suite_volume,
    'qc4': suite_qc4,
    'certify': suite_certify,
}


def run_suites(names, seed, dim, n, trials):
    r"""
    Run the named suites with one generator per suite seeded from `seed`;
    returns {name: failures}.
    """
    results = {}
    for name, child in zip(names, np.random.SeedSequence(seed).spawn(len(names))):
        results[name] = SUITES[name](np.random.default_rng(child), dim, n, trials)
    return results
