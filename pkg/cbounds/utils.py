r"""
Shared constants and small tensor helpers.
"""
import os
import itertools

import torch

from .errors import InvalidInputError


DTYPE = torch.float64

# absolute tolerance of pure-arithmetic comparisons (envelope, grid checks)
DEFAULT_TOL = 1e-12
# cap for 2^d corner expansions
DEFAULT_MAX_DIM = 12
# lattice QC4 checks cost n^d * 2^d
GRID_MAX_DIM = 6
GRID_MAX_CELLS = 2 ** 24

WITNESS_MARGIN = 1e-9
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200


def get_num_threads():
    r"""
    Size of the worker pool used for strike sweeps and Monte Carlo shards.
    `COPULA_BOUNDS_THREADS` caps it.
    """
    limit = os.environ.get('COPULA_BOUNDS_THREADS')
    count = os.cpu_count() or 1
    if limit is not None:
        try:
            count = min(count, int(limit))
        except ValueError:
            raise RuntimeError(
                'COPULA_BOUNDS_THREADS must be an integer, got {}'.format(limit))
    return max(count, 1)


def as_points(u, dim=None):
    r"""
    Convert anything array-like to a float64 tensor of shape [..., d].
    """
    u = torch.as_tensor(u, dtype=DTYPE)
    if u.dim() == 0:
        raise InvalidInputError('a point needs at least one coordinate')
    if dim is not None and u.shape[-1] != dim:
        raise InvalidInputError('expected points of dimension {}, got {}'.format(
            dim, u.shape[-1]))
    return u


def corner_signs(dim):
    r"""
    All 2^d corner selectors of a box, as a [2^d, d] bool tensor (True picks
    the upper coordinate) and the matching volume signs (-1)^{#lower}.
    """
    picks = torch.tensor(list(itertools.product((False, True), repeat=dim)),
                         dtype=torch.bool)
    n_lower = (~picks).sum(-1)
    signs = torch.where(n_lower % 2 == 0, 1., -1.).to(DTYPE)
    return picks, signs


def lattice(dim, n):
    r"""
    The regular lattice {0, 1/n, ..., 1}^d as a tensor of shape
    [n+1, ..., n+1, d], nodes in row-major lexicographic order.
    """
    axis = torch.arange(n + 1, dtype=DTYPE) / n
    mesh = torch.meshgrid(*([axis] * dim), indexing='ij')
    return torch.stack(mesh, dim=-1)


def subsets(index_set, proper=False, nonempty=False):
    r"""
    Subsets of `index_set` as sorted tuples, by increasing size.
    """
    index_set = tuple(sorted(index_set))
    top = len(index_set) - 1 if proper else len(index_set)
    for size in range(1 if nonempty else 0, top + 1):
        yield from itertools.combinations(index_set, size)
