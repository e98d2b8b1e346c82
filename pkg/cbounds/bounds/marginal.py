r"""
Improved bounds from bounds on lower-dimensional margins
"""
import torch

from .prescription import MarginalPrescription
from ..dependence import BaseDependence, Reflected


class _MarginalBound(BaseDependence):
    kind = 'quasi-copula'

    def __init__(self, prescription: MarginalPrescription):
        super().__init__(prescription.dim)
        self.prescription = prescription
        self.blocks = prescription.blocks
        # keep block functions registered as submodules
        self.lowers = torch.nn.ModuleList([b.lower for b in self.blocks])
        self.uppers = torch.nn.ModuleList([b.upper for b in self.blocks])


class MarginalLowerBound(_MarginalBound):
    r"""
    max(W_d(u), max_j {L_j(u_Ij) + sum_{l not in I_j} (u_l - 1)}).
    """

    def forward(self, u):
        out = (u.sum(-1) - self.dim + 1).clamp(min=0)
        for block, lower in zip(self.blocks, self.lowers):
            rest = [i for i in range(self.dim) if i not in block.index]
            term = lower(u[..., list(block.index)])
            if rest:
                term = term + (u[..., rest] - 1.).sum(-1)
            out = torch.maximum(out, term)
        return out


class MarginalUpperBound(_MarginalBound):
    r"""
    min(M_d(u), min_j U_j(u_Ij)).
    """

    def forward(self, u):
        out = u.min(-1).values
        for block, upper in zip(self.blocks, self.uppers):
            out = torch.minimum(out, upper(u[..., list(block.index)]))
        return out


def marginal_bounds(prescription: MarginalPrescription):
    return MarginalLowerBound(prescription), MarginalUpperBound(prescription)


def survival_marginal_bounds(prescription: MarginalPrescription):
    r"""
    Bounds on the survival function u -> C_hat(u) when the blocks bound the
    margins of the survival copula v -> C_hat(1 - v): the marginal bounds
    evaluated at 1 - u.
    """
    lower, upper = marginal_bounds(prescription)
    return (Reflected(lower, kind='quasi-survival'),
            Reflected(upper, kind='quasi-survival'))
