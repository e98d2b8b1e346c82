r"""
Improved Frechet-Hoeffding bounds for a prescription on a finite set
"""
import torch

from .prescription import Prescription
from ..dependence import BaseDependence, Reflected
from ..errors import InvalidInputError


class _SubsetBound(BaseDependence):
    kind = 'quasi-copula'

    def __init__(self, prescription):
        if prescription.side != 'copula-scale':
            raise InvalidInputError(
                'subset bounds take copula-scale prescriptions')
        super().__init__(prescription.dim)
        self.prescription = prescription
        self.register_buffer('points', prescription.points_tensor())
        self.register_buffer('values', prescription.values_tensor())


class LowerSubsetBound(_SubsetBound):
    r"""
    u -> max(W_d(u), max_x {q(x) - sum_i (x_i - u_i)^+}). With no points
    this is W_d.
    """

    def forward(self, u):
        w = (u.sum(-1) - self.dim + 1).clamp(min=0)
        if not len(self.values):
            return w
        slack = (self.points - u.unsqueeze(-2)).clamp(min=0).sum(-1)
        return torch.maximum(w, (self.values - slack).max(-1).values)


class UpperSubsetBound(_SubsetBound):
    r"""
    u -> min(M_d(u), min_x {q(x) + sum_i (u_i - x_i)^+}). With no points
    this is M_d.
    """

    def forward(self, u):
        m = u.min(-1).values
        if not len(self.values):
            return m
        slack = (u.unsqueeze(-2) - self.points).clamp(min=0).sum(-1)
        return torch.minimum(m, (self.values + slack).min(-1).values)


class SurvivalSubsetBound(Reflected):
    r"""
    Bound on survival functions prescribed on a finite set: the subset bound
    of the reflected prescription, evaluated at 1 - u.
    """

    def __init__(self, prescription, side):
        if prescription.side != 'survival-scale':
            raise InvalidInputError(
                'survival bounds take survival-scale prescriptions')
        if side not in ('lower', 'upper'):
            raise InvalidInputError('side must be lower or upper')
        bound = LowerSubsetBound if side == 'lower' else UpperSubsetBound
        super().__init__(bound(prescription.reflected()), kind='quasi-survival')
        self.prescription = prescription
        self.side = side


def lower_bound_subset(prescription: Prescription):
    return LowerSubsetBound(prescription)


def upper_bound_subset(prescription: Prescription):
    return UpperSubsetBound(prescription)


def survival_bound_subset(prescription: Prescription, side='lower'):
    return SurvivalSubsetBound(prescription, side)
