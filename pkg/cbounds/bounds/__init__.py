r"""
Improved Frechet-Hoeffding bounds and the proper quasi-copula certifier.
"""
from .prescription import (Prescription, FunctionalPrescription,
                           MarginalPrescription, MarginBlock, GapBoxSet,
                           envelope_functions, SIDES)
from .subset import (LowerSubsetBound, UpperSubsetBound, SurvivalSubsetBound,
                     lower_bound_subset, upper_bound_subset,
                     survival_bound_subset)
from .functional import functional_bounds, survival_functional_bounds
from .marginal import (MarginalLowerBound, MarginalUpperBound,
                       marginal_bounds, survival_marginal_bounds)
from .certify import (GapBoxBound, Certificate, certify_proper_quasi_copula,
                      embedding_base)
