r"""
cbounds: improved Frechet-Hoeffding bounds on quasi-copulas and model-free
price bounds for multi-asset options
"""
from .errors import CopulaBoundsError
from .dependence import (BaseDependence, FunctionDependence, LowerFrechet,
                         UpperFrechet, Independence, Checkerboard, Reflected,
                         Survival, Margin)
from .core import (Box, frechet_lower, frechet_upper, box_volume, survival_value,
                   reflect, orthant_compare)
from .grid import GridFunction, PropertyReport, check_quasi_copula, check_d_increasing
from .bounds import (Prescription, FunctionalPrescription, MarginalPrescription,
                     GapBoxSet, lower_bound_subset, upper_bound_subset,
                     survival_bound_subset, functional_bounds,
                     survival_functional_bounds, marginal_bounds,
                     survival_marginal_bounds, certify_proper_quasi_copula)
from .payoffs import (PayoffDescriptor, IntegrationConfig, diagonal_payoff,
                      parse_payoff, quasi_expectation, phi_recursion,
                      dominance_check, check_integrability)
from .market import (CorrelationMatrix, BSModel, MarketQuote, bivariate_normal_cdf,
                     trivariate_normal_cdf, generate_pairwise_digital_quotes,
                     generate_min_digital_quotes, mc_benchmark_price)
from .pricing import (PriceBounds, TrackDescriptor, bounds_from_pairwise_quotes,
                      bounds_from_min_digital_quotes, standard_price_envelope,
                      sharpness_flag)
