r"""
Payoffs, their marginal measures and the quasi-expectation operator.
"""
from .marginals import (MarginalDistribution, LogNormalMarginal, UniformMarginal,
                        PiecewiseUniformMarginal, marginal_cdfs, strike_grid)
from .measures import Measure, PointMass, CurveMeasure, DensityMeasure
from .payoff import (PayoffDescriptor, DIAGONAL_KINDS, TONICITIES, order_of,
                     diagonal_payoff, generic_payoff, basket_payoff,
                     spread_payoff, parse_payoff)
from .expectation import (IntegrationConfig, quasi_expectation, price_with_error,
                          phi_recursion, survival_margin, dominance_check,
                          DominanceReport, check_integrability,
                          IntegrabilityReport)
