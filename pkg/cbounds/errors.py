r"""
Exceptions raised by cbounds. Every error carries a human readable message;
report-style checks return reports instead of raising.
"""


class CopulaBoundsError(RuntimeError):
    pass


class InvalidInputError(CopulaBoundsError, ValueError):
    pass


class DimensionTooLargeError(CopulaBoundsError):
    pass


class InfeasibleTargetError(CopulaBoundsError, ValueError):
    pass


class ContractViolationError(CopulaBoundsError):
    r"""
    A caller-supplied object broke its promise, e.g. a functional that is not
    increasing in the lower orthant order.
    """


class IntegrabilityError(CopulaBoundsError):
    pass


class InvalidPrescriptionError(CopulaBoundsError, ValueError):
    pass


class InvalidStrikeError(CopulaBoundsError, ValueError):
    pass


class IllConditionedError(CopulaBoundsError):
    pass


class InconsistentQuotesError(CopulaBoundsError, ValueError):
    r"""
    Quotes that fall outside the Frechet-Hoeffding envelope once mapped
    through the marginals, i.e. arbitrage in the inputs.
    """


class UnsupportedPayoffOrderError(CopulaBoundsError, ValueError):
    pass


class ParseError(CopulaBoundsError, ValueError):
    pass
