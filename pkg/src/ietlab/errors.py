"""Exception hierarchy shared by all ietlab modules.

``exit_code`` is what the command line returns when the error escapes a
subcommand: 2 for domain/validation problems, 3 for exhausted budgets.
"""


class IetLabError(Exception):
    exit_code = 2


class DomainError(IetLabError, ValueError):
    pass


class BasisMismatch(DomainError):
    pass


class ReduciblePermutation(DomainError):
    pass


class RauzyTie(DomainError):
    pass


class CellViolation(DomainError):
    pass


class ChartDomain(DomainError):
    pass


class ResourceLimit(IetLabError):
    exit_code = 3


class PrecisionExhausted(IetLabError, ArithmeticError):
    """Numeric evaluation at the declared generator values is too close to
    zero to decide a sign; supply the generators with more digits."""

    exit_code = 3
