"""Exception hierarchy.

Every error derives from :class:`LaurentCFError` and from the built-in exception a
caller would naturally catch, so ``except ValueError`` around a solver call keeps
working.
"""

from typing import Optional, Sequence


class LaurentCFError(Exception):
    """Base class for all laurentcf errors."""


class FieldMismatchError(LaurentCFError, TypeError):
    pass


class ZeroDivisionPolyError(LaurentCFError, ZeroDivisionError):
    pass


class PrecisionError(LaurentCFError, ValueError):
    """The requested value is not determined by the input precision."""


class CertificationError(LaurentCFError, ValueError):
    """An expansion is not certified as deep as the operation needs."""

    def __init__(self, message: str, needed: int = 0, certified: int = 0):
        super().__init__(message)
        self.needed = needed
        self.certified = certified


class IdentityError(LaurentCFError, AssertionError):
    """A convergent identity failed.

    Parameters
    ----------
    identity : str
        Short name of the identity, e.g. ``"determinant"``.
    n : int
        Convergent index at which it failed.
    detail : str
        Human readable description of both sides.
    """

    def __init__(self, identity: str, n: int, detail: str):
        super().__init__(f"identity {identity!r} failed at n={n}: {detail}")
        self.identity = identity
        self.n = n
        self.detail = detail


class DivergenceError(LaurentCFError, ValueError):
    pass


class CaseError(LaurentCFError, ValueError):
    pass


class BudgetExceededError(LaurentCFError, RuntimeError):
    def __init__(self, estimate: int, budget: int, what: str = "basic sets"):
        super().__init__(
            f"enumeration of {estimate} {what} exceeds the budget of {budget}"
        )
        self.estimate = estimate
        self.budget = budget


class HolderViolation(LaurentCFError, AssertionError):
    def __init__(self, degrees: Sequence[int], order: int, ratio: float, bound: float):
        super().__init__(
            f"mass exceeds |J|^(s-eps) at order {order} for degrees {tuple(degrees)}: "
            f"log mu / log |J| = {ratio:.12g} < {bound:.12g}"
        )
        self.degrees = tuple(degrees)
        self.order = order
        self.ratio = ratio
        self.bound = bound


class ConfigError(LaurentCFError, ValueError):
    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(f"{flag}: {message}" if flag else message)
        self.flag = flag


class ParseError(LaurentCFError, ValueError):
    pass


class UndefinedAtError(LaurentCFError, ValueError):
    """A tabulated function is missing arguments an operation needs."""

    def __init__(self, what: str, missing: Sequence[int]):
        missing = tuple(missing)
        super().__init__(f"{what} undefined at m = {', '.join(map(str, missing))}")
        self.missing = missing
