"""Continued-fraction expansion in F_q((z^-1)).

For ``x`` in the unit ideal the partial quotients are ``A_i = [1 / T^{i-1}(x)]``, where
``T`` is the Gauss map. Truncated series are expanded by iterating ``T``; rationals
``P/Q`` get an exact terminated expansion from the Euclidean algorithm.

Certification
-------------
A truncated series known to ``N`` fractional coefficients determines its first ``n``
partial quotients exactly when ``2 * sum_{i<=n} deg A_i <= N``. Every series that agrees
with ``x`` on ``N`` coefficients lies in the disc of radius ``q^-(N+1)`` around ``x``,
and the order-``n`` cylinder of ``x`` is a disc of diameter
``q^-(2 * sum deg A_i + 1)``, so the disc sits inside the cylinder.

The same count falls out of the precision bookkeeping: the ``n``-th iterate of ``T``
carries ``N - 2 * sum_{i<=n} deg A_i`` coefficients, and taking its reciprocal
consumes ``2 * deg A_{n+1}`` more.

Examples
--------
>>> from laurentcf.algebra.field_poly import FieldSpec, Poly
>>> F2 = FieldSpec(2)
>>> cf = expand_rational(Poly.parse(F2, "z"), Poly.parse(F2, "z^2+1"))
>>> [str(a) for a in cf.quotients]
['z', 'z']
>>> [(str(c.P), str(c.Q)) for c in convergents(cf)]
[('1', 'z'), ('z', 'z^2+1')]
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from laurentcf.core import table
from laurentcf.errors import (
    CertificationError,
    IdentityError,
    PrecisionError,
    ZeroDivisionPolyError,
)

from .field_poly import FieldSpec, Poly, gcd
from .laurent import LaurentSeries, from_rational, reciprocal, split

logger = logging.getLogger(__name__)

Rational = Tuple[Poly, Poly]
Number = Union[LaurentSeries, Rational]

__all__ = [
    "CFExpansion",
    "Convergent",
    "IdentityCheck",
    "IdentityReport",
    "expand",
    "expand_truncated",
    "expand_rational",
    "convergents",
    "check_identities",
    "relative_error_log",
    "relative_error_log_block",
    "series_from_quotients",
    "certified_count",
]


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients with the number guaranteed correct at the input precision."""

    field: FieldSpec
    quotients: Tuple[Poly, ...]
    certified: int
    terminated: bool = False
    precision: Optional[int] = None

    def __post_init__(self):
        for i, a in enumerate(self.quotients, start=1):
            if a.is_zero() or a.degree < 1:
                raise ValueError(f"partial quotient A_{i} = {a} has degree < 1")
        if not 0 <= self.certified <= len(self.quotients):
            raise ValueError(
                f"certified={self.certified} outside 0..{len(self.quotients)}"
            )

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(a.degree for a in self.quotients)

    def __len__(self):
        return len(self.quotients)

    def require(self, n: int) -> None:
        """Raise unless the first ``n`` quotients are certified."""
        if n > self.certified:
            raise CertificationError(
                f"need {n} certified partial quotients, have {self.certified}",
                needed=n,
                certified=self.certified,
            )


@dataclass(frozen=True)
class Convergent:
    P: Poly
    Q: Poly
    n: int

    def __str__(self):
        return f"P_{self.n}/Q_{self.n} = ({self.P})/({self.Q})"


@table
@dataclass
class IdentityCheck:
    n: int
    identity: str
    lhs: str
    rhs: str
    holds: bool


@dataclass
class IdentityReport:
    n: int
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def frame(self):
        return IdentityCheck.frame(self.checks)


def certified_count(degrees: Sequence[int], precision: int) -> int:
    """Largest ``n`` with ``2 * sum(degrees[:n]) <= precision``.

    >>> certified_count([1, 1, 1, 1, 1, 1], 10)
    5
    >>> certified_count([1], 1)
    0
    """
    total, n = 0, 0
    for d in degrees:
        total += d
        if 2 * total > precision:
            break
        n += 1
    return n


def expand_truncated(x: LaurentSeries, n_max: Optional[int] = None) -> CFExpansion:
    """Expand a truncated series by iterating the Gauss map.

    The expansion stops when the iterate is zero up to its precision, after ``n_max``
    quotients, or when the integer part of the next reciprocal is not determined. In
    the last case the quotient of the zero-padded iterate is appended as a best guess;
    it is never certified.

    >>> from laurentcf.algebra.field_poly import FieldSpec
    >>> F2 = FieldSpec(2)
    >>> cf = expand_truncated(LaurentSeries.parse(F2, "int=0; frac=1"))
    >>> [str(a) for a in cf.quotients], cf.certified
    (['z'], 0)
    >>> expand_truncated(LaurentSeries.parse(F2, "int=0; frac=1,0")).certified
    1
    """
    if not x.in_unit_ideal():
        raise ValueError(f"expand_truncated needs |x| < 1, got integer part {x.int_part}")
    quotients: List[Poly] = []
    y = x
    while n_max is None or len(quotients) < n_max:
        val = y.valuation()
        if val.zero_up_to_precision:
            break
        try:
            inv = reciprocal(y)
        except PrecisionError:
            pad = (0,) * (2 * val.v - y.precision)
            padded = LaurentSeries(y.field, y.int_part, y.frac + pad)
            quotients.append(reciprocal(padded).int_part)
            logger.debug("quotient %d is a best guess at precision %d", len(quotients), y.precision)
            break
        a, y = split(inv)
        quotients.append(a)
    degrees = [a.degree for a in quotients]
    certified = certified_count(degrees, x.precision)
    logger.debug("expanded %d quotients, %d certified", len(quotients), certified)
    return CFExpansion(x.field, tuple(quotients), certified, False, x.precision)


def expand_rational(p: Poly, q: Poly) -> CFExpansion:
    """Exact expansion of ``p/q`` (``deg p < deg q``) by the Euclidean algorithm.

    >>> from laurentcf.algebra.field_poly import FieldSpec
    >>> F3 = FieldSpec(3)
    >>> [str(a) for a in expand_rational(Poly.one(F3), Poly.parse(F3, "z+1")).quotients]
    ['z+1']
    """
    if q.is_zero():
        raise ZeroDivisionPolyError("rational with zero denominator")
    if not p.is_zero() and p.degree >= q.degree:
        raise ValueError(f"expand_rational needs deg p < deg q, got {p} / {q}")
    quotients = []
    num, den = p, q
    while not num.is_zero():
        a, r = divmod(den, num)
        quotients.append(a)
        num, den = r, num
    return CFExpansion(p.field, tuple(quotients), len(quotients), True, None)


def expand(x: Number, n_max: Optional[int] = None) -> CFExpansion:
    """Dispatch on a truncated series or a ``(P, Q)`` pair; a pair must lie in the unit ideal."""
    if isinstance(x, LaurentSeries):
        return expand_truncated(x, n_max)
    cf = expand_rational(*x)
    if n_max is not None and n_max < len(cf):
        return CFExpansion(cf.field, cf.quotients[:n_max], n_max, False, None)
    return cf


def _recursion(field: FieldSpec, quotients: Sequence[Poly]) -> Tuple[List[Poly], List[Poly]]:
    # index 0 holds P_0 = 0, Q_0 = 1; P_{-1} = 1, Q_{-1} = 0 seed the first step
    p_prev, p = Poly.one(field), Poly.zero(field)
    q_prev, q = Poly.zero(field), Poly.one(field)
    ps, qs = [p], [q]
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        ps.append(p)
        qs.append(q)
    return ps, qs


def convergents(cf: CFExpansion, include_zero: bool = False) -> List[Convergent]:
    """``(P_n, Q_n)`` for ``n = 1..len(cf)`` (from ``n = 0`` with ``include_zero``).

    >>> from laurentcf.algebra.field_poly import FieldSpec
    >>> F2 = FieldSpec(2)
    >>> z = Poly.parse(F2, "z")
    >>> str(convergents(CFExpansion(F2, (z, z, z), 3))[-1].Q)
    'z^3'
    """
    ps, qs = _recursion(cf.field, cf.quotients)
    start = 0 if include_zero else 1
    return [Convergent(ps[n], qs[n], n) for n in range(start, len(ps))]


def series_from_quotients(quotients: Sequence[Poly], precision: int) -> LaurentSeries:
    """The series ``[A_1, ..., A_n]`` truncated to ``precision`` coefficients."""
    if not quotients:
        raise ValueError("need at least one partial quotient")
    field = quotients[0].field
    ps, qs = _recursion(field, quotients)
    return from_rational(ps[-1], qs[-1], precision)


def _error_log(x: Number, conv: Convergent) -> Optional[int]:
    """``log_q |x - P_n/Q_n|``, or None when the error is exactly zero."""
    if isinstance(x, LaurentSeries):
        big = x.precision + conv.Q.degree + 1
        lhs = x * LaurentSeries.from_poly(conv.Q, big)
        diff = lhs - LaurentSeries.from_poly(conv.P, lhs.precision)
        val = diff.valuation()
        if val.zero_up_to_precision:
            raise CertificationError(
                f"|Q_{conv.n} x - P_{conv.n}| below the input precision", needed=conv.n + 1
            )
        return -val.v - conv.Q.degree
    a, b = x
    num = a * conv.Q - b * conv.P
    if num.is_zero():
        return None
    return num.degree - b.degree - conv.Q.degree


def check_identities(x: Number, n: int, cf: Optional[CFExpansion] = None) -> IdentityReport:
    """Check the convergent identities for every ``m = 1..n``.

    * coprime: ``gcd(P_m, Q_m) = 1``
    * determinant: ``Q_m P_{m-1} - P_m Q_{m-1} = (-1)^m``
    * denominator norm: ``|Q_m| = prod |A_i|``
    * error norm: ``|x - P_m/Q_m| = 1 / (|Q_m| |Q_{m+1}|)``, skipped when ``A_{m+1}``
      is not available (terminal index of a rational, or beyond certification).

    Raises :class:`~laurentcf.errors.IdentityError` naming the first identity that fails.

    >>> from laurentcf.algebra.field_poly import FieldSpec
    >>> F2 = FieldSpec(2)
    >>> report = check_identities((Poly.parse(F2, "z"), Poly.parse(F2, "z^2+1")), 2)
    >>> report.ok, len(report.checks)
    (True, 7)
    """
    cf = expand(x) if cf is None else cf
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cf.require(n)
    convs = convergents(cf, include_zero=True)
    one = Poly.one(cf.field)
    report = IdentityReport(n)

    def record(m, name, lhs, rhs):
        ok = lhs == rhs
        report.checks.append(IdentityCheck(m, name, str(lhs), str(rhs), ok))
        if not ok:
            raise IdentityError(name, m, f"{lhs} != {rhs}")

    degree_sum = 0
    for m in range(1, n + 1):
        c, prev = convs[m], convs[m - 1]
        degree_sum += cf.quotients[m - 1].degree
        record(m, "coprime", gcd(c.P, c.Q), one)
        sign = one if m % 2 == 0 else -one
        record(m, "determinant", c.Q * prev.P - c.P * prev.Q, sign)
        record(m, "denominator_norm", c.Q.degree, degree_sum)
        if m + 1 <= cf.certified:
            nxt = c.Q.degree + cf.quotients[m].degree
            record(m, "error_norm", _error_log(x, c), -(c.Q.degree + nxt))
    logger.debug("identities hold up to n=%d (%d checks)", n, len(report.checks))
    return report


def relative_error_log(x: Number, n: int, cf: Optional[CFExpansion] = None) -> int:
    """``log_q(|x - P_{n-1}/Q_{n-1}| / |x - P_n/Q_n|)``, which equals ``deg A_n + deg A_{n+1}``.

    Both errors are computed and compared against the degree sum.

    >>> from laurentcf.algebra.field_poly import FieldSpec
    >>> F2 = FieldSpec(2)
    >>> relative_error_log((Poly.parse(F2, "z"), Poly.parse(F2, "z^3+1")), 1)
    3
    """
    cf = expand(x) if cf is None else cf
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cf.require(n + 1)
    convs = convergents(cf, include_zero=True)
    before, after = _error_log(x, convs[n - 1]), _error_log(x, convs[n])
    expected = cf.quotients[n - 1].degree + cf.quotients[n].degree
    if before is None or after is None or before - after != expected:
        raise IdentityError(
            "relative_error", n, f"log ratio {before} - {after} != {expected}"
        )
    return expected


def relative_error_log_block(
    x: Number, n: int, k: int, cf: Optional[CFExpansion] = None
) -> int:
    """Sum over ``i = n..n+k`` of :func:`relative_error_log` at index ``2i``.

    Equals ``sum_{j=2n}^{2n+2k+1} deg A_j``.
    """
    cf = expand(x) if cf is None else cf
    total = sum(relative_error_log(x, 2 * i, cf) for i in range(n, n + k + 1))
    expected = sum(cf.degrees[2 * n - 1 : 2 * n + 2 * k + 1])
    if total != expected:
        raise IdentityError("relative_error_block", n, f"{total} != {expected}")
    return total
