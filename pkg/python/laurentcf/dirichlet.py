"""Dirichlet approximation in F_q((z^-1)).

``||x|| = min_P |x - P|`` is the norm of the fractional part. Every ``x`` and every
``t > 1`` admit ``(P, Q)`` with ``|Qx - P| <= 1/t`` and ``|Q| < t``; a convergent
``(P_n, Q_n)`` with ``|Q_n| < t <= |Q_{n+1}|`` is such a witness because
``|Q_n x - P_n| = 1/|Q_{n+1}|``.

``x`` is phi-Dirichlet improvable when the inequality ``|Qx - P| <= phi(t)`` still has
solutions for all large ``t``. For irrational ``x`` this holds exactly when
``phi(q^m_n) >= q^-m_n`` for all large ``n``, where ``m_n = sum_{i<=n} deg A_i``.
:func:`is_improvable` can only check a finite range of ``n`` and reports its verdict
for that range.

The integer part of ``x`` never affects any of this, so every operation works on the
fractional part.

Examples
--------
>>> from laurentcf.algebra import FieldSpec, Poly
>>> F2 = FieldSpec(2)
>>> x = (Poly.parse(F2, "z"), Poly.parse(F2, "z^2+1"))
>>> w = dirichlet_witness(x, 4)
>>> str(w.P), str(w.Q), w.error
('1', 'z', Fraction(1, 4))
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from laurentcf.algebra.contfrac import (
    CFExpansion,
    Number,
    convergents,
    expand_rational,
    expand_truncated,
    series_from_quotients,
)
from laurentcf.algebra.field_poly import FieldSpec, Poly, gcd
from laurentcf.algebra.laurent import LaurentSeries, split
from laurentcf.core import table
from laurentcf.errors import (
    CertificationError,
    IdentityError,
    ParseError,
    UndefinedAtError,
    ZeroDivisionPolyError,
)

logger = logging.getLogger(__name__)

APPROX_KINDS = ("reciprocal", "scaled", "power", "table")

__all__ = [
    "ApproxFunction",
    "Witness",
    "ImprovabilityVerdict",
    "dist_to_lattice",
    "dirichlet_witness",
    "is_improvable",
    "counterexample_series",
    "minimal_distance_check",
]


@dataclass(frozen=True)
class ApproxFunction:
    """phi, evaluated at the powers ``t = q^m`` the improvability criterion needs.

    ``reciprocal`` is ``1/t``, ``scaled:c`` is ``c/t``, ``power:tau`` is ``t^-tau``. A
    ``table`` holds exact values ``phi(q^m)`` for the ``m`` it lists and must be
    non-increasing in ``m``.

    >>> ApproxFunction.parse("scaled:1/2").at(2, 3)
    Fraction(1, 16)
    >>> ApproxFunction.parse("power:2").at(3, 1)
    Fraction(1, 9)
    """

    kind: str
    param: Optional[Fraction] = None
    values: Optional[Tuple[Tuple[int, Fraction], ...]] = None

    def __post_init__(self):
        if self.kind not in APPROX_KINDS:
            raise ValueError(f"unknown approximation kind {self.kind!r}, expected one of {APPROX_KINDS}")
        if self.kind in ("scaled", "power") and (self.param is None or self.param <= 0):
            raise ValueError(f"{self.kind} needs a positive parameter, got {self.param}")
        if self.kind == "table":
            if not self.values:
                raise ValueError("table approximation function needs values")
            vals = [v for _, v in self.values]
            if any(b > a for a, b in zip(vals, vals[1:])):
                raise ValueError("table approximation function must be non-increasing")

    @classmethod
    def reciprocal(cls) -> "ApproxFunction":
        return cls("reciprocal")

    @classmethod
    def scaled(cls, c) -> "ApproxFunction":
        return cls("scaled", Fraction(c))

    @classmethod
    def power(cls, tau) -> "ApproxFunction":
        return cls("power", Fraction(tau))

    @classmethod
    def from_values(cls, values: Dict[int, Union[Fraction, int, str]]) -> "ApproxFunction":
        return cls("table", None, tuple(sorted((int(m), Fraction(v)) for m, v in values.items())))

    @classmethod
    def from_csv(cls, path) -> "ApproxFunction":
        """Columns ``m,phi``; ``phi`` is read as exact text such as ``1/8``."""
        import pandas as pd

        df = pd.read_csv(path, dtype={"phi": str})
        if not {"m", "phi"} <= set(df.columns):
            raise ParseError(f"{path}: table needs columns m,phi")
        try:
            return cls.from_values(dict(zip(df["m"].astype(int), df["phi"])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{path}: {exc}") from exc

    @classmethod
    def parse(cls, text: str) -> "ApproxFunction":
        kind, _, rest = text.strip().partition(":")
        if kind in ("reciprocal", "1/t") and not rest:
            return cls.reciprocal()
        if kind == "table":
            if not rest:
                raise ParseError("table approximation function needs a path")
            return cls.from_csv(rest)
        if kind in ("scaled", "power") and rest:
            try:
                return cls(kind, Fraction(rest))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad approximation function {text!r}: {exc}") from exc
        raise ParseError(f"bad approximation function {text!r}")

    @property
    def tends_to_zero(self) -> Optional[bool]:
        """True for the presets; unknown for a finite table."""
        return None if self.kind == "table" else True

    def __str__(self):
        if self.kind == "reciprocal":
            return "reciprocal"
        if self.kind == "table":
            return f"table[{self.values[0][0]}..{self.values[-1][0]}]"
        return f"{self.kind}:{self.param}"

    def defined_at(self, m: int) -> bool:
        return self.kind != "table" or m in dict(self.values)

    def at(self, q: int, m: int) -> Union[Fraction, float]:
        """``phi(q^m)``; exact except for a power with non-integral ``tau * m``."""
        if self.kind == "reciprocal":
            return Fraction(1, q**m)
        if self.kind == "scaled":
            return self.param / q**m
        if self.kind == "power":
            e = self.param * m
            if e.denominator == 1:
                return Fraction(q) ** -int(e)
            return float(q) ** -float(e)
        table_ = dict(self.values)
        if m not in table_:
            raise UndefinedAtError(str(self), [m])
        return table_[m]


def _field_of(x: Number) -> FieldSpec:
    return x.field if isinstance(x, LaurentSeries) else x[0].field


def _norm(q: int, degree) -> Fraction:
    return Fraction(q) ** degree


def _reduced(x: Tuple[Poly, Poly]) -> Tuple[Poly, Poly]:
    a, b = x
    if b.is_zero():
        raise ZeroDivisionPolyError("rational with zero denominator")
    g = gcd(a, b)
    return a // g, b // g


def _fractional(x: Number):
    """``([x], {x})`` with the fractional part as a series or a reduced pair."""
    if isinstance(x, LaurentSeries):
        return split(x)
    a, b = _reduced(x)
    i, r = divmod(a, b)
    return i, (r, b)


def _expansion(frac) -> CFExpansion:
    if isinstance(frac, LaurentSeries):
        return expand_truncated(frac)
    return expand_rational(*frac)


def dist_to_lattice(x: Number) -> Fraction:
    """``||x|| = |{x}|``, exact.

    A truncated series whose known fractional coefficients all vanish gives 0.

    >>> F2 = FieldSpec(2)
    >>> dist_to_lattice(LaurentSeries.parse(F2, "int=z; frac=1,0,0"))
    Fraction(1, 2)
    >>> dist_to_lattice(LaurentSeries.parse(F2, "int=0; frac=0,0,1,1"))
    Fraction(1, 8)
    >>> dist_to_lattice((Poly.parse(F2, "z^2"), Poly.one(F2)))
    Fraction(0, 1)
    """
    _, frac = _fractional(x)
    if isinstance(frac, LaurentSeries):
        val = frac.valuation()
        return Fraction(0) if val.zero_up_to_precision else val.norm
    r, b = frac
    if r.is_zero():
        return Fraction(0)
    return _norm(r.field.q, r.degree - b.degree)


@dataclass(frozen=True)
class Witness:
    P: Poly
    Q: Poly
    n: int
    error: Fraction

    @property
    def q_norm(self) -> Fraction:
        return _norm(self.Q.field.q, self.Q.degree)

    def satisfies(self, t) -> bool:
        t = Fraction(t)
        return self.q_norm < t and self.error <= 1 / t


def dirichlet_witness(x: Number, t) -> Witness:
    """A nonzero ``(P, Q)`` with ``|Qx - P| <= 1/t`` and ``|Q| < t``.

    The witness is the convergent with ``|Q_n| < t <= |Q_{n+1}|``, shifted by the
    integer part of ``x``. A rational ``A/B`` with ``t > |B|`` returns ``(A, B)`` in
    lowest terms, whose error is zero. ``t`` is compared exactly, so any positive
    rational works, not only powers of ``q``.
    """
    t = Fraction(t)
    if t <= 1:
        raise ValueError(f"t must be > 1, got {t}")
    field_ = _field_of(x)
    q = field_.q
    int_part, frac = _fractional(x)
    cf = _expansion(frac)
    available = len(cf) if cf.terminated else cf.certified
    convs = convergents(cf, include_zero=True)
    n = 0
    while n + 1 <= available and _norm(q, convs[n + 1].Q.degree) < t:
        n += 1
    if n + 1 <= available:
        c = convs[n]
        error = _norm(q, -convs[n + 1].Q.degree)
        witness = Witness(int_part * c.Q + c.P, c.Q, n, error)
    elif cf.terminated:
        a, b = _reduced(x)
        witness = Witness(a, b, n, Fraction(0))
    else:
        raise CertificationError(
            f"t={t} needs partial quotient {n + 1}, only {cf.certified} certified",
            needed=n + 1,
            certified=cf.certified,
        )
    if not isinstance(x, LaurentSeries):
        a, b = x
        num = a * witness.Q - b * witness.P
        exact = Fraction(0) if num.is_zero() else _norm(q, num.degree - b.degree)
        if exact != witness.error:
            raise IdentityError("witness_error", n, f"{exact} != {witness.error}")
    return witness


@table
@dataclass
class CriterionRow:
    n: int
    degree_sum: int
    phi: Union[Fraction, float]
    bound: Fraction
    holds: bool


@dataclass
class ImprovabilityVerdict:
    """Result of the improvability criterion over ``n_range`` only."""

    phi: str
    n_range: Tuple[int, int]
    rows: List[CriterionRow] = field(default_factory=list)
    finite_range: bool = True

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def failures(self) -> List[int]:
        return [r.n for r in self.rows if not r.holds]

    @property
    def first_failure(self) -> Optional[int]:
        return next(iter(self.failures), None)

    def __str__(self):
        lo, hi = self.n_range
        if self.holds:
            return f"holds for all n in {lo}..{hi}"
        return f"fails at n={self.first_failure} (range {lo}..{hi})"

    def frame(self):
        return CriterionRow.frame(self.rows)


def is_improvable(x: Number, phi: ApproxFunction, n_range: Tuple[int, int]) -> ImprovabilityVerdict:
    """Check ``phi(q^m_n) >= q^-m_n`` for every ``n`` in ``n_range``.

    >>> F2 = FieldSpec(2)
    >>> x = counterexample_series(2, 20)
    >>> str(is_improvable(x, ApproxFunction.scaled(Fraction(1, 2)), (1, 10)))
    'fails at n=1 (range 1..10)'
    >>> is_improvable(x, ApproxFunction.reciprocal(), (1, 10)).holds
    True
    """
    lo, hi = n_range
    if lo < 1 or hi < lo:
        raise ValueError(f"n_range must satisfy 1 <= lo <= hi, got {n_range}")
    q = _field_of(x).q
    _, frac = _fractional(x)
    cf = _expansion(frac)
    cf.require(hi)
    sums, total = {}, 0
    for n, d in enumerate(cf.degrees[:hi], start=1):
        total += d
        sums[n] = total
    missing = sorted({sums[n] for n in range(lo, hi + 1) if not phi.defined_at(sums[n])})
    if missing:
        raise UndefinedAtError(f"phi={phi}", missing)
    verdict = ImprovabilityVerdict(str(phi), (lo, hi))
    for n in range(lo, hi + 1):
        m = sums[n]
        value, bound = phi.at(q, m), Fraction(1, q**m)
        verdict.rows.append(CriterionRow(n, m, value, bound, value >= bound))
    logger.info("improvability phi=%s on %d..%d: %s", phi, lo, hi, verdict)
    return verdict


def counterexample_series(q: int, precision: int) -> LaurentSeries:
    """A series whose certified partial quotients are all ``z``.

    Its degree sums are ``m_n = n``, so it fails the criterion wherever
    ``phi(q^n) q^n < 1``.

    >>> x = counterexample_series(2, 8)
    >>> str(x)
    'int=0; frac=1,0,1,0,0,0,1,0'
    """
    if precision < 2:
        raise ValueError(f"precision must be >= 2 to certify one quotient, got {precision}")
    z = Poly.monomial(FieldSpec(q), 1)
    return series_from_quotients([z] * (precision // 2), precision)


@table
@dataclass
class DistanceRow:
    n: int
    distance: Fraction
    expected: Fraction
    holds: bool


def _distance_of_multiple(x: Number, Q: Poly) -> Fraction:
    """``||Q x||``."""
    if isinstance(x, LaurentSeries):
        y = split(x)[1]
        big = y.precision + Q.degree + 1
        prod = y * LaurentSeries.from_poly(Q, big)
        val = split(prod)[1].valuation()
        if val.zero_up_to_precision:
            raise CertificationError(
                f"||Q x|| below the precision {prod.precision} of the product"
            )
        return val.norm
    a, b = x
    return dist_to_lattice((a * Q, b))


def minimal_distance_check(x: Number, n_max: int) -> List[DistanceRow]:
    """Check ``||Q_{n-1} x|| = 1/|Q_n|`` for ``n = 1..n_max``.

    Raises :class:`~laurentcf.errors.IdentityError` at the first mismatch.

    >>> F2 = FieldSpec(2)
    >>> rows = minimal_distance_check((Poly.parse(F2, "z"), Poly.parse(F2, "z^3+1")), 2)
    >>> [(r.distance, r.expected) for r in rows]
    [(Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 8), Fraction(1, 8))]
    """
    q = _field_of(x).q
    _, frac = _fractional(x)
    cf = _expansion(frac)
    cf.require(n_max)
    convs = convergents(cf, include_zero=True)
    rows = []
    for n in range(1, n_max + 1):
        distance = _distance_of_multiple(x, convs[n - 1].Q)
        expected = _norm(q, -convs[n].Q.degree)
        rows.append(DistanceRow(n, distance, expected, distance == expected))
        if distance != expected:
            raise IdentityError("minimal_distance", n, f"{distance} != {expected}")
    return rows
