"""Truncated formal Laurent series in F_q((z^-1)).

A :class:`LaurentSeries` is ``int_part + sum_{n=1}^{N} c_n z^-n`` where only the first
``N`` fractional coefficients are known; ``N`` is the precision. Every operation
returns a series whose precision counts only the coefficients fully determined by its
inputs, so a consumer never reads a coefficient that a longer input could change.

Precision rules, with ``e(x) = -v(x)`` the exponent of the leading term:

* ``x + y`` has precision ``min(N_x, N_y)``;
* ``x * y`` has precision ``min(N_x - e(y), N_y - e(x))``;
* ``1 / x`` has precision ``N - 2 v``: the long-division recurrence for the ``k``-th
  coefficient of the reciprocal reads the input coefficients ``a_0 .. a_k`` below the
  leading one, and ``a_k`` is known for ``k <= N - v``.

A negative output precision means some integer-part coefficient is undetermined and is
reported as :class:`~laurentcf.errors.PrecisionError`.

Examples
--------
>>> F2 = FieldSpec(2)
>>> x = LaurentSeries.parse(F2, "int=0; frac=1,0,1,0,0,0")
>>> str(x.reciprocal())
'int=z; frac=1,0,1,0'
>>> str(gauss_map(x))
'int=0; frac=1,0,1,0'
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

from laurentcf.errors import (
    FieldMismatchError,
    ParseError,
    PrecisionError,
    ZeroDivisionPolyError,
)

from .field_poly import FieldSpec, Poly

logger = logging.getLogger(__name__)

__all__ = [
    "LaurentSeries",
    "Valuation",
    "norm",
    "split",
    "reciprocal",
    "gauss_map",
    "from_rational",
]


@dataclass(frozen=True)
class Valuation:
    """``|x| = q^-v``; ``v`` is None when the series is zero up to ``precision``."""

    q: int
    v: Optional[int]
    precision: int

    @property
    def zero_up_to_precision(self) -> bool:
        return self.v is None

    @property
    def norm(self) -> Fraction:
        if self.v is None:
            return Fraction(0)
        return Fraction(self.q) ** (-self.v)

    @property
    def log_norm(self) -> Optional[int]:
        """``log_q |x|`` (``-v``), None for zero."""
        return None if self.v is None else -self.v

    def __str__(self):
        if self.v is None:
            return f"zero up to precision {self.precision}"
        return f"|x| = {self.q}^{-self.v}"


@dataclass(frozen=True)
class LaurentSeries:
    field: FieldSpec
    int_part: Poly
    frac: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.int_part.field != self.field:
            raise FieldMismatchError("int_part is over a different field")
        object.__setattr__(self, "frac", tuple(int(c) % self.field.q for c in self.frac))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, precision: int = 0) -> "LaurentSeries":
        return cls(field, Poly.zero(field), (0,) * precision)

    @classmethod
    def from_poly(cls, p: Poly, precision: int = 0) -> "LaurentSeries":
        return cls(p.field, p, (0,) * precision)

    @classmethod
    def from_exponents(
        cls, field: FieldSpec, coeffs: Dict[int, int], precision: int
    ) -> "LaurentSeries":
        """Build from ``{exponent: coefficient}``; exponents below ``-precision`` are dropped."""
        if precision < 0:
            raise PrecisionError(f"negative precision {precision}")
        top = max((e for e in coeffs if e >= 0), default=-1)
        int_part = Poly(field, tuple(coeffs.get(e, 0) for e in range(top + 1)))
        frac = tuple(coeffs.get(-n, 0) for n in range(1, precision + 1))
        return cls(field, int_part, frac)

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> "LaurentSeries":
        """Parse ``int=<poly>; frac=<c1,...,cN>``.

        >>> str(LaurentSeries.parse(FieldSpec(3), "int=z+2; frac=0,2"))
        'int=z+2; frac=0,2'
        """
        parts = {}
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            key, sep, value = chunk.partition("=")
            if not sep:
                raise ParseError(f"expected key=value in {chunk!r}")
            parts[key.strip()] = value.strip()
        if set(parts) != {"int", "frac"}:
            raise ParseError(f"series text needs exactly 'int' and 'frac': {text!r}")
        int_part = Poly.parse(field, parts["int"])
        frac = []
        for c in filter(None, (s.strip() for s in parts["frac"].split(","))):
            if not c.isdigit() or int(c) >= field.q:
                raise ParseError(f"coefficient {c!r} not in 0..{field.q - 1}")
            frac.append(int(c))
        return cls(field, int_part, tuple(frac))

    # -- structure ----------------------------------------------------------

    @property
    def precision(self) -> int:
        return len(self.frac)

    @property
    def q(self) -> int:
        return self.field.q

    def in_unit_ideal(self) -> bool:
        return self.int_part.is_zero()

    def coefficient(self, n: int) -> int:
        """Coefficient of ``z^-n``; ``n <= 0`` reads the integer part."""
        if n <= 0:
            return self.int_part.coeff(-n)
        if n > self.precision:
            raise PrecisionError(f"coefficient of z^-{n} beyond precision {self.precision}")
        return self.frac[n - 1]

    def exponents(self) -> Iterator[Tuple[int, int]]:
        """Known nonzero terms as ``(exponent, coefficient)``, highest first."""
        for e in range(len(self.int_part.coeffs) - 1, -1, -1):
            if self.int_part.coeffs[e]:
                yield e, self.int_part.coeffs[e]
        for n, c in enumerate(self.frac, start=1):
            if c:
                yield -n, c

    def leading_exponent(self) -> Optional[int]:
        return next((e for e, _ in self.exponents()), None)

    def valuation(self) -> Valuation:
        e = self.leading_exponent()
        return Valuation(self.q, None if e is None else -e, self.precision)

    def truncate(self, precision: int) -> "LaurentSeries":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot extend precision {self.precision} to {precision}"
            )
        return LaurentSeries(self.field, self.int_part, self.frac[:precision])

    def agrees_with(self, other: "LaurentSeries", precision: Optional[int] = None) -> bool:
        """Equal on the integer part and the first ``precision`` fractional coefficients."""
        n = min(self.precision, other.precision) if precision is None else precision
        return self.int_part == other.int_part and self.frac[:n] == other.frac[:n]

    def __str__(self):
        return f"int={self.int_part}; frac={','.join(map(str, self.frac))}"

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "LaurentSeries") -> None:
        if other.field != self.field:
            raise FieldMismatchError(
                f"series over F_{self.field.q} and F_{other.field.q}"
            )

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        n = min(self.precision, other.precision)
        frac = tuple(a + b for a, b in zip(self.frac[:n], other.frac[:n]))
        return LaurentSeries(self.field, self.int_part + other.int_part, frac)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.field, -self.int_part, tuple(-c for c in self.frac))

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        # a zero-up-to-precision factor has its unknown leading term below -N - 1
        ex = self.leading_exponent()
        ey = other.leading_exponent()
        ex = -(self.precision + 1) if ex is None else ex
        ey = -(other.precision + 1) if ey is None else ey
        out_precision = min(self.precision - ey, other.precision - ex)
        if out_precision < 0:
            raise PrecisionError(
                f"product integer part not determined (precision {out_precision})"
            )
        q = self.q
        acc: Dict[int, int] = {}
        ys = list(other.exponents())
        for e1, c1 in self.exponents():
            for e2, c2 in ys:
                e = e1 + e2
                if e >= -out_precision:
                    acc[e] = (acc.get(e, 0) + c1 * c2) % q
        return LaurentSeries.from_exponents(self.field, acc, out_precision)

    def reciprocal(self) -> "LaurentSeries":
        return reciprocal(self)


def norm(x: LaurentSeries) -> Valuation:
    """``|x|`` as a :class:`Valuation`.

    >>> F2 = FieldSpec(2)
    >>> norm(LaurentSeries.parse(F2, "int=z^2+1; frac=")).norm
    Fraction(4, 1)
    >>> norm(LaurentSeries.parse(F2, "int=0; frac=0,1,0,0,1")).norm
    Fraction(1, 4)
    >>> str(norm(LaurentSeries.zero(F2, 8)))
    'zero up to precision 8'
    """
    return x.valuation()


def split(x: LaurentSeries) -> Tuple[Poly, LaurentSeries]:
    """``([x], {x})``."""
    return x.int_part, LaurentSeries(x.field, Poly.zero(x.field), x.frac)


def reciprocal(x: LaurentSeries) -> LaurentSeries:
    """``1 / x`` on the window determined by ``x``.

    >>> F2 = FieldSpec(2)
    >>> str(reciprocal(LaurentSeries.parse(F2, "int=z^2+1; frac=0,0")))
    'int=0; frac=0,1,0,1,0,1'
    """
    val = x.valuation()
    if val.v is None:
        raise ZeroDivisionPolyError(
            f"reciprocal of a series that is zero up to precision {x.precision}"
        )
    v, n = val.v, x.precision
    out_precision = n - 2 * v
    if out_precision < 0:
        raise PrecisionError(
            f"integer part of 1/x not determined: v={v}, precision={n}"
        )
    field = x.field
    lead_exp = -v
    # a[i] is the coefficient of z^(lead_exp - i)
    count = n - v + 1
    a = [x.coefficient(-(lead_exp - i)) for i in range(count)]
    inv = field.inv(a[0])
    b = [inv]
    for k in range(1, count):
        s = sum(a[i] * b[k - i] for i in range(1, k + 1))
        b.append((-s * inv) % field.q)
    coeffs = {v - k: c for k, c in enumerate(b) if c}
    return LaurentSeries.from_exponents(field, coeffs, out_precision)


def gauss_map(x: LaurentSeries) -> LaurentSeries:
    """``T(x) = 1/x - [1/x]`` for ``x`` in the unit ideal, with ``T(0) = 0``.

    A series that is zero up to its precision maps to the zero series of precision 0,
    whose valuation again reports it as zero up to precision.
    """
    if not x.in_unit_ideal():
        raise ValueError(f"gauss_map needs |x| < 1, got integer part {x.int_part}")
    if x.valuation().zero_up_to_precision:
        return LaurentSeries.zero(x.field, 0)
    return split(reciprocal(x))[1]


def from_rational(p: Poly, q: Poly, precision: int) -> LaurentSeries:
    """The series of ``p / q`` with ``precision`` fractional coefficients.

    >>> F2 = FieldSpec(2)
    >>> str(from_rational(Poly.parse(F2, "z"), Poly.parse(F2, "z^2+1"), 6))
    'int=0; frac=1,0,1,0,1,0'
    """
    if q.is_zero():
        raise ZeroDivisionPolyError("rational with zero denominator")
    int_part, rem = divmod(p, q)
    z = Poly.monomial(p.field, 1)
    frac = []
    for _ in range(precision):
        c, rem = divmod(rem * z, q)
        frac.append(c.coeff(0))
    return LaurentSeries(p.field, int_part, tuple(frac))
