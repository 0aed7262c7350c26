"""Arithmetic in F_q (q prime) and in F_q[z].

Polynomials are immutable and stored as coefficient tuples in ascending order of the
power of z, with no trailing zero; the zero polynomial is the empty tuple and has
degree :data:`NEG_INF`, a marker that is smaller than every integer and absorbs
addition, so ``deg(a) + deg(b)`` stays correct when one factor is zero.

The text form is symbolic (``z^2+1``, ``2*z^3 + z + 1``; the ``*`` is optional and
terms may come in any order) and round-trips through :meth:`Poly.parse`.

Examples
--------
>>> F2 = FieldSpec(2)
>>> a = Poly.parse(F2, "z+1")
>>> str(a * a)
'z^2+1'
>>> [str(p) for p in divrem(Poly.parse(F2, "z^2+1"), Poly.parse(F2, "z"))]
['z', '1']
>>> F3 = FieldSpec(3)
>>> str(gcd(Poly.parse(F3, "z^2+2"), Poly.parse(F3, "z+1")))
'z+1'
"""

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

import sympy

from laurentcf.errors import FieldMismatchError, ParseError, ZeroDivisionPolyError

__all__ = [
    "FieldSpec",
    "NEG_INF",
    "Poly",
    "add",
    "sub",
    "mul",
    "divrem",
    "gcd",
    "enumerate_polys",
]


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_q.

    >>> FieldSpec(5).inv(2)
    3
    >>> FieldSpec(4)
    Traceback (most recent call last):
    ...
    ValueError: q must be prime, got 4
    """

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not sympy.isprime(self.q):
            raise ValueError(f"q must be prime, got {self.q}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.q}")
        return pow(a, self.q - 2, self.q)

    def elements(self) -> range:
        return range(self.q)


@functools.total_ordering
class _NegativeInfinity:
    """Degree of the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("laurentcf.NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-inf"


NEG_INF = _NegativeInfinity()

_TERM = re.compile(r"^(?P<coef>\d+)?\*?(?P<var>z(\^(?P<exp>\d+))?)?$")


@dataclass(frozen=True)
class Poly:
    """A polynomial over ``field`` with ascending coefficients."""

    field: FieldSpec
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        q = self.field.q
        cs = [int(c) % q for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c: int = 1) -> "Poly":
        return cls(field, (0,) * degree + (c,))

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> "Poly":
        """Parse the symbolic form.

        >>> str(Poly.parse(FieldSpec(3), "1 + 2z^2 + z"))
        '2*z^2+z+1'
        >>> str(Poly.parse(FieldSpec(3), "z^2-1"))
        'z^2+2'
        """
        compact = re.sub(r"\s+", "", text)
        if not compact:
            raise ParseError("empty polynomial text")
        if compact[0] not in "+-":
            compact = "+" + compact
        terms = re.findall(r"[+-][^+-]*", compact)
        if "".join(terms) != compact:
            raise ParseError(f"malformed polynomial {text!r}")
        acc = {}
        for term in terms:
            sign, body = term[0], term[1:]
            m = _TERM.match(body)
            if not body or m is None or (m.group("coef") is None and m.group("var") is None):
                raise ParseError(f"malformed term {term!r} in {text!r}")
            coef = int(m.group("coef")) if m.group("coef") is not None else 1
            if coef >= field.q:
                raise ParseError(f"coefficient {coef} not in 0..{field.q - 1}")
            if m.group("var") is None:
                exp = 0
            else:
                exp = int(m.group("exp")) if m.group("exp") is not None else 1
            if sign == "-":
                coef = -coef
            acc[exp] = acc.get(exp, 0) + coef
        top = max(acc)
        return cls(field, tuple(acc.get(e, 0) for e in range(top + 1)))

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> Union[int, _NegativeInfinity]:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.field.inv(self.leading)
        return Poly(self.field, tuple(c * inv for c in self.coeffs))

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def norm_exponent(self) -> Union[int, _NegativeInfinity]:
        """log_q |P|_inf, which is the degree."""
        return self.degree

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
                continue
            prefix = "" if c == 1 else f"{c}*"
            parts.append(prefix + ("z" if e == 1 else f"z^{e}"))
        return "+".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r}, q={self.field.q})"

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly.constant(self.field, other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(
                f"polynomials over F_{self.field.q} and F_{other.field.q}"
            )
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            self.field, tuple(self.coeff(i) + other.coeff(i) for i in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.field)
        q = self.field.q
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % q
        return Poly(self.field, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionPolyError("division by the zero polynomial")
        q = self.field.q
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return Poly.zero(self.field), self
        inv = self.field.inv(other.leading)
        quot = [0] * (len(rem) - db)
        for shift in range(len(rem) - 1 - db, -1, -1):
            c = rem[shift + db] * inv % q
            if c == 0:
                continue
            quot[shift] = c
            for j, b in enumerate(other.coeffs):
                rem[shift + j] = (rem[shift + j] - c * b) % q
        return Poly(self.field, tuple(quot)), Poly(self.field, tuple(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, exponent: int):
        result = Poly.one(self.field)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


def add(a: Poly, b: Poly) -> Poly:
    return a + b


def sub(a: Poly, b: Poly) -> Poly:
    return a - b


def mul(a: Poly, b: Poly) -> Poly:
    return a * b


def divrem(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    """Quotient and remainder with ``deg r < deg b``."""
    return divmod(a, b)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    b = a._check(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def enumerate_polys(field: FieldSpec, degree: int) -> Iterator[Poly]:
    """Yield every polynomial of exact ``degree``, each once.

    There are ``(q-1) * q**degree`` of them.

    >>> [str(p) for p in enumerate_polys(FieldSpec(2), 1)]
    ['z', 'z+1']
    >>> sum(1 for _ in enumerate_polys(FieldSpec(3), 2))
    18
    """
    if not isinstance(degree, int) or degree <= 0:
        raise ValueError(f"degree must be >= 1, got {degree}")
    for lead in range(1, field.q):
        for lower in itertools.product(field.elements(), repeat=degree):
            yield Poly(field, tuple(reversed(lower)) + (lead,))
