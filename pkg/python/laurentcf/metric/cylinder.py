"""Exact cylinder geometry and counting.

The order-``n`` cylinder ``I(A_1, ..., A_n)`` is a closed disc of diameter
``q^-(2 * sum deg A_i + 1)`` and Haar measure ``q^-(2 * sum deg A_i)``; both depend only
on the degree pattern. All values here are exact :class:`fractions.Fraction`.

The tail of the degree-sum law,

    S = sum_{m >= M} C(m-1, k-1) (q-1)^k q^-m,

is summed in closed form. With ``x = 1/q`` and ``S_k(M) = sum_{m >= M} C(m-1, k-1) x^m``,
Pascal's rule gives ``(1 - x) S_k(M) = C(M-1, k-1) x^M + x S_{k-1}(M)`` and
``S_1(M) = x^M / (1 - x)``.

Examples
--------
>>> count_cylinders(2, 3, 2)
16
>>> measure_degree_sum(2, 2, 2)
Fraction(1, 4)
>>> tail_measure(2, 3, 2)
Fraction(3, 4)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from laurentcf.algebra.field_poly import FieldSpec, Poly, enumerate_polys
from laurentcf.core import table

logger = logging.getLogger(__name__)

__all__ = [
    "CylinderSpec",
    "cylinder_diameter",
    "cylinder_measure",
    "gset_diameter",
    "compositions",
    "count_cylinders",
    "count_cylinders_brute",
    "measure_degree_sum",
    "tail_measure",
    "tail_partial_sum",
    "asymptotic_ratio_profile",
    "measure_sweep",
]


@dataclass(frozen=True)
class CylinderSpec:
    field: FieldSpec
    degrees: Tuple[int, ...]
    quotients: Optional[Tuple[Poly, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"cylinder degrees must be >= 1, got {self.degrees}")
        if self.quotients is not None:
            if tuple(a.degree for a in self.quotients) != self.degrees:
                raise ValueError("quotients do not match the degree pattern")

    @classmethod
    def of(cls, quotients: Sequence[Poly]) -> "CylinderSpec":
        quotients = tuple(quotients)
        return cls(quotients[0].field, tuple(a.degree for a in quotients), quotients)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def order(self) -> int:
        return len(self.degrees)

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)


def _qpow(q: int, e: int) -> Fraction:
    return Fraction(q) ** e


def cylinder_diameter(c: CylinderSpec) -> Fraction:
    """``q^-(2 * sum d_i + 1)``.

    >>> cylinder_diameter(CylinderSpec(FieldSpec(3), (2,)))
    Fraction(1, 243)
    """
    return _qpow(c.q, -(2 * c.degree_sum + 1))


def cylinder_measure(c: CylinderSpec) -> Fraction:
    """``q^-(2 * sum d_i)``.

    >>> cylinder_measure(CylinderSpec(FieldSpec(2), (1, 1)))
    Fraction(1, 16)
    """
    return _qpow(c.q, -2 * c.degree_sum)


def gset_diameter(q: int, prefix_degrees: Sequence[int], m: int) -> Fraction:
    """Diameter ``q^-(m + 2 * sum prefix)`` of the set where the next quotient has degree ``>= m``.

    >>> gset_diameter(2, (), 3)
    Fraction(1, 8)
    >>> gset_diameter(3, (1, 1), 1)
    Fraction(1, 243)
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if any(d < 1 for d in prefix_degrees):
        raise ValueError(f"prefix degrees must be >= 1, got {tuple(prefix_degrees)}")
    return _qpow(q, -(m + 2 * sum(prefix_degrees)))


def compositions(m: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ``k``-tuples of positive integers summing to ``m``.

    >>> list(compositions(3, 2))
    [(1, 2), (2, 1)]
    """
    if k < 1 or m < k:
        return
    for cuts in itertools.combinations(range(1, m), k - 1):
        bounds = (0,) + cuts + (m,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def count_cylinders(q: int, m: int, k: int) -> int:
    """Number of ``(A_1, ..., A_k)`` with ``sum deg A_i = m``: ``C(m-1, k-1) (q-1)^k q^m``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if m < k:
        return 0
    return math.comb(m - 1, k - 1) * (q - 1) ** k * q**m


def count_cylinders_brute(q: int, m: int, k: int) -> int:
    """Exhaustive count by enumerating the quotient tuples themselves."""
    field = FieldSpec(q)
    total = 0
    for degrees in compositions(m, k):
        pools = [list(enumerate_polys(field, d)) for d in degrees]
        total += sum(1 for _ in itertools.product(*pools))
    return total


def measure_degree_sum(q: int, m: int, k: int) -> Fraction:
    """``nu(sum_{i<=k} deg A_i = m) = C(m-1, k-1) (q-1)^k q^-m``."""
    return count_cylinders(q, m, k) * _qpow(q, -2 * m)


def tail_measure(q: int, M: int, k: int) -> Fraction:
    """``nu(sum_{i<=k} deg A_i >= M)``, exactly.

    >>> tail_measure(2, 1, 1)
    Fraction(1, 1)
    >>> tail_measure(3, 2, 1)
    Fraction(1, 3)
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if M <= k:
        return Fraction(1)
    x = Fraction(1, q)
    s = x**M / (1 - x)
    for j in range(2, k + 1):
        s = (math.comb(M - 1, j - 1) * x**M + x * s) / (1 - x)
    return (q - 1) ** k * s


def tail_partial_sum(q: int, M: int, k: int, m_max: int) -> Fraction:
    """``sum_{m=M}^{m_max}`` of :func:`measure_degree_sum`."""
    return sum(
        (measure_degree_sum(q, m, k) for m in range(max(M, k), m_max + 1)),
        Fraction(0),
    )


@table
@dataclass
class RatioRow:
    M: int
    tail: Fraction
    ratio: float


@dataclass
class RatioProfile:
    """``tail_measure(M, k) / (M^(k-1) q^-M)`` over a range of ``M``."""

    q: int
    k: int
    rows: List[RatioRow] = field(default_factory=list)

    @property
    def lower(self) -> float:
        return min(r.ratio for r in self.rows)

    @property
    def upper(self) -> float:
        return max(r.ratio for r in self.rows)

    def frame(self):
        return RatioRow.frame(self.rows)


def asymptotic_ratio_profile(q: int, k: int, M_max: int, M_min: Optional[int] = None) -> RatioProfile:
    """Empirical constants in ``tail_measure(M, k) ~ M^(k-1) q^-M``."""
    start = k + 1 if M_min is None else M_min
    profile = RatioProfile(q, k)
    for M in range(start, M_max + 1):
        tail = tail_measure(q, M, k)
        ratio = float(tail * Fraction(q) ** M / Fraction(M) ** (k - 1))
        profile.rows.append(RatioRow(M, tail, ratio))
    logger.debug("ratio profile q=%d k=%d: [%.6g, %.6g]", q, k, profile.lower, profile.upper)
    return profile


@table
@dataclass
class MeasureRow:
    q: int
    k: int
    m: int
    count: int
    measure: Fraction


def measure_sweep(q: int, k: int, m_values: Sequence[int]) -> List[MeasureRow]:
    return [
        MeasureRow(q, k, m, count_cylinders(q, m, k), measure_degree_sum(q, m, k))
        for m in m_values
    ]
