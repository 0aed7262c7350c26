"""Cantor-type subsets used for the lower bound of dim F_k(B).

Construction data: ``q, k, B, M, eps``, the root ``s = s_{k,M}(B)``, the window rates
``alpha_1 .. alpha_k`` and an increasing index sequence ``n_1 < n_2 < ...``.

An order-``n`` prefix ``(A_1, ..., A_n)`` is admissible (in ``D_n``) when

* position ``n_j + i`` (``1 <= i <= k``) has degree ``d_{j,i} = floor(n_j alpha_i) + 1``,
* every other position has degree between 1 and ``M``.

Mass is split top-down. At a free position each child of degree ``d`` receives the
factor ``q^-(2 s d + B f_k(s))``; the factors of one parent add to 1 exactly because
``s`` solves the truncated pressure equation. Inside a window the
``(q-1) q^{d_{j,i}}`` children share the parent mass equally.

Mass and diameter of a basic set depend on its degree pattern only through the sum of
the free degrees, so :func:`iter_degree_classes` aggregates basic sets by that sum and
the Hölder check covers every basic set of an order even when the count is far beyond
explicit enumeration.

Strict index sequences satisfy, for every ``j``,

* ``min_i n_j alpha_i / (n_j alpha_i + 2) >= (s - eps) / s``
* ``(n_{j+1} - n_j - k) / n_{j+1} >= (s - eps) / s``

and are generated from their rearranged forms ``n_1 >= 2 (s - eps) / (eps min alpha)``
and ``n_{j+1} >= s (n_j + k) / eps``.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from scipy.special import logsumexp

from laurentcf import config
from laurentcf.algebra.field_poly import FieldSpec, Poly, enumerate_polys
from laurentcf.core import table
from laurentcf.errors import BudgetExceededError, HolderViolation

from .dimension import alpha_params, f_k, solve_s_kM

logger = logging.getLogger(__name__)

# slack on the Hölder bound for float rounding of log masses
HOLDER_TOL = 1e-9

__all__ = [
    "CantorParams",
    "IndexSequence",
    "BasicSet",
    "DegreeClass",
    "gen_index_sequence",
    "enumerate_basic_sets",
    "iter_degree_classes",
    "basic_set_count",
    "mass",
    "diameter",
    "check_holder",
    "check_mass_conservation",
    "check_membership",
    "check_index_conditions",
    "local_dimension_profile",
]


def window_condition(n: int, alphas: Sequence[float], s: float, eps: float) -> bool:
    return min(n * a / (n * a + 2) for a in alphas) >= (s - eps) / s


def gap_condition(n_j: int, n_next: int, k: int, s: float, eps: float) -> bool:
    return (n_next - n_j - k) / n_next >= (s - eps) / s


@dataclass
class IndexSequence:
    """``n_1 < n_2 < ...``; strict sequences are extended on demand."""

    strict: bool
    k: int
    s: float
    eps: float
    alphas: Tuple[float, ...]
    _terms: List[int] = field(default_factory=list)

    def __post_init__(self):
        for a, b in zip(self._terms, self._terms[1:]):
            if b < a + self.k:
                raise ValueError(
                    f"index sequence needs n_(j+1) >= n_j + k, got {a}, {b} with k={self.k}"
                )
        if self._terms and self._terms[0] < 0:
            raise ValueError("index sequence terms must be >= 0")

    def _extend(self) -> bool:
        if not self.strict:
            return False
        if not self._terms:
            n = math.ceil(2 * (self.s - self.eps) / (self.eps * min(self.alphas)))
            while not window_condition(n, self.alphas, self.s, self.eps):
                n += 1
        else:
            prev = self._terms[-1]
            n = max(math.ceil(self.s * (prev + self.k) / self.eps), prev + self.k)
            while not gap_condition(prev, n, self.k, self.s, self.eps):
                n += 1
        self._terms.append(n)
        return True

    def term(self, j: int) -> Optional[int]:
        """``n_j`` (1-based), or None past the end of a supplied sequence."""
        while len(self._terms) < j:
            if not self._extend():
                return None
        return self._terms[j - 1]

    def up_to(self, order: int) -> List[int]:
        """Every ``n_j`` whose window starts at or before position ``order``."""
        out, j = [], 1
        while True:
            n = self.term(j)
            if n is None or n + 1 > order:
                return out
            out.append(n)
            j += 1

    def head(self, count: int) -> List[int]:
        return [n for n in (self.term(j) for j in range(1, count + 1)) if n is not None]


@dataclass
class CantorParams:
    q: int
    k: int
    B: float
    M: int
    eps: float
    s: float
    alphas: Tuple[float, ...]
    n_seq: Optional[IndexSequence] = None

    @classmethod
    def build(
        cls,
        q: int,
        k: int,
        B: float,
        M: int,
        eps: float,
        relaxed: Optional[Sequence[int]] = None,
    ) -> "CantorParams":
        FieldSpec(q)  # rejects non-prime q
        s = solve_s_kM(q, k, B, M)
        if not 0 < eps < s - 0.5:
            raise ValueError(f"eps must lie in (0, s - 1/2) = (0, {s - 0.5:.6g}), got {eps}")
        alphas = tuple(alpha_params(q, k, B, s))
        params = cls(q, k, float(B), M, eps, s, alphas)
        params.n_seq = gen_index_sequence(params, relaxed)
        logger.info(
            "cantor q=%d k=%d B=%g M=%d eps=%g: s=%.12g, n_1=%s (%s)",
            q, k, B, M, eps, s, params.n_seq.term(1),
            "strict" if params.n_seq.strict else "relaxed",
        )
        return params

    @property
    def strict(self) -> bool:
        return self.n_seq.strict

    @property
    def bound(self) -> float:
        return self.s - self.eps

    @property
    def free_factor(self) -> float:
        """``B f_k(s)``."""
        return self.B * f_k(self.s, self.k)

    def layout(self, order: int) -> List[Optional[int]]:
        """Forced degree per position ``1..order``; None marks a free position."""
        forced: List[Optional[int]] = [None] * order
        for n_j in self.n_seq.up_to(order):
            for i, a in enumerate(self.alphas, start=1):
                pos = n_j + i
                if pos <= order:
                    forced[pos - 1] = math.floor(n_j * a) + 1
        return forced

    def next_forced(self, order: int) -> Optional[int]:
        return self.layout(order + 1)[order]


def gen_index_sequence(
    params: CantorParams, relaxed: Optional[Sequence[int]] = None
) -> IndexSequence:
    """Strict sequence from the closed-form rearrangement, or the supplied relaxed one."""
    if params.eps >= params.s:
        raise ValueError(f"eps={params.eps} must be below s={params.s}")
    if relaxed is None:
        return IndexSequence(True, params.k, params.s, params.eps, tuple(params.alphas))
    terms = [int(n) for n in relaxed]
    if any(b <= a for a, b in zip(terms, terms[1:])):
        raise ValueError(f"relaxed index sequence must increase, got {terms}")
    return IndexSequence(False, params.k, params.s, params.eps, tuple(params.alphas), terms)


@table
@dataclass
class IndexConditionRow:
    j: int
    n_j: int
    window_ratio: float
    gap_ratio: Optional[float]
    bound: float
    window_ok: bool
    gap_ok: Optional[bool]


def check_index_conditions(params: CantorParams, j_max: int) -> List[IndexConditionRow]:
    """Evaluate both index conditions for ``j = 1..j_max`` (rows, never raises)."""
    seq = params.n_seq
    bound = (params.s - params.eps) / params.s
    rows = []
    for j in range(1, j_max + 1):
        n = seq.term(j)
        if n is None:
            break
        window = min(n * a / (n * a + 2) for a in params.alphas)
        nxt = seq.term(j + 1)
        gap = None if nxt is None else (nxt - n - params.k) / nxt
        rows.append(
            IndexConditionRow(
                j, n, window, gap, bound, window >= bound, None if gap is None else gap >= bound
            )
        )
    return rows


@dataclass(frozen=True)
class BasicSet:
    degrees: Tuple[int, ...]
    order: int
    diameter: Fraction
    log_mass: float
    multiplicity: int = 1
    quotients: Optional[Tuple[Poly, ...]] = None

    @property
    def ratio(self) -> float:
        """``log mu / log |J|``."""
        d = self.diameter
        return self.log_mass / (math.log(d.numerator) - math.log(d.denominator))


def _check_admissible(params: CantorParams, degrees: Sequence[int]) -> List[Optional[int]]:
    forced = params.layout(len(degrees))
    for pos, (d, f) in enumerate(zip(degrees, forced), start=1):
        if f is not None and d != f:
            raise ValueError(f"degree {d} at position {pos} must be {f}")
        if f is None and not 1 <= d <= params.M:
            raise ValueError(f"degree {d} at position {pos} outside 1..{params.M}")
    return forced


def _diameter_exponent(params: CantorParams, order: int, degree_sum: int) -> int:
    nxt = params.next_forced(order)
    return 2 * degree_sum + (nxt if nxt is not None else 1)


def _log_mass(params: CantorParams, free_sum: int, free_count: int, window_degrees: Sequence[int]) -> float:
    ln_q = math.log(params.q)
    value = -(2 * params.s * free_sum + free_count * params.free_factor) * ln_q
    value -= sum(math.log(params.q - 1) + d * ln_q for d in window_degrees)
    return value


def mass(params: CantorParams, degrees: Sequence[int]) -> float:
    """Natural log of the mass of the basic set with this degree pattern.

    >>> p = CantorParams.build(2, 1, 1.0, 4, 0.05, relaxed=[3])
    >>> round(mass(p, (1,)), 12) == round(-(2 * p.s + p.free_factor) * math.log(2), 12)
    True
    """
    forced = _check_admissible(params, degrees)
    free = [d for d, f in zip(degrees, forced) if f is None]
    windows = [d for d, f in zip(degrees, forced) if f is not None]
    return _log_mass(params, sum(free), len(free), windows)


def diameter(params: CantorParams, degrees: Sequence[int]) -> Fraction:
    _check_admissible(params, degrees)
    return Fraction(params.q) ** -_diameter_exponent(params, len(degrees), sum(degrees))


def basic_set_count(params: CantorParams, order: int, explicit: bool = True) -> int:
    """``|D_n|`` (or the number of degree patterns with ``explicit=False``)."""
    q, total = params.q, 1
    per_free = sum((q - 1) * q**d for d in range(1, params.M + 1)) if explicit else params.M
    for f in params.layout(order):
        if f is None:
            total *= per_free
        elif explicit:
            total *= (q - 1) * q**f
    return total


def enumerate_basic_sets(
    params: CantorParams,
    depth: int,
    explicit: bool = False,
    budget: Optional[int] = None,
) -> Iterator[BasicSet]:
    """Every order-``depth`` basic set once.

    By default one :class:`BasicSet` per degree pattern, with ``multiplicity`` the
    number of prefixes sharing it; ``explicit=True`` yields every polynomial prefix.
    The size is computed before enumeration starts and checked against ``budget``.
    """
    budget = int(config.get("laurentcf.budget")) if budget is None else budget
    estimate = basic_set_count(params, depth, explicit)
    if estimate > budget:
        raise BudgetExceededError(estimate, budget)
    logger.info("enumerating %d basic sets of order %d", estimate, depth)
    forced = params.layout(depth)
    choices = [range(1, params.M + 1) if f is None else (f,) for f in forced]
    field_ = FieldSpec(params.q)
    q = params.q
    for degrees in itertools.product(*choices):
        free = [d for d, f in zip(degrees, forced) if f is None]
        windows = [d for d, f in zip(degrees, forced) if f is not None]
        log_mass = _log_mass(params, sum(free), len(free), windows)
        diam = Fraction(q) ** -_diameter_exponent(params, depth, sum(degrees))
        if not explicit:
            mult = math.prod((q - 1) * q**d for d in degrees)
            yield BasicSet(tuple(degrees), depth, diam, log_mass, mult)
            continue
        pools = [list(enumerate_polys(field_, d)) for d in degrees]
        for quotients in itertools.product(*pools):
            yield BasicSet(tuple(degrees), depth, diam, log_mass, 1, quotients)


def bounded_compositions(total: int, parts: int, cap: int) -> int:
    """Number of ``parts``-tuples in ``1..cap`` summing to ``total``.

    >>> bounded_compositions(4, 2, 2)
    1
    >>> bounded_compositions(3, 2, 2)
    2
    """
    if parts == 0:
        return 1 if total == 0 else 0
    if not parts <= total <= parts * cap:
        return 0
    return sum(
        (-1) ** t * math.comb(parts, t) * math.comb(total - t * cap - 1, parts - 1)
        for t in range((total - parts) // cap + 1)
    )


@dataclass(frozen=True)
class DegreeClass:
    """All order-``n`` basic sets whose free degrees add up to ``free_sum``."""

    order: int
    free_count: int
    free_sum: int
    window_degrees: Tuple[int, ...]
    log_mass: float
    diameter_exponent: int
    q: int
    M: int

    @property
    def count(self) -> int:
        windows = math.prod((self.q - 1) * self.q**d for d in self.window_degrees)
        free = (self.q - 1) ** self.free_count * self.q**self.free_sum
        return free * windows * bounded_compositions(self.free_sum, self.free_count, self.M)

    @property
    def ratio(self) -> float:
        return self.log_mass / (-self.diameter_exponent * math.log(self.q))

    def representative(self, layout: Sequence[Optional[int]]) -> Tuple[int, ...]:
        """One degree pattern of the class, free degrees filled from the left."""
        extra = self.free_sum - self.free_count
        out = []
        for f in layout:
            if f is not None:
                out.append(f)
                continue
            d = 1 + min(extra, self.M - 1)
            extra -= d - 1
            out.append(d)
        return tuple(out)


def iter_degree_classes(params: CantorParams, order: int) -> Iterator[DegreeClass]:
    layout = params.layout(order)
    windows = tuple(f for f in layout if f is not None)
    free_count = len(layout) - len(windows)
    window_sum = sum(windows)
    for free_sum in range(free_count, free_count * params.M + 1):
        yield DegreeClass(
            order,
            free_count,
            free_sum,
            windows,
            _log_mass(params, free_sum, free_count, windows),
            _diameter_exponent(params, order, free_sum + window_sum),
            params.q,
            params.M,
        )


@table
@dataclass
class HolderRow:
    order: int
    worst_ratio: float
    bound: float
    passed: bool
    classes: int


@dataclass
class HolderReport:
    strict: bool
    bound: float
    rows: List[HolderRow] = field(default_factory=list)
    violations: List[Tuple[int, Tuple[int, ...], float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def worst_ratio(self) -> float:
        return min(r.worst_ratio for r in self.rows)

    def frame(self):
        return HolderRow.frame(self.rows)


def check_holder(
    params: CantorParams,
    depth: int,
    start: Optional[int] = None,
    method: str = "classes",
) -> HolderReport:
    """Check ``log mu(J) <= (s - eps) log |J|`` for every basic set of orders ``start..depth``.

    ``start`` defaults to ``n_1``. In strict mode a violation raises
    :class:`~laurentcf.errors.HolderViolation`; relaxed sequences are allowed to fail
    and the violations are only recorded. ``method="enumerate"`` walks the degree
    patterns instead of the classes.
    """
    n_1 = params.n_seq.term(1)
    if start is None:
        start = n_1 if n_1 is not None else 1
    if params.strict and depth < n_1:
        raise ValueError(f"depth {depth} is below n_1 = {n_1}")
    start = max(start, 1)
    bound = params.bound
    report = HolderReport(params.strict, bound)
    for order in range(start, depth + 1):
        if method == "classes":
            layout = params.layout(order)
            items = [(c.ratio, c.representative(layout)) for c in iter_degree_classes(params, order)]
        elif method == "enumerate":
            items = [(b.ratio, b.degrees) for b in enumerate_basic_sets(params, order)]
        else:
            raise ValueError(f"unknown method {method!r}")
        worst, degrees = min(items)
        passed = worst >= bound - HOLDER_TOL
        report.rows.append(HolderRow(order, worst, bound, passed, len(items)))
        if not passed:
            if params.strict:
                raise HolderViolation(degrees, order, worst, bound)
            report.violations.append((order, degrees, worst))
    logger.info(
        "holder check orders %d..%d: worst ratio %.12g vs bound %.12g",
        start, depth, report.worst_ratio if report.rows else math.nan, bound,
    )
    return report


def check_mass_conservation(
    params: CantorParams, depth: int, tol: float = 1e-10, budget: Optional[int] = None
) -> float:
    """Walk every degree pattern of order ``< depth`` and compare the children's mass to the parent's.

    Returns the largest relative deviation; raises ``AssertionError`` above ``tol``.
    Also checks that each order carries total mass 1.
    """
    budget = int(config.get("laurentcf.budget")) if budget is None else budget
    estimate = sum(basic_set_count(params, n, explicit=False) for n in range(depth))
    if estimate > budget:
        raise BudgetExceededError(estimate, budget, "degree patterns")
    q = params.q
    worst = 0.0
    layout = params.layout(depth)
    for order in range(depth):
        f = layout[order]
        child_degrees = range(1, params.M + 1) if f is None else (f,)
        choices = [range(1, params.M + 1) if g is None else (g,) for g in layout[:order]]
        for parent in itertools.product(*choices):
            parent_log = mass(params, parent) if order else 0.0
            child_logs = [mass(params, parent + (d,)) + math.log((q - 1) * q**d) for d in child_degrees]
            dev = abs(math.expm1(logsumexp(child_logs) - parent_log))
            worst = max(worst, dev)
            if dev > tol:
                raise AssertionError(
                    f"mass not conserved below {parent}: relative deviation {dev:.3g}"
                )
    for order in range(1, depth + 1):
        logs = [c.log_mass + math.log(c.count) for c in iter_degree_classes(params, order)]
        dev = abs(math.expm1(logsumexp(logs)))
        worst = max(worst, dev)
        if dev > tol:
            raise AssertionError(f"total mass at order {order} deviates from 1 by {dev:.3g}")
    return worst


@table
@dataclass
class MembershipRow:
    j: int
    n_j: int
    window_degree_sum: int
    required: float
    ok: bool


def check_membership(params: CantorParams, j_max: int) -> List[MembershipRow]:
    """Per window: ``sum_i (floor(n_j alpha_i) + 1) >= n_j B``."""
    rows = []
    for j, n in enumerate(params.n_seq.head(j_max), start=1):
        total = sum(math.floor(n * a) + 1 for a in params.alphas)
        rows.append(MembershipRow(j, n, total, n * params.B, total >= n * params.B))
    return rows


@table
@dataclass
class ProfileRow:
    order: int
    min_ratio: float
    mean_ratio: float
    max_ratio: float
    classes: int


def local_dimension_profile(params: CantorParams, depth: int, start: int = 1):
    """Per-order summary of ``log mu / log |J|`` over all basic sets, as a DataFrame.

    ``mean_ratio`` is weighted by mass. Order 0 (the whole space) has no ratio.
    """
    rows = []
    for order in range(max(start, 1), depth + 1):
        classes = list(iter_degree_classes(params, order))
        ratios = [c.ratio for c in classes]
        weights = [c.log_mass + math.log(c.count) for c in classes]
        norm = logsumexp(weights)
        mean = sum(r * math.exp(w - norm) for r, w in zip(ratios, weights))
        rows.append(ProfileRow(order, min(ratios), mean, max(ratios), len(classes)))
    return ProfileRow.frame(rows)
