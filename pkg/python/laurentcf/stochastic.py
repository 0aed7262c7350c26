"""Monte Carlo checks of the Haar-measure laws of partial-quotient degrees.

Haar measure on the unit ideal makes the coefficients ``c_1, c_2, ...`` independent and
uniform on F_q, so a sample truncated to ``N`` coefficients is the rational
``P / z^N`` with ``P = sum_n c_n z^(N-n)``. Its partial-quotient degrees come from the
Euclidean algorithm on ``(z^N, P)``; only the prefix certified by
``2 * sum deg A_i <= N`` is used and a sample that is not certified deep enough for a
statistic is discarded and counted.

Sampling is split into chunks, each drawing from its own child of
``numpy.random.SeedSequence(seed)``, so results depend only on the seed and the chunk
size.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from laurentcf import config
from laurentcf.algebra.field_poly import FieldSpec, Poly
from laurentcf.algebra.laurent import LaurentSeries
from laurentcf.core import table
from laurentcf.metric.cylinder import tail_measure
from laurentcf.metric.growth import GrowthFunction

logger = logging.getLogger(__name__)

# cells of the chi-square test keep at least this many expected counts
MIN_EXPECTED = 5

# tails of degree sums past this are below the smallest float; recorded as 0
EXACT_TAIL_MAX = 2048

__all__ = [
    "SamplerConfig",
    "default_precision",
    "sample_coefficients",
    "sample_uniform",
    "certified_degrees",
    "sample_degrees",
    "degree_law",
    "degree_distribution",
    "independence_check",
    "independence_from_pairs",
    "tail_event_frequency",
    "measure_dichotomy_series",
]


def default_precision(q: int, position: int) -> int:
    """Coefficients needed to certify ``position`` quotients with overwhelming probability.

    A partial-quotient degree has mean ``q/(q-1)`` and variance ``q/(q-1)^2``; the
    precision covers twice the mean degree sum plus six standard deviations.

    >>> default_precision(2, 1)
    32
    >>> default_precision(2, 14)
    128
    """
    mu = q / (q - 1)
    sigma = math.sqrt(q) / (q - 1)
    n = 2 * math.ceil(position * mu + 6 * sigma * math.sqrt(position) + 4)
    return max(n, int(config.get("laurentcf.mc.min_precision")))


@dataclass(frozen=True)
class SamplerConfig:
    q: int
    n_samples: int
    seed: int = 0
    precision: Optional[int] = None
    chunk_size: Optional[int] = None

    def __post_init__(self):
        FieldSpec(self.q)
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.precision is not None and self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")

    def resolved_precision(self, position: int) -> int:
        return self.precision if self.precision is not None else default_precision(self.q, position)

    def resolved_chunk_size(self) -> int:
        size = self.chunk_size or int(config.get("laurentcf.mc.chunk_size"))
        if size < 1:
            raise ValueError(f"chunk size must be >= 1, got {size}")
        return size


def sample_coefficients(cfg: SamplerConfig, precision: int) -> Iterator[np.ndarray]:
    """Chunks of shape ``(rows, precision)`` of uniform coefficients ``c_1..c_N``."""
    size = cfg.resolved_chunk_size()
    n_chunks = -(-cfg.n_samples // size)
    children = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    for i, child in enumerate(children):
        rows = min(size, cfg.n_samples - i * size)
        gen = np.random.default_rng(child)
        yield gen.integers(0, cfg.q, size=(rows, precision), dtype=np.int64)


def sample_uniform(cfg: SamplerConfig, precision: Optional[int] = None) -> Iterator[LaurentSeries]:
    """Haar-random elements of the unit ideal, one :class:`LaurentSeries` each."""
    field_ = FieldSpec(cfg.q)
    zero = Poly.zero(field_)
    n = cfg.resolved_precision(1) if precision is None else precision
    for chunk in sample_coefficients(cfg, n):
        for row in chunk:
            yield LaurentSeries(field_, zero, tuple(row.tolist()))


def _degrees_gf2(p: int, precision: int, limit: int) -> List[int]:
    # F_2[z] as int bitmasks, bit e = coefficient of z^e
    a, b = 1 << precision, p
    out, total = [], 0
    while b and len(out) < limit:
        da, db = a.bit_length() - 1, b.bit_length() - 1
        d = da - db
        total += d
        if 2 * total > precision:
            break
        out.append(d)
        while a and a.bit_length() >= b.bit_length():
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return out


def _degrees_generic(field_: FieldSpec, coeffs: Sequence[int], precision: int, limit: int) -> List[int]:
    a = Poly.monomial(field_, precision)
    b = Poly(field_, tuple(reversed(coeffs)))
    out, total = [], 0
    while not b.is_zero() and len(out) < limit:
        d = a.degree - b.degree
        total += d
        if 2 * total > precision:
            break
        out.append(d)
        a, b = b, a % b
    return out


def certified_degrees(q: int, coeffs: Sequence[int], limit: Optional[int] = None) -> List[int]:
    """Certified partial-quotient degrees of the series with coefficients ``c_1..c_N``.

    >>> certified_degrees(2, [1, 0, 1, 0, 1, 0, 1, 0])
    [1, 1]
    """
    n = len(coeffs)
    limit = n if limit is None else limit
    if q == 2:
        p = 0
        for c in coeffs:
            p = (p << 1) | int(c)
        return _degrees_gf2(p, n, limit)
    return _degrees_generic(FieldSpec(q), [int(c) for c in coeffs], n, limit)


def _chunk_degrees(q: int, chunk: np.ndarray, limit: int) -> Iterator[List[int]]:
    n = chunk.shape[1]
    if q == 2:
        packed = np.packbits(chunk.astype(np.uint8), axis=1)
        shift = 8 * packed.shape[1] - n
        for row in packed:
            yield _degrees_gf2(int.from_bytes(row.tobytes(), "big") >> shift, n, limit)
        return
    field_ = FieldSpec(q)
    for row in chunk:
        yield _degrees_generic(field_, row.tolist(), n, limit)


def sample_degrees(cfg: SamplerConfig, positions: int) -> Iterator[List[int]]:
    """Certified degree prefixes (at most ``positions`` long) of every sample."""
    n = cfg.resolved_precision(positions)
    for chunk in sample_coefficients(cfg, n):
        yield from _chunk_degrees(cfg.q, chunk, positions)


def degree_law(q: int, j: int) -> Fraction:
    """``nu(deg A_i = j) = (q-1) q^-j`` for every position ``i``."""
    return Fraction(q - 1, q**j)


def _tail_or_zero(q: int, M: int, k: int) -> Fraction:
    if M > EXACT_TAIL_MAX:
        return Fraction(0)
    return tail_measure(q, M, k)


def _binomial_z(count: int, n: int, p: float) -> Tuple[float, float]:
    sigma = math.sqrt(n * p * (1 - p)) if n else 0.0
    z = (count - n * p) / sigma if sigma > 0 else 0.0
    return sigma, z


@table
@dataclass
class DegreeRow:
    degree: int
    count: int
    empirical: float
    exact: Fraction
    sigma: float
    z: float


@dataclass
class DegreeReport:
    q: int
    position: int
    precision: int
    total: int
    used: int
    discarded: int
    rows: List[DegreeRow] = field(default_factory=list)

    @property
    def max_abs_z(self) -> float:
        return max(abs(r.z) for r in self.rows)

    def frame(self):
        return DegreeRow.frame(self.rows)


def degree_distribution(cfg: SamplerConfig, position: int, max_degree: Optional[int] = None) -> DegreeReport:
    """Histogram of ``deg A_position`` against ``(q-1) q^-j``."""
    if position < 1:
        raise ValueError(f"position must be >= 1, got {position}")
    counts: Counter = Counter()
    total = used = 0
    for degrees in sample_degrees(cfg, position):
        total += 1
        if len(degrees) < position:
            continue
        used += 1
        counts[degrees[position - 1]] += 1
    top = max_degree if max_degree is not None else max(counts, default=1)
    report = DegreeReport(cfg.q, position, cfg.resolved_precision(position), total, used, total - used)
    for j in range(1, top + 1):
        exact = degree_law(cfg.q, j)
        sigma, z = _binomial_z(counts[j], used, float(exact))
        empirical = counts[j] / used if used else math.nan
        report.rows.append(DegreeRow(j, counts[j], empirical, exact, sigma, z))
    logger.info(
        "degree histogram q=%d position=%d: %d used, %d discarded, max |z| %.3g",
        cfg.q, position, used, report.discarded, report.max_abs_z,
    )
    return report


@table
@dataclass
class CellRow:
    first: str
    second: str
    observed: int
    expected: float


@dataclass
class IndependenceReport:
    q: int
    positions: Tuple[int, int]
    cutoff: int
    statistic: float
    dof: int
    p_value: float
    total: int = 0
    used: int = 0
    discarded: int = 0
    rows: List[CellRow] = field(default_factory=list)

    def rejected(self, alpha: float = 1e-3) -> bool:
        return self.p_value < alpha

    def frame(self):
        return CellRow.frame(self.rows)


def _bin_probs(q: int, cutoff: int) -> List[float]:
    # degrees 1..cutoff-1 and one tail bin for >= cutoff
    probs = [float(degree_law(q, d)) for d in range(1, cutoff)]
    probs.append(float(Fraction(1, q ** (cutoff - 1))))
    return probs


def _auto_cutoff(q: int, n: int) -> int:
    cutoff = 2
    while True:
        probs = _bin_probs(q, cutoff + 1)
        if min(probs) ** 2 * n < MIN_EXPECTED:
            return cutoff
        cutoff += 1


def _label(d: int, cutoff: int) -> str:
    return f">={cutoff}" if d >= cutoff else str(d)


def independence_from_pairs(
    pairs: Sequence[Tuple[int, int]],
    q: int,
    cutoff: Optional[int] = None,
    positions: Tuple[int, int] = (1, 2),
) -> IndependenceReport:
    """Chi-square of a joint degree histogram against the product of the exact marginals.

    The law is fully specified, so the test has ``cells - 1`` degrees of freedom.
    """
    n = len(pairs)
    if n == 0:
        raise ValueError("no pairs to test")
    cutoff = _auto_cutoff(q, n) if cutoff is None else cutoff
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    probs = _bin_probs(q, cutoff)
    observed = np.zeros((cutoff, cutoff), dtype=np.int64)
    for a, b in pairs:
        observed[min(a, cutoff) - 1, min(b, cutoff) - 1] += 1
    expected = n * np.outer(probs, probs)
    statistic = float(((observed - expected) ** 2 / expected).sum())
    dof = cutoff * cutoff - 1
    p_value = float(stats.chi2.sf(statistic, dof))
    report = IndependenceReport(q, positions, cutoff, statistic, dof, p_value, n, n, 0)
    for i in range(cutoff):
        for j in range(cutoff):
            report.rows.append(
                CellRow(_label(i + 1, cutoff), _label(j + 1, cutoff), int(observed[i, j]), float(expected[i, j]))
            )
    return report


def independence_check(
    cfg: SamplerConfig, positions: Tuple[int, int] = (1, 2), cutoff: Optional[int] = None
) -> IndependenceReport:
    i, j = positions
    if not 1 <= i < j:
        raise ValueError(f"positions must satisfy 1 <= i < j, got {positions}")
    pairs, total = [], 0
    for degrees in sample_degrees(cfg, j):
        total += 1
        if len(degrees) >= j:
            pairs.append((degrees[i - 1], degrees[j - 1]))
    report = independence_from_pairs(pairs, cfg.q, cutoff, positions)
    report.total, report.discarded = total, total - len(pairs)
    logger.info(
        "independence of deg A_%d, deg A_%d: chi2=%.4g dof=%d p=%.4g (%d discarded)",
        i, j, report.statistic, report.dof, report.p_value, report.discarded,
    )
    return report


@table
@dataclass
class TailRow:
    n: int
    phi: float
    M: int
    hits: int
    used: int
    discarded: int
    empirical: float
    exact: Fraction
    sigma: float
    z: float


@table
@dataclass
class HitTrendRow:
    n_upper: int
    mean_hits: float
    samples: int


@dataclass
class TailReport:
    q: int
    k: int
    phi: str
    n_range: Tuple[int, int]
    truncated_at: Optional[int] = None
    rows: List[TailRow] = field(default_factory=list)
    trend: List[HitTrendRow] = field(default_factory=list)

    def frame(self):
        return TailRow.frame(self.rows)

    def trend_frame(self):
        return HitTrendRow.frame(self.trend)


def tail_event_frequency(
    cfg: SamplerConfig,
    k: int,
    phi: GrowthFunction,
    n_range: Tuple[int, int],
    min_used_fraction: float = 0.5,
) -> TailReport:
    """Frequency of ``sum_{i=1}^k deg A_{n+i} >= Phi(n)`` per ``n`` against the exact tail.

    The hit-count trend counts, per sample, how many ``n`` in a growing prefix of the
    range hit; it is a finite-range proxy for the infinitely-often dichotomy. The range
    is cut, with a warning, where fewer than ``min_used_fraction`` of the samples are
    certified to ``n + k``.
    """
    lo, hi = n_range
    if k < 1 or lo < 0 or hi < lo:
        raise ValueError(f"need k >= 1 and 0 <= lo <= hi, got k={k}, n_range={n_range}")
    deepest = hi + k
    prefixes = [list(d) for d in sample_degrees(cfg, deepest)]
    total = len(prefixes)
    report = TailReport(cfg.q, k, str(phi), (lo, hi))
    hits_per_sample = np.zeros((total, hi - lo + 1), dtype=np.int64)
    depth_ok = np.zeros((total, hi - lo + 1), dtype=bool)
    for n in range(lo, hi + 1):
        value = phi(n)
        M = max(math.ceil(value), 1) if math.isfinite(value) else None
        hits = used = 0
        for s, degrees in enumerate(prefixes):
            if len(degrees) < n + k:
                continue
            used += 1
            depth_ok[s, n - lo] = True
            if M is not None and sum(degrees[n : n + k]) >= M:
                hits += 1
                hits_per_sample[s, n - lo] = 1
        if used < min_used_fraction * total:
            report.truncated_at = n
            logger.warning(
                "tail events truncated at n=%d: only %d of %d samples certified to position %d",
                n, used, total, n + k,
            )
            break
        exact = _tail_or_zero(cfg.q, M, k) if M is not None else Fraction(0)
        sigma, z = _binomial_z(hits, used, float(exact))
        report.rows.append(
            TailRow(n, value, M if M is not None else -1, hits, used, total - used,
                    hits / used if used else math.nan, exact, sigma, z)
        )
    last = report.rows[-1].n if report.rows else lo - 1
    for upper in range(lo, last + 1):
        width = upper - lo + 1
        complete = depth_ok[:, :width].all(axis=1)
        count = int(complete.sum())
        mean = float(hits_per_sample[complete, :width].sum(axis=1).mean()) if count else math.nan
        report.trend.append(HitTrendRow(upper, mean, count))
    logger.info("tail events q=%d k=%d phi=%s: %d rows", cfg.q, k, phi, len(report.rows))
    return report


@table
@dataclass
class DichotomyRow:
    n: int
    term: float
    partial_sum: float
    exact_term: float
    exact_partial_sum: float


def measure_dichotomy_series(q: int, k: int, phi: GrowthFunction, n_max: int, n_min: int = 1) -> List[DichotomyRow]:
    """Partial sums of ``Phi(n)^(k-1) q^-Phi(n)`` and of the exact tail measures.

    Divergence of this series decides whether the degree sums exceed ``Phi(n)``
    infinitely often for almost every ``x``.
    """
    rows: List[DichotomyRow] = []
    partial = exact_partial = 0.0
    for n in range(n_min, n_max + 1):
        value = max(phi(n), float(k))
        if math.isfinite(value):
            term = math.exp((k - 1) * math.log(value) - value * math.log(q))
            exact = float(_tail_or_zero(q, math.ceil(value), k))
        else:
            term = exact = 0.0
        partial += term
        exact_partial += exact
        rows.append(DichotomyRow(n, term, partial, exact, exact_partial))
    return rows
