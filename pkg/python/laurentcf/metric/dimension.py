"""Hausdorff dimension of the large-degree-sum sets.

For ``1/2 < s < 1`` the exponent function is

    f_1(s) = s,   f_{i+1}(s) = s f_i(s) / (1 - s + f_i(s)),

with closed form ``f_k(s) = s^k (2s - 1) / (s^k - (1 - s)^k)`` and ``f_k(1/2) = 1/(2k)``.
The pressure

    P(s) = sum_{j>=1} (q - 1) q^j q^-(2 j s + B f_k(s))

is a geometric series for ``s > 1/2`` and strictly decreasing in ``s``; ``s_k(B)`` is
its unique root of ``P(s) = 1`` in ``(1/2, 1]``. :func:`dim_F` and :func:`dim_G`
dispatch on the growth invariants ``(B, b, a)`` of ``Phi``.

Examples
--------
>>> round(f_k(0.75, 2), 12)
0.5625
>>> f_k(0.5, 3) == 1 / 6
True
>>> round(solve_s_k(2, 1, 1).value, 4)
0.8232
>>> dim_G(2, 1, GrowthFunction.parse("exp:2")).value
Fraction(1, 3)
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from laurentcf import config
from laurentcf.errors import CaseError, DivergenceError, IdentityError

from .growth import GrowthFunction, GrowthInvariants, growth_invariants

logger = logging.getLogger(__name__)

Value = Union[float, Fraction]

LOWER_BRACKET = 0.5 + 1e-9
MAX_ITER = 200

__all__ = [
    "DimensionResult",
    "SolverInfo",
    "GammaSplit",
    "f_k",
    "f_k_recursive",
    "f_k_closed",
    "pressure",
    "log_pressure",
    "pressure_truncated",
    "shifted_pressure",
    "solve_s_k",
    "solve_s_kM",
    "alpha_params",
    "gamma_split",
    "growth_invariants",
    "dim_F",
    "dim_G",
]


@dataclass(frozen=True)
class SolverInfo:
    iterations: int
    bracket: Tuple[float, float]
    residual: float
    clamped: bool = False


@dataclass(frozen=True)
class DimensionResult:
    value: Optional[Value]
    case: str
    invariants: Optional[GrowthInvariants] = None
    solver: Optional[SolverInfo] = None

    @property
    def estimate(self) -> bool:
        return self.invariants is not None and self.invariants.estimate

    def __float__(self):
        return float(self.value)


def _check_s(s: float) -> None:
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s}")


def f_k_recursive(s: float, k: int) -> float:
    _check_s(s)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    f = s
    for _ in range(k - 1):
        f = s * f / (1 - s + f)
    return f


def f_k_closed(s: float, k: int) -> float:
    _check_s(s)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if s == 0.5:
        return 1 / (2 * k)
    return s**k * (2 * s - 1) / (s**k - (1 - s) ** k)


def _f_k_closed_interval(s: float, k: int) -> float:
    # f_k(1) = 1 for every k
    return 1.0 if s == 1 else f_k_closed(s, k)


def f_k(s: float, k: int, method: str = "closed") -> float:
    if method == "closed":
        return f_k_closed(s, k)
    if method == "recursive":
        return f_k_recursive(s, k)
    raise ValueError(f"unknown method {method!r}")


def log_pressure(s: float, q: int, k: int, B: float) -> float:
    """Natural log of :func:`pressure`, finite even where the pressure underflows."""
    if s <= 0.5:
        raise DivergenceError(f"pressure series diverges for s={s} <= 1/2")
    ln_q = math.log(q)
    r = (1 - 2 * s) * ln_q
    # sum_{j>=1} (q-1) e^{j r} = (q-1) e^r / (1 - e^r)
    geometric = math.log(q - 1) + r - math.log(-math.expm1(r))
    return geometric - B * _f_k_closed_interval(s, k) * ln_q


def pressure(s: float, q: int, k: int, B: float) -> float:
    return math.exp(log_pressure(s, q, k, B))


def pressure_truncated(s: float, q: int, k: int, B: float, M: int) -> float:
    """The first ``M`` terms of the pressure series, summed literally."""
    fk = _f_k_closed_interval(s, k)
    return sum(
        (q - 1) * q ** (j * (1 - 2 * s)) * q ** (-B * fk) for j in range(1, M + 1)
    )


def shifted_pressure(s: float, q: int, B: float, gamma: float) -> float:
    """``sum_j (q-1) q^j q^-(2 j s + B s - (1 - s) gamma)``."""
    if s <= 0.5:
        raise DivergenceError(f"series diverges for s={s} <= 1/2")
    ln_q = math.log(q)
    r = (1 - 2 * s) * ln_q
    geometric = math.log(q - 1) + r - math.log(-math.expm1(r))
    return math.exp(geometric + (-B * s + (1 - s) * gamma) * ln_q)


def _bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    ytol: float,
    xtol: float,
) -> Tuple[float, SolverInfo]:
    """Root of a decreasing ``func`` with ``func(lo) > 0 > func(hi)``."""
    flo, fhi = func(lo), func(hi)
    it = 2
    if flo <= 0:
        return lo, SolverInfo(it, (lo, hi), flo, clamped=True)
    if fhi >= 0:
        return hi, SolverInfo(it, (lo, hi), fhi, clamped=True)
    a, b = lo, hi
    c, fc = b, fhi
    while it < MAX_ITER:
        c = 0.5 * (a + b)
        fc = func(c)
        it += 1
        if fc > 0:
            a = c
        else:
            b = c
        if abs(fc) <= ytol or (b - a) <= xtol:
            break
    return c, SolverInfo(it, (a, b), fc)


def _tolerances() -> Tuple[float, float]:
    return float(config.get("laurentcf.solver.ytol")), float(config.get("laurentcf.solver.xtol"))


def _check_B(B) -> float:
    if isinstance(B, Fraction):
        B = float(B)
    if not math.isfinite(B) or B <= 0:
        raise CaseError(f"B={B} is not in (0, inf); use dim_F for the B=0 and B=inf cases")
    return float(B)


def solve_s_k(q: int, k: int, B: float) -> DimensionResult:
    """``s_k(B)`` by bisection on ``(1/2 + 1e-9, 1]``.

    If the root lies below the bracket (``B`` so large that the pressure underflows
    there) the lower end is returned with ``solver.clamped`` set.
    """
    B = _check_B(B)
    ytol, xtol = _tolerances()
    s, info = _bisect(lambda s: pressure(s, q, k, B) - 1, LOWER_BRACKET, 1.0, ytol, xtol)
    logger.info(
        "s_k(B) q=%d k=%d B=%g -> %.15g after %d iterations (residual %.3g)",
        q, k, B, s, info.iterations, info.residual,
    )
    return DimensionResult(s, "0<B<inf", None, info)


def solve_s_kM(q: int, k: int, B: float, M: int) -> float:
    """Root in ``(1/2, 1]`` of the pressure series cut at ``j = M``.

    The root increases to ``s_k(B)`` with ``M``. When ``B`` is too large for ``M``
    terms to reach 1 at ``s = 1/2`` there is no such root and :class:`CaseError` is
    raised; a larger ``M`` or a smaller ``B`` is needed.

    >>> solve_s_kM(2, 1, 50.0, 2)
    Traceback (most recent call last):
    ...
    laurentcf.errors.CaseError: no root in (1/2, 1] for q=2 k=1 B=50 M=2; increase M
    """
    B = _check_B(B)
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    func = lambda s: pressure_truncated(s, q, k, B, M) - 1
    if func(LOWER_BRACKET) <= 0:
        raise CaseError(f"no root in (1/2, 1] for q={q} k={k} B={B:g} M={M}; increase M")
    ytol, xtol = _tolerances()
    s, info = _bisect(func, LOWER_BRACKET, 1.0, ytol, xtol)
    logger.debug("s_kM q=%d k=%d B=%g M=%d -> %.15g", q, k, B, M, s)
    return s


def alpha_params(q: int, k: int, B: float, s: float, tol: float = 1e-12) -> List[float]:
    """Window degree rates ``alpha_1 .. alpha_k``.

    ``alpha_i = s^(k-i) (2s-1) (1-s)^(i-1) B / (s^k - (1-s)^k)``. They satisfy
    ``s alpha_i = (1 - s) alpha_{i-1}``, ``sum alpha_i = B`` and ``B f_k(s) = s alpha_1``;
    each is checked. At ``s = 1/2`` the ratios are 1 and every ``alpha_i = B/k``.

    >>> [round(a, 12) for a in alpha_params(2, 2, 1.0, 0.8)]
    [0.8, 0.2]
    """
    if not 0.5 <= s < 1:
        raise ValueError(f"s must lie in [1/2, 1), got {s}")
    B = float(B)
    if s == 0.5:
        return [B / k] * k
    denom = s**k - (1 - s) ** k
    alphas = [s ** (k - i) * (2 * s - 1) * (1 - s) ** (i - 1) * B / denom for i in range(1, k + 1)]
    scale = max(1.0, abs(B))
    for i in range(1, k):
        if not math.isclose(s * alphas[i], (1 - s) * alphas[i - 1], abs_tol=tol * scale):
            raise IdentityError("alpha_ratio", i + 1, f"{s * alphas[i]} != {(1 - s) * alphas[i - 1]}")
    if not math.isclose(sum(alphas), B, abs_tol=tol * scale):
        raise IdentityError("alpha_sum", k, f"{sum(alphas)} != {B}")
    if not math.isclose(B * f_k(s, k), s * alphas[0], abs_tol=tol * scale):
        raise IdentityError("alpha_f_k", 1, f"{B * f_k(s, k)} != {s * alphas[0]}")
    return alphas


@dataclass(frozen=True)
class GammaSplit:
    gamma: float
    s_tilde: float
    lhs: float
    middle: float
    rhs: float
    shifted_pressure: float
    s_k_gamma: float
    checks: Dict[str, bool] = field(default_factory=dict)


def gamma_split(q: int, k: int, B: float, tol: float = 1e-10) -> GammaSplit:
    """Splitting parameter ``gamma = B s / (1 - s + f_k(s))`` at ``s = s_{k+1}(B)``.

    Checks ``B s - (1 - s) gamma = gamma f_k(s) = B f_{k+1}(s)``, that the shifted
    pressure equals 1 at ``s`` and that ``s_k(gamma) = s``.
    """
    B = _check_B(B)
    s = solve_s_k(q, k + 1, B).value
    fk = f_k(s, k)
    gamma = B * s / (1 - s + fk)
    lhs = B * s - (1 - s) * gamma
    middle = gamma * fk
    rhs = B * f_k(s, k + 1)
    g = shifted_pressure(s, q, B, gamma)
    checks = {
        "left": math.isclose(lhs, middle, abs_tol=tol),
        "right": math.isclose(middle, rhs, abs_tol=tol),
        "shifted_pressure": math.isclose(g, 1.0, abs_tol=1e-9),
    }
    s_gamma = solve_s_k(q, k, gamma).value if gamma > 0 else 1.0
    checks["s_k_gamma"] = math.isclose(s_gamma, s, abs_tol=1e-8)
    for name, ok in checks.items():
        if not ok:
            raise IdentityError(
                f"gamma_{name}", k, f"lhs={lhs} middle={middle} rhs={rhs} g={g} s_k(gamma)={s_gamma}"
            )
    return GammaSplit(gamma, s, lhs, middle, rhs, g, s_gamma, checks)


def _reciprocal_plus_one(b) -> Value:
    if isinstance(b, Fraction):
        return 1 / (b + 1)
    return 1.0 / (b + 1.0)


def dim_F(q: int, k: int, phi: GrowthFunction) -> DimensionResult:
    """Dimension of the set where ``k`` consecutive degrees past ``n`` sum to ``>= Phi(n)`` i.o.

    >>> dim_F(2, 2, GrowthFunction.parse("power:2")).value
    Fraction(1, 2)
    """
    inv = growth_invariants(phi)
    if inv.inconclusive:
        return DimensionResult(None, "inconclusive", inv)
    B = inv.B
    if B == 0:
        return DimensionResult(Fraction(1), "B=0", inv)
    if B == math.inf:
        b = inv.b
        if b == math.inf:
            return DimensionResult(Fraction(0), "B=inf,b=inf", inv)
        if b == 1:
            return DimensionResult(Fraction(1, 2), "B=inf,b=1", inv)
        return DimensionResult(_reciprocal_plus_one(b), "B=inf,1<b<inf", inv)
    result = solve_s_k(q, k, B)
    return DimensionResult(result.value, result.case, inv, result.solver)


def dim_G(q: int, k: int, phi: GrowthFunction) -> DimensionResult:
    """Dimension of the set where the degree sums reach ``Phi(n)`` for every ``n``: ``1/(a+1)``.

    Bounded ``Phi`` is rejected.
    """
    inv = growth_invariants(phi)
    if inv.inconclusive:
        return DimensionResult(None, "inconclusive", inv)
    if inv.bounded:
        raise CaseError(f"Phi={phi} does not tend to infinity; dim_G needs Phi(n) -> inf")
    a = inv.a
    if a == math.inf:
        return DimensionResult(Fraction(0), "G,a=inf", inv)
    return DimensionResult(_reciprocal_plus_one(a), "G", inv)
