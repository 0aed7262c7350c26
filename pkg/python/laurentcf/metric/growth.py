"""Growth functions Phi(n) and their invariants.

Three numbers decide which dimension formula applies:

* ``B = liminf Phi(n) / n``
* ``b``, with ``log b = liminf log Phi(n) / n``
* ``a``, with ``log a = limsup log Phi(n) / n``

They are exact for the preset families. A table of sampled values only yields
estimates over its declared range, and says so.

A growth function is written as text the way the command line takes it::

    linear:3        Phi(n) = 3 n
    power:2[:c]     Phi(n) = c n^2
    exp:2           Phi(n) = 2^n
    log[:base]      Phi(n) = log_base(n + 2)    (natural log by default)
    superexp:2:2    Phi(n) = 2^(n^2)
    const:5         Phi(n) = 5
    table:path.csv  columns n,phi

Examples
--------
>>> GrowthFunction.parse("linear:3").invariants()
GrowthInvariants(B=Fraction(3, 1), b=Fraction(1, 1), a=Fraction(1, 1), bounded=False, estimate=False, inconclusive=False)
>>> GrowthFunction.parse("exp:2").invariants().b
Fraction(2, 1)
>>> GrowthFunction.parse("power:2").invariants().B
inf
>>> GrowthFunction.parse("superexp:2:1").invariants().b
Fraction(2, 1)
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

from laurentcf.errors import ParseError

logger = logging.getLogger(__name__)

Extended = Union[Fraction, float]
INF = math.inf

KINDS = ("linear", "power", "exp", "log", "superexp", "const", "table")

# tables shorter than this cannot estimate a liminf
MIN_TABLE_POINTS = 8

__all__ = ["GrowthFunction", "GrowthInvariants", "growth_invariants", "KINDS"]


@dataclass(frozen=True)
class GrowthInvariants:
    B: Extended
    b: Extended
    a: Extended
    bounded: bool = False
    estimate: bool = False
    inconclusive: bool = False


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{what}: not a number {text!r}") from exc


@dataclass(frozen=True)
class GrowthFunction:
    kind: str
    params: Tuple[Fraction, ...] = ()
    values: Optional[Tuple[Tuple[int, float], ...]] = None
    clamp: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown growth kind {self.kind!r}, expected one of {KINDS}")
        if self.kind == "table":
            if not self.values:
                raise ValueError("table growth function needs values")
            ns = [n for n, _ in self.values]
            if ns != sorted(ns) or len(set(ns)) != len(ns):
                raise ValueError("table arguments must be strictly increasing")
            if ns != list(range(ns[0], ns[-1] + 1)):
                raise ValueError(f"table must be total on {ns[0]}..{ns[-1]}")
        if self.kind in ("exp", "superexp") and self.params[0] <= 1:
            raise ValueError(f"{self.kind} base must be > 1, got {self.params[0]}")

    # -- construction -------------------------------------------------------

    @classmethod
    def linear(cls, slope) -> "GrowthFunction":
        return cls("linear", (Fraction(slope),))

    @classmethod
    def power(cls, exponent, coef=1) -> "GrowthFunction":
        return cls("power", (Fraction(exponent), Fraction(coef)))

    @classmethod
    def exponential(cls, base) -> "GrowthFunction":
        return cls("exp", (Fraction(base),))

    @classmethod
    def logarithmic(cls, base=None) -> "GrowthFunction":
        return cls("log", () if base is None else (Fraction(base),))

    @classmethod
    def superexp(cls, base, exponent) -> "GrowthFunction":
        return cls("superexp", (Fraction(base), Fraction(exponent)))

    @classmethod
    def constant(cls, c) -> "GrowthFunction":
        return cls("const", (Fraction(c),))

    @classmethod
    def from_values(cls, values: Mapping[int, float]) -> "GrowthFunction":
        return cls("table", (), tuple(sorted((int(n), float(v)) for n, v in values.items())))

    @classmethod
    def from_csv(cls, path) -> "GrowthFunction":
        import pandas as pd

        df = pd.read_csv(path)
        if not {"n", "phi"} <= set(df.columns):
            raise ParseError(f"{path}: table needs columns n,phi")
        return cls.from_values(dict(zip(df["n"].astype(int), df["phi"].astype(float))))

    @classmethod
    def parse(cls, text: str) -> "GrowthFunction":
        kind, _, rest = text.strip().partition(":")
        args = rest.split(":") if rest else []
        if kind == "table":
            if not rest:
                raise ParseError("table growth function needs a path")
            return cls.from_csv(rest)
        arity = {
            "linear": (1, 1),
            "power": (1, 2),
            "exp": (1, 1),
            "log": (0, 1),
            "superexp": (2, 2),
            "const": (1, 1),
        }
        if kind not in arity:
            raise ParseError(f"unknown growth kind {kind!r} in {text!r}")
        lo, hi = arity[kind]
        if not lo <= len(args) <= hi:
            raise ParseError(f"{kind} takes {lo}..{hi} parameters, got {text!r}")
        params = tuple(_fraction(a, text) for a in args)
        if kind == "power" and len(params) == 1:
            params = params + (Fraction(1),)
        try:
            return cls(kind, params)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def clamped(self, k: int) -> "GrowthFunction":
        """Same function with ``Phi(n) >= k`` enforced."""
        return GrowthFunction(self.kind, self.params, self.values, k)

    def __str__(self):
        if self.kind == "table":
            return f"table[{self.values[0][0]}..{self.values[-1][0]}]"
        return ":".join([self.kind] + [str(p) for p in self.params])

    # -- evaluation ---------------------------------------------------------

    def raw(self, n: int) -> float:
        p = self.params
        try:
            if self.kind == "linear":
                return float(p[0] * n)
            if self.kind == "power":
                return float(p[1]) * float(n) ** float(p[0])
            if self.kind == "exp":
                return float(p[0]) ** n
            if self.kind == "log":
                value = math.log(n + 2)
                return value / math.log(float(p[0])) if p else value
            if self.kind == "superexp":
                return float(p[0]) ** (float(n) ** float(p[1]))
            if self.kind == "const":
                return float(p[0])
        except (OverflowError, ZeroDivisionError):
            # 0.0 ** c for c < 0 is an infinite exponent
            return INF
        table = dict(self.values)
        if n not in table:
            lo, hi = self.values[0][0], self.values[-1][0]
            raise ValueError(f"table growth function undefined at n={n} (range {lo}..{hi})")
        return table[n]

    def __call__(self, n: int) -> float:
        value = self.raw(n)
        return value if self.clamp is None else max(value, float(self.clamp))

    # -- invariants ---------------------------------------------------------

    def invariants(self) -> GrowthInvariants:
        one = Fraction(1)
        p = self.params
        if self.kind == "linear":
            return GrowthInvariants(p[0], one, one, bounded=p[0] == 0)
        if self.kind == "power":
            c, coef = p
            if c > 1:
                B = INF
            elif c < 1:
                B = Fraction(0)
            else:
                B = coef
            return GrowthInvariants(B, one, one, bounded=c <= 0 or coef == 0)
        if self.kind == "exp":
            return GrowthInvariants(INF, p[0], p[0])
        if self.kind == "log":
            return GrowthInvariants(Fraction(0), one, one)
        if self.kind == "superexp":
            # base^(n^c): log Phi(n) / n behaves like n^(c-1) log base
            base, c = p
            if c > 1:
                return GrowthInvariants(INF, INF, INF)
            if c == 1:
                return GrowthInvariants(INF, base, base)
            if c > 0:
                return GrowthInvariants(INF, one, one)
            return GrowthInvariants(Fraction(0), one, one, bounded=True)
        if self.kind == "const":
            return GrowthInvariants(Fraction(0), one, one, bounded=True)
        return self._table_invariants()

    def _table_invariants(self) -> GrowthInvariants:
        points = [(n, self(n)) for n, _ in self.values if n >= 1]
        if len(points) < MIN_TABLE_POINTS:
            logger.info("table of %d points is too short to classify", len(points))
            return GrowthInvariants(
                math.nan, math.nan, math.nan, estimate=True, inconclusive=True
            )
        tail = points[len(points) // 2 :]
        ratios = [v / n for n, v in tail]
        logs = [math.log(v) / n if v > 0 else -INF for n, v in tail]
        growing = all(r2 >= r1 for r1, r2 in zip(ratios, ratios[1:])) and ratios[-1] >= 2 * ratios[0]
        bounded = max(v for _, v in tail) <= max(v for _, v in points[: len(points) // 2])
        b = math.exp(min(logs))
        a = math.exp(max(logs))
        if growing:
            B = INF
        else:
            B = min(ratios)
        return GrowthInvariants(B, b, a, bounded=bounded, estimate=True)


def growth_invariants(phi: GrowthFunction) -> GrowthInvariants:
    return phi.invariants()

