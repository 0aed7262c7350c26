"""
Algebra Module

Spec
----
Exact arithmetic behind every other part of laurentcf: the prime field F_q, the
polynomial ring F_q[z], truncated Laurent series in F_q((z^-1)) and their continued
fractions.

Responsibilities:
1.  Polynomial arithmetic, enumeration by degree and the symbolic text format.
2.  Truncated series with pessimistic precision bookkeeping, reciprocal and Gauss map.
3.  Continued-fraction expansion, convergents and the convergent identities.

Public Interfaces:
- `FieldSpec`, `Poly`, `enumerate_polys`
- `LaurentSeries`, `Valuation`, `gauss_map`, `from_rational`
- `CFExpansion`, `expand_truncated`, `expand_rational`, `convergents`,
  `check_identities`, `relative_error_log`
"""

from .contfrac import (
    CFExpansion,
    Convergent,
    check_identities,
    convergents,
    expand,
    expand_rational,
    expand_truncated,
    relative_error_log,
    relative_error_log_block,
    series_from_quotients,
)
from .field_poly import NEG_INF, FieldSpec, Poly, divrem, enumerate_polys, gcd
from .laurent import (
    LaurentSeries,
    Valuation,
    from_rational,
    gauss_map,
    norm,
    reciprocal,
    split,
)

__all__ = [
    "NEG_INF",
    "FieldSpec",
    "Poly",
    "divrem",
    "gcd",
    "enumerate_polys",
    "LaurentSeries",
    "Valuation",
    "norm",
    "split",
    "reciprocal",
    "gauss_map",
    "from_rational",
    "CFExpansion",
    "Convergent",
    "expand",
    "expand_truncated",
    "expand_rational",
    "convergents",
    "check_identities",
    "relative_error_log",
    "relative_error_log_block",
    "series_from_quotients",
]
