"""
laurentcf - Continued Fractions and Metric Theory over F_q((z^-1))

Spec
----
This is the top-level package. It exposes the arithmetic core, the metric and
dimension layer, the Monte Carlo checks and the Dirichlet criteria under one import.

Responsibilities:
1.  Export the exact arithmetic: `FieldSpec`, `Poly`, `LaurentSeries` and continued fractions.
2.  Export the metric layer: cylinder measures, dimension solvers and the Cantor construction.
3.  Export the stochastic and Dirichlet modules.
4.  Expose the flat configuration store as `laurentcf.config`.

Public Interfaces:
- Algebra: `FieldSpec`, `Poly`, `LaurentSeries`, `expand`, `convergents`, `check_identities`
- Metric: `count_cylinders`, `tail_measure`, `solve_s_k`, `dim_F`, `dim_G`, `CantorParams`
- Checks: `stochastic`, `dirichlet`
- Control: `main` (the command line)
"""

import laurentcf.config as config

VERSION = "0.1.0"

from laurentcf import dirichlet, stochastic
from laurentcf.algebra import (
    CFExpansion,
    FieldSpec,
    LaurentSeries,
    Poly,
    check_identities,
    convergents,
    expand,
    expand_rational,
    expand_truncated,
)
from laurentcf.metric import (
    CantorParams,
    GrowthFunction,
    count_cylinders,
    dim_F,
    dim_G,
    measure_degree_sum,
    solve_s_k,
    tail_measure,
)


def main(argv=None) -> int:
    from laurentcf.cli import dispatch

    return dispatch(argv)


__all__ = [
    "VERSION",
    "config",
    "FieldSpec",
    "Poly",
    "LaurentSeries",
    "CFExpansion",
    "expand",
    "expand_rational",
    "expand_truncated",
    "convergents",
    "check_identities",
    "count_cylinders",
    "measure_degree_sum",
    "tail_measure",
    "GrowthFunction",
    "solve_s_k",
    "dim_F",
    "dim_G",
    "CantorParams",
    "stochastic",
    "dirichlet",
    "main",
]
