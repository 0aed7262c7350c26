"""
Metric Module

Spec
----
Measure and dimension theory of the partial-quotient degrees under Haar measure.

Responsibilities:
1.  Exact cylinder diameters, measures and degree-sum counting.
2.  Growth functions and the invariants that select a dimension formula.
3.  The pressure equation, its root s_k(B) and the dimension dispatch.
4.  The Cantor-type construction behind the lower bound, with its mass and Hölder checks.

Public Interfaces:
- `CylinderSpec`, `count_cylinders`, `measure_degree_sum`, `tail_measure`
- `GrowthFunction`, `GrowthInvariants`
- `solve_s_k`, `solve_s_kM`, `alpha_params`, `gamma_split`, `dim_F`, `dim_G`
- `CantorParams`, `enumerate_basic_sets`, `check_holder`, `check_mass_conservation`
"""

from .cantor import (
    BasicSet,
    CantorParams,
    IndexSequence,
    basic_set_count,
    check_holder,
    check_index_conditions,
    check_mass_conservation,
    check_membership,
    diameter,
    enumerate_basic_sets,
    gen_index_sequence,
    iter_degree_classes,
    local_dimension_profile,
    mass,
)
from .cylinder import (
    CylinderSpec,
    asymptotic_ratio_profile,
    compositions,
    count_cylinders,
    count_cylinders_brute,
    cylinder_diameter,
    cylinder_measure,
    gset_diameter,
    measure_degree_sum,
    measure_sweep,
    tail_measure,
    tail_partial_sum,
)
from .dimension import (
    DimensionResult,
    GammaSplit,
    alpha_params,
    dim_F,
    dim_G,
    f_k,
    f_k_closed,
    f_k_recursive,
    gamma_split,
    log_pressure,
    pressure,
    pressure_truncated,
    shifted_pressure,
    solve_s_k,
    solve_s_kM,
)
from .growth import GrowthFunction, GrowthInvariants, growth_invariants

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
    "GrowthFunction",
    "GrowthInvariants",
    "growth_invariants",
    "DimensionResult",
    "GammaSplit",
    "f_k",
    "f_k_closed",
    "f_k_recursive",
    "pressure",
    "log_pressure",
    "pressure_truncated",
    "shifted_pressure",
    "solve_s_k",
    "solve_s_kM",
    "alpha_params",
    "gamma_split",
    "dim_F",
    "dim_G",
    "CantorParams",
    "IndexSequence",
    "BasicSet",
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
