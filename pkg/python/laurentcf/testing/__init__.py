"""Testing helpers for the laurentcf package.

Seeded data factories for unit tests: random polynomials, rationals in the unit ideal
and truncated series. All of them draw from a :class:`numpy.random.Generator`, so a
test that fixes the seed sees the same values on every run.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from laurentcf.algebra.field_poly import FieldSpec, Poly
from laurentcf.algebra.laurent import LaurentSeries

__all__ = [
    "rng",
    "random_poly",
    "random_rational",
    "random_series",
]


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_poly(
    field: FieldSpec,
    degree: int,
    gen: Optional[np.random.Generator] = None,
    monic: bool = False,
) -> Poly:
    """A uniformly random polynomial of exact ``degree``."""
    gen = rng() if gen is None else gen
    lower = gen.integers(0, field.q, size=degree).tolist()
    lead = 1 if monic else int(gen.integers(1, field.q))
    return Poly(field, tuple(lower) + (lead,))


def random_rational(
    field: FieldSpec,
    max_degree: int,
    gen: Optional[np.random.Generator] = None,
) -> tuple[Poly, Poly]:
    """``(P, Q)`` with ``1 <= deg Q <= max_degree`` and ``deg P < deg Q``, P nonzero."""
    gen = rng() if gen is None else gen
    dq = int(gen.integers(1, max_degree + 1))
    q = random_poly(field, dq, gen)
    while True:
        p = Poly(field, tuple(gen.integers(0, field.q, size=dq).tolist()))
        if not p.is_zero():
            return p, q


def random_series(
    field: FieldSpec,
    precision: int,
    gen: Optional[np.random.Generator] = None,
) -> LaurentSeries:
    """Haar-random element of the unit ideal, truncated to ``precision``."""
    gen = rng() if gen is None else gen
    frac = tuple(gen.integers(0, field.q, size=precision).tolist())
    return LaurentSeries(field, Poly.zero(field), frac)
