"""Exact monodromy decision via the factor structure of the conservative part.

The origin of a quasi-homogeneous field rotates (is a center or focus)
exactly when h = Cons(F) is nonzero, has no x or y factor, and its
associate h_hom(1, Y) has no real root.  Everything here is decided in
exact rational arithmetic (divisibility plus Sturm counts); no floating
point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fields import Decomposition, FieldError, decompose, homogeneous_associate
from .polycore import BiPoly, TypeVector, UniPoly, qh_degree, squarefree_decomposition, sturm_real_roots

REASON_ZERO_H = "conservative part is identically zero (pure Euler field; every ray is invariant)"
REASON_X_FACTOR = "h has the invariant line x = 0 factor"
REASON_Y_FACTOR = "h has the invariant line y = 0 factor"
REASON_REAL_ROOT = "h_hom(1,Y) has a real root (real invariant curve through the origin)"
REASON_CONSTANT_H = "h is constant"


@dataclass(frozen=True)
class FactorStructure:
    """Shape of h = c * x^m_x * y^m_y * prod (y^t1 - lambda_j x^t2)^m_j."""

    m_x: int
    m_y: int
    profile: tuple[tuple[UniPoly, int], ...]
    real_root_count: int
    degree_deficit: int

    @property
    def max_multiplicity(self) -> int:
        return max((m for _, m in self.profile), default=0)

    @property
    def distinct_factor_count(self) -> int:
        """Distinct lambda_j factors (complex roots counted individually)."""
        return sum(f.degree for f, _ in self.profile)


def factor_structure(h: BiPoly, t: TypeVector) -> FactorStructure:
    """Exact factor data of a nonzero quasi-homogeneous h."""
    if h.is_zero:
        raise FieldError("identically zero conservative part")
    if qh_degree(h, t) is None:
        raise FieldError("h is not quasi-homogeneous for this type")
    m_x = h.min_x_power()
    m_y = h.min_y_power()
    _, _, q = homogeneous_associate(h, t)
    # number of X-power factors hidden in the minimal-pull associate
    degree_deficit = (m_x - m_x % t.t2) // t.t2
    if q.degree <= 0:
        return FactorStructure(m_x, m_y, (), 0, degree_deficit)
    profile = tuple(squarefree_decomposition(q))
    real_roots = sturm_real_roots(q)
    return FactorStructure(m_x, m_y, profile, real_roots, degree_deficit)


@dataclass(frozen=True)
class MonodromyResult:
    monodromic: bool
    reason: Optional[str]
    structure: Optional[FactorStructure]


def monodromy_of_decomposition(dec: Decomposition) -> MonodromyResult:
    if dec.h.is_zero:
        return MonodromyResult(False, REASON_ZERO_H, None)
    fs = factor_structure(dec.h, dec.t)
    if fs.m_x > 0:
        return MonodromyResult(False, REASON_X_FACTOR, fs)
    if fs.m_y > 0:
        return MonodromyResult(False, REASON_Y_FACTOR, fs)
    if fs.degree_deficit > 0:
        return MonodromyResult(False, REASON_X_FACTOR, fs)
    if not fs.profile:
        return MonodromyResult(False, REASON_CONSTANT_H, fs)
    if fs.real_root_count > 0:
        return MonodromyResult(False, REASON_REAL_ROOT, fs)
    return MonodromyResult(True, None, fs)


def is_monodromic(F) -> MonodromyResult:
    """Monodromy decision for a QHField (or a precomputed Decomposition)."""
    dec = F if isinstance(F, Decomposition) else decompose(F)
    return monodromy_of_decomposition(dec)
