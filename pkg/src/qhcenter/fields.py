"""Quasi-homogeneous planar fields and the conservative-dissipative split.

A field F = (P, Q) of type t and degree r satisfies P in P^t_{r+t1},
Q in P^t_{r+t2}.  It decomposes uniquely as F = X_h + mu*D0 with
h = (t1*x*Q - t2*y*P)/(r+|t|) and mu = div(F)/(r+|t|), where
X_h = (-dh/dy, dh/dx) and D0 = (t1*x, t2*y).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polycore import BiPoly, TypeVector, UniPoly, qh_degree


class FieldError(ValueError):
    """Invalid quasi-homogeneous field data."""


class CoprimalityError(FieldError):
    """P and Q share a non-constant factor."""


# ---------------------------------------------------------------------------
# associates (the X = x^t2, Y = y^t1 substitution)
# ---------------------------------------------------------------------------


def homogeneous_associate(p: BiPoly, t: TypeVector) -> tuple[int, int, UniPoly]:
    """Pull out the largest x/y powers and return the associate at X=1.

    Writes p = x^k1 * y^k2 * w(x^t2, y^t1) and returns (k1, k2, w(1, Y)).
    Raises if p is not quasi-homogeneous of type t.
    """
    if p.is_zero:
        raise FieldError("zero polynomial has no homogeneous associate")
    if qh_degree(p, t) is None:
        raise FieldError("polynomial is not quasi-homogeneous for this type")
    k1 = p.min_x_power()
    k2 = p.min_y_power()
    w = p.shift_divide(k1, k2)
    coeffs: dict[int, Fraction] = {}
    for (a, b), c in w.terms():
        if a % t.t2 or b % t.t1:
            # cannot happen for a qh polynomial with x, y powers removed
            raise FieldError("associate substitution failed; exponents off-grid")
        j = b // t.t1
        coeffs[j] = coeffs.get(j, Fraction(0)) + c
    deg = max(coeffs) if coeffs else 0
    return k1, k2, UniPoly([coeffs.get(j, Fraction(0)) for j in range(deg + 1)])


def associate_residue_convention(p: BiPoly, t: TypeVector) -> tuple[int, int, UniPoly]:
    """Associate with the minimal residue pull-out: k1 < t2, k2 < t1.

    This is the convention the residue formula needs: only the exponents
    that cannot be absorbed into X = x^t2, Y = y^t1 are pulled out, so pure
    X- and Y-power factors stay inside the associate.
    """
    if p.is_zero:
        raise FieldError("zero polynomial has no homogeneous associate")
    if qh_degree(p, t) is None:
        raise FieldError("polynomial is not quasi-homogeneous for this type")
    k1 = p.min_x_power() % t.t2
    k2 = p.min_y_power() % t.t1
    w = p.shift_divide(k1, k2)
    coeffs: dict[int, Fraction] = {}
    for (a, b), c in w.terms():
        if a % t.t2 or b % t.t1:
            raise FieldError("associate substitution failed; exponents off-grid")
        j = b // t.t1
        coeffs[j] = coeffs.get(j, Fraction(0)) + c
    deg = max(coeffs) if coeffs else 0
    return k1, k2, UniPoly([coeffs.get(j, Fraction(0)) for j in range(deg + 1)])


def associate_lift(g: UniPoly, t: TypeVector) -> BiPoly:
    """Homogenize g(Y) back to the plane: x^(t2*deg g) * g(y^t1 / x^t2)."""
    if g.is_zero:
        return BiPoly.zero()
    d = g.degree
    terms = {}
    for j, c in enumerate(g.coeffs):
        if c:
            terms[((d - j) * t.t2, j * t.t1)] = c
    return BiPoly(terms)


# ---------------------------------------------------------------------------
# coprimality for quasi-homogeneous pairs
# ---------------------------------------------------------------------------


def qh_coprime(P: BiPoly, Q: BiPoly, t: TypeVector) -> bool:
    """gcd(P, Q) constant, decided exactly.

    Common factors of quasi-homogeneous polynomials are quasi-homogeneous,
    i.e. products of x, y, and (y^t1 - lambda x^t2); the last kind shows up
    as a common root of the univariate associates.
    """
    if P.is_zero and Q.is_zero:
        raise FieldError("the zero field has no coprimality status")
    if P.is_zero:
        return Q.total_degree() == 0 or _single_factor_units(Q, t)
    if Q.is_zero:
        return P.total_degree() == 0 or _single_factor_units(P, t)
    if min(P.min_x_power(), Q.min_x_power()) > 0:
        return False
    if min(P.min_y_power(), Q.min_y_power()) > 0:
        return False
    _, _, qp = homogeneous_associate(P, t)
    _, _, qq = homogeneous_associate(Q, t)
    if qp.degree <= 0 or qq.degree <= 0:
        return True
    return qp.gcd(qq).degree == 0


def _single_factor_units(p: BiPoly, t: TypeVector) -> bool:
    # gcd(0, p) = p; constant only if p is constant
    return p.total_degree() == 0


# ---------------------------------------------------------------------------
# field and decomposition records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QHField:
    """Validated quasi-homogeneous field (P, Q) of type t and degree r."""

    P: BiPoly
    Q: BiPoly
    t: TypeVector
    r: int

    def __post_init__(self) -> None:
        if self.P.is_zero and self.Q.is_zero:
            raise FieldError("(P, Q) = (0, 0) is not a field")
        if not self.P.is_zero and qh_degree(self.P, self.t) != self.r + self.t.t1:
            raise FieldError(
                f"P is not quasi-homogeneous of degree r+t1 = {self.r + self.t.t1} for t={self.t}"
            )
        if not self.Q.is_zero and qh_degree(self.Q, self.t) != self.r + self.t.t2:
            raise FieldError(
                f"Q is not quasi-homogeneous of degree r+t2 = {self.r + self.t.t2} for t={self.t}"
            )

    @staticmethod
    def make(P: BiPoly, Q: BiPoly, t: TypeVector, r: int, allow_reducible: bool = False) -> "QHField":
        f = QHField(P, Q, t, r)
        if not allow_reducible and not qh_coprime(P, Q, t):
            raise CoprimalityError("P and Q have a non-constant common factor")
        return f

    def scale_time(self, c) -> "QHField":
        return QHField(self.P.scale(c), self.Q.scale(c), self.t, self.r)

    def evaluate(self, x, y):
        return self.P.evaluate(x, y), self.Q.evaluate(x, y)

    def __str__(self) -> str:
        return f"P = {self.P}; Q = {self.Q}  [t={self.t}, r={self.r}]"


@dataclass(frozen=True)
class Decomposition:
    """Conservative-dissipative data: F = X_h + mu*D0.

    h_hom / mu_hom are the univariate associates at X=1 in the minimal
    pull-out convention (k1 < t2, k2 < t1); the pulled exponents of each are
    kept alongside.
    """

    field: QHField
    h: BiPoly
    mu: BiPoly
    h_hom: UniPoly
    mu_hom: UniPoly
    h_k1: int
    h_k2: int
    mu_k1: int
    mu_k2: int

    @property
    def t(self) -> TypeVector:
        return self.field.t

    @property
    def r(self) -> int:
        return self.field.r

    @property
    def weight(self) -> int:
        """r + |t|, the normalizing degree of the decomposition."""
        return self.field.r + self.field.t.total


def hamiltonian_field(h: BiPoly, t: TypeVector, r: Optional[int] = None) -> QHField:
    """X_h = (-dh/dy, dh/dx) as a QHField (no coprimality check)."""
    k = qh_degree(h, t)
    if k is None:
        raise FieldError("h is not quasi-homogeneous")
    if r is None:
        r = k - t.total
    return QHField(-h.diff_y(), h.diff_x(), t, r)


def euler_field(t: TypeVector) -> tuple[BiPoly, BiPoly]:
    """D0 = (t1*x, t2*y)."""
    return BiPoly.monomial(1, 0, t.t1), BiPoly.monomial(0, 1, t.t2)


def reconstruct(dec: Decomposition) -> tuple[BiPoly, BiPoly]:
    """X_h + mu*D0, for exactness checks."""
    t = dec.t
    d0x, d0y = euler_field(t)
    return (-dec.h.diff_y() + dec.mu * d0x, dec.h.diff_x() + dec.mu * d0y)


def decompose(F: QHField) -> Decomposition:
    """Unique split F = X_h + mu*D0 (exact)."""
    t, r = F.t, F.r
    w = r + t.total
    if w <= 0:
        raise FieldError("degenerate normalization: r + |t| must be positive")
    scale = Fraction(1, w)
    h = (BiPoly.x() * F.Q * t.t1 - BiPoly.y() * F.P * t.t2).scale(scale)
    mu = (F.P.diff_x() + F.Q.diff_y()).scale(scale)

    if h.is_zero:
        h_k1 = h_k2 = 0
        h_hom = UniPoly.zero()
    else:
        h_k1, h_k2, h_hom = associate_residue_convention(h, t)
    if mu.is_zero:
        mu_k1 = mu_k2 = 0
        mu_hom = UniPoly.zero()
    else:
        mu_k1, mu_k2, mu_hom = associate_residue_convention(mu, t)

    dec = Decomposition(F, h, mu, h_hom, mu_hom, h_k1, h_k2, mu_k1, mu_k2)
    rp, rq = reconstruct(dec)
    if rp != F.P or rq != F.Q:
        raise FieldError("internal error: decomposition failed to reconstruct the field")
    return dec


# ---------------------------------------------------------------------------
# type inference
# ---------------------------------------------------------------------------


def infer_types(P: BiPoly, Q: BiPoly) -> list[tuple[TypeVector, int]]:
    """All admissible (t, r) with t1 <= t2 <= max total degree + 1.

    A zero component is unconstrained.  Returns pairs sorted by (t2, t1).
    """
    from math import gcd as _gcd

    if P.is_zero and Q.is_zero:
        raise FieldError("(P, Q) = (0, 0)")
    dmax = max(P.total_degree(), Q.total_degree()) + 1
    out = []
    for t2 in range(1, dmax + 1):
        for t1 in range(1, t2 + 1):
            if _gcd(t1, t2) != 1:
                continue
            t = TypeVector(t1, t2)
            r: Optional[int] = None
            ok = True
            if not P.is_zero:
                dp = qh_degree(P, t)
                if dp is None:
                    ok = False
                else:
                    r = dp - t1
            if ok and not Q.is_zero:
                dq = qh_degree(Q, t)
                if dq is None:
                    ok = False
                elif r is not None and dq - t2 != r:
                    ok = False
                else:
                    r = dq - t2
            if ok and r is not None:
                out.append((t, r))
    return sorted(out, key=lambda tr: (tr[0].t2, tr[0].t1))
