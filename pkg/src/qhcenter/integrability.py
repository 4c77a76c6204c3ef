"""Analytic integrability: Hamiltonian case, the multiple-factor
obstruction, and the residue Diophantine search with certificate.

Decision tree: mu = 0 gives the Hamiltonian first integral U = h; a
repeated factor of a nonzero h together with mu != 0 obstructs
integrability outright; when all factors are simple and there are more
than two of them, integrability is equivalent to an integer solution of
the residue relations, and a found solution is turned into an explicit
first integral U and confirmed by exact expansion of grad(U) . F.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath as mp

from .fields import (
    Decomposition,
    QHField,
    associate_lift,
    decompose,
    homogeneous_associate,
    qh_coprime,
)
from .monodromy import factor_structure
from .polycore import BiPoly, UniPoly, squarefree_decomposition

DEFAULT_DPS = 50
INTEGRALITY_TOL = 1e-8
REALITY_TOL = 1e-20
EXPANSION_CAP = 150  # max M0 for which grad(U).F is expanded exactly


class Status(str, enum.Enum):
    INTEGRABLE_HAMILTONIAN = "IntegrableHamiltonian"
    INTEGRABLE_CERTIFICATE = "IntegrableCertificate"
    NOT_INTEGRABLE = "NotIntegrable"
    INCONCLUSIVE = "Inconclusive"


class Obstruction(str, enum.Enum):
    PROP14_MULTIPLE_FACTOR = "multiple-factor"
    RESIDUE_SEARCH_EXHAUSTED = "residue-search-exhausted"
    NON_REAL_RESIDUE = "non-real-residue"
    EULER_FIELD = "euler-field"


@dataclass(frozen=True)
class FirstIntegral:
    """U = x^ex * y^ey * prod_g G_g(x, y)^(n_g + 1), exact and expanded."""

    U: BiPoly
    degree: int
    exponents: tuple  # ((description, exponent), ...)
    verified: bool

    def describe(self) -> str:
        pieces = [f"{d}^{e}" for d, e in self.exponents if e]
        return " * ".join(pieces) if pieces else "1"


@dataclass(frozen=True)
class IntegrabilityResult:
    status: Status
    certificate: Optional[FirstIntegral] = None
    obstruction: Optional[Obstruction] = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "obstruction": self.obstruction.value if self.obstruction else None,
            "detail": self.detail,
            "first_integral": self.certificate.describe() if self.certificate else None,
            "first_integral_degree": self.certificate.degree if self.certificate else None,
            "verified": self.certificate.verified if self.certificate else None,
        }


# ---------------------------------------------------------------------------
# certificate verification
# ---------------------------------------------------------------------------


def lie_derivative(U: BiPoly, F: QHField) -> BiPoly:
    """grad(U) . F, exactly."""
    return U.diff_x() * F.P + U.diff_y() * F.Q


def is_hamiltonian_integrable(dec: Decomposition) -> Optional[FirstIntegral]:
    """mu = 0 makes h itself a first integral (verified exactly)."""
    if not dec.mu.is_zero or dec.h.is_zero:
        return None
    U = dec.h
    ok = lie_derivative(U, dec.field).is_zero
    from .polycore import qh_degree

    return FirstIntegral(U, qh_degree(U, dec.t), (("h", 1),), ok)


def prop14_obstruction(dec: Decomposition) -> bool:
    """Repeated factor of h (x, y, or a lambda-factor) with mu != 0."""
    if dec.h.is_zero or dec.mu.is_zero:
        return False
    fs = factor_structure(dec.h, dec.t)
    return max(fs.m_x, fs.m_y, fs.max_multiplicity) >= 2


# ---------------------------------------------------------------------------
# the residue Diophantine search
# ---------------------------------------------------------------------------


def _x_side_associate(p: BiPoly, t) -> UniPoly:
    """Associate evaluated at Y = 1: p = x^k1 y^k2 w(X, Y) -> w(X, 1)."""
    k1 = p.min_x_power() % t.t2
    k2 = p.min_y_power() % t.t1
    w = p.shift_divide(k1, k2)
    coeffs: dict[int, Fraction] = {}
    for (a, b), c in w.terms():
        i = a // t.t2
        coeffs[i] = coeffs.get(i, Fraction(0)) + c
    deg = max(coeffs) if coeffs else 0
    return UniPoly([coeffs.get(i, Fraction(0)) for i in range(deg + 1)])


def _rationalize_group(values, dps: int) -> Optional[UniPoly]:
    """Monic polynomial with the given mpc roots, coefficients rationalized."""
    with mp.workdps(dps):
        poly = [mp.mpc(1)]
        for z in values:
            new = [mp.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i + 1] += c
                new[i] -= c * z
            poly = new
        coeffs = []
        for c in poly:
            if abs(mp.im(c)) > mp.mpf(10) ** (-dps // 3):
                return None
            re = mp.re(c)
            fr = Fraction(str(re)).limit_denominator(10 ** (dps // 2))
            coeffs.append(fr)
        return UniPoly(coeffs)


@dataclass
class _ResidueData:
    kind: str  # "x", "y", or "root"
    value: object  # mpc root for "root" kind
    residue: object  # mp.mpf / Fraction


def _residues_all_simple(dec: Decomposition, w_factors: BiPoly, q_factors: UniPoly,
                         delta_x: int, delta_y: int, dps: int):
    """Residues of eta = mu_hom / (X^dx Y^dy w_hom) at the 0-poles and roots.

    w_factors is the product part h / (x^m_x y^m_y); its associates carry
    h's normalization constant, so the residue values live on the same
    scale as the decomposition itself.
    """
    from .classify import aberth_roots

    out: list[_ResidueData] = []
    t = dec.t
    if delta_x:
        mu_x = _x_side_associate(dec.mu, t)
        h_x = _x_side_associate(w_factors, t)
        hx0 = h_x.evaluate(Fraction(0))
        if hx0 == 0:
            raise ValueError("x-side associate vanishes at 0; unexpected structure")
        out.append(_ResidueData("x", None, mu_x.evaluate(Fraction(0)) / hx0))
    if delta_y:
        q0 = q_factors.evaluate(Fraction(0))
        if q0 == 0:
            raise ValueError("lambda-part vanishes at 0; unexpected structure")
        out.append(_ResidueData("y", None, dec.mu_hom.evaluate(Fraction(0)) / q0))
    with mp.workdps(dps + 10):
        dq = q_factors.derivative()
        for z in aberth_roots(q_factors, dps):
            num = dec.mu_hom.evaluate(z)
            den = dq.evaluate(z) * (z ** delta_y if delta_y else 1)
            out.append(_ResidueData("root", z, num / den))
    return out


def thm15_search(
    dec: Decomposition,
    m0_max: Optional[int] = None,
    dps: int = DEFAULT_DPS,
) -> IntegrabilityResult:
    """Integer search over the residue relations; emits a verified integral.

    Hypotheses (all factors simple, more than two of them) are checked by
    the caller; exhaustion of the M0 range is a definitive negative when
    they hold.
    """
    t, w = dec.t, dec.weight
    mxy = homogeneous_associate(dec.h, t)
    m_x_full, m_y_full, q_factors = mxy
    delta_x = 1 if m_x_full > 0 else 0
    delta_y = 1 if m_y_full > 0 else 0
    n_factors = delta_x + delta_y + q_factors.degree
    if m0_max is None:
        m0_max = 200 * t.t1 * t.t2 * max(n_factors, 1)

    w_factors = dec.h.shift_divide(m_x_full, m_y_full)
    data = _residues_all_simple(dec, w_factors, q_factors, delta_x, delta_y, dps)

    # reality gate
    with mp.workdps(dps):
        for d in data:
            if d.kind == "root":
                scale = max(abs(d.residue), mp.mpf(1))
                if abs(mp.im(d.residue)) / scale > REALITY_TOL:
                    return IntegrabilityResult(
                        Status.NOT_INTEGRABLE,
                        obstruction=Obstruction.NON_REAL_RESIDUE,
                        detail=f"residue {mp.nstr(d.residue, 8)} at {mp.nstr(d.value, 8)} is not real",
                    )

    # n + 1 = M0 * s for each unknown; the displayed relations give:
    #   root:   s = (1 - rho) / w
    #   y-pole: s = (1 - t1*rho) / w
    #   x-pole: s = (1 + t2*rho) / w     (sign per the display; see ledger)
    def slopes(x_sign: int):
        out = []
        for d in data:
            if d.kind == "root":
                rho = mp.re(d.residue) if not isinstance(d.residue, Fraction) else d.residue
                out.append(("root", d, (1 - rho) / w))
            elif d.kind == "y":
                out.append(("y", d, (1 - t.t1 * d.residue) / w))
            else:
                out.append(("x", d, (1 + x_sign * t.t2 * d.residue) / w))
        return out

    for x_sign in (1, -1) if delta_x else (1,):
        ss = slopes(x_sign)
        if any((float(s) if not isinstance(s, Fraction) else s) <= 0 for _, _, s in ss):
            continue
        sol = _find_m0(ss, w, t, delta_x, delta_y, m0_max)
        if sol is None:
            continue
        m0, exps = sol
        result = _build_certificate(dec, q_factors, data, exps, m0, delta_x, delta_y, m_x_full, m_y_full, dps)
        if result is not None:
            return result

    return IntegrabilityResult(
        Status.NOT_INTEGRABLE,
        obstruction=Obstruction.RESIDUE_SEARCH_EXHAUSTED,
        detail=f"no integer solution with M0 <= {m0_max}",
    )


def _find_m0(ss, w, t, delta_x, delta_y, m0_max):
    """Smallest M0 making every n+1 = M0*s a positive integer, sum > count."""
    exact = all(isinstance(s, Fraction) for _, _, s in ss)
    if exact:
        from math import lcm

        L = 1
        for _, _, s in ss:
            L = lcm(L, s.denominator)
        base = L
        k = 1
        while k * base <= m0_max:
            m0 = k * base
            exps = [int(m0 * s) for _, _, s in ss]
            if all(e >= 1 for e in exps) and _m0_consistent(m0, exps, ss, t, delta_x, delta_y) and sum(exps) > len(exps):
                return m0, exps
            k += 1
        return None
    with mp.workdps(60):
        for m0 in range(1, m0_max + 1):
            exps = []
            ok = True
            for _, _, s in ss:
                v = m0 * (s if not isinstance(s, Fraction) else mp.mpf(s.numerator) / s.denominator)
                n1 = int(mp.nint(v))
                if n1 < 1 or abs(v - n1) > INTEGRALITY_TOL:
                    ok = False
                    break
                exps.append(n1)
            if ok and _m0_consistent(m0, exps, ss, t, delta_x, delta_y) and sum(exps) > len(exps):
                return m0, exps
    return None


def _m0_consistent(m0, exps, ss, t, delta_x, delta_y):
    total = 0
    for (kind, _, _), e in zip(ss, exps):
        if kind == "x":
            total += t.t1 * e
        elif kind == "y":
            total += t.t2 * e
        else:
            total += t.t1 * t.t2 * e
    return total == m0


def _build_certificate(dec, q_factors, data, exps, m0, delta_x, delta_y, m_x_full, m_y_full, dps):
    """Assemble U, rationalize the root groups, verify exactly."""
    t = dec.t
    idx = 0
    ex = ey = 0
    root_exp: list[tuple] = []
    for (d, e) in zip(data, exps):
        if d.kind == "x":
            ex = e
        elif d.kind == "y":
            ey = e
        else:
            root_exp.append((d.value, e))
        idx += 1

    # group roots by exponent; each group must rationalize to a factor of q
    groups: dict[int, list] = {}
    for z, e in root_exp:
        groups.setdefault(e, []).append(z)
    U = BiPoly.monomial(ex if delta_x else 0, ey if delta_y else 0)
    names: list[tuple] = []
    if delta_x and ex:
        names.append(("x", ex))
    if delta_y and ey:
        names.append(("y", ey))
    for e, zs in sorted(groups.items()):
        g = _rationalize_group(zs, dps)
        if g is None:
            return None
        rem = q_factors.monic() % g
        if not rem.is_zero:
            # rationalization failed; retry at doubled precision once
            g = _rationalize_group(zs, dps * 2)
            if g is None or not (q_factors.monic() % g).is_zero:
                return None
        lifted = associate_lift(g, t)
        U = U * lifted ** e
        names.append((f"({lifted})", e))

    if m0 > EXPANSION_CAP:
        return IntegrabilityResult(
            Status.INCONCLUSIVE,
            detail=f"candidate first integral of degree {m0} too large to verify exactly",
        )
    L = lie_derivative(U, dec.field)
    if not L.is_zero:
        return None
    cert = FirstIntegral(U, m0, tuple(names), True)
    return IntegrabilityResult(Status.INTEGRABLE_CERTIFICATE, certificate=cert)


# ---------------------------------------------------------------------------
# decision tree
# ---------------------------------------------------------------------------


def analyze_integrability(
    F: Union[QHField, Decomposition],
    m0_max: Optional[int] = None,
    dps: int = DEFAULT_DPS,
) -> IntegrabilityResult:
    dec = F if isinstance(F, Decomposition) else decompose(F)

    ham = is_hamiltonian_integrable(dec)
    if ham is not None:
        return IntegrabilityResult(Status.INTEGRABLE_HAMILTONIAN, certificate=ham)

    if dec.h.is_zero:
        return IntegrabilityResult(
            Status.NOT_INTEGRABLE,
            obstruction=Obstruction.EULER_FIELD,
            detail="pure Euler field: every ray is invariant, no non-constant analytic integral",
        )

    if not qh_coprime(dec.field.P, dec.field.Q, dec.t):
        return IntegrabilityResult(
            Status.INCONCLUSIVE, detail="field is reducible; irreducibility hypothesis violated"
        )

    if prop14_obstruction(dec):
        return IntegrabilityResult(
            Status.NOT_INTEGRABLE,
            obstruction=Obstruction.PROP14_MULTIPLE_FACTOR,
            detail="h has a repeated factor and mu != 0",
        )

    fs = factor_structure(dec.h, dec.t)
    n_factors = (1 if fs.m_x else 0) + (1 if fs.m_y else 0) + fs.distinct_factor_count
    if n_factors <= 2:
        return IntegrabilityResult(
            Status.INCONCLUSIVE,
            detail=f"h has {n_factors} simple factor(s); the residue criterion needs more than two",
        )
    return thm15_search(dec, m0_max=m0_max, dps=dps)
