"""Canonical forms of monodromic homogeneous fields (t = (1,1), r = 2 or 4).

Degree-zero linear changes act on the roots of h_hom(1, Y) as real Moebius
maps; the canonicalization sends one conjugate pair to {+-i}, rotates a
second pair onto the imaginary axis, and reads the remaining data off.
Root data is algebraic, so the changes are carried in extended precision
and the result is certified by the residual against the target form, never
by exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath as mp

from .classify import aberth_roots
from .fields import Decomposition, QHField, decompose
from .monodromy import monodromy_of_decomposition
from .polycore import BiPoly, TypeVector, UniPoly, squarefree_decomposition

FORM_TOL = 1e-10
WORK_DPS = 50


class NormalFormError(ValueError):
    pass


@dataclass(frozen=True)
class LinearChange:
    """(x, y) -> (m11 x + m12 y, m21 x + m22 y) followed by F -> c*F, c > 0."""

    m11: float
    m12: float
    m21: float
    m22: float
    time_scale: float

    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_dict(self) -> dict:
        return {
            "matrix": [[self.m11, self.m12], [self.m21, self.m22]],
            "time_scale": self.time_scale,
        }


@dataclass(frozen=True)
class CanonicalForm:
    kind: str  # Form19 | Form29 | Form30 | Form31
    params: dict  # B for 19/30; (A, B, C) for 31; {} for 29
    mu_params: tuple
    change: LinearChange
    residual: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": {k: float(v) for k, v in self.params.items()},
            "mu": [float(m) for m in self.mu_params],
            "change": self.change.as_dict(),
            "residual": self.residual,
        }


# ---------------------------------------------------------------------------
# root pairing
# ---------------------------------------------------------------------------


def real_quadratic_factors(h: BiPoly, t: TypeVector, dps: int = WORK_DPS):
    """Pair the roots of h_hom(1,Y) into [(a_j, b_j, multiplicity)], b_j > 0.

    Requires a monodromic homogeneous h (t = (1,1), even degree, no real
    factors).
    """
    if t.t1 != 1 or t.t2 != 1:
        raise NormalFormError("real quadratic pairing applies to t = (1,1) only")
    from .fields import homogeneous_associate

    k1, k2, q = homogeneous_associate(h, t)
    if k1 or k2:
        raise NormalFormError("h has an axis factor; not monodromic")
    pairs = []
    with mp.workdps(dps):
        for fac, mult in squarefree_decomposition(q):
            for z in aberth_roots(fac, dps):
                if mp.im(z) > 0:
                    pairs.append((mp.re(z), mp.im(z), mult))
                elif abs(mp.im(z)) == 0:
                    raise NormalFormError("h_hom has a real root; not monodromic")
    return sorted(pairs, key=lambda p: (float(p[0]), float(p[1])))


# ---------------------------------------------------------------------------
# numeric composition helpers
# ---------------------------------------------------------------------------


def _compose_linear_numeric(p: BiPoly, m11, m12, m21, m22) -> dict:
    """Coefficients of p(m11 x + m12 y, m21 x + m22 y) as an mpf dict."""
    from math import comb

    out: dict[tuple[int, int], mp.mpf] = {}
    for (a, b), c in p.terms():
        cf = mp.mpf(c.numerator) / c.denominator
        for k in range(a + 1):
            for l in range(b + 1):
                mono = ((a - k) + l, k + (b - l))
                coeff = cf * comb(a, k) * comb(b, l) * m11 ** (a - k) * m12 ** k * m21 ** l * m22 ** (b - l)
                out[mono] = out.get(mono, mp.mpf(0)) + coeff
    return out


def _target_h_numeric(kind: str, params: dict) -> dict:
    """mpf coefficient dict of the target h, params possibly irrational."""
    one = mp.mpf(1)
    if kind == "Form29":
        factors = [{(0, 2): one, (2, 0): one}] * 3
    elif kind == "Form19":
        B = mp.mpf(params["B"])
        factors = [{(0, 2): one, (2, 0): one}, {(0, 2): one, (2, 0): B * B}]
    elif kind == "Form30":
        B = mp.mpf(params["B"])
        factors = [{(0, 2): one, (2, 0): one}] * 2 + [{(0, 2): one, (2, 0): B * B}]
    elif kind == "Form31":
        A, B, C = mp.mpf(params["A"]), mp.mpf(params["B"]), mp.mpf(params["C"])
        factors = [
            {(0, 2): one, (2, 0): one},
            {(0, 2): one, (2, 0): B * B},
            {(0, 2): one, (1, 1): -2 * A, (2, 0): A * A + C * C},
        ]
    else:
        raise NormalFormError(f"unknown form kind {kind}")
    acc = {(0, 0): one}
    for f in factors:
        new: dict = {}
        for (a1, b1), c1 in acc.items():
            for (a2, b2), c2 in f.items():
                key = (a1 + a2, b1 + b2)
                new[key] = new.get(key, mp.mpf(0)) + c1 * c2
        acc = new
    return acc


# ---------------------------------------------------------------------------
# Moebius steps (as variable-change matrices)
# ---------------------------------------------------------------------------


def _mat_mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def _root_image(m, lam):
    """Root transform of (y - lam x) under the change matrix (m11,m12,m21,m22)."""
    m11, m12, m21, m22 = m
    den = m22 - lam * m12
    return (lam * m11 - m21) / den


def _affine_to_i(a1, b1):
    """Change matrix sending root a1 + i b1 to i: lam -> (lam - a1)/b1."""
    # Moebius [[1, -a1], [0, b1]] => variable matrix [[1, 0], [a1, b1]]
    return (mp.mpf(1), mp.mpf(0), mp.mpf(a1), mp.mpf(b1))


def _rotation(A):
    """Change (x + A y, -A x + y); fixes {+-i} as a root set."""
    return (mp.mpf(1), mp.mpf(A), -mp.mpf(A), mp.mpf(1))


def _inversion():
    """Change (x, y) -> (-y, x); root map lam -> -1/lam (fixes +-i, s -> 1/s)."""
    return (mp.mpf(0), mp.mpf(-1), mp.mpf(1), mp.mpf(0))


def _flip_x():
    return (mp.mpf(-1), mp.mpf(0), mp.mpf(0), mp.mpf(1))


def _flip_y():
    return (mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(-1))


def _rotation_angles(p, q):
    """Solutions A of p*A^2 + (p^2 + q^2 - 1)*A - p = 0 (always real).

    A parametrizes the rotation taking the second root pair (at p + iq
    after the first pair sits at +-i) onto the imaginary axis.
    """
    p = mp.mpf(p)
    q = mp.mpf(q)
    if p == 0:
        return [mp.mpf(0)]
    mid = p * p + q * q - 1
    disc = mp.sqrt(mid * mid + 4 * p * p)
    return [(-mid + disc) / (2 * p), (-mid - disc) / (2 * p)]


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------


def _finish(dec: Decomposition, kind: str, params: dict, mat, dps: int) -> CanonicalForm:
    """Apply the change, normalize sign and time scale, check the residual."""
    with mp.workdps(dps):
        det = mat[0] * mat[3] - mat[1] * mat[2]
        if det == 0:
            raise NormalFormError("degenerate change matrix")
        hT = _compose_linear_numeric(dec.h, *mat)
        d = max(a + b for a, b in hT)
        gamma = hT.get((0, d), mp.mpf(0)) / det
        if gamma == 0:
            raise NormalFormError("transformed h lost its pure y power")
        if gamma < 0:
            mat = _mat_mul(mat, _flip_y())
            det = mat[0] * mat[3] - mat[1] * mat[2]
            hT = _compose_linear_numeric(dec.h, *mat)
            gamma = hT.get((0, d), mp.mpf(0)) / det
        muT = _compose_linear_numeric(dec.mu, *mat)
        c = 1 / gamma
        target = _target_h_numeric(kind, params)
        scale = max(abs(v) for v in target.values())
        resid = mp.mpf(0)
        for key in set(hT) | set(target):
            got = hT.get(key, mp.mpf(0)) * c / det
            want = target.get(key, mp.mpf(0))
            resid = max(resid, abs(got - want))
        resid = float(resid / scale)
        if resid > FORM_TOL:
            raise NormalFormError(f"canonical form residual {resid:.3e} exceeds tolerance")
        r = dec.r
        mus = []
        for k in range(r + 1):
            mus.append(float(muT.get((r - k, k), mp.mpf(0)) * c))
        change = LinearChange(float(mat[0]), float(mat[1]), float(mat[2]), float(mat[3]), float(c))
        fparams = {k: float(v) for k, v in params.items()}
        return CanonicalForm(kind, fparams, tuple(mus), change, resid)


def canonicalize_r2(F: Union[QHField, Decomposition], dps: int = WORK_DPS) -> CanonicalForm:
    """Reduce a monodromic homogeneous cubic field to the (B, mu0..mu2) form.

    h becomes (y^2+x^2)(y^2+B^2 x^2) with B >= 1; B = 1 exactly when h has
    a double factor.
    """
    dec = F if isinstance(F, Decomposition) else decompose(F)
    if dec.t != TypeVector(1, 1) or dec.r != 2:
        raise NormalFormError("canonicalize_r2 needs t = (1,1), r = 2")
    mono = monodromy_of_decomposition(dec)
    if not mono.monodromic:
        raise NormalFormError(f"not monodromic: {mono.reason}")
    pairs = real_quadratic_factors(dec.h, dec.t, dps)
    with mp.workdps(dps):
        if len(pairs) == 1 and pairs[0][2] == 2:
            a1, b1, _ = pairs[0]
            mat = _affine_to_i(a1, b1)
            return _finish(dec, "Form19", {"B": mp.mpf(1)}, mat, dps)
        if len(pairs) != 2:
            raise NormalFormError("unexpected multiplicity profile for r = 2")
        best: Optional[CanonicalForm] = None
        for first, second in ((0, 1), (1, 0)):
            a1, b1, _ = pairs[first]
            a2, b2, _ = pairs[second]
            m0 = _affine_to_i(a1, b1)
            lam2 = _root_image(m0, mp.mpc(a2, b2))
            for A in _rotation_angles(mp.re(lam2), mp.im(lam2)):
                mat = _mat_mul(m0, _rotation(A))
                img = _root_image(mat, mp.mpc(a2, b2))
                s = abs(mp.im(img))
                if s == 0:
                    continue
                if s < 1:
                    mat = _mat_mul(mat, _inversion())
                    s = 1 / s
                try:
                    cf = _finish(dec, "Form19", {"B": s}, mat, dps)
                except NormalFormError:
                    continue
                if best is None or cf.params["B"] < best.params["B"] or (
                    cf.params["B"] == best.params["B"] and cf.residual < best.residual
                ):
                    best = cf
        if best is None:
            raise NormalFormError("no admissible change found (unexpected)")
        return best


def canonicalize_r4(F: Union[QHField, Decomposition], dps: int = WORK_DPS) -> CanonicalForm:
    """Reduce a monodromic homogeneous quintic field to form 29, 30 or 31.

    Multiplicity profile (3) -> Form29; (2,1) -> Form30 with the double pair
    at +-i and B >= 1; (1,1,1) -> Form31 with C > 0, B > 0 and the
    candidate minimizing (A, B, C) lexicographically, A sign fixed by an
    x-flip.
    """
    dec = F if isinstance(F, Decomposition) else decompose(F)
    if dec.t != TypeVector(1, 1) or dec.r != 4:
        raise NormalFormError("canonicalize_r4 needs t = (1,1), r = 4")
    mono = monodromy_of_decomposition(dec)
    if not mono.monodromic:
        raise NormalFormError(f"not monodromic: {mono.reason}")
    pairs = real_quadratic_factors(dec.h, dec.t, dps)
    profile = sorted((m for _, _, m in pairs), reverse=True)
    with mp.workdps(dps):
        if profile == [3]:
            a1, b1, _ = pairs[0]
            return _finish(dec, "Form29", {}, _affine_to_i(a1, b1), dps)
        if profile == [2, 1]:
            dbl = next(p for p in pairs if p[2] == 2)
            simp = next(p for p in pairs if p[2] == 1)
            m0 = _affine_to_i(dbl[0], dbl[1])
            lam2 = _root_image(m0, mp.mpc(simp[0], simp[1]))
            best: Optional[CanonicalForm] = None
            for A in _rotation_angles(mp.re(lam2), mp.im(lam2)):
                mat = _mat_mul(m0, _rotation(A))
                img = _root_image(mat, mp.mpc(simp[0], simp[1]))
                s = abs(mp.im(img))
                if s == 0:
                    continue
                if s < 1:
                    mat = _mat_mul(mat, _inversion())
                    s = 1 / s
                try:
                    cf = _finish(dec, "Form30", {"B": s}, mat, dps)
                except NormalFormError:
                    continue
                if best is None or cf.params["B"] < best.params["B"]:
                    best = cf
            if best is None:
                raise NormalFormError("no admissible change found for Form30")
            return best
        if profile == [1, 1, 1]:
            best: Optional[CanonicalForm] = None
            best_key = None
            for i in range(3):
                for j in range(3):
                    if j == i:
                        continue
                    k = 3 - i - j
                    p1, p2, p3 = pairs[i], pairs[j], pairs[k]
                    m0 = _affine_to_i(p1[0], p1[1])
                    lam2 = _root_image(m0, mp.mpc(p2[0], p2[1]))
                    for A in _rotation_angles(mp.re(lam2), mp.im(lam2)):
                        mat = _mat_mul(m0, _rotation(A))
                        img2 = _root_image(mat, mp.mpc(p2[0], p2[1]))
                        B = abs(mp.im(img2))
                        if B == 0:
                            continue
                        img3 = _root_image(mat, mp.mpc(p3[0], p3[1]))
                        Aval = mp.re(img3)
                        Cval = abs(mp.im(img3))
                        if Cval == 0:
                            continue
                        m2 = mat
                        if Aval < 0:
                            m2 = _mat_mul(mat, _flip_x())
                            img3b = _root_image(m2, mp.mpc(p3[0], p3[1]))
                            Aval = mp.re(img3b)
                            Cval = abs(mp.im(img3b))
                        try:
                            cf = _finish(dec, "Form31", {"A": Aval, "B": B, "C": Cval}, m2, dps)
                        except NormalFormError:
                            continue
                        key = (cf.params["A"], cf.params["B"], cf.params["C"])
                        if best is None or key < best_key:
                            best, best_key = cf, key
            if best is None:
                raise NormalFormError("no admissible change found for Form31")
            return best
    raise NormalFormError(f"unexpected multiplicity profile {profile}")


def canonical_field(cf: CanonicalForm, t: TypeVector = TypeVector(1, 1)) -> QHField:
    """Rebuild the canonical field from (kind, params, mu) with rational
    coefficients (parameters rationalized at high precision)."""
    X, Y = BiPoly.x(), BiPoly.y()

    def rat(v: float) -> Fraction:
        return Fraction(repr(v)).limit_denominator(10 ** 14)

    kind = cf.kind
    if kind == "Form19":
        B = rat(cf.params["B"])
        h = (Y ** 2 + X ** 2) * (Y ** 2 + X ** 2 * (B * B))
    elif kind == "Form29":
        h = (X ** 2 + Y ** 2) ** 3
    elif kind == "Form30":
        B = rat(cf.params["B"])
        h = (Y ** 2 + X ** 2) ** 2 * (Y ** 2 + X ** 2 * (B * B))
    else:
        A, B, C = (rat(cf.params[k]) for k in ("A", "B", "C"))
        h = (Y ** 2 + X ** 2) * (Y ** 2 + X ** 2 * (B * B)) * ((Y - X * A) ** 2 + X ** 2 * (C * C))
    r = len(cf.mu_params) - 1
    mu = BiPoly.zero()
    for k, m in enumerate(cf.mu_params):
        mu = mu + BiPoly.monomial(r - k, k, rat(m))
    return QHField(-h.diff_y() + mu * X, h.diff_x() + mu * Y, t, r)
