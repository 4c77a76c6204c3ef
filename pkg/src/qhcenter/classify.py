"""Center/focus classification through the residue first-Lyapunov quantity.

f0 is the residue sum -2*pi * sum_{Im(lambda) > 0} Im Res[mu_hom(1,Y) /
h_hom(1,Y), lambda] over the roots of the conservative part's associate.
Monodromic fields are classified GlobalCenter / StableFocus / UnstableFocus;
the stability orientation is calibrated once against the Poincare oracle on
a reference focus instead of trusting any printed constant.

Beyond the f0 threshold test, an exact axis-parity certificate (h even and
mu odd in one variable, possibly only after noticing that the parity holds
identically) short-circuits to GlobalCenter; a reversible monodromic field
is always a center, and for types with t1*t2 even this certificate fires
for every monodromic field while the raw residue value stays nonzero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import mpmath as mp

from .fields import Decomposition, QHField, decompose
from .monodromy import MonodromyResult, monodromy_of_decomposition
from .polycore import UniPoly, cauchy_bound, squarefree_decomposition
from .reversibility import axis_reversible

DEFAULT_DPS = 50
ZERO_THRESHOLD = 1e-9
FOCUS_THRESHOLD = 1e-6


class RootFindingError(RuntimeError):
    """Aberth iteration failed to meet the residual target."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class Label(str, enum.Enum):
    GLOBAL_CENTER = "GlobalCenter"
    STABLE_FOCUS = "StableFocus"
    UNSTABLE_FOCUS = "UnstableFocus"
    NON_MONODROMIC = "NonMonodromic"


@dataclass(frozen=True)
class ComplexRootSet:
    """Numerically localized roots with exact multiplicities attached."""

    roots: tuple  # (value: mpc, multiplicity: int, residue: Optional[mpc])
    precision: int
    residual_bound: float

    def upper_half(self):
        return [r for r in self.roots if mp.im(r[0]) > 0]


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous root refinement
# ---------------------------------------------------------------------------


def _horner_pair(coeffs, z):
    """(p(z), p'(z)) for ascending mpc coefficient list."""
    p = coeffs[-1]
    dp = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_roots(q: UniPoly, dps: int = DEFAULT_DPS) -> list:
    """All complex roots of a squarefree q by Aberth-Ehrlich iteration.

    Initialization on a circle at the Cauchy bound with an angular offset;
    refinement until the residual drops below 10^-(dps-10) relative to the
    coefficient scale.
    """
    n = q.degree
    if n <= 0:
        return []
    with mp.workdps(dps + 15):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in q.coeffs]
        scale = max(abs(c) for c in coeffs)
        if n == 1:
            return [mp.mpc(-coeffs[0] / coeffs[1])]
        R = mp.mpf(float(cauchy_bound(q))) or mp.mpf(1)
        zs = [R * mp.expjpi(2 * mp.mpf(k) / n + mp.mpf(1) / (2 * n) + mp.mpf("0.13")) for k in range(n)]
        target = scale * mp.mpf(10) ** (-(dps - 10))
        hard_target = scale * mp.mpf(10) ** (-40)
        best = mp.inf
        for _ in range(400):
            worst = mp.mpf(0)
            new = list(zs)
            for k in range(n):
                pk, dpk = _horner_pair(coeffs, zs[k])
                worst = max(worst, abs(pk))
                if dpk == 0:
                    new[k] = zs[k] * (1 + mp.mpc(0, 1) * mp.mpf(10) ** -8)
                    continue
                w = pk / dpk
                s = mp.mpc(0)
                for j in range(n):
                    if j != k:
                        d = zs[k] - zs[j]
                        if d == 0:
                            d = mp.mpf(10) ** (-dps)
                        s += 1 / d
                denom = 1 - w * s
                if denom == 0:
                    denom = mp.mpf(10) ** (-dps)
                new[k] = zs[k] - w / denom
            zs = new
            best = min(best, worst)
            if worst <= min(target, hard_target * mp.mpf(10) ** 20) and worst <= target:
                break
        # final residual check
        worst = max(abs(_horner_pair(coeffs, z)[0]) for z in zs)
        if worst > target:
            raise RootFindingError("root refinement did not converge", float(worst / scale))
        return [mp.mpc(z) for z in zs]


def complex_roots(q: UniPoly, dps: int = DEFAULT_DPS) -> ComplexRootSet:
    """Root set of a squarefree polynomial (multiplicity 1 each)."""
    roots = aberth_roots(q, dps)
    with mp.workdps(dps + 15):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in q.coeffs]
        scale = max(abs(c) for c in coeffs) if coeffs else mp.mpf(1)
        resid = max((abs(_horner_pair(coeffs, z)[0]) / scale for z in roots), default=mp.mpf(0))
    return ComplexRootSet(tuple((z, 1, None) for z in roots), dps, float(resid))


# ---------------------------------------------------------------------------
# residues
# ---------------------------------------------------------------------------


def _series_shift_exact(p: UniPoly, z0, order: int) -> list:
    """Taylor coefficients of p at z0 up to w^(order-1), via exact derivatives."""
    out = []
    d = p
    fact = 1
    for k in range(order):
        out.append(d.evaluate(z0) / fact)
        d = d.derivative()
        fact *= k + 1
    return out


def _series_mul(a, b, order):
    out = [mp.mpc(0)] * order
    for i, ai in enumerate(a):
        if i >= order:
            break
        for j, bj in enumerate(b):
            if i + j >= order:
                break
            out[i + j] += ai * bj
    return out


def _series_div(a, b, order):
    inv = [mp.mpc(0)] * order
    inv[0] = 1 / b[0]
    for k in range(1, order):
        acc = mp.mpc(0)
        for j in range(1, k + 1):
            if j < len(b):
                acc += b[j] * inv[k - j]
        inv[k] = -acc / b[0]
    return _series_mul(a, inv, order)


def residue_sum_upper(num: UniPoly, q: UniPoly, dps: int = DEFAULT_DPS):
    """(sum of residues over Im>0 roots, conjugate-symmetry defect, root set).

    q's multiplicity structure is taken from its exact squarefree
    decomposition; each residue at a multiplicity-m root is the w^(m-1)
    series coefficient of num/g around the root, g = q/(Y-root)^m.
    """
    profile = squarefree_decomposition(q)
    with mp.workdps(dps + 15):
        located: list[tuple] = []
        for fac, mult in profile:
            for z in aberth_roots(fac, dps):
                located.append((z, mult))
        lc = mp.mpf(q.lc.numerator) / q.lc.denominator

        def residue_at(z0, m):
            order = m
            nseries = _series_shift_exact(num, z0, order)
            g = [mp.mpc(lc)] + [mp.mpc(0)] * (order - 1)
            for (z, mz) in located:
                if z is z0:
                    continue
                lin = [z0 - z, mp.mpc(1)] + [mp.mpc(0)] * max(0, order - 2)
                for _ in range(mz):
                    g = _series_mul(g, lin, order)
            return _series_div(nseries, g, order)[m - 1]

        total_upper = mp.mpc(0)
        total_all = mp.mpc(0)
        for z, m in located:
            r = residue_at(z, m)
            total_all += r
            if mp.im(z) > 0:
                total_upper += r
        # residues of a real rational function with denominator degree
        # >= numerator degree + 2 sum to 0; use it as the symmetry defect
        scale = max(abs(total_upper), mp.mpf(1))
        defect = float(abs(total_all) / scale)
        roots = ComplexRootSet(tuple((z, m, None) for z, m in located), dps, 0.0)
        return total_upper, defect, roots


def residue_f0(dec: Decomposition, dps: int = DEFAULT_DPS):
    """-2*pi * sum over upper-half-plane roots of Im Res[mu_hom/h_hom].

    Requires a monodromic conservative part.  Returns an mpf.
    """
    mono = monodromy_of_decomposition(dec)
    if not mono.monodromic:
        raise ValueError(f"residue f0 undefined: {mono.reason}")
    if dec.mu.is_zero:
        return mp.mpf(0)
    total_upper, defect, _ = residue_sum_upper(dec.mu_hom, dec.h_hom, dps)
    if defect > 1e-25:
        raise RootFindingError("insufficient precision: residue symmetry defect", defect)
    with mp.workdps(dps):
        return -2 * mp.pi * mp.im(total_upper)


# ---------------------------------------------------------------------------
# stability orientation, calibrated against the ODE oracle
# ---------------------------------------------------------------------------

_ORIENTATION: Optional[int] = None


def _reference_focus() -> QHField:
    """The calibration instance: h = (y^2+x^2)(y^2+4x^2), mu = 2x^2 + y^2."""
    from .polycore import BiPoly

    X, Y = BiPoly.x(), BiPoly.y()
    h = (Y ** 2 + X ** 2) * (Y ** 2 + 4 * X ** 2)
    mu = 2 * X ** 2 + Y ** 2
    return QHField(-h.diff_y() + mu * X, h.diff_x() + mu * Y, _t11(), 2)


def _t11():
    from .polycore import TypeVector

    return TypeVector(1, 1)


def stability_orientation() -> int:
    """+1 if `sign(h) * f0 > 0` means unstable, -1 for the opposite.

    Measured once per process by integrating the Poincare return map of the
    reference focus and comparing against its residue f0.
    """
    global _ORIENTATION
    if _ORIENTATION is not None:
        return _ORIENTATION
    from .oracle import poincare_return

    F = _reference_focus()
    dec = decompose(F)
    f0 = residue_f0(dec)
    report = poincare_return(F, u0_ladder=(0.2,))
    expanding = report.displacements[0] > 0
    s_h = _sign_of_h(dec)
    _ORIENTATION = 1 if (expanding == (s_h * float(f0) > 0)) else -1
    return _ORIENTATION


def _sign_of_h(dec: Decomposition) -> int:
    """Sign of a monodromic h on R^2 minus the origin (it is definite)."""
    lc = dec.h_hom.lc
    return 1 if lc > 0 else -1


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    label: Label
    monodromic: bool
    reason: Optional[str] = None
    f0_residue: Optional[float] = None
    f0_quadrature: Optional[float] = None
    scale: float = 0.0
    sign_basis: str = ""
    center_route: Optional[str] = None
    oracle_agrees: Optional[bool] = None

    def as_dict(self) -> dict:
        return {
            "label": self.label.value,
            "monodromic": self.monodromic,
            "reason": self.reason,
            "f0_residue": self.f0_residue,
            "f0_quadrature": self.f0_quadrature,
            "scale": self.scale,
            "sign_basis": self.sign_basis,
            "center_route": self.center_route,
            "oracle_agrees": self.oracle_agrees,
        }


def f0_scale(dec: Decomposition) -> float:
    """Normalization for the f0 zero test: max|mu| / max|h| coefficients."""
    if dec.mu.is_zero or dec.h.is_zero:
        return 0.0
    return float(dec.mu.max_abs_coeff() / dec.h.max_abs_coeff())


def classify(
    F: Union[QHField, Decomposition],
    dps: int = DEFAULT_DPS,
    with_oracle: bool = False,
) -> Verdict:
    """Full classification of the origin.

    Routes, in order: monodromy gate, Hamiltonian center (mu = 0), exact
    axis-parity center certificate, residue f0 threshold decision with the
    oracle-calibrated stability orientation.
    """
    dec = F if isinstance(F, Decomposition) else decompose(F)
    mono = monodromy_of_decomposition(dec)
    if not mono.monodromic:
        return Verdict(Label.NON_MONODROMIC, False, reason=mono.reason)

    scale = f0_scale(dec)
    if dec.mu.is_zero:
        v = Verdict(
            Label.GLOBAL_CENTER, True, f0_residue=0.0, scale=0.0,
            center_route="hamiltonian", sign_basis="exact",
        )
        return _with_oracle(v, dec, with_oracle, dps)

    f0 = residue_f0(dec, dps)
    f0f = float(f0)

    axes = axis_reversible(dec)
    if axes:
        v = Verdict(
            Label.GLOBAL_CENTER, True, f0_residue=f0f, scale=scale,
            center_route=f"axis-parity:{'+'.join(sorted(axes))}", sign_basis="exact",
        )
        return _with_oracle(v, dec, with_oracle, dps)

    if abs(f0f) <= ZERO_THRESHOLD * scale:
        v = Verdict(
            Label.GLOBAL_CENTER, True, f0_residue=f0f, scale=scale,
            center_route="f0-zero", sign_basis=f"|f0| <= {ZERO_THRESHOLD}*scale",
        )
        return _with_oracle(v, dec, with_oracle, dps)

    orient = stability_orientation()
    s_h = _sign_of_h(dec)
    unstable = orient * s_h * f0f > 0
    v = Verdict(
        Label.UNSTABLE_FOCUS if unstable else Label.STABLE_FOCUS,
        True,
        f0_residue=f0f,
        scale=scale,
        sign_basis=f"oracle-calibrated orientation {orient:+d}, sign(h) = {s_h:+d}",
    )
    return _with_oracle(v, dec, with_oracle, dps)


def _with_oracle(v: Verdict, dec: Decomposition, enabled: bool, dps: int) -> Verdict:
    if not enabled:
        return v
    from dataclasses import replace

    from .oracle import f0_quadrature, gen_trig, poincare_return

    trig = gen_trig(dec.t)
    quad = f0_quadrature(dec, trig)
    report = poincare_return(dec.field)
    agrees = report.label == v.label.value
    return replace(v, f0_quadrature=float(quad), oracle_agrees=agrees)
