"""Independent numerical verification by direct ODE integration.

Three instruments: the generalized trigonometric parametrization (the unit
oval of H = y^(2 t1) + x^(2 t2) traversed by its Hamiltonian flow), angular
quadrature of mu/h along that oval, and the Poincare return map of the
field itself on the positive x-axis.  None of them share code with the
residue pipeline they cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from .fields import Decomposition, QHField, decompose
from .polycore import BiPoly, TypeVector

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
TRIG_RTOL = 1e-12
TRIG_ATOL = 1e-14
BOX = 10.0
U0_LADDER = (0.2, 0.1, 0.05)
CENTER_FACTOR = 1e3  # center when |d| <= CENTER_FACTOR * rtol * u0


class IntegratorError(RuntimeError):
    """Numerical integration failed or hit a guard."""


class _PolyFunc:
    """Fast float evaluation of a BiPoly."""

    __slots__ = ("items",)

    def __init__(self, p: BiPoly):
        self.items = [(a, b, float(c)) for (a, b), c in p.terms()]

    def __call__(self, x: float, y: float) -> float:
        total = 0.0
        for a, b, c in self.items:
            total += c * x ** a * y ** b
        return total


@dataclass
class GenTrig:
    """One period of (Cs, Sn) with dense output."""

    t: TypeVector
    period: float
    thetas: np.ndarray
    cs: np.ndarray
    sn: np.ndarray
    energy_drift: float
    tol: float
    _dense: object = None

    def point(self, theta: float) -> tuple[float, float]:
        v = self._dense(theta % self.period)
        return float(v[0]), float(v[1])


def gen_trig(t: TypeVector, tol: float = TRIG_RTOL, grid: int = 2048) -> GenTrig:
    """Integrate the defining IVP from (1, 0) and detect the period.

    The flow is x' = -2 t1 y^(2 t1 - 1), y' = 2 t2 x^(2 t2 - 1); the first
    return to the section y = 0 with y' > 0 closes the oval.
    """
    p1, p2 = 2 * t.t1 - 1, 2 * t.t2 - 1
    c1, c2 = -2.0 * t.t1, 2.0 * t.t2

    def rhs(_, z):
        x, y = z
        return (c1 * y ** p1, c2 * x ** p2)

    def section(_, z):
        return z[1]

    section.terminal = True
    section.direction = 1.0

    pre = solve_ivp(rhs, (0.0, 1e-8), (1.0, 0.0), rtol=tol, atol=TRIG_ATOL, method="DOP853")
    if not pre.success:
        raise IntegratorError(f"gen_trig pre-step failed: {pre.message}")
    sol = solve_ivp(
        rhs, (0.0, 200.0), tuple(pre.y[:, -1]), rtol=tol, atol=TRIG_ATOL,
        method="DOP853", events=section, dense_output=True,
    )
    if not sol.success or not sol.t_events[0].size:
        raise IntegratorError("gen_trig: no period detected within the time bound")
    period = float(sol.t_events[0][0])
    thetas = np.linspace(0.0, period, grid)
    pts = sol.sol(thetas)
    cs, sn = pts[0], pts[1]
    H = sn ** (2 * t.t1) + cs ** (2 * t.t2)
    drift = float(np.max(np.abs(H - 1.0)))
    if drift > 10 * max(tol, 1e-12):
        raise IntegratorError(f"gen_trig energy drift {drift:.3e} exceeds 10*tol")
    return GenTrig(t, period, thetas, cs, sn, drift, tol, sol.sol)


def f0_quadrature(dec: Decomposition, trig: Optional[GenTrig] = None, tol: float = TRIG_RTOL) -> float:
    """Integral of mu/h over one period of the generalized angle.

    Computed by augmenting the oval flow with z' = mu(Cs,Sn)/h(Cs,Sn); the
    guard rejects denominators that come close to zero, which signals a
    monodromy misclassification upstream.
    """
    t = dec.t
    if trig is None:
        trig = gen_trig(t, tol)
    mu = _PolyFunc(dec.mu)
    h = _PolyFunc(dec.h)

    hvals = np.array([h(c, s) for c, s in zip(trig.cs, trig.sn)])
    floor = 1e-9 * float(np.max(np.abs(hvals)) or 1.0)
    if np.min(np.abs(hvals)) < floor:
        raise IntegratorError("near-resonant denominator: h vanishes on the oval")

    p1, p2 = 2 * t.t1 - 1, 2 * t.t2 - 1
    c1, c2 = -2.0 * t.t1, 2.0 * t.t2

    def rhs(_, z):
        x, y, _acc = z
        return (c1 * y ** p1, c2 * x ** p2, mu(x, y) / h(x, y))

    sol = solve_ivp(
        rhs, (0.0, trig.period), (1.0, 0.0, 0.0), rtol=tol, atol=TRIG_ATOL, method="DOP853",
    )
    if not sol.success:
        raise IntegratorError(f"quadrature integration failed: {sol.message}")
    return float(sol.y[2, -1])


@dataclass
class PoincareReport:
    u0_values: tuple
    returns: tuple
    displacements: tuple
    crossing_times: tuple
    label: str
    tol: float

    def as_dict(self) -> dict:
        return {
            "u0": list(self.u0_values),
            "P(u0)": list(self.returns),
            "displacement": list(self.displacements),
            "return_time": list(self.crossing_times),
            "label": self.label,
            "tol": self.tol,
        }


def poincare_return(
    F: Union[QHField, Decomposition],
    u0_ladder: Sequence[float] = U0_LADDER,
    rtol: float = DEFAULT_RTOL,
    box: float = BOX,
) -> PoincareReport:
    """Return map on the section {y = 0, x > 0}.

    Starts at (u0^t1, 0), detects the next crossing with the same sign of
    y', and reports P(u0) = x_return^(1/t1).  Escaping the box |x|,|y| <= box
    before returning is treated as non-monodromic behavior.
    """
    field = F.field if isinstance(F, Decomposition) else F
    t = field.t
    Pf, Qf = _PolyFunc(field.P), _PolyFunc(field.Q)

    def rhs(_, z):
        x, y = z
        return (Pf(x, y), Qf(x, y))

    returns = []
    displacements = []
    times = []
    for u0 in u0_ladder:
        x0 = u0 ** t.t1
        d0 = Qf(x0, 0.0)
        if d0 == 0.0:
            raise IntegratorError("section is not transversal at the start point")
        direction = 1.0 if d0 > 0 else -1.0

        def section(_, z):
            return z[1]

        section.terminal = True
        section.direction = direction

        def escape(_, z):
            return box - max(abs(z[0]), abs(z[1]))

        escape.terminal = True
        escape.direction = -1.0

        pre = solve_ivp(rhs, (0.0, 1e-8), (x0, 0.0), rtol=rtol, atol=DEFAULT_ATOL, method="DOP853")
        if not pre.success:
            raise IntegratorError(f"poincare pre-step failed: {pre.message}")
        # generous horizon: revolution time scales like u0^(-r)
        horizon = 1e4 * max(1.0, min(u0_ladder) ** (-max(field.r, 0)))
        sol = solve_ivp(
            rhs, (0.0, horizon), tuple(pre.y[:, -1]), rtol=rtol, atol=DEFAULT_ATOL,
            method="DOP853", events=(section, escape),
        )
        if sol.t_events[1].size:
            raise IntegratorError("non-monodromic behavior detected: trajectory escaped the box")
        if not sol.success or not sol.t_events[0].size:
            raise IntegratorError("no return to the section within the horizon")
        xr = float(sol.y_events[0][0][0])
        if xr <= 0:
            raise IntegratorError("non-monodromic behavior detected: crossing at x <= 0")
        P = xr ** (1.0 / t.t1)
        returns.append(P)
        displacements.append(P - u0)
        times.append(float(sol.t_events[0][0]))

    thresholds = [CENTER_FACTOR * rtol * u0 for u0 in u0_ladder]
    if all(abs(d) <= thr for d, thr in zip(displacements, thresholds)):
        label = "GlobalCenter"
    else:
        signs = {1 if d > 0 else -1 for d, thr in zip(displacements, thresholds) if abs(d) > thr}
        if len(signs) != 1:
            label = "Inconclusive"
        else:
            label = "UnstableFocus" if signs.pop() > 0 else "StableFocus"
    return PoincareReport(tuple(u0_ladder), tuple(returns), tuple(displacements), tuple(times), label, rtol)


def invariant_ray_scan(dec: Decomposition, trig: Optional[GenTrig] = None) -> Optional[float]:
    """Angle theta0 with h(theta0) = 0, or None when h keeps its sign.

    A zero of h along the oval is an invariant ray of the field, i.e. a
    direct witness of non-monodromy.
    """
    if trig is None:
        trig = gen_trig(dec.t)
    h = _PolyFunc(dec.h)
    vals = np.array([h(c, s) for c, s in zip(trig.cs, trig.sn)])
    if dec.h.is_zero:
        return 0.0
    signs = np.sign(vals)
    idx = np.nonzero(signs[:-1] * signs[1:] <= 0)[0]
    if not idx.size:
        return None
    i = int(idx[0])
    lo, hi = trig.thetas[i], trig.thetas[i + 1]
    flo = vals[i]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        x, y = trig.point(mid)
        fm = h(x, y)
        if fm == 0.0:
            return float(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return float(0.5 * (lo + hi))
