"""Reversibility of quasi-homogeneous fields.

Axis-reversibility is a parity statement on the decomposition: F is
Rx-reversible iff h(-x,y) = h(x,y) and mu(-x,y) = -mu(x,y) (Ry likewise in
y).  General reversibility reduces to axis-reversibility after a
degree-zero change id + Psi0 with zero diagonal linear part, which for
t = (1,1) is the two-parameter family (x + a*y, b*x + y) and for
t = (1, n) the one-parameter shear (x, y + s*x^n); other types admit only
the identity.  The search solves the resulting polynomial systems exactly
(resultant elimination plus Sturm isolation) and verifies every candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Union

import mpmath as mp

from .fields import Decomposition, QHField, decompose
from .polycore import (
    BiPoly,
    TypeVector,
    UniPoly,
    bipoly_eval_x,
    rational_roots,
    real_roots_mp,
    resultant_eliminate_y,
)

AXIS_X = "Rx"
AXIS_Y = "Ry"

PARITY_TOL = 1e-10


# ---------------------------------------------------------------------------
# axis parity (exact)
# ---------------------------------------------------------------------------


def axis_reversible(dec: Decomposition) -> set[str]:
    """Axes for which the field is reversible with the identity change.

    Rx requires h even in x and mu odd in x; Ry the same in y.  Decided by
    exact coefficient parity.
    """
    axes = set()
    if dec.h.flip_x() == dec.h and dec.mu.flip_x() == -dec.mu:
        axes.add(AXIS_X)
    if dec.h.flip_y() == dec.h and dec.mu.flip_y() == -dec.mu:
        axes.add(AXIS_Y)
    return axes


# ---------------------------------------------------------------------------
# the degree-zero family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeZeroChange:
    """id + Psi0 with Psi0 of quasi-homogeneous degree zero, zero diagonal.

    For t=(1,1): (x + a*y, b*x + y); for t=(1,n), n > 1: (x, y + s*x^n)
    stored as a = 0, b = s; for all other types only the identity exists.
    """

    t: TypeVector
    a: Union[Fraction, float]
    b: Union[Fraction, float]

    @property
    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, Fraction) and isinstance(self.b, Fraction)

    def invertible(self) -> bool:
        if self.t.t1 == self.t.t2:
            return bool(1 - self.a * self.b != 0)
        return True

    def magnitude(self) -> float:
        return float(abs(self.a)) + float(abs(self.b))

    def substitution(self) -> tuple[BiPoly, BiPoly]:
        """(px, py) with the change acting as p -> p(px, py), exact params only."""
        if not self.is_exact:
            raise ValueError("substitution polynomials need exact parameters")
        if self.t.t1 == self.t.t2:
            px = BiPoly.x() + BiPoly.y().scale(self.a)
            py = BiPoly.x().scale(self.b) + BiPoly.y()
        else:
            px = BiPoly.x()
            py = BiPoly.y() + BiPoly.monomial(self.t.t2, 0, self.b)
        return px, py

    def describe(self) -> str:
        if self.t.t1 == self.t.t2:
            return f"(x + ({self.a})*y, ({self.b})*x + y)"
        if self.is_identity:
            return "identity"
        return f"(x, y + ({self.b})*x^{self.t.t2})"


def degree_zero_family(t: TypeVector) -> dict:
    """Symbolic description of the admissible id + Psi0 family."""
    if t.t1 == t.t2:
        return {"dimension": 2, "form": "(x + a*y, b*x + y)", "parameters": ["a", "b"]}
    if t.t1 == 1:
        return {"dimension": 1, "form": f"(x, y + s*x^{t.t2})", "parameters": ["s"]}
    return {"dimension": 0, "form": "identity", "parameters": []}


@dataclass(frozen=True)
class ReversibilityWitness:
    axis: str
    change: DegreeZeroChange
    residual: float

    def describe(self) -> str:
        return f"{self.axis}-reversible after {self.change.describe()}"


# ---------------------------------------------------------------------------
# transformed decomposition data
# ---------------------------------------------------------------------------


def _symbolic_compose_11(p: BiPoly) -> dict[tuple[int, int], BiPoly]:
    """p(x + a*y, b*x + y) for t=(1,1), coefficients as BiPoly in (a, b).

    Returns a map (i, j) -> coefficient-polynomial of x^i y^j, where the
    coefficient lives in Q[a, b] encoded as a BiPoly with x := a, y := b.
    """
    from math import comb

    out: dict[tuple[int, int], dict] = {}
    for (al, be), c in p.terms():
        # (x + a y)^al = sum_k C(al,k) a^k x^(al-k) y^k
        # (b x + y)^be = sum_l C(be,l) b^l x^l y^(be-l)
        for k in range(al + 1):
            for l in range(be + 1):
                mono = (al - k + l, k + be - l)
                coeff_ab = out.setdefault(mono, {})
                key = (k, l)  # a^k b^l
                coeff_ab[key] = coeff_ab.get(key, Fraction(0)) + c * comb(al, k) * comb(be, l)
    return {mono: BiPoly(d) for mono, d in out.items()}


def _symbolic_shear(p: BiPoly, n: int) -> dict[tuple[int, int], UniPoly]:
    """p(x, y + s*x^n); coefficients as UniPoly in the shear parameter s."""
    from math import comb

    out: dict[tuple[int, int], dict] = {}
    for (al, be), c in p.terms():
        for k in range(be + 1):
            mono = (al + k * n, be - k)
            d = out.setdefault(mono, {})
            d[k] = d.get(k, Fraction(0)) + c * comb(be, k)
    result = {}
    for mono, d in out.items():
        deg = max(d)
        result[mono] = UniPoly([d.get(j, Fraction(0)) for j in range(deg + 1)])
    return result


def _parity_equations_11(dec: Decomposition, axis: str) -> list[BiPoly]:
    """Polynomial system in (a, b) whose zeros give axis-parity after the change.

    The transformed decomposition is (h o M)/det(M), mu o M, so the parity
    conditions are conditions on the coefficients of h o M and mu o M.
    """
    hsym = _symbolic_compose_11(dec.h)
    musym = _symbolic_compose_11(dec.mu)
    eqs = []
    for (i, j), coeff in hsym.items():
        odd = i % 2 if axis == AXIS_X else j % 2
        if odd:
            eqs.append(coeff)
    for (i, j), coeff in musym.items():
        even = (i % 2 == 0) if axis == AXIS_X else (j % 2 == 0)
        if even:
            eqs.append(coeff)
    return [e for e in eqs if not e.is_zero]


def _parity_equations_shear(dec: Decomposition, axis: str) -> list[UniPoly]:
    n = dec.t.t2
    hsym = _symbolic_shear(dec.h, n)
    musym = _symbolic_shear(dec.mu, n)
    eqs = []
    for (i, j), coeff in hsym.items():
        odd = i % 2 if axis == AXIS_X else j % 2
        if odd:
            eqs.append(coeff)
    for (i, j), coeff in musym.items():
        even = (i % 2 == 0) if axis == AXIS_X else (j % 2 == 0)
        if even:
            eqs.append(coeff)
    return [e for e in eqs if not e.is_zero]


# ---------------------------------------------------------------------------
# verification of a candidate change
# ---------------------------------------------------------------------------


def _parity_residual(dec: Decomposition, change: DegreeZeroChange, axis: str) -> float:
    """Max violated parity coefficient of the transformed (h, mu), relative.

    Exact parameters give an exact 0/1-style answer (residual 0.0 or inf);
    numeric parameters are evaluated in mpmath at high precision.
    """
    if change.is_exact:
        px, py = change.substitution()
        ht = dec.h.compose(px, py)
        mut = dec.mu.compose(px, py)
        flip_h = ht.flip_x() if axis == AXIS_X else ht.flip_y()
        flip_mu = mut.flip_x() if axis == AXIS_X else mut.flip_y()
        return 0.0 if (flip_h == ht and flip_mu == -mut) else float("inf")

    with mp.workdps(60):
        a = mp.mpf(change.a) if not isinstance(change.a, Fraction) else mp.mpf(change.a.numerator) / change.a.denominator
        b = mp.mpf(change.b) if not isinstance(change.b, Fraction) else mp.mpf(change.b.numerator) / change.b.denominator
        if dec.t.t1 == dec.t.t2:
            hsym = _symbolic_compose_11(dec.h)
            musym = _symbolic_compose_11(dec.mu)
            hvals = {mono: coeff.evaluate(a, b) for mono, coeff in hsym.items()}
            muvals = {mono: coeff.evaluate(a, b) for mono, coeff in musym.items()}
        else:
            hsym2 = _symbolic_shear(dec.h, dec.t.t2)
            musym2 = _symbolic_shear(dec.mu, dec.t.t2)
            hvals = {mono: coeff.evaluate(b) for mono, coeff in hsym2.items()}
            muvals = {mono: coeff.evaluate(b) for mono, coeff in musym2.items()}
        scale_h = max((abs(v) for v in hvals.values()), default=mp.mpf(1)) or mp.mpf(1)
        scale_mu = max((abs(v) for v in muvals.values()), default=mp.mpf(1)) or mp.mpf(1)
        worst = mp.mpf(0)
        for (i, j), v in hvals.items():
            odd = i % 2 if axis == AXIS_X else j % 2
            if odd:
                worst = max(worst, abs(v) / scale_h)
        for (i, j), v in muvals.items():
            even = (i % 2 == 0) if axis == AXIS_X else (j % 2 == 0)
            if even:
                worst = max(worst, abs(v) / scale_mu)
        return float(worst)


# ---------------------------------------------------------------------------
# exact polynomial-system solving
# ---------------------------------------------------------------------------


def _real_solutions_univariate(eqs: list[UniPoly], dps: int = 50):
    """Common real roots of a univariate system (exact rationals first)."""
    base = min((e for e in eqs if not e.is_zero), key=lambda e: e.degree, default=None)
    if base is None:
        return [Fraction(0)]  # no constraints; pick the identity-adjacent value
    g = base
    for e in eqs:
        if not e.is_zero:
            g = g.gcd(e)
            if g.degree <= 0:
                return []
    sols: list = list(rational_roots(g)) if not g.is_zero else []
    if not g.is_zero and g.degree > 0:
        rats = set(sols)
        for z in real_roots_mp(g, dps=dps):
            if not any(abs(z - mp.mpf(rr.numerator) / rr.denominator) < mp.mpf(10) ** (-dps // 2) for rr in rats):
                sols.append(z)
    return sols


def _specialize(eqs: list[BiPoly], a_val) -> list[UniPoly]:
    """Evaluate the (a, b)-system at a = a_val; exact for Fractions."""
    if isinstance(a_val, Fraction):
        return [bipoly_eval_x(e, a_val) for e in eqs]
    out = []
    with mp.workdps(60):
        for e in eqs:
            # numeric UniPoly in b is represented via mp evaluation later;
            # here collect exact coefficients in b as polynomials in a and
            # evaluate them numerically
            coeffs: dict[int, mp.mpf] = {}
            for (i, j), c in e.terms():
                coeffs[j] = coeffs.get(j, mp.mpf(0)) + (mp.mpf(c.numerator) / c.denominator) * a_val ** i
            out.append(coeffs)
    return out


def _numeric_roots_in_b(coeff_maps, dps: int = 50):
    """Roots of the first surviving numeric polynomial filtered by the rest.

    Specialized equations that vanished at this slice (all coefficients at
    noise level relative to the system scale) impose no constraint on b and
    are dropped; normalizing them by their own tiny scale would spuriously
    reject every candidate.
    """
    if not coeff_maps:
        return [mp.mpf(0)]
    with mp.workdps(dps):
        polys = []
        for m in coeff_maps:
            deg = max(m) if m else 0
            polys.append([m.get(k, mp.mpf(0)) for k in range(deg + 1)])
        global_scale = max((abs(c) for p in polys for c in p), default=mp.mpf(0))
        if global_scale == 0:
            return [mp.mpf(0)]
        floor = global_scale * mp.mpf(10) ** (-(dps - 15))
        live = [p for p in polys if max(abs(c) for c in p) > floor]
        if not live:
            return [mp.mpf(0)]
        lead = live[0]
        # strip negligible leading coefficients
        scale = max(abs(c) for c in lead)
        cs = list(lead)
        while len(cs) > 1 and abs(cs[-1]) < scale * mp.mpf(10) ** -30:
            cs.pop()
        if len(cs) <= 1:
            return []
        roots = mp.polyroots(list(reversed(cs)), maxsteps=200, extraprec=120)
        out = []
        for z in roots:
            if abs(mp.im(z)) < mp.mpf(10) ** -25:
                x = mp.re(z)
                ok = True
                for p in live:
                    scale_p = max(abs(c) for c in p)
                    val = mp.polyval(list(reversed(p)), x) if len(p) > 1 else p[0]
                    if abs(val) / scale_p > mp.mpf(10) ** -18:
                        ok = False
                        break
                if ok:
                    out.append(x)
        return out


def _solve_two_parameter(eqs: list[BiPoly], dps: int = 50):
    """Real solutions (a, b) of a polynomial system over Q[a, b].

    Strategy: one nonzero pairwise resultant in b yields a superset of
    admissible a-values (exact elimination); each candidate a is
    back-substituted and the b-system solved exactly (rational a) or
    numerically at high precision.  If every pairwise resultant vanishes
    identically the solution set contains curves; rational sample values of
    a are tried instead.  All candidates are verified by the caller.
    """
    eqs = [e for e in eqs if not e.is_zero]
    if not eqs:
        return [(Fraction(0), Fraction(0))]
    only_a = all(max((j for (_, j), _ in e.terms()), default=0) == 0 for e in eqs)
    only_b = all(max((i for (i, _), _ in e.terms()), default=0) == 0 for e in eqs)
    if only_a:
        uni = [UniPoly([e.coeff(i, 0) for i in range(max((i for (i, _), _ in e.terms()), default=0) + 1)]) for e in eqs]
        return [(av, Fraction(0)) for av in _real_solutions_univariate(uni, dps)]
    if only_b:
        uni = [bipoly_eval_x(e, Fraction(0)) for e in eqs]
        return [(Fraction(0), bv) for bv in _real_solutions_univariate(uni, dps)]

    candidates_a: Optional[list] = None
    pairs = sorted(
        combinations(range(len(eqs)), 2),
        key=lambda ij: eqs[ij[0]].total_degree() + eqs[ij[1]].total_degree(),
    )
    for i, j in pairs:
        fi, fj = eqs[i], eqs[j]
        if max(b for (_, b), _ in fi.terms()) == 0 and max(b for (_, b), _ in fj.terms()) == 0:
            continue
        res = resultant_eliminate_y(fi, fj)
        if not res.is_zero:
            if res.degree == 0:
                # this pair has no common zero at all
                return []
            candidates_a = _real_solutions_univariate([res], dps)
            break
    if candidates_a is None:
        # all pairs share common components; sample rational slices
        candidates_a = [Fraction(k, d) for d in (1, 2, 3) for k in range(-3 * d, 3 * d + 1)]

    solutions = []
    for av in candidates_a:
        if isinstance(av, Fraction):
            sub = [bipoly_eval_x(e, av) for e in eqs]
            nonzero = [u for u in sub if not u.is_zero]
            if any(u.degree == 0 for u in nonzero):
                continue
            if not nonzero:
                solutions.append((av, Fraction(0)))
                continue
            for bv in _real_solutions_univariate(nonzero, dps):
                solutions.append((av, bv))
        else:
            maps = _specialize(eqs, av)
            for bv in _numeric_roots_in_b(maps, dps):
                solutions.append((av, bv))
    return solutions


# ---------------------------------------------------------------------------
# the public search
# ---------------------------------------------------------------------------


def is_reversible(F: Union[QHField, Decomposition], dps: int = 50) -> Optional[ReversibilityWitness]:
    """Search the degree-zero family for an axis-reversing change.

    The family is exactly the one that decides reversibility of
    quasi-homogeneous fields, so a None result is a definitive negative,
    not a timeout.  Witnesses are verified by the parity test on the
    transformed decomposition (exactly for rational parameters, to 1e-10
    residual otherwise) and the smallest-magnitude witness is returned.
    """
    dec = F if isinstance(F, Decomposition) else decompose(F)
    t = dec.t

    direct = axis_reversible(dec)
    if direct:
        axis = sorted(direct)[0]
        return ReversibilityWitness(axis, DegreeZeroChange(t, Fraction(0), Fraction(0)), 0.0)

    witnesses: list[ReversibilityWitness] = []
    if t.t1 == t.t2:
        for axis in (AXIS_X, AXIS_Y):
            eqs = _parity_equations_11(dec, axis)
            for av, bv in _solve_two_parameter(eqs, dps):
                change = DegreeZeroChange(t, _canon_param(av), _canon_param(bv))
                if not change.invertible():
                    continue
                resid = _parity_residual(dec, change, axis)
                if resid <= PARITY_TOL:
                    witnesses.append(ReversibilityWitness(axis, change, resid))
    elif t.t1 == 1 and t.t2 > 1:
        for axis in (AXIS_X, AXIS_Y):
            eqs = _parity_equations_shear(dec, axis)
            if not eqs:
                continue  # would have been caught by the identity test
            for bv in _real_solutions_univariate(eqs, dps):
                change = DegreeZeroChange(t, Fraction(0), _canon_param(bv))
                resid = _parity_residual(dec, change, axis)
                if resid <= PARITY_TOL:
                    witnesses.append(ReversibilityWitness(axis, change, resid))
    # other types: only the identity change exists; already tested

    if not witnesses:
        return None
    return min(witnesses, key=lambda w: (w.change.magnitude(), w.axis))


def _canon_param(v):
    """Normalize solver output: Fractions stay exact, mpf stays numeric."""
    if isinstance(v, Fraction):
        return v
    return v
