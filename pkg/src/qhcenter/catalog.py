"""Machine-readable catalog of the degree-0..4 families.

Records live in data/families.txt: monomial templates with coefficient
expressions in a tiny prefix grammar, plus the published monodromy /
center / reversibility / integrability predicates.  Instantiation is
exact; sampling is deterministic under a fixed seed and solves each
predicate for one slot so that on/off-manifold samples satisfy it exactly.

The engine is the arbiter for the published conditions: records may carry
a `warning` flag when the recorded condition disagrees with the engine's
classification (see S15/S24).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional, Sequence, Union

from .fields import QHField, qh_coprime
from .polycore import BiPoly, TypeVector, UniPoly, sturm_real_roots

ParamMap = dict[str, Fraction]


class CatalogError(ValueError):
    pass


class InfeasibleSampleError(CatalogError):
    """The requested manifold is empty for this family."""


# ---------------------------------------------------------------------------
# prefix expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_expr(text: str):
    """Parse a prefix s-expression into nested tuples/atoms."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def walk():
        nonlocal pos
        if pos >= len(tokens):
            raise CatalogError(f"unexpected end of expression in {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(walk())
            if pos >= len(tokens):
                raise CatalogError(f"missing ')' in {text!r}")
            pos += 1
            if len(items) == 1:  # parenthesized atom, pure grouping
                return items[0]
            return tuple(items)
        if tok == ")":
            raise CatalogError(f"unexpected ')' in {text!r}")
        return _atom(tok)

    out = walk()
    if pos != len(tokens):
        raise CatalogError(f"trailing tokens in {text!r}")
    return out


def _atom(tok: str):
    if re.fullmatch(r"-?\d+", tok):
        return Fraction(int(tok))
    if re.fullmatch(r"-?\d+/\d+", tok):
        num, den = tok.split("/")
        return Fraction(int(num), int(den))
    if tok in ("true", "false"):
        return tok == "true"
    return tok  # parameter name or operator


def eval_expr(node, params: ParamMap):
    """Exact evaluation; returns Fraction for arithmetic, bool for predicates."""
    if isinstance(node, bool):
        return node
    if isinstance(node, Fraction):
        return node
    if isinstance(node, str):
        if node in params:
            return params[node]
        raise CatalogError(f"unknown parameter {node!r}")
    op, *args = node
    if op in ("+", "*", "and", "or"):
        vals = [eval_expr(a, params) for a in args]
        if op == "+":
            out = Fraction(0)
            for v in vals:
                out += v
            return out
        if op == "*":
            out = Fraction(1)
            for v in vals:
                out *= v
            return out
        if op == "and":
            return all(vals)
        return any(vals)
    if op == "-":
        if len(args) == 1:
            return -eval_expr(args[0], params)
        return eval_expr(args[0], params) - eval_expr(args[1], params)
    if op == "/":
        return eval_expr(args[0], params) / eval_expr(args[1], params)
    if op == "^":
        return eval_expr(args[0], params) ** int(eval_expr(args[1], params))
    if op == "not":
        return not eval_expr(args[0], params)
    a = eval_expr(args[0], params)
    b = eval_expr(args[1], params)
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    raise CatalogError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# family records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    name: str
    t: TypeVector
    r: int
    params: tuple[str, ...]
    P: Optional[tuple] = None  # ((coeff_ast, a, b), ...)
    Q: Optional[tuple] = None
    H: Optional[Union[tuple, str]] = None  # template or special:<name>
    MU: Optional[tuple] = None
    predicates: dict = field(default_factory=dict)
    warning: Optional[str] = None

    @property
    def uses_hmu(self) -> bool:
        return self.H is not None


def _parse_template(text: str):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff, a, b = chunk.rsplit("|", 2)
        out.append((parse_expr(coeff.strip()), int(a), int(b)))
    return tuple(out)


def _load_records(raw: str) -> dict[str, FamilySpec]:
    records: dict[str, FamilySpec] = {}
    name = None
    fields: dict[str, str] = {}

    def flush():
        nonlocal fields, name
        if name is None:
            return
        t1, t2 = (int(v) for v in fields["t"].split())
        spec = FamilySpec(
            name=name,
            t=TypeVector(t1, t2),
            r=int(fields["r"]),
            params=tuple(fields["params"].split()),
            P=_parse_template(fields["P"]) if "P" in fields else None,
            Q=_parse_template(fields["Q"]) if "Q" in fields else None,
            H=(fields["H"].strip() if fields.get("H", "").strip().startswith("special:")
               else (_parse_template(fields["H"]) if "H" in fields else None)),
            MU=_parse_template(fields["MU"]) if "MU" in fields else None,
            predicates={
                key: (fields[key].strip() if fields[key].strip().startswith("special:")
                      or fields[key].strip() == "none" else parse_expr(fields[key]))
                for key in ("monodromic", "center", "reversible", "integrable")
                if key in fields
            },
            warning=fields.get("warning"),
        )
        records[name] = spec
        fields = {}

    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            flush()
            name = m.group(1)
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    flush()
    return records


_CATALOG: Optional[dict[str, FamilySpec]] = None


def load_catalog() -> dict[str, FamilySpec]:
    global _CATALOG
    if _CATALOG is None:
        raw = resources.files("qhcenter").joinpath("data/families.txt").read_text()
        _CATALOG = _load_records(raw)
    return _CATALOG


def family(name: str) -> FamilySpec:
    cat = load_catalog()
    if name not in cat:
        raise CatalogError(f"unknown family {name!r}; known: {', '.join(sorted(cat))}")
    return cat[name]


def family_names() -> list[str]:
    return sorted(load_catalog())


# ---------------------------------------------------------------------------
# special structures
# ---------------------------------------------------------------------------


def _s31_h(params: ParamMap) -> BiPoly:
    X, Y = BiPoly.x(), BiPoly.y()
    A, B, C = params["A"], params["B"], params["C"]
    return (Y ** 2 + X ** 2) * (Y ** 2 + X ** 2 * (B * B)) * (
        (Y - X * A) ** 2 + X ** 2 * (C * C)
    )


def s31_center_form(params: ParamMap) -> Fraction:
    """The published degree-4 three-pair center condition, transcribed exactly."""
    A, B, C = params["A"], params["B"], params["C"]
    c0 = C + B + C ** 3 + B ** 2 + 3 * B * C + 2 * B * C ** 2 + 2 * C ** 2 + B ** 2 * C + A ** 2 * C
    c1 = 2 * A * B * C + B ** 2 * A + A * B
    c2 = (B * C ** 3 + A ** 2 * B * C + B ** 2 * A ** 2 + B * A ** 2 + B ** 2 * C
          + B ** 2 * C ** 2 + B * C ** 2)
    c3 = A * C ** 2 * B ** 2 + A ** 3 * B ** 2 + A * C ** 2 * B + A ** 3 * B + 2 * A * B ** 2 * C
    c4 = (A ** 4 * B + B ** 3 * C + 3 * B ** 2 * A ** 2 * C + A ** 2 * B * C + B ** 2 * C ** 4
          + 2 * B ** 3 * C ** 2 + C ** 4 * B + 2 * B ** 2 * C ** 2 + B * C ** 3 + B ** 3 * C ** 3
          + B ** 3 * C * A ** 2 + 2 * B ** 2 * A ** 2 * C ** 2 + 3 * B ** 2 * C ** 3
          + B ** 2 * A ** 4 + 2 * A ** 2 * C ** 2 * B)
    return (c0 * params["mu0"] + c1 * params["mu1"] + c2 * params["mu2"]
            + c3 * params["mu3"] + c4 * params["mu4"])


def s31_center_coeff(params: ParamMap, k: int) -> Fraction:
    probe = dict(params)
    for i in range(5):
        probe[f"mu{i}"] = Fraction(1 if i == k else 0)
    return s31_center_form(probe)


def _s29_beta_manifold_polys(params: ParamMap) -> list[UniPoly]:
    """Polynomials in beta whose common nonzero real root certifies the
    published reversible parametrization of the degree-4 triple-pair form."""
    m0, m1 = params["mu0"], params["mu1"]
    m2, m3, m4 = params["mu2"], params["mu3"], params["mu4"]
    # 2 b^2 mu2 + 3 b (b^2-1) mu1 + 3 (b^2-1)^2 mu0 = 0
    p2 = (UniPoly([0, 0, 2 * m2]) + UniPoly([0, -3 * m1, 0, 3 * m1])
          + UniPoly([3 * m0, 0, -6 * m0, 0, 3 * m0]))
    # 2 b^3 mu3 - (b^2-1)(b^4-6b^2+1) mu0 - b(b^4-4b^2+1) mu1 = 0
    poly_b2 = UniPoly([-1, 0, 1])  # b^2 - 1
    poly_q4 = UniPoly([1, 0, -6, 0, 1])  # b^4 - 6 b^2 + 1
    poly_q4b = UniPoly([1, 0, -4, 0, 1])  # b^4 - 4 b^2 + 1
    p3 = (UniPoly([0, 0, 0, 2 * m3]) - (poly_b2 * poly_q4).scale(m0)
          - (UniPoly([0, 1]) * poly_q4b).scale(m1))
    # 2 b^2 mu4 - (b^4-4b^2+1) mu0 - b(b^2-1) mu1 = 0
    p4 = (UniPoly([0, 0, 2 * m4]) - poly_q4b.scale(m0)
          - (UniPoly([0, 1]) * poly_b2).scale(m1))
    return [p for p in (p2, p3, p4) if not p.is_zero]


def s29_reversible_predicate(params: ParamMap) -> bool:
    if params["mu0"] == 0 and params["mu2"] == 0 and params["mu4"] == 0:
        return True
    polys = _s29_beta_manifold_polys(params)
    if not polys:
        return True
    g = polys[0]
    for p in polys[1:]:
        g = g.gcd(p)
        if g.degree <= 0:
            return False
    # a common real root with beta != 0
    zero_mult = 0
    cs = list(g.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
        zero_mult += 1
    reduced = UniPoly(cs)
    return reduced.degree > 0 and sturm_real_roots(reduced) > 0


_SPECIALS: dict[str, Callable] = {
    "s31_center": lambda p: s31_center_form(p) == 0,
    "s29_reversible": s29_reversible_predicate,
}


# ---------------------------------------------------------------------------
# instantiation and predicates
# ---------------------------------------------------------------------------


def _build(template, params: ParamMap) -> BiPoly:
    terms: dict = {}
    for coeff_ast, a, b in template:
        c = eval_expr(coeff_ast, params)
        if c:
            terms[(a, b)] = terms.get((a, b), Fraction(0)) + c
    return BiPoly(terms)


def _as_param_map(spec: FamilySpec, values) -> ParamMap:
    if isinstance(values, dict):
        missing = set(spec.params) - set(values)
        extra = set(values) - set(spec.params)
        if missing or extra:
            raise CatalogError(
                f"{spec.name} parameters are {spec.params}; missing {sorted(missing)}, extra {sorted(extra)}"
            )
        return {k: Fraction(values[k]) for k in spec.params}
    values = list(values)
    if len(values) != len(spec.params):
        raise CatalogError(
            f"{spec.name} takes {len(spec.params)} parameters {spec.params}, got {len(values)}"
        )
    return {k: Fraction(v) for k, v in zip(spec.params, values)}


def instantiate(name: str, values) -> QHField:
    """Concrete exact field from a parameter assignment.

    Reducible instances are allowed here (some strata are reducible for
    every parameter choice); the monodromy analysis stays valid for them.
    """
    spec = family(name)
    params = _as_param_map(spec, values)
    if spec.uses_hmu:
        if spec.H == "special:s31_h":
            h = _s31_h(params)
        else:
            h = _build(spec.H, params)
        mu = _build(spec.MU, params) if spec.MU else BiPoly.zero()
        t = spec.t
        P = -h.diff_y() + mu * BiPoly.monomial(1, 0, t.t1)
        Q = h.diff_x() + mu * BiPoly.monomial(0, 1, t.t2)
        return QHField(P, Q, t, spec.r)
    P = _build(spec.P, params)
    Q = _build(spec.Q, params)
    return QHField(P, Q, spec.t, spec.r)


def predicate(name: str, which: str, values) -> Optional[bool]:
    """Evaluate a recorded predicate exactly; None when not recorded."""
    spec = family(name)
    node = spec.predicates.get(which)
    if node is None or node == "none":
        return None
    params = _as_param_map(spec, values)
    if isinstance(node, str) and node.startswith("special:"):
        return _SPECIALS[node.split(":", 1)[1]](params)
    return bool(eval_expr(node, params))


# ---------------------------------------------------------------------------
# deterministic sampling
# ---------------------------------------------------------------------------


def _frac(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
        if not nonzero or v != 0:
            return v


def _pos(rng: random.Random) -> Fraction:
    return abs(_frac(rng, nonzero=True))


def _neg_product_slot(rng: random.Random, square_term: Fraction, factor: Fraction, k: int) -> Fraction:
    """Solve `square_term + k * factor * slot < 0` for slot, exactly."""
    margin = _pos(rng)
    return (-square_term - margin) / (k * factor)


def _pos_product_slot(rng: random.Random, square_term: Fraction, factor: Fraction, k: int) -> Fraction:
    margin = _pos(rng)
    return (-square_term + margin) / (k * factor)


def _coprime_retry(name: str, make, max_tries: int = 200):
    for _ in range(max_tries):
        params = make()
        try:
            f = instantiate(name, params)
        except Exception:
            continue
        if qh_coprime(f.P, f.Q, f.t):
            return params
    raise CatalogError(f"could not draw a coprime {name} sample in {max_tries} tries")


def _sampler_disc_family(square_expr, slot: str, k_times_other: Callable, center_slot, center_solve):
    """Shared machinery for the one-conjugate-pair families (S11-like).

    square_expr(params) is the squared part of the discriminant,
    k_times_other(params) the coefficient multiplying the free slot.
    """

    def monodromic(rng, params):
        params[slot] = _neg_product_slot(rng, square_expr(params), k_times_other(params), 1)
        return params

    def non_monodromic(rng, params):
        params[slot] = _pos_product_slot(rng, square_expr(params), k_times_other(params), 1)
        return params

    return monodromic, non_monodromic


def _draw(spec: FamilySpec, rng: random.Random, nonzero: Sequence[str] = ()) -> ParamMap:
    return {
        p: _frac(rng, nonzero=(p in nonzero)) for p in spec.params
    }


def _sample_one(name: str, mode: str, rng: random.Random) -> ParamMap:
    spec = family(name)

    def base(nonzero=()):
        return _draw(spec, rng, nonzero)

    if name == "S11":
        if mode in ("generic",):
            return _coprime_retry(name, lambda: base())
        if mode in ("monodromic", "off_center", "on_center", "non_monodromic"):
            def make():
                p = base(nonzero=("a01",))
                if mode == "on_center":
                    p["a10"] = -p["b01"]
                sq = (p["b01"] - p["a10"]) ** 2
                if mode == "non_monodromic":
                    p["b10"] = _pos_product_slot(rng, sq, 4 * p["a01"], 1)
                else:
                    p["b10"] = _neg_product_slot(rng, sq, 4 * p["a01"], 1)
                if mode == "off_center" and p["a10"] + p["b01"] == 0:
                    p["a10"] = p["a10"] + _pos(rng)
                    sq = (p["b01"] - p["a10"]) ** 2
                    p["b10"] = _neg_product_slot(rng, sq, 4 * p["a01"], 1)
                return p
            return _coprime_retry(name, make)

    if name in ("S12", "S13", "S14", "S17", "S21", "S22", "S23", "S25", "S26",
                "S28T2", "S28T3", "S28T4"):
        if mode in ("monodromic", "on_center", "off_center"):
            raise InfeasibleSampleError(f"{name} has an empty monodromic manifold")
        nz = {
            "S12": ("a10", "b20", "b01"),
            "S13": (),
            "S14": ("a01", "b20"),
            "S17": ("a30", "b40", "b02"),
            "S21": (),
            "S22": ("a40", "a02", "b50"),
            "S23": ("a40", "b60", "b02"),
            "S25": ("a11", "b30", "b02"),
            "S26": ("a01", "b40"),
            "S28T2": ("a50", "b60", "b03"),
            "S28T3": ("a50", "a21", "b70", "b12"),
            "S28T4": ("a50", "b80", "b02"),
        }[name]
        if name == "S28T3":
            # inherently reducible stratum; skip the coprimality filter
            return base(nonzero=nz)
        return _coprime_retry(name, lambda: base(nonzero=nz))

    if name in ("S15", "S18", "S24", "S28T5"):
        lead, free, factor_slot, k = {
            "S15": ("a20", "b11", ("b30", "a01"), 8),
            "S18": ("a30", "b21", ("b50", "a01"), 12),
            "S24": ("a40", "b31", ("b70", "a01"), 16),
            "S28T5": ("a50", "b41", ("b90", "a01"), 20),
        }[name]
        mult = {"S15": 2, "S18": 3, "S24": 4, "S28T5": 5}[name]

        def make():
            p = base(nonzero=(factor_slot[1],))
            if mode == "on_center":
                p[free] = -mult * p[lead]
            elif mode == "off_center" and p[free] + mult * p[lead] == 0:
                p[free] = p[free] + _pos(rng)
            sq = (p[free] - mult * p[lead]) ** 2
            if mode == "non_monodromic":
                p[factor_slot[0]] = _pos_product_slot(rng, sq, k * p[factor_slot[1]], 1)
            else:
                p[factor_slot[0]] = _neg_product_slot(rng, sq, k * p[factor_slot[1]], 1)
            return p

        if mode in ("generic",):
            return _coprime_retry(name, lambda: base(nonzero=(factor_slot[1],)))
        if mode in ("monodromic", "non_monodromic", "on_center", "off_center"):
            return _coprime_retry(name, make)

    if name == "S19":
        def draw_B():
            while True:
                B = _pos(rng)
                if B != 1:
                    return B

        def make():
            p = base()
            p["B"] = draw_B()
            if mode == "on_center":
                p["mu2"] = _frac(rng)
                p["mu0"] = -p["B"] * p["mu2"]
            elif mode == "off_center":
                while p["mu0"] + p["B"] * p["mu2"] == 0:
                    p["mu0"] = _frac(rng, nonzero=True)
            elif mode == "on_reversible":
                p["mu0"] = Fraction(0)
                p["mu2"] = Fraction(0)
                p["mu1"] = _frac(rng, nonzero=True)
            elif mode == "off_reversible":
                p["mu2"] = _frac(rng, nonzero=True)
                p["mu0"] = -p["B"] * p["mu2"]
            elif mode == "on_integrable":
                p["mu0"] = p["mu1"] = p["mu2"] = Fraction(0)
            elif mode == "off_integrable":
                p["mu2"] = _frac(rng, nonzero=True)
                p["mu0"] = -p["B"] * p["mu2"]
            return p

        if mode == "non_monodromic":
            raise InfeasibleSampleError("S19 is monodromic for every B != 0")
        return make()

    if name == "S19B1":
        def make():
            p = base()
            if mode in ("on_center", "off_integrable"):
                p["mu2"] = -p["mu0"]
            elif mode == "off_center":
                while p["mu0"] + p["mu2"] == 0:
                    p["mu0"] = _frac(rng, nonzero=True)
            elif mode == "on_reversible":
                p["mu0"] = _frac(rng, nonzero=True)
                p["mu2"] = -p["mu0"]
            elif mode == "on_integrable":
                p["mu0"] = p["mu1"] = p["mu2"] = Fraction(0)
            return p

        if mode == "non_monodromic":
            raise InfeasibleSampleError("S19B1 is monodromic for every parameter choice")
        return make()

    if name == "S29":
        def make():
            p = base()
            if mode == "on_center":
                p["mu2"] = -3 * (p["mu0"] + p["mu4"])
            elif mode == "off_center":
                while p["mu2"] + 3 * (p["mu0"] + p["mu4"]) == 0:
                    p["mu2"] = _frac(rng, nonzero=True)
            elif mode in ("on_reversible", "off_reversible"):
                beta = _frac(rng, nonzero=True)
                while beta * beta == 1:
                    beta = _frac(rng, nonzero=True)
                m0 = _frac(rng, nonzero=True)
                m1 = _frac(rng)
                b2 = beta * beta
                p["mu0"], p["mu1"] = m0, m1
                p["mu2"] = Fraction(-3, 2) * (b2 - 1) / beta * (m1 + (b2 - 1) / beta * m0)
                p["mu3"] = Fraction(1, 2) / b2 * ((b2 - 1) * (b2 * b2 - 6 * b2 + 1) / beta * m0
                                                  + (b2 * b2 - 4 * b2 + 1) * m1)
                p["mu4"] = Fraction(1, 2) / beta * ((b2 * b2 - 4 * b2 + 1) / beta * m0
                                                    + (b2 - 1) * m1)
                if mode == "off_reversible":
                    p["mu3"] = p["mu3"] + Fraction(1, 10)
            elif mode == "on_reversible_axis":
                p["mu0"] = p["mu2"] = p["mu4"] = Fraction(0)
            elif mode == "on_integrable":
                for k in range(5):
                    p[f"mu{k}"] = Fraction(0)
            elif mode == "off_integrable":
                p["mu2"] = -3 * (p["mu0"] + p["mu4"])
                if all(p[f"mu{k}"] == 0 for k in range(5)):
                    p["mu1"] = _frac(rng, nonzero=True)
            return p

        if mode == "non_monodromic":
            raise InfeasibleSampleError("S29 is monodromic for every parameter choice")
        return make()

    if name == "S30":
        def draw_B():
            while True:
                B = _pos(rng)
                if B != 1:
                    return B

        def make():
            p = base()
            p["B"] = B = draw_B()
            if mode in ("on_center", "off_integrable"):
                p["mu2"] = -(2 * p["mu4"] * B * B + (p["mu0"] + p["mu4"]) * B + 2 * p["mu0"]) / B
                if mode == "off_integrable" and all(p[f"mu{k}"] == 0 for k in range(5)):
                    p["mu1"] = _frac(rng, nonzero=True)
            elif mode == "off_center":
                while 2 * p["mu4"] * B * B + (p["mu0"] + p["mu2"] + p["mu4"]) * B + 2 * p["mu0"] == 0:
                    p["mu0"] = _frac(rng, nonzero=True)
            elif mode == "on_reversible":
                p["mu0"] = p["mu2"] = p["mu4"] = Fraction(0)
            elif mode == "off_reversible":
                # center with an even-slot obstruction
                p["mu4"] = _frac(rng, nonzero=True)
                p["mu2"] = -(2 * p["mu4"] * B * B + (p["mu0"] + p["mu4"]) * B + 2 * p["mu0"]) / B
                if p["mu0"] == 0 and p["mu2"] == 0:
                    p["mu0"] = _frac(rng, nonzero=True)
                    p["mu2"] = -(2 * p["mu4"] * B * B + (p["mu0"] + p["mu4"]) * B + 2 * p["mu0"]) / B
            elif mode == "on_integrable":
                for k in range(5):
                    p[f"mu{k}"] = Fraction(0)
            return p

        if mode == "non_monodromic":
            raise InfeasibleSampleError("S30 is monodromic for every B != 0")
        return make()

    if name == "S31":
        def draw_abc():
            while True:
                A = _frac(rng)
                B = _pos(rng)
                C = _pos(rng)
                if B == 1 or C == 0 or B == 0:
                    continue
                if A == 0 and (C == 1 or C == B):
                    continue
                return A, B, C

        def make():
            p = base()
            p["A"], p["B"], p["C"] = draw_abc()
            if mode in ("on_center", "off_integrable"):
                c0 = s31_center_coeff(p, 0)
                rest = s31_center_form({**p, "mu0": Fraction(0)})
                p["mu0"] = -rest / c0
                if mode == "off_integrable" and all(p[f"mu{k}"] == 0 for k in range(5)):
                    p["mu1"] = _frac(rng, nonzero=True)
                    rest = s31_center_form({**p, "mu0": Fraction(0)})
                    p["mu0"] = -rest / c0
            elif mode == "off_center":
                while s31_center_form(p) == 0:
                    p["mu0"] = _frac(rng, nonzero=True)
            elif mode == "on_reversible":
                p["A"] = Fraction(0)
                while p["C"] == 1 or p["C"] == p["B"]:
                    p["C"] = _pos(rng)
                p["mu0"] = p["mu2"] = p["mu4"] = Fraction(0)
            elif mode == "off_reversible":
                c0 = s31_center_coeff(p, 0)
                rest = s31_center_form({**p, "mu0": Fraction(0)})
                p["mu0"] = -rest / c0
                if p["mu0"] == 0:
                    p["mu2"] = _frac(rng, nonzero=True)
                    rest = s31_center_form({**p, "mu0": Fraction(0)})
                    p["mu0"] = -rest / c0
            elif mode == "on_integrable":
                for k in range(5):
                    p[f"mu{k}"] = Fraction(0)
            return p

        if mode == "non_monodromic":
            raise InfeasibleSampleError("S31 is monodromic whenever B, C != 0")
        return make()

    if mode == "generic":
        return _coprime_retry(name, lambda: base())
    raise CatalogError(f"family {name} has no sampler for mode {mode!r}")


def sample(name: str, mode: str, count: int, seed: int) -> list[ParamMap]:
    """Deterministic exact parameter samples on/off the requested manifold."""
    spec = family(name)
    rng = random.Random(f"{name}:{mode}:{seed}")
    out = []
    for _ in range(count):
        out.append(_sample_one(name, mode, rng))
    return out
