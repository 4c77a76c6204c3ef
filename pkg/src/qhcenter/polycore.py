"""Exact rational polynomial arithmetic with quasi-homogeneous grading.

Everything in this module is exact: coefficients are `fractions.Fraction`,
values are immutable after construction, and every operation is a pure
function.  Floating point never enters here; numeric root localization lives
in `classify` and the ODE machinery in `oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


def _frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class TypeVector:
    """Quasi-homogeneous type t = (t1, t2), coprime with 0 < t1 <= t2."""

    t1: int
    t2: int

    def __post_init__(self) -> None:
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"type weights must be positive, got {(self.t1, self.t2)}")
        if self.t1 > self.t2:
            raise ValueError(f"type must satisfy t1 <= t2, got {(self.t1, self.t2)}")
        if gcd(self.t1, self.t2) != 1:
            raise ValueError(f"type weights must be coprime, got {(self.t1, self.t2)}")

    @property
    def total(self) -> int:
        return self.t1 + self.t2

    def weight(self, a: int, b: int) -> int:
        return a * self.t1 + b * self.t2

    def __str__(self) -> str:
        return f"({self.t1},{self.t2})"


def _grlex_key(ab):
    a, b = ab
    return (a + b, a)


class BiPoly:
    """Bivariate polynomial over Q as a map (a, b) -> coefficient.

    Terms with zero coefficient are never stored; equality is structural.
    Canonical term order is graded lexicographic by (a+b, a).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                c = _frac(c)
                if c:
                    if a < 0 or b < 0:
                        raise ValueError(f"negative exponent in term {(a, b)}")
                    clean[(int(a), int(b))] = c
        object.__setattr__(self, "_terms", clean)

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly()

    @staticmethod
    def one() -> "BiPoly":
        return BiPoly({(0, 0): 1})

    @staticmethod
    def constant(c: Scalar) -> "BiPoly":
        return BiPoly({(0, 0): c})

    @staticmethod
    def x() -> "BiPoly":
        return BiPoly({(1, 0): 1})

    @staticmethod
    def y() -> "BiPoly":
        return BiPoly({(0, 1): 1})

    @staticmethod
    def monomial(a: int, b: int, c: Scalar = 1) -> "BiPoly":
        return BiPoly({(a, b): c})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        """Terms in canonical graded-lex order."""
        for ab in sorted(self._terms, key=_grlex_key):
            yield ab, self._terms[ab]

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(a + b for a, b in self._terms)

    def max_abs_coeff(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return max(abs(c) for c in self._terms.values())

    def min_x_power(self) -> int:
        """Largest k with x^k dividing the polynomial (0 for the zero poly)."""
        if not self._terms:
            return 0
        return min(a for a, _ in self._terms)

    def min_y_power(self) -> int:
        if not self._terms:
            return 0
        return min(b for _, b in self._terms)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self._terms)
        for ab, c in other._terms.items():
            s = out.get(ab, Fraction(0)) + c
            if s:
                out[ab] = s
            else:
                out.pop(ab, None)
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly({ab: -c for ab, c in self._terms.items()})

    def __mul__(self, other: Union["BiPoly", Scalar]) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                ab = (a1 + a2, b1 + b2)
                s = out.get(ab, Fraction(0)) + c1 * c2
                if s:
                    out[ab] = s
                else:
                    out.pop(ab, None)
        return BiPoly(out)

    def __rmul__(self, other: Scalar) -> "BiPoly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "BiPoly":
        c = _frac(c)
        if not c:
            return BiPoly()
        return BiPoly({ab: cc * c for ab, cc in self._terms.items()})

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result = BiPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- calculus and substitution -------------------------------------------

    def diff_x(self) -> "BiPoly":
        return BiPoly({(a - 1, b): c * a for (a, b), c in self._terms.items() if a})

    def diff_y(self) -> "BiPoly":
        return BiPoly({(a, b - 1): c * b for (a, b), c in self._terms.items() if b})

    def evaluate(self, x, y):
        """Evaluate at a point; works for Fraction, float, complex, mpmath."""
        total = 0
        for (a, b), c in self._terms.items():
            term = x ** a * y ** b if (a or b) else 1
            total = total + term * (c if isinstance(x, Fraction) else _to_num(c, x))
        return total

    def compose(self, px: "BiPoly", py: "BiPoly") -> "BiPoly":
        """Exact substitution x -> px, y -> py."""
        out = BiPoly.zero()
        xp_cache: dict[int, BiPoly] = {0: BiPoly.one()}
        yp_cache: dict[int, BiPoly] = {0: BiPoly.one()}

        def power(base: BiPoly, n: int, cache: dict) -> BiPoly:
            if n not in cache:
                cache[n] = power(base, n - 1, cache) * base
            return cache[n]

        for (a, b), c in self._terms.items():
            out = out + (power(px, a, xp_cache) * power(py, b, yp_cache)).scale(c)
        return out

    def flip_x(self) -> "BiPoly":
        """p(-x, y)."""
        return BiPoly({(a, b): (-c if a % 2 else c) for (a, b), c in self._terms.items()})

    def flip_y(self) -> "BiPoly":
        """p(x, -y)."""
        return BiPoly({(a, b): (-c if b % 2 else c) for (a, b), c in self._terms.items()})

    def swap_xy(self) -> "BiPoly":
        return BiPoly({(b, a): c for (a, b), c in self._terms.items()})

    def shift_divide(self, a: int, b: int) -> "BiPoly":
        """Exact division by the monomial x^a y^b."""
        out = {}
        for (i, j), c in self._terms.items():
            if i < a or j < b:
                raise ValueError(f"x^{a} y^{b} does not divide term x^{i} y^{j}")
            out[(i - a, j - b)] = c
        return BiPoly(out)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True):
            factors = []
            if c != 1 and c != -1 or (a == 0 and b == 0):
                factors.append(str(abs(c)))
            if a:
                factors.append("x" if a == 1 else f"x^{a}")
            if b:
                factors.append("y" if b == 1 else f"y^{b}")
            mono = "*".join(factors) if factors else "1"
            if not parts:
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"+ {mono}" if c > 0 else f"- {mono}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"BiPoly({self})"


def _to_num(c: Fraction, like):
    """Convert a Fraction into the numeric domain of `like` (float/complex/mpf)."""
    if isinstance(like, (int, Fraction)):
        return c
    try:  # mpmath types expose context via .context? use duck typing on type
        import mpmath

        if isinstance(like, (mpmath.mpf, mpmath.mpc)):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


class UniPoly:
    """Univariate polynomial over Q, coefficients ascending."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[Scalar] = ()):  # ascending
        cs = [
            _frac(c) for c in coeffs
        ]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "_c", tuple(cs))

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly()

    @staticmethod
    def one() -> "UniPoly":
        return UniPoly((1,))

    @staticmethod
    def constant(c: Scalar) -> "UniPoly":
        return UniPoly((c,))

    @staticmethod
    def variable() -> "UniPoly":
        return UniPoly((0, 1))

    @staticmethod
    def from_roots(roots: Iterable[Scalar]) -> "UniPoly":
        p = UniPoly.one()
        for r in roots:
            p = p * UniPoly((-_frac(r), 1))
        return p

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def lc(self) -> Fraction:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def __getitem__(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self._c), len(other._c))
        return UniPoly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self._c), len(other._c))
        return UniPoly([self[k] - other[k] for k in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self._c])

    def __mul__(self, other: Union["UniPoly", Scalar]) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if not a:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return UniPoly(out)

    def __rmul__(self, other: Scalar) -> "UniPoly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "UniPoly":
        c = _frac(c)
        return UniPoly([cc * c for cc in self._c]) if c else UniPoly()

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result, base = UniPoly.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self._c)
        d, lc = other.degree, other.lc
        while len(r) - 1 >= d and any(r):
            while r and not r[-1]:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lc
            q[k] = f
            for i, c in enumerate(other._c):
                r[k + i] -= f * c
            r.pop()
        return UniPoly(q), UniPoly(r)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self._c)][1:])

    def evaluate(self, z):
        """Horner evaluation; exact for Fraction, numeric otherwise."""
        if not self._c:
            return 0 * z if not isinstance(z, Fraction) else Fraction(0)
        exact = isinstance(z, (int, Fraction))
        acc = self._c[-1] if exact else _to_num(self._c[-1], z)
        for c in reversed(self._c[:-1]):
            acc = acc * z + (c if exact else _to_num(c, z))
        return acc

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly.zero()
        for c in reversed(self._c):
            acc = acc * other + UniPoly.constant(c)
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lc)

    def primitive_positive(self) -> "UniPoly":
        """Integer-primitive multiple of self with the same leading sign.

        Dividing by a positive constant; used to keep Euclidean remainder
        sequences from blowing up coefficient sizes.
        """
        if self.is_zero:
            return self
        part, s = self.primitive_int()
        return part if s > 0 else -part

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd via a primitive Euclidean remainder sequence."""
        a, b = self.primitive_positive(), other.primitive_positive()
        while not b.is_zero:
            a, b = b, (a % b).primitive_positive()
        return a.monic() if not a.is_zero else a

    def primitive_int(self) -> tuple["UniPoly", Fraction]:
        """Return (integer-coefficient primitive part, scalar) with self = scalar*part."""
        if self.is_zero:
            return self, Fraction(1)
        from math import lcm

        den = 1
        for c in self._c:
            den = lcm(den, c.denominator)
        ints = [c * den for c in self._c]
        g = 0
        for c in ints:
            g = gcd(g, int(c))
        g = g or 1
        part = UniPoly([c / g for c in ints])
        return part, Fraction(g, den)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if not c:
                continue
            if k == 0:
                mono = str(abs(c))
            else:
                var = "Y" if k == 1 else f"Y^{k}"
                mono = var if abs(c) == 1 else f"{abs(c)}*{var}"
            if not parts:
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"+ {mono}" if c > 0 else f"- {mono}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"UniPoly({self})"


# ---------------------------------------------------------------------------
# quasi-homogeneous grading
# ---------------------------------------------------------------------------


def qh_degree(p: BiPoly, t: TypeVector) -> Optional[int]:
    """Quasi-homogeneous degree of p for type t, or None if p is not
    quasi-homogeneous.  The zero polynomial has undefined degree."""
    if p.is_zero:
        raise ValueError("undefined degree: zero polynomial")
    k = None
    for (a, b), _ in p.terms():
        w = t.weight(a, b)
        if k is None:
            k = w
        elif w != k:
            return None
    return k


def qh_split(p: BiPoly, t: TypeVector) -> list[tuple[int, BiPoly]]:
    """Split p into quasi-homogeneous components, degrees strictly increasing."""
    buckets: dict[int, dict] = {}
    for (a, b), c in p.terms():
        buckets.setdefault(t.weight(a, b), {})[(a, b)] = c
    return [(k, BiPoly(buckets[k])) for k in sorted(buckets)]


def qh_monomials(t: TypeVector, k: int) -> list[tuple[int, int]]:
    """All exponent pairs (a, b) with a*t1 + b*t2 = k."""
    out = []
    for b in range(k // t.t2 + 1):
        rem = k - b * t.t2
        if rem % t.t1 == 0:
            out.append((rem // t.t1, b))
    return sorted(out)


def euler_apply(p: BiPoly, t: TypeVector) -> BiPoly:
    """t1*x*dp/dx + t2*y*dp/dy."""
    return BiPoly.x() * p.diff_x() * t.t1 + BiPoly.y() * p.diff_y() * t.t2


# ---------------------------------------------------------------------------
# Sturm chains, real roots, squarefree decomposition
# ---------------------------------------------------------------------------


def sturm_chain(q: UniPoly) -> list[UniPoly]:
    """Sturm chain with each member scaled to integer-primitive form.

    Positive scalings preserve all sign variations, and keep the remainder
    coefficients from exploding for moderate degrees.
    """
    chain = [q.primitive_positive(), q.derivative().primitive_positive()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        chain.append((-(chain[-2] % chain[-1])).primitive_positive())
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _sign_at(q: UniPoly, x: Fraction) -> int:
    v = q.evaluate(x)
    return (v > 0) - (v < 0)


def _sign_at_inf(q: UniPoly, positive: bool) -> int:
    if q.is_zero:
        return 0
    s = (q.lc > 0) - (q.lc < 0)
    if not positive and q.degree % 2 == 1:
        s = -s
    return s


def sturm_count(q: UniPoly, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None) -> int:
    """Distinct real roots of q in (lo, hi]; the whole line when bounds are None."""
    if q.is_zero:
        raise ValueError("zero polynomial")
    if q.degree == 0:
        return 0
    chain = sturm_chain(q)
    lo_signs = [_sign_at(p, lo) if lo is not None else _sign_at_inf(p, False) for p in chain]
    hi_signs = [_sign_at(p, hi) if hi is not None else _sign_at_inf(p, True) for p in chain]
    return _variations(lo_signs) - _variations(hi_signs)


def sturm_real_roots(q: UniPoly) -> int:
    """Number of distinct real roots, exactly."""
    return sturm_count(q)


def cauchy_bound(q: UniPoly) -> Fraction:
    """All complex roots have |z| <= bound."""
    if q.is_zero or q.degree == 0:
        return Fraction(1)
    lc = abs(q.lc)
    m = max(abs(c) for c in q.coeffs[:-1])
    return 1 + m / lc


def squarefree_part(q: UniPoly) -> UniPoly:
    if q.is_zero:
        raise ValueError("zero polynomial")
    g = q.gcd(q.derivative())
    return (q // g) if g.degree > 0 else q


def squarefree_decomposition(q: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: [(factor, multiplicity)], factors pairwise coprime and
    squarefree; product of factor^multiplicity = q up to a rational constant."""
    if q.is_zero:
        raise ValueError("zero polynomial")
    if q.degree == 0:
        return []
    p = q.monic()
    d = p.derivative()
    a = p.gcd(d)
    b = p // a
    c = d // a
    out = []
    i = 1
    while b.degree > 0:
        z = c - b.derivative()
        g = b.gcd(z)  # gcd(b, 0) = b, which closes the last block
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = z // g
        i += 1
    return out


def isolate_real_roots(q: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals (lo, hi] for the distinct real roots of q,
    computed with exact Sturm counts (applied to the squarefree part)."""
    if q.is_zero:
        raise ValueError("zero polynomial")
    sf = squarefree_part(q)
    if sf.degree == 0:
        return []
    R = cauchy_bound(sf)
    total = sturm_count(sf, -R, R)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-R, R, total)]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # ensure mid is not a root so counts split cleanly
        while sf.evaluate(mid) == 0:
            mid = mid + (hi - lo) / 257
        nl = sturm_count(sf, lo, mid)
        stack.append((lo, mid, nl))
        stack.append((mid, hi, n - nl))
    return sorted(out)


def rational_roots(q: UniPoly) -> list[Fraction]:
    """All rational roots, exactly (rational root theorem)."""
    if q.is_zero:
        raise ValueError("zero polynomial")
    p, _ = q.primitive_int()
    coeffs = [int(c) for c in p.coeffs]
    # strip zero roots
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots = [Fraction(0)] if shift else []
    if not coeffs or len(coeffs) == 1:
        return roots
    a0, an = abs(coeffs[0]), abs(coeffs[-1])

    def divisors(n: int) -> list[int]:
        ds = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                ds.add(d)
                ds.add(n // d)
            d += 1
        return sorted(ds)

    pp = UniPoly(coeffs)
    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if pp.evaluate(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


def refine_root_bisect(q: UniPoly, lo: Fraction, hi: Fraction, iters: int = 120) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of the squarefree q by exact bisection."""
    slo = _sign_at(q, lo)
    if slo == 0:
        return lo, lo
    for _ in range(iters):
        mid = (lo + hi) / 2
        sm = _sign_at(q, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots_exact_isolated(q: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Isolating/refined intervals of width <= ~2^-120 for all real roots."""
    out = []
    sf = squarefree_part(q)
    for lo, hi in isolate_real_roots(q):
        out.append(refine_root_bisect(sf, lo, hi))
    return out


def real_roots_mp(q: UniPoly, dps: int = 50):
    """Distinct real roots of q as mpmath mpf values at `dps` digits.

    Exact Sturm isolation plus a short exact bisection, then Newton polish
    in mpmath.  Returns roots sorted increasingly.
    """
    import mpmath as mp

    sf = squarefree_part(q)
    der = sf.derivative()
    roots = []
    with mp.workdps(dps + 10):
        for lo, hi in isolate_real_roots(q):
            lo, hi = refine_root_bisect(sf, lo, hi, iters=40)
            z = (mp.mpf(lo.numerator) / lo.denominator + mp.mpf(hi.numerator) / hi.denominator) / 2
            for _ in range(80):
                fz = sf.evaluate(z)
                dz = der.evaluate(z)
                if dz == 0:
                    break
                step = fz / dz
                z = z - step
                if abs(step) < mp.mpf(10) ** (-dps - 5) * (1 + abs(z)):
                    break
            roots.append(z)
    return sorted(roots)


# ---------------------------------------------------------------------------
# resultants (exact)
# ---------------------------------------------------------------------------


def _det_bareiss_int(m: list[list[int]]) -> int:
    """Fraction-free exact determinant for integer matrices."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_fraction(m: list[list[Fraction]]) -> Fraction:
    """Exact determinant; integer fast path, fraction elimination otherwise."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if all(c.denominator == 1 for row in m for c in row):
        return Fraction(_det_bareiss_int([[int(c) for c in row] for row in m]))
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c2 in range(col, n):
                    m[r][c2] -= f * m[col][c2]
    return det


def sylvester_resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Res(f, g) over Q via the Sylvester determinant."""
    if f.is_zero or g.is_zero:
        return Fraction(0)
    n, m = f.degree, g.degree
    if n == 0:
        return f.lc ** m
    if m == 0:
        return g.lc ** n
    size = n + m
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(m):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - m - 1 - i))
    return _det_fraction(rows)


def _sylvester_eval(fc: list[Fraction], gc: list[Fraction], n: int, m: int) -> Fraction:
    """Sylvester determinant for coefficient lists frozen at formal degrees n, m."""
    size = n + m
    rows = []
    for i in range(m):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - m - 1 - i))
    return _det_fraction(rows)


def bipoly_eval_x(p: BiPoly, val: Fraction) -> UniPoly:
    """p(val, y) as a univariate polynomial in y."""
    out: dict[int, Fraction] = {}
    for (a, b), c in p.terms():
        out[b] = out.get(b, Fraction(0)) + c * (_frac(val) ** a)
    if not out:
        return UniPoly()
    return UniPoly([out.get(k, Fraction(0)) for k in range(max(out) + 1)])


def resultant_eliminate_y(f: BiPoly, g: BiPoly) -> UniPoly:
    """Res_y(f, g) for bivariate f, g, returned as a polynomial in x.

    Computed by evaluation at sufficiently many rational points and exact
    Lagrange interpolation; the Sylvester matrix keeps the generic y-degrees
    so specialization commutes with the determinant.
    """
    if f.is_zero or g.is_zero:
        return UniPoly()
    ny = max(b for (_, b), _ in f.terms())
    my = max(b for (_, b), _ in g.terms())
    nx = max(a for (a, _), _ in f.terms())
    mx = max(a for (a, _), _ in g.terms())
    if ny == 0 and my == 0:
        raise ValueError("neither polynomial involves y")
    bound = ny * mx + my * nx
    pts = []
    vals = []
    k = 0
    while len(pts) < bound + 1:
        # sample points 0, 1, -1, 2, -2, ...
        v = Fraction((k + 1) // 2 if k % 2 else -(k // 2))
        k += 1
        if v in pts:
            continue
        fu = bipoly_eval_x(f, v)
        gu = bipoly_eval_x(g, v)
        fc = [fu[j] for j in range(ny, -1, -1)]
        gc = [gu[j] for j in range(my, -1, -1)]
        if ny == 0:
            det = fc[0] ** my
        elif my == 0:
            det = gc[0] ** ny
        else:
            det = _sylvester_eval(fc, gc, ny, my)
        pts.append(v)
        vals.append(det)
    return lagrange_interpolate(list(zip(pts, vals)))


def lagrange_interpolate(points: list[tuple[Fraction, Fraction]]) -> UniPoly:
    """Exact interpolating polynomial through (x_i, y_i)."""
    result = UniPoly.zero()
    for i, (xi, yi) in enumerate(points):
        if not yi:
            continue
        num = UniPoly.one()
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * UniPoly((-xj, 1))
            den *= xi - xj
        result = result + num.scale(yi / den)
    return result
