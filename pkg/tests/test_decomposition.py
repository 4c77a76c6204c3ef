import random
from fractions import Fraction

import pytest

from qhcenter.fields import (
    CoprimalityError,
    FieldError,
    QHField,
    associate_lift,
    associate_residue_convention,
    decompose,
    euler_field,
    hamiltonian_field,
    homogeneous_associate,
    infer_types,
    qh_coprime,
    reconstruct,
)
from qhcenter.polycore import BiPoly, TypeVector, UniPoly, qh_degree, qh_monomials

X = BiPoly.x()
Y = BiPoly.y()


# ---------------------------------------------------------------------------
# infer_types (spec examples)
# ---------------------------------------------------------------------------


def test_infer_types_cusp_family():
    # P = y, Q = x^2 is the (2,3)-type field of degree 1
    out = infer_types(Y, X ** 2)
    assert out == [(TypeVector(2, 3), 1)]


def test_infer_types_diagonal_field():
    out = infer_types(X, Y)
    # every coprime pair with t2 <= max degree + 1 = 2
    assert (TypeVector(1, 1), 0) in out
    assert (TypeVector(1, 2), 0) in out
    assert len(out) == 2
    # sorted by (t2, t1)
    assert out == sorted(out, key=lambda tr: (tr[0].t2, tr[0].t1))


def test_infer_types_s15_shape():
    out = infer_types(X ** 2 + Y, X ** 3)
    assert out == [(TypeVector(1, 2), 1)]


def test_infer_types_rejects_zero_field():
    with pytest.raises(FieldError):
        infer_types(BiPoly.zero(), BiPoly.zero())


# ---------------------------------------------------------------------------
# decompose (spec examples)
# ---------------------------------------------------------------------------


def test_decompose_thm11_proof_shape():
    # F = (x^2 + y, x^3 + b11*x*y), t = (1,2): the a20=1, a01=1, b30=1 instance
    for b11 in [Fraction(0), Fraction(3), Fraction(-1, 2)]:
        F = QHField.make(X ** 2 + Y, X ** 3 + X * Y * b11, TypeVector(1, 2), 1)
        dec = decompose(F)
        expected_h = (X ** 4 + X ** 2 * Y * (b11 - 2) - 2 * Y ** 2).scale(Fraction(1, 4))
        expected_mu = X.scale(Fraction(2 + b11, 4))
        assert dec.h == expected_h
        assert dec.mu == expected_mu


def test_decompose_hamiltonian_is_divergence_free():
    rng = random.Random(9)
    for t in [TypeVector(1, 1), TypeVector(1, 2), TypeVector(2, 3)]:
        for k in range(t.total, t.total + 6):
            monos = qh_monomials(t, k)
            if not monos:
                continue
            g = BiPoly({ab: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for ab in monos})
            if g.is_zero:
                continue
            F = hamiltonian_field(g, t)
            dec = decompose(F)
            assert dec.mu.is_zero
            assert dec.h == g


def test_decompose_s14_follows_wedge_formula():
    # F = (y, x^2) at t = (2,3): h = (2x^3 - 3y^2)/6, mu = 0
    F = QHField.make(Y, X ** 2, TypeVector(2, 3), 1)
    dec = decompose(F)
    assert dec.h == (2 * X ** 3 - 3 * Y ** 2).scale(Fraction(1, 6))
    assert dec.mu.is_zero


def test_decompose_degenerate_normalization():
    # no valid nonzero field can have r + |t| <= 0 ...
    with pytest.raises(FieldError):
        QHField(Y, BiPoly.zero(), TypeVector(1, 1), -2)
    # ... so exercise the decompose guard on a forged record
    F = object.__new__(QHField)
    object.__setattr__(F, "P", Y)
    object.__setattr__(F, "Q", BiPoly.zero())
    object.__setattr__(F, "t", TypeVector(1, 1))
    object.__setattr__(F, "r", -2)
    with pytest.raises(FieldError):
        decompose(F)


def test_reconstruction_property_random():
    rng = random.Random(31)
    types = [TypeVector(*tt) for tt in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5)]]
    count = 0
    for t in types:
        for _ in range(40):
            r = rng.randint(0, 4)
            pm = qh_monomials(t, r + t.t1)
            qm = qh_monomials(t, r + t.t2)
            if not pm and not qm:
                continue
            P = BiPoly({ab: Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for ab in pm})
            Q = BiPoly({ab: Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for ab in qm})
            if P.is_zero and Q.is_zero:
                continue
            F = QHField(P, Q, t, r)
            dec = decompose(F)
            assert reconstruct(dec) == (P, Q)
            if not dec.h.is_zero:
                assert qh_degree(dec.h, t) == r + t.total
            if not dec.mu.is_zero:
                assert qh_degree(dec.mu, t) == r
            count += 1
    assert count > 150


def test_uniqueness_perturbation_breaks_reconstruction():
    F = QHField.make(X ** 2 + Y, X ** 3, TypeVector(1, 2), 1)
    dec = decompose(F)
    d0x, d0y = euler_field(F.t)
    # perturb (h, mu) by a valid graded pair and check reconstruction fails
    dh = BiPoly.monomial(4, 0, Fraction(1, 7))
    p2 = -(dec.h + dh).diff_y() + dec.mu * d0x
    q2 = (dec.h + dh).diff_x() + dec.mu * d0y
    assert (p2, q2) != (F.P, F.Q)
    dmu = BiPoly.monomial(1, 0, Fraction(1, 7))
    p3 = -dec.h.diff_y() + (dec.mu + dmu) * d0x
    q3 = dec.h.diff_x() + (dec.mu + dmu) * d0y
    assert (p3, q3) != (F.P, F.Q)


# ---------------------------------------------------------------------------
# homogeneous associates (spec examples)
# ---------------------------------------------------------------------------


def test_associate_two_pair_quartic():
    p = (Y ** 2 + X ** 2) * (Y ** 2 + 4 * X ** 2)
    k1, k2, q = homogeneous_associate(p, TypeVector(1, 1))
    assert (k1, k2) == (0, 0)
    expect = (UniPoly.variable() ** 2 + UniPoly.one()) * (
        UniPoly.variable() ** 2 + UniPoly.constant(4)
    )
    assert q == expect


def test_associate_x4_plus_2y2():
    k1, k2, q = homogeneous_associate(X ** 4 + 2 * Y ** 2, TypeVector(1, 2))
    assert (k1, k2) == (0, 0)
    assert q == UniPoly([1, 0, 2])  # 2Y^2 + 1


def test_associate_xy_full_pull():
    k1, k2, q = homogeneous_associate(X * Y, TypeVector(1, 1))
    assert (k1, k2) == (1, 1)
    assert q == UniPoly.one()


def test_associate_requires_quasi_homogeneous():
    with pytest.raises(FieldError):
        homogeneous_associate(X + Y, TypeVector(1, 2))


def test_associate_roundtrip():
    rng = random.Random(13)
    for t in [TypeVector(1, 1), TypeVector(1, 2), TypeVector(2, 3)]:
        for k in range(1, 9):
            monos = qh_monomials(t, k)
            if not monos:
                continue
            p = BiPoly({ab: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for ab in monos})
            if p.is_zero:
                continue
            k1, k2, q = homogeneous_associate(p, t)
            lifted = associate_lift(q, t)
            rebuilt = BiPoly.monomial(k1, k2) * lifted
            # lift homogenizes to x^(t2*deg q); any X-power deficit reappears
            dx = (qh_degree(p, t) - k1 * t.t1 - k2 * t.t2 - t.t1 * t.t2 * q.degree)
            assert dx % (t.t1 * t.t2) == 0
            extra = dx // (t.t1 * t.t2)
            rebuilt = rebuilt * BiPoly.monomial(t.t2, 0) ** extra if extra else rebuilt
            assert rebuilt == p


def test_residue_convention_keeps_y_factor():
    # mu = y * (y^2 + x^2) at t=(1,1): full pull removes y, residue keeps it
    p = Y * (Y ** 2 + X ** 2)
    k1, k2, q = homogeneous_associate(p, TypeVector(1, 1))
    assert (k1, k2) == (0, 1)
    assert q == UniPoly([1, 0, 1])
    k1r, k2r, qr = associate_residue_convention(p, TypeVector(1, 1))
    assert (k1r, k2r) == (0, 0)
    assert qr == UniPoly([0, 1, 0, 1])  # Y^3 + Y


# ---------------------------------------------------------------------------
# coprimality
# ---------------------------------------------------------------------------


def test_coprimality_detection():
    t = TypeVector(1, 1)
    assert qh_coprime(X, Y, t)
    assert not qh_coprime(X * Y, X ** 2, t)
    assert not qh_coprime((Y ** 2 + X ** 2) * X, (Y ** 2 + X ** 2) * Y, t)
    with pytest.raises(CoprimalityError):
        QHField.make(X * Y, X ** 2, t, 1)
    # override allows construction
    QHField.make(X * Y, X ** 2, t, 1, allow_reducible=True)
