import math
from fractions import Fraction

import numpy as np
import pytest

from orbitsieve import sl2algebra
from orbitsieve.errors import NotInNormalizerError
from orbitsieve.sl2algebra import RationalMat, Surd

U1 = np.array([[1.0, 1.0], [0.0, 1.0]])


def _random_sl2(rng):
    x = rng.uniform(-2.0, 2.0)
    t = math.exp(rng.uniform(-1.0, 1.0))
    th = rng.uniform(0.0, 2.0 * math.pi)
    return (
        np.array([[1.0, x], [0.0, 1.0]])
        @ np.array([[t, 0.0], [0.0, 1.0 / t]])
        @ np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    )


# --- Iwasawa -----------------------------------------------------------------


def test_iwasawa_identity_and_rotation():
    tri = sl2algebra.iwasawa(np.eye(2))
    assert np.allclose(tri.n, np.eye(2)) and np.allclose(tri.s, np.eye(2))
    th = 0.7
    rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    tri = sl2algebra.iwasawa(rot)
    assert np.allclose(tri.n, np.eye(2), atol=1e-12)
    assert np.allclose(tri.s, np.eye(2), atol=1e-12)
    assert np.allclose(tri.k, rot, atol=1e-12)


def test_iwasawa_triangular_example():
    tri = sl2algebra.iwasawa(np.array([[2.0, 1.0], [0.0, 0.5]]))
    assert np.allclose(tri.n, [[1.0, 2.0], [0.0, 1.0]], atol=1e-12)
    assert np.allclose(tri.s, [[2.0, 0.0], [0.0, 0.5]], atol=1e-12)
    assert np.allclose(tri.k, np.eye(2), atol=1e-12)


def test_iwasawa_round_trip_200_seeded():
    rng = np.random.default_rng(42)
    for _ in range(200):
        g = _random_sl2(rng)
        tri = sl2algebra.iwasawa(g)
        assert np.max(np.abs(tri.product() - g)) <= 1e-12
        assert tri.s[0, 0] > 0 and tri.s[1, 1] > 0
        assert abs(np.linalg.det(tri.k) - 1) < 1e-12


def test_iwasawa_uniqueness():
    rng = np.random.default_rng(43)
    for _ in range(50):
        g = _random_sl2(rng)
        t1 = sl2algebra.iwasawa(g)
        t2 = sl2algebra.iwasawa(g.copy())
        for a, b in ((t1.n, t2.n), (t1.s, t2.s), (t1.k, t2.k)):
            assert np.max(np.abs(a - b)) <= 1e-10


def test_iwasawa_rejects_non_unimodular():
    with pytest.raises(ValueError):
        sl2algebra.iwasawa(np.array([[3.0, 0.0], [0.0, 1.0]]))


# --- chi ---------------------------------------------------------------------


def test_chi_of_diagonal_is_t_squared():
    for t in (2.0, 0.5, 3.7):
        gamma = np.array([[t, 0.0], [0.0, 1.0 / t]])
        assert abs(sl2algebra.chi_of(gamma, U1) - t * t) < 1e-12


def test_chi_of_u_itself_is_one():
    assert abs(sl2algebra.chi_of(U1, U1) - 1.0) < 1e-12


def test_chi_realizes_prime_ratio():
    gamma = np.diag([2.0, 1.0]) / math.sqrt(2.0)
    assert abs(sl2algebra.chi_of(gamma, U1) - 2.0) < 1e-12


def test_chi_of_commensurator_diag_prime_pairs():
    for p, q in ((2, 3), (3, 5), (5, 7), (7, 11)):
        gamma = sl2algebra.commensurator_element([[p, 0], [0, q]])
        chi = sl2algebra.chi_of(gamma, U1)
        assert abs(chi - p / q) < 1e-12


def test_chi_multiplicative_on_normalizer():
    rng = np.random.default_rng(44)
    for _ in range(200):
        t1, t2 = math.exp(rng.uniform(-1, 1)), math.exp(rng.uniform(-1, 1))
        x1, x2 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        g1 = np.array([[t1, x1], [0.0, 1.0 / t1]])
        g2 = np.array([[t2, x2], [0.0, 1.0 / t2]])
        lhs = sl2algebra.chi_of(g1 @ g2, U1)
        rhs = sl2algebra.chi_of(g1, U1) * sl2algebra.chi_of(g2, U1)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


def test_chi_rejects_non_normalizer():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(NotInNormalizerError):
        sl2algebra.chi_of(rot, U1)


# --- commensurator ------------------------------------------------------------


def test_commensurator_examples():
    assert np.allclose(sl2algebra.commensurator_element([[1, 0], [0, 1]]), np.eye(2))
    got = sl2algebra.commensurator_element([[2, 0], [0, 1]])
    assert np.allclose(got, np.diag([math.sqrt(2), 1 / math.sqrt(2)]), atol=1e-12)
    got = sl2algebra.commensurator_element([[1, 1], [0, 2]])
    assert np.allclose(got, np.array([[1, 1], [0, 2]]) / math.sqrt(2), atol=1e-12)
    det = np.linalg.det(got)
    assert abs(det - 1.0) <= 1e-12


def test_commensurator_rejects_nonpositive_det():
    with pytest.raises(ValueError):
        sl2algebra.commensurator_element([[0, 1], [1, 0]])


# --- parabolic family ----------------------------------------------------------


def test_parabolic_worked_example():
    pe = sl2algebra.parabolic_family_element(-2, 0, 1, 6, 2)
    assert pe.raw == RationalMat([[3, -4], [-2, 3]])
    assert pe.raw.det() == 1
    assert np.allclose(pe.matrix, [[3, -4], [-2, 3]], atol=1e-12)
    # fixes z = sqrt(2): roots are +-sqrt(8)/2
    vals = sorted(float(z) for z in pe.fixed_points)
    assert abs(vals[1] - math.sqrt(2)) < 1e-12
    z = math.sqrt(2)
    assert abs((3 * z - 4) / (-2 * z + 3) - z) < 1e-12


def test_parabolic_scalar_case():
    pe = sl2algebra.parabolic_family_element(-2, 0, 1, 2, 0)
    assert np.allclose(pe.matrix, np.eye(2), atol=1e-12)
    assert pe.fixed_points == ()


def test_parabolic_det_normalized():
    for t, u in ((3, 1), (6, 2), (17, 6), (Fraction(7, 2), 1)):
        pe = sl2algebra.parabolic_family_element(-2, 0, 1, t, u)
        assert abs(np.linalg.det(pe.matrix) - 1.0) <= 1e-12


def test_parabolic_chi_equals_squared_top_eigenvalue():
    # conjugate the t=6, u=2 element into the normalizer by its eigenframe
    pe = sl2algebra.parabolic_family_element(-2, 0, 1, 6, 2)
    eigvals, eigvecs = np.linalg.eig(pe.matrix)
    order = np.argsort(eigvals)[::-1]
    frame = eigvecs[:, order]
    frame = frame / math.sqrt(abs(np.linalg.det(frame)))
    conj = np.linalg.inv(frame) @ pe.matrix @ frame
    chi = sl2algebra.chi_of(np.diag(np.diag(conj)), U1)
    expect = (3 + 2 * math.sqrt(2)) ** 2  # squared larger eigenvalue, ~33.9706
    assert abs(chi - expect) < 1e-9
    assert abs(expect - 33.970562748477143) < 1e-12


def test_parabolic_rejects_bad_inputs():
    with pytest.raises(ValueError):
        sl2algebra.parabolic_family_element(-2, 0, 1, 1, 1)  # t^2 - 8 < 0
    with pytest.raises(ValueError):
        sl2algebra.parabolic_family_element(1, 3, 2, 3, 1)  # d = 1 is a square
    with pytest.raises(ValueError):
        sl2algebra.parabolic_family_element(2, 0, 2, 3, 1)  # gcd 2
    with pytest.raises(ValueError):
        sl2algebra.parabolic_family_element(1, 0, 1, 3, 1)  # d < 0


def test_surd_arithmetic():
    r2 = Surd.make(0, 1, 2)
    assert r2 * r2 == 2
    assert (1 + r2) * (1 - r2 * 1) == Surd.make(-1, 0, 2)
    assert float((1 + r2) / (1 + r2)) == 1.0
    q = Surd.make(3, 1, 2) / Surd.make(1, 1, 2)
    assert q * Surd.make(1, 1, 2) == Surd.make(3, 1, 2)


# --- quaternion representation -------------------------------------------------


def _rand_quat(rng):
    return tuple(
        Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))) for _ in range(4)
    )


def test_quat_rep_identity_and_square():
    a, b = Fraction(2), Fraction(3)
    assert sl2algebra.quat_rep(1, 0, 0, 0, a, b) == RationalMat.identity(4)
    pw = sl2algebra.quat_rep(0, 1, 0, 0, a, b)
    assert pw @ pw == RationalMat.identity(4).scale(a)  # psi(w)^2 = a I
    pW = sl2algebra.quat_rep(0, 0, 1, 0, a, b)
    assert pW @ pW == RationalMat.identity(4).scale(b)


def test_quat_rep_requires_positive_a():
    with pytest.raises(ValueError):
        sl2algebra.quat_rep(1, 0, 0, 0, -2, 3)


def test_quat_rep_is_ring_homomorphism_exactly():
    rng = np.random.default_rng(42)
    a, b = Fraction(2), Fraction(3)
    for _ in range(200):
        x = _rand_quat(rng)
        y = _rand_quat(rng)
        px = sl2algebra.quat_rep(*x, a, b)
        py = sl2algebra.quat_rep(*y, a, b)
        prod = sl2algebra.quat_mul(x, y, a, b)
        assert sl2algebra.quat_rep(*prod, a, b) == px @ py
        s = tuple(xi + yi for xi, yi in zip(x, y))
        assert sl2algebra.quat_rep(*s, a, b) == px + py


def test_quat_det_is_norm_squared_exactly():
    rng = np.random.default_rng(43)
    a, b = Fraction(2), Fraction(5)
    for _ in range(100):
        x = _rand_quat(rng)
        px = sl2algebra.quat_rep(*x, a, b)
        assert px.det() == sl2algebra.quat_norm(x, a, b) ** 2


def test_quat_norm_multiplicative():
    rng = np.random.default_rng(44)
    a, b = Fraction(3), Fraction(7)
    for _ in range(100):
        x, y = _rand_quat(rng), _rand_quat(rng)
        prod = sl2algebra.quat_mul(x, y, a, b)
        assert sl2algebra.quat_norm(prod, a, b) == (
            sl2algebra.quat_norm(x, a, b) * sl2algebra.quat_norm(y, a, b)
        )


def test_rational_mat_reduces_fractions():
    m = RationalMat([[Fraction(2, 4), Fraction(-3, -6)], [0, 1]])
    assert m[0, 0] == Fraction(1, 2) and m[0, 1] == Fraction(1, 2)
    assert m[0, 0].denominator > 0
