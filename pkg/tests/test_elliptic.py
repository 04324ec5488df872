import math

import numpy as np
import pytest
from scipy.integrate import quad

from cp2tori.elliptic import (EllipticModulus, complete_k, incomplete_f,
                              jacobi_sn, sn2_prime)


def oracle_f(theta, k):
    """Adaptive quadrature of the defining integral (independent of the
    AGM/Carlson/Landen implementation paths)."""
    val, _ = quad(lambda p: 1.0 / math.sqrt(1.0 - (k * math.sin(p)) ** 2),
                  0.0, theta, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def test_modulus_validation():
    EllipticModulus(0.0)
    EllipticModulus(0.999)
    with pytest.raises(ValueError):
        EllipticModulus(1.0)
    with pytest.raises(ValueError):
        EllipticModulus(-0.1)
    with pytest.raises(ValueError):
        EllipticModulus(float("nan"))


def test_incomplete_f_trivial_modulus():
    assert incomplete_f(math.pi / 2, 0.0) == math.pi / 2
    assert incomplete_f(0.7, 0.0) == 0.7


def test_complete_k_values():
    assert complete_k(0.0) == math.pi / 2
    # frozen from the defining-integral oracle
    assert complete_k(0.8) == pytest.approx(1.9953027776647292, abs=1e-12)
    assert abs(complete_k(0.8) - 1.9953) < 1e-4
    assert complete_k(0.5) == pytest.approx(1.685750354812596, abs=1e-12)
    k99 = complete_k(0.99)
    assert k99 > 3.0 and math.isfinite(k99)
    assert k99 == pytest.approx(oracle_f(math.pi / 2, 0.99), rel=1e-12)


def test_complete_k_exceeds_pi_half():
    for k in (0.05, 0.3, 0.6, 0.9):
        assert complete_k(k) > math.pi / 2


def test_incomplete_f_against_quadrature(rng):
    for _ in range(200):
        theta = rng.uniform(-4.0, 4.0)
        k = rng.uniform(0.0, 0.95)
        assert incomplete_f(theta, k) == pytest.approx(oracle_f(theta, k), abs=1e-11)


def test_incomplete_f_shift_identity(rng):
    for _ in range(50):
        theta = rng.uniform(-2.0, 2.0)
        k = rng.uniform(0.0, 0.95)
        lhs = incomplete_f(theta + math.pi, k)
        rhs = incomplete_f(theta, k) + 2.0 * complete_k(k)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_incomplete_f_monotone_grid():
    thetas = np.linspace(0.0, math.pi / 2, 201)
    for k in (0.0, 0.4, 0.8, 0.95):
        vals = [incomplete_f(t, k) for t in thetas]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sn_trivial():
    assert jacobi_sn(0.73, 0.0) == math.sin(0.73)
    for k in (0.0, 0.3, 0.9):
        assert jacobi_sn(0.0, k) == 0.0


def test_sn_at_quarter_period():
    K = complete_k(0.6)
    assert jacobi_sn(K, 0.6) == pytest.approx(1.0, abs=1e-12)


def test_sn_roundtrip(rng):
    for _ in range(400):
        theta = rng.uniform(-math.pi / 2 + 1e-9, math.pi / 2 - 1e-9)
        k = rng.uniform(0.0, 0.95)
        s = jacobi_sn(incomplete_f(theta, k), k)
        assert abs(s - math.sin(theta)) <= 1e-10


def test_sn_bounded_and_periodic(rng):
    for _ in range(200):
        u = rng.uniform(-30.0, 30.0)
        k = rng.uniform(0.0, 0.95)
        s = jacobi_sn(u, k)
        assert abs(s) <= 1.0 + 1e-15
        K2 = 2.0 * complete_k(k)
        assert abs(jacobi_sn(u + K2, k) ** 2 - s * s) <= 1e-10


def test_sn_degenerate_modulus_agreement(rng):
    for _ in range(100):
        u = rng.uniform(-10.0, 10.0)
        assert abs(jacobi_sn(u, 0.0) - math.sin(u)) <= 1e-12


def test_sn2_prime_matches_finite_differences(rng):
    h = 1e-6
    for _ in range(100):
        u = rng.uniform(-8.0, 8.0)
        k = rng.uniform(0.01, 0.95)
        fd = (jacobi_sn(u + h, k) ** 2 - jacobi_sn(u - h, k) ** 2) / (2.0 * h)
        assert sn2_prime(u, k) == pytest.approx(fd, abs=5e-9)
