"""
Moment map tests
"""
from fractions import Fraction

import numpy as np
import pytest

from grassmoment.core.exceptions import DimensionMismatchError, DomainError
from grassmoment.models.geometry import ChartCoords4, ProjectivePoint, RationalVector, TorusElement
from grassmoment.services.moment import (
    A_map,
    mu,
    mu_hat,
    mu_tilde,
    second_symmetric_power,
    solve_A_affine,
    weight_vectors,
)
from grassmoment.services.plucker import (
    from_chart,
    plucker_embed,
    random_grassmann_point,
    torus_act_projective,
)

Q = RationalVector.of("1/3", "5/9", "5/9", "5/9")
X0 = RationalVector.of(0, "1/6", "1/6", "5/18", "5/18", "1/9")
MQ0_BASE = np.array(
    [0, 1 / np.sqrt(6), 1 / np.sqrt(6), np.sqrt(5 / 18), np.sqrt(5 / 18), 1 / 3]
)


def test_weight_vectors():
    vectors = weight_vectors(4)
    assert [w.label for w in vectors] == ["12", "13", "14", "23", "24", "34"]
    assert vectors[0].entries == (1, 1, 0, 0)
    n5 = weight_vectors(5)
    assert len(n5) == 10
    assert n5[4].entries == (0, 1, 1, 0, 0)
    assert all(sum(w.entries) == 2 for w in n5)
    with pytest.raises(DomainError):
        weight_vectors(3)


def test_mu_hat_examples():
    assert np.allclose(mu_hat(np.eye(6)[0]), np.eye(6)[0])
    assert np.allclose(mu_hat(MQ0_BASE), X0.as_floats(), atol=1e-12)
    assert np.allclose(mu_hat(np.ones(6)), np.full(6, 1 / 6))


def test_mu_tilde_examples():
    assert np.allclose(mu_tilde(np.eye(6)[0], 4), [1, 1, 0, 0])
    assert np.allclose(mu_tilde(MQ0_BASE, 4), Q.as_floats(), atol=1e-12)


def test_mu_tilde_n5_support():
    """支撑 12,13,23,45 等权"""
    z = np.zeros(10)
    z[[0, 1, 4, 9]] = 1
    assert np.allclose(mu_tilde(z, 5), [1 / 2, 1 / 2, 1 / 2, 1 / 4, 1 / 4])


def test_mu_tilde_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        mu_tilde(np.ones(6), 5)


def test_factorization(rng):
    """μ̃ = A ∘ μ̂，μ = μ̃ ∘ p"""
    for _ in range(100):
        z = ProjectivePoint(rng.standard_normal(6) + 1j * rng.standard_normal(6))
        assert np.max(np.abs(mu_tilde(z, 4) - A_map(mu_hat(z), 4))) <= 1e-12
    L = from_chart(ChartCoords4(1, 1, 1, 1))
    assert np.allclose(mu(L, 4), A_map(mu_hat(plucker_embed(L)), 4), atol=1e-12)


def test_mu_lands_in_hypersimplex(rng):
    for _ in range(100):
        x = mu(random_grassmann_point(5, rng), 5)
        assert abs(x.sum() - 2) <= 1e-10
        assert np.all(x >= -1e-10) and np.all(x <= 1 + 1e-10)


def test_mu_of_coordinate_plane():
    assert np.allclose(mu(np.eye(4)[:2], 4), [1, 1, 0, 0])


def test_torus_invariance(rng):
    for _ in range(50):
        z = ProjectivePoint(rng.standard_normal(6) + 1j * rng.standard_normal(6))
        t = TorusElement.random(4, rng)
        assert np.allclose(mu_tilde(torus_act_projective(z, t, 4), 4), mu_tilde(z, 4), atol=1e-10)


def test_A_map_exact_examples():
    """X01 与 X0 都映到 Q"""
    x01 = RationalVector.of(0, 0, "1/3", "4/9", "1/9", "1/9")
    assert A_map(x01, 4) == Q
    assert A_map(X0, 4) == Q
    assert np.allclose(A_map(np.eye(6)[0], 4), [1, 1, 0, 0])
    with pytest.raises(DimensionMismatchError):
        A_map(np.ones(5), 4)


def test_solve_A_affine_reproduces_triangle_system():
    """x0 = −1/9 + x5, x1 = −1/9 + x4, x2 = 5/9 − x4 − x5, x3 = 2/3 − x4 − x5"""
    solution = solve_A_affine(Q, free=(4, 5))
    F = Fraction
    assert solution.constant[:4] == (F(-1, 9), F(-1, 9), F(5, 9), F(2, 3))
    assert solution.coefficients[:4] == ((0, 1), (1, 0), (-1, -1), (-1, -1))
    assert solution.coefficients[4:] == ((1, 0), (0, 1))
    point = solution.evaluate((F(1, 9) + F(1, 6), F(1, 9)))
    assert point == X0
    assert A_map(point, 4) == Q


def test_second_symmetric_power():
    t = TorusElement.from_angles([0.1, 0.2, 0.3, 0.4])
    expected = np.exp(1j * np.array([0.3, 0.4, 0.5, 0.5, 0.6, 0.7]))
    assert np.allclose(second_symmetric_power(t), expected)
