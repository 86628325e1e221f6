"""
Complete intersection in the chart M23
"""
import numpy as np
import pytest

from grassmoment.core.exceptions import DimensionMismatchError, DomainError
from grassmoment.models.geometry import ChartCoords4
from grassmoment.services.fibers4.chart import (
    FD_AGREEMENT,
    LEVEL,
    chart_coords_of,
    chart_split,
    complete_intersection_f,
    jacobian,
    jacobian_deviation,
    jacobian_fd,
    jacobian_rank,
    level_residual,
)
from grassmoment.services.fibers4.mq5 import mq5_fiber_circles, sample_mq5
from grassmoment.services.fibers4.orbit import SECOND_ORBIT


def test_origin_is_not_on_level():
    """u = v = 0 时 f = (0, 0, 0)"""
    assert np.allclose(complete_intersection_f(np.zeros(4), np.zeros(4)), 0)
    assert level_residual(np.zeros(4), np.zeros(4)) == pytest.approx(1)


def test_f_by_hand():
    """α = (1, 4, 9, 16)，a1 a4 − a2 a3 = 4 − 6 = −2"""
    f = complete_intersection_f([1, 2, 3, 4], [0, 0, 0, 0])
    assert np.allclose(f, [1 + 4 - 9 - 16, 5 + 9 - 64, 4 + 9 - 48 + 4])


def test_f_shape_check():
    with pytest.raises(DimensionMismatchError):
        complete_intersection_f([1, 2, 3], [0, 0, 0])


def test_circle_bases_on_level():
    for circle in mq5_fiber_circles():
        u, v = chart_split(circle.base_point())
        assert np.allclose(complete_intersection_f(u, v), LEVEL, atol=1e-10)
        assert jacobian_rank(u, v) == 3


def test_chart_coordinates_avoid_zero(rng):
    """a2, a4 ≠ 0 且 |a_i|² + |a_j|² ≠ 0"""
    for index in range(200):
        a = chart_coords_of(sample_mq5(rng, index)).as_array()
        assert abs(a[1]) > 1e-10 and abs(a[3]) > 1e-10
        squares = np.abs(a) ** 2
        assert min(squares[i] + squares[j] for i in range(4) for j in range(i + 1, 4)) > 1e-10


def test_samples_on_level_with_rank_three(rng):
    for index in range(300):
        u, v = chart_split(sample_mq5(rng, index))
        assert level_residual(u, v) <= 1e-9
        assert jacobian_rank(u, v, tol=1e-6) == 3


def test_second_orbit_pulls_back(rng):
    for index in range(50):
        u, v = chart_split(sample_mq5(rng, index, SECOND_ORBIT))
        assert level_residual(u, v) <= 1e-9
        assert jacobian_rank(u, v) == 3


def test_analytic_jacobian_matches_finite_differences(rng):
    for index in range(100):
        u, v = chart_split(sample_mq5(rng, index))
        assert np.max(np.abs(jacobian(u, v) - jacobian_fd(u, v))) <= FD_AGREEMENT
        assert jacobian_deviation(u, v) <= FD_AGREEMENT
    u, v = rng.standard_normal(4), rng.standard_normal(4)
    assert jacobian_deviation(u, v) <= FD_AGREEMENT


def test_jacobian_shape():
    u, v = ChartCoords4(1, 2j, 3, 4 - 1j).real_split()
    assert jacobian(u, v).shape == (3, 8)


def test_rank_requires_level_point():
    with pytest.raises(DomainError):
        jacobian_rank(np.ones(4), np.zeros(4))
