"""
M_Q^5 sampler and parametrization tests
"""
import numpy as np
import pytest

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError, NoSolutionError, SamplingError
from grassmoment.models.geometry import M2Point, TorusElement
from grassmoment.services.fibers4.mq5 import (
    EDGE_MODULUS,
    SIXTH_ROOT,
    F_param,
    F_preimage,
    G_param,
    G_preimage,
    m2_sample,
    m3_sample,
    mq5_fiber_circles,
    rho_f,
    rotate_m2,
    sample_m2,
    sample_mq5,
    surface_residual,
)
from grassmoment.services.fibers4.orbit import SECOND_ORBIT, chamber_fiber_orbits
from grassmoment.services.moment import mu_hat, mu_tilde
from grassmoment.services.plucker import plucker_relation_residual

Q = np.array([1 / 3, 5 / 9, 5 / 9, 5 / 9])


def assert_in_mq5(z, q=Q):
    assert plucker_relation_residual(z) <= 1e-10
    assert np.max(np.abs(mu_tilde(z, 4) - q)) <= 1e-10


def test_m2_sample_circle_point():
    """r0 = r1 = 1/√6 落在圆周 z0 = z1 上"""
    point = m2_sample(SIXTH_ROOT, SIXTH_ROOT, 1)
    assert point.z0 == pytest.approx(point.z1, abs=1e-12)
    assert point.z2 == pytest.approx(0, abs=1e-12)
    assert surface_residual(point.z0, point.z1, point.z2) <= 1e-10


def test_m2_sample_edge_point():
    """r0 = 0 时只有 |z1|² = 1/6 可闭合"""
    point = m2_sample(0.0, SIXTH_ROOT, 1)
    assert abs(point.z1) ** 2 == pytest.approx(1 / 6)
    assert point.z2 == pytest.approx(SIXTH_ROOT)
    assert surface_residual(point.z0, point.z1, point.z2) <= 1e-10
    with pytest.raises(NoSolutionError):
        m2_sample(0.0, 0.2, 1)


def test_m2_sample_branches(rng):
    for _ in range(100):
        point = sample_m2(rng)
        r0, r1 = abs(point.z0), abs(point.z1)
        plus = m2_sample(r0, r1, 1)
        minus = m2_sample(r0, r1, -1)
        for p in (plus, minus):
            assert surface_residual(p.z0, p.z1, p.z2) <= 1e-10
            assert abs(p.z1) == pytest.approx(r1, abs=1e-10)
        assert np.angle(plus.z0) == pytest.approx(-np.angle(minus.z0), abs=1e-10)


def test_m2_sample_rejects_bad_input():
    with pytest.raises(DomainError):
        m2_sample(0.5, 0.5, 1)
    with pytest.raises(DomainError):
        m2_sample(0.1, 0.1, 0)
    with pytest.raises(NoSolutionError):
        m2_sample(0.5, 0.01, 1)


def test_sampler_exhaustion(rng, monkeypatch):
    monkeypatch.setattr(settings, "sampler_max_rejections", 1)
    monkeypatch.setattr(
        "grassmoment.services.fibers4.mq5._draw_moduli", lambda rng: (0.5, 0.01)
    )
    with pytest.raises(SamplingError):
        sample_m2(rng)


def test_m3_samples_on_surface(rng):
    for _ in range(200):
        m3 = m3_sample(rng)
        assert surface_residual(m3.z0, m3.z1, m3.z2) <= 1e-10
        assert abs(abs(m3.z0) ** 2 + abs(m3.z1) ** 2 + abs(m3.z2) ** 2 - 1 / 3) <= 1e-12


def test_rotation_by_one_is_identity(rng):
    m2 = sample_m2(rng)
    m3 = rotate_m2(m2, 1.0)
    assert (m3.z0, m3.z1, m3.z2) == (m2.z0, m2.z1, m2.z2)


def test_F_identity_twist(rng):
    m2 = sample_m2(rng)
    point = F_param(m2, TorusElement.identity(3))
    assert np.allclose(point.z, m2.coords())


def test_F_lands_in_fiber(rng):
    for _ in range(300):
        point = F_param(sample_m2(rng), TorusElement.random(3, rng))
        assert_in_mq5(point.z)


def test_F_round_trip(rng):
    for _ in range(300):
        m2 = sample_m2(rng)
        t = TorusElement.random(3, rng)
        back, t_back = F_preimage(F_param(m2, t))
        assert abs(back.z0 - m2.z0) <= 1e-10 and abs(back.z1 - m2.z1) <= 1e-10
        assert abs(back.z2 - m2.z2) <= 1e-10
        assert np.max(np.abs(t_back.phases - t.phases)) <= 1e-10


def test_F_equivariance(rng):
    """F(m2, s·t) = ρ(s)·F(m2, t)"""
    for _ in range(100):
        m2 = sample_m2(rng)
        s = TorusElement.random(3, rng)
        t = TorusElement.random(3, rng)
        moved = F_param(m2, TorusElement(s.phases * t.phases))
        assert np.allclose(moved.z, rho_f(s) * F_param(m2, t).z, atol=1e-10)


@pytest.mark.parametrize("orbit", chamber_fiber_orbits(), ids=lambda o: o.name)
def test_F_equivariance_in_every_chamber(rng, orbit):
    for _ in range(20):
        m2 = sample_m2(rng)
        s = TorusElement.random(3, rng)
        t = TorusElement.random(3, rng)
        moved = F_param(m2, TorusElement(s.phases * t.phases), orbit)
        image = orbit.push(rho_f(s) * orbit.pull(F_param(m2, t, orbit).z))
        assert np.allclose(moved.z, image, atol=1e-10)


def test_F_preimage_on_circle(rng):
    """z2 = 0 时取 t3 = 1"""
    circle = m2_sample(SIXTH_ROOT, SIXTH_ROOT, 1)
    assert circle.z2 == 0.0
    point = F_param(circle, TorusElement.random(3, rng))
    back, t = F_preimage(point)
    assert t[2] == 1
    assert np.allclose(F_param(back, t).z, point.z, atol=1e-10)


def test_F_rejects_off_surface_points():
    with pytest.raises(DomainError):
        F_param(M2Point(0.3, 0.3, 0.1), TorusElement.identity(3))


def test_G_lands_in_fiber_and_round_trips(rng):
    for _ in range(300):
        m3 = m3_sample(rng)
        twist = TorusElement.random(2, rng)
        point = G_param(m3, twist[0], twist[1])
        assert_in_mq5(point.z)
        back, t = G_preimage(point)
        assert np.allclose([back.z0, back.z1, back.z2], [m3.z0, m3.z1, m3.z2], atol=1e-10)
        assert np.allclose(t.phases, twist.phases, atol=1e-10)


def test_G_identity_twist(rng):
    m3 = m3_sample(rng)
    assert np.allclose(G_param(m3, 1, 1).z, m3.coords())


def test_G_is_injective_on_samples(rng):
    points = []
    for _ in range(200):
        twist = TorusElement.random(2, rng)
        points.append(G_param(m3_sample(rng), twist[0], twist[1]).z)
    points = np.array(points)
    for i in range(len(points) - 1):
        assert np.min(np.linalg.norm(points[i + 1 :] - points[i], axis=1)) > 0


def test_fiber_circle_bases():
    expected = [
        (0, 1 / 6, 1 / 6, 5 / 18, 5 / 18, 1 / 9),
        (1 / 6, 0, 1 / 6, 5 / 18, 1 / 9, 5 / 18),
        (1 / 6, 1 / 6, 0, 1 / 9, 5 / 18, 5 / 18),
    ]
    for circle, x in zip(mq5_fiber_circles(), expected):
        base = circle.base_point()
        assert np.allclose(mu_hat(base.z), x, atol=1e-12)
        assert plucker_relation_residual(base.z) <= 1e-12
        assert np.allclose(circle.target.as_floats(), x)


def test_fiber_circle_base_coordinates():
    mq0, mq1, _ = mq5_fiber_circles()
    assert np.allclose(mq0.base, (0, SIXTH_ROOT, SIXTH_ROOT, EDGE_MODULUS, EDGE_MODULUS, 1 / 3))
    assert np.allclose(np.abs(mq1.base), (SIXTH_ROOT, 0, SIXTH_ROOT, EDGE_MODULUS, 1 / 3, EDGE_MODULUS))


def test_fiber_circle_orbits(rng):
    for circle in mq5_fiber_circles():
        for _ in range(50):
            point = circle.point(TorusElement.random(3, rng))
            assert_in_mq5(point.z)
            assert np.allclose(mu_hat(point.z), circle.target.as_floats(), atol=1e-12)


def test_sample_mq5_alternates(rng):
    for index in range(20):
        assert_in_mq5(sample_mq5(rng, index).z)


def test_second_orbit_parametrizations(rng):
    q_plus = np.array([2 / 3, 4 / 9, 4 / 9, 4 / 9])
    for index in range(100):
        point = sample_mq5(rng, index, SECOND_ORBIT)
        assert point.orbit == "second"
        assert_in_mq5(point.z, q_plus)
    m2 = sample_m2(rng)
    t = TorusElement.random(3, rng)
    back, t_back = F_preimage(F_param(m2, t, SECOND_ORBIT))
    assert np.allclose(t_back.phases, t.phases, atol=1e-10)
