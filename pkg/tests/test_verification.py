"""
Certificates and the acceptance suite
"""
import numpy as np
import pytest

from grassmoment.core.exceptions import DomainError
from grassmoment.models.geometry import FiberPoint, ProjectivePoint
from grassmoment.services.fibers4.mq5 import sample_mq5
from grassmoment.services.fibers4.orbit import SECOND_ORBIT
from grassmoment.services.verification import (
    N5_WITNESS,
    AcceptanceSuite,
    certify_fiber,
    certify_point,
    circle_points,
    injectivity_check,
    run_acceptance,
)


@pytest.mark.parametrize("kind", ["mq7", "mq5", "m2", "m3"])
def test_certify_fiber(kind):
    summary = certify_fiber(kind, samples=20, seed=7)
    assert summary.passed, summary.failures
    assert summary.samples == 20
    assert len(summary.certificates) == 20
    assert all(c.passed for c in summary.certificates)


def test_mq5_summary_records_rank_and_level():
    summary = certify_fiber("mq5", samples=20, seed=11)
    assert summary.rank_histogram == {"3": 20}
    assert summary.max_residuals["level"] <= 1e-9
    assert summary.max_residuals["round_trip"] <= 1e-10


def test_certify_fiber_is_seeded():
    first = certify_fiber("mq7", samples=5, seed=3)
    second = certify_fiber("mq7", samples=5, seed=3)
    assert [c.point for c in first.certificates] == [c.point for c in second.certificates]


def test_zero_samples():
    summary = certify_fiber("m2", samples=0)
    assert summary.passed
    assert summary.certificates == []


def test_drop_certificates():
    summary = certify_fiber("m3", samples=4, keep_certificates=False)
    assert summary.passed
    assert summary.certificates == []


def test_second_orbit_fibers():
    for kind in ("mq7", "mq5"):
        summary = certify_fiber(kind, samples=10, seed=5, orbit=SECOND_ORBIT.name)
        assert summary.passed, summary.failures
        assert summary.orbit == SECOND_ORBIT.name


def test_bad_fiber_arguments():
    with pytest.raises(DomainError):
        certify_fiber("mq9", samples=1)
    with pytest.raises(DomainError):
        certify_fiber("mq7", samples=-1)
    with pytest.raises(DomainError):
        certify_fiber("mq7", samples=1, orbit="third")


def test_certificate_reports_failure(rng):
    """扰动后的点不满足 Plücker 关系"""
    point = sample_mq5(rng, 0)
    moved = FiberPoint(point.z + np.array([0, 0, 0, 0, 0, 0.05]))
    certificate = certify_point(moved, "mq5", index=3)
    assert not certificate.passed
    assert certificate.index == 3
    assert certificate.failure


def test_circle_points_lie_on_circle():
    points = circle_points(6)
    assert len(points) == 6
    assert all(abs(p.z2) == 0 and abs(p.z0 - p.z1) <= 1e-15 for p in points)


def test_n5_witness():
    assert N5_WITNESS.total() == 2


@pytest.mark.parametrize(
    "name",
    ["chambers", "triangle", "curve", "center", "transition", "complete_intersection", "dimension"],
)
def test_cheap_criteria(name):
    report = run_acceptance(only=[name], seed=1, samples=20)
    assert report.passed, report.criteria[0].detail
    assert [c.name for c in report.criteria] == [name]


def test_fiber_criteria():
    report = run_acceptance(only=["mq7", "mq5", "second_orbit"], seed=2, samples=20)
    assert report.passed, [c.detail for c in report.criteria if not c.passed]
    mq5 = next(c for c in report.criteria if c.name == "mq5")
    assert mq5.detail["samples"] == 40
    assert mq5.detail["circle_collapse"] <= 1e-10
    assert mq5.detail["p_injectivity"]["passed"] and mq5.detail["G_injectivity"]["passed"]
    assert mq5.detail["p_injectivity"]["distinct_pairs"] > 0


def test_injectivity_detects_collisions():
    report = injectivity_check([[1, 0], [2, 0], [0, 1]], [[0.1], [0.2], [0.3]])
    assert report.distinct_pairs == 3
    assert report.collisions == 1
    assert not report.passed
    assert report.min_distance == pytest.approx(0.0, abs=1e-15)


def test_injectivity_ignores_equal_preimages():
    """同一原像的重复样本不算碰撞"""
    report = injectivity_check([[1, 0], [1j, 0]], [[0.5, 1.0], [0.5, 1.0]])
    assert report.distinct_pairs == 0
    assert report.min_distance is None
    assert report.passed


def test_injectivity_tolerance():
    images = [[1, 0], [1, 1e-6]]
    assert injectivity_check(images, [[0.0], [1.0]], tol=1e-9).passed
    assert not injectivity_check(images, [[0.0], [1.0]], tol=1e-3).passed
    with pytest.raises(DomainError):
        injectivity_check(images, [[0.0]])


def test_mq5_criterion_fails_on_collapsing_projection(monkeypatch):
    monkeypatch.setattr(
        "grassmoment.services.verification.proj_p", lambda m2: ProjectivePoint(np.array([1.0, 1.0]))
    )
    passed, detail = AcceptanceSuite(seed=5, samples=10).check_mq5()
    assert not passed
    assert detail["p_injectivity"]["passed"] is False
    assert detail["p_injectivity"]["collisions"] > 0
    assert detail["G_injectivity"]["passed"] is True


@pytest.mark.slow
def test_full_suite():
    report = AcceptanceSuite(seed=0xC0FFEE, samples=200).run()
    assert report.passed, [c.name for c in report.criteria if not c.passed]
    assert len(report.criteria) == len(AcceptanceSuite.CRITERIA)


def test_unknown_criterion():
    with pytest.raises(DomainError):
        run_acceptance(only=["nope"])
