"""
Regularity, stabilizer and chamber tests
"""
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from grassmoment.core.config import settings
from grassmoment.core.exceptions import (
    CertificateError,
    DomainError,
    UnsupportedError,
    UnsupportedScaleError,
)
from grassmoment.models.geometry import RationalVector, StratumSupport
from grassmoment.services.moment import weight_vectors
from grassmoment.services.regularity import (
    brute_force_regular_mu_tilde,
    center_point_regular,
    chamber_of_point,
    chamber_orbit_points,
    enumerate_chambers,
    grid_numerators,
    is_largest_chamber_point,
    is_regular_mu,
    is_regular_mu_tilde,
    largest_chamber_witness,
    rational_grid,
    regular_mu_mask,
    regular_mu_tilde_mask,
    regularity_sweep,
    s4_chamber_orbits,
    stabilizer_dim,
)

Q = RationalVector.of("1/3", "5/9", "5/9", "5/9")
Q_PLUS = RationalVector.of("2/3", "4/9", "4/9", "4/9")
N5_POINT = RationalVector.of("7/10", "6/10", "5/10", "1/10", "1/10")


def test_stabilizer_examples():
    full = stabilizer_dim(StratumSupport(tuple(range(6)), 4))
    assert (full.dim_polytope, full.dim_stabilizer) == (3, 1)
    example = stabilizer_dim(StratumSupport.from_pairs(["12", "13", "23", "45"], 5))
    assert (example.dim_polytope, example.dim_stabilizer) == (3, 2)
    point = stabilizer_dim(StratumSupport.from_pairs(["12"], 4))
    assert (point.dim_polytope, point.dim_stabilizer) == (0, 4)


def test_stabilizer_always_contains_diagonal():
    for size in range(1, 7):
        for sigma in combinations(range(6), size):
            report = stabilizer_dim(StratumSupport(sigma, 4))
            assert report.dim_stabilizer >= 1
            assert report.dim_stabilizer + report.dim_polytope == 4


def test_empty_support_rejected():
    with pytest.raises(DomainError):
        StratumSupport((), 4)


def test_regular_mu_examples():
    assert is_regular_mu(Q, 4)
    assert not is_regular_mu(RationalVector.of(*["1/2"] * 4), 4)
    assert is_regular_mu(N5_POINT, 5)


def test_regular_mu_rejects_outside_points():
    with pytest.raises(DomainError):
        is_regular_mu(RationalVector.of(1, 1, 1, 0), 4)
    with pytest.raises(DomainError):
        is_regular_mu(RationalVector.of("3/2", "1/2", 0, 0), 4)


def test_regular_mu_tilde_examples():
    """n=5 的点对 μ 正则而对 μ̃ 不正则"""
    assert is_regular_mu_tilde(Q, 4)
    assert not is_regular_mu_tilde(N5_POINT, 5)
    for w in weight_vectors(5):
        assert not is_regular_mu_tilde(w.as_rational(), 5)


def test_regular_mu_tilde_scale_guard():
    with pytest.raises(UnsupportedScaleError):
        is_regular_mu_tilde(RationalVector((Fraction(2, 7),) * 7), 7)


def test_n4_regular_sets_coincide():
    """分母 18 网格上两种正则性一致"""
    sweep = regularity_sweep(4, 18)
    assert sweep.points == len(grid_numerators(4, 18))
    assert sweep.disagreements == 0
    assert sweep.implication_violations == 0
    assert sweep.regular_mu > 0


def test_n5_regular_sets_differ():
    sweep = regularity_sweep(5, 15)
    assert sweep.implication_violations == 0
    assert sweep.regular_mu > sweep.regular_mu_tilde
    assert sweep.witnesses
    witness = RationalVector.of("11/15", "9/15", "8/15", "1/15", "1/15")
    assert is_regular_mu(witness, 5) and not is_regular_mu_tilde(witness, 5)


def test_masks_match_single_point_tests():
    grid = grid_numerators(5, 10)
    mu_mask = regular_mu_mask(grid, 10, 5)
    tilde_mask = regular_mu_tilde_mask(grid, 10, 5)
    points = rational_grid(5, 10)
    for k in range(0, len(points), 17):
        assert mu_mask[k] == is_regular_mu(points[k], 5)
        assert tilde_mask[k] == is_regular_mu_tilde(points[k], 5)


def test_brute_force_oracle_agrees(rng):
    grid = rational_grid(4, 18)
    for k in rng.choice(len(grid), size=60, replace=False):
        x = grid[int(k)]
        assert is_regular_mu_tilde(x, 4) == brute_force_regular_mu_tilde(x, 4)
    assert brute_force_regular_mu_tilde(N5_POINT, 5) is False


def test_rational_grid_in_hypersimplex():
    grid = rational_grid(4, 6)
    assert all(x.total() == 2 and all(0 <= c <= 1 for c in x) for x in grid)
    assert len(grid) == len(set(grid))


def test_eight_chambers():
    chambers = enumerate_chambers(4)
    assert len(chambers) == 8
    by_id = {c.id.signs: c for c in chambers}
    assert by_id[(-1, -1, -1)].representative == Q
    assert by_id[(1, 1, 1)].representative == Q_PLUS
    assert all(c.dimension == 3 and c.id.is_strict for c in chambers)


def test_chamber_representatives_are_consistent():
    for chamber in enumerate_chambers(4):
        report = chamber_of_point(chamber.representative, 4)
        assert report.sign_vector == chamber.id
        assert report.regular_mu and report.regular_mu_tilde
        assert report.orbit == chamber.orbit


def test_chambers_only_for_n4():
    with pytest.raises(UnsupportedError):
        enumerate_chambers(5)


def test_coarse_grid_misses_chambers(monkeypatch):
    """分母 2 的网格上没有正则点"""
    monkeypatch.setattr(settings, "chamber_grid_denominator", 2)
    with pytest.raises(CertificateError):
        enumerate_chambers(4)


def test_two_orbits():
    orbits = s4_chamber_orbits()
    assert [o.label for o in orbits] == ["C-", "C+"]
    assert [len(o.members) for o in orbits] == [4, 4]
    assert orbits[0].representative.signs == (-1, -1, -1)
    assert orbits[1].representative.signs == (1, 1, 1)


def test_minus_orbit_points():
    points = chamber_orbit_points("C-")
    expected = [
        RationalVector.of("1/3", "5/9", "5/9", "5/9"),
        RationalVector.of("5/9", "1/3", "5/9", "5/9"),
        RationalVector.of("5/9", "5/9", "1/3", "5/9"),
        RationalVector.of("5/9", "5/9", "5/9", "1/3"),
    ]
    assert sorted(points, key=lambda v: v.entries) == sorted(expected, key=lambda v: v.entries)
    with pytest.raises(DomainError):
        chamber_orbit_points("C0")


def test_classify_examples():
    report = chamber_of_point(Q, 4)
    assert report.to_json()["id"] == "[-1,-1,-1]"
    assert report.orbit == "C-"
    n5 = chamber_of_point(N5_POINT, 5)
    assert n5.regular_mu and n5.regular_mu_tilde is False
    assert n5.orbit is None


@pytest.mark.parametrize("n", range(4, 11))
def test_center_point_parity(n):
    assert center_point_regular(n) == bool(n % 2)


def test_largest_chamber_witness():
    assert largest_chamber_witness(5) == RationalVector((Fraction(2, 5),) * 5)
    assert largest_chamber_witness(7) == RationalVector((Fraction(2, 7),) * 7)
    x = largest_chamber_witness(6)
    assert x.total() == 2
    assert all(x[i] + x[j] < 1 for i, j in combinations(range(6), 2))
    assert all(sum(x[i] for i in t) != 1 for t in combinations(range(6), 3))
    assert is_largest_chamber_point(x, 6)


def test_largest_chamber_witness_is_seeded():
    assert largest_chamber_witness(8, seed=7) == largest_chamber_witness(8, seed=7)


def test_largest_chamber_witness_scale_guard():
    with pytest.raises(UnsupportedScaleError):
        largest_chamber_witness(9)
    assert not is_largest_chamber_point(RationalVector((Fraction(1, 3),) * 6), 6)
    assert np.isclose(float(sum(largest_chamber_witness(8))), 2.0)
