"""
Strata, stabilizers, regular values of μ and μ̃, chambers of Δ(n,2)

Regularity tests are exact. Single points and grid sweeps share one batched
integer kernel: a point with common denominator D is lifted to b = (D·x, D), and
for every affinely independent vertex set S with |S| ≤ n−1 the barycentric
weights are read off a precomputed integer inverse.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import (
    CertificateError,
    DomainError,
    UnsupportedError,
    UnsupportedScaleError,
    WitnessNotFoundError,
)
from grassmoment.models.geometry import (
    RationalVector,
    SignVector,
    StratumSupport,
)
from grassmoment.services.exactgeom import (
    affine_rank,
    arrangement_for_n,
    convex_membership,
    exact_inverse,
    exact_rank,
    sign_vector,
)
from grassmoment.services.moment import weight_matrix, weight_vectors

logger = logging.getLogger(__name__)

MAX_TILDE_N = 6
MAX_WITNESS_N = 8
MAX_ORACLE_N = 5


@dataclass(frozen=True)
class StabilizerReport:
    dim_stabilizer: int
    dim_polytope: int


@dataclass(frozen=True)
class ChamberReport:
    """胞腔报告"""

    id: SignVector
    dimension: int
    representative: RationalVector
    orbit: Optional[str] = None

    def to_json(self) -> Dict[str, object]:
        return {
            "id": self.id.label,
            "dim": self.dimension,
            "representative": self.representative.to_json(),
            "orbit": self.orbit,
        }


@dataclass(frozen=True)
class ChamberOrbit:
    label: str
    representative: SignVector
    members: Tuple[SignVector, ...]
    points: Tuple[RationalVector, ...]

    def to_json(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "representative": self.representative.label,
            "size": len(self.members),
            "members": [m.label for m in self.members],
            "points": [p.to_json() for p in self.points],
        }


@dataclass(frozen=True)
class PointClassification:
    n: int
    point: RationalVector
    sign_vector: SignVector
    regular_mu: bool
    regular_mu_tilde: Optional[bool]
    orbit: Optional[str]

    def to_json(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "point": self.point.to_json(),
            "id": self.sign_vector.label,
            "regular_mu": self.regular_mu,
            "regular_mu_tilde": self.regular_mu_tilde,
            "orbit": self.orbit,
        }


@dataclass(frozen=True)
class RegularitySweep:
    n: int
    denominator: int
    points: int
    regular_mu: int
    regular_mu_tilde: int
    implication_violations: int
    disagreements: int
    witnesses: Tuple[RationalVector, ...]

    def to_json(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "denominator": self.denominator,
            "points": self.points,
            "regular_mu": self.regular_mu,
            "regular_mu_tilde": self.regular_mu_tilde,
            "implication_violations": self.implication_violations,
            "disagreements": self.disagreements,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


# 点的校验与整数化

def validate_hypersimplex_point(x: RationalVector, n: int) -> RationalVector:
    """Exact membership in Δ(n,2)."""
    if len(x) != n:
        raise DomainError(f"point has {len(x)} coordinates, expected {n}")
    if x.total() != 2 or any(not 0 <= c <= 1 for c in x):
        raise DomainError(f"{x.to_json()} is not in the hypersimplex Δ({n},2)")
    return x


def to_numerators(points: Sequence[RationalVector]) -> Tuple[np.ndarray, int]:
    """Common denominator D and integer numerators D·x."""
    denominator = 1
    for p in points:
        for c in p:
            denominator = math.lcm(denominator, c.denominator)
    dtype = np.int64 if denominator < 2**40 else object
    numerators = np.array(
        [[int(c * denominator) for c in p] for p in points], dtype=dtype
    )
    return numerators, denominator


def grid_numerators(n: int, denominator: int) -> np.ndarray:
    """All k ∈ {0..D}^n with Σk = 2D, lexicographic."""

    def compositions(parts: int, total: int):
        if parts == 1:
            if 0 <= total <= denominator:
                yield (total,)
            return
        low = max(0, total - denominator * (parts - 1))
        for first in range(low, min(denominator, total) + 1):
            for rest in compositions(parts - 1, total - first):
                yield (first,) + rest

    return np.array(list(compositions(n, 2 * denominator)), dtype=np.int64)


def rational_grid(n: int, denominator: int) -> List[RationalVector]:
    return [
        RationalVector(tuple(Fraction(int(k), denominator) for k in row))
        for row in grid_numerators(n, denominator)
    ]


# μ 的正则性

@lru_cache(maxsize=None)
def _incidence(n: int) -> np.ndarray:
    planes = arrangement_for_n(n)
    matrix = np.zeros((len(planes), n), dtype=np.int64)
    for row, plane in enumerate(planes):
        matrix[row, list(plane.support)] = 1
    return matrix


def regular_mu_mask(numerators: np.ndarray, denominator: int, n: int) -> np.ndarray:
    """Open chambers of maximal dimension: 0 < x_i < 1 and off every hyperplane."""
    P = np.asarray(numerators)
    interior = np.all((P > 0) & (P < denominator), axis=1)
    sums = P @ _incidence(n).T.astype(P.dtype)
    return interior & np.all(sums != denominator, axis=1)


def is_regular_mu(x: RationalVector, n: int) -> bool:
    validate_hypersimplex_point(x, n)
    numerators, denominator = to_numerators([x])
    return bool(regular_mu_mask(numerators, denominator, n)[0])


# μ̃ 的正则性

@dataclass(frozen=True, eq=False)
class _Face:
    """仿射无关顶点组及其整数逆"""

    indices: Tuple[int, ...]
    rows: Tuple[int, ...]
    inverse: np.ndarray
    scale: int
    lifted: np.ndarray


@lru_cache(maxsize=None)
def _low_dimensional_faces(n: int) -> Tuple[_Face, ...]:
    vertices = weight_matrix(n)
    lifted_all = np.vstack([vertices, np.ones((1, vertices.shape[1]), dtype=np.int64)])
    faces = []
    for size in range(1, n):
        for subset in combinations(range(vertices.shape[1]), size):
            lifted = lifted_all[:, list(subset)]
            rows: List[int] = []
            for r in range(n + 1):
                if exact_rank(lifted[rows + [r], :].tolist()) > len(rows):
                    rows.append(r)
                if len(rows) == size:
                    break
            if len(rows) < size:
                continue
            inverse = exact_inverse(lifted[rows, :].tolist())
            scale = 1
            for row in inverse:
                for value in row:
                    scale = math.lcm(scale, value.denominator)
            integer_inverse = np.array(
                [[int(value * scale) for value in row] for row in inverse], dtype=np.int64
            )
            faces.append(_Face(subset, tuple(rows), integer_inverse, scale, lifted))
    logger.debug(f"n={n}: {len(faces)} affinely independent vertex sets of size ≤ {n - 1}")
    return tuple(faces)


def _guard_tilde_scale(n: int) -> None:
    if n < 4:
        raise DomainError(f"n must be at least 4, got {n}")
    if n > MAX_TILDE_N:
        raise UnsupportedScaleError(f"μ̃-regularity is enumerated for n ≤ {MAX_TILDE_N}, got {n}")


def regular_mu_tilde_mask(numerators: np.ndarray, denominator: int, n: int) -> np.ndarray:
    """
    Batched exact μ̃-regularity.

    A point is singular iff it lies in conv(S) for some affinely independent S
    with |S| ≤ n−1, i.e. in the image of a stratum whose polytope has dimension ≤ n−2.
    """
    _guard_tilde_scale(n)
    P = np.asarray(numerators)
    dtype = P.dtype if P.dtype == object else np.int64
    count = P.shape[0]
    lifted_points = np.hstack([P, np.full((count, 1), denominator)]).astype(dtype)
    singular = np.zeros(count, dtype=bool)

    for face in _low_dimensional_faces(n):
        open_points = np.flatnonzero(~singular)
        if not len(open_points):
            break
        b = lifted_points[open_points]
        weights = b[:, list(face.rows)] @ face.inverse.T.astype(dtype)
        nonnegative = np.all(weights >= 0, axis=1)
        if not nonnegative.any():
            continue
        hits = open_points[nonnegative]
        rebuilt = weights[nonnegative] @ face.lifted.T.astype(dtype)
        consistent = np.all(rebuilt == face.scale * lifted_points[hits], axis=1)
        singular[hits[consistent]] = True
    return ~singular


def is_regular_mu_tilde(x: RationalVector, n: int) -> bool:
    _guard_tilde_scale(n)
    validate_hypersimplex_point(x, n)
    numerators, denominator = to_numerators([x])
    return bool(regular_mu_tilde_mask(numerators, denominator, n)[0])


@lru_cache(maxsize=None)
def _low_rank_supports(n: int) -> Tuple[Tuple[int, ...], ...]:
    vertices = [w.as_rational() for w in weight_vectors(n)]
    supports = []
    for size in range(1, len(vertices) + 1):
        for sigma in combinations(range(len(vertices)), size):
            if affine_rank([vertices[i] for i in sigma]) <= n - 2:
                supports.append(sigma)
    return tuple(supports)


def brute_force_regular_mu_tilde(x: RationalVector, n: int) -> bool:
    """Oracle: scan every support σ with dim P_σ ≤ n−2 for x ∈ conv(P_σ)."""
    if n > MAX_ORACLE_N:
        raise UnsupportedScaleError(f"the all-support oracle is limited to n ≤ {MAX_ORACLE_N}")
    validate_hypersimplex_point(x, n)
    vertices = [w.as_rational() for w in weight_vectors(n)]
    for sigma in _low_rank_supports(n):
        if convex_membership(x, [vertices[i] for i in sigma]).is_member:
            return False
    return True


def stabilizer_dim(sigma: StratumSupport) -> StabilizerReport:
    """dim T^σ = n − dim P_σ (the diagonal circle included)."""
    vertices = weight_vectors(sigma.n)
    dim_polytope = affine_rank([vertices[i].as_rational() for i in sigma.sigma])
    return StabilizerReport(dim_stabilizer=sigma.n - dim_polytope, dim_polytope=dim_polytope)


def regularity_sweep(n: int, denominator: int, max_witnesses: int = 5) -> RegularitySweep:
    """Compare the two regular sets over the full rational grid."""
    logger.info(f"Regularity sweep n={n}, denominator={denominator}")
    grid = grid_numerators(n, denominator)
    mu_mask = regular_mu_mask(grid, denominator, n)
    tilde_mask = regular_mu_tilde_mask(grid, denominator, n)
    witness_rows = np.flatnonzero(mu_mask & ~tilde_mask)[:max_witnesses]
    witnesses = tuple(
        RationalVector(tuple(Fraction(int(k), denominator) for k in grid[i])) for i in witness_rows
    )
    sweep = RegularitySweep(
        n=n,
        denominator=denominator,
        points=len(grid),
        regular_mu=int(mu_mask.sum()),
        regular_mu_tilde=int(tilde_mask.sum()),
        implication_violations=int((tilde_mask & ~mu_mask).sum()),
        disagreements=int((tilde_mask != mu_mask).sum()),
        witnesses=witnesses,
    )
    logger.info(
        f"Sweep done: {sweep.points} points, {sweep.regular_mu} μ-regular, "
        f"{sweep.regular_mu_tilde} μ̃-regular"
    )
    return sweep


# n=4 胞腔

@lru_cache(maxsize=None)
def _grid_chambers(denominator: int) -> Tuple[ChamberReport, ...]:
    n = 4
    grid = grid_numerators(n, denominator)
    grid = grid[regular_mu_mask(grid, denominator, n)]
    incidence = _incidence(n)
    signed = grid @ incidence.T - denominator
    plane_margin = np.abs(signed).min(axis=1)
    boundary_margin = np.minimum(grid, denominator - grid).min(axis=1)
    margin = np.minimum(plane_margin, boundary_margin)

    best: Dict[Tuple[int, ...], Tuple[Tuple, np.ndarray]] = {}
    for row, signs, m in zip(grid, np.sign(signed), margin):
        key = tuple(int(s) for s in signs)
        multiplicity = max(np.unique(row, return_counts=True)[1])
        # 最大边距，再取坐标重复度最高，最后字典序最小
        score = (int(m), int(multiplicity), tuple(-int(k) for k in row))
        if key not in best or score > best[key][0]:
            best[key] = (score, row)

    return tuple(
        ChamberReport(
            id=SignVector(key),
            dimension=n - 1,
            representative=RationalVector(tuple(Fraction(int(k), denominator) for k in row)),
        )
        for key, (_, row) in sorted(best.items())
    )


def _require_n4(n: int) -> None:
    if n != 4:
        raise UnsupportedError(f"chamber enumeration is implemented for n=4 only, got n={n}")


def s4_chamber_orbits() -> List[ChamberOrbit]:
    """Orbits of the 8 chambers under coordinate permutations."""
    chambers = _grid_chambers(settings.chamber_grid_denominator)
    arrangement = arrangement_for_n(4)
    by_id = {c.id: c for c in chambers}

    orbits: List[ChamberOrbit] = []
    seen: set = set()
    for chamber in chambers:
        if chamber.id in seen:
            continue
        members = sorted(
            {sign_vector(chamber.representative.permuted(p), arrangement) for p in permutations(range(4))},
            key=lambda s: s.signs,
        )
        seen.update(members)
        minus, plus = SignVector((-1, -1, -1)), SignVector((1, 1, 1))
        if minus in members:
            label, representative = "C-", minus
        elif plus in members:
            label, representative = "C+", plus
        else:
            label, representative = f"O{len(orbits)}", members[0]
        points = tuple(sorted((by_id[m].representative for m in members), key=lambda v: v.entries))
        orbits.append(ChamberOrbit(label, representative, tuple(members), points))
    return sorted(orbits, key=lambda o: o.label, reverse=True)


def enumerate_chambers(n: int = 4) -> List[ChamberReport]:
    """The 8 open chambers of Δ(4,2) with exact representatives."""
    _require_n4(n)
    chambers = _grid_chambers(settings.chamber_grid_denominator)
    if len(chambers) != 8:
        logger.error(f"Grid search found {len(chambers)} chambers instead of 8")
        raise CertificateError(
            f"denominator {settings.chamber_grid_denominator} grid meets {len(chambers)} of the 8 chambers"
        )
    labels = {m: o.label for o in s4_chamber_orbits() for m in o.members}
    return [replace(c, orbit=labels.get(c.id)) for c in chambers]


def chamber_orbit_points(label: str) -> List[RationalVector]:
    for orbit in s4_chamber_orbits():
        if orbit.label == label:
            return list(orbit.points)
    raise DomainError(f"unknown chamber orbit {label!r}")


def chamber_of_point(x: RationalVector, n: int) -> PointClassification:
    validate_hypersimplex_point(x, n)
    signs = sign_vector(x, arrangement_for_n(n))
    orbit = None
    if n == 4 and signs.is_strict:
        orbit = next((o.label for o in s4_chamber_orbits() if signs in o.members), None)
    return PointClassification(
        n=n,
        point=x,
        sign_vector=signs,
        regular_mu=is_regular_mu(x, n),
        regular_mu_tilde=is_regular_mu_tilde(x, n) if n <= MAX_TILDE_N else None,
        orbit=orbit,
    )


# 中心点与最大胞腔

def center_point(n: int) -> RationalVector:
    return RationalVector((Fraction(2, n),) * n)


def center_point_regular(n: int) -> bool:
    """True iff n is odd."""
    if n < 4:
        raise DomainError(f"n must be at least 4, got {n}")
    return is_regular_mu(center_point(n), n)


def _small_support_bound(n: int) -> int:
    return n // 2 if n % 2 else n // 2 - 1


def is_largest_chamber_point(x: RationalVector, n: int) -> bool:
    """Σ_T x < 1 for every |T| up to the bound, and off the arrangement."""
    bound = _small_support_bound(n)
    for size in range(2, bound + 1):
        for support in combinations(range(n), size):
            if sum((x[i] for i in support), Fraction(0)) >= 1:
                return False
    return is_regular_mu(x, n)


def largest_chamber_witness(
    n: int, seed: Optional[int] = None, trials: Optional[int] = None
) -> RationalVector:
    """Exact point of the largest chamber; seeded perturbation of the center for even n."""
    if n < 4:
        raise DomainError(f"n must be at least 4, got {n}")
    if n > MAX_WITNESS_N:
        raise UnsupportedScaleError(f"witness search is limited to n ≤ {MAX_WITNESS_N}")
    center = center_point(n)
    if n % 2:
        return center

    seed = settings.seed if seed is None else seed
    trials = settings.witness_trials if trials is None else trials
    rng = np.random.default_rng(seed)
    spread = 97
    scale = Fraction(1, spread * n * n)
    for attempt in range(trials):
        steps = [Fraction(int(r)) * scale for r in rng.integers(-spread, spread + 1, size=n)]
        mean = sum(steps, Fraction(0)) / n
        candidate = RationalVector(tuple(c + s - mean for c, s in zip(center, steps)))
        if is_largest_chamber_point(candidate, n):
            logger.debug(f"n={n}: witness after {attempt + 1} trials")
            return candidate
    raise WitnessNotFoundError(f"no largest-chamber point found for n={n} in {trials} trials")


def describe_arrangement(n: int) -> List[Dict[str, object]]:
    return [
        {"support": [i + 1 for i in h.support], "equation": h.label}
        for h in arrangement_for_n(n)
    ]
