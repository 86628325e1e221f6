"""
Fiber certificates and the acceptance suite

certify_point checks one sample against the defining equations of its fiber,
certify_fiber sweeps a seeded sampler, and AcceptanceSuite runs the
numbered acceptance criteria, each returning a pass flag with details.
"""
import logging
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from grassmoment import __version__
from grassmoment.core.config import settings
from grassmoment.core.exceptions import CertificateError, DomainError, GrassmomentError
from grassmoment.models.geometry import (
    FiberPoint,
    M2Point,
    M3Point,
    RationalVector,
    TorusElement,
    complex_vector_json,
)
from grassmoment.models.reports import (
    AcceptanceReport,
    CriterionResult,
    FiberCertificate,
    FiberSummary,
    InjectivityReport,
    Residuals,
)
from grassmoment.services.exactgeom import exact_determinant
from grassmoment.services.fibers4.bundle import (
    TRANSITION_01,
    cocycle_residual,
    transition_consistency,
    verify_chart_coverage,
)
from grassmoment.services.fibers4.chart import (
    FD_AGREEMENT,
    chart_split,
    complete_intersection_f,
    jacobian_deviation,
    jacobian_rank,
    level_residual,
)
from grassmoment.services.fibers4.mq5 import (
    SIXTH_ROOT,
    F_param,
    F_preimage,
    G_param,
    G_preimage,
    m3_sample,
    mq5_fiber_circles,
    sample_m2,
    sample_m2_keyed,
    sample_mq5,
    surface_residual,
)
from grassmoment.services.fibers4.mq7 import (
    h_preimage,
    lift_f,
    rho3_stabilizer_dim,
    sample_mq7,
    to_fiber_normalization,
)
from grassmoment.services.fibers4.orbit import FIRST_ORBIT, SECOND_ORBIT, FiberOrbit, fiber_orbit
from grassmoment.services.fibers4.projections import proj_p
from grassmoment.services.fibers4.tangent import tangent_dimension
from grassmoment.services.fibers4.triangle import (
    CURVE_POINTS,
    EDGES,
    X01,
    X02,
    X12,
    curve_Pprime_residual,
    modulus_relation_residual,
    solve_triangle_P,
)
from grassmoment.services.moment import A_map_exact, mu_hat, mu_tilde
from grassmoment.services.plucker import plucker_relation_residual, projective_distance
from grassmoment.services.regularity import (
    brute_force_regular_mu_tilde,
    center_point_regular,
    enumerate_chambers,
    is_regular_mu,
    is_regular_mu_tilde,
    rational_grid,
    regularity_sweep,
    s4_chamber_orbits,
)

logger = logging.getLogger(__name__)

FIBER_KINDS = ("mq7", "mq5", "m2", "m3")
MIN_TWISTED_MODULUS = 0.33
N5_WITNESS = RationalVector.of("7/10", "6/10", "5/10", "1/10", "1/10")

SamplePoint = Union[FiberPoint, M2Point, M3Point]


def _check_kind(kind: str) -> None:
    if kind not in FIBER_KINDS:
        raise DomainError(f"unknown fiber kind {kind!r}; use one of {', '.join(FIBER_KINDS)}")


def _max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if np.size(values) else 0.0


def certify_point(
    point: SamplePoint,
    kind: str,
    index: int = 0,
    orbit: FiberOrbit = FIRST_ORBIT,
    round_trip: Optional[float] = None,
) -> FiberCertificate:
    """Check one sample against the equations of its fiber."""
    _check_kind(kind)
    failures: List[str] = []
    surface = None
    if isinstance(point, (M2Point, M3Point)):
        surface = surface_residual(point.z0, point.z1, point.z2)
        z = to_fiber_normalization(orbit.push(point.coords()), orbit)
    else:
        orbit = fiber_orbit(point.orbit)
        z = to_fiber_normalization(point.z, orbit)

    moment = _max_abs(mu_tilde(z, 4) - orbit.q_floats)
    plucker = None if kind == "mq7" else plucker_relation_residual(z)
    tol = settings.tol_constructive
    if moment > tol:
        failures.append(f"moment residual {moment:.3e}")
    if plucker is not None and plucker > tol:
        failures.append(f"plucker residual {plucker:.3e}")
    if surface is not None and surface > tol:
        failures.append(f"surface residual {surface:.3e}")
    if round_trip is not None and round_trip > tol:
        failures.append(f"round trip {round_trip:.3e}")

    if kind == "mq7":
        twisted = [abs(z[orbit.position(k)]) for k in (3, 4, 5)]
        if min(twisted) < MIN_TWISTED_MODULUS:
            failures.append(f"|z3|, |z4|, |z5| reach {min(twisted):.6f}")

    rank = f_values = chart = None
    if kind == "mq5":
        fiber_point = FiberPoint(z, orbit.name)
        u, v = chart_split(fiber_point)
        f_values = [float(f) for f in complete_intersection_f(u, v)]
        if level_residual(u, v) > settings.tol_pipeline:
            failures.append(f"f-values {f_values} off (0, -1, 0)")
        try:
            rank = jacobian_rank(u, v)
        except DomainError as e:
            failures.append(str(e))
        if rank is not None and rank != 3:
            failures.append(f"jacobian rank {rank}")
        try:
            chart = verify_chart_coverage(fiber_point, index)
        except CertificateError as e:
            failures.append(str(e))

    if failures:
        logger.warning(f"Certificate failure at sample {index} ({kind}): {'; '.join(failures)}")
    return FiberCertificate(
        index=index,
        kind=kind,
        orbit=orbit.name,
        point=complex_vector_json(z),
        residuals=Residuals(moment=moment, plucker=plucker, surface=surface, round_trip=round_trip),
        jacobian_rank=rank,
        f_values=f_values,
        chart=chart,
        passed=not failures,
        failure="; ".join(failures) or None,
    )


def _draw(kind: str, rng: np.random.Generator, index: int, orbit: FiberOrbit) -> Tuple[SamplePoint, Optional[float]]:
    """One sample and the round-trip error of its parametrization."""
    if kind == "mq7":
        point, sphere, twist = sample_mq7(rng, orbit)
        recovered = h_preimage(point).as_array()
        expected = np.array([*sphere, twist[0], twist[1]])
        return point, _max_abs(recovered - expected)
    if kind == "mq5" and index % 2 == 0:
        m2 = sample_m2(rng)
        t = TorusElement.random(3, rng)
        point = F_param(m2, t, orbit)
        back, t_back = F_preimage(point)
        error = max(
            _max_abs(np.array([back.z0 - m2.z0, back.z1 - m2.z1, back.z2 - m2.z2])),
            _max_abs(t_back.phases - t.phases),
        )
        return point, error
    if kind == "mq5":
        m3 = m3_sample(rng)
        twist = TorusElement.random(2, rng)
        point = G_param(m3, twist[0], twist[1], orbit)
        back3, twist_back = G_preimage(point)
        error = max(
            _max_abs(np.array([back3.z0 - m3.z0, back3.z1 - m3.z1, back3.z2 - m3.z2])),
            _max_abs(twist_back.phases - twist.phases),
        )
        return point, error
    if kind == "m2":
        return sample_m2(rng), None
    return m3_sample(rng), None


def certify_fiber(
    kind: str,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    orbit: Union[str, FiberOrbit] = "first",
    keep_certificates: bool = True,
) -> FiberSummary:
    """Seeded sweep; mq5 samples alternate between F (even index) and G (odd index)."""
    _check_kind(kind)
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    if samples < 0:
        raise DomainError("samples must be nonnegative")
    fiber = orbit if isinstance(orbit, FiberOrbit) else fiber_orbit(orbit)
    rng = np.random.default_rng(seed)
    logger.info(f"Certifying {samples} {kind} samples (seed={seed}, orbit={fiber.name})")

    certificates: List[FiberCertificate] = []
    maxima: Dict[str, float] = {}
    histogram: Dict[str, int] = {}
    for index in range(samples):
        point, round_trip = _draw(kind, rng, index, fiber)
        certificate = certify_point(point, kind, index, fiber, round_trip)
        for name, value in certificate.residuals.model_dump().items():
            if value is not None:
                maxima[name] = max(maxima.get(name, 0.0), value)
        if certificate.f_values is not None:
            level = max(abs(certificate.f_values[0]), abs(certificate.f_values[1] + 1), abs(certificate.f_values[2]))
            maxima["level"] = max(maxima.get("level", 0.0), level)
        if certificate.jacobian_rank is not None:
            key = str(certificate.jacobian_rank)
            histogram[key] = histogram.get(key, 0) + 1
        certificates.append(certificate)

    failures = [c.index for c in certificates if not c.passed]
    if failures:
        logger.error(f"{len(failures)} of {samples} {kind} certificates failed")
    return FiberSummary(
        kind=kind,
        orbit=fiber.name,
        seed=seed,
        samples=samples,
        max_residuals=maxima,
        rank_histogram=histogram,
        passed=not failures,
        failures=failures,
        certificates=certificates if keep_certificates else [],
    )


def circle_points(count: int) -> List[M3Point]:
    """z0 = z1 = e^{iψ}/√6, z2 = 0"""
    angles = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
    return [M3Point(np.exp(1j * a) * SIXTH_ROOT, np.exp(1j * a) * SIXTH_ROOT, 0j) for a in angles]


def _aligned_gaps(a: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """min over phases of ‖a − λ·row‖ for unit vectors"""
    inner = rows.conj() @ a
    modulus = np.abs(inner)
    phase = np.where(modulus > 0, inner / np.where(modulus > 0, modulus, 1.0), 1.0)
    return np.linalg.norm(a - phase[:, np.newaxis] * rows, axis=1)


def injectivity_check(
    images: Sequence[np.ndarray],
    preimages: Sequence[Sequence[complex]],
    tol: Optional[float] = None,
) -> InjectivityReport:
    """Pairs with distinct preimages must have projective images at least tol apart."""
    tol = settings.injectivity_tol if tol is None else tol
    targets = np.asarray(images, dtype=complex)
    sources = np.asarray(preimages, dtype=complex)
    if len(targets) != len(sources):
        raise DomainError("images and preimages differ in length")
    if len(targets):
        targets = targets / np.linalg.norm(targets, axis=1, keepdims=True)
    best, pairs, collisions = np.inf, 0, 0
    for i in range(len(targets) - 1):
        distinct = np.linalg.norm(sources[i + 1 :] - sources[i], axis=1) > settings.tol_identity
        if not np.any(distinct):
            continue
        gaps = _aligned_gaps(targets[i], targets[i + 1 :])[distinct]
        pairs += int(distinct.sum())
        collisions += int(np.sum(gaps <= tol))
        best = min(best, float(gaps.min()))
    if collisions:
        logger.warning(f"{collisions} of {pairs} distinct preimage pairs collide within {tol:.1e}")
    return InjectivityReport(
        samples=len(targets),
        distinct_pairs=pairs,
        min_distance=best if np.isfinite(best) else None,
        tolerance=tol,
        collisions=collisions,
        passed=collisions == 0,
    )


class AcceptanceSuite:
    """验收标准集合"""

    CRITERIA = (
        "chambers",
        "triangle",
        "curve",
        "mq7",
        "regularity",
        "oracle",
        "mq5",
        "complete_intersection",
        "transition",
        "center",
        "dimension",
        "second_orbit",
    )

    def __init__(self, seed: Optional[int] = None, samples: Optional[int] = None):
        self.seed = settings.seed if seed is None else seed
        self.samples = settings.samples if samples is None else samples
        self._summaries: Dict[Tuple[str, str], FiberSummary] = {}

    def _summary(self, kind: str, orbit: str = "first", factor: int = 1) -> FiberSummary:
        key = (kind, orbit)
        if key not in self._summaries:
            self._summaries[key] = certify_fiber(
                kind, self.samples * factor, self.seed, orbit, keep_certificates=False
            )
        return self._summaries[key]

    def check_chambers(self) -> Tuple[bool, Dict[str, Any]]:
        chambers = enumerate_chambers(4)
        orbits = s4_chamber_orbits()
        passed = (
            len(chambers) == 8
            and [o.label for o in orbits] == ["C-", "C+"]
            and all(len(o.members) == 4 for o in orbits)
        )
        return passed, {"chambers": len(chambers), "orbits": [o.to_json() for o in orbits]}

    def check_triangle(self) -> Tuple[bool, Dict[str, Any]]:
        description = solve_triangle_P()
        expected = {"X01": X01, "X02": X02, "X12": X12}
        images = {name: A_map_exact(v, 4) for name, v in description.vertices.items()}
        x0_on_edge = EDGES[0].point_at(Fraction(1, 6)) == CURVE_POINTS[0]
        passed = (
            description.vertices == expected
            and all(image == FIRST_ORBIT.q for image in images.values())
            and x0_on_edge
        )
        return passed, description.to_json()

    def check_curve(self) -> Tuple[bool, Dict[str, Any]]:
        lifts = [
            lift_f(0, SIXTH_ROOT, SIXTH_ROOT),
            lift_f(SIXTH_ROOT, 0, SIXTH_ROOT),
            lift_f(SIXTH_ROOT, SIXTH_ROOT, 0),
        ]
        errors = [_max_abs(mu_hat(p.z) - x.as_floats()) for p, x in zip(lifts, CURVE_POINTS)]
        printed = [curve_Pprime_residual(0, 1 / 6), curve_Pprime_residual(1 / 6, 1 / 6)]
        signed = [modulus_relation_residual(float(x[0]), float(x[1])) for x in CURVE_POINTS]
        tol = settings.tol_identity
        passed = max(errors) <= tol and max(printed) <= tol and max(signed) <= tol
        return passed, {"mu_hat_errors": errors, "curve_residuals": printed, "modulus_relation": signed}

    def _fiber_detail(self, summary: FiberSummary) -> Dict[str, Any]:
        return {
            "samples": summary.samples,
            "max_residuals": summary.max_residuals,
            "rank_histogram": summary.rank_histogram,
            "failures": summary.failures[:10],
        }

    def check_mq7(self, orbit: str = "first") -> Tuple[bool, Dict[str, Any]]:
        summary = self._summary("mq7", orbit)
        return summary.passed, self._fiber_detail(summary)

    def check_regularity(self) -> Tuple[bool, Dict[str, Any]]:
        sweep = regularity_sweep(4, settings.regularity_grid_denominator_n4)
        mu_regular = is_regular_mu(N5_WITNESS, 5)
        tilde_regular = is_regular_mu_tilde(N5_WITNESS, 5)
        passed = sweep.disagreements == 0 and mu_regular and not tilde_regular
        return passed, {
            "n4_sweep": sweep.to_json(),
            "n5_witness": N5_WITNESS.to_json(),
            "n5_regular_mu": mu_regular,
            "n5_regular_mu_tilde": tilde_regular,
        }

    def check_oracle(self) -> Tuple[bool, Dict[str, Any]]:
        grid = rational_grid(4, settings.regularity_grid_denominator_n4)
        rng = np.random.default_rng(self.seed)
        chosen = sorted(rng.choice(len(grid), size=min(settings.oracle_points, len(grid)), replace=False))
        mismatches = [
            grid[i].to_json()
            for i in chosen
            if is_regular_mu_tilde(grid[i], 4) != brute_force_regular_mu_tilde(grid[i], 4)
        ]
        return not mismatches, {"points": len(chosen), "mismatches": mismatches}

    def _projection_checks(self) -> Dict[str, Any]:
        rng = np.random.default_rng(self.seed)
        circle = circle_points(max(self.samples // 10, 8))
        one_one = np.array([1.0, 1.0])
        collapse = max(projective_distance(proj_p(p), one_one) for p in circle)

        # p 只在圆周外单射
        p_images, p_keys = [], []
        for _ in range(self.samples):
            m2, key = sample_m2_keyed(rng)
            if m2.z2 > settings.tol_zero:
                p_images.append(proj_p(m2).coords)
                p_keys.append(key)
        g_images, g_keys = [], []
        for _ in range(self.samples):
            m3 = m3_sample(rng)
            twist = TorusElement.random(2, rng)
            g_images.append(G_param(m3, twist[0], twist[1]).z)
            g_keys.append([m3.z0, m3.z1, m3.z2, twist[0], twist[1]])
        return {
            "circle_collapse": collapse,
            "p_injectivity": injectivity_check(p_images, p_keys).model_dump(),
            "G_injectivity": injectivity_check(g_images, g_keys).model_dump(),
        }

    def check_mq5(self, orbit: str = "first") -> Tuple[bool, Dict[str, Any]]:
        summary = self._summary("mq5", orbit, factor=2)
        detail = self._fiber_detail(summary)
        passed = summary.passed
        if orbit == "first":
            projections = self._projection_checks()
            detail.update(projections)
            passed = (
                passed
                and projections["circle_collapse"] <= settings.tol_constructive
                and projections["p_injectivity"]["passed"]
                and projections["G_injectivity"]["passed"]
            )
        return passed, detail

    def check_complete_intersection(self, orbit: str = "first") -> Tuple[bool, Dict[str, Any]]:
        summary = self._summary("mq5", orbit, factor=2)
        fiber = fiber_orbit(orbit)
        bases = [circle.base_point(fiber) for circle in mq5_fiber_circles()]
        base_ranks, base_levels = [], []
        for base in bases:
            u, v = chart_split(base)
            base_levels.append(level_residual(u, v))
            base_ranks.append(jacobian_rank(u, v))
        rng = np.random.default_rng(self.seed)
        deviations = [
            jacobian_deviation(*chart_split(sample_mq5(rng, i, fiber)))
            for i in range(min(self.samples, 100))
        ]
        deviation = max(deviations, default=0.0)
        passed = (
            summary.passed
            and summary.max_residuals.get("level", 0.0) <= settings.tol_pipeline
            and set(summary.rank_histogram) <= {"3"}
            and base_ranks == [3, 3, 3]
            and max(base_levels) <= settings.tol_constructive
            and deviation <= FD_AGREEMENT
        )
        return passed, {
            "max_level_residual": summary.max_residuals.get("level", 0.0),
            "rank_histogram": summary.rank_histogram,
            "base_ranks": base_ranks,
            "base_level_residuals": base_levels,
            "fd_deviation": deviation,
        }

    def check_transition(self) -> Tuple[bool, Dict[str, Any]]:
        determinant = int(exact_determinant(TRANSITION_01.rows))
        rng = np.random.default_rng(self.seed)
        cocycle = max(
            (cocycle_residual(TorusElement.random(3, rng)) for _ in range(self.samples)), default=0.0
        )
        mq0, mq1, _ = mq5_fiber_circles()
        chart0 = verify_chart_coverage(mq0.base_point())
        chart1 = verify_chart_coverage(mq1.base_point())
        lemma = chart0.in_M0 and not chart0.in_M1 and chart1.in_M1 and not chart1.in_M0

        coverage_failures, consistency = 0, 0.0
        for index in range(self.samples):
            point = sample_mq5(rng, index)
            try:
                verify_chart_coverage(point, index)
                consistency = max(consistency, transition_consistency(point))
            except GrassmomentError:
                coverage_failures += 1
        passed = (
            determinant == -1
            and cocycle <= settings.tol_identity
            and lemma
            and coverage_failures == 0
            and consistency <= settings.tol_constructive
        )
        return passed, {
            "determinant": determinant,
            "cocycle_residual": cocycle,
            "chart_classification_consistent": lemma,
            "coverage_failures": coverage_failures,
            "transition_consistency": consistency,
        }

    def check_center(self) -> Tuple[bool, Dict[str, Any]]:
        verdicts = {str(n): center_point_regular(n) for n in range(4, 11)}
        passed = all(verdicts[str(n)] == bool(n % 2) for n in range(4, 11))
        return passed, {"center_regular": verdicts}

    def check_dimension(self) -> Tuple[bool, Dict[str, Any]]:
        rng = np.random.default_rng(self.seed)
        count = settings.tangent_points
        mq7_points = [sample_mq7(rng)[0] for _ in range(count)]
        mq7 = sorted({tangent_dimension(p, "mq7") for p in mq7_points})
        stabilizers = sorted({rho3_stabilizer_dim(p) for p in mq7_points})
        mq5 = sorted({tangent_dimension(sample_mq5(rng, i), "mq5") for i in range(count)})
        passed = mq7 == [7] and mq5 == [5] and stabilizers == [0]
        return passed, {
            "mq7_dimensions": mq7,
            "mq5_dimensions": mq5,
            "rho3_stabilizer_dimensions": stabilizers,
        }

    def check_second_orbit(self) -> Tuple[bool, Dict[str, Any]]:
        name = SECOND_ORBIT.name
        results = {
            "mq7": self.check_mq7(name),
            "mq5": self.check_mq5(name),
            "complete_intersection": self.check_complete_intersection(name),
        }
        passed = all(ok for ok, _ in results.values())
        return passed, {key: {"passed": ok, **detail} for key, (ok, detail) in results.items()}

    def checks(self) -> Dict[str, Callable[[], Tuple[bool, Dict[str, Any]]]]:
        return {name: getattr(self, f"check_{name}") for name in self.CRITERIA}

    def run(self, only: Optional[Sequence[str]] = None) -> AcceptanceReport:
        selected = list(only) if only else list(self.CRITERIA)
        unknown = [name for name in selected if name not in self.CRITERIA]
        if unknown:
            raise DomainError(f"unknown criteria: {', '.join(unknown)}")

        checks = self.checks()
        started = time.perf_counter()
        results: List[CriterionResult] = []
        for name in self.CRITERIA:
            if name not in selected:
                continue
            logger.info(f"Running acceptance criterion {name}")
            tick = time.perf_counter()
            try:
                passed, detail = checks[name]()
            except GrassmomentError as e:
                logger.error(f"Criterion {name} raised: {e}")
                passed, detail = False, {"error": str(e)}
            results.append(
                CriterionResult(
                    name=name,
                    passed=bool(passed),
                    detail=detail,
                    elapsed_seconds=round(time.perf_counter() - tick, 6),
                )
            )
        return AcceptanceReport(
            version=__version__,
            seed=self.seed,
            samples=self.samples,
            passed=all(r.passed for r in results),
            criteria=results,
            elapsed_seconds=round(time.perf_counter() - started, 6),
        )


def run_acceptance(
    only: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> AcceptanceReport:
    return AcceptanceSuite(seed, samples).run(only)
