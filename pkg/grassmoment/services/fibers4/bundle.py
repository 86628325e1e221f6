"""
The principal T^3-bundle π: M_Q^5 → CP^1 and its transition function
"""
import logging
from typing import Literal, Optional

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import CertificateError, DomainError, OutsideChartError
from grassmoment.models.geometry import FiberPoint, ProjectivePoint, TorusElement, TransitionMatrix
from grassmoment.models.reports import ChartCoverageReport
from grassmoment.services.fibers4.chart import chart_coords_of
from grassmoment.services.fibers4.mq7 import to_fiber_normalization
from grassmoment.services.fibers4.orbit import fiber_orbit
from grassmoment.services.plucker import P12, P13, P14, P23, P24, P34

logger = logging.getLogger(__name__)

Direction = Literal["0->1", "1->0"]

# t¹ = (t1⁰ t2⁰ / t3⁰, t1⁰, t3⁰)
TRANSITION_01 = TransitionMatrix(((1, 1, -1), (1, 0, 0), (0, 0, 1)))
TRANSITION_10 = TransitionMatrix(((0, 1, 0), (1, -1, 1), (0, 0, 1)))

_LABELS = {P12: "P12", P13: "P13", P14: "P14"}


def transition_matrix(direction: Direction = "0->1") -> TransitionMatrix:
    if direction == "0->1":
        return TRANSITION_01
    if direction == "1->0":
        return TRANSITION_10
    raise DomainError(f"direction must be '0->1' or '1->0', got {direction!r}")


def apply_exponents(matrix: TransitionMatrix, t: TorusElement) -> TorusElement:
    """t′_k = Π_j t_j^{E_kj}"""
    exponents = matrix.as_array()
    if len(t) != exponents.shape[1]:
        raise DomainError(f"expected a T^{exponents.shape[1]} element")
    return TorusElement(np.prod(t.phases[np.newaxis, :] ** exponents, axis=1))


def bundle_transition(t: TorusElement, direction: Direction = "0->1") -> TorusElement:
    return apply_exponents(transition_matrix(direction), t)


def cocycle_residual(t: TorusElement) -> float:
    """max |(φ01 ∘ φ10)(t) − t| and the reverse composition"""
    there = bundle_transition(bundle_transition(t, "1->0"), "0->1")
    back = bundle_transition(bundle_transition(t, "0->1"), "1->0")
    return float(max(np.max(np.abs(there.phases - t.phases)), np.max(np.abs(back.phases - t.phases))))


def _first_orbit_coords(point: FiberPoint) -> np.ndarray:
    return to_fiber_normalization(fiber_orbit(point.orbit).pull(point.z))


def bundle_projection(point: FiberPoint) -> ProjectivePoint:
    """π(z) = (z1 z4 : z0 z5)"""
    z = _first_orbit_coords(point)
    return ProjectivePoint(np.array([z[P13] * z[P24], z[P12] * z[P34]]))


def _phase(value: complex) -> complex:
    return value / abs(value)


def local_trivialization(point: FiberPoint, chart: int) -> TorusElement:
    """Chart 0 (P12 ≠ 0): phases of (a2, a3, a4). Chart 1 (P13 ≠ 0): phases of (a1, a2, a4)."""
    a = chart_coords_of(point)
    if chart == 0:
        entries = (a.a2, a.a3, a.a4)
    elif chart == 1:
        entries = (a.a1, a.a2, a.a4)
    else:
        raise DomainError(f"chart must be 0 or 1, got {chart}")
    if min(abs(e) for e in entries) <= settings.tol_zero:
        raise OutsideChartError(f"point lies outside trivialization chart {chart}")
    return TorusElement(np.array([_phase(e) for e in entries]))


def base_factor(point: FiberPoint) -> TorusElement:
    """(arg(a1 a4 / (a2 a3)), 1, 1); depends on π(z) only."""
    a = chart_coords_of(point)
    return TorusElement(np.array([_phase(a.a1 * a.a4 / (a.a2 * a.a3)), 1.0, 1.0]))


def transition_consistency(point: FiberPoint) -> float:
    """Distance between the chart-1 coordinates and the transported chart-0 ones."""
    chart0 = local_trivialization(point, 0)
    chart1 = local_trivialization(point, 1)
    transported = bundle_transition(chart0, "0->1").phases * base_factor(point).phases
    return float(np.max(np.abs(transported - chart1.phases)))


def _special_fiber(vanishing: list) -> Optional[str]:
    if "P13" in vanishing:
        return "B0"
    if "P12" in vanishing:
        return "Binf"
    if "P14" in vanishing:
        return "B1"
    return None


def verify_chart_coverage(point: FiberPoint, index: int = -1) -> ChartCoverageReport:
    """P23, P24, P34 never vanish on M_Q^5; record which of P12, P13, P14 do."""
    z = _first_orbit_coords(point)
    moduli = np.abs(z)
    if min(moduli[P23], moduli[P24], moduli[P34]) <= settings.tol_zero:
        logger.warning(f"Chart coverage fails at sample {index}")
        raise CertificateError("P23, P24 or P34 vanishes on a fiber sample", index=index)
    vanishing = [label for k, label in _LABELS.items() if moduli[k] <= settings.tol_zero]
    return ChartCoverageReport(
        p23=float(moduli[P23]),
        p24=float(moduli[P24]),
        p34=float(moduli[P34]),
        vanishing=vanishing,
        in_M0="P13" not in vanishing,
        in_M1="P12" not in vanishing,
        special_fiber=_special_fiber(vanishing),
    )
