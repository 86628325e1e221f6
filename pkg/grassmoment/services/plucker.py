"""
Plücker embedding of G(n,2), the n=4 quadric and the M23 chart
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    OutsideChartError,
    UnsupportedError,
)
from grassmoment.models.geometry import (
    ChartCoords4,
    GrassmannPoint,
    ProjectivePoint,
    TorusElement,
    pair_list,
)

logger = logging.getLogger(__name__)

PointLike = Union[ProjectivePoint, np.ndarray, Sequence[complex]]

# 下标顺序 12,13,14,23,24,34
P12, P13, P14, P23, P24, P34 = range(6)


def as_coords(z: PointLike) -> np.ndarray:
    if isinstance(z, ProjectivePoint):
        return z.coords
    return np.asarray(z, dtype=complex)


def plucker_minors(matrix: np.ndarray) -> np.ndarray:
    """2×2 minors in lexicographic pair order, not normalized."""
    rows = np.asarray(matrix, dtype=complex)
    return np.array(
        [rows[0, i] * rows[1, j] - rows[0, j] * rows[1, i] for i, j in pair_list(rows.shape[1])]
    )


def plucker_embed(L: Union[GrassmannPoint, np.ndarray]) -> ProjectivePoint:
    """p: G(n,2) → CP^N"""
    if not isinstance(L, GrassmannPoint):
        L = GrassmannPoint(np.asarray(L, dtype=complex))
    return ProjectivePoint(plucker_minors(L.matrix))


def plucker_relation_residual(z: PointLike, n: int = 4) -> float:
    """|z0 z5 + z2 z3 − z1 z4| on a unit representative."""
    if n != 4:
        raise UnsupportedError("only the n=4 Plücker quadric is implemented")
    coords = as_coords(z)
    if len(coords) != 6:
        raise DimensionMismatchError(f"expected 6 coordinates, got {len(coords)}")
    norm = np.linalg.norm(coords)
    if norm == 0:
        raise DegenerateInputError("zero vector")
    c = coords / norm
    return float(abs(c[P12] * c[P34] + c[P14] * c[P23] - c[P13] * c[P24]))


def chart_coords_from_projective(z: PointLike, tol: Optional[float] = None) -> ChartCoords4:
    """a1 = P13/P23, a2 = −P34/P23, a3 = −P12/P23, a4 = P24/P23"""
    tol = settings.tol_identity if tol is None else tol
    coords = as_coords(z)
    if len(coords) != 6:
        raise DimensionMismatchError("chart M23 lives in CP^5")
    c = coords / np.linalg.norm(coords)
    p23 = c[P23]
    if abs(p23) <= tol:
        raise OutsideChartError(f"P23 = {abs(p23):.3e} vanishes")
    return ChartCoords4(
        complex(c[P13] / p23),
        complex(-c[P34] / p23),
        complex(-c[P12] / p23),
        complex(c[P24] / p23),
    )


def chart_coords(L: Union[GrassmannPoint, np.ndarray], n: int = 4) -> ChartCoords4:
    if n != 4:
        raise UnsupportedError("chart coordinates are defined for G(4,2) only")
    return chart_coords_from_projective(plucker_embed(L))


def from_chart(a: ChartCoords4) -> GrassmannPoint:
    """Rows (a1, 1, 0, a2) and (a3, 0, 1, a4); P23 = 1 before normalization."""
    return GrassmannPoint(
        np.array([[a.a1, 1, 0, a.a2], [a.a3, 0, 1, a.a4]], dtype=complex)
    )


def torus_act_grassmann(L: GrassmannPoint, t: TorusElement) -> GrassmannPoint:
    """列缩放"""
    if len(t) != L.n:
        raise DimensionMismatchError("torus rank differs from n")
    return GrassmannPoint(L.matrix * t.phases[np.newaxis, :])


def torus_act_projective(z: PointLike, t: TorusElement, n: int) -> ProjectivePoint:
    """Weight action z_I ↦ t_i t_j z_I."""
    from grassmoment.services.moment import second_symmetric_power

    coords = as_coords(z)
    if len(coords) != n * (n - 1) // 2:
        raise DimensionMismatchError("coordinate count does not match n")
    return ProjectivePoint(coords * second_symmetric_power(t))


def projective_distance(z: PointLike, w: PointLike) -> float:
    """1 − |<z, w>| for unit representatives; zero iff the points agree."""
    a = as_coords(z)
    b = as_coords(w)
    if len(a) != len(b):
        raise DimensionMismatchError("points in different projective spaces")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(max(0.0, 1.0 - abs(np.vdot(a, b))))


def random_grassmann_point(n: int, rng: np.random.Generator) -> GrassmannPoint:
    """Gaussian 2×n matrix"""
    real = rng.standard_normal((2, n))
    imag = rng.standard_normal((2, n))
    return GrassmannPoint(real + 1j * imag)

