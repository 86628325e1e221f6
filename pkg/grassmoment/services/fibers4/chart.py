"""
M_Q^5 as a complete intersection in the chart M23 ≅ R^8

In chart coordinates a_k = u_k + i v_k the fiber is the level set
(f1, f2, f3) = (0, −1, 0) of

    f1 = α1 + α2 − α3 − α4
    f2 = 5α1 + α3 − 4α4
    f3 = 4α1 + α3 − 3α4 + A² + B²

with α_k = |a_k|² and A + iB = a1 a4 − a2 a3.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DimensionMismatchError, DomainError
from grassmoment.models.geometry import ChartCoords4, FiberPoint
from grassmoment.services.fibers4.orbit import fiber_orbit
from grassmoment.services.plucker import chart_coords_from_projective

logger = logging.getLogger(__name__)

LEVEL = np.array([0.0, -1.0, 0.0])
FD_AGREEMENT = 1e-6


def chart_coords_of(point: FiberPoint) -> ChartCoords4:
    """Chart M23 coordinates of the first-orbit representative."""
    orbit = fiber_orbit(point.orbit)
    return chart_coords_from_projective(orbit.pull(point.z))


def chart_split(point: FiberPoint) -> Tuple[np.ndarray, np.ndarray]:
    return chart_coords_of(point).real_split()


def _uv(u: Sequence[float], v: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (4,) or v.shape != (4,):
        raise DimensionMismatchError("chart points have four real and four imaginary parts")
    return u, v


def _bilinear(u: np.ndarray, v: np.ndarray) -> Tuple[float, float]:
    """A + iB = a1 a4 − a2 a3"""
    u1, u2, u3, u4 = u
    v1, v2, v3, v4 = v
    a = u1 * u4 - v1 * v4 - u2 * u3 + v2 * v3
    b = u1 * v4 + v1 * u4 - u2 * v3 - u3 * v2
    return float(a), float(b)


def complete_intersection_f(u: Sequence[float], v: Sequence[float]) -> np.ndarray:
    u, v = _uv(u, v)
    alpha = u**2 + v**2
    a, b = _bilinear(u, v)
    return np.array(
        [
            alpha[0] + alpha[1] - alpha[2] - alpha[3],
            5 * alpha[0] + alpha[2] - 4 * alpha[3],
            4 * alpha[0] + alpha[2] - 3 * alpha[3] + a * a + b * b,
        ]
    )


def level_residual(u: Sequence[float], v: Sequence[float]) -> float:
    """‖f(u, v) − (0, −1, 0)‖_∞"""
    return float(np.max(np.abs(complete_intersection_f(u, v) - LEVEL)))


def jacobian(u: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """3×8 closed-form Jacobian, columns (u1..u4, v1..v4)."""
    u, v = _uv(u, v)
    u1, u2, u3, u4 = u
    v1, v2, v3, v4 = v
    a, b = _bilinear(u, v)

    d_alpha = np.zeros((4, 8))
    for k in range(4):
        d_alpha[k, k] = 2 * u[k]
        d_alpha[k, 4 + k] = 2 * v[k]
    d_a = np.array([u4, -u3, -u2, u1, -v4, v3, v2, -v1])
    d_b = np.array([v4, -v3, -v2, v1, u4, -u3, -u2, u1])

    j = np.empty((3, 8))
    j[0] = d_alpha[0] + d_alpha[1] - d_alpha[2] - d_alpha[3]
    j[1] = 5 * d_alpha[0] + d_alpha[2] - 4 * d_alpha[3]
    j[2] = 4 * d_alpha[0] + d_alpha[2] - 3 * d_alpha[3] + 2 * a * d_a + 2 * b * d_b
    return j


def jacobian_fd(
    u: Sequence[float], v: Sequence[float], step: Optional[float] = None
) -> np.ndarray:
    """Central differences"""
    step = settings.fd_step if step is None else step
    x = np.concatenate(_uv(u, v))
    j = np.empty((3, 8))
    for k in range(8):
        e = np.zeros(8)
        e[k] = step
        forward = complete_intersection_f((x + e)[:4], (x + e)[4:])
        backward = complete_intersection_f((x - e)[:4], (x - e)[4:])
        j[:, k] = (forward - backward) / (2 * step)
    return j


def jacobian_deviation(u: Sequence[float], v: Sequence[float]) -> float:
    return float(np.max(np.abs(jacobian(u, v) - jacobian_fd(u, v))))


def jacobian_rank(u: Sequence[float], v: Sequence[float], tol: Optional[float] = None) -> int:
    """Numerical rank: singular values above tol × the largest one."""
    tol = settings.tol_rank if tol is None else tol
    residual = level_residual(u, v)
    if residual > 1e-8:
        raise DomainError(f"point is not on the level set (0, −1, 0): residual {residual:.3e}")
    s = np.linalg.svd(jacobian(u, v), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))
