"""
Fiber dimension by rank–nullity of the constraint differential on C^6 ≅ R^12
"""
from typing import Literal, Optional

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError
from grassmoment.models.geometry import FiberPoint
from grassmoment.services.fibers4.orbit import fiber_orbit
from grassmoment.services.moment import weight_matrix

FiberKind = Literal["mq7", "mq5"]


def _quadric_gradient(z: np.ndarray) -> np.ndarray:
    """∂/∂z_i of z0 z5 − z1 z4 + z2 z3"""
    return np.array([z[5], -z[4], z[3], z[2], -z[1], z[0]])


def constraint_differential(point: FiberPoint, kind: FiberKind = "mq7") -> np.ndarray:
    """
    Rows: g_k = Σ |z_i|² (Λ_{I_i}(k) − q_k) for k = 0..3, then ‖z‖²,
    then Re and Im of the quadric when kind is mq5. Columns (Re z, Im z).
    """
    if kind not in ("mq7", "mq5"):
        raise DomainError(f"tangent dimension is defined for mq7 and mq5, got {kind!r}")
    z = point.z / np.linalg.norm(point.z)
    q = fiber_orbit(point.orbit).q_floats
    shifted = weight_matrix(4) - q[:, np.newaxis]
    x, y = z.real, z.imag

    rows = [np.concatenate([2 * shifted[k] * x, 2 * shifted[k] * y]) for k in range(4)]
    rows.append(np.concatenate([2 * x, 2 * y]))
    if kind == "mq5":
        d = _quadric_gradient(z)
        rows.append(np.concatenate([d.real, -d.imag]))
        rows.append(np.concatenate([d.imag, d.real]))
    return np.array(rows)


def tangent_dimension(point: FiberPoint, kind: FiberKind = "mq7", tol: Optional[float] = None) -> int:
    """12 − rank − 1; the last 1 is the U(1) phase of the projective class."""
    tol = settings.tol_rank if tol is None else tol
    s = np.linalg.svd(constraint_differential(point, kind), compute_uv=False)
    rank = int(np.sum(s > tol * s[0]))
    return 12 - rank - 1
