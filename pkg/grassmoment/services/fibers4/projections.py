"""
Projections of M^2 and M^3 onto CP^1, CP^2 and S^3
"""
from typing import Union

import numpy as np

from grassmoment.core.exceptions import DegenerateInputError, DimensionMismatchError
from grassmoment.models.geometry import M2Point, M3Point, ProjectivePoint

SurfacePoint = Union[M2Point, M3Point]

DEGENERATE_TOL = 1e-14


def _products(point: SurfacePoint) -> np.ndarray:
    """(z1|z4|, z0|z5|, z2|z3|)"""
    m3, m4, m5 = point.magnitudes()
    return np.array([point.z1 * m4, point.z0 * m5, point.z2 * m3], dtype=complex)


def proj_p(point: SurfacePoint) -> ProjectivePoint:
    """p = (z1|z4| : z0|z5|)"""
    c = _products(point)[:2]
    if np.max(np.abs(c)) < DEGENERATE_TOL:
        raise DegenerateInputError("both CP^1 coordinates vanish")
    return ProjectivePoint(c)


def hopf_q(point: M3Point) -> ProjectivePoint:
    """q = (z1|z4| : z0|z5| : z2|z3|), on the line c0 − c1 − c2 = 0"""
    return ProjectivePoint(_products(point))


def line_residual(c: ProjectivePoint) -> float:
    if len(c) != 3:
        raise DimensionMismatchError("line residual is defined on CP^2")
    return float(abs(c.coords[0] - c.coords[1] - c.coords[2]))


def phi_line(c: ProjectivePoint) -> ProjectivePoint:
    """φ(c : c′) = (c : c′ : c − c′)"""
    if len(c) != 2:
        raise DimensionMismatchError("φ is defined on CP^1")
    a, b = c.coords
    return ProjectivePoint(np.array([a, b, a - b]))


def g_tilde(c: ProjectivePoint) -> ProjectivePoint:
    """(c : c′ : c − c′) ↦ (c : c′)"""
    if len(c) != 3:
        raise DimensionMismatchError("g̃ is defined on CP^2")
    return ProjectivePoint(c.coords[:2])


def g_map(point: M3Point) -> np.ndarray:
    """(z1 a(z1), z0 a(z0)) on the unit sphere S^3, a(z) = √(1/9 + |z|²)"""
    c = _products(point)[:2]
    norm = np.linalg.norm(c)
    if norm < DEGENERATE_TOL:
        raise DegenerateInputError("g is undefined at the origin")
    return c / norm
