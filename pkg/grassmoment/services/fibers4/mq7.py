"""
M_Q^7 ⊂ CP^5: the S^5 embedding f, the T^2-twisted parametrization h and its inverse
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DegenerateInputError, DomainError
from grassmoment.models.geometry import FiberPoint, MQ7Point, TorusElement
from grassmoment.services.fibers4.orbit import FIRST_ORBIT, FiberOrbit, fiber_orbit

logger = logging.getLogger(__name__)

SPHERE_RADIUS_SQ = 1.0 / 3.0
NINTH = 1.0 / 9.0
TWISTED = (3, 4, 5)

Sphere = Tuple[complex, complex, complex]


def sphere_residual(z0: complex, z1: complex, z2: complex) -> float:
    return abs(abs(z0) ** 2 + abs(z1) ** 2 + abs(z2) ** 2 - SPHERE_RADIUS_SQ)


def mq7_magnitudes(
    z0: complex, z1: complex, z2: complex, tol: Optional[float] = None
) -> Tuple[float, float, float]:
    """
    (|z3|, |z4|, |z5|) on the sphere |z0|²+|z1|²+|z2|² = 1/3:
    |z3|² = 4/9 − |z0|² − |z1|², |z4|² = |z1|² + 1/9, |z5|² = |z0|² + 1/9.
    """
    tol = settings.tol_constructive if tol is None else tol
    residual = sphere_residual(z0, z1, z2)
    if residual > tol:
        raise DomainError(f"point is off the sphere |z|² = 1/3 (residual {residual:.3e})")
    s0, s1 = abs(z0) ** 2, abs(z1) ** 2
    return (
        float(np.sqrt(max(4 * NINTH - s0 - s1, 0.0))),
        float(np.sqrt(s1 + NINTH)),
        float(np.sqrt(s0 + NINTH)),
    )


def mq7_magnitudes_closed_form(z0: complex, z1: complex, z2: complex) -> Tuple[float, float, float]:
    """Squares from the moment equations: ((a+b+4c)/3, (a+4b+c)/3, (4a+b+c)/3)."""
    a, b, c = abs(z0) ** 2, abs(z1) ** 2, abs(z2) ** 2
    return ((a + b + 4 * c) / 3, (a + 4 * b + c) / 3, (4 * a + b + c) / 3)


def to_fiber_normalization(
    z: np.ndarray, orbit: FiberOrbit = FIRST_ORBIT, fixed_index: int = 3
) -> np.ndarray:
    """Unit norm, and the anchor coordinate real positive."""
    z = np.asarray(z, dtype=complex)
    norm = np.linalg.norm(z)
    if norm == 0:
        raise DegenerateInputError("zero vector")
    anchor = z[orbit.position(fixed_index)]
    if abs(anchor) == 0:
        raise DegenerateInputError("anchor coordinate vanishes; not a fiber point")
    return z / norm * (abs(anchor) / anchor)


def _twisted_slots(fixed_index: int) -> Tuple[int, int]:
    if fixed_index not in TWISTED:
        raise DomainError(f"fixed index must be one of {TWISTED}, got {fixed_index}")
    return tuple(i for i in TWISTED if i != fixed_index)  # type: ignore[return-value]


def rho1(t4: complex, t5: complex, fixed_index: int = 3) -> np.ndarray:
    """T^2 → T^6, trivial except on the two twisted coordinates."""
    phases = np.ones(6, dtype=complex)
    first, second = _twisted_slots(fixed_index)
    phases[first], phases[second] = t4, t5
    return phases


def rho2(tau: TorusElement, fixed_index: int = 3) -> np.ndarray:
    """T^5 → T^6, (t1, t2, t3, 1, t4, t5) for the default fixed index."""
    if len(tau) != 5:
        raise DomainError("rho2 acts by a 5-torus")
    phases = np.ones(6, dtype=complex)
    phases[:3] = tau.phases[:3]
    first, second = _twisted_slots(fixed_index)
    phases[first], phases[second] = tau.phases[3], tau.phases[4]
    return phases


# ρ3(t1, t2, t3) = (t1, t1, t1, 1, t2, t3)
RHO3_WEIGHTS = np.array(
    [[1, 0, 0], [1, 0, 0], [1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=int
)


def rho3(tau: TorusElement) -> np.ndarray:
    """T^3 → T^6 acting freely on M_Q^7."""
    if len(tau) != 3:
        raise DomainError("rho3 acts by a 3-torus")
    return np.prod(tau.phases[np.newaxis, :] ** RHO3_WEIGHTS, axis=1)


def act_rho3(point: FiberPoint, tau: TorusElement) -> MQ7Point:
    """ρ3(τ) · z, taken in first-orbit coordinates."""
    orbit = fiber_orbit(point.orbit)
    z = orbit.pull(point.z) * rho3(tau)
    return MQ7Point(orbit.push(z), orbit.name)


def rho3_stabilizer_dim(point: FiberPoint, tol: Optional[float] = None) -> int:
    """Dimension of the ρ3-stabilizer of the projective class [z]."""
    tol = settings.tol_rank if tol is None else tol
    z = fiber_orbit(point.orbit).pull(point.z)
    z = z / np.linalg.norm(z)
    # 三个生成元加上射影相位
    generators = [1j * RHO3_WEIGHTS[:, k] * z for k in range(3)] + [1j * z]
    matrix = np.array([np.concatenate([g.real, g.imag]) for g in generators])
    s = np.linalg.svd(matrix, compute_uv=False)
    return 4 - int(np.sum(s > tol * s[0]))


def lift_f(z0: complex, z1: complex, z2: complex, orbit: FiberOrbit = FIRST_ORBIT) -> MQ7Point:
    """f(z0, z1, z2) = (z0 : z1 : z2 : |z3| : |z4| : |z5|)"""
    m3, m4, m5 = mq7_magnitudes(z0, z1, z2)
    z = np.array([z0, z1, z2, m3, m4, m5], dtype=complex)
    return MQ7Point(orbit.push(z), orbit.name)


def h_param(
    sphere: Sphere,
    t4: complex,
    t5: complex,
    orbit: FiberOrbit = FIRST_ORBIT,
    fixed_index: int = 3,
) -> MQ7Point:
    """h = ρ1(t4, t5) · f(z0, z1, z2)"""
    if max(abs(abs(t4) - 1), abs(abs(t5) - 1)) > settings.tol_identity:
        raise DomainError("twist phases must have unit modulus")
    m3, m4, m5 = mq7_magnitudes(*sphere)
    z = np.array([*sphere, m3, m4, m5], dtype=complex) * rho1(t4, t5, fixed_index)
    return MQ7Point(orbit.push(z), orbit.name)


@dataclass(frozen=True)
class HPreimage:
    sphere: Sphere
    t4: complex
    t5: complex

    def as_array(self) -> np.ndarray:
        return np.array([*self.sphere, self.t4, self.t5], dtype=complex)


def h_preimage(point: MQ7Point, fixed_index: int = 3) -> HPreimage:
    """Read (z0, z1, z2) and the two twist phases off a fiber point."""
    orbit = fiber_orbit(point.orbit)
    z = to_fiber_normalization(orbit.pull(point.z), FIRST_ORBIT, fixed_index)
    first, second = _twisted_slots(fixed_index)
    if min(abs(z[first]), abs(z[second])) <= settings.tol_zero:
        raise DegenerateInputError("twisted coordinate vanishes; not an M_Q^7 point")
    return HPreimage(
        sphere=(complex(z[0]), complex(z[1]), complex(z[2])),
        t4=complex(z[first] / abs(z[first])),
        t5=complex(z[second] / abs(z[second])),
    )


def sample_sphere(rng: np.random.Generator) -> Sphere:
    """Uniform point of the sphere |z|² = 1/3 in C^3."""
    gaussian = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    gaussian *= np.sqrt(SPHERE_RADIUS_SQ) / np.linalg.norm(gaussian)
    return (complex(gaussian[0]), complex(gaussian[1]), complex(gaussian[2]))


def sample_mq7(
    rng: np.random.Generator, orbit: FiberOrbit = FIRST_ORBIT
) -> Tuple[MQ7Point, Sphere, TorusElement]:
    sphere = sample_sphere(rng)
    twist = TorusElement.random(2, rng)
    return h_param(sphere, twist[0], twist[1], orbit), sphere, twist


@dataclass(frozen=True)
class TorusRealisation:
    """T^5 在 M_Q^7 上的一种实现：fixed_index 保持实正"""

    fixed_index: int
    twisted: Tuple[int, int]


def s5_orbit_variants() -> Tuple[TorusRealisation, ...]:
    return tuple(TorusRealisation(f, _twisted_slots(f)) for f in TWISTED)
