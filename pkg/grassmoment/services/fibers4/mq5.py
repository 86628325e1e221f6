"""
M_Q^5 = M_Q^7 ∩ G_{4,2}

The surface M^2, its circle orbit M^3, the two parametrizations
F: M^2 × T^3 → M_Q^5 and G: M^3 × T^2 → M_Q^5 with their inverses,
and the three torus-orbit circles over the edge points X0, X1, X2.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError, NoSolutionError, SamplingError
from grassmoment.models.geometry import M2Point, M3Point, MQ5Point, RationalVector, TorusElement
from grassmoment.services.fibers4.mq7 import NINTH, to_fiber_normalization
from grassmoment.services.fibers4.orbit import FIRST_ORBIT, FiberOrbit, fiber_orbit
from grassmoment.services.fibers4.triangle import X0, X1, X2

logger = logging.getLogger(__name__)

SIXTH_ROOT = 1.0 / np.sqrt(6.0)
EDGE_MODULUS = np.sqrt(5.0 / 18.0)


def surface_residual(z0: complex, z1: complex, z2: complex) -> float:
    """|z0 √(|z0|²+1/9) + z2 |z3| − z1 √(|z1|²+1/9)| with |z3|² = 4/9 − |z0|² − |z1|²"""
    s0, s1 = abs(z0) ** 2, abs(z1) ** 2
    m3 = np.sqrt(max(4 * NINTH - s0 - s1, 0.0))
    return float(abs(z0 * np.sqrt(s0 + NINTH) + z2 * m3 - z1 * np.sqrt(s1 + NINTH)))


def _require_surface(z0: complex, z1: complex, z2: complex) -> None:
    residual = surface_residual(z0, z1, z2)
    if residual > settings.tol_constructive:
        raise DomainError(f"point is off the surface (residual {residual:.3e})")


def m2_sample(r0: float, r1: float, branch: int = 1) -> M2Point:
    """
    Close R0 e^{iα} + C = R1 e^{iβ} by the law of cosines.

    R0 = r0 |z5|, R1 = r1 |z4|, C = |z2| |z3|; `branch` picks the sign of sin α.
    """
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    if r0 < 0 or r1 < 0:
        raise DomainError("moduli must be nonnegative")
    s0, s1 = r0 * r0, r1 * r1
    rest = 1.0 / 3.0 - s0 - s1
    if rest < -settings.tol_constructive:
        raise DomainError(f"r0² + r1² = {s0 + s1:.6f} exceeds 1/3")
    # 圆周上 rest 只剩舍入误差
    modulus2 = float(np.sqrt(rest)) if rest > settings.tol_identity else 0.0
    m3 = np.sqrt(max(4 * NINTH - s0 - s1, 0.0))
    m4, m5 = np.sqrt(s1 + NINTH), np.sqrt(s0 + NINTH)
    big_r0, big_r1, c = r0 * m5, r1 * m4, modulus2 * m3

    if big_r0 * c <= settings.tol_constructive:
        # 共线退化
        if abs(big_r1 - (big_r0 + c)) > settings.tol_constructive:
            raise NoSolutionError(f"no phase closure for r0={r0}, r1={r1}")
        alpha = 0.0
    else:
        cos_alpha = (big_r1**2 - big_r0**2 - c**2) / (2 * big_r0 * c)
        if abs(cos_alpha) > 1 + 1e-9:
            raise NoSolutionError(f"no phase closure for r0={r0}, r1={r1} (cos α = {cos_alpha:.6f})")
        if abs(abs(cos_alpha) - 1) <= settings.tol_identity:
            # 共线三角形
            cos_alpha = float(np.sign(cos_alpha))
        alpha = branch * float(np.arccos(np.clip(cos_alpha, -1.0, 1.0)))

    z0 = r0 * np.exp(1j * alpha)
    z1 = (z0 * m5 + c) / m4
    return M2Point(complex(z0), complex(z1), float(modulus2))


def _draw_moduli(rng: np.random.Generator) -> Tuple[float, float]:
    s0, s1, _ = rng.dirichlet((1.0, 1.0, 1.0)) / 3.0
    return float(np.sqrt(s0)), float(np.sqrt(s1))


def sample_m2_keyed(rng: np.random.Generator) -> Tuple[M2Point, Tuple[float, float, int]]:
    """Rejection sampling over the moduli that admit a phase closure, keyed by (r0, r1, branch)."""
    for _ in range(settings.sampler_max_rejections):
        r0, r1 = _draw_moduli(rng)
        branch = 1 if rng.random() < 0.5 else -1
        try:
            return m2_sample(r0, r1, branch), (r0, r1, branch)
        except NoSolutionError:
            continue
    raise SamplingError(
        f"no M^2 point after {settings.sampler_max_rejections} rejections"
    )


def sample_m2(rng: np.random.Generator) -> M2Point:
    return sample_m2_keyed(rng)[0]


def m3_sample(rng: np.random.Generator) -> M3Point:
    """M^3 = S^1 · M^2"""
    m2 = sample_m2(rng)
    phase = np.exp(1j * rng.uniform(0.0, 2 * np.pi))
    return rotate_m2(m2, complex(phase))


def rotate_m2(m2: M2Point, phase: complex) -> M3Point:
    return M3Point(m2.z0, m2.z1, complex(m2.z2)).rotated(phase)


def rho_f(t: TorusElement) -> np.ndarray:
    """(t1, t2, t3, 1, t3/t2, t3/t1)"""
    if len(t) != 3:
        raise DomainError("F is parametrized by a 3-torus")
    t1, t2, t3 = t[0], t[1], t[2]
    return np.array([t1, t2, t3, 1.0, t3 / t2, t3 / t1], dtype=complex)


def F_param(m2: M2Point, t: TorusElement, orbit: FiberOrbit = FIRST_ORBIT) -> MQ5Point:
    """F(m2, t) = ρ(t) · (z0 : z1 : |z2| : |z3| : |z4| : |z5|)"""
    if m2.z2 < 0:
        raise DomainError("M^2 points carry z2 real nonnegative")
    _require_surface(m2.z0, m2.z1, m2.z2)
    z = m2.coords() * rho_f(t)
    return MQ5Point(orbit.push(z), orbit.name)


def F_preimage(point: MQ5Point) -> Tuple[M2Point, TorusElement]:
    orbit = fiber_orbit(point.orbit)
    z = to_fiber_normalization(orbit.pull(point.z))
    phase4 = z[4] / abs(z[4])
    phase5 = z[5] / abs(z[5])
    if abs(z[2]) > settings.tol_zero:
        t3 = z[2] / abs(z[2])
    else:
        t3 = 1.0 + 0j
    t1 = t3 / phase5
    t2 = t3 / phase4
    m2 = M2Point(complex(z[0] / t1), complex(z[1] / t2), float(abs(z[2])))
    return m2, TorusElement(np.array([t1, t2, t3], dtype=complex))


def G_param(
    m3: M3Point, t1: complex, t2: complex, orbit: FiberOrbit = FIRST_ORBIT
) -> MQ5Point:
    """G(m3, t1, t2) = (t1 z0 : t2 z1 : z2 : |z3| : |z4|/t2 : |z5|/t1)"""
    t = TorusElement(np.array([t1, t2], dtype=complex))
    _require_surface(m3.z0, m3.z1, m3.z2)
    phases = np.array([t[0], t[1], 1.0, 1.0, 1.0 / t[1], 1.0 / t[0]], dtype=complex)
    return MQ5Point(orbit.push(m3.coords() * phases), orbit.name)


def G_preimage(point: MQ5Point) -> Tuple[M3Point, TorusElement]:
    """t1 = e^{−iψ5}, t2 = e^{−iψ4}"""
    orbit = fiber_orbit(point.orbit)
    z = to_fiber_normalization(orbit.pull(point.z))
    t1 = abs(z[5]) / z[5]
    t2 = abs(z[4]) / z[4]
    m3 = M3Point(complex(z[0] / t1), complex(z[1] / t2), complex(z[2]))
    return m3, TorusElement(np.array([t1, t2], dtype=complex))


@dataclass(frozen=True)
class FiberCircle:
    """M_{Q,i}: T^3 轨道，μ̂ 取值 X_i"""

    name: str
    base: Tuple[float, ...]
    exponents: Tuple[Tuple[int, int, int], ...]
    target: RationalVector

    def point(self, tau: TorusElement, orbit: FiberOrbit = FIRST_ORBIT) -> MQ5Point:
        if len(tau) != 3:
            raise DomainError("fiber circles are T^3 orbits")
        powers = np.prod(tau.phases[np.newaxis, :] ** np.array(self.exponents), axis=1)
        z = np.array(self.base, dtype=complex) * powers
        return MQ5Point(orbit.push(to_fiber_normalization(z)), orbit.name)

    def base_point(self, orbit: FiberOrbit = FIRST_ORBIT) -> MQ5Point:
        return self.point(TorusElement.identity(3), orbit)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "base": [float(b) for b in self.base],
            "exponents": [list(row) for row in self.exponents],
            "target": self.target.to_json(),
        }


MQ0 = FiberCircle(
    "M_Q0",
    (0.0, SIXTH_ROOT, SIXTH_ROOT, EDGE_MODULUS, EDGE_MODULUS, 1.0 / 3.0),
    ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0), (-1, 0, 0), (0, 0, 1)),
    X0,
)
# z0 < 0 keeps the base on the quadric
MQ1 = FiberCircle(
    "M_Q1",
    (-SIXTH_ROOT, 0.0, SIXTH_ROOT, EDGE_MODULUS, 1.0 / 3.0, EDGE_MODULUS),
    ((1, 0, 0), (0, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (-1, 0, 0)),
    X1,
)
MQ2 = FiberCircle(
    "M_Q2",
    (SIXTH_ROOT, SIXTH_ROOT, 0.0, 1.0 / 3.0, EDGE_MODULUS, EDGE_MODULUS),
    ((1, 0, 0), (0, 1, 0), (0, 0, 0), (0, 0, 1), (0, -1, 0), (-1, 0, 0)),
    X2,
)


def mq5_fiber_circles() -> Tuple[FiberCircle, FiberCircle, FiberCircle]:
    return MQ0, MQ1, MQ2


def sample_mq5(
    rng: np.random.Generator, index: int = 0, orbit: FiberOrbit = FIRST_ORBIT
) -> MQ5Point:
    """Even indices go through F, odd ones through G."""
    if index % 2 == 0:
        return F_param(sample_m2(rng), TorusElement.random(3, rng), orbit)
    twist = TorusElement.random(2, rng)
    return G_param(m3_sample(rng), twist[0], twist[1], orbit)
