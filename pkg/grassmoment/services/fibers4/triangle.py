"""
The triangle P = μ̂(M_Q^7) and the curve relation on its edges
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError
from grassmoment.models.geometry import RationalLike, RationalVector
from grassmoment.services.fibers4.orbit import Q_FIRST
from grassmoment.services.moment import AffineSolution, A_map_exact, solve_A_affine

F = Fraction

X01 = RationalVector((0, 0, F(1, 3), F(4, 9), F(1, 9), F(1, 9)))
X02 = RationalVector((0, F(1, 3), 0, F(1, 9), F(4, 9), F(1, 9)))
X12 = RationalVector((F(1, 3), 0, 0, F(1, 9), F(1, 9), F(4, 9)))

# μ̂ of the three fiber circles
X0 = RationalVector((0, F(1, 6), F(1, 6), F(5, 18), F(5, 18), F(1, 9)))
X1 = RationalVector((F(1, 6), 0, F(1, 6), F(5, 18), F(1, 9), F(5, 18)))
X2 = RationalVector((F(1, 6), F(1, 6), 0, F(1, 9), F(5, 18), F(5, 18)))
CURVE_POINTS = (X0, X1, X2)


def triangle_point(x0: RationalLike, x1: RationalLike) -> RationalVector:
    """x2 = 1/3 − x0 − x1, x3 = 4/9 − x0 − x1, x4 = 1/9 + x1, x5 = 1/9 + x0"""
    a, b = F(x0), F(x1)
    return RationalVector((a, b, F(1, 3) - a - b, F(4, 9) - a - b, F(1, 9) + b, F(1, 9) + a))


@dataclass(frozen=True)
class TriangleEdge:
    """边 I_k = {x_k = 0}"""

    name: str
    vanishing: int
    endpoints: Tuple[str, str]

    def point_at(self, t: RationalLike) -> RationalVector:
        """I0 is parametrized by x1, I1 and I2 by x0."""
        t = F(t)
        if not 0 <= t <= F(1, 3):
            raise DomainError(f"edge parameter {t} outside [0, 1/3]")
        if self.vanishing == 0:
            return triangle_point(0, t)
        if self.vanishing == 1:
            return triangle_point(t, 0)
        return triangle_point(t, F(1, 3) - t)


EDGES = (
    TriangleEdge("I0", 0, ("X01", "X02")),
    TriangleEdge("I1", 1, ("X01", "X12")),
    TriangleEdge("I2", 2, ("X02", "X12")),
)


@dataclass(frozen=True)
class TriangleDescription:
    equations: AffineSolution
    edges: Tuple[TriangleEdge, ...]
    vertices: Dict[str, RationalVector]

    def to_json(self) -> Dict[str, object]:
        return {
            "equations": self.equations.to_json(),
            "edges": [
                {"name": e.name, "vanishing": f"x{e.vanishing}", "endpoints": list(e.endpoints)}
                for e in self.edges
            ],
            "vertices": {name: v.to_json() for name, v in self.vertices.items()},
        }


def solve_triangle_P() -> TriangleDescription:
    """Exact affine solution of A X = Q, the three edges and the three vertices."""
    equations = solve_A_affine(Q_FIRST, free=(4, 5))
    ninth = F(1, 9)
    # 顶点: 两条边同时为零
    vertices = {
        "X01": equations.evaluate((ninth, ninth)),
        "X02": equations.evaluate((F(4, 9), ninth)),
        "X12": equations.evaluate((ninth, F(4, 9))),
    }
    return TriangleDescription(equations, EDGES, vertices)


def _curve_terms(x0: float, x1: float) -> Tuple[float, float, float]:
    tol = settings.tol_identity
    if x0 < -tol or x1 < -tol or x0 + x1 > 1.0 / 3.0 + tol:
        raise DomainError(f"(x0, x1) = ({x0}, {x1}) lies outside the triangle")
    rest = 1.0 / 3.0 - x0 - x1
    r0 = np.sqrt(max(x0 * (x0 + 1.0 / 9.0), 0.0))
    c = np.sqrt(max(rest * (rest + 1.0 / 9.0), 0.0))
    r1 = np.sqrt(max(x1 * (x1 + 1.0 / 9.0), 0.0))
    return float(r0), float(c), float(r1)


def curve_Pprime_residual(x0: float, x1: float) -> float:
    """|√(x0(x0+1/9)) + √((1/3−x0−x1)(4/9−x0−x1)) − √(x1(x1+1/9))|, as printed."""
    r0, c, r1 = _curve_terms(x0, x1)
    return abs(r0 + c - r1)


def modulus_relation_residual(x0: float, x1: float) -> float:
    """min over signs of |±R0 ± C − R1|; vanishes at all three edge points X0, X1, X2."""
    r0, c, r1 = _curve_terms(x0, x1)
    return min(abs(s0 * r0 + s2 * c - r1) for s0 in (1, -1) for s2 in (1, -1))


def p_prime_feasible(x0: float, x1: float, tol: float = 0.0) -> bool:
    """Phase closure R0 e^{iα} + C = R1 e^{iβ} is possible: |R0 − C| ≤ R1 ≤ R0 + C."""
    r0, c, r1 = _curve_terms(x0, x1)
    return abs(r0 - c) - tol <= r1 <= r0 + c + tol


def vertex_images() -> List[RationalVector]:
    return [A_map_exact(v, 4) for v in (X01, X02, X12)]
