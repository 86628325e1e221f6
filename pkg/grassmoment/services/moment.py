"""
Moment maps μ̂, μ̃, μ and the linear map A
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from grassmoment.core.exceptions import DimensionMismatchError, DomainError
from grassmoment.models.geometry import (
    GrassmannPoint,
    RationalLike,
    RationalVector,
    TorusElement,
    WeightVector,
    format_rational,
    pair_list,
)
from grassmoment.services.exactgeom import exact_rank, solve_exact
from grassmoment.services.plucker import PointLike, as_coords, plucker_embed

logger = logging.getLogger(__name__)


def weight_vectors(n: int) -> List[WeightVector]:
    """Λ_I for all pairs in lexicographic order."""
    if n < 4:
        raise DomainError(f"weight vectors need n >= 4, got {n}")
    vectors = []
    for i, j in pair_list(n):
        entries = [0] * n
        entries[i] = entries[j] = 1
        vectors.append(WeightVector((i, j), tuple(entries)))
    return vectors


@lru_cache(maxsize=None)
def _weight_matrix(n: int) -> np.ndarray:
    matrix = np.array([w.entries for w in weight_vectors(n)], dtype=np.int64).T
    matrix.setflags(write=False)
    return matrix


def weight_matrix(n: int) -> np.ndarray:
    """n × C(n,2) integer matrix with columns Λ_I."""
    return _weight_matrix(n)


def _check_count(count: int, n: int) -> None:
    if count != n * (n - 1) // 2:
        raise DimensionMismatchError(f"expected C({n},2) = {n * (n - 1) // 2} entries, got {count}")


def mu_hat(z: PointLike) -> np.ndarray:
    """x_i = |z_i|² / ‖z‖²"""
    coords = as_coords(z)
    weights = np.abs(coords) ** 2
    total = weights.sum()
    if total == 0:
        raise DomainError("zero vector has no moment image")
    return weights / total


def mu_tilde(z: PointLike, n: int) -> np.ndarray:
    """Σ |z_I|² Λ_I with unit total weight."""
    coords = as_coords(z)
    _check_count(len(coords), n)
    return weight_matrix(n) @ mu_hat(coords)


def mu(L: Union[GrassmannPoint, np.ndarray], n: int) -> np.ndarray:
    """μ = μ̃ ∘ p"""
    return mu_tilde(plucker_embed(L), n)


def A_map(x: Union[RationalVector, Sequence[float], np.ndarray], n: int) -> Union[RationalVector, np.ndarray]:
    """Columns Λ_I applied to x. Exact when x is a RationalVector."""
    _check_count(len(x), n)
    if isinstance(x, RationalVector):
        return A_map_exact(x, n)
    return weight_matrix(n) @ np.asarray(x, dtype=float)


def A_map_exact(x: RationalVector, n: int) -> RationalVector:
    _check_count(len(x), n)
    matrix = weight_matrix(n)
    return RationalVector(
        tuple(
            sum((int(matrix[k, i]) * x[i] for i in range(len(x))), Fraction(0))
            for k in range(n)
        )
    )


def second_symmetric_power(t: TorusElement) -> np.ndarray:
    """(t_i t_j) for pairs I = (i, j) in lexicographic order."""
    return np.array([t.phases[i] * t.phases[j] for i, j in pair_list(len(t))])


@dataclass(frozen=True)
class AffineSolution:
    """A X = Y 的仿射解: x_k = const_k + Σ coeff_k[f] x_f"""

    n: int
    free: Tuple[int, ...]
    constant: Tuple[Fraction, ...]
    coefficients: Tuple[Tuple[Fraction, ...], ...]

    def evaluate(self, free_values: Sequence[RationalLike]) -> RationalVector:
        if len(free_values) != len(self.free):
            raise DimensionMismatchError("one value per free variable")
        values = [Fraction(v) for v in free_values]
        return RationalVector(
            tuple(
                c + sum((a * v for a, v in zip(coeffs, values)), Fraction(0))
                for c, coeffs in zip(self.constant, self.coefficients)
            )
        )

    def to_json(self) -> Dict[str, Dict[str, str]]:
        equations = {}
        for k, (c, coeffs) in enumerate(zip(self.constant, self.coefficients)):
            row = {"const": format_rational(c)}
            for f, a in zip(self.free, coeffs):
                row[f"x{f}"] = format_rational(a)
            equations[f"x{k}"] = row
        return equations


def solve_A_affine(Y: RationalVector, free: Tuple[int, ...] = (4, 5)) -> AffineSolution:
    """
    Exact solution of A X = Y with the coordinates in `free` left as parameters.

    For Y = (1/3, 5/9, 5/9, 5/9) this gives x0 = −1/9 + x5, x1 = −1/9 + x4,
    x2 = 5/9 − x4 − x5, x3 = 2/3 − x4 − x5.
    """
    n = len(Y)
    matrix = weight_matrix(n)
    columns = matrix.shape[1]
    if any(not 0 <= f < columns for f in free):
        raise DomainError(f"free indices must lie in [0, {columns})")
    bound = [k for k in range(columns) if k not in free]
    system = [[int(matrix[r, c]) for c in bound] for r in range(n)]
    if exact_rank(system) < len(bound):
        raise DomainError(f"free choice {free} leaves the bound variables underdetermined")

    particular = solve_exact(system, list(Y))
    if particular is None:
        raise DomainError("A X = Y has no solution")
    directions = []
    for f in free:
        column = solve_exact(system, [-int(matrix[r, f]) for r in range(n)])
        if column is None:
            raise DomainError(f"free index {f} cannot be eliminated")
        directions.append(column)

    constant: List[Fraction] = []
    coefficients: List[Tuple[Fraction, ...]] = []
    for k in range(columns):
        if k in free:
            constant.append(Fraction(0))
            coefficients.append(tuple(Fraction(int(k == f)) for f in free))
        else:
            position = bound.index(k)
            constant.append(particular[position])
            coefficients.append(tuple(d[position] for d in directions))
    return AffineSolution(n, tuple(free), tuple(constant), tuple(coefficients))
