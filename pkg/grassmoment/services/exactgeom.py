"""
Exact rational linear algebra, hyperplane arrangements and convex membership

Everything here runs on fractions.Fraction. Chamber membership is a zero test,
so no float ever enters this module.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

from grassmoment.core.exceptions import DimensionMismatchError, DomainError
from grassmoment.models.geometry import (
    Hyperplane,
    RationalLike,
    RationalVector,
    SignVector,
)

logger = logging.getLogger(__name__)

Matrix = Sequence[Sequence[RationalLike]]


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def row_reduce(matrix: Matrix) -> Tuple[List[List[Fraction]], List[int]]:
    """高斯-约当消元，返回 (RREF, 主元列)"""
    rows = [[Fraction(v) for v in row] for row in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise DimensionMismatchError("ragged matrix")

    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def exact_rank(matrix: Matrix) -> int:
    return len(row_reduce(matrix)[1])


def exact_determinant(matrix: Matrix) -> Fraction:
    """行列式（分数消元）"""
    rows = [[Fraction(v) for v in row] for row in matrix]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise DimensionMismatchError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(size):
        pivot = next((i for i in range(c, size) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, size):
            if rows[i][c] != 0:
                factor = rows[i][c] / rows[c][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
    return det


def solve_exact(matrix: Matrix, rhs: Sequence[RationalLike]) -> Optional[List[Fraction]]:
    """Solve M x = b exactly; free variables are set to zero. None if inconsistent."""
    if len(matrix) != len(rhs):
        raise DimensionMismatchError("right-hand side length differs from row count")
    ncols = len(matrix[0]) if matrix else 0
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_reduce(augmented)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for row, col in zip(reduced, pivots):
        solution[col] = row[-1]
    return solution


def exact_inverse(matrix: Matrix) -> List[List[Fraction]]:
    size = len(matrix)
    if exact_rank(matrix) < size:
        raise DomainError("matrix is singular")
    columns = []
    for k in range(size):
        unit = [Fraction(int(i == k)) for i in range(size)]
        columns.append(solve_exact(matrix, unit))
    return [[columns[j][i] for j in range(size)] for i in range(size)]


def parse_rational_vector(text: str) -> RationalVector:
    """Parse "1/3,5/9,5/9,5/9"."""
    try:
        return RationalVector(tuple(Fraction(part.strip()) for part in text.split(",")))
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot parse rational vector {text!r}: {e}") from e


def arrangement_for_n(n: int) -> List[Hyperplane]:
    """All hyperplanes Σ_{i∈T} x_i = 1 with 2 ≤ |T| ≤ ⌊n/2⌋, in canonical order."""
    if n < 4:
        raise DomainError(f"arrangement needs n >= 4, got {n}")
    planes = []
    everything = set(range(n))
    for size in range(2, n // 2 + 1):
        for support in combinations(range(n), size):
            if 2 * size == n:
                complement = tuple(sorted(everything - set(support)))
                # 补集在 Σx=2 上定义同一超平面
                if complement < support:
                    continue
            planes.append(Hyperplane(support, n))
    return sorted(planes, key=Hyperplane.sort_key)


def sign_vector(x: RationalVector, arrangement: Sequence[Hyperplane]) -> SignVector:
    """Entry k is sign(Σ_{i∈T_k} x_i − 1)."""
    return SignVector(tuple(_sign(h.evaluate(x)) for h in arrangement))


def affine_rank(points: Sequence[RationalVector]) -> int:
    """Rank of {v − v0}."""
    if not points:
        raise DomainError("affine rank of an empty set")
    base = points[0]
    differences = [list(v - base) for v in points[1:]]
    if not differences:
        return 0
    return exact_rank(differences)


@dataclass(frozen=True)
class Member:
    weights: RationalVector

    @property
    def is_member(self) -> bool:
        return True


@dataclass(frozen=True)
class NotMember:
    @property
    def is_member(self) -> bool:
        return False


Membership = Union[Member, NotMember]


def convex_membership(x: RationalVector, points: Sequence[RationalVector]) -> Membership:
    """
    Exact test of x ∈ conv(points).

    Enumerates affinely independent subsets by increasing size (Carathéodory)
    and solves the barycentric system of each one exactly.
    """
    if any(len(p) != len(x) for p in points):
        raise DimensionMismatchError("membership test on vectors of different lengths")
    if not points:
        return NotMember()

    target = list(x) + [Fraction(1)]
    lifted = [list(p) + [Fraction(1)] for p in points]
    dim = len(target)

    for size in range(1, min(len(points), dim) + 1):
        for subset in combinations(range(len(points)), size):
            system = [[lifted[j][i] for j in subset] for i in range(dim)]
            if exact_rank(system) < size:
                continue
            weights = solve_exact(system, target)
            if weights is None or any(w < 0 for w in weights):
                continue
            full = [Fraction(0)] * len(points)
            for j, w in zip(subset, weights):
                full[j] = w
            return Member(RationalVector(tuple(full)))
    return NotMember()
