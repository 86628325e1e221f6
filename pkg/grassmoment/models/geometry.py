"""
Value types for exact and numerical geometry

Exact types (RationalVector, Hyperplane, SignVector) never touch floating point.
Numerical types wrap numpy complex arrays and validate their invariants on construction.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from grassmoment.core.config import settings
from grassmoment.core.exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    DomainError,
)

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def format_rational(value: Fraction) -> str:
    """Render "p/q", or "p" for integers."""
    return str(Fraction(value))


def _to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise DomainError("floats are not accepted as exact rationals")
    return Fraction(value)


@dataclass(frozen=True)
class RationalVector:
    """有理向量"""

    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(_to_rational(e) for e in self.entries))

    @classmethod
    def of(cls, *values: RationalLike) -> "RationalVector":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def _check(self, other: "RationalVector") -> None:
        if len(other) != len(self):
            raise DimensionMismatchError(
                f"vector lengths differ: {len(self)} vs {len(other)}"
            )

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(a - b for a, b in zip(self, other)))

    def __mul__(self, scalar: RationalLike) -> "RationalVector":
        q = _to_rational(scalar)
        return RationalVector(tuple(q * a for a in self))

    __rmul__ = __mul__

    def dot(self, other: "RationalVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def permuted(self, perm: Sequence[int]) -> "RationalVector":
        """y[i] = x[perm[i]]"""
        return RationalVector(tuple(self.entries[p] for p in perm))

    def as_floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries])

    def to_json(self) -> List[str]:
        return [format_rational(e) for e in self.entries]


@dataclass(frozen=True)
class Hyperplane:
    """超平面 Σ_{i∈T} x_i = 1，support 为 0 起始下标"""

    support: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        size = len(self.support)
        if not 2 <= size <= self.n // 2:
            raise DomainError(f"support size {size} outside [2, {self.n // 2}]")
        if len(set(self.support)) != size or not all(0 <= i < self.n for i in self.support):
            raise DomainError(f"invalid support {self.support} for n={self.n}")
        object.__setattr__(self, "support", tuple(sorted(self.support)))

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.support), self.support)

    def evaluate(self, x: RationalVector) -> Fraction:
        """Σ_{i∈T} x_i − 1"""
        if len(x) != self.n:
            raise DimensionMismatchError(f"point of length {len(x)} against n={self.n}")
        return sum((x[i] for i in self.support), Fraction(0)) - 1

    @property
    def label(self) -> str:
        return "+".join(f"x{i + 1}" for i in self.support) + "=1"


@dataclass(frozen=True)
class SignVector:
    """超平面排列上的符号向量（胞腔标识）"""

    signs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise DomainError(f"sign entries must be in {{-1, 0, 1}}: {self.signs}")

    @property
    def is_strict(self) -> bool:
        return 0 not in self.signs

    @property
    def label(self) -> str:
        return "[" + ",".join(str(s) for s in self.signs) + "]"

    def __len__(self) -> int:
        return len(self.signs)


def pair_list(n: int) -> List[Tuple[int, int]]:
    """All pairs i<j of {0..n-1} in lexicographic order."""
    return list(combinations(range(n), 2))


def n_from_coordinate_count(count: int) -> int:
    """Solve C(n,2) = count for n."""
    n = int(round((1 + np.sqrt(1 + 8 * count)) / 2))
    if n * (n - 1) // 2 != count:
        raise DimensionMismatchError(f"{count} is not a binomial coefficient C(n,2)")
    return n


@dataclass(frozen=True)
class StratumSupport:
    """层的支撑集 σ ⊆ {0..N}"""

    sigma: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if not self.sigma:
            raise DomainError("stratum support must be nonempty")
        size = self.n * (self.n - 1) // 2
        if not all(0 <= i < size for i in self.sigma):
            raise DomainError(f"support indices must lie in [0, {size})")
        object.__setattr__(self, "sigma", tuple(sorted(set(self.sigma))))

    @classmethod
    def from_pairs(cls, labels: Sequence[str], n: int) -> "StratumSupport":
        """From 1-based pair labels such as "12", "45"."""
        pairs = pair_list(n)
        indices = []
        for label in labels:
            pair = (int(label[0]) - 1, int(label[1]) - 1)
            if pair not in pairs:
                raise DomainError(f"unknown pair label {label!r} for n={n}")
            indices.append(pairs.index(pair))
        return cls(tuple(indices), n)


def _as_complex_array(values: Sequence[complex], name: str) -> np.ndarray:
    array = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} has non-finite entries")
    return array


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """射影点，始终保持规范归一化"""

    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = _as_complex_array(self.coords, "projective point")
        object.__setattr__(self, "coords", canonical_normalize(coords))

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def n(self) -> int:
        return n_from_coordinate_count(len(self.coords))

    def to_json(self) -> List[List[float]]:
        return complex_vector_json(self.coords)


def canonical_normalize(coords: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Unit norm with the first nonzero coordinate real positive."""
    tol = settings.tol_identity if tol is None else tol
    coords = np.asarray(coords, dtype=complex)
    norm = np.linalg.norm(coords)
    if norm == 0:
        raise DegenerateInputError("all homogeneous coordinates vanish")
    coords = coords / norm
    nonzero = np.flatnonzero(np.abs(coords) > tol)
    lead = coords[nonzero[0]] if len(nonzero) else coords[np.argmax(np.abs(coords))]
    return coords * (abs(lead) / lead)


def complex_vector_json(values: Sequence[complex]) -> List[List[float]]:
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """2×n 复矩阵，秩为 2"""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = _as_complex_array(self.matrix, "Grassmann matrix")
        if matrix.ndim != 2 or matrix.shape[0] != 2 or matrix.shape[1] < 2:
            raise DimensionMismatchError(f"expected a 2×n matrix, got shape {matrix.shape}")
        scale = float(np.max(np.abs(matrix))) ** 2
        largest = max(
            abs(matrix[0, i] * matrix[1, j] - matrix[0, j] * matrix[1, i])
            for i, j in pair_list(matrix.shape[1])
        )
        if scale == 0 or largest <= settings.tol_rank_certify * scale:
            raise DegenerateInputError("matrix does not have rank 2")
        object.__setattr__(self, "matrix", matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ChartCoords4:
    """坐标卡 M23 上的仿射坐标 a1..a4"""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    @classmethod
    def from_array(cls, values: Sequence[complex]) -> "ChartCoords4":
        if len(values) != 4:
            raise DimensionMismatchError("chart coordinates need four entries")
        return cls(*(complex(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4], dtype=complex)

    def real_split(self) -> Tuple[np.ndarray, np.ndarray]:
        """(u, v) with a_k = u_k + i v_k"""
        array = self.as_array()
        return array.real.copy(), array.imag.copy()


@dataclass(frozen=True, eq=False)
class TorusElement:
    """环面元素，各分量模为 1"""

    phases: np.ndarray

    def __post_init__(self) -> None:
        phases = _as_complex_array(self.phases, "torus element")
        if phases.ndim != 1:
            raise DimensionMismatchError("torus element must be a flat vector")
        if np.any(np.abs(np.abs(phases) - 1) > settings.tol_identity):
            raise DomainError("torus components must have unit modulus")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_angles(cls, angles: Sequence[float]) -> "TorusElement":
        return cls(np.exp(1j * np.asarray(angles, dtype=float)))

    @classmethod
    def identity(cls, size: int) -> "TorusElement":
        return cls(np.ones(size, dtype=complex))

    @classmethod
    def random(cls, size: int, rng: np.random.Generator) -> "TorusElement":
        return cls.from_angles(rng.uniform(0.0, 2 * np.pi, size))

    def __len__(self) -> int:
        return len(self.phases)

    def __getitem__(self, index: int) -> complex:
        return complex(self.phases[index])


@dataclass(frozen=True)
class TransitionMatrix:
    """作用在 T^3 指数上的整数矩阵"""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if any(len(r) != len(self.rows) for r in self.rows):
            raise DimensionMismatchError("transition matrix must be square")
        if abs(self.determinant()) != 1:
            raise DomainError("transition matrix must be unimodular")

    def determinant(self) -> int:
        from grassmoment.services.exactgeom import exact_determinant

        return int(exact_determinant(self.rows))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=int)


@dataclass(frozen=True)
class WeightVector:
    """权向量 Λ_I"""

    pair: Tuple[int, int]
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.entries) != [0] * (len(self.entries) - 2) + [1, 1]:
            raise DomainError("a weight vector has exactly two ones")

    @property
    def label(self) -> str:
        return f"{self.pair[0] + 1}{self.pair[1] + 1}"

    def as_rational(self) -> RationalVector:
        return RationalVector(self.entries)


# n=4 纤维点

@dataclass(frozen=True, eq=False)
class M2Point:
    """M^2 上的点：z2 取非负实数"""

    z0: complex
    z1: complex
    z2: float

    def magnitudes(self) -> Tuple[float, float, float]:
        from grassmoment.services.fibers4.mq7 import mq7_magnitudes

        return mq7_magnitudes(self.z0, self.z1, self.z2)

    def coords(self) -> np.ndarray:
        m3, m4, m5 = self.magnitudes()
        return np.array([self.z0, self.z1, self.z2, m3, m4, m5], dtype=complex)


@dataclass(frozen=True, eq=False)
class M3Point:
    """M^3 = M^2 的 S^1 轨道"""

    z0: complex
    z1: complex
    z2: complex

    def magnitudes(self) -> Tuple[float, float, float]:
        from grassmoment.services.fibers4.mq7 import mq7_magnitudes

        return mq7_magnitudes(self.z0, self.z1, self.z2)

    def coords(self) -> np.ndarray:
        m3, m4, m5 = self.magnitudes()
        return np.array([self.z0, self.z1, self.z2, m3, m4, m5], dtype=complex)

    def rotated(self, phase: complex) -> "M3Point":
        return M3Point(phase * self.z0, phase * self.z1, phase * self.z2)


@dataclass(frozen=True, eq=False)
class FiberPoint:
    """纤维上的点，坐标为纤维归一化代表元"""

    z: np.ndarray
    orbit: str = "first"

    def __post_init__(self) -> None:
        z = _as_complex_array(self.z, "fiber point")
        if z.shape != (6,):
            raise DimensionMismatchError("fiber points live in CP^5")
        object.__setattr__(self, "z", z)

    def projective(self) -> ProjectivePoint:
        return ProjectivePoint(self.z)


class MQ7Point(FiberPoint):
    """M_Q^7 ⊂ CP^5 上的点"""


class MQ5Point(FiberPoint):
    """M_Q^5 = M_Q^7 ∩ G_{4,2} 上的点"""
