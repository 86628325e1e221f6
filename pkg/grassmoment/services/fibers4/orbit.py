"""
The chamber orbits of Δ(4,2) and the coordinate maps relating their fibers

Every fiber is built in the coordinates of the first orbit point
Q = (1/3, 5/9, 5/9, 5/9) and carried to its chamber by a signed permutation
of the Plücker coordinates. The second orbit point Q⁺ = (2/3, 4/9, 4/9, 4/9)
uses the involution z0↔z3, z1↔z4, z2↔z5; the remaining six chamber points
come from column permutations of G(4,2) applied on top of these two.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from grassmoment.core.exceptions import CertificateError, DomainError
from grassmoment.models.geometry import RationalVector
from grassmoment.services.regularity import chamber_orbit_points

logger = logging.getLogger(__name__)

Q_FIRST = RationalVector((Fraction(1, 3), Fraction(5, 9), Fraction(5, 9), Fraction(5, 9)))
Q_SECOND = RationalVector((Fraction(2, 3), Fraction(4, 9), Fraction(4, 9), Fraction(4, 9)))

PAIRS = tuple(combinations(range(4), 2))
ORBIT_NAMES = ("first", "second", "C-1", "C-2", "C-3", "C+1", "C+2", "C+3")


def plucker_permutation(columns: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Slot permutation and signs induced on Plücker coordinates by L ↦ L[:, columns]."""
    if sorted(columns) != [0, 1, 2, 3]:
        raise DomainError(f"{tuple(columns)} is not a permutation of four columns")
    slots, signs = [], []
    for i, j in PAIRS:
        a, b = columns[i], columns[j]
        slots.append(PAIRS.index((min(a, b), max(a, b))))
        signs.append(1 if a < b else -1)
    return tuple(slots), tuple(signs)


@dataclass(frozen=True)
class FiberOrbit:
    """纤维所在的胞腔点；push 把第一轨道坐标搬到本胞腔"""

    name: str
    q: RationalVector
    permutation: Tuple[int, ...]
    signs: Tuple[int, ...] = (1, 1, 1, 1, 1, 1)
    chamber_orbit: str = "C-"
    columns: Tuple[int, ...] = (0, 1, 2, 3)

    def push(self, z: np.ndarray) -> np.ndarray:
        """w[i] = signs[i] · z[permutation[i]]"""
        z = np.asarray(z, dtype=complex)
        return np.array(self.signs, dtype=complex) * z[list(self.permutation)]

    def pull(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex) * np.array(self.signs, dtype=complex)
        return w[np.argsort(self.permutation)]

    def position(self, index: int) -> int:
        """Where first-orbit coordinate `index` sits after push."""
        return self.permutation.index(index)

    def permuted(self, name: str, columns: Sequence[int]) -> "FiberOrbit":
        """Compose with the column permutation L ↦ L[:, columns]; Q becomes Q[columns]."""
        slots, signs = plucker_permutation(columns)
        return FiberOrbit(
            name=name,
            q=self.q.permuted(columns),
            permutation=tuple(self.permutation[s] for s in slots),
            signs=tuple(sign * self.signs[s] for sign, s in zip(signs, slots)),
            chamber_orbit=self.chamber_orbit,
            columns=tuple(self.columns[c] for c in columns),
        )

    @property
    def q_floats(self) -> np.ndarray:
        return self.q.as_floats()

    def to_json(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "q": self.q.to_json(),
            "chamber_orbit": self.chamber_orbit,
            "permutation": list(self.permutation),
            "signs": list(self.signs),
        }


FIRST_ORBIT = FiberOrbit("first", Q_FIRST, (0, 1, 2, 3, 4, 5))
# z0↔z3, z1↔z4, z2↔z5
SECOND_ORBIT = FiberOrbit("second", Q_SECOND, (3, 4, 5, 0, 1, 2), chamber_orbit="C+")


def _column_permutation(source: RationalVector, target: RationalVector) -> Optional[Tuple[int, ...]]:
    """Lexicographically first permutation with source[columns] == target."""
    return next((p for p in permutations(range(4)) if source.permuted(p) == target), None)


@lru_cache(maxsize=None)
def chamber_fiber_orbits() -> Tuple[FiberOrbit, ...]:
    """One fiber per chamber point of the C- and C+ orbits, eight in all."""
    orbits = []
    for base in (FIRST_ORBIT, SECOND_ORBIT):
        count = 0
        for point in chamber_orbit_points(base.chamber_orbit):
            if point == base.q:
                orbits.append(base)
                continue
            columns = _column_permutation(base.q, point)
            if columns is None:
                raise CertificateError(f"{point.to_json()} is not a permutation of {base.q.to_json()}")
            count += 1
            orbits.append(base.permuted(f"{base.chamber_orbit}{count}", columns))
    if sorted(o.name for o in orbits) != sorted(ORBIT_NAMES):
        raise CertificateError(f"expected 8 chamber fibers, got {[o.name for o in orbits]}")
    logger.debug(f"Built {len(orbits)} chamber fibers")
    return tuple(orbits)


def fiber_orbit(name: str) -> FiberOrbit:
    if name == FIRST_ORBIT.name:
        return FIRST_ORBIT
    if name == SECOND_ORBIT.name:
        return SECOND_ORBIT
    for orbit in chamber_fiber_orbits():
        if orbit.name == name:
            return orbit
    raise DomainError(f"unknown fiber orbit {name!r}; use one of {', '.join(ORBIT_NAMES)}")
