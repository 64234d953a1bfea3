"""Refined multi-Alexander gradings and the homomorphisms between grading groups.

Coordinates are stored as integers scaled by ``SCALE`` so that the half-integer
algebra degrees and the quarter-integer Alexander shifts are both exact.
A refined grading for ``m`` strands has ``2m`` coordinates ordered
``(tau_1, ..., tau_m, beta_1, ..., beta_m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

SCALE = 4


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingVector:
    """A vector in a free abelian grading group, stored times ``SCALE``."""

    scaled: tuple[int, ...]

    @classmethod
    def zero(cls, dim: int) -> GradingVector:
        return cls((0,) * dim)

    @classmethod
    def from_values(cls, values: Sequence[Fraction | int]) -> GradingVector:
        scaled = []
        for v in values:
            s = Fraction(v) * SCALE
            if s.denominator != 1:
                raise GradingError(f"{v} is not a multiple of 1/{SCALE}")
            scaled.append(int(s))
        return cls(tuple(scaled))

    @property
    def dim(self) -> int:
        return len(self.scaled)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, SCALE) for c in self.scaled)

    def _check(self, other: GradingVector) -> None:
        if not isinstance(other, GradingVector) or other.dim != self.dim:
            raise GradingError("dimension mismatch")

    def __add__(self, other: GradingVector) -> GradingVector:
        self._check(other)
        return type(self)(tuple(a + b for a, b in zip(self.scaled, other.scaled)))

    def __sub__(self, other: GradingVector) -> GradingVector:
        self._check(other)
        return type(self)(tuple(a - b for a, b in zip(self.scaled, other.scaled)))

    def __neg__(self) -> GradingVector:
        return type(self)(tuple(-a for a in self.scaled))

    def denominator(self) -> int:
        """Smallest d dividing SCALE with every coordinate in (1/d)Z."""
        for d in (1, 2, 4):
            if all((c * d) % SCALE == 0 for c in self.scaled):
                return d
        raise AssertionError("unreachable")


class RefinedGrading(GradingVector):
    """Element of Q<tau_1..tau_m, beta_1..beta_m>."""

    @property
    def m(self) -> int:
        return self.dim // 2

    @classmethod
    def tau(cls, m: int, i: int, coeff: Fraction | int = 1) -> RefinedGrading:
        return cls._basis(m, i - 1, coeff)

    @classmethod
    def beta(cls, m: int, i: int, coeff: Fraction | int = 1) -> RefinedGrading:
        return cls._basis(m, m + i - 1, coeff)

    @classmethod
    def _basis(cls, m: int, pos: int, coeff) -> RefinedGrading:
        if not 0 <= pos < 2 * m:
            raise GradingError("strand index out of range")
        vals = [0] * (2 * m)
        vals[pos] = coeff
        return cls.from_values(vals)

    def __str__(self) -> str:
        m = self.m
        parts = []
        for pos, c in enumerate(self.values()):
            if c:
                name = f"t{pos + 1}" if pos < m else f"b{pos - m + 1}"
                parts.append(f"{c}*{name}")
        return " + ".join(parts) or "0"


class AlexanderGrading(GradingVector):
    """Element of Q<e_1..e_m>."""

    @classmethod
    def e(cls, m: int, i: int, coeff: Fraction | int = 1) -> AlexanderGrading:
        vals = [0] * m
        vals[i - 1] = coeff
        return cls.from_values(vals)


@dataclass(frozen=True)
class GradingHom:
    """Integer linear map between scaled grading groups.

    ``target`` is one of ``"refined"``, ``"alexander"`` or ``"integer"``.
    Integer targets are one-dimensional and must land on whole numbers.
    """

    name: str
    matrix: tuple[tuple[int, ...], ...]
    source_dim: int
    target: str = "refined"

    @property
    def target_dim(self) -> int:
        return len(self.matrix)

    def __call__(self, g):
        return apply_hom(self, g)

    def compose(self, first: GradingHom) -> GradingHom:
        """The map ``self o first``."""
        if first.target_dim != self.source_dim:
            raise GradingError("cannot compose: dimension mismatch")
        rows = tuple(
            tuple(
                sum(row[k] * first.matrix[k][j] for k in range(self.source_dim))
                for j in range(first.source_dim)
            )
            for row in self.matrix
        )
        return GradingHom(f"{self.name}*{first.name}", rows, first.source_dim, self.target)


_TARGET_TYPES = {"refined": RefinedGrading, "alexander": AlexanderGrading}


def apply_hom(h: GradingHom, g):
    if isinstance(g, int):
        if h.source_dim != 1:
            raise GradingError("integer grading fed to a multi-dimensional hom")
        g = GradingVector((g * SCALE,))
    if g.dim != h.source_dim:
        raise GradingError(f"{h.name} expects dimension {h.source_dim}, got {g.dim}")
    out = tuple(sum(a * b for a, b in zip(row, g.scaled)) for row in h.matrix)
    if h.target == "integer":
        if out[0] % SCALE:
            raise GradingError(f"{h.name} image {Fraction(out[0], SCALE)} is not integral")
        return out[0] // SCALE
    return _TARGET_TYPES.get(h.target, GradingVector)(out)


def identity_hom(dim: int, target: str = "refined") -> GradingHom:
    rows = tuple(tuple(int(r == c) for c in range(dim)) for r in range(dim))
    return GradingHom("id", rows, dim, target)


def integer_identity() -> GradingHom:
    return GradingHom("id", ((1,),), 1, "integer")


def swap_hom(m: int, i: int) -> GradingHom:
    """tau_i <-> tau_{i+1}, beta_i <-> beta_{i+1}, identity elsewhere."""
    if not 1 <= i < m:
        raise GradingError("swap index out of range")
    perm = list(range(2 * m))
    for off in (0, m):
        perm[off + i - 1], perm[off + i] = perm[off + i], perm[off + i - 1]
    rows = tuple(tuple(int(perm[c] == r) for c in range(2 * m)) for r in range(2 * m))
    return GradingHom(f"swap{i}", rows, 2 * m)


def alexander_swap_hom(m: int, i: int) -> GradingHom:
    if not 1 <= i < m:
        raise GradingError("swap index out of range")
    perm = list(range(m))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    rows = tuple(tuple(int(perm[c] == r) for c in range(m)) for r in range(m))
    return GradingHom(f"eswap{i}", rows, m, "alexander")


def eta_hom(m: int) -> GradingHom:
    rows = tuple(
        tuple(int(c % m == r) for c in range(2 * m)) for r in range(m)
    )
    return GradingHom("eta", rows, 2 * m, "alexander")


def epsilon_hom(m: int) -> GradingHom:
    return GradingHom("epsilon", ((0,) * m + (2,) * m,), 2 * m, "integer")


def eta(g: RefinedGrading) -> AlexanderGrading:
    if g.dim % 2:
        raise GradingError("refined gradings have even dimension")
    return apply_hom(eta_hom(g.dim // 2), g)


def epsilon(g: RefinedGrading) -> int:
    if g.dim % 2:
        raise GradingError("refined gradings have even dimension")
    return apply_hom(epsilon_hom(g.dim // 2), g)


def crossing_alexander_shift(m: int, i: int, positive: bool) -> AlexanderGrading:
    """The shift -(e_i+e_{i+1})/4 (positive) or +(e_i+e_{i+1})/4 (negative)."""
    q = Fraction(-1 if positive else 1, 4)
    return AlexanderGrading.e(m, i, q) + AlexanderGrading.e(m, i + 1, q)
