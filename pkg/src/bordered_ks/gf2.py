"""GF(2) linear algebra on int bitsets (bit j of a row is column j)."""

from __future__ import annotations

from typing import Iterable


class EchelonBasis:
    """Incrementally maintained reduced basis of a GF(2) row space."""

    def __init__(self, rows: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self.pivots.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert v; return True if it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[int]) -> int:
    return EchelonBasis(rows).rank


def in_span(v: int, rows: Iterable[int]) -> bool:
    return v in EchelonBasis(rows)


def kernel(columns: list[int]) -> list[int]:
    """Basis of {x : sum_j x_j * columns[j] = 0}, as bitsets over column indices."""
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for j, col in enumerate(columns):
        combo = 1 << j
        v = col
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                break
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
        if v:
            pivots[v.bit_length() - 1] = (v, combo)
        else:
            out.append(combo)
    return out
