"""The Khovanov-Seidel algebra A_{m-1}, B(m,1,0), its corner C_l and the map phi."""

from __future__ import annotations

from dataclasses import dataclass

from ..grading import RefinedGrading, epsilon_hom, epsilon
from ..pathalg import AlgebraError, AlgebraHom, Element, PresentedAlgebra, collapse_grading


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise AlgebraError(f"m must be an integer >= 2, got {m!r}")


def ks_arrow(a: int, b: int) -> str:
    return f"({a}|{b})"


def build_ks_algebra(m: int) -> PresentedAlgebra:
    """A_{m-1} tensor Z/2 on vertices 0..m-1; backward arrows have degree 1."""
    _check_m(m)
    arrows = []
    for i in range(m - 1):
        arrows.append((ks_arrow(i, i + 1), i, i + 1, 0))
        arrows.append((ks_arrow(i + 1, i), i + 1, i, 1))
    rules = []
    for i in range(1, m - 1):
        rules.append(([ks_arrow(i - 1, i), ks_arrow(i, i + 1)], None))
        rules.append(([ks_arrow(i + 1, i), ks_arrow(i, i - 1)], None))
        rules.append(([ks_arrow(i, i + 1), ks_arrow(i + 1, i)], [ks_arrow(i, i - 1), ks_arrow(i - 1, i)]))
    rules.append(([ks_arrow(0, 1), ks_arrow(1, 0)], None))
    return PresentedAlgebra(f"A{m - 1}", m, arrows, rules, 0, style="ks")


def build_b_algebra(m: int) -> PresentedAlgebra:
    """B(m,1,0): R_i from i-1 to i of degree tau_i/2, L_i back of degree beta_i/2."""
    _check_m(m)
    arrows = []
    for i in range(1, m + 1):
        arrows.append((f"R{i}", i - 1, i, RefinedGrading.tau(m, i, 0.5)))
        arrows.append((f"L{i}", i, i - 1, RefinedGrading.beta(m, i, 0.5)))
    rules = []
    for i in range(1, m):
        rules.append(([f"R{i}", f"R{i + 1}"], None))
        rules.append(([f"L{i + 1}", f"L{i}"], None))
    return PresentedAlgebra(f"B({m},1)", m + 1, arrows, rules, RefinedGrading.zero(2 * m))


def build_cl_algebra(m: int) -> PresentedAlgebra:
    """Corner of B(m,1,0) at vertices 0..m-1, with U_m = R_m L_m as a loop."""
    _check_m(m)
    arrows = []
    for i in range(1, m):
        arrows.append((f"R{i}", i - 1, i, RefinedGrading.tau(m, i, 0.5)))
        arrows.append((f"L{i}", i, i - 1, RefinedGrading.beta(m, i, 0.5)))
    arrows.append((f"U{m}", m - 1, m - 1, RefinedGrading.tau(m, m, 0.5) + RefinedGrading.beta(m, m, 0.5)))
    rules = []
    for i in range(1, m - 1):
        rules.append(([f"R{i}", f"R{i + 1}"], None))
        rules.append(([f"L{i + 1}", f"L{i}"], None))
    rules.append(([f"R{m - 1}", f"U{m}"], None))
    rules.append(([f"U{m}", f"L{m - 1}"], None))
    return PresentedAlgebra(f"Cl({m},1)", m, arrows, rules, RefinedGrading.zero(2 * m))


def u_element(alg: PresentedAlgebra, i: int) -> Element:
    """U_i = R_i L_i + L_i R_i, restricted to the vertices present in alg.

    In the corner algebra U_m is the loop generator itself.
    """
    names = alg.arrow_index
    if f"U{i}" in names:
        return alg.gen(f"U{i}")
    out = alg.zero()
    if f"R{i}" in names and f"L{i}" in names:
        out = alg.gen([f"R{i}", f"L{i}"]) + alg.gen([f"L{i}", f"R{i}"])
    return out


def u_sum(alg: PresentedAlgebra, m: int) -> Element:
    out = alg.zero()
    for i in range(1, m + 1):
        out = out + u_element(alg, i)
    return out


@dataclass(frozen=True)
class OSzAlgebras:
    m: int
    B: PresentedAlgebra
    Cl: PresentedAlgebra
    Clbot: PresentedAlgebra
    A: PresentedAlgebra
    phi: AlgebraHom


def build_phi(clbot: PresentedAlgebra, a: PresentedAlgebra, m: int) -> AlgebraHom:
    images = {}
    for i in range(1, m):
        images[f"R{i}"] = a.gen(ks_arrow(i - 1, i))
        images[f"L{i}"] = a.gen(ks_arrow(i, i - 1))
    images[f"U{m}"] = a.gen([ks_arrow(m - 1, m - 2), ks_arrow(m - 2, m - 1)])
    return AlgebraHom("phi", clbot, a, range(m), images)


def build_osz_algebras(m: int) -> OSzAlgebras:
    _check_m(m)
    B = build_b_algebra(m)
    Cl = build_cl_algebra(m)
    eps = epsilon_hom(m)
    Clbot = collapse_grading(Cl, eps, name=f"Clbot({m},1)")
    A = build_ks_algebra(m)
    return OSzAlgebras(m, B, Cl, Clbot, A, build_phi(Clbot, A, m))


__all__ = [
    "OSzAlgebras",
    "build_b_algebra",
    "build_cl_algebra",
    "build_ks_algebra",
    "build_osz_algebras",
    "build_phi",
    "epsilon",
    "ks_arrow",
    "u_element",
    "u_sum",
]
