"""DA bimodules R_i and R'_i for Khovanov-Seidel crossing complexes."""

from __future__ import annotations

from ..dastruct import Gen, Restricted, TableBimodule
from ..pathalg import AlgebraError, Path, PresentedAlgebra
from .algebras import build_ks_algebra


def idem_gen(j: int) -> str:
    return f"<({j})>"


def module_gen(alg: PresentedAlgebra, i: int, a: Path) -> str:
    return f"<({i})x{alg.path_str(a)}>"


def build_R(m: int, i: int, sign: str = "pos", alg: PresentedAlgebra | None = None) -> TableBimodule:
    """The bimodule R_i (sign "pos") or R'_i (sign "neg") over (A_{m-1}, A_{m-1}).

    Generators are <(j)> for every vertex and <(i) x a> for each basis
    path a of the right projective (i)A.  Homological degrees are the
    negatives of the Khovanov-Seidel complex degrees.
    """
    if sign not in ("pos", "neg"):
        raise ValueError("sign must be 'pos' or 'neg'")
    alg = alg or build_ks_algebra(m)
    if not 1 <= i <= m - 1:
        raise AlgebraError(f"crossing index {i} out of range for m={m}")
    pos = sign == "pos"
    basis = [p for p in alg.basis(4)]
    iP = [p for p in basis if p.start == i]
    gens = [Gen(idem_gen(j), j, j, 0, 0) for j in range(m)]
    for a in iP:
        deg = alg.degree(a)
        gens.append(Gen(module_gen(alg, i, a), i, alg.end(a), 1 if pos else -1, deg if pos else deg - 1))
    arrows = []
    positive = [b for b in basis if b.arrows]
    for b in positive:
        arrows.append((idem_gen(b.start), (b,), b, idem_gen(alg.end(b))))
    for a in iP:
        for b in positive:
            ab = alg.mul_paths(a, b)
            if ab is not None:
                arrows.append((module_gen(alg, i, a), (b,), Path(i), module_gen(alg, i, ab)))
    if pos:
        for a in iP:
            arrows.append((module_gen(alg, i, a), (), a, idem_gen(alg.end(a))))
    else:
        loop = alg.parse_path(f"({i}|{i - 1}|{i})")
        if i - 1 >= 0:
            arrows.append((idem_gen(i - 1), (), alg.parse_path(f"({i - 1}|{i})"),
                           module_gen(alg, i, alg.parse_path(f"({i}|{i - 1})"))))
        if i + 1 <= m - 1:
            arrows.append((idem_gen(i + 1), (), alg.parse_path(f"({i + 1}|{i})"),
                           module_gen(alg, i, alg.parse_path(f"({i}|{i + 1})"))))
        arrows.append((idem_gen(i), (), loop, module_gen(alg, i, Path(i))))
        arrows.append((idem_gen(i), (), Path(i), module_gen(alg, i, loop)))
    name = f"R{i}" if pos else f"R'{i}"
    return TableBimodule(name, alg, alg, gens, arrows=arrows, metadata={"m": m, "i": i, "sign": sign})


def build_rest_R(algs, i: int, sign: str = "pos") -> Restricted:
    """Rest_phi of R_i or R'_i, over (A_{m-1}, Cl^bot)."""
    R = build_R(algs.m, i, sign, alg=algs.A)
    return Restricted(algs.phi, R, name=f"Rest({R.name})")
