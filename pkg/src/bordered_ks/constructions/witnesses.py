"""Explicit maps relating Rest_phi R_i, its reduced model Z and ^phi Induct P^i_l.

``h`` and ``h'`` are nonzero only in arity two, with inputs U_i, R_i U_i,
U_{i+1}, L_{i+1} U_{i+1} (positive) or U_i, L_i U_i, U_{i+1}, R_{i+1} U_{i+1}
(negative).  The lemma maps (f, g, T) act on generators only: they compare
the underlying type D structures, and are checked with no algebra inputs.
Entries that mention a generator absent for i = m-1 are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dastruct import (
    DABimodule,
    DAMorphism,
    Reduction,
    Restricted,
    TableMorphism,
    Transferred,
    input_pool,
    nonzero_arrows,
    reduce,
)
from ..pathalg import Path, PresentedAlgebra
from .algebras import OSzAlgebras
from .crossing import build_induced_crossing, s_gen
from .ks import build_rest_R, idem_gen
from .symbolic import evaluate


def _gen(alg: PresentedAlgebra, i: int, path: str) -> str:
    return f"<({i})x{path}>"


def generator_map(m: int, i: int, sign: str) -> dict[str, str]:
    """Names of Z (or Z') generators -> names of ^phi Induct P (or N) generators."""
    pairs = {idem_gen(j): s_gen(j) for j in range(m) if j != i}
    pairs[f"<({i})x({i}|{i - 1})>"] = "W"
    if i + 1 <= m - 1:
        pairs[f"<({i})x({i}|{i + 1})>"] = "E"
    if sign == "pos":
        pairs[f"<({i})x({i}|{i - 1}|{i})>"] = "N"
    else:
        pairs[f"<({i})x({i})>"] = "N"
    return pairs


def _word(alg: PresentedAlgebra, start: int, text: str, i: int) -> Path | None:
    e = evaluate(alg, start, text, {"i": i})
    return next(iter(e.terms)) if len(e.terms) == 1 else None


def _table(name, X: DABimodule, Y: DABimodule, rows, i: int) -> TableMorphism:
    """rows: (source, input word, output KS path, target) with index words in i."""
    arrows = []
    for x, word, out, y in rows:
        if x not in X.gen or y not in Y.gen:
            continue
        a = _word(X.in_alg, X.gen[x].right, word, i)
        if a is None:
            continue
        arrows.append((x, (a,), X.out_alg.parse_path(out), y))
    return TableMorphism(name, X, Y, arrows)


def h_rows(m: int, i: int, sign: str):
    """h_2 for Z -> Ind (first) and h'_2 for Ind -> Z (second), as word rows."""
    lo, hi = f"({i - 1}|{i})", f"({i + 1}|{i})"
    if sign == "pos":
        loop = f"<({i})x({i}|{i - 1}|{i})>"
        h = [
            (idem_gen(i - 1), f"U{{i}}", lo, "W"),
            (idem_gen(i - 1), f"R{{i}} U{{i}}", lo, "N"),
            (idem_gen(i + 1), f"U{{i+1}}", hi, "E"),
            (idem_gen(i + 1), f"L{{i+1}} U{{i+1}}", hi, "N"),
        ]
        hp = [
            (s_gen(i - 1), f"U{{i}}", lo, f"<({i})x({i}|{i - 1})>"),
            (s_gen(i - 1), f"R{{i}} U{{i}}", lo, loop),
            (s_gen(i + 1), f"U{{i+1}}", hi, f"<({i})x({i}|{i + 1})>"),
            (s_gen(i + 1), f"L{{i+1}} U{{i+1}}", hi, loop),
        ]
        return h, hp
    down, up = f"({i}|{i - 1})", f"({i}|{i + 1})"
    unit = f"<({i})x({i})>"
    h = [
        (f"<({i})x({i}|{i - 1})>", f"U{{i}}", down, s_gen(i - 1)),
        (unit, f"L{{i}} U{{i}}", down, s_gen(i - 1)),
        (f"<({i})x({i}|{i + 1})>", f"U{{i+1}}", up, s_gen(i + 1)),
        (unit, f"R{{i+1}} U{{i+1}}", up, s_gen(i + 1)),
    ]
    hp = [
        ("W", f"U{{i}}", down, idem_gen(i - 1)),
        ("N", f"L{{i}} U{{i}}", down, idem_gen(i - 1)),
        ("E", f"U{{i+1}}", up, idem_gen(i + 1)),
        ("N", f"R{{i+1}} U{{i+1}}", up, idem_gen(i + 1)),
    ]
    return h, hp


def lemma_maps(rest: Restricted, Z: DABimodule, i: int, sign: str):
    """The generator-level (f, g, T) between Z and Rest_phi R_i (or primed)."""
    A = rest.out_alg
    loop_path = A.parse_path(f"({i}|{i - 1}|{i})")
    loop, unit = f"<({i})x({i}|{i - 1}|{i})>", f"<({i})x({i})>"
    f_rows = [(x.name, (), Path(x.left), x.name) for x in Z.gens]
    g_rows = [(x.name, (), Path(x.left), x.name) for x in Z.gens]
    if sign == "pos":
        f_rows.append((loop, (), loop_path, unit))
        T_rows = [(idem_gen(i), (), Path(i), unit)]
    else:
        g_rows.append((loop, (), loop_path, unit))
        T_rows = [(loop, (), Path(i), idem_gen(i))]
    f = TableMorphism("f", Z, rest, f_rows)
    g = TableMorphism("g", rest, Z, g_rows)
    T = TableMorphism("T", rest, rest, T_rows, degree=1)
    return f, g, T


@dataclass
class Witnesses:
    m: int
    i: int
    sign: str
    rest: Restricted
    reduction: Reduction
    Z: DABimodule
    induced: DABimodule
    iota: DAMorphism
    h: DAMorphism
    iota_p: DAMorphism
    h_p: DAMorphism
    f: DAMorphism
    g: DAMorphism
    T: DAMorphism

    @property
    def forward(self) -> DAMorphism:
        return self.iota + self.h

    @property
    def backward(self) -> DAMorphism:
        return self.iota_p + self.h_p

    @property
    def generic(self) -> bool:
        return self.i < self.m - 1


def build_theorem_witnesses(algs: OSzAlgebras, i: int, sign: str = "pos", depth_limit: int = 16) -> Witnesses:
    m = algs.m
    rest = build_rest_R(algs, i, sign)
    red = reduce(rest, depth_limit=depth_limit)
    Z = red.result
    ind = build_induced_crossing(algs, i, sign)
    pairs = generator_map(m, i, sign)
    if set(pairs) != set(Z.gen) or set(pairs.values()) != set(ind.gen):
        raise ValueError(f"generator correspondence failed: {sorted(Z.gen)} vs {sorted(ind.gen)}")
    iota = TableMorphism("iota", Z, ind, [(x, (), Path(Z.gen[x].left), y) for x, y in pairs.items()])
    iota_p = TableMorphism("iota'", ind, Z, [(y, (), Path(Z.gen[x].left), x) for x, y in pairs.items()])
    h_spec, hp_spec = h_rows(m, i, sign)
    h = _table("h", Z, ind, h_spec, i)
    h_p = _table("h'", ind, Z, hp_spec, i)
    f, g, T = lemma_maps(rest, Z, i, sign)
    return Witnesses(m, i, sign, rest, red, Z, ind, iota, h, iota_p, h_p, f, g, T)


def lemma_model(W: Witnesses, depth_limit: int = 16) -> Transferred:
    """Z rebuilt from Rest_phi R_i by transferring along the lemma maps."""
    f1 = {x: W.f.apply(x, ()) for x in W.Z.gen}
    g1 = {w: W.g.apply(w, ()) for w in W.rest.gen}
    T1 = {w: W.T.apply(w, ()) for w in W.rest.gen}
    return Transferred(W.rest, [g.name for g in W.Z.gens], f1, g1, T1,
                       name=f"{W.rest.name}|lemma", depth_limit=depth_limit)


def transferred_arrow_counts(W: Witnesses, max_inputs=3, basis_len=4, k_max=0, u_elements=()) -> dict[int, int]:
    """Arrows of Z absent from Rest_phi R_i, counted by j in delta^1_j.

    An arrow is the class (source, target, output, arity); different input
    sequences with the same class count once.
    """
    pool = input_pool(W.Z.in_alg, basis_len, u_elements, k_max)
    old = {(x, y, out, len(seq)) for x, seq, out, y in nonzero_arrows(W.rest, max_inputs, pool)}
    new = {(x, y, out, len(seq)) for x, seq, out, y in nonzero_arrows(W.Z, max_inputs, pool)} - old
    counts: dict[int, int] = {}
    for *_, n in new:
        counts[n + 1] = counts.get(n + 1, 0) + 1
    return dict(sorted(counts.items()))
