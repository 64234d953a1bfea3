"""Ozsvath-Szabo crossing bimodules P^i_l and N^i_l over the truncated algebra C_l.

The arrow tables live in ``data/crossing_positive.json``; the negative
crossing is produced from them by reversing every arrow, exchanging R and L,
and reversing the order of the two inputs of each delta^1_3 arrow.  The
i = m-1 case deletes the generators that would sit at the missing vertex m.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ..dastruct import DAError, Family, Gen, Induced, Passthrough, Regraded, TableBimodule
from ..grading import (
    RefinedGrading,
    crossing_alexander_shift,
    epsilon,
    identity_hom,
    integer_identity,
    swap_hom,
)
from ..pathalg import AlgebraError, Path, PresentedAlgebra
from .algebras import build_cl_algebra, u_element
from .symbolic import evaluate, has_power, parse_word, single_path

DATA_FILE = "crossing_positive.json"


def s_gen(j: int) -> str:
    return f"S({j})"


def decorated_alias(name: str, left: int, right: int) -> str:
    """Label in the decorated ``_(left)X^(right)`` style."""
    base = name.split("(")[0]
    return f"_({left}){base}^({right})"


@lru_cache(maxsize=None)
def load_table() -> dict:
    text = resources.files(__package__).joinpath("data", DATA_FILE).read_text()
    return json.loads(text)


def _swap_word(word: str) -> str:
    return word.translate(str.maketrans("RL", "LR"))


def negative_table(table: dict) -> dict:
    """Apply the reversal rule to the positive arrow table."""
    arrows = []
    for a in table["arrows"]:
        inputs = [_swap_word(w) for w in a["inputs"]]
        if len(inputs) == 2:
            inputs.reverse()
        arrows.append({
            "source": a["target"],
            "target": a["source"],
            "out": _swap_word(a["out"]),
            "inputs": inputs,
        })
    gens = {
        n: {"left": g["left"], "right": g["right"], "hom": -g["hom"], "grading": None}
        for n, g in table["generators"].items()
    }
    return {"sign": "neg", "generators": gens, "s_generator": table["s_generator"], "arrows": arrows}


def _index(expr: str, i: int) -> int:
    return parse_word(f"R{{{expr}}}", {"i": i})[0][1]


def _gen_name(label: str, i: int) -> str:
    if label.startswith("S{"):
        return s_gen(_index(label[2:-1], i))
    return label


def _grading(m: int, i: int, spec: dict) -> RefinedGrading:
    g = RefinedGrading.zero(2 * m)
    for key, coeff in spec.items():
        kind, expr = key.split("{", 1)
        j = _index(expr[:-1], i)
        make = RefinedGrading.tau if kind == "tau" else RefinedGrading.beta
        g = g + make(m, j, Fraction(coeff))
    return g


def _eval_inputs(alg: PresentedAlgebra, v: int, words, env, k: int):
    seq = []
    for w in words:
        p = single_path(evaluate(alg, v, w, env, k))
        if p is None:
            return None
        seq.append(p)
        v = alg.end(p)
    return tuple(seq)


def _family(alg, src, tgt, gens, a, env) -> Family | None:
    words = a["inputs"]
    slot = next(n for n, w in enumerate(words) if has_power(w))
    u_in = [j for _, j, powered in parse_word(words[slot], env) if powered]
    u_out = [j for _, j, powered in parse_word(a["out"], env) if powered]
    inputs = _eval_inputs(alg, gens[src][1], words, env, 0)
    out = single_path(evaluate(alg, gens[src][0], a["out"], env, 0))
    if inputs is None or out is None:
        return None
    return Family(
        src, tgt, out, inputs, slot,
        u_element(alg, u_out[0]) if u_out else alg.one(),
        u_element(alg, u_in[0]),
    )


def _propagate_gradings(m, i, alg, gens, arrows, hom_in, known):
    """Solve gr(y) = gr(x) + sum hom_in(deg inputs) - deg(out) along arrows."""
    known = dict(known)
    changed = True
    while changed:
        changed = False
        for src, seq, out, tgt in arrows:
            shift = -alg.degree(out)
            for p in seq:
                shift = shift + hom_in(alg.degree(p))
            if src in known and tgt not in known:
                known[tgt] = known[src] + shift
                changed = True
            elif tgt in known and src not in known:
                known[src] = known[tgt] - shift
                changed = True
    missing = set(gens) - set(known)
    if missing:
        raise DAError(f"cannot determine gradings of {sorted(missing)}")
    return known


def build_crossing(m: int, i: int, sign: str = "pos", alg: PresentedAlgebra | None = None) -> TableBimodule:
    """P^i_l (sign "pos") or N^i_l (sign "neg") over (C_l(m), C_l(m)), refined gradings."""
    if sign not in ("pos", "neg"):
        raise ValueError("sign must be 'pos' or 'neg'")
    if not 1 <= i <= m - 1:
        raise AlgebraError(f"crossing index {i} out of range for m={m}")
    alg = alg or build_cl_algebra(m)
    table = load_table()
    if sign == "neg":
        table = negative_table(table)
    env = {"i": i}

    # generator idempotents; names pointing at a missing vertex are deleted
    gens: dict[str, tuple[int, int]] = {s_gen(j): (j, j) for j in range(m) if j != i}
    for name, g in table["generators"].items():
        left, right = _index(g["left"], i), _index(g["right"], i)
        if 0 <= left < m and 0 <= right < m:
            gens[name] = (left, right)

    hom_in = swap_hom(m, i)
    arrows, families = [], []
    for a in table["arrows"]:
        src, tgt = _gen_name(a["source"], i), _gen_name(a["target"], i)
        if src not in gens or tgt not in gens:
            continue
        if any(has_power(w) for w in a["inputs"]):
            f = _family(alg, src, tgt, gens, a, env)
            if f is not None:
                families.append(f)
            continue
        seq = _eval_inputs(alg, gens[src][1], a["inputs"], env, 0)
        out = single_path(evaluate(alg, gens[src][0], a["out"], env, 0))
        if seq is not None and out is not None:
            arrows.append((src, seq, out, tgt))

    zero = RefinedGrading.zero(2 * m)
    s_hom = table["s_generator"]["hom"]
    known = {n: _grading(m, i, table["s_generator"]["grading"]) for n in gens if n.startswith("S(")}
    homs = {n: s_hom for n in known}
    for name, g in table["generators"].items():
        if name in gens:
            homs[name] = g["hom"]
            if g["grading"] is not None:
                known[name] = _grading(m, i, g["grading"])
    samples = arrows + [(f.source, f.inputs, f.out, f.target) for f in families]
    gradings = _propagate_gradings(m, i, alg, gens, samples, hom_in, known)

    gen_list = [
        Gen(n, l, r, homs[n], gradings.get(n, zero)) for n, (l, r) in sorted(gens.items())
    ]
    passthrough = Passthrough(tuple((j, s_gen(j)) for j in range(m) if j != i), i)
    name = f"P{i}" if sign == "pos" else f"N{i}"
    metadata = {
        "m": m,
        "i": i,
        "sign": sign,
        "alexander_shift": crossing_alexander_shift(m, i, sign == "pos"),
        "aliases": {n: decorated_alias(n, l, r) for n, (l, r) in gens.items()},
    }
    return TableBimodule(
        name, alg, alg, gen_list,
        out_hom=identity_hom(2 * m),
        in_hom=hom_in,
        arrows=arrows,
        families=families,
        passthrough=passthrough,
        metadata=metadata,
    )


def collapse_crossing(M: TableBimodule, clbot: PresentedAlgebra) -> Regraded:
    """The same bimodule over C_l^bot with the epsilon ("bottom") gradings."""
    ident = integer_identity()
    return Regraded(M, clbot, clbot, epsilon, ident, ident, name=f"{M.name}bot")


def build_induced_crossing(algs, i: int, sign: str = "pos") -> Induced:
    """^phi Induct of the collapsed crossing bimodule, over (A_{m-1}, C_l^bot)."""
    M = build_crossing(algs.m, i, sign, alg=algs.Cl)
    return Induced(algs.phi, collapse_crossing(M, algs.Clbot), name=f"Ind({M.name})")


def u_inputs(alg: PresentedAlgebra, m: int):
    """The U_j elements used to seed parametric input pools."""
    return [u_element(alg, j) for j in range(1, m + 1)]
