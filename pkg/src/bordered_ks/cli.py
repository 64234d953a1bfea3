"""Command line harness: verification runs, braid words and JSON dump/load.

Exit status: 0 when every check passes, 1 on a mathematical failure,
2 on a usage or schema error.  Reports contain no timings unless
``--timing`` is given, so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path as FilePath

from . import __version__
from .constructions.crossing import build_crossing, build_induced_crossing, u_inputs
from .constructions.ks import build_R, build_rest_R
from .constructions.theorem1 import verify_theorem1
from .constructions.witnesses import build_theorem_witnesses, lemma_model, transferred_arrow_counts
from .dastruct import (
    CheckResult,
    DAError,
    IdentityMorphism,
    ZeroMorphism,
    find_relabeling,
    identity_bimodule,
    morphisms_equal,
    reduce,
    Tensor,
    verify_gradings,
    verify_homomorphism,
    verify_homotopy_equivalence,
    verify_morphism_gradings,
    verify_structure,
)
from .pathalg import AlgebraError
from .serialize import SchemaError, algebras, dumps, loads, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    params: dict
    checks: list[CheckResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    timing: float | None = None
    raw: str | None = None  # printed verbatim instead of the report

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        d = {
            "command": self.command,
            "params": self.params,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "ok": c.ok, "instances": c.checked, "counterexample": c.failure}
                for c in self.checks
            ],
            "info": self.info,
        }
        if self.timing is not None:
            d["seconds"] = round(self.timing, 3)
        return d

    def as_text(self) -> str:
        lines = [f"# {self.command} " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        lines += [c.line() for c in self.checks]
        for k, v in self.info.items():
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
        lines.append("RESULT " + ("PASS" if self.ok else "FAIL"))
        if self.timing is not None:
            lines.append(f"seconds: {self.timing:.3f}")
        return "\n".join(lines) + "\n"


# -- helpers -------------------------------------------------------------------


def _check_m(m: int, lo: int = 2) -> None:
    if m < lo:
        raise UsageError(f"--m must be at least {lo}")


def _check_i(m: int, i: int) -> None:
    if not 1 <= i <= m - 1:
        raise UsageError(f"--i must lie in 1..{m - 1}")


def _bounds(args) -> dict:
    return {"max_inputs": args.max_inputs, "basis_len": args.basis_len, "k_max": args.k_max}


def build_object(kind: str, m: int, i: int, sign: str):
    """Named bimodule builders shared by verify-bimodule and dump."""
    O = algebras(m)
    if kind == "R":
        return build_R(m, i, sign, alg=O.A)
    if kind == "Rest":
        return build_rest_R(O, i, sign)
    if kind == "crossing":
        return build_crossing(m, i, sign, alg=O.Cl)
    if kind == "Ind":
        return build_induced_crossing(O, i, sign)
    raise UsageError(f"unknown object {kind!r}")


def _u_for(M):
    """U_j seeds for inputs from C_l or C_l^bot (one vertex per strand position)."""
    alg = M.in_alg
    return u_inputs(alg, alg.n_vertices) if alg.name.startswith("Cl") else []


# -- commands ------------------------------------------------------------------


def cmd_verify_algebra(args) -> Report:
    _check_m(args.m)
    O = algebras(args.m)
    table = {"KS": O.A, "B": O.B, "Cl": O.Cl, "Clbot": O.Clbot}
    if args.name not in table:
        raise UsageError(f"unknown algebra {args.name!r}")
    alg = table[args.name]
    rep = Report("verify-algebra", {"name": args.name, "m": args.m, "maxlen": args.maxlen})
    conf = alg.check_confluence(args.maxlen)
    rep.checks.append(CheckResult("confluence", conf.ok, conf.pairs_checked, None if conf.ok else str(conf.failure)))
    basis = alg.basis(min(args.maxlen, 4))
    elems = [alg.element([p]) for p in basis]
    bad = None
    checked = 0
    for x in elems:
        for y in elems:
            xy = x * y
            for z in elems:
                checked += 1
                if (xy * z) != (x * (y * z)):
                    bad = f"({x!r})({y!r})({z!r})"
                    break
            if bad:
                break
        if bad:
            break
    rep.checks.append(CheckResult("associativity", bad is None, checked, bad))
    bad = None
    checked = 0
    for x in elems:
        for y in elems:
            prod = x * y
            checked += 1
            if prod and alg.homogeneous_degree(prod) != alg.degree(next(iter(x.terms))) + alg.degree(next(iter(y.terms))):
                bad = f"{x!r} * {y!r}"
                break
        if bad:
            break
    rep.checks.append(CheckResult("grading is multiplicative", bad is None, checked, bad))
    if args.name != "KS":
        from .constructions.algebras import u_element

        m_u = args.m
        us = [u_element(alg, i) for i in range(1, m_u + 1)]
        bad = None
        checked = 0
        for k, u in enumerate(us, start=1):
            if not u:
                continue
            for x in elems:
                checked += 1
                if x * u != u * x:
                    bad = f"U{k} does not commute with {x!r}"
                    break
            if bad:
                break
        rep.checks.append(CheckResult("U_i central", bad is None, checked, bad))
    if args.name == "KS":
        rep.info["dimension"] = len(alg.basis(args.maxlen))
    if args.name == "Clbot":
        rep.checks.extend(verify_theorem1(O, args.maxlen))
    return rep


def cmd_verify_bimodule(args) -> Report:
    _check_m(args.m)
    _check_i(args.m, args.i)
    M = build_object(args.object, args.m, args.i, args.sign)
    us = _u_for(M)
    b = _bounds(args)
    rep = Report("verify-bimodule", {"object": args.object, "m": args.m, "i": args.i, "sign": args.sign, **b})
    rep.checks.append(verify_structure(M, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.checks.append(verify_gradings(M, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.info["generators"] = len(M.gens)
    return rep


def cmd_verify_theorem2(args) -> Report:
    _check_m(args.m, 3)
    _check_i(args.m, args.i)
    O = algebras(args.m)
    b = _bounds(args)
    us = u_inputs(O.Clbot, args.m)
    kw = dict(b, u_elements=us)
    rep = Report("verify-theorem2", {"m": args.m, "i": args.i, "sign": args.sign, **b,
                                     "depth_limit": args.depth_limit})
    W = build_theorem_witnesses(O, args.i, args.sign, depth_limit=args.depth_limit)
    rep.info["cancelled"] = [list(p) for p in W.reduction.cancelled]
    rep.info["generic case"] = W.generic
    rep.checks.append(verify_structure(W.rest, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.checks.append(verify_structure(W.Z, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.checks.append(verify_structure(W.induced, b["max_inputs"], b["basis_len"], b["k_max"], us))
    # the lemma: type D level maps, and the transferred operations
    for r in verify_homotopy_equivalence(W.f, W.g, None, W.T, max_inputs=0, check_t_squared=True):
        r.name = "lemma " + r.name
        rep.checks.append(r)
    Zl = lemma_model(W)
    rep.checks.append(morphisms_equal_bimodules(Zl, W.Z, **kw))
    rep.info["transferred arrows"] = transferred_arrow_counts(W, **kw)
    # the theorem
    F, G = W.forward, W.backward
    rep.checks.append(verify_homomorphism(F, **kw))
    rep.checks.append(verify_homomorphism(G, **kw))
    rep.checks.append(_named(morphisms_equal(G @ F, IdentityMorphism(W.Z), **kw), "(iota'+h').(iota+h) = id"))
    rep.checks.append(_named(morphisms_equal(F @ G, IdentityMorphism(W.induced), **kw), "(iota+h).(iota'+h') = id"))
    rep.checks.append(_named(morphisms_equal(W.h_p @ W.iota, W.iota_p @ W.h, **kw), "h'.iota = iota'.h"))
    rep.checks.append(_named(morphisms_equal(W.h @ W.iota_p, W.iota @ W.h_p, **kw), "h.iota' = iota.h'"))
    rep.checks.append(_named(morphisms_equal(W.h_p @ W.h, ZeroMorphism("0", W.Z, W.Z), **kw), "h'.h = 0"))
    rep.checks.append(_named(morphisms_equal(W.h @ W.h_p, ZeroMorphism("0", W.induced, W.induced), **kw), "h.h' = 0"))
    rep.checks.append(verify_morphism_gradings(F, b["max_inputs"], b["basis_len"]))
    rep.checks.append(verify_morphism_gradings(G, b["max_inputs"], b["basis_len"]))
    return rep


def _named(r: CheckResult, name: str) -> CheckResult:
    r.name = name
    return r


def morphisms_equal_bimodules(X, Y, max_inputs, basis_len, k_max, u_elements) -> CheckResult:
    """Same generators and identical operations on every bounded instance."""
    from .dastruct import input_pool, instances

    pool = input_pool(X.in_alg, basis_len, u_elements, k_max)
    checked = 0
    if set(X.gen) != set(Y.gen):
        return CheckResult("lemma transfer = reduction", False, 0, "generator sets differ")
    for x, seq in instances(X, max_inputs, pool):
        checked += 1
        if X.delta(x, seq) != Y.delta(x, seq):
            return CheckResult("lemma transfer = reduction", False, checked, f"x={x} inputs={len(seq)}")
    return CheckResult("lemma transfer = reduction", True, checked)


def parse_word(text: str, m: int) -> list[int]:
    try:
        word = [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad braid word {text!r}") from exc
    if not word:
        raise UsageError("braid word must be nonempty")
    for w in word:
        if w == 0 or abs(w) > m - 1:
            raise UsageError(f"generator {w} out of range for m={m}")
    return word


def braid_bimodule(word: list[int], m: int, flavor: str, do_reduce: bool, depth_limit: int):
    O = algebras(m)
    M = None
    for w in word:
        sign = "pos" if w > 0 else "neg"
        R = build_R(m, abs(w), sign, alg=O.A) if flavor == "KS" else build_crossing(m, abs(w), sign, alg=O.Cl)
        if M is None:
            M = reduce(R, depth_limit=depth_limit).result if do_reduce else R
        else:
            T = Tensor(M, R, depth_limit=depth_limit)
            M = reduce(T, depth_limit=depth_limit).result if do_reduce else T
    return M


def _counts(M) -> dict:
    from .grading import GradingVector, epsilon

    counts: dict[str, int] = {}
    for g in M.gens:
        e = epsilon(g.grading) if isinstance(g.grading, GradingVector) else g.grading
        key = f"hom={g.hom},eps={e}"
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


def cmd_braid(args) -> Report:
    _check_m(args.m)
    if args.flavor not in ("KS", "OSz"):
        raise UsageError("--flavor must be KS or OSz")
    word = parse_word(args.word, args.m)
    b = _bounds(args)
    rep = Report("braid", {"word": args.word, "m": args.m, "flavor": args.flavor, "reduce": args.reduce, **b})
    rep.info["note"] = "property check, not a statement proved in the source"
    M = braid_bimodule(word, args.m, args.flavor, args.reduce, args.depth_limit)
    us = u_inputs(M.in_alg, args.m) if args.flavor == "OSz" else []
    rep.checks.append(verify_structure(M, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.info["generators"] = len(M.gens)
    rep.info["generator counts"] = _counts(M)
    if args.compare:
        N = braid_bimodule(parse_word(args.compare, args.m), args.m, args.flavor, args.reduce, args.depth_limit)
        other = N
    elif args.identity:
        other = identity_bimodule(M.in_alg)
    else:
        other = None
    if other is not None:
        res = find_relabeling(M, other, b["max_inputs"], b["basis_len"], b["k_max"], us, budget=args.budget)
        rep.info["isomorphism"] = res.status
        if res.found:
            rep.info["bijection"] = dict(sorted(res.mapping.items()))
        rep.checks.append(CheckResult("isomorphic by relabeling", res.found, res.nodes,
                                      None if res.found else res.status))
    if args.out:
        FilePath(args.out).write_text(dumps(M, **b))
    return rep


def cmd_dump(args) -> Report:
    _check_m(args.m)
    _check_i(args.m, args.i)
    M = build_object(args.object, args.m, args.i, args.sign)
    text = dumps(M, **_bounds(args))
    rep = Report("dump", {"object": args.object, "m": args.m, "i": args.i, "sign": args.sign})
    if args.out:
        FilePath(args.out).write_text(text)
        rep.info["written"] = args.out
    else:
        rep.raw = text + "\n"
    rep.info["generators"] = len(M.gens)
    return rep


def cmd_load(args) -> Report:
    try:
        text = FilePath(args.path).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    M = loads(text)
    b = _bounds(args)
    rep = Report("load", {"path": args.path})
    us = _u_for(M) if M.families else []
    rep.checks.append(verify_structure(M, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.checks.append(verify_gradings(M, b["max_inputs"], b["basis_len"], b["k_max"], us))
    rep.info["generators"] = len(M.gens)
    rep.info["round trip stable"] = to_json(loads(dumps(M))) == to_json(M)
    return rep


# -- argument parsing ----------------------------------------------------------


def _common(p: argparse.ArgumentParser, theorem: bool = False) -> None:
    p.add_argument("--max-inputs", type=int, default=3)
    p.add_argument("--basis-len", type=int, default=4)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--depth-limit", type=int, default=16)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="write the serialized bimodule (braid, dump) to this path")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")


def _mis(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--sign", choices=("pos", "neg"), default="pos")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bordered-ks", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-algebra", help="confluence, associativity, gradings; kernel of phi for Clbot")
    p.add_argument("--name", required=True, help="KS, B, Cl or Clbot")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--maxlen", type=int, default=8)
    _common(p)
    p.set_defaults(run=cmd_verify_algebra)

    p = sub.add_parser("verify-bimodule", help="structure equation and gradings of a named bimodule")
    p.add_argument("--object", choices=("R", "Rest", "crossing", "Ind"), required=True)
    _mis(p)
    _common(p)
    p.set_defaults(run=cmd_verify_bimodule)

    p = sub.add_parser("verify-theorem2", help="Rest_phi R_i versus the induced crossing bimodule")
    _mis(p)
    _common(p)
    p.set_defaults(run=cmd_verify_theorem2)

    p = sub.add_parser("braid", help="box tensor a braid word of crossing bimodules")
    p.add_argument("--word", required=True, help='e.g. "1 -2 1"; sign is the crossing sign')
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--flavor", default="KS", help="KS or OSz")
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--compare", default=None, help="second braid word to test for isomorphism")
    p.add_argument("--identity", action="store_true", help="compare with the identity bimodule")
    p.add_argument("--budget", type=int, default=100_000, help="node budget for the bijection search")
    _common(p)
    p.set_defaults(run=cmd_braid)

    p = sub.add_parser("dump", help="write a named bimodule as JSON")
    p.add_argument("--object", choices=("R", "Rest", "crossing", "Ind"), required=True)
    _mis(p)
    _common(p)
    p.set_defaults(run=cmd_dump)

    p = sub.add_parser("load", help="read a JSON bimodule and re-validate it")
    p.add_argument("path")
    _common(p)
    p.set_defaults(run=cmd_load)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        rep = args.run(args)
    except (UsageError, SchemaError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DAError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.timing:
        rep.timing = time.perf_counter() - start
    if rep.raw is not None:
        text = rep.raw
    elif args.format == "json":
        text = json.dumps(rep.as_dict(), indent=1, sort_keys=True) + "\n"
    else:
        text = rep.as_text()
    sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
