"""DA bimodules over GF(2) path algebras with zero differential.

A bimodule is given by its generators and a function ``delta(x, inputs)``
returning the GF(2) sum of terms ``a (x) y`` of delta^1_{n+1}(x, a_1..a_n).
Inputs are tuples of positive-length normal-form paths of the input algebra;
outputs are single paths of the output algebra.  A sum is a frozenset of
``(path, generator name)`` pairs.

Degree conventions: delta^1_j moves the homological degree by ``j - 2``
(so the differential drops it by one) and preserves the intrinsic grading
through the two grading maps.  A morphism of degree d sends a generator of
homological degree h with n inputs to degree ``h + n + d``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .grading import GradingHom
from .pathalg import Element, Path, PresentedAlgebra, identity_grading

Terms = frozenset  # frozenset[tuple[Path, str]]
EMPTY: frozenset = frozenset()


class DAError(ValueError):
    pass


class DepthLimitExceeded(DAError):
    pass


class Gen(NamedTuple):
    name: str
    left: int
    right: int
    hom: int
    grading: object


def add_terms(acc: set, terms: Iterable) -> None:
    """In-place GF(2) accumulation."""
    for t in terms:
        if t in acc:
            acc.remove(t)
        else:
            acc.add(t)


def times_left(alg: PresentedAlgebra, a: Path, terms: Iterable) -> set:
    out: set = set()
    for b, y in terms:
        c = alg.mul_paths(a, b)
        if c is not None:
            add_terms(out, [(c, y)])
    return out


def compose_gradings(outer: Callable, inner: Callable) -> Callable:
    """outer o inner, keeping GradingHom matrices when both are matrices."""
    if inner is identity_grading:
        return outer
    if outer is identity_grading:
        return inner
    if isinstance(outer, GradingHom) and isinstance(inner, GradingHom):
        return outer.compose(inner)
    return lambda d: outer(inner(d))


def split_points(n: int) -> range:
    return range(n + 1)


class DABimodule:
    """Base class; subclasses implement ``_delta``."""

    def __init__(
        self,
        name: str,
        out_alg: PresentedAlgebra,
        in_alg: PresentedAlgebra,
        gens: Sequence[Gen],
        out_hom: Callable = identity_grading,
        in_hom: Callable = identity_grading,
        metadata: dict | None = None,
    ):
        self.name = name
        self.out_alg = out_alg
        self.in_alg = in_alg
        self.gens = tuple(Gen(*g) for g in gens)
        self.gen = {g.name: g for g in self.gens}
        if len(self.gen) != len(self.gens):
            raise DAError(f"{name}: generator names must be unique")
        for g in self.gens:
            if not (0 <= g.left < out_alg.n_vertices and 0 <= g.right < in_alg.n_vertices):
                raise DAError(f"{name}: generator {g.name} has an invalid idempotent")
        self.out_hom = out_hom
        self.in_hom = in_hom
        self.metadata = dict(metadata or {})
        self._cache: dict = {}

    # subclasses override
    def _delta(self, x: str, inputs: tuple[Path, ...]) -> frozenset:
        raise NotImplementedError

    def max_arity(self) -> int | None:
        """Largest j with delta^1_j possibly nonzero, if known structurally."""
        return None

    def delta(self, x: str, inputs: tuple[Path, ...] = ()) -> frozenset:
        key = (x, inputs)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g = self.gen[x]
        if len(inputs) == 1 and inputs[0].is_idempotent:
            res = frozenset({(Path(g.left), x)}) if inputs[0].start == g.right else EMPTY
        elif any(a.is_idempotent for a in inputs) or not self._chains(g.right, inputs):
            res = EMPTY
        else:
            res = frozenset(self._delta(x, inputs))
        self._cache[key] = res
        return res

    def _chains(self, v: int, inputs: Sequence[Path]) -> bool:
        for a in inputs:
            if a.start != v:
                return False
            v = self.in_alg.end(a)
        return True

    def delta_elements(self, x: str, inputs: Sequence[Element]) -> frozenset:
        """Multilinear extension over sums of input paths."""
        acc: set = set()
        for combo in product(*[sorted(e.terms) for e in inputs]):
            add_terms(acc, self.delta(x, tuple(combo)))
        return frozenset(acc)

    def end_right(self, x: str, inputs: Sequence[Path]) -> int:
        return self.in_alg.end(inputs[-1]) if inputs else self.gen[x].right

    def __repr__(self) -> str:
        return f"<DABimodule {self.name}: {len(self.gens)} generators>"

    def format_terms(self, terms: Iterable) -> str:
        items = sorted(terms, key=lambda t: (t[1], len(t[0]), t[0]))
        if not items:
            return "0"
        return " + ".join(f"{self.out_alg.path_str(a)} (x) {y}" for a, y in items)


# -- table-backed bimodules ----------------------------------------------------


@dataclass(frozen=True)
class Family:
    """Arrows source -> target labelled ``out*U_p^k (x) (.., inp*U_q^k, ..)``, k >= 0.

    ``u_out``/``u_in`` are elements of the output/input algebras (the U's
    acting at the relevant idempotents); the power multiplies ``out`` and the
    input in position ``slot``.
    """

    source: str
    target: str
    out: Path
    inputs: tuple[Path, ...]
    slot: int
    u_out: Element
    u_in: Element
    k_min: int = 0


@dataclass(frozen=True)
class Passthrough:
    """delta^1_2(gens[v], b) = b (x) gens[end b] for every path b avoiding ``avoid``."""

    gens: tuple[tuple[int, str], ...]
    avoid: int


class TableBimodule(DABimodule):
    """Finitely many explicit arrows plus parametric U-power families.

    Every generator implicitly carries delta^1_2(x, 1) = 1 (x) x.  An optional
    passthrough rule covers the infinitely many identity-like arrows on
    generators away from a crossing.
    """

    def __init__(self, *args, arrows=(), families=(), passthrough: Passthrough | None = None, **kw):
        super().__init__(*args, **kw)
        self.passthrough = passthrough
        self._pass_gen = dict(passthrough.gens) if passthrough else {}
        self._pass_src = {g: v for v, g in self._pass_gen.items()}
        self.arrows: dict[tuple[str, tuple[Path, ...]], set] = defaultdict(set)
        for src, inputs, out, tgt in arrows:
            self.add_arrow(src, inputs, out, tgt)
        self._power_cache: dict = {}
        self.families: list[Family] = list(families)
        self._fam_index: dict[tuple[str, int], list[Family]] = defaultdict(list)
        for f in self.families:
            self._check_family(f)
            self._fam_index[(f.source, len(f.inputs))].append(f)

    def add_arrow(self, src: str, inputs: Sequence[Path], out: Path, tgt: str) -> None:
        inputs = tuple(inputs)
        if src not in self.gen or tgt not in self.gen:
            raise DAError(f"{self.name}: arrow between unknown generators {src} -> {tgt}")
        s, t = self.gen[src], self.gen[tgt]
        if out.start != s.left or self.out_alg.end(out) != t.left:
            raise DAError(f"{self.name}: arrow {src} -> {tgt} has mismatched output idempotents")
        if not self._chains(s.right, inputs) or self.end_right(src, inputs) != t.right:
            raise DAError(f"{self.name}: arrow {src} -> {tgt} has mismatched input idempotents")
        if any(a.is_idempotent for a in inputs):
            raise DAError(f"{self.name}: arrow {src} -> {tgt} has a unit input")
        if any(not self.in_alg.is_irreducible(a) for a in inputs):
            raise DAError(f"{self.name}: arrow {src} -> {tgt} has a non-normal input")
        self._cache.clear()
        add_terms(self.arrows[(src, inputs)], [(out, tgt)])

    def _check_family(self, f: Family) -> None:
        for k in (0, 1, 2):
            inst = self._instance(f, k)
            if inst is None:
                continue
            inputs, out = inst
            if any(a.is_idempotent for a in inputs):
                continue
            s, t = self.gen[f.source], self.gen[f.target]
            if out.start != s.left or self.out_alg.end(out) != t.left:
                raise DAError(f"{self.name}: family {f.source}->{f.target} output idempotents")
            if not self._chains(s.right, inputs) or self.end_right(f.source, inputs) != t.right:
                raise DAError(f"{self.name}: family {f.source}->{f.target} input idempotents")

    def _instance(self, f: Family, k: int):
        key = (f, k)
        if key in self._power_cache:
            return self._power_cache[key]
        res = None
        if k >= f.k_min:
            slot = self.in_alg.element([f.inputs[f.slot]]) * f.u_in**k
            out = self.out_alg.element([f.out]) * f.u_out**k
            if len(slot.terms) == 1 and len(out.terms) == 1:
                inputs = list(f.inputs)
                inputs[f.slot] = next(iter(slot.terms))
                res = (tuple(inputs), next(iter(out.terms)))
        self._power_cache[key] = res
        return res

    def max_arity(self) -> int:
        ns = [len(k[1]) for k, v in self.arrows.items() if v]
        ns += [len(f.inputs) for f in self.families]
        return max(ns, default=1) + 1

    def _delta(self, x, inputs):
        acc: set = set(self.arrows.get((x, inputs), ()))
        if len(inputs) == 1 and x in self._pass_src:
            b = inputs[0]
            if self._avoids(b) and self.in_alg.end(b) in self._pass_gen:
                add_terms(acc, [(b, self._pass_gen[self.in_alg.end(b)])])
        for f in self._fam_index.get((x, len(inputs)), ()):
            if any(inputs[s] != f.inputs[s] for s in range(len(inputs)) if s != f.slot):
                continue
            target_len = len(inputs[f.slot])
            for k in range(0, target_len + 1):
                inst = self._instance(f, k)
                if inst is None:
                    if k > f.k_min:
                        break
                    continue
                if len(inst[0][f.slot]) > target_len:
                    break
                if inst[0] == inputs:
                    add_terms(acc, [(inst[1], f.target)])
        return acc

    def _avoids(self, b: Path) -> bool:
        v = self.passthrough.avoid
        return b.start != v and all(self.in_alg.arrows[a].target != v for a in b.arrows)

    def family_instances(self, k_max: int) -> Iterator[tuple[str, tuple[Path, ...], Path, str]]:
        for f in self.families:
            for k in range(k_max + 1):
                inst = self._instance(f, k)
                if inst and not any(a.is_idempotent for a in inst[0]):
                    yield f.source, inst[0], inst[1], f.target

    def explicit_arrows(self) -> Iterator[tuple[str, tuple[Path, ...], Path, str]]:
        for (src, inputs), terms in sorted(self.arrows.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            for out, tgt in sorted(terms):
                yield src, inputs, out, tgt


def identity_bimodule(alg: PresentedAlgebra, name: str | None = None) -> TableBimodule:
    """The bimodule with one generator per vertex and delta^1_2(v, b) = b (x) end(b)."""

    class _Identity(DABimodule):
        def _delta(self, x, inputs):
            if len(inputs) != 1:
                return EMPTY
            b = inputs[0]
            return {(b, f"I{alg.end(b)}")}

        def max_arity(self):
            return 2

    zero = alg.zero_degree
    gens = [Gen(f"I{v}", v, v, 0, zero) for v in range(alg.n_vertices)]
    return _Identity(name or f"Id({alg.name})", alg, alg, gens)


# -- bounded enumeration -------------------------------------------------------


def input_pool(
    alg: PresentedAlgebra,
    basis_len: int,
    u_elements: Sequence[Element] = (),
    k_max: int = 0,
    short_len: int = 2,
) -> dict[int, list[Path]]:
    """Positive-length basis paths by start vertex.

    Besides every path of length <= basis_len, includes p * U^k for the
    given U elements with len(p) <= short_len and k <= k_max, so U-power
    families are exercised beyond the plain length bound.
    """
    pool: set[Path] = {p for p in alg.basis(basis_len) if p.arrows}
    if k_max:
        short = [p for p in alg.basis(short_len)]
        for u in u_elements:
            for p in short:
                e = alg.element([p])
                for _ in range(k_max):
                    e = e * u
                    if len(e.terms) != 1:
                        break
                    q = next(iter(e.terms))
                    if q.arrows:
                        pool.add(q)
    by_start: dict[int, list[Path]] = defaultdict(list)
    for p in sorted(pool, key=lambda p: (len(p), p)):
        by_start[p.start].append(p)
    return dict(by_start)


def input_sequences(alg: PresentedAlgebra, pool: dict[int, list[Path]], v: int, n: int):
    if n == 0:
        yield ()
        return
    for a in pool.get(v, ()):
        for rest in input_sequences(alg, pool, alg.end(a), n - 1):
            yield (a,) + rest


def instances(M: DABimodule, max_inputs: int, pool: dict[int, list[Path]]):
    for x in M.gens:
        for n in range(max_inputs + 1):
            for seq in input_sequences(M.in_alg, pool, x.right, n):
                yield x.name, seq


@dataclass
class CheckResult:
    """Outcome of a bounded verification."""

    name: str
    ok: bool
    checked: int = 0
    failure: str | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f" :: {self.failure}" if self.failure else ""
        return f"{status} {self.name} ({self.checked} instances){tail}"


def _fmt_inputs(alg: PresentedAlgebra, seq: Sequence[Path]) -> str:
    return "(" + ", ".join(alg.path_str(a) for a in seq) + ")"


def structure_residual(M: DABimodule, x: str, seq: tuple[Path, ...]) -> frozenset:
    """Left side of the DA structure relation for x with inputs seq."""
    acc: set = set()
    n = len(seq)
    mul = M.out_alg.mul_paths
    for p in range(n + 1):
        for b, y in M.delta(x, seq[:p]):
            for c, z in M.delta(y, seq[p:]):
                bc = mul(b, c)
                if bc is not None:
                    add_terms(acc, [(bc, z)])
    for s in range(n - 1):
        prod = M.in_alg.mul_paths(seq[s], seq[s + 1])
        if prod is not None:
            add_terms(acc, M.delta(x, seq[:s] + (prod,) + seq[s + 2 :]))
    return frozenset(acc)


def verify_structure(
    M: DABimodule,
    max_inputs: int = 3,
    basis_len: int = 4,
    k_max: int = 0,
    u_elements: Sequence[Element] = (),
) -> CheckResult:
    pool = input_pool(M.in_alg, basis_len, u_elements, k_max)
    checked = 0
    for x, seq in instances(M, max_inputs, pool):
        checked += 1
        res = structure_residual(M, x, seq)
        if res:
            return CheckResult(
                f"structure {M.name}",
                False,
                checked,
                f"x={x} inputs={_fmt_inputs(M.in_alg, seq)} residual={M.format_terms(res)}",
            )
    return CheckResult(f"structure {M.name}", True, checked)


def nonzero_arrows(M: DABimodule, max_inputs: int, pool: dict[int, list[Path]]):
    """All (x, inputs, out, y) with a (x) y a term of delta(x, inputs), bounded."""
    for x, seq in instances(M, max_inputs, pool):
        for out, y in sorted(M.delta(x, seq)):
            yield x, seq, out, y


def arrow_grading_defect(M: DABimodule, x: str, seq, out: Path, y: str, degree: int = -1):
    """None if the arrow respects both gradings, else a description."""
    gx, gy = M.gen[x], M.gen[y]
    if gy.hom != gx.hom + len(seq) + degree:
        return f"homological {gx.hom} -> {gy.hom} with {len(seq)} inputs"
    lhs = gx.grading
    for a in seq:
        lhs = lhs + M.in_hom(M.in_alg.degree(a))
    rhs = M.out_hom(M.out_alg.degree(out)) + gy.grading
    if lhs != rhs:
        return f"intrinsic {lhs} != {rhs}"
    return None


def verify_gradings(
    M: DABimodule,
    max_inputs: int = 3,
    basis_len: int = 4,
    k_max: int = 0,
    u_elements: Sequence[Element] = (),
) -> CheckResult:
    pool = input_pool(M.in_alg, basis_len, u_elements, k_max)
    checked = 0
    for x, seq, out, y in nonzero_arrows(M, max_inputs, pool):
        checked += 1
        bad = arrow_grading_defect(M, x, seq, out, y)
        if bad:
            arrow = f"{x} -> {M.out_alg.path_str(out)} (x) {y} on {_fmt_inputs(M.in_alg, seq)}"
            return CheckResult(f"gradings {M.name}", False, checked, f"{arrow}: {bad}")
    return CheckResult(f"gradings {M.name}", True, checked)


def arity_profile(M: DABimodule, max_inputs: int, basis_len: int) -> dict[int, int]:
    """Number of nonzero delta^1_j terms, keyed by j, within the bounds."""
    pool = input_pool(M.in_alg, basis_len)
    counts: dict[int, int] = defaultdict(int)
    for x, seq, out, y in nonzero_arrows(M, max_inputs, pool):
        counts[len(seq) + 1] += 1
    return dict(counts)


# -- restriction, induction, regrading -----------------------------------------


class Restricted(DABimodule):
    """Rest_phi M: inputs are pushed through phi before M acts."""

    def __init__(self, phi, M: DABimodule, name: str | None = None):
        if phi.target is not M.in_alg:
            raise DAError("restriction needs phi to land in the input algebra")
        super().__init__(
            name or f"Rest[{phi.name}]({M.name})",
            M.out_alg,
            phi.source,
            M.gens,
            M.out_hom,
            compose_gradings(M.in_hom, phi.grading_map),
            M.metadata,
        )
        self.phi, self.inner = phi, M

    def max_arity(self):
        return self.inner.max_arity()

    def _delta(self, x, inputs):
        images = [self.phi.on_path(a) for a in inputs]
        if not all(images):
            return EMPTY
        if any(p.is_idempotent for e in images for p in e.terms):
            raise DAError("restriction along a map that is not augmented")
        return self.inner.delta_elements(x, images)


class Induced(DABimodule):
    """phi Induct M: outputs are pushed forward through phi."""

    def __init__(self, phi, M: DABimodule, name: str | None = None):
        if phi.source is not M.out_alg:
            raise DAError("induction needs phi to start at the output algebra")
        super().__init__(
            name or f"Ind[{phi.name}]({M.name})",
            phi.target,
            M.in_alg,
            [g._replace(left=phi.vertex_images[g.left]) for g in M.gens],
            compose_gradings(phi.grading_map, M.out_hom),
            M.in_hom,
            M.metadata,
        )
        self.phi, self.inner = phi, M

    def max_arity(self):
        return self.inner.max_arity()

    def _delta(self, x, inputs):
        acc: set = set()
        for b, y in self.inner.delta(x, inputs):
            add_terms(acc, ((p, y) for p in self.phi.on_path(b).terms))
        return acc


class Regraded(DABimodule):
    """Same operations over algebras with identical quivers but new gradings.

    ``grading_map`` is applied to generator gradings; ``out_hom``/``in_hom``
    are the new grading maps.
    """

    def __init__(self, M: DABimodule, out_alg, in_alg, grading_map, out_hom, in_hom, name=None):
        for old, new in ((M.out_alg, out_alg), (M.in_alg, in_alg)):
            if [(a.name, a.source, a.target) for a in old.arrows] != [
                (a.name, a.source, a.target) for a in new.arrows
            ]:
                raise DAError("regrading needs identical quivers")
        super().__init__(
            name or M.name,
            out_alg,
            in_alg,
            [g._replace(grading=grading_map(g.grading)) for g in M.gens],
            out_hom,
            in_hom,
            M.metadata,
        )
        self.inner = M

    def max_arity(self):
        return self.inner.max_arity()

    def _delta(self, x, inputs):
        return self.inner.delta(x, inputs)


# -- box tensor products -------------------------------------------------------


class Tensor(DABimodule):
    """X box Y for DA bimodules X over (A, B) and Y over (B, C)."""

    def __init__(self, X: DABimodule, Y: DABimodule, depth_limit: int = 16, name=None):
        if X.in_alg is not Y.out_alg:
            raise DAError("box tensor needs in_alg(X) == out_alg(Y)")
        gens = []
        self.pairs = {}
        for x in X.gens:
            for y in Y.gens:
                if x.right == y.left:
                    nm = f"{x.name}*{y.name}"
                    self.pairs[nm] = (x.name, y.name)
                    gens.append(Gen(nm, x.left, y.right, x.hom + y.hom, x.grading + X.in_hom(y.grading)))
        super().__init__(
            name or f"({X.name} [x] {Y.name})",
            X.out_alg,
            Y.in_alg,
            gens,
            X.out_hom,
            compose_gradings(X.in_hom, Y.in_hom),
        )
        self.X, self.Y, self.depth_limit = X, Y, depth_limit

    def _delta(self, xy, inputs):
        x, y = self.pairs[xy]
        n = len(inputs)
        acc: set = set()
        if n == 0:
            add_terms(acc, ((a, f"{x2}*{y}") for a, x2 in self.X.delta(x, ())))
        stack = [(y, 0, ())]
        while stack:
            yy, pos, outs = stack.pop()
            if len(outs) > self.depth_limit:
                raise DepthLimitExceeded(f"{self.name}: Y-chain deeper than {self.depth_limit}")
            for q in range(pos, n + 1):
                for b, y2 in self.Y.delta(yy, inputs[pos:q]):
                    chain = outs + (b,)
                    if q == n:
                        add_terms(acc, ((a, f"{x2}*{y2}") for a, x2 in self.X.delta(x, chain)))
                    stack.append((y2, q, chain))
        return acc


# -- morphisms -----------------------------------------------------------------


class DAMorphism:
    """Components f_{n+1}(x, a_1..a_n) as GF(2) sums of (path, generator)."""

    def __init__(self, name: str, source: DABimodule, target: DABimodule, degree: int = 0):
        if source.in_alg is not target.in_alg or source.out_alg is not target.out_alg:
            raise DAError(f"{name}: bimodules over different algebras")
        self.name, self.source, self.target, self.degree = name, source, target, degree
        self._cache: dict = {}
        self._arities: frozenset[int] | None = None

    def _apply(self, x: str, inputs: tuple[Path, ...]):
        raise NotImplementedError

    def apply(self, x: str, inputs: tuple[Path, ...] = ()) -> frozenset:
        if self._arities is not None and len(inputs) not in self._arities:
            return EMPTY
        key = (x, inputs)
        hit = self._cache.get(key)
        if hit is None:
            if any(a.is_idempotent for a in inputs):
                hit = EMPTY
            else:
                hit = frozenset(self._apply(x, inputs))
            self._cache[key] = hit
        return hit

    def __add__(self, other: DAMorphism) -> DAMorphism:
        return SumMorphism(self, other)

    def __matmul__(self, other: DAMorphism) -> DAMorphism:
        """self @ other is the composite self o other (other applied first)."""
        return compose(self, other)

    def __repr__(self) -> str:
        return f"<DAMorphism {self.name}: {self.source.name} -> {self.target.name}>"


class TableMorphism(DAMorphism):
    def __init__(self, name, source, target, arrows=(), degree=0):
        super().__init__(name, source, target, degree)
        self.table: dict = defaultdict(set)
        for x, inputs, out, y in arrows:
            if x not in source.gen or y not in target.gen:
                raise DAError(f"{name}: unknown generator in {x} -> {y}")
            add_terms(self.table[(x, tuple(inputs))], [(out, y)])
        self._arities = frozenset(len(k[1]) for k, v in self.table.items() if v)

    def _apply(self, x, inputs):
        return self.table.get((x, inputs), ())


class IdentityMorphism(DAMorphism):
    def __init__(self, M: DABimodule):
        super().__init__(f"id_{M.name}", M, M)
        self._arities = frozenset({0})

    def _apply(self, x, inputs):
        return () if inputs else {(Path(self.source.gen[x].left), x)}


class ZeroMorphism(DAMorphism):
    def __init__(self, name, source, target, degree=0):
        super().__init__(name, source, target, degree)
        self._arities = frozenset()

    def _apply(self, x, inputs):
        return ()


class SumMorphism(DAMorphism):
    def __init__(self, F: DAMorphism, G: DAMorphism):
        if F.source is not G.source or F.target is not G.target:
            raise DAError("can only add parallel morphisms")
        super().__init__(f"({F.name}+{G.name})", F.source, F.target, F.degree)
        self.F, self.G = F, G
        if F._arities is not None and G._arities is not None:
            self._arities = F._arities | G._arities

    def _apply(self, x, inputs):
        acc = set(self.F.apply(x, inputs))
        add_terms(acc, self.G.apply(x, inputs))
        return acc


class Composite(DAMorphism):
    def __init__(self, F: DAMorphism, G: DAMorphism):
        if G.target is not F.source:
            raise DAError(f"cannot compose {F.name} after {G.name}")
        super().__init__(f"{F.name}.{G.name}", G.source, F.target, F.degree + G.degree)
        self.F, self.G = F, G
        if F._arities is not None and G._arities is not None:
            self._arities = frozenset(a + b for a in F._arities for b in G._arities)

    def _apply(self, x, inputs):
        acc: set = set()
        mul = self.source.out_alg.mul_paths
        for p in range(len(inputs) + 1):
            for b, y in self.G.apply(x, inputs[:p]):
                for c, z in self.F.apply(y, inputs[p:]):
                    bc = mul(b, c)
                    if bc is not None:
                        add_terms(acc, [(bc, z)])
        return acc


def compose(F: DAMorphism, G: DAMorphism) -> DAMorphism:
    """F o G."""
    return Composite(F, G)


class Differential(DAMorphism):
    """The morphism differential of F (zero-differential algebras, GF(2))."""

    def __init__(self, F: DAMorphism):
        super().__init__(f"d({F.name})", F.source, F.target, F.degree - 1)
        self.F = F

    def _apply(self, x, inputs):
        X, Y, F = self.source, self.target, self.F
        mul = X.out_alg.mul_paths
        acc: set = set()
        n = len(inputs)
        for p in range(n + 1):
            for b, y in F.apply(x, inputs[:p]):
                for c, z in Y.delta(y, inputs[p:]):
                    bc = mul(b, c)
                    if bc is not None:
                        add_terms(acc, [(bc, z)])
            for b, y in X.delta(x, inputs[:p]):
                for c, z in F.apply(y, inputs[p:]):
                    bc = mul(b, c)
                    if bc is not None:
                        add_terms(acc, [(bc, z)])
        for s in range(n - 1):
            prod = X.in_alg.mul_paths(inputs[s], inputs[s + 1])
            if prod is not None:
                add_terms(acc, F.apply(x, inputs[:s] + (prod,) + inputs[s + 2 :]))
        return acc


def morphism_differential(F: DAMorphism) -> DAMorphism:
    return Differential(F)


def morphism_residual(F: DAMorphism, max_inputs: int, pool) -> tuple[int, tuple | None]:
    """First bounded instance where F is nonzero, with the instance count."""
    checked = 0
    for x, seq in instances(F.source, max_inputs, pool):
        checked += 1
        val = F.apply(x, seq)
        if val:
            return checked, (x, seq, val)
    return checked, None


def _describe(F: DAMorphism, hit) -> str:
    x, seq, val = hit
    return f"x={x} inputs={_fmt_inputs(F.source.in_alg, seq)} value={F.target.format_terms(val)}"


def morphisms_equal(F: DAMorphism, G: DAMorphism, max_inputs=3, basis_len=4, k_max=0, u_elements=()):
    pool = input_pool(F.source.in_alg, basis_len, u_elements, k_max)
    checked, hit = morphism_residual(SumMorphism(F, G), max_inputs, pool)
    name = f"{F.name} == {G.name}"
    if hit:
        return CheckResult(name, False, checked, _describe(SumMorphism(F, G), hit))
    return CheckResult(name, True, checked)


def verify_homomorphism(F: DAMorphism, max_inputs=3, basis_len=4, k_max=0, u_elements=()) -> CheckResult:
    """Check that the morphism differential vanishes, row by row (by input count)."""
    pool = input_pool(F.source.in_alg, basis_len, u_elements, k_max)
    D = Differential(F)
    total = 0
    for n in range(max_inputs + 1):
        checked, hit = morphism_residual_fixed(D, n, pool)
        total += checked
        if hit:
            return CheckResult(f"homomorphism {F.name}", False, total, f"row {n + 1}: " + _describe(D, hit))
    return CheckResult(f"homomorphism {F.name}", True, total)


def morphism_residual_fixed(F: DAMorphism, n: int, pool):
    checked = 0
    for x in F.source.gens:
        for seq in input_sequences(F.source.in_alg, pool, x.right, n):
            checked += 1
            val = F.apply(x.name, seq)
            if val:
                return checked, (x.name, seq, val)
    return checked, None


def verify_morphism_gradings(F: DAMorphism, max_inputs=3, basis_len=4) -> CheckResult:
    pool = input_pool(F.source.in_alg, basis_len)
    X, Y = F.source, F.target
    checked = 0
    for x, seq in instances(X, max_inputs, pool):
        for out, y in F.apply(x, seq):
            checked += 1
            gx, gy = X.gen[x], Y.gen[y]
            lhs = gx.grading
            for a in seq:
                lhs = lhs + X.in_hom(X.in_alg.degree(a))
            rhs = X.out_hom(X.out_alg.degree(out)) + gy.grading
            if gy.hom != gx.hom + len(seq) + F.degree or lhs != rhs:
                return CheckResult(f"gradings {F.name}", False, checked, f"{x} -> {y} on {_fmt_inputs(X.in_alg, seq)}")
    return CheckResult(f"gradings {F.name}", True, checked)


def verify_homotopy_equivalence(
    f: DAMorphism,
    g: DAMorphism,
    T_src: DAMorphism | None,
    T_tgt: DAMorphism | None,
    max_inputs: int = 3,
    basis_len: int = 4,
    k_max: int = 0,
    u_elements=(),
    check_t_squared: bool = False,
) -> list[CheckResult]:
    """g o f = id + dT_src and f o g = id + dT_tgt (missing homotopies mean zero)."""
    Z, M = f.source, f.target
    results = []
    for name, lhs, ident, T in (
        ("g.f", compose(g, f), IdentityMorphism(Z), T_src),
        ("f.g", compose(f, g), IdentityMorphism(M), T_tgt),
    ):
        rhs = ident if T is None else SumMorphism(ident, Differential(T))
        r = morphisms_equal(lhs, rhs, max_inputs, basis_len, k_max, u_elements)
        r.name = f"{name} = id" + ("" if T is None else f" + d{T.name}")
        results.append(r)
    if check_t_squared:
        for T in (T_src, T_tgt):
            if T is not None:
                r = morphisms_equal(compose(T, T), ZeroMorphism("0", T.source, T.target), max_inputs, basis_len, k_max, u_elements)
                r.name = f"{T.name}^2 = 0"
                results.append(r)
    return results


# -- cancellation --------------------------------------------------------------


class _Cancellation:
    """Shared zig-zag search for cancelling the unit arrow x -> 1 (x) y."""

    def __init__(self, M: DABimodule, x: str, y: str, depth_limit: int):
        self.M, self.x, self.y, self.depth_limit = M, x, y, depth_limit
        self.unit = (Path(M.gen[x].left), y)

    def dprime(self, g: str, chunk: tuple[Path, ...]) -> frozenset:
        out = self.M.delta(g, chunk)
        if g == self.x and not chunk and self.unit in out:
            out = out - {self.unit}
        return out

    def walk(self, start: str, inputs: tuple[Path, ...], acc: Path, stop: str):
        """Chains start -delta'-> y -h-> x -delta'-> ... consuming all inputs.

        ``stop="Z"`` yields chains ending on a surviving generator;
        ``stop="x"`` yields chains ending with an h step (landing on x).
        """
        n = len(inputs)
        mul = self.M.out_alg.mul_paths
        out: set = set()
        stack = [(start, 0, acc, 0)]
        while stack:
            g, pos, prod, depth = stack.pop()
            if depth > self.depth_limit:
                raise DepthLimitExceeded(f"cancellation zig-zag deeper than {self.depth_limit}")
            for q in range(pos, n + 1):
                for b, g2 in self.dprime(g, inputs[pos:q]):
                    p2 = mul(prod, b)
                    if p2 is None:
                        continue
                    if g2 == self.y:
                        if stop == "x" and q == n:
                            add_terms(out, [(p2, self.x)])
                        stack.append((self.x, q, p2, depth + 1))
                    elif g2 != self.x and stop == "Z" and q == n:
                        add_terms(out, [(p2, g2)])
        return out


class Cancelled(DABimodule):
    def __init__(self, M: DABimodule, x: str, y: str, depth_limit: int = 16):
        super().__init__(
            f"{M.name}/({x},{y})",
            M.out_alg,
            M.in_alg,
            [g for g in M.gens if g.name not in (x, y)],
            M.out_hom,
            M.in_hom,
            M.metadata,
        )
        self.engine = _Cancellation(M, x, y, depth_limit)

    def _delta(self, z, inputs):
        return self.engine.walk(z, inputs, Path(self.gen[z].left), "Z")


class Transferred(DABimodule):
    """Operations moved onto a retract Z of M by generator-level maps (f, g, T).

    delta^Z_1 = g delta_1 f, and with n >= 1 inputs delta^Z is the sum of
    g delta_+ (T delta_+)^k f, each delta_+ consuming a nonempty block.
    ``f``, ``g`` and ``T`` map generator names to sets of (path, generator).
    """

    def __init__(self, M: DABimodule, keep: Sequence[str], f, g, T, name=None, depth_limit: int = 16):
        super().__init__(name or f"{M.name}|Z", M.out_alg, M.in_alg,
                         [M.gen[n] for n in keep], M.out_hom, M.in_hom, M.metadata)
        self.inner, self.f1, self.g1, self.T1 = M, f, g, T
        self.depth_limit = depth_limit

    def _push(self, prod: Path, terms, acc: set | None = None):
        mul = self.out_alg.mul_paths
        res = set() if acc is None else acc
        for c, w in terms:
            pc = mul(prod, c)
            if pc is not None:
                add_terms(res, [(pc, w)])
        return res

    def _delta(self, x, inputs):
        n = len(inputs)
        acc: set = set()
        stack = [(0, b, y, 0) for b, y in self.f1.get(x, ())]
        while stack:
            pos, prod, y, depth = stack.pop()
            if depth > self.depth_limit:
                raise DepthLimitExceeded(f"transfer chain deeper than {self.depth_limit}")
            stops = (0,) if n == 0 else range(pos + 1, n + 1)
            for q in stops:
                for b, z in self.inner.delta(y, inputs[pos:q]):
                    pb = self.out_alg.mul_paths(prod, b)
                    if pb is None:
                        continue
                    if q == n:
                        self._push(pb, self.g1.get(z, ()), acc)
                    elif n:
                        for c, w in self._push(pb, self.T1.get(z, ())):
                            stack.append((q, c, w, depth + 1))
        return acc


class _CancelF(DAMorphism):
    def __init__(self, Z: Cancelled, M: DABimodule):
        super().__init__(f"f[{Z.engine.x}]", Z, M)
        self.engine = Z.engine

    def _apply(self, z, inputs):
        acc = self.engine.walk(z, inputs, Path(self.source.gen[z].left), "x")
        if not inputs:
            add_terms(acc, [(Path(self.source.gen[z].left), z)])
        return acc


class _CancelG(DAMorphism):
    def __init__(self, M: DABimodule, Z: Cancelled):
        super().__init__(f"g[{Z.engine.x}]", M, Z)
        self.engine = Z.engine

    def _apply(self, w, inputs):
        e = self.engine
        if w == e.x:
            return ()
        if w == e.y:
            return e.walk(e.x, inputs, Path(self.source.gen[w].left), "Z")
        return () if inputs else {(Path(self.source.gen[w].left), w)}


class _CancelT(DAMorphism):
    def __init__(self, M: DABimodule, Z: Cancelled):
        super().__init__(f"T[{Z.engine.x}]", M, M, degree=1)
        self.engine = Z.engine

    def _apply(self, w, inputs):
        e = self.engine
        if w != e.y:
            return ()
        acc = e.walk(e.x, inputs, Path(self.source.gen[w].left), "x")
        if not inputs:
            add_terms(acc, [(Path(self.source.gen[w].left), e.x)])
        return acc


def find_unit_arrow(M: DABimodule) -> tuple[str, str] | None:
    """A delta^1_1 term with idempotent output between distinct generators.

    Prefers sources of extreme homological degree, then generator names.
    """
    cands = []
    for g in M.gens:
        for out, y in M.delta(g.name, ()):
            if out.is_idempotent and y != g.name:
                cands.append((-abs(g.hom), g.name, y))
    if not cands:
        return None
    _, x, y = min(cands)
    return x, y


@dataclass
class Reduction:
    result: DABimodule
    f: DAMorphism  # result -> original
    g: DAMorphism  # original -> result
    T: DAMorphism  # original -> original, degree +1
    cancelled: list[tuple[str, str]]


def cancel(M: DABimodule, x: str, y: str, depth_limit: int = 16) -> Reduction:
    if (Path(M.gen[x].left), y) not in M.delta(x, ()):
        raise DAError(f"no unit arrow {x} -> {y}")
    Z = Cancelled(M, x, y, depth_limit)
    return Reduction(Z, _CancelF(Z, M), _CancelG(M, Z), _CancelT(M, Z), [(x, y)])


def reduce(M: DABimodule, depth_limit: int = 16, max_steps: int = 64) -> Reduction:
    """Cancel unit differential arrows until none remain.

    The returned f, g, T satisfy g o f = id and f o g = id + dT.
    """
    current = Reduction(M, IdentityMorphism(M), IdentityMorphism(M), ZeroMorphism("0", M, M, 1), [])
    for _ in range(max_steps):
        hit = find_unit_arrow(current.result)
        if hit is None:
            return current
        step = cancel(current.result, *hit, depth_limit=depth_limit)
        # T_total = T_old + f_old o T_step o g_old
        T = SumMorphism(current.T, compose(current.f, compose(step.T, current.g)))
        T.degree = 1
        current = Reduction(
            step.result,
            compose(current.f, step.f),
            compose(step.g, current.g),
            T,
            current.cancelled + step.cancelled,
        )
    raise DAError("reduction did not terminate within max_steps")


# -- isomorphism by relabeling ------------------------------------------------


@dataclass
class Relabeling:
    status: str  # "found", "graded counts differ", "no relabeling within bounds", "not found within budget"
    mapping: dict[str, str] | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_relabeling(
    M: DABimodule,
    N: DABimodule,
    max_inputs: int = 3,
    basis_len: int = 4,
    k_max: int = 0,
    u_elements: Sequence[Element] = (),
    budget: int = 100_000,
) -> Relabeling:
    """Search a generator bijection M -> N matching every bounded arrow.

    Generators are first split by idempotents, gradings and the shape of
    their arrows; a backtracking search then tries bijections inside the
    classes.  Failure only means no relabeling exists within the bounds (or
    the budget ran out), not that M and N are non-isomorphic.
    """
    if M.in_alg is not N.in_alg or M.out_alg is not N.out_alg:
        raise DAError("relabeling needs bimodules over the same algebras")
    pool = input_pool(M.in_alg, basis_len, u_elements, k_max)
    arrows_M = sorted(nonzero_arrows(M, max_inputs, pool))
    arrows_N = set(nonzero_arrows(N, max_inputs, pool))

    def base(g: Gen):
        return (g.left, g.right, g.hom, g.grading)

    def signature(B: DABimodule, arrows) -> dict[str, tuple]:
        out: dict[str, list] = defaultdict(list)
        for x, seq, a, y in arrows:
            out[x].append(("out", seq, a, base(B.gen[y])))
            out[y].append(("in", seq, a, base(B.gen[x])))
        return {g.name: (base(g), tuple(sorted(out[g.name], key=repr))) for g in B.gens}

    sig_M, sig_N = signature(M, arrows_M), signature(N, arrows_N)
    classes: dict[tuple, list[str]] = defaultdict(list)
    for name, sig in sig_N.items():
        classes[sig].append(name)
    count_M: dict[tuple, int] = defaultdict(int)
    for sig in sig_M.values():
        count_M[sig] += 1
    if sorted(map(base, M.gens), key=repr) != sorted(map(base, N.gens), key=repr):
        return Relabeling("graded counts differ", None, 0)
    if any(len(classes[s]) != c for s, c in count_M.items()):
        return Relabeling("no relabeling within bounds", None, 0)

    order = sorted(M.gens, key=lambda g: (len(classes[sig_M[g.name]]), g.name))
    mapping: dict[str, str] = {}
    used: set[str] = set()
    nodes = 0

    def consistent() -> bool:
        for x, seq, a, y in arrows_M:
            if x in mapping and y in mapping and (mapping[x], seq, a, mapping[y]) not in arrows_N:
                return False
        return True

    def search(k: int) -> bool | None:
        nonlocal nodes
        if k == len(order):
            return {(mapping[x], seq, a, mapping[y]) for x, seq, a, y in arrows_M} == arrows_N
        for cand in classes[sig_M[order[k].name]]:
            if cand in used:
                continue
            nodes += 1
            if nodes > budget:
                return None
            mapping[order[k].name] = cand
            used.add(cand)
            if consistent():
                res = search(k + 1)
                if res is None or res:
                    return res
            used.discard(cand)
            del mapping[order[k].name]
        return False

    res = search(0)
    if res is None:
        return Relabeling("not found within budget", None, nodes)
    if not res:
        return Relabeling("no relabeling within bounds", None, nodes)
    return Relabeling("found", dict(mapping), nodes)


# -- the associated dg bimodule ------------------------------------------------


class DGBimodule:
    """A box M for M with delta^1_j = 0 when j >= 3.

    Elements are sets of (a, x) with a a path of the output algebra ending at
    the left idempotent of x.
    """

    def __init__(self, M: DABimodule, basis_len: int = 4):
        self.M = M
        A = M.out_alg
        self.basis = [
            (a, g.name) for g in M.gens for a in A.basis(basis_len) if A.end(a) == g.left
        ]

    def degree(self, elt: tuple[Path, str]) -> tuple[int, object]:
        a, x = elt
        g = self.M.gen[x]
        return g.hom, self.M.out_hom(self.M.out_alg.degree(a)) + g.grading

    def _times(self, a: Path, terms) -> set:
        return times_left(self.M.out_alg, a, terms)

    def d(self, elt) -> set:
        a, x = elt
        return self._times(a, self.M.delta(x, ()))

    def d_set(self, elts) -> set:
        acc: set = set()
        for e in elts:
            add_terms(acc, self.d(e))
        return acc

    def act_right(self, elt, c: Path) -> set:
        a, x = elt
        return self._times(a, self.M.delta(x, (c,)))

    def act_right_set(self, elts, c: Path) -> set:
        acc: set = set()
        for e in elts:
            add_terms(acc, self.act_right(e, c))
        return acc

    def act_left(self, b: Path, elt) -> set:
        a, x = elt
        ab = self.M.out_alg.mul_paths(b, a)
        return set() if ab is None else {(ab, x)}

    def dimensions(self) -> dict[tuple, int]:
        counts: dict[tuple, int] = defaultdict(int)
        for e in self.basis:
            counts[self.degree(e)] += 1
        return dict(counts)


def box_tensor_alg(M: DABimodule, basis_len: int = 4, check_len: int = 4) -> DGBimodule:
    arity = M.max_arity()
    if arity is not None and arity > 2:
        raise DAError(f"{M.name} has higher actions; the algebra box tensor needs delta_j = 0 for j >= 3")
    prof = arity_profile(M, 3, check_len)
    if any(j > 2 for j in prof):
        raise DAError(f"{M.name} has higher actions; the algebra box tensor needs delta_j = 0 for j >= 3")
    return DGBimodule(M, basis_len)


def verify_dg(D: DGBimodule, input_len: int = 4) -> list[CheckResult]:
    """d^2 = 0, degree drop by one, Leibniz rule and associativity of the right action."""
    M = D.M
    pool = [p for p in M.in_alg.basis(input_len)]
    results = []
    bad = None
    for e in D.basis:
        if D.d_set(D.d(e)):
            bad = f"d^2 != 0 on {e}"
            break
        h, gr = D.degree(e)
        for t in D.d(e):
            if D.degree(t) != (h - 1, gr):
                bad = f"d does not lower degree by one on {e}"
                break
        if bad:
            break
    results.append(CheckResult(f"dg {M.name}: d^2=0 and degree", bad is None, len(D.basis), bad))
    bad = None
    checked = 0
    for e in D.basis:
        for c in pool:
            checked += 1
            lhs = D.d_set(D.act_right(e, c))
            rhs = D.act_right_set(D.d(e), c)
            if lhs != rhs:
                bad = f"Leibniz fails on {e} * {M.in_alg.path_str(c)}"
                break
            for c2 in pool:
                cc = M.in_alg.mul_paths(c, c2)
                one = D.act_right_set(D.act_right(e, c), c2)
                two = D.act_right(e, cc) if cc is not None else set()
                if one != two:
                    bad = f"right action not associative on {e}"
                    break
            if bad:
                break
        if bad:
            break
    results.append(CheckResult(f"dg {M.name}: bimodule axioms", bad is None, checked, bad))
    return results
