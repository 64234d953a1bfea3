"""Path algebras of quivers over GF(2), presented by oriented rewriting rules.

Paths compose left to right: the arrow ``(i|i+1)`` goes from vertex ``i`` to
vertex ``i+1`` and ``(i-1|i) * (i|i+1)`` is the path ``(i-1|i|i+1)``.
GF(2) coefficients are implicit, so an element is a set of normal-form paths.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

from . import gf2


class AlgebraError(ValueError):
    pass


class Arrow(NamedTuple):
    name: str
    source: int
    target: int
    degree: object


class Path(NamedTuple):
    start: int
    arrows: tuple[int, ...] = ()

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.arrows)

    @property
    def is_idempotent(self) -> bool:
        return not self.arrows


class Rule(NamedTuple):
    lhs: tuple[int, ...]
    rhs: tuple[int, ...] | None  # None means the lhs is zero


def term_key(arrows: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Length first, then lexicographic on arrow index."""
    return (len(arrows), tuple(arrows))


class PresentedAlgebra:
    """Quiver algebra modulo monomial or binomial rewriting rules.

    ``style="ks"`` prints paths as vertex sequences ``(0|1|0)``; otherwise
    paths print as space separated arrow names.
    """

    def __init__(
        self,
        name: str,
        n_vertices: int,
        arrows: Sequence[Arrow],
        rules: Sequence[tuple[str | Sequence[str], str | Sequence[str] | None]],
        zero_degree,
        style: str = "names",
    ):
        self.name = name
        self.n_vertices = n_vertices
        self.arrows = tuple(Arrow(*a) for a in arrows)
        self.zero_degree = zero_degree
        self.style = style
        self.arrow_index = {a.name: k for k, a in enumerate(self.arrows)}
        if len(self.arrow_index) != len(self.arrows):
            raise AlgebraError("arrow names must be unique")
        for a in self.arrows:
            if not (0 <= a.source < n_vertices and 0 <= a.target < n_vertices):
                raise AlgebraError(f"arrow {a.name} has an endpoint out of range")
        self.rules = tuple(self._make_rule(lhs, rhs) for lhs, rhs in rules)
        self._rules_by_first: dict[int, list[Rule]] = defaultdict(list)
        for r in self.rules:
            self._rules_by_first[r.lhs[0]].append(r)
        self._reduce = lru_cache(maxsize=None)(self._reduce_uncached)
        self._mul = lru_cache(maxsize=None)(self._mul_uncached)

    # -- construction helpers -------------------------------------------------

    def _names_to_indices(self, names: str | Sequence[str]) -> tuple[int, ...]:
        if isinstance(names, str):
            names = names.split()
        try:
            return tuple(self.arrow_index[n] for n in names)
        except KeyError as exc:
            raise AlgebraError(f"unknown arrow {exc.args[0]!r} in {self.name}") from None

    def _make_rule(self, lhs, rhs) -> Rule:
        l = self._names_to_indices(lhs)
        if not l or not self.composable(l):
            raise AlgebraError(f"rule lhs {lhs!r} is not a path")
        r = None if rhs is None else self._names_to_indices(rhs)
        if r is not None:
            if not r or not self.composable(r):
                raise AlgebraError(f"rule rhs {rhs!r} is not a path")
            if (self.arrows[l[0]].source, self.arrows[l[-1]].target) != (
                self.arrows[r[0]].source,
                self.arrows[r[-1]].target,
            ):
                raise AlgebraError(f"rule {lhs!r} -> {rhs!r} changes endpoints")
            if self._word_degree(l) != self._word_degree(r):
                raise AlgebraError(f"rule {lhs!r} -> {rhs!r} is not homogeneous")
            if term_key(r) >= term_key(l):
                raise AlgebraError(f"rule {lhs!r} -> {rhs!r} does not decrease the term order")
        return Rule(l, r)

    def composable(self, word: Sequence[int]) -> bool:
        return all(
            self.arrows[a].target == self.arrows[b].source for a, b in zip(word, word[1:])
        )

    def _word_degree(self, word: Sequence[int]):
        d = self.zero_degree
        for a in word:
            d = d + self.arrows[a].degree
        return d

    # -- paths ------------------------------------------------------------------

    def end(self, p: Path) -> int:
        return self.arrows[p.arrows[-1]].target if p.arrows else p.start

    def degree(self, p: Path):
        return self._word_degree(p.arrows)

    def path(self, names: str | Sequence[str] = (), start: int | None = None) -> Path:
        word = self._names_to_indices(names)
        if word:
            if not self.composable(word):
                raise AlgebraError(f"{names!r} is not a path")
            s = self.arrows[word[0]].source
            if start is not None and start != s:
                raise AlgebraError("start vertex does not match the first arrow")
            return Path(s, word)
        if start is None:
            raise AlgebraError("an empty path needs a start vertex")
        return Path(start)

    def path_str(self, p: Path) -> str:
        if self.style == "ks":
            verts = [p.start] + [self.arrows[a].target for a in p.arrows]
            return "(" + "|".join(map(str, verts)) + ")"
        if not p.arrows:
            return f"I{p.start}"
        return " ".join(self.arrows[a].name for a in p.arrows)

    def parse_path(self, text: str) -> Path:
        text = text.strip()
        m = re.fullmatch(r"\((\d+(?:\|\d+)*)\)", text)
        if m and self.style == "ks":
            verts = [int(v) for v in m.group(1).split("|")]
            names = [f"({a}|{b})" for a, b in zip(verts, verts[1:])]
            return self.path(names, start=verts[0])
        m = re.fullmatch(r"I(\d+)", text)
        if m:
            return Path(int(m.group(1)))
        return self.path(text)

    def _find_rule(self, word: tuple[int, ...]) -> tuple[int, Rule] | None:
        for pos, a in enumerate(word):
            for r in self._rules_by_first.get(a, ()):
                n = len(r.lhs)
                if word[pos : pos + n] == r.lhs:
                    return pos, r
        return None

    def _reduce_uncached(self, p: Path) -> Path | None:
        word = p.arrows
        while True:
            hit = self._find_rule(word)
            if hit is None:
                return Path(p.start, word)
            pos, r = hit
            if r.rhs is None:
                return None
            word = word[:pos] + r.rhs + word[pos + len(r.lhs) :]

    def reduce(self, p: Path) -> Path | None:
        """Normal form of a path; None when it reduces to zero."""
        return self._reduce(p)

    def is_irreducible(self, p: Path) -> bool:
        return self._find_rule(p.arrows) is None

    def _mul_uncached(self, p: Path, q: Path) -> Path | None:
        if self.end(p) != q.start:
            return None
        return self._reduce(Path(p.start, p.arrows + q.arrows))

    def mul_paths(self, p: Path, q: Path) -> Path | None:
        return self._mul(p, q)

    # -- elements ---------------------------------------------------------------

    def element(self, paths: Iterable[Path] = ()) -> Element:
        terms: set[Path] = set()
        for p in paths:
            r = self.reduce(p)
            if r is not None:
                terms ^= {r}
        return Element(self, frozenset(terms))

    def zero(self) -> Element:
        return Element(self, frozenset())

    def idem(self, v: int) -> Element:
        if not 0 <= v < self.n_vertices:
            raise AlgebraError(f"vertex {v} out of range")
        return Element(self, frozenset({Path(v)}))

    def one(self) -> Element:
        return Element(self, frozenset(Path(v) for v in range(self.n_vertices)))

    def gen(self, names: str | Sequence[str]) -> Element:
        return self.element([self.path(names)])

    def parse(self, text: str) -> Element:
        text = text.strip()
        if text == "0":
            return self.zero()
        return self.element(self.parse_path(t) for t in text.split("+"))

    # -- bases and validation ---------------------------------------------------

    def basis(self, max_len: int) -> list[Path]:
        """Irreducible paths of length <= max_len, sorted by (start, end, length, word)."""
        layer = [Path(v) for v in range(self.n_vertices)]
        out = list(layer)
        for _ in range(max_len):
            nxt = []
            for p in layer:
                e = self.end(p)
                for k, a in enumerate(self.arrows):
                    if a.source == e:
                        q = Path(p.start, p.arrows + (k,))
                        if self.is_irreducible(q):
                            nxt.append(q)
            out.extend(nxt)
            layer = nxt
        out.sort(key=lambda p: (p.start, self.end(p), len(p), p.arrows))
        return out

    def graded_basis(self, max_len: int) -> dict[tuple, list[Path]]:
        groups: dict[tuple, list[Path]] = defaultdict(list)
        for p in self.basis(max_len):
            groups[(p.start, self.end(p), self.degree(p))].append(p)
        return dict(groups)

    def check_confluence(self, overlap_bound: int) -> ConfluenceReport:
        """Resolve every critical pair of rule left-hand sides up to the bound."""
        checked = 0
        for r1 in self.rules:
            for r2 in self.rules:
                for word, pos1, pos2 in _overlaps(r1.lhs, r2.lhs):
                    if len(word) > overlap_bound or not self.composable(word):
                        continue
                    checked += 1
                    start = self.arrows[word[0]].source
                    a = self._apply_at(word, pos1, r1, start)
                    b = self._apply_at(word, pos2, r2, start)
                    if a != b:
                        return ConfluenceReport(False, checked, (Path(start, word), a, b))
        return ConfluenceReport(True, checked, None)

    def _apply_at(self, word, pos, rule: Rule, start: int) -> Path | None:
        if rule.rhs is None:
            return None
        new = word[:pos] + rule.rhs + word[pos + len(rule.lhs) :]
        return self.reduce(Path(start, new))

    def homogeneous_degree(self, a: Element):
        degs = {self.degree(p) for p in a.terms}
        if len(degs) != 1:
            raise AlgebraError("element is not homogeneous")
        return degs.pop()

    def with_degrees(self, name: str, degree_of: Callable, zero_degree) -> PresentedAlgebra:
        arrows = [Arrow(a.name, a.source, a.target, degree_of(a.degree)) for a in self.arrows]
        rules = [
            ([self.arrows[k].name for k in r.lhs],
             None if r.rhs is None else [self.arrows[k].name for k in r.rhs])
            for r in self.rules
        ]
        return PresentedAlgebra(name, self.n_vertices, arrows, rules, zero_degree, self.style)

    def __repr__(self) -> str:
        return f"PresentedAlgebra({self.name!r})"


def _overlaps(l1: tuple[int, ...], l2: tuple[int, ...]):
    """Words where l1 and l2 overlap, with their positions in the word."""
    n1, n2 = len(l1), len(l2)
    for k in range(1, min(n1, n2)):
        if l1[n1 - k :] == l2[:k]:
            yield l1 + l2[k:], 0, n1 - k
    if n2 <= n1 and l1 != l2:
        for pos in range(n1 - n2 + 1):
            if l1[pos : pos + n2] == l2:
                yield l1, 0, pos


@dataclass(frozen=True)
class ConfluenceReport:
    ok: bool
    pairs_checked: int
    failure: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


class Element:
    """A GF(2) combination of normal-form paths."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: PresentedAlgebra, terms: frozenset[Path]):
        self.alg = alg
        self.terms = terms

    def __add__(self, other: Element) -> Element:
        self._same(other)
        return Element(self.alg, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: Element) -> Element:
        self._same(other)
        out: set[Path] = set()
        for p in self.terms:
            for q in other.terms:
                r = self.alg.mul_paths(p, q)
                if r is not None:
                    out ^= {r}
        return Element(self.alg, frozenset(out))

    def __pow__(self, n: int) -> Element:
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def _same(self, other: Element) -> None:
        if not isinstance(other, Element) or other.alg is not self.alg:
            raise AlgebraError("elements belong to different algebras")

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, Element) and other.alg is self.alg and other.terms == self.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms, key=lambda p: (len(p), p)))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(self.alg.path_str(p) for p in self)


def identity_grading(d):
    return d


class AlgebraHom:
    """Unital-on-vertices algebra map given on idempotents and arrows.

    ``grading_map`` sends source degrees to target degrees; the constructor
    checks that every rewrite rule of the source maps to an identity in the
    target and that every arrow image is homogeneous of the right degree.
    """

    def __init__(
        self,
        name: str,
        source: PresentedAlgebra,
        target: PresentedAlgebra,
        vertex_images: Sequence[int],
        arrow_images: dict[str, Element],
        grading_map: Callable = identity_grading,
    ):
        self.name = name
        self.source = source
        self.target = target
        self.vertex_images = tuple(vertex_images)
        self.grading_map = grading_map
        self._arrow_images = tuple(arrow_images[a.name] for a in source.arrows)
        self._path_cache: dict[Path, Element] = {}
        self.validate()

    def validate(self) -> None:
        src, tgt = self.source, self.target
        if len(self.vertex_images) != src.n_vertices:
            raise AlgebraError(f"{self.name}: wrong number of vertex images")
        for a, img in zip(src.arrows, self._arrow_images):
            s, t = self.vertex_images[a.source], self.vertex_images[a.target]
            for p in img.terms:
                if p.start != s or tgt.end(p) != t:
                    raise AlgebraError(f"{self.name}: image of {a.name} has wrong endpoints")
            if img and tgt.homogeneous_degree(img) != self.grading_map(a.degree):
                raise AlgebraError(f"{self.name}: image of {a.name} has the wrong degree")
        for r in src.rules:
            lhs = self.on_path(Path(src.arrows[r.lhs[0]].source, r.lhs))
            rhs = tgt.zero() if r.rhs is None else self.on_path(Path(src.arrows[r.rhs[0]].source, r.rhs))
            if lhs != rhs:
                raise AlgebraError(
                    f"{self.name}: relation {src.path_str(Path(0, r.lhs))} is not respected"
                )

    def on_path(self, p: Path) -> Element:
        hit = self._path_cache.get(p)
        if hit is None:
            hit = self.target.idem(self.vertex_images[p.start])
            for a in p.arrows:
                hit = hit * self._arrow_images[a]
            self._path_cache[p] = hit
        return hit

    def __call__(self, a: Element) -> Element:
        if a.alg is not self.source:
            raise AlgebraError(f"{self.name} is not defined on {a.alg.name}")
        out = self.target.zero()
        for p in a.terms:
            out = out + self.on_path(p)
        return out

    def arrow_image(self, name: str) -> Element:
        return self._arrow_images[self.source.arrow_index[name]]

    def is_surjective_on_generators(self) -> bool:
        """Every target arrow (and idempotent) is the image of a source generator."""
        images = {frozenset(i.terms) for i in self._arrow_images if len(i) == 1}
        hit_arrows = {next(iter(t)) for t in images}
        ok_arrows = all(Path(a.source, (k,)) in hit_arrows for k, a in enumerate(self.target.arrows))
        return ok_arrows and set(self.vertex_images) == set(range(self.target.n_vertices))


def identity_hom(alg: PresentedAlgebra) -> AlgebraHom:
    return AlgebraHom(
        "id", alg, alg, range(alg.n_vertices), {a.name: alg.gen(a.name) for a in alg.arrows}
    )


def collapse_grading(alg: PresentedAlgebra, h: Callable, name: str | None = None) -> PresentedAlgebra:
    """Same algebra with every arrow degree replaced by its image under h."""
    return alg.with_degrees(name or f"{alg.name}/{getattr(h, 'name', 'h')}", h, h(alg.zero_degree))


def truncate(
    alg: PresentedAlgebra,
    idem_subset: Iterable[int],
    name: str | None = None,
    excursion_bound: int = 6,
    relation_bound: int = 6,
    rename: dict[str, str] | None = None,
) -> tuple[PresentedAlgebra, dict[str, Path]]:
    """Present the corner algebra e A e for e the sum of the given idempotents.

    New arrows are the arrows inside the subset plus the minimal excursions
    leaving it.  Relations are found as minimal words whose image vanishes;
    only monomial corners are supported.  Returns the algebra and a map from
    each new arrow name to the original path it stands for.
    """
    subset = sorted(set(idem_subset))
    if not subset:
        raise AlgebraError("idempotent subset must be nonempty")
    if subset == list(range(alg.n_vertices)):
        return alg, {a.name: Path(a.source, (k,)) for k, a in enumerate(alg.arrows)}
    inside = set(subset)
    renum = {v: k for k, v in enumerate(subset)}
    rename = rename or {}

    new_arrows: list[Arrow] = []
    images: list[Path] = []

    def walk(p: Path):
        if len(p) > excursion_bound:
            raise AlgebraError("corner excursions exceed the search bound")
        for k, a in enumerate(alg.arrows):
            if a.source != alg.end(p):
                continue
            q = Path(p.start, p.arrows + (k,))
            if not alg.is_irreducible(q):
                continue
            if a.target in inside:
                images.append(q)
            else:
                walk(q)

    for v in subset:
        walk(Path(v))
    images.sort(key=lambda p: (len(p), p.arrows))
    for img in images:
        raw = "".join(alg.arrows[k].name for k in img.arrows)
        new_arrows.append(
            Arrow(rename.get(raw, raw), renum[img.start], renum[alg.end(img)], alg.degree(img))
        )

    def image(word: tuple[int, ...]) -> Path | None:
        p = images[word[0]]
        for k in word[1:]:
            p = alg.mul_paths(p, images[k])
            if p is None:
                return None
        return p

    relations: list[tuple[int, ...]] = []
    seen: dict[Path, tuple[int, ...]] = {}
    layer = [(k,) for k in range(len(new_arrows))]
    for k in range(len(new_arrows)):
        seen[images[k]] = (k,)
    for _ in range(relation_bound - 1):
        nxt = []
        for w in layer:
            for k, a in enumerate(new_arrows):
                if a.source != new_arrows[w[-1]].target:
                    continue
                word = w + (k,)
                if any(word[len(word) - len(r):] == r for r in relations):
                    continue
                img = image(word)
                if img is None:
                    for s in range(len(word) - 1, -1, -1):
                        if image(word[s:]) is None:
                            relations.append(word[s:])
                            break
                    continue
                if img in seen:
                    raise AlgebraError("corner algebra needs non-monomial relations")
                seen[img] = word
                nxt.append(word)
        layer = nxt
    corner = PresentedAlgebra(
        name or f"{alg.name}|{subset}",
        len(subset),
        new_arrows,
        [([new_arrows[k].name for k in r], None) for r in relations],
        alg.zero_degree,
        alg.style,
    )
    return corner, {a.name: img for a, img in zip(new_arrows, images)}


# -- ideals ------------------------------------------------------------------


def _vector(a: Element, index: dict[Path, int]) -> int:
    v = 0
    for p in a.terms:
        v |= 1 << index[p]
    return v


def ideal_piece(gens: Sequence[Element], degree, max_len: int):
    """Echelon basis of the ideal generated by homogeneous gens, in one degree.

    Spans x * g * y over basis paths x, y with len(x) + len(y) bounded by
    max_len minus the longest generator term.  Returns (basis, index) where
    index numbers the paths of that degree with length <= max_len.
    """
    if not gens:
        raise AlgebraError("need at least one generator")
    alg = gens[0].alg
    basis = alg.basis(max_len)
    index = {p: k for k, p in enumerate(p for p in basis if alg.degree(p) == degree)}
    glen = max(len(p) for g in gens for p in g.terms)
    span = gf2.EchelonBasis()
    for g in gens:
        if not g:
            continue
        gdeg = alg.homogeneous_degree(g)
        for x in basis:
            for y in basis:
                if len(x) + len(y) + glen > max_len:
                    continue
                if alg.degree(x) + gdeg + alg.degree(y) != degree:
                    continue
                prod = alg.element([x]) * g * alg.element([y])
                if prod:
                    span.add(_vector(prod, index))
    return span, index


def ideal_membership(gens: Sequence[Element], a: Element, max_len: int) -> bool:
    """Bounded two-sided ideal membership for a homogeneous element a."""
    if not a:
        return True
    alg = a.alg
    glen = max(len(p) for g in gens for p in g.terms)
    if max(len(p) for p in a.terms) > max_len - glen:
        raise AlgebraError("inconclusive: element too long for the length bound")
    span, index = ideal_piece(gens, alg.homogeneous_degree(a), max_len)
    return _vector(a, index) in span


@dataclass
class KernelReport:
    degree: object
    dim_piece: int
    dim_kernel: int
    dim_ideal: int
    ideal_in_kernel: bool

    @property
    def ok(self) -> bool:
        return self.ideal_in_kernel and self.dim_kernel == self.dim_ideal


def complete_degrees(alg: PresentedAlgebra, max_len: int) -> list[int]:
    """Integer degrees whose whole graded piece lies in length <= max_len.

    Valid for nonnegative integer arrow degrees: every irreducible path longer
    than max_len has a prefix of length max_len + 1, so its degree is at least
    the minimum over those prefixes.
    """
    if any(not isinstance(a.degree, int) or a.degree < 0 for a in alg.arrows):
        raise AlgebraError("needs nonnegative integer arrow degrees")
    longer = [p for p in alg.basis(max_len + 1) if len(p) == max_len + 1]
    floor = min((alg.degree(p) for p in longer), default=None)
    degs = sorted({alg.degree(p) for p in alg.basis(max_len)})
    return [d for d in degs if floor is None or d < floor]


def kernel_equals_ideal(hom: AlgebraHom, gens: Sequence[Element], max_len: int) -> list[KernelReport]:
    """Compare ker(hom) with the ideal generated by gens in each complete degree."""
    alg = hom.source
    tgt_index = {p: k for k, p in enumerate(hom.target.basis(max(4, max_len)))}
    reports = []
    for d in complete_degrees(alg, max_len):
        span, index = ideal_piece(gens, d, max_len)
        paths = sorted(index, key=index.get)
        cols = [_vector(hom.on_path(p), tgt_index) for p in paths]
        ker = gf2.kernel(cols)
        ker_span = gf2.EchelonBasis(ker)
        inside = all(v in ker_span for v in span.pivots.values())
        reports.append(KernelReport(d, len(paths), len(ker), span.rank, inside))
    return reports
