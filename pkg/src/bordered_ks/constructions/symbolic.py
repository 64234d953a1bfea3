"""Tiny language for index-relative algebra words used by the arrow data files.

A word is a space separated list of tokens ``R{i+1}``, ``L{i}``, ``U{i}`` with
an optional ``^k`` power marking the parametric slot.  ``U{j}`` means the
element R_j L_j + L_j R_j (or the loop U_m) acting at the current vertex.
"""

from __future__ import annotations

import re

from ..pathalg import AlgebraError, Element, Path, PresentedAlgebra
from .algebras import u_element

_TOKEN = re.compile(r"([RLU])\{([^}]*)\}(\^k)?")


def _index(expr: str, env: dict[str, int]) -> int:
    if not re.fullmatch(r"[\w+\-\s]+", expr):
        raise AlgebraError(f"bad index expression {expr!r}")
    return int(eval(expr, {"__builtins__": {}}, dict(env)))  # noqa: S307 - restricted arithmetic


def parse_word(text: str, env: dict[str, int]) -> list[tuple[str, int, bool]]:
    text = text.strip()
    if text in ("", "1"):
        return []
    out = []
    for tok in text.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise AlgebraError(f"bad token {tok!r}")
        out.append((m.group(1), _index(m.group(2), env), bool(m.group(3))))
    return out


def has_power(text: str) -> bool:
    return "^k" in text


def evaluate(alg: PresentedAlgebra, start: int, text: str, env: dict[str, int], k: int = 0) -> Element:
    """Evaluate a word starting at vertex ``start``; ``^k`` tokens get power k."""
    e = alg.idem(start)
    for letter, j, powered in parse_word(text, env):
        if letter == "U":
            g = u_element(alg, j)
        else:
            name = f"{letter}{j}"
            if name not in alg.arrow_index:
                return alg.zero()
            g = alg.gen(name)
        e = e * (g**k if powered else g)
    return e


def single_path(e: Element) -> Path | None:
    if len(e.terms) == 1:
        return next(iter(e.terms))
    if not e.terms:
        return None
    raise AlgebraError(f"expected a single path, got {e!r}")
