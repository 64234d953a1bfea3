"""Bounded verification that ker(phi) is the ideal generated by U_1 + ... + U_m."""

from __future__ import annotations

from ..dastruct import CheckResult
from ..pathalg import Element, ideal_membership, kernel_equals_ideal
from .algebras import OSzAlgebras, u_element, u_sum


def decomposition_generators(algs: OSzAlgebras) -> list[Element]:
    """R_1 L_1, L_i R_i + R_{i+1} L_{i+1} (1 <= i <= m-2) and L_{m-1} R_{m-1} + U_m."""
    C, m = algs.Clbot, algs.m
    gens = [C.gen(["R1", "L1"])]
    for i in range(1, m - 1):
        gens.append(C.gen([f"L{i}", f"R{i}"]) + C.gen([f"R{i + 1}", f"L{i + 1}"]))
    gens.append(C.gen([f"L{m - 1}", f"R{m - 1}"]) + C.gen(f"U{m}"))
    return gens


def _kernel_check(name, algs, gens, maxlen) -> CheckResult:
    reports = kernel_equals_ideal(algs.phi, gens, maxlen)
    bad = [r for r in reports if not r.ok]
    detail = {int(r.degree): (r.dim_piece, r.dim_kernel, r.dim_ideal) for r in reports}
    failure = None
    if bad:
        r = bad[0]
        failure = f"degree {r.degree}: kernel {r.dim_kernel}, ideal {r.dim_ideal}, ideal inside kernel {r.ideal_in_kernel}"
    return CheckResult(name, not bad and bool(reports), len(reports), failure, detail)


def verify_theorem1(algs: OSzAlgebras, maxlen: int = 8) -> list[CheckResult]:
    """Degreewise kernel comparison, the decomposition of the ideal and U_i^2 membership."""
    m, C = algs.m, algs.Clbot
    total = u_sum(C, m)
    decomp = decomposition_generators(algs)
    results = [
        CheckResult("phi is surjective on generators", algs.phi.is_surjective_on_generators(), 1),
        _kernel_check("ker phi = <U_1+...+U_m>", algs, [total], maxlen),
        _kernel_check("ker phi = <decomposition generators>", algs, decomp, maxlen),
    ]
    both = all(ideal_membership([total], g, maxlen) for g in decomp)
    back = ideal_membership(decomp, total, maxlen)
    idem_parts = all(
        (C.idem(v) * total) in (d for d in decomp) for v in range(m)
    )
    results.append(CheckResult(
        "ideal decomposition", both and back and idem_parts, len(decomp) + 1,
        None if both and back and idem_parts else "generating sets differ",
    ))
    squares = [u_element(C, i) ** 2 for i in range(1, m + 1)]
    bad = [i + 1 for i, sq in enumerate(squares) if not ideal_membership([total], sq, maxlen)]
    results.append(CheckResult(
        "U_i^2 in <U_1+...+U_m>", not bad, m, f"fails for i = {bad}" if bad else None,
    ))
    return results
