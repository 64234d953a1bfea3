from fractions import Fraction

import pytest

from bordered_ks.constructions import (
    build_crossing,
    build_induced_crossing,
    build_R,
    build_rest_R,
)
from bordered_ks.constructions.crossing import decorated_alias, load_table, negative_table, u_inputs
from bordered_ks.constructions.theorem1 import decomposition_generators, verify_theorem1
from bordered_ks.constructions.witnesses import (
    build_theorem_witnesses,
    generator_map,
    lemma_model,
    transferred_arrow_counts,
)
from bordered_ks.dastruct import instances, input_pool, verify_gradings
from bordered_ks.grading import AlexanderGrading, RefinedGrading, epsilon
from bordered_ks.pathalg import AlgebraError, Path

HALF = Fraction(1, 2)


def tau(m, j, c=HALF):
    return RefinedGrading.tau(m, j, c)


def beta(m, j, c=HALF):
    return RefinedGrading.beta(m, j, c)


# -- algebras and theorem 1 -----------------------------------------------------------


@pytest.mark.parametrize("m", [2, 3])
def test_theorem1_small(osz, m):
    results = verify_theorem1(osz(m), maxlen=6)
    assert all(r.ok for r in results), [r.line() for r in results if not r.ok]


def test_decomposition_generators_sum_to_total(osz):
    from bordered_ks.constructions.algebras import u_sum

    O = osz(4)
    gens = decomposition_generators(O)
    assert len(gens) == 4
    total = O.Clbot.zero()
    for g in gens:
        total = total + g
    assert total == u_sum(O.Clbot, 4)


def test_rejects_small_m():
    from bordered_ks.constructions.algebras import build_osz_algebras

    with pytest.raises(AlgebraError):
        build_osz_algebras(1)


# -- crossing bimodules ---------------------------------------------------------------------


def test_positive_gradings(osz):
    m, i = 4, 2
    P = build_crossing(m, i, "pos", alg=osz(m).Cl)
    g = P.gen
    assert (g["W"].hom, g["W"].grading) == (1, beta(m, i))
    assert (g["E"].hom, g["E"].grading) == (1, tau(m, i + 1))
    assert (g["N"].hom, g["N"].grading) == (1, beta(m, i) + tau(m, i + 1))
    assert g["S(0)"].hom == 0 and g["S(0)"].grading == RefinedGrading.zero(2 * m)
    assert [epsilon(g[n].grading) for n in ("S(1)", "W", "E", "N")] == [0, 1, 0, 1]


def test_negative_gradings(osz):
    m, i = 4, 2
    N = build_crossing(m, i, "neg", alg=osz(m).Cl)
    g = N.gen
    assert (g["W"].hom, g["W"].grading) == (-1, -tau(m, i))
    assert (g["E"].hom, g["E"].grading) == (-1, -beta(m, i + 1))
    assert (g["N"].hom, g["N"].grading) == (-1, -tau(m, i) - beta(m, i + 1))
    assert [epsilon(g[n].grading) for n in ("W", "E", "N")] == [0, -1, -1]


def test_metadata(osz):
    P = build_crossing(3, 1, alg=osz(3).Cl)
    q = Fraction(1, 4)
    assert P.metadata["alexander_shift"] == AlexanderGrading.from_values([-q, -q, 0])
    assert P.metadata["aliases"]["S(0)"] == "_(0)S^(0)"
    assert decorated_alias("W", 1, 0) == "_(1)W^(0)"
    assert P.in_hom.name == "swap1"


def test_last_index_deletes_generators(osz):
    for m in (3, 4, 5):
        for sign in ("pos", "neg"):
            names = {g.name for g in build_crossing(m, m - 1, sign, alg=osz(m).Cl).gens}
            assert "E" not in names and f"S({m - 1})" not in names
            assert {"W", "N"} <= names and len(names) == m + 1


def test_negative_table_rule():
    pos = load_table()
    neg = negative_table(pos)
    assert len(neg["arrows"]) == len(pos["arrows"])
    for a, b in zip(pos["arrows"], neg["arrows"]):
        assert (b["source"], b["target"]) == (a["target"], a["source"])
        swapped = [w.translate(str.maketrans("RL", "LR")) for w in a["inputs"]]
        assert b["inputs"] == (swapped[::-1] if len(swapped) == 2 else swapped)
    assert negative_table(neg)["arrows"] == pos["arrows"]


def test_data_file_has_families():
    table = load_table()
    assert sum("^k" in " ".join(a["inputs"]) for a in table["arrows"]) >= 10


def test_crossing_parametric_family_instance(osz):
    O = osz(3)
    P = build_crossing(3, 1, alg=O.Cl)
    C = O.Cl
    # W -> U_2^k (x) W on input U_1^k, for k = 2
    u1 = C.gen(["R1", "L1", "R1", "L1"]) + C.gen(["L1", "R1", "L1", "R1"])
    lr = next(p for p in u1.terms if p.start == 0)
    out = P.delta("W", (lr,))
    assert (C.path(["R2", "L2", "R2", "L2"]), "W") in out


def test_crossing_index_errors(osz):
    with pytest.raises(AlgebraError):
        build_crossing(3, 3)
    with pytest.raises(ValueError):
        build_crossing(3, 1, "up")
    with pytest.raises(AlgebraError):
        build_R(3, 0)


@pytest.mark.parametrize("sign", ["pos", "neg"])
def test_induced_and_restricted_gradings(osz, sign):
    O = osz(3)
    us = u_inputs(O.Clbot, 3)
    for i in (1, 2):
        for M in (build_induced_crossing(O, i, sign), build_rest_R(O, i, sign)):
            assert verify_gradings(M, 3, 4, 2, us).ok


def test_no_higher_actions_on_r(osz):
    for m in (3, 4):
        for i in range(1, m):
            for sign in ("pos", "neg"):
                assert build_R(m, i, sign, alg=osz(m).A).max_arity() == 2


# -- theorem witnesses -------------------------------------------------------------------------------


def test_generator_correspondence(osz):
    W = build_theorem_witnesses(osz(4), 2, "pos")
    assert set(W.Z.gen) == set(generator_map(4, 2, "pos"))
    assert len(W.Z.gens) == len(W.induced.gens) == 6
    assert W.reduction.cancelled == [("<(2)x(2)>", "<(2)>")]


def test_h_examples(osz):
    O = osz(4)
    W = build_theorem_witnesses(O, 2, "pos")
    C, A = O.Clbot, O.A
    u3 = C.gen(["L3", "R3"])
    lu = C.gen(["L3"]) * (C.gen(["R3", "L3"]) + C.gen(["L3", "R3"]))
    (path,) = lu.terms
    assert W.h.apply("<(3)>", (path,)) == {(A.parse_path("(3|2)"), "N")}
    (u,) = u3.terms
    assert W.h.apply("<(3)>", (u,)) == {(A.parse_path("(3|2)"), "E")}
    for x in W.Z.gens:
        assert not W.h.apply(x.name, ())
    for y in W.induced.gens:
        assert not W.h_p.apply(y.name, ())


def test_lemma_maps(osz):
    O = osz(4)
    pos = build_theorem_witnesses(O, 2, "pos")
    loop = "<(2)x(2|1|2)>"
    assert len(pos.f.apply(loop, ())) == 2
    assert pos.T.apply("<(2)>", ()) == {(Path(2), "<(2)x(2)>")}
    neg = build_theorem_witnesses(O, 2, "neg")
    # the loop generator is discarded in Z', so only the extra term survives
    assert neg.g.apply(loop, ()) == {(O.A.parse_path("(2|1|2)"), "<(2)x(2)>")}


@pytest.mark.parametrize("sign", ["pos", "neg"])
def test_lemma_model_matches_reduction(osz, sign):
    O = osz(4)
    for i in (1, 2, 3):
        W = build_theorem_witnesses(O, i, sign)
        Zl = lemma_model(W)
        pool = input_pool(O.Clbot, 4, u_inputs(O.Clbot, 4), 2)
        for x, seq in instances(W.Z, 3, pool):
            assert Zl.delta(x, seq) == W.Z.delta(x, seq)


def test_transferred_counts(osz):
    O = osz(4)
    assert transferred_arrow_counts(build_theorem_witnesses(O, 2, "pos")) == {2: 3, 3: 6}
    assert transferred_arrow_counts(build_theorem_witnesses(O, 1, "neg")) == {2: 3, 3: 6}
    assert transferred_arrow_counts(build_theorem_witnesses(O, 3, "pos")) == {2: 2, 3: 2}
