import json

import pytest

from bordered_ks.constructions import build_crossing, build_R, build_induced_crossing
from bordered_ks.serialize import (
    SchemaError,
    dumps,
    from_json,
    loads,
    structurally_equal,
    to_json,
)


def test_r_round_trip(osz):
    R = build_R(3, 1, alg=osz(3).A)
    back = loads(dumps(R))
    assert structurally_equal(R, back)
    assert back.in_alg is R.in_alg


@pytest.mark.parametrize("sign", ["pos", "neg"])
def test_crossing_round_trip(osz, sign):
    P = build_crossing(3, 1, sign, alg=osz(3).Cl)
    text = dumps(P)
    assert '"k_slot"' in text
    back = loads(text)
    assert structurally_equal(P, back)
    assert dumps(back) == text


def test_gradings_are_scaled_integers(osz):
    doc = to_json(build_crossing(3, 1, alg=osz(3).Cl))
    w = next(g for g in doc["generators"] if g["name"] == "W")
    assert w["grading"] == [0, 0, 0, 2, 0, 0]
    assert doc["in_hom"]["name"] == "swap1"


def test_bounded_dump_of_lazy_bimodule(osz):
    O = osz(3)
    ind = build_induced_crossing(O, 1)
    doc = to_json(ind, max_inputs=2, basis_len=3)
    assert doc["bounds"] == {"max_inputs": 2, "basis_len": 3, "k_max": 0}
    back = from_json(doc)
    assert back.gen.keys() == ind.gen.keys()
    assert back.bounds["max_inputs"] == 2


def test_mismatched_idempotent_chain(osz):
    doc = to_json(build_crossing(3, 1, alg=osz(3).Cl))
    arrow = next(a for a in doc["arrows"] if a["inputs"] == [] and a["source"] == "E")
    n = doc["arrows"].index(arrow)
    arrow["target"] = "W"
    with pytest.raises(SchemaError) as err:
        from_json(doc)
    assert err.value.where == f"arrows[{n}] (E -> W)"
    assert "idempotents" in str(err.value)


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d.update(schema="other"), "schema"),
        (lambda d: d.update(version=9), "version"),
        (lambda d: d["out_alg"].update(kind="Q"), "algebra.kind"),
        (lambda d: d["generators"][0].pop("hom"), "generators[0]"),
        (lambda d: d["generators"][0].update(grading="x"), "generators[0].grading"),
        (lambda d: d["arrows"][0].update(out="(0|1|0)"), "arrows[0]"),
        (lambda d: d["arrows"][0].update(out="(0|1|2)"), "arrows[0]"),
        (lambda d: d.update(in_hom={"name": "bad"}), "in_hom"),
    ],
)
def test_schema_errors(osz, mutate, where):
    doc = to_json(build_R(3, 1, alg=osz(3).A))
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        from_json(doc)
    assert err.value.where.startswith(where)


def test_invalid_json():
    with pytest.raises(SchemaError, match="line"):
        loads("{not json")


def test_dump_is_deterministic(osz):
    P = build_crossing(4, 2, alg=osz(4).Cl)
    assert dumps(P) == dumps(build_crossing(4, 2, alg=osz(4).Cl))
    json.loads(dumps(P))
