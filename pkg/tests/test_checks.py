import pytest

from ranktwo import checks
from ranktwo.errors import ParameterError


def all_pass(report) -> bool:
    return report["summary"]["pass"] and report["summary"]["failures"] == 0


def every_check(report):
    for case in report["cases"]:
        for ck in case["checks"]:
            yield case["params"], ck


# ----------------------------------------------------------------- arguments


def test_argument_validation(t3):
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("9.9", t3)
    assert e.value.code == "unknown-claim"
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.1", t3, r_values=(0, 1))
    assert e.value.code == "r-domain"
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.1", t3, r_values=())
    assert e.value.code == "r-domain"
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("2.1", t3, trials=0)
    assert e.value.code == "trials"


def test_claim_list_is_fixed():
    assert checks.CLAIMS == ("2.1", "3.1", "3.2", "3.3i", "3.3ii", "3.4")


# ------------------------------------------------------------- report layout


def test_report_layout(t3):
    rep = checks.verify_claim("3.1", t3)
    assert set(rep) == {"claim", "q", "h", "r", "cases", "summary", "tool"}
    assert rep["claim"] == "3.1"
    assert rep["q"] == 3 and rep["h"] == 1
    assert rep["r"] == [1, 2]
    assert rep["tool"].startswith("ranktwo ")
    s = rep["summary"]
    assert s["cases"] == len(rep["cases"])
    assert s["checks"] == sum(len(c["checks"]) for c in rep["cases"])
    assert s["failures"] == 0 and s["pass"] is True
    for params, ck in every_check(rep):
        assert isinstance(params, dict)
        assert set(ck) - {"evidence"} == {"name", "pass"}


# ---------------------------------------------------------------- claim 2.1


def test_random_graph_roundtrips(t3):
    rep = checks.verify_claim("2.1", t3, trials=5, seed=0)
    assert all_pass(rep)
    assert rep["seed"] == 0
    assert rep["r"] is None
    assert rep["summary"]["cases"] == 5
    assert rep["summary"]["trials"] == 5
    names = {ck["name"] for _, ck in every_check(rep)}
    assert names == {"scattered", "carrier-lines-recovered", "lines-are-graph-joins"}


def test_random_graph_determinism(t3):
    a = checks.verify_claim("2.1", t3, trials=4, seed=11)
    b = checks.verify_claim("2.1", t3, trials=4, seed=11)
    c = checks.verify_claim("2.1", t3, trials=4, seed=12)
    assert a == b
    assert a != c
    assert all_pass(c)


# ---------------------------------------------------------------- claim 3.1


def test_contained_line_claim(t3):
    rep = checks.verify_claim("3.1", t3)
    assert all_pass(rep)
    # one reference case plus 13 twist parameters for each of r = 1, 2
    assert rep["summary"]["cases"] == 1 + 13 * 2
    assert rep["summary"]["a_count"] == 13
    ref = rep["cases"][0]
    assert ref["params"]["family"] == "f4a"
    assert {ck["name"] for ck in ref["checks"]} == {
        "reference-contained-line-family",
        "reference-nuclei",
    }


# ---------------------------------------------------------------- claim 3.2


def test_scattered_twist_claim(t5):
    rep = checks.verify_claim("3.2", t5, r_values=(1,))
    assert all_pass(rep)
    # 62 scattered parameters plus the family-level case
    assert rep["summary"]["cases"] == 63
    assert rep["summary"]["orbit_count"] == 1
    assert rep["summary"]["floor"] == 1.0
    tail = rep["cases"][-1]
    assert tail["params"] == {"scope": "family-level"}
    names = {ck["name"] for ck in tail["checks"]}
    assert names == {"isotopy-class-floor", "known-canonical-exclusion"}
    floor_ck = next(ck for ck in tail["checks"] if ck["name"] == "isotopy-class-floor")
    assert floor_ck["evidence"]["orbit_reps"] == [4]


# --------------------------------------------------------------- claim 3.3i


def test_heavy_point_twist_claim(t5, t7):
    rep = checks.verify_claim("3.3i", t5, r_values=(1,))
    assert all_pass(rep)
    assert rep["summary"]["cases"] == 63
    assert rep["summary"]["b_count"] == 62
    tail = rep["cases"][-1]
    mins = next(ck for ck in tail["checks"] if ck["name"] == "minus-one-is-square")
    assert mins["evidence"]["q_mod_4"] == 1
    # at q = 7 no admissible b squares to norm -1
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.3i", t7)
    assert e.value.code == "inadmissible-q"


# -------------------------------------------------------------- claim 3.3ii


def test_scattered_double_twist_inadmissible_q(t5):
    # at q = 5 every valid b has norm(b^2) = -1, so the scattered variant
    # has empty hypothesis
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.3ii", t5)
    assert e.value.code == "inadmissible-q"


# ---------------------------------------------------------------- claim 3.4


def test_derived_set_claim(t5):
    rep = checks.verify_claim("3.4", t5, sample=2)
    assert all_pass(rep)
    # two samples per family per r, plus the family-level exclusions
    assert rep["summary"]["cases"] == 9
    assert rep["summary"]["a_sampled"] == 2
    assert rep["summary"]["b_sampled"] == 2
    tail = rep["cases"][-1]
    names = {ck["name"] for ck in tail["checks"]}
    assert names == {"known-canonical-exclusion", "known-canonical-dual-exclusion"}


def test_derived_set_claim_sample_one(t5):
    rep = checks.verify_claim("3.4", t5, r_values=(1,), sample=1)
    assert all_pass(rep)
    assert rep["summary"]["cases"] == 3
    fams = [c["params"].get("family") for c in rep["cases"][:2]]
    assert fams == ["d-a", "d-ab"]


def test_derived_set_claim_inadmissible(t3):
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.4", t3)
    assert e.value.code == "inadmissible-q"


def test_empty_scattered_family_inadmissible(t3):
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.2", t3)
    assert e.value.code == "inadmissible-q"
    with pytest.raises(ParameterError) as e:
        checks.verify_claim("3.3i", t3)
    assert e.value.code == "inadmissible-q"
