import csv
import io
import json
import subprocess
import sys

import pytest

from ranktwo import report
from ranktwo.cli import main
from ranktwo.field import get_tower


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv):
    code, out = run(capsys, argv)
    return code, json.loads(out)


# ------------------------------------------------------------------ plumbing


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert capsys.readouterr().out.strip().startswith("ranktwo ")


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ranktwo.cli", "tower", "--p", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj["tower"]["q"] == 3


def test_parameter_errors_exit_2(capsys):
    code, obj = run_json(capsys, ["construct", "--p", "9", "--format", "json", "f4a"])
    assert code == 2
    assert obj["error"]["code"] == "p-not-prime"
    code, obj = run_json(capsys, ["tower", "--p", "4"])
    assert code == 2
    assert obj["error"]["code"] == "p-even"
    code, obj = run_json(capsys, ["tower", "--p", "11"])
    assert code == 2
    assert obj["error"]["code"] == "order-bound"


def test_cap_warning_on_stderr(capsys):
    code = main(["tower", "--p", "3", "--max-q", "11"])
    captured = capsys.readouterr()
    assert code == 0
    assert "order cap raised" in captured.err


# --------------------------------------------------------------------- tower


def test_tower_report(capsys):
    code, obj = run_json(capsys, ["tower", "--p", "5"])
    assert code == 0
    t = get_tower(5, 1)
    assert obj["tower"] == {"p": 5, "h": 1, "q": 5, "modulus": list(t.modulus)}
    assert obj["order"] == 5**6
    assert obj["generator"] == t.generator
    assert obj["nonsquare"] == 2
    assert obj["seed"] == 0
    assert obj["tool"].startswith("ranktwo ")


# ----------------------------------------------------------------- construct


def test_construct_single_twist(capsys):
    code, obj = run_json(capsys, ["construct", "--p", "5", "d-a", "--a", "0"])
    assert code == 0
    assert obj["family"] == "d-a"
    assert obj["nuclei"] == [125, 25, 5, 5]
    assert obj["classification"]["signature"] == ["F5", "external-perp-disjoint"]
    assert len(obj["matrices"]) == 6
    assert all(len(m) == 4 for m in obj["matrices"])
    assert obj["params"]["a_index"] == 0
    assert obj["params"]["xi"] == 2
    assert obj["params"]["xi_index"] == 0


def test_construct_is_deterministic(capsys):
    argv = ["construct", "--p", "5", "d-ab", "--b", "0"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second
    obj = json.loads(first)
    assert obj["nuclei"] == [125, 5, 5, 5]
    assert obj["classification"]["signature"] == ["F3", 3, 0]


def test_construct_code_flags_match_positions(capsys):
    _, by_index = run(capsys, ["construct", "--p", "5", "d-a", "--a", "1"])
    a_code = json.loads(by_index)["params"]["a"]
    _, by_code = run(capsys, ["construct", "--p", "5", "d-a", "--a-code", str(a_code)])
    assert by_index == by_code
    _, with_xi = run(capsys, ["construct", "--p", "5", "d-a", "--a", "1", "--xi", "1"])
    obj = json.loads(with_xi)
    assert obj["params"]["xi"] == 3
    assert obj["params"]["xi_index"] == 1
    _, with_code = run(
        capsys, ["construct", "--p", "5", "d-a", "--a", "1", "--xi-code", "3"]
    )
    assert with_xi == with_code


def test_construct_parameter_resolution_errors(capsys):
    for argv, want in (
        (["construct", "--p", "5", "d-a"], "a-required"),
        (["construct", "--p", "5", "d-a", "--a", "0", "--a-code", "2"], "a-conflict"),
        (["construct", "--p", "5", "d-a", "--a", "93"], "a-range"),
        (["construct", "--p", "5", "d-a", "--a", "0", "--xi", "2"], "xi-range"),
        (["construct", "--p", "5", "d-a", "--a", "0", "--xi", "nope"], "xi"),
        (["construct", "--p", "5", "d-a", "--a", "0", "--xi-code", "4"], "xi-square"),
        (["construct", "--p", "3", "d-ab", "--b", "0"], "family-empty"),
        (["construct", "--p", "5", "s1"], "congruence"),
        (["construct", "--p", "7", "s2"], "congruence"),
        (["construct", "--p", "7", "s1", "--index", "2"], "s1-index"),
    ):
        code, obj = run_json(capsys, argv)
        assert code == 2, argv
        assert obj["error"]["code"] == want


def test_construct_reference_families(capsys):
    code, obj = run_json(capsys, ["construct", "--p", "3", "f4a"])
    assert code == 0
    assert obj["classification"]["signature"] == ["F4a"]
    assert obj["params"]["sigma"] == 1
    code, obj = run_json(capsys, ["construct", "--p", "7", "s1", "--index", "1"])
    assert code == 0
    assert obj["params"]["norm"] == 6
    assert obj["classification"]["signature"] == ["F5", "external-perp-disjoint"]
    code, obj = run_json(capsys, ["construct", "--p", "3", "s2"])
    assert code == 0
    assert obj["classification"]["signature"] == ["F5", "external-perp-disjoint"]


# -------------------------------------------------------------------- survey


def test_survey_single_twist(capsys):
    code, obj = run_json(capsys, ["survey", "--p", "3", "d-a", "--r", "1"])
    assert code == 0
    s = obj["summary"]
    assert s == {
        "rows": 26,
        "valid": 13,
        "errors": 13,
        "signatures": [["F4a"]],
        "orbit_reps": [],
        "orbit_count": 0,
    }
    bad = next(r for r in obj["rows"] if not r["valid"])
    assert bad["error"]["code"] == "a-norm"
    assert bad["a_index"] is None
    good = next(r for r in obj["rows"] if r["valid"])
    assert good["signature"] == ["F4a"]
    assert good["a_index"] is not None


def test_survey_double_twist(capsys):
    code, obj = run_json(capsys, ["survey", "--p", "5", "d-ab", "--r", "1"])
    assert code == 0
    s = obj["summary"]
    assert s["rows"] == 124 and s["valid"] == 62
    assert s["signatures"] == [["F3", 3, 0]]
    good = next(r for r in obj["rows"] if r["valid"])
    assert good["norm_sq"] == 4  # norm(b)^2 = -1 mod 5


def test_survey_rejects_bad_r(capsys):
    code, obj = run_json(capsys, ["survey", "--p", "3", "d-a", "--r", "3"])
    assert code == 2
    assert obj["error"]["code"] == "r-domain"


def test_survey_workers_match_serial(capsys):
    argv = ["survey", "--p", "3", "d-a"]
    _, serial = run(capsys, argv)
    _, pooled = run(capsys, argv + ["--workers", "2"])
    assert serial == pooled


# --------------------------------------------------------------------- check


def test_check_passing_claim(capsys):
    code, obj = run_json(capsys, ["check", "--p", "3", "2.1", "--trials", "3"])
    assert code == 0
    assert obj["claim"] == "2.1"
    assert obj["summary"]["pass"] is True
    assert obj["tower"]["q"] == 3


def test_check_inadmissible_claim(capsys):
    code, obj = run_json(capsys, ["check", "--p", "7", "3.3i"])
    assert code == 2
    assert obj["error"]["code"] == "inadmissible-q"


def test_check_failing_claim_exits_1(capsys, monkeypatch):
    import ranktwo.checks

    def fake(claim, tower, **kw):
        return {"claim": claim, "summary": {"pass": False, "failures": 1}}

    monkeypatch.setattr(ranktwo.checks, "verify_claim", fake)
    code, obj = run_json(capsys, ["check", "--p", "3", "3.1"])
    assert code == 1
    assert obj["summary"]["pass"] is False


# ----------------------------------------------------------- derive, classify


def test_derive_transpose_roundtrip(capsys, tmp_path):
    first = tmp_path / "da.json"
    code = main(["construct", "--p", "5", "d-a", "--a", "0", "--out", str(first)])
    assert code == 0
    assert capsys.readouterr().out == ""
    base = json.loads(first.read_text())

    once = tmp_path / "t1.json"
    code = main(["derive", "transpose", "--in", str(first), "--out", str(once)])
    assert code == 0
    d1 = json.loads(once.read_text())
    assert d1["nuclei"] == [125, 5, 25, 5]
    assert d1["input"]["nuclei"] == [125, 25, 5, 5]
    assert d1["operation"] == "transpose"

    twice = tmp_path / "t2.json"
    code = main(["derive", "transpose", "--in", str(once), "--out", str(twice)])
    assert code == 0
    d2 = json.loads(twice.read_text())
    assert d2["matrices"] == base["matrices"]


def test_derive_dual_preserves_the_profile(capsys, tmp_path):
    src = tmp_path / "dab.json"
    main(["construct", "--p", "5", "d-ab", "--b", "0", "--out", str(src)])
    capsys.readouterr()
    code, obj = run_json(capsys, ["derive", "translation-dual", "--in", str(src)])
    assert code == 0
    assert obj["nuclei"] == obj["input"]["nuclei"] == [125, 5, 5, 5]
    assert obj["signature_change"] == {
        "before": ["F3", 3, 0],
        "after": ["F3", 3, 0],
        "changed": False,
    }


def test_classify_from_stdin(capsys, tmp_path, monkeypatch):
    src = tmp_path / "f4a.json"
    main(["construct", "--p", "3", "f4a", "--out", str(src)])
    capsys.readouterr()
    monkeypatch.setattr("sys.stdin", io.StringIO(src.read_text()))
    code, obj = run_json(capsys, ["classify", "--in", "-"])
    assert code == 0
    assert obj["classification"]["signature"] == ["F4a"]
    assert obj["nuclei"] == [27, 9, 3, 3]
    assert obj["params"]["family"] == "f4a"


def test_spread_input_validation(capsys, tmp_path):
    t = get_tower(3, 1)
    good = {
        "tower": {"p": 3, "h": 1, "modulus": list(t.modulus)},
        "matrices": [[1, 0, 0, 0]] * 6,
    }

    def feed(obj, raw=None):
        path = tmp_path / "in.json"
        path.write_text(raw if raw is not None else json.dumps(obj))
        return run_json(capsys, ["classify", "--in", str(path)])

    code, out = run_json(capsys, ["classify", "--in", str(tmp_path / "absent.json")])
    assert code == 2 and out["error"]["code"] == "input-missing"
    code, out = feed(None, raw="{nope")
    assert code == 2 and out["error"]["code"] == "input-json"
    code, out = feed([1, 2])
    assert code == 2 and out["error"]["code"] == "input-shape"
    code, out = feed({"tower": 5, "matrices": []})
    assert code == 2 and out["error"]["code"] == "input-tower"
    bad_mod = dict(good, tower={"p": 3, "h": 1, "modulus": [1] * 7})
    code, out = feed(bad_mod)
    assert code == 2 and out["error"]["code"] == "input-modulus"
    code, out = feed(dict(good, matrices=[[1, 0, 0, 0]] * 3))
    assert code == 2 and out["error"]["code"] == "input-matrices"
    code, out = feed(good)  # dependent, and the span is degenerate anyway
    assert code == 2 and out["error"]["code"] == "basis-rank"

    g = t.subfield_generator(3)
    g2 = t.mul(g, g)
    broken = {
        "tower": {"p": 3, "h": 1},
        "matrices": [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [g, 0, 0, 1],
            [0, g, 1, 0],
            [g2, 0, 0, g],
            [0, g2, g, 0],
        ],
    }
    code, out = feed(broken)
    assert code == 2 and out["error"]["code"] == "zero-divisor"


# ------------------------------------------------------------------- formats


def test_csv_output_carries_the_json_data(capsys):
    argv = ["construct", "--p", "3", "f4a"]
    _, as_json = run(capsys, argv)
    _, as_csv = run(capsys, argv + ["--format", "csv"])
    payload = json.loads(as_json)
    kv = {r[0]: r[1] for r in csv.reader(io.StringIO(as_csv)) if r and r[0] != "key"}
    for key, value in report.flatten(report.clean(payload)):
        assert kv[key] == report._cell(value)
    assert len(kv) == sum(1 for _ in report.flatten(report.clean(payload)))


def test_text_output_renders(capsys):
    code, out = run(capsys, ["tower", "--p", "3", "--format", "text"])
    assert code == 0
    assert out == report.to_text(json.loads(run(capsys, ["tower", "--p", "3"])[1]))


def test_error_objects_respect_format(capsys):
    code, out = run(capsys, ["tower", "--p", "4", "--format", "csv"])
    assert code == 2
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["key", "value"]
    assert ["error.code", "p-even"] in rows


# --------------------------------------------------------------------- cache


def test_cache_lifecycle(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("RANKTWO_CACHE", raising=False)
    cache = str(tmp_path / "towers")

    code, obj = run_json(capsys, ["cache", "dir", "--cache-dir", cache])
    assert code == 0 and obj["cache_dir"] == cache

    code, obj = run_json(capsys, ["cache", "build", "--p", "3", "--cache-dir", cache])
    assert code == 0
    assert obj["built"]["q"] == 3

    code, obj = run_json(capsys, ["cache", "list", "--cache-dir", cache])
    assert code == 0
    assert [e["file"] for e in obj["entries"]] == ["tower_p3_h1.sfzt"]
    assert obj["entries"][0]["bytes"] > 0

    code, obj = run_json(capsys, ["tower", "--p", "3", "--cache-dir", cache])
    assert code == 0 and obj["cached"] is True

    code, obj = run_json(capsys, ["cache", "build", "--p", "5", "--cache-dir", cache])
    assert code == 0
    code, obj = run_json(capsys, ["cache", "clear", "--p", "3", "--cache-dir", cache])
    assert code == 0 and obj["removed"] == ["tower_p3_h1.sfzt"]
    code, obj = run_json(capsys, ["cache", "clear", "--cache-dir", cache])
    assert code == 0 and obj["removed"] == ["tower_p5_h1.sfzt"]

    code, obj = run_json(capsys, ["cache", "build", "--cache-dir", cache])
    assert code == 2 and obj["error"]["code"] == "p-required"


def test_cache_env_variable(capsys, tmp_path, monkeypatch):
    cache = str(tmp_path / "envcache")
    monkeypatch.setenv("RANKTWO_CACHE", cache)
    code, obj = run_json(capsys, ["cache", "dir"])
    assert code == 0 and obj["cache_dir"] == cache
    code, obj = run_json(capsys, ["tower", "--p", "3"])
    assert code == 0
    assert obj["cache_path"].startswith(cache)
    assert obj["cached"] is True  # resolved through the env cache, so written
