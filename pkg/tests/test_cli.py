import io
import json
import subprocess
import sys

from morphic.cli import dispatch
from morphic.words import parse_system

VERDICT_FIELDS = {"class", "exponent", "fired_rule", "k_star", "horizons", "counterexample", "evolutions", "notes"}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify_json(fixture_path):
    code, out, _ = run("classify", fixture_path("fix_a"), "--json")
    doc = json.loads(out)
    assert code == 0 and set(doc) == VERDICT_FIELDS
    assert (doc["class"], doc["exponent"], doc["fired_rule"]) == ("PolyExponent", "3/2", "Prop1_4")
    assert doc["horizons"] == {"window": 5, "horizon": 512, "prefix_len": 200_000}


def test_classify_text(fixture_path):
    code, out, _ = run("classify", fixture_path("order2"))
    assert code == 0 and out.startswith("class: Constant\nrule: Prop1_5\n")


def test_measure_guard(fixture_path):
    code, out, err = run("measure", fixture_path("fix_a"), "--prefix-len", 100, "--ns", 1000)
    assert code == 2 and out == "" and "prefix" in err


def test_measure_csv_and_json(fixture_path, tmp_path):
    code, out, _ = run("measure", fixture_path("order2"), "--prefix-len", 10_000, "--ns", "50,100,200")
    assert code == 0 and out == "n,p_n\n50,2\n100,2\n200,2\n"
    target = tmp_path / "t.json"
    code, out, _ = run("measure", fixture_path("order2"), "--prefix-len", 10_000, "--ns", "50,100", "--format", "json", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["entries"] == [{"n": 50, "p_n": 2}, {"n": 100, "p_n": 2}]


def test_verify(fixture_path):
    code, out, _ = run("verify", fixture_path("fix_c"))
    assert code == 0 and "slope: 1.877" in out and out.rstrip().endswith("consistent")
    code, out, _ = run("verify", fixture_path("fix_c"), "--json")
    doc = json.loads(out)
    assert doc["passed"] and set(doc["verdict"]) == VERDICT_FIELDS


def test_verify_mismatch_exits_one(fixture_path):
    code, out, _ = run("verify", fixture_path("fix_e"))
    assert code == 1 and "MISMATCH" in out


def test_orders_and_normalize(fixture_path):
    code, out, _ = run("orders", fixture_path("fix_b"))
    assert code == 0 and out.splitlines()[1].split() == ["a", "inf", "n/a"]
    code, out, _ = run("normalize", fixture_path("fix_b"))
    assert code == 0 and "power: 4" in out and "final periods: ddee deed edde eedd" in out
    code, out, _ = run("normalize", fixture_path("fix_a"), "--emit")
    assert code == 0 and parse_system(out).phi[3] == (3, 2, 2, 1)


def test_blocks(fixture_path):
    code, out, _ = run("blocks", fixture_path("fix_e"), "-k", 2, "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["evolutions_observed"] == 2 and doc["evolutions_origin_closure"] == 2
    assert any(e["origin"] == [2, 2] for e in doc["evolutions"])
    code, out, _ = run("blocks", fixture_path("fix_c"), "--prefix-len", 500)
    assert code == 0 and "by origin closure" in out


def test_usage_errors(fixture_path, tmp_path):
    assert run("frobnicate")[0] == 2
    assert run("classify", tmp_path / "missing.morph")[0] == 2
    bad = tmp_path / "bad.morph"
    bad.write_text("alphabet: a\naxiom: a\nmorphism:\n  a => a a\n")
    code, _, err = run("orders", bad)
    assert code == 2 and "line 4" in err
    assert run("classify", fixture_path("fix_a"), "--window", 2)[0] == 2


def test_deterministic_output(fixture_path):
    first = run("classify", fixture_path("fix_b"), "--json")
    assert first == run("classify", fixture_path("fix_b"), "--json")


def test_module_entry_point(fixture_path):
    proc = subprocess.run(
        [sys.executable, "-m", "morphic", "orders", str(fixture_path("fix_c"))], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "a       3" in proc.stdout
