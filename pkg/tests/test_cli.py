import json

import pytest

from morsebranch import golden
from morsebranch.cli import UsageError, main, parse_W, parse_budget
from morsebranch.graph import GAMMA_RULES, Part
from morsebranch.groups import nontriviality_certificate
from morsebranch.relators import presentation


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv("MORSEBRANCH_OUT", str(tmp_path / "reports"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def report(out, name):
    return json.loads((out / "reports" / f"{name}.json").read_text())


def test_gamma_verify(out):
    assert main(["gamma", "verify"]) == 0
    r = report(out, "gamma-verify")
    assert r["derived"]["vertices"] == 36 and r["derived"]["edges"] == 72
    assert r["derived"]["girth"] == 6
    assert r["checks"]["four_regular"]["passed"]
    assert r["tool"] == "morsebranch" and len(r["input_digest"]) == 64


def test_present_example(out):
    assert main(["present", "--t", "2", "--p", "3", "--W", "1", "--out", "p.json"]) == 0
    data = json.loads((out / "p.json").read_text())
    assert len(data["relators"]) == 16 and sum(data["power_flags"]) == 1


@pytest.mark.parametrize("argv,flag", [
    (["present", "--t", "2", "--p", "3", "--W", "5", "--out", "p.json"], "--W"),
    (["present", "--t", "2", "--p", "4", "--W", "1", "--out", "p.json"], "--p"),
    (["present", "--t", "0", "--p", "3", "--out", "p.json"], "--t"),
    (["gamma", "cover", "--p", "9"], "--p"),
    (["abelianize", "--pres", "missing.json"], "--pres"),
])
def test_usage_errors_name_the_flag(out, capsys, argv, flag):
    assert main(argv) == 2
    assert flag in capsys.readouterr().err


def test_argparse_errors_exit_2(out):
    with pytest.raises(SystemExit) as exc:
        main(["cover", "build"])
    assert exc.value.code == 2


def test_cover_build_reports_failure(out):
    assert main(["cover", "build", "--t", "2", "--out", "z2.txt"]) == 1
    r = report(out, "cover-build-t2")
    assert r["checks"]["counts"]["passed"]
    assert not r["checks"]["z0_connected"]["passed"]
    assert len(r["checks"]["z0_connected"]["witnesses"]) == 2
    assert (out / "z2.txt").read_text().startswith("morsebranch-truncation v1\nt 2\n")


def test_quotient_commands(out):
    P = presentation(1, 2, (1,))
    (out / "p.json").write_text(json.dumps(P.to_json()))
    hom = nontriviality_certificate(P, [1], 4, 10**6)[1]
    (out / "h.json").write_text(json.dumps(hom.to_json()))
    assert main(["quotient", "eval", "--pres", "p.json", "--hom", "h.json"]) == 0
    bad = {"degree": 2, "images": ["(0 1)"] * P.generator_count}
    (out / "bad.json").write_text(json.dumps(bad))
    assert main(["quotient", "eval", "--pres", "p.json", "--hom", "bad.json"]) == 1
    assert report(out, "quotient-eval")["checks"]["all_relators_satisfied"]["witnesses"]
    assert main(["quotient", "search", "--pres", "p.json", "--n", "2", "--budget", "10^3"]) == 0
    assert main(["abelianize", "--pres", "p.json"]) == 0
    assert report(out, "abelianize")["derived"]["free_rank"] == 66


def test_reports_are_byte_stable_and_atomic(out):
    main(["complex", "verify"])
    first = (out / "reports" / "complex-verify.json").read_bytes()
    main(["complex", "verify"])
    assert (out / "reports" / "complex-verify.json").read_bytes() == first
    assert not [p for p in (out / "reports").iterdir() if p.name.startswith(".")]


def test_out_dir_flag(tmp_path, monkeypatch):
    monkeypatch.delenv("MORSEBRANCH_OUT", raising=False)
    assert main(["gamma", "cover", "--p", "2", "--out-dir", str(tmp_path / "x")]) == 0
    assert (tmp_path / "x" / "gamma-cover-p2.json").exists()


def test_parsers():
    assert parse_W("3,1") == {1, 3}
    assert parse_W("") == frozenset()
    assert parse_budget("10^6") == parse_budget("1e6") == parse_budget("1_000_000") == 10**6
    with pytest.raises(UsageError, match="--budget"):
        parse_budget("lots")
    with pytest.raises(UsageError, match="--W"):
        parse_W("0")


def test_golden_pristine():
    res = golden.golden_check()
    assert res.passed, res.diff


def test_golden_catches_gamma_mutation(monkeypatch):
    monkeypatch.setitem(GAMMA_RULES, (Part.APlus, Part.BPlus), (0, 3))
    res = golden.golden_check()
    assert res.divergent == "gamma-verify"
    assert "girth" in res.diff or "special_cycle" in res.diff


def test_golden_catches_seed_default_change(monkeypatch):
    monkeypatch.setattr(golden, "CANONICAL_SEED", 1)
    res = golden.golden_check()
    assert res.divergent == "relators-t4"
    assert '"word"' in res.diff or "seed" in res.diff
    word_lines = [ln for ln in res.diff.splitlines() if ln[:1] in "+-" and ln[1:].strip().rstrip(",").lstrip("-").isdigit()]
    assert word_lines
