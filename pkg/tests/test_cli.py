import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from leafcut import __version__, cli
from leafcut.algebra import Ideal
from leafcut.io import KINDS, Options, SpecError, canonicalize, run, validate
from leafcut.io import runner

ROOT = Path(__file__).resolve().parent.parent
CORPUS = sorted((ROOT / "corpus").glob("*.json"))
GOLDEN = Path(__file__).resolve().parent / "golden"
FAST = [p for p in CORPUS if not p.stem.startswith("gm_dm")]


def load(path):
    return json.loads(Path(path).read_text())


def cli_run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "leafcut.cli", *args], capture_output=True, text=True,
                          env=env, cwd=ROOT)


LEGENDRE = {"kind": "gaussmanin", "payload": {"N": 2, "exponents": [1, 1, 1], "points": ["0", "1", "l"]}}


# envelope ---------------------------------------------------------------------

def test_envelope_fields():
    env = run({"kind": "flatness", "payload": {"connection": {
        "rank": 1, "base": {"vars": ["x"], "ideal": []}, "matrices": [[["0"]]]}}})
    assert set(env) == {"input_hash", "tool_version", "kind", "result", "timings"}
    assert env["tool_version"] == __version__
    assert env["result"]["flat"] is True
    assert len(env["input_hash"]) == 64
    assert set(env["timings"]) == {"parse_ms", "compute_ms", "serialize_ms"}


def test_locus_constant_is_whole_space():
    res = run(load(ROOT / "corpus/locus_constant.json"))["result"]
    ring = res["Z_locus"]["ring"]
    Z = Ideal.parse(ring, res["Z_locus"]["ideal"])
    assert Z.same_ideal(Ideal.parse(ring, ["b1_1 - y", "b1_1*dinv - 1"]))
    assert res["descent_stages"] == []


def test_hash_ignores_field_order_but_not_flags():
    spec = load(ROOT / "corpus/gm_legendre.json")
    shuffled = json.loads(json.dumps(spec, sort_keys=False))
    shuffled["payload"] = dict(reversed(list(spec["payload"].items())))
    a = run(spec)["input_hash"]
    assert run(shuffled)["input_hash"] == a
    assert run(spec, opts=Options(guard_minors=7))["input_hash"] != a


def test_bare_payload_with_kind():
    env = run(LEGENDRE["payload"], "gaussmanin")
    assert env["kind"] == "gaussmanin" and env["result"]["genus"] == 1


# exit codes --------------------------------------------------------------------

def test_exit_ok_and_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["flatness", "--spec", str(ROOT / "corpus/flatness_zero.json"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["flat"] is True


def test_exit_schema(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "gaussmanin", "payload": {"N": 2, "exponents": [1], "points": ["0"],
                                                               "colour": "red"}}))
    assert cli.main(["gaussmanin", "--spec", str(bad)]) == cli.EXIT_SCHEMA
    err = json.loads(capsys.readouterr().err)
    assert err["exit_code"] == 2 and any("colour" in d for d in err["diagnostics"])
    bad.write_text("{not json")
    assert cli.main(["gaussmanin", "--spec", str(bad)]) == cli.EXIT_SCHEMA
    assert cli.main(["atypical", "--dims", "1,2,3"]) == cli.EXIT_SCHEMA


def test_exit_guard(capsys):
    code = cli.main(["locus", "--spec", str(ROOT / "corpus/locus_exponential.json"), "--guard-minors", "0"])
    assert code == cli.EXIT_GUARD
    assert "guard" in json.loads(capsys.readouterr().err)["error"]


def test_exit_internal(monkeypatch, capsys):
    def broken(*_):
        raise RuntimeError("invariant violated")

    monkeypatch.setitem(runner.HANDLERS, "flatness", broken)
    assert cli.main(["flatness", "--spec", str(ROOT / "corpus/flatness_zero.json")]) == cli.EXIT_INTERNAL
    err = json.loads(capsys.readouterr().err)
    assert "invariant violated" in err["error"] and "Traceback" in err["dump"]


def test_subprocess_exit_codes(tmp_path):
    assert cli_run("validate", "--spec", str(ROOT / "corpus/gm_legendre.json")).returncode == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "nonsense", "payload": {}}))
    assert cli_run("flatness", "--spec", str(bad)).returncode == 2


def test_atypical_dims_flag(capsys):
    assert cli.main(["atypical", "--dims", "1,3,5,2,3"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["atypical"] is True


def test_e_override():
    spec = load(ROOT / "corpus/locus_exponential.json")
    assert run(spec)["result"]["Z_locus"]["empty"]
    assert not run(spec, opts=Options(e=0))["result"]["Z_locus"]["empty"]


def test_every_kind_has_a_subcommand():
    parser = cli._parser()
    for kind in KINDS:
        assert parser.parse_args([kind, "--spec", "x"]).command == kind


# validate ------------------------------------------------------------------------

def test_validate_examples():
    assert validate(LEGENDRE) == []
    degenerate = validate({"kind": "gaussmanin", "payload": {"N": 2, "exponents": [2, 1], "points": ["0", "1"]}})
    assert any("degenerate exponent" in d for d in degenerate)
    spec = load(ROOT / "corpus/locus_constant.json")
    spec["payload"]["family"]["ideal"] = ["b1_1 - y + z"]
    assert any("ring mismatch" in d for d in validate(spec))


def test_validate_never_raises():
    for junk in (None, 3, [], {"kind": "locus"}, {"kind": "gaussmanin", "payload": {"N": "x"}}, "text"):
        assert validate(junk)
    same = validate({"kind": "gaussmanin", "payload": {"N": 3, "exponents": [1, 1], "points": ["t", "t"]}})
    assert any("coincide" in d for d in same)


def test_semantic_errors_raise_spec_error():
    with pytest.raises(SpecError):
        run({"kind": "gaussmanin", "payload": {"N": 2, "exponents": [2, 1], "points": ["0", "1"]}})


def test_corpus_validates():
    for path in CORPUS:
        assert validate(load(path)) == [], path.stem


# round trip and goldens ----------------------------------------------------------

def test_round_trip_canonicalize():
    for path in CORPUS:
        spec = load(path)
        c = canonicalize(spec)
        assert canonicalize(c) == c
        assert canonicalize(json.loads(json.dumps(c))) == c
        assert c["kind"] == spec["kind"]


def test_goldens_cover_corpus():
    assert sorted(p.name for p in GOLDEN.glob("*.json")) == [p.name for p in CORPUS]


def _compare_golden(path):
    want = load(GOLDEN / path.name)
    got = run(load(path), opts=Options(verify_periods=True))["result"]
    want_check, got_check = want.pop("period_check", None), got.pop("period_check", None)
    assert got == want, path.stem
    if want_check is not None:
        assert got_check["max_residual"] < 1e-8
        flags = [[e["checked"] for e in s["eigenspaces"]] for s in want_check["samples"]]
        assert flags == [[e["checked"] for e in s["eigenspaces"]] for s in got_check["samples"]]


@pytest.mark.parametrize("path", FAST, ids=[p.stem for p in FAST])
def test_golden(path):
    _compare_golden(path)


@pytest.mark.slow
def test_golden_genus11():
    _compare_golden(ROOT / "corpus/gm_dm_genus11.json")


# reproducibility ----------------------------------------------------------------------

def test_reproducible_across_hash_seeds():
    picks = ["zp_two_families", "locus_exponential", "flatness_heisenberg", "gm_quartic", "family_locus_e0"]
    outputs = []
    for seed in ("1", "977"):
        env = dict(os.environ, PYTHONHASHSEED=seed, LEAFCUT_THREADS="2")
        run_out = []
        for name in picks:
            path = ROOT / "corpus" / f"{name}.json"
            proc = cli_run(load(path)["kind"], "--spec", str(path), env=env)
            assert proc.returncode == 0, proc.stderr
            run_out.append(json.dumps(json.loads(proc.stdout)["result"], sort_keys=True))
        outputs.append(run_out)
    assert outputs[0] == outputs[1]
