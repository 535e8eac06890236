import json

import pytest

from omega_scramble.cli import main
from omega_scramble.descriptors import dumps, loads
from omega_scramble.suite import LEMMAS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_family(capsys, tmp_path):
    out_file = tmp_path / "fam.json"
    code, out, _ = run(capsys, "family", "--count", "4", "--seed", "7", "--out", str(out_file), "--json")
    assert code == 0
    data = json.loads(out_file.read_text())
    assert len(data["members"]) == 4 and data["certified"]
    assert json.loads(out) == data


def test_family_errors(capsys):
    code, _, err = run(capsys, "family", "--count", "1")
    assert code == 2 and json.loads(err)["kind"] == "usage"
    code, _, err = run(capsys, "family", "--count", "2", "--separation", "0.9")
    assert code == 2 and "cannot fit" in json.loads(err)["error"]


def test_construct_round_trip(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, _, _ = run(capsys, "construct", "--slope", "golden", "--intercept", "0.381966011250105151795413165634361882279690820194237137864551", "--out", str(path))
    assert code == 0
    text = path.read_text()
    p = loads(text)
    assert dumps(p) == dumps(json.loads(text))
    # the first block copies xi = (011)^w
    assert p.word(0, 6).tolist() == [0, 1, 1, 0, 1, 1]
    again = loads(dumps(p))
    assert again.word(0, 100_000).tolist() == p.word(0, 100_000).tolist()


def test_construct_errors(capsys, tmp_path):
    code, _, err = run(capsys, "construct", "--instance", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "construct", "--slope", "0.5")
    assert code == 2 and "rational" in err


def test_construct_custom_instance(capsys, tmp_path):
    inst = {
        "t0": json.loads(dumps(loads('{"prefix":[],"tail":{"kind":"periodic","word":[0]}}'))),
        "t1": json.loads(dumps(loads('{"prefix":[],"tail":{"kind":"periodic","word":[1]}}'))),
        "s": json.loads(dumps(loads('{"prefix":[],"tail":{"kind":"periodic","word":[0,1]}}'))),
        "xi": json.loads(dumps(loads('{"prefix":[],"tail":{"kind":"periodic","word":[1,1,0,0]}}'))),
    }
    (tmp_path / "inst.json").write_text(json.dumps(inst))
    code, out, _ = run(capsys, "construct", "--sqrt", "7", "--instance", str(tmp_path / "inst.json"), "--json")
    assert code == 0
    assert loads(out).word(0, 4).tolist() == [1, 1, 0, 0]


def test_verify_self_pair_and_depth_guard(capsys, tmp_path):
    p = tmp_path / "p.json"
    run(capsys, "construct", "--slope", "silver", "--out", str(p))
    code, out, _ = run(capsys, "verify", str(p), str(p), "--json")
    assert code == 1
    rep = json.loads(out)["reports"][0]
    assert rep["exclusive_counts"]["13"] == {"first_minus_second": 0, "second_minus_first": 0}
    code, _, err = run(capsys, "verify", str(p), str(p), "--depths", "13,20000")
    assert code == 2
    code, _, _ = run(capsys, "verify", str(p))
    assert code == 2


def test_verify_parameter_mismatch(capsys, tmp_path):
    a, b, cfg = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"P": 9}))
    run(capsys, "construct", "--slope", "silver", "--out", str(a))
    run(capsys, "construct", "--slope", "golden", "--config", str(cfg), "--out", str(b))
    code, _, err = run(capsys, "verify", str(a), str(b))
    assert code == 2 and "mismatch" in err


def test_lemma_suite_filter(capsys):
    code, out, _ = run(capsys, "lemma-suite", "--lemma", "separation", "--seed", "7", "--json")
    assert code == 0
    lemmas = json.loads(out)["result"]["lemmas"]
    assert list(lemmas) == ["separation"] and lemmas["separation"]["verdict"] == "pass"
    code, _, err = run(capsys, "lemma-suite", "--lemma", "nope")
    assert code == 2 and "unknown lemma" in err


def test_full_suite_passes(capsys):
    code, out, _ = run(capsys, "lemma-suite", "--seed", "7", "--json")
    data = json.loads(out)
    assert code == 0
    assert sorted(data["result"]["lemmas"]) == sorted(LEMMAS)
    assert len(LEMMAS) == 11
    assert all(v["verdict"] == "pass" for v in data["result"]["lemmas"].values())
    assert set(data["provenance"]["timing_seconds"]) == set(LEMMAS)


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--json")
    data = json.loads(out)
    assert code == 0
    assert (data["N"], data["P"], data["M"], data["stride"]) == (5, 8, 7, 13)
    assert data["separations"] == {"t0-t1": "2", "t0-s": "2/3", "t1-s": "2/3"}


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(capsys, "params", "--config", str(cfg))
    assert code == 2 and "bogus" in err
    code, _, _ = run(capsys, "params", "--depths", "a,b")
    assert code == 2


def test_usage_error_exit_code(capsys):
    assert main(["frobnicate"]) == 2
    capsys.readouterr()
