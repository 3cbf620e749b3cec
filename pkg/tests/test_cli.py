import json

import numpy as np
import pytest

from cataclysms.anosov import representation_from_json
from cataclysms.cli import main
from cataclysms.cycles import TwistedCycle
from cataclysms.lamination import multicurve_from_json
from cataclysms.surface import fuchsian_octagon


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    paths = {k: str(d / f"{k}.json") for k in ("rep", "lam", "cycle", "zero", "deformed", "family")}
    assert main(["rep", "--kind", "hitchin", "--n", "3", "--out", paths["rep"]]) == 0
    assert main(["lam", "--preset", "pants", "--out", paths["lam"]]) == 0
    assert main(["cycle", "--lam", paths["lam"], "--rep", paths["rep"], "--random", "--seed", "3",
                 "--out", paths["cycle"]]) == 0
    assert main(["cycle", "--lam", paths["lam"], "--rep", paths["rep"], "--out", paths["zero"]]) == 0
    return paths


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--genus", "2", "--n", "3", "--theta", "all", "--maximal")
    assert code == 0 and out.strip() == "13"
    code, out, _ = run(capsys, "dims", "--n", "3", "--multicurve", "3")
    assert code == 0 and out.strip() == "6"


def canonical(obj):
    return json.loads(json.dumps(obj, sort_keys=True))


def test_rep_round_trip(files):
    data = json.load(open(files["rep"]))
    rep = representation_from_json(data)
    assert rep.n == 3
    data.pop("diagnostics")
    assert canonical(rep.to_json()) == canonical(data)


def test_lam_and_cycle_round_trip(files):
    data = json.load(open(files["lam"]))
    lam = multicurve_from_json(fuchsian_octagon(data["genus"]), data["curves"])
    assert canonical(lam.to_json()) == canonical(data["curves"])
    cyc = json.load(open(files["cycle"]))
    assert cyc.pop("kind") == "cycle"
    assert canonical(TwistedCycle.from_json(cyc).to_json()) == canonical(cyc)


def test_zero_cycle_deform_is_identity(files, capsys):
    code, out, _ = run(capsys, "deform", "--rep", files["rep"], "--lam", files["lam"], "--cycle", files["zero"])
    assert code == 0
    deformed = json.loads(out)
    original = json.load(open(files["rep"]))
    assert deformed["generators"] == original["generators"]


def test_deform_and_recover(files, capsys):
    code, _, _ = run(capsys, "deform", "--rep", files["rep"], "--lam", files["lam"], "--cycle", files["cycle"],
                     "--out", files["deformed"], "--family-out", files["family"])
    assert code == 0
    deformed = json.load(open(files["deformed"]))
    assert deformed["diagnostics"]["relator_residual"] <= 1e-7
    for member in ("a1", "b1", "a2", "b2"):
        code, out, _ = run(capsys, "recover", "--family", files["family"], "--member", member)
        assert code == 0
        assert json.loads(out)["diagnostics"]["max_error"] <= 1e-8


def test_verify_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--suite", "lemma32", "--seed", "7")
    code2, out2, _ = run(capsys, "verify", "--suite", "lemma32", "--seed", "7")
    assert code1 == 0 and code2 == 0 and out1 == out2
    assert json.loads(out1)["passed"]


def test_verify_failure_exit_code(capsys):
    code, _, err = run(capsys, "verify", "--suite", "lemma32", "--seed", "1", "--tol", "lemma32=1e-30")
    assert code == 1 and err.startswith("FAIL lemma32:")


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "busemann", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "suite,check,value,tol,mode,count,passed"


def test_schema_errors(tmp_path, capsys, files):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "deform", "--rep", str(bad), "--lam", files["lam"], "--cycle", files["cycle"])
    assert code == 2
    code, _, _ = run(capsys, "deform", "--rep", str(tmp_path / "missing.json"), "--lam", files["lam"],
                     "--cycle", files["cycle"])
    assert code == 2


def test_intersecting_curves(capsys):
    code, _, err = run(capsys, "lam", "--curves", "a1", "b1")
    assert code == 1 and err


def test_divergence_csv(capsys):
    code, out, _ = run(capsys, "divergence", "--kind", "hitchin", "--n", "3", "--max-length", "4",
                       "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 5
    minima = [float(r.split(",")[1]) for r in rows[1:]]
    assert np.all(np.diff(minima) > 0)
