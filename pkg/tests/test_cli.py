import json

import pytest

from chaoscope.cli import run
from chaoscope.serialization import validate


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def five_b(tmp_path, capsys):
    path = tmp_path / "fiveB.json"
    code, out, _ = call(capsys, "gallery", "build", "fiveB")
    assert code == 0
    path.write_text(out)
    return str(path)


def test_classify_five_b(capsys, five_b):
    code, out, _ = call(capsys, "classify", "--spec", five_b)
    doc = json.loads(out)
    assert code == 0 and doc["result"]["F"]["value"] is True
    validate(doc["result"], "verdict")


def test_apply_identity_power(capsys):
    spec = '{"kind":"scalar_shift","lambda":1,"inner":{"kind":"diagonal","tail":[0]}}'
    code, out, _ = call(capsys, "op", "apply", "--inline", "--spec", spec,
                        "--vector", '{"entries":{"0":[1,0]}}', "--power", "7")
    assert code == 0 and json.loads(out) == {"entries": {"0": [1.0, 0.0]}}


def test_relations_seed_7(capsys):
    code, out, _ = call(capsys, "relations", "--seed", "7", "--count", "100")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["violations"] == [] and doc["result"]["checked"] == 108


def test_usage_errors(capsys):
    code, _, err = call(capsys, "frobnicate")
    assert code == 2 and err.startswith("E:")
    code, _, err = call(capsys, "classify", "--bogus")
    assert code == 2 and err.startswith("E:")
    code, _, err = call(capsys, "classify")
    assert code == 2 and err.startswith("E:")


def test_computation_error(capsys):
    code, _, err = call(capsys, "classify", "--inline", "--spec", '{"kind":"diagonal","extra":1}')
    assert code == 1 and err.startswith("E: SpecError")


def test_gallery_list(capsys):
    code, out, _ = call(capsys, "gallery", "list")
    names = [e["name"] for e in json.loads(out)["result"]["entries"]]
    assert code == 0 and "fiveB-squared" in names and len(names) == 8


def test_orbit_norms_csv(capsys):
    code, out, _ = call(capsys, "orbit", "norms", "--gallery", "backward-shift-2B", "--inline",
                        "--vector", '{"entries":{"5":1}}', "--horizon", "10", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and "# horizon=10" in lines
    assert lines[lines.index("n,norm") + 7] == "6,0.0"


def test_orbit_pair_and_dc_stats(capsys):
    args = ["--gallery", "half-backward", "--inline",
            "--vector", '{"entries":{"0":1}}', "--other", '{"entries":{"1":1}}', "--horizon", "50"]
    code, out, _ = call(capsys, "orbit", "pair", *args)
    assert code == 0 and json.loads(out)["result"]["verdict"] == "asymptotic"
    code, out, _ = call(capsys, "orbit", "dc-stats", *args, "--tau", "0.001,1")
    res = json.loads(out)["result"]
    assert code == 0 and res["tau_grid"] == [0.001, 1.0] and res["final_F"][1] == 0.98  # d_0 = sqrt 2 is the only miss


def test_certify_and_dichotomy(capsys):
    code, out, _ = call(capsys, "certify", "unimodal", "--gallery", "backward-shift-2B",
                        "--gamma", "2", "--m", "10")
    res = json.loads(out)["result"]
    assert code == 0 and res["found"] and res["witness"] == {"10": [1.0, 0.0]}
    code, out, _ = call(capsys, "dichotomy", "--gallery", "half-backward", "--samples", "5", "--horizon", "100")
    assert code == 0 and json.loads(out)["result"]["violations"] == 0


def test_spectral_picture_and_validate(capsys):
    code, out, _ = call(capsys, "spectral", "picture", "--gallery", "ex-2.10-annulus")
    radii = sorted(c["radius"] for c in json.loads(out)["result"]["curves"])
    assert code == 0 and radii == [0.5, 2.0]
    code, out, _ = call(capsys, "op", "validate", "--gallery", "ex-2.15-dc-boundary")
    assert code == 0 and json.loads(out)["result"]["domain"] == ["-inf", "+inf"]


def test_path_json_and_csv(capsys):
    code, out, _ = call(capsys, "path", "--t", "0.5")
    res = json.loads(out)["result"]
    assert code == 0 and res["verdict"]["F"]["value"] is True
    code, out, _ = call(capsys, "path", "--count", "3", "--format", "csv", "--resolution", "4")
    assert code == 0 and out.splitlines()[1] == "t,disk,k,x,y"


def test_perturb_identity(capsys):
    code, out, _ = call(capsys, "perturb", "identity", "--dims", "4,16")
    res = json.loads(out)["result"]
    assert code == 0 and res["norm_of_K"] == 0.25 and res["norm_below_epsilon"]


def test_output_file_and_determinism(capsys, tmp_path):
    target = tmp_path / "rel.json"
    assert run(["relations", "--count", "20", "--output", str(target)]) == 0
    first = target.read_bytes()
    assert run(["relations", "--count", "20", "--output", str(target)]) == 0
    assert target.read_bytes() == first
