import json

import numpy as np
import pytest

from toledo import cli, fileio
from toledo.errors import ParseError, RelatorViolation, SchemaError


@pytest.fixture
def f2(tmp_path, fuchsian):
    path = tmp_path / "f2.json"
    fileio.save_representation(fuchsian, path)
    return path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_round_trip_is_bit_stable(f2, fuchsian):
    rho = fileio.load_representation(f2)
    assert all(np.array_equal(a, b) for a, b in zip(rho.images, fuchsian.images))
    assert fileio.dumps(fileio.representation_to_dict(rho)) == f2.read_text()


def test_wrong_dimension(f2, tmp_path):
    doc = json.loads(f2.read_text())
    doc["generators"][0] = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(SchemaError):
        fileio.load_representation(bad)


def test_schema_version_and_missing_field(f2):
    doc = json.loads(f2.read_text())
    with pytest.raises(SchemaError):
        fileio.representation_from_dict({**doc, "schema": 2})
    del doc["surface"]
    with pytest.raises(SchemaError):
        fileio.representation_from_dict(doc)


def test_perturbed_generator(f2):
    doc = json.loads(f2.read_text())
    rng = np.random.default_rng(0)
    M = np.array([[float(x) for x in row] for row in doc["generators"][1]])
    M += 1e-2 * rng.standard_normal((2, 2))
    doc["generators"][1] = [[fileio.fmt(x) for x in row] for row in M]
    with pytest.raises(RelatorViolation) as err:
        fileio.representation_from_dict(doc)
    assert err.value.residual > 1e-8


def test_parse_errors(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        fileio.load_representation(p)
    with pytest.raises(ParseError):
        fileio.parse_number("one")


def test_encode():
    assert fileio.encode({"a": 2.0, "b": 0.1, "c": [1, np.float64(3.5)]}) == \
        {"a": 2, "b": "0.10000000000000001", "c": [1, "3.5"]}


def test_toledo_command(capsys, f2):
    code, out, _ = run(capsys, "toledo", "--rep", f2)
    doc = json.loads(out)
    assert code == 0
    assert doc["T"] == 2 and doc["mw_margin"] == 0 and doc["schema"] == 1
    assert "error_estimate" in doc


def test_reports_are_deterministic(capsys, f2):
    a = run(capsys, "wm", "--rep", f2, "--hyp", f2, "--count", "4")[1]
    b = run(capsys, "wm", "--rep", f2, "--hyp", f2, "--count", "4")[1]
    assert a == b


def test_unknown_flag_exits_one(capsys, f2):
    code, _, err = run(capsys, "toledo", "--rep", f2, "--bogus")
    assert code == 1 and "usage" in err


def test_error_code_reported(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("[]")
    code, _, err = run(capsys, "toledo", "--rep", p)
    assert code == 1 and json.loads(err)["error"] == "schema_error"


def test_growth_csv(capsys, tmp_path):
    out = tmp_path / "g.csv"
    code, text, _ = run(capsys, "growth", "--g=1,0,0,1,1", "--h=0.5,0,0,2,0", "--n", 20,
                        "--out", out)
    assert code == 0
    assert out.read_text().splitlines()[0] == "n,e_n,ratio,low,high,target"
    assert json.loads(text)["violations"] == 0


def test_build_polydisk_reversed(capsys, tmp_path, f2):
    path = tmp_path / "p.json"
    code, _, _ = run(capsys, "build-polydisk", "--n", 2, "--reverse", "--out", path)
    assert code == 0
    code, out, _ = run(capsys, "toledo", "--rep", path)
    assert json.loads(out)["T"] == 0
    # the two factors cancel on every commutator, so this is weakly maximal with lambda 0
    code, out, _ = run(capsys, "wm", "--rep", path, "--hyp", f2, "--count", 8)
    assert code == 0 and json.loads(out)["lambda"] == 0


def test_wm_refutation_exit_code(capsys, tmp_path, f2, folded):
    path = tmp_path / "folded.json"
    fileio.save_representation(folded, path)
    code, out, _ = run(capsys, "wm", "--rep", path, "--hyp", f2, "--count", 8)
    assert code == 2 and json.loads(out)["verdict"] == "NotWeaklyMaximal"


def test_maslov_and_dominance(capsys, f2):
    code, out, _ = run(capsys, "maslov", "--n", 2, "--count", 20)
    assert code == 0 and json.loads(out)["cocycle_failures"] == 0
    code, out, _ = run(capsys, "dominance", "--rep", f2, "--word", "1,2,-1,-2")
    assert code == 2 and json.loads(out)["verdict"] == "NotDominant"


def test_scan(capsys, tmp_path, f2):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "scan", "--rep", f2, "--hyp", f2, "--steps", 2, "--count", 4,
                     "--out", out)
    assert code == 0
    assert len(out.read_text().splitlines()) == 3


def test_build_heisenberg(capsys, tmp_path):
    out = tmp_path / "h.json"
    code, _, _ = run(capsys, "build-heisenberg", "--out", out)
    assert code == 0
    rho = fileio.load_representation(out, tol=1e-7)
    assert rho.n == 4
