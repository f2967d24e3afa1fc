import json

import pytest

from tamedef import cli, verify
from tamedef.algebra import Ideal, ideal_equal, parse_poly
from tamedef.models import ModelPresentation


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_gene_command(capsys):
    code, out, _ = run(capsys, "gene", "--p", "5", "--f", "1", "1", "2")
    assert code == 0
    assert json.loads(out)["gene"] == "O / AB"


def test_gene_rejects_degenerate_h(capsys):
    code, _, err = run(capsys, "gene", "--p", "5", "--f", "1", "0", "6")
    assert code == 1
    assert "p^f + 1" in err


def _row(side, n):
    table = verify.load_data("f3_examples.json")[side]
    return next(r for r in table["rows"] if r["row"] == n)


@pytest.mark.parametrize("side, n, expected", [
    ("left", 1, ["X2*Y0 + p^2"]),
    ("right", 1, ["X0*Y0 + p^3"]),
])
def test_model_saturated_table_rows(capsys, tmp_path, side, n, expected):
    path = write(tmp_path, {"vertices": _row(side, n)["vertices"]})
    code, out, _ = run(capsys, "model", path, "--normalize", "--saturate")
    assert code == 0
    got = ModelPresentation.from_json(json.loads(out)).ideal
    assert ideal_equal(got, Ideal(got.ring, [parse_poly(g, got.ring) for g in expected]))


def test_model_output_round_trips(capsys, tmp_path):
    path = write(tmp_path, {"vertices": _row("left", 1)["vertices"]})
    _, out, _ = run(capsys, "model", path)
    data = json.loads(out)
    assert ModelPresentation.from_json(data).to_json() == data


def test_model_shape_input(capsys, tmp_path):
    shape = {"p": 11, "s": ["id"], "mu": [[2, 0]], "w": ["t_w0eta"]}
    code, out, _ = run(capsys, "model", write(tmp_path, shape))
    assert code == 0
    assert json.loads(out)["generators"]


def test_model_bad_w_names_field_and_choices(capsys, tmp_path):
    shape = {"p": 11, "s": ["id"], "mu": [[2, 0]], "w": ["foo"]}
    code, _, err = run(capsys, "model", write(tmp_path, shape))
    assert code == 1
    assert "shape.w[0]" in err and "t_eta" in err


def test_model_invalid_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "model", str(path))
    assert code == 1 and "invalid JSON" in err


def test_sat_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "sat", write(tmp_path, ["p*X"]))
    assert code == 0 and json.loads(out)["generators"] == ["X"]
    code, out, _ = run(capsys, "sat", write(tmp_path, [], "empty.json"))
    assert code == 0 and json.loads(out)["generators"] == []


def test_sat_methods_agree(capsys, tmp_path):
    path = write(tmp_path, ["p*X", "p*Y", "X*Y"])
    _, a, _ = run(capsys, "sat", path)
    _, b, _ = run(capsys, "sat", path, "--method", "colon")
    assert json.loads(a) == json.loads(b)


def test_sat_parse_error_has_position(capsys, tmp_path):
    code, _, err = run(capsys, "sat", write(tmp_path, ["X * * p"]))
    assert code == 1
    assert "generators[0]" in err


def test_fiber_command(capsys):
    code, out, _ = run(capsys, "fiber", "O / AB", "--p", "11", "--kmax", "2")
    assert code == 0
    assert json.loads(out)["shapes"]


def test_fiber_bad_gene(capsys):
    code, _, _ = run(capsys, "fiber", "O B / A", "--p", "11")
    assert code == 1


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "f1")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "verify", "f1", "--budget", "1")
    assert code == 2 and json.loads(out)["status"] == "inconclusive"
