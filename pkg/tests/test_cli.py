import json

import numpy as np
import pytest

from tracefn.cli import main, matrix_from_document, matrix_to_json, parse_function_spec
from tracefn.hermitian_core import HermitianMatrix
from tracefn.instances import random_hermitian
from tracefn.rng import SplitMix64


def write_matrix(tmp_path, name, m: HermitianMatrix) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(matrix_to_json(m)))
    return str(path)


def canonical_files(tmp_path):
    a = write_matrix(tmp_path, "a.json", HermitianMatrix.diagonal([1.0, 0.0]))
    p = write_matrix(tmp_path, "p.json", HermitianMatrix.diagonal([1.0, 0.0]))
    b = write_matrix(tmp_path, "b.json", HermitianMatrix([[0.0, 1.0], [1.0, 1.0]]))
    return p, a, b


def test_matrix_json_round_trip_real():
    m = HermitianMatrix([[1.0, 0.25], [0.25, -2.0]])
    doc = matrix_to_json(m)
    assert "im" not in doc
    back = matrix_from_document(json.loads(json.dumps(doc)))
    assert np.array_equal(back.mat, m.mat)


def test_matrix_json_round_trip_complex():
    rng = SplitMix64(3)
    m = random_hermitian(rng, 4)
    doc = json.loads(json.dumps(matrix_to_json(m)))
    assert set(doc) == {"n", "re", "im"}
    back = matrix_from_document(doc)
    assert np.max(np.abs(back.mat - m.mat)) <= 1e-15


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"n": 2},
        {"n": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "extra": 1},
        {"n": True, "re": [[1.0]]},
        {"n": 0, "re": []},
        {"n": 2, "re": [[1.0, 0.0]]},
        {"n": 2, "re": [[1.0, 0.0], [0.0, True]]},
        {"n": 2, "re": [[1.0, 0.0], [0.0, "x"]]},
        {"n": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 1.0]]},
    ],
)
def test_matrix_schema_rejections(doc):
    with pytest.raises(ValueError):
        matrix_from_document(doc)


def test_parse_function_spec():
    assert parse_function_spec("log").name == "log"
    assert parse_function_spec("power:0.5").parameter == 0.5
    assert parse_function_spec("power:-0.5").parameter == -0.5
    for bad in ("power", "log:2", "exp", "power:abc"):
        with pytest.raises(ValueError):
            parse_function_spec(bad)


def test_eval_restricted_inverse(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    code = main(["eval", "inverse", p, a])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1.0"


def test_eval_prints_inf_token_and_succeeds(tmp_path, capsys):
    _, a, _ = canonical_files(tmp_path)
    p_full = write_matrix(tmp_path, "pfull.json", HermitianMatrix.identity(2))
    code = main(["eval", "log", p_full, a])
    assert code == 0
    assert capsys.readouterr().out.strip() == "+inf"


def test_eval_json_report_shape(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    code = main(["eval", "inverse", p, a, "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["inputs"]["f"] == "inverse"
    assert len(doc["inputs"]["A"]["sha256"]) == 64
    names = {r["name"]: r["value"] for r in doc["results"]}
    assert names["functional"] == 1.0
    assert names["rank_used"] == 1
    assert "wall_time_s" in doc


def test_dderiv_lower_bound_verdict(tmp_path, capsys):
    p, a, b = canonical_files(tmp_path)
    code = main(["dderiv", "inverse", p, a, b, "--verify=fd"])
    out = capsys.readouterr().out
    assert code == 0
    assert "formula_value = 0.0" in out
    assert "semantics = lower_bound" in out
    assert "PASS fd-lower-bound" in out


def test_dderiv_all_oracles_on_pd_instance(tmp_path, capsys):
    rng = SplitMix64(12)
    base = random_hermitian(rng, 3)
    a_m = HermitianMatrix(base.mat @ base.mat.conj().T + 0.5 * np.eye(3))
    p = write_matrix(tmp_path, "p.json", HermitianMatrix.identity(3))
    a = write_matrix(tmp_path, "a.json", a_m)
    b = write_matrix(tmp_path, "b.json", random_hermitian(rng, 3))
    code = main(["dderiv", "log", p, a, b, "--verify=all"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS fd-agreement" in out
    assert "PASS quad-agreement" in out


def test_dderiv_quad_skips_uncovered_function(tmp_path, capsys):
    rng = SplitMix64(13)
    p = write_matrix(tmp_path, "p.json", HermitianMatrix.identity(3))
    a = write_matrix(tmp_path, "a.json", HermitianMatrix.diagonal([1.0, 2.0, 3.0]))
    b = write_matrix(tmp_path, "b.json", random_hermitian(rng, 3))
    code = main(["dderiv", "square", p, a, b, "--verify=quad"])
    out = capsys.readouterr().out
    assert code == 0
    assert "skipped" in out


def test_dderiv_absurd_tolerance_exits_three(tmp_path, capsys):
    rng = SplitMix64(14)
    p = write_matrix(tmp_path, "p.json", HermitianMatrix.identity(3))
    a = write_matrix(tmp_path, "a.json", HermitianMatrix.diagonal([1.0, 2.0, 3.0]))
    b = write_matrix(tmp_path, "b.json", random_hermitian(rng, 3))
    code = main(["dderiv", "log", p, a, b, "--verify=fd", "--tol", "1e-300"])
    out = capsys.readouterr().out
    assert code == 3
    assert "FAIL" in out


def test_exit_one_on_missing_file(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    assert main(["eval", "log", p, str(tmp_path / "absent.json")]) == 1


def test_exit_one_on_unparseable_json(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["eval", "log", p, str(broken)]) == 1


def test_exit_one_on_schema_violation(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"n": 2, "rows": [[1.0, 0.0], [0.0, 1.0]]}))
    assert main(["eval", "log", p, str(wrong)]) == 1


def test_exit_one_on_unknown_function(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    assert main(["eval", "tanh", p, a]) == 1


def test_exit_two_on_non_hermitian_file(tmp_path, capsys):
    p, a, _ = canonical_files(tmp_path)
    skew = tmp_path / "skew.json"
    skew.write_text(json.dumps({"n": 2, "re": [[0.0, 1.0], [2.0, 0.0]]}))
    assert main(["eval", "log", p, str(skew)]) == 2
    assert "error:" in capsys.readouterr().err


def test_exit_two_on_non_psd_input(tmp_path, capsys):
    p, _, _ = canonical_files(tmp_path)
    indef = write_matrix(tmp_path, "indef.json", HermitianMatrix.diagonal([1.0, -1.0]))
    assert main(["eval", "log", p, indef]) == 2
    assert "not PSD" in capsys.readouterr().err


def test_exit_two_on_image_condition_violation(tmp_path, capsys):
    _, a, b = canonical_files(tmp_path)
    p_full = write_matrix(tmp_path, "pfull.json", HermitianMatrix.identity(2))
    assert main(["dderiv", "inverse", p_full, a, b]) == 2
    assert "image condition" in capsys.readouterr().err


def test_zero_tol_env_rejects_garbage(tmp_path, capsys, monkeypatch):
    p, a, _ = canonical_files(tmp_path)
    monkeypatch.setenv("TRACEFN_ZERO_TOL", "huge")
    assert main(["eval", "log", p, a]) == 1
    monkeypatch.setenv("TRACEFN_ZERO_TOL", "-1.0")
    assert main(["eval", "log", p, a]) == 1


def test_zero_tol_env_changes_rank_classification(tmp_path, capsys, monkeypatch):
    a = write_matrix(tmp_path, "a.json", HermitianMatrix.diagonal([1.0, 1e-6]))
    p = write_matrix(tmp_path, "p.json", HermitianMatrix.identity(2))
    assert main(["eval", "inverse", p, a]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.0 + 1e6, rel=1e-12)
    # with the threshold raised above 1e-6 the small eigenvalue reads as
    # kernel, P leaks into it, and inverse has no finite extension
    monkeypatch.setenv("TRACEFN_ZERO_TOL", "1e-3")
    assert main(["eval", "inverse", p, a]) == 0
    assert capsys.readouterr().out.strip() == "+inf"


def test_verify_suite_human_output(capsys):
    code = main(["verify", "gap", "--trials", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "suite gap:" in out
    assert "FAIL" not in out


def test_verify_json_deterministic_modulo_wall_time(capsys):
    code = main(["verify", "gap", "--json", "--trials", "2"])
    assert code == 0
    first = json.loads(capsys.readouterr().out)
    code = main(["verify", "gap", "--json", "--trials", "2"])
    assert code == 0
    second = json.loads(capsys.readouterr().out)
    first.pop("wall_time_s")
    second.pop("wall_time_s")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_demo_gap_embeds_round_trippable_matrices(capsys):
    code = main(["demo-gap", "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    mats = doc["matrices"]
    a = matrix_from_document(mats["A"])
    b = matrix_from_document(mats["B"])
    p = matrix_from_document(mats["P"])
    assert np.array_equal(a.mat, np.diag([1.0, 0.0]).astype(complex))
    assert np.array_equal(p.mat, np.diag([1.0, 0.0]).astype(complex))
    assert np.array_equal(b.mat, np.array([[0.0, 1.0], [1.0, 1.0]], dtype=complex))
    names = {r["name"]: r["value"] for r in doc["results"]}
    assert names["formula_value"] == 0.0
    assert abs(names["gap"] - 1.0) <= 1e-3
