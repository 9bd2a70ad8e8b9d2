import json

import numpy as np
import pytest
from docx import Document

from config.settings import RunConfig
from core.canonical import reconstruct_canonical
from core.codec import decode_complex, decode_complex_matrix, dumps, format_float, to_jsonable
from core.errors import ImpureInput, InputOutputError, InvalidOracleSpec, VerificationFailed
from core.inductive import reconstruct_inductive
from core.report import (agreement_block, build_check_report, build_error_report,
                         build_reconstruct_report, export_to_docx)
from core.sampling import haar_unitary
from core.symmetry import check_symmetry_condition, depolarizing_map
from tests.helpers import random_oracle


def test_floats_use_seventeen_significant_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1"
    with pytest.raises(ValueError):
        format_float(float("nan"))


def test_complex_values_are_pairs():
    assert dumps(1 + 2j) == "[1, 2]\n"
    assert to_jsonable(np.array([1j])) == [[0.0, 1.0]]
    assert to_jsonable({(1, 2): np.int64(3)}) == {"(1, 2)": 3}


def test_matrices_survive_the_file_format(rng):
    U = haar_unitary(4, rng)
    parsed = json.loads(dumps({"matrix": U}))
    assert np.array_equal(decode_complex_matrix(parsed["matrix"], 4), U)


def test_dumps_is_deterministic(rng):
    data = {"b": [0.1, 2.5e-17], "a": {"x": None, "y": True}, "m": haar_unitary(2, rng)}
    assert dumps(data) == dumps(data)
    assert dumps(data).endswith("}\n")
    assert json.loads(dumps(data))["b"] == [0.1, 2.5e-17]


@pytest.mark.parametrize("value", [[1], "1+2j", [1, 2, 3], True, ["a", 0], [None, 0], [0, True],
                                   [float("nan"), 0], [0, float("inf")], [10 ** 400, 0]])
def test_decode_complex_rejects_malformed_values(value):
    with pytest.raises(InvalidOracleSpec):
        decode_complex(value)


def test_non_finite_witness_values_are_written_as_strings():
    text = dumps({"witness": {"unitarity_deviation": float("nan"), "bound": float("inf")}})
    assert json.loads(text) == {"witness": {"unitarity_deviation": "nan", "bound": "inf"}}


def test_decode_complex_matrix_checks_rows():
    with pytest.raises(InvalidOracleSpec) as info:
        decode_complex_matrix([[[1, 0], [0, 0]], [[0, 0]]], 2)
    assert info.value.witness == {"row": 2}


def _both(rng, config):
    oracle, _ = random_oracle("unitary", 3, rng)
    return [reconstruct_canonical(oracle, config), reconstruct_inductive(oracle, config)]


def test_reconstruct_report_layout(rng, config):
    results = _both(rng, config)
    agreement = agreement_block(results)
    report = build_reconstruct_report(results, config, {"dim": 3, "kind": "unitary"}, agreement)
    assert report["format_version"] == "1.0"
    assert report["config"]["n_verify"] == config.n_verify
    assert report["config"]["tolerances"]["phase"] == 1e-8
    assert [r["method"] for r in report["results"]] == ["canonical", "inductive"]
    assert report["agreement"]["same_kind"] is True
    assert report["agreement"]["max_deviation"] < 1e-8
    assert "wall_time_ms" not in report
    json.loads(dumps(report))


def test_check_report_outcome(config):
    check = check_symmetry_condition(depolarizing_map(0.5, 2), n_pairs=5)
    report = build_check_report(check, config, {"dim": 2, "kind": "depolarizing"}, wall_time_ms=1.5)
    assert report["outcome"] == "rejected"
    assert report["check"]["verdict"] == "fail"
    assert report["wall_time_ms"] == 1.5


@pytest.mark.parametrize("error, outcome", [
    (ImpureInput("impure", witness={"purity_violation": 0.375}), "rejected"),
    (VerificationFailed("off"), "verification"),
    (InputOutputError("missing"), "io"),
    (InvalidOracleSpec("bad"), "usage"),
])
def test_error_report(error, outcome):
    report = build_error_report("reconstruct", error)
    assert report["outcome"] == outcome
    assert report["error"] == type(error).__name__
    assert report["config"] is None
    assert "witness" in report


def test_export_reconstruct_report(rng, config, tmp_path):
    results = _both(rng, config)
    report = json.loads(dumps(build_reconstruct_report(
        results, config, {"dim": 3, "kind": "unitary"}, agreement_block(results))))
    path = tmp_path / "report.docx"
    export_to_docx(report, str(path))

    doc = Document(str(path))
    text = "\n".join(p.text for p in doc.paragraphs)
    assert "Method: canonical" in text
    assert "Method: inductive" in text
    assert "Cross-method agreement" in text
    assert "Lift operator W:" in text
    assert doc.core_properties.title == "Wigner Lift: reconstruct report"
    assert len(doc.tables) >= 5


def test_export_error_report(tmp_path):
    report = json.loads(dumps(build_error_report(
        "reconstruct", ImpureInput("impure", witness={"purity_violation": 0.375}), RunConfig())))
    path = tmp_path / "error.docx"
    export_to_docx(report, str(path))
    text = "\n".join(p.text for p in Document(str(path)).paragraphs)
    assert "ImpureInput" in text


def test_export_failures_are_io_errors(tmp_path):
    with pytest.raises(InputOutputError):
        export_to_docx({"format_version": "1.0", "results": [{}]}, str(tmp_path / "x.docx"))
    with pytest.raises(InputOutputError):
        export_to_docx({"format_version": "1.0"}, str(tmp_path / "missing" / "x.docx"))
