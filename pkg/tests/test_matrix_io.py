import json
import os

import numpy as np
import pytest

from app.services.errors import MatrixFileError, MatrixIOError, SizeError, TraceError
from app.services.linalg import BipartiteSplit
from app.services.matrix_io import (
    ReportDocument,
    dumps_matrix_file,
    format_number,
    parse_matrix_file,
    parse_projector_file,
    write_matrix_file,
)
from app.services.qstate import random_density


def _write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content if isinstance(content, str) else json.dumps(content), encoding="utf-8")
    return str(path)


def test_parse_maximally_mixed(states_dir):
    rho = parse_matrix_file(os.path.join(states_dir, "maximally_mixed_qubit.json"))
    assert rho.dim == 2
    np.testing.assert_array_equal(rho.matrix, np.eye(2) / 2)


def test_parse_bell_state_keeps_split(states_dir):
    rho = parse_matrix_file(os.path.join(states_dir, "bell_state.json"))
    assert rho.split == BipartiteSplit(dim_a=2, dim_b=2)


def test_parse_trace_error(tmp_path):
    path = _write(tmp_path, "bad_trace.json", {"dim": 2, "entries": [[[0.45, 0], [0, 0]], [[0, 0], [0.45, 0]]]})
    with pytest.raises(TraceError) as exc_info:
        parse_matrix_file(path)
    assert exc_info.value.deviation == pytest.approx(0.1)


def test_parse_syntax_error_has_line(tmp_path):
    path = _write(tmp_path, "broken.json", '{\n  "dim": 2,\n  "entries": [[\n}')
    with pytest.raises(MatrixFileError) as exc_info:
        parse_matrix_file(path)
    assert exc_info.value.line is not None
    assert exc_info.value.exit_code == 4


def test_parse_missing_field(tmp_path):
    path = _write(tmp_path, "no_entries.json", {"dim": 2})
    with pytest.raises(MatrixFileError) as exc_info:
        parse_matrix_file(path)
    assert exc_info.value.field == "entries"


def test_parse_shape_mismatch(tmp_path):
    path = _write(tmp_path, "shape.json", {"dim": 3, "entries": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]})
    with pytest.raises(MatrixFileError):
        parse_matrix_file(path)


def test_parse_split_mismatch(tmp_path):
    path = _write(tmp_path, "split.json", {"dim": 2, "split": [2, 2], "entries": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]})
    with pytest.raises(MatrixFileError):
        parse_matrix_file(path)


def test_parse_missing_file(tmp_path):
    with pytest.raises(MatrixIOError):
        parse_matrix_file(str(tmp_path / "missing.json"))


def test_parse_size_limit(states_dir):
    with pytest.raises(SizeError):
        parse_matrix_file(os.path.join(states_dir, "bell_state.json"), max_dim=2)


def test_parse_projector_file(states_dir):
    m = parse_projector_file(os.path.join(states_dir, "qubit_basis_projectors.json"))
    assert len(m.projectors) == 2
    assert m.dim == 2


def test_format_number():
    assert format_number(-0.0) == "0"
    assert format_number(0.5) == "0.5"
    assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2


def test_write_parse_write_is_stable(tmp_path):
    rho = random_density(4, 4, 2024)
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    write_matrix_file(str(first), rho.matrix, label="random")
    parsed = parse_matrix_file(str(first))
    np.testing.assert_array_equal(parsed.matrix, rho.matrix)
    write_matrix_file(str(second), parsed.matrix, label="random")
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text(encoding="utf-8").endswith("}\n")


def test_dumps_normalizes_negative_zero():
    text = dumps_matrix_file(np.array([[1.0 + 0j, -0.0], [-0.0, 0.0]]))
    assert "-0" not in text


def test_dumps_includes_split():
    text = dumps_matrix_file(np.eye(4) / 4, split=BipartiteSplit(dim_a=2, dim_b=2))
    assert json.loads(text)["split"] == [2, 2]


def test_report_document_timing_is_separate():
    doc = ReportDocument(command=["entropy", "x.json"], results={"logical_entropy": 0.5}, timing={"wall_time_s": 1.23})
    assert "wall_time_s" not in doc.deterministic_json()
    assert json.loads(doc.to_json())["timing"]["wall_time_s"] == 1.23
