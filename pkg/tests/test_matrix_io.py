import json

import numpy as np
import pytest

from aluthge_lab.exceptions import MatrixFormatError
from aluthge_lab.matrix_io import (
    matrix_from_csv,
    matrix_from_dict,
    matrix_to_csv,
    matrix_to_dict,
    read_matrix,
    write_matrix,
)

from conftest import ginibre


@pytest.mark.parametrize("suffix", [".json", ".csv"])
def test_round_trip(tmp_path, rng, suffix):
    A = ginibre(rng, 5) * 1e3 + 1e-7
    path = tmp_path / f"a{suffix}"
    write_matrix(path, A)
    B = read_matrix(path)
    assert np.max(np.abs(A - B)) <= 1e-15 * np.max(np.abs(A))


def test_dict_layout():
    d = matrix_to_dict(np.array([[1 + 2j, 3], [4, 5j]]))
    assert d == {"rows": 2, "cols": 2, "entries": [[1.0, 2.0], [3.0, 0.0], [4.0, 0.0], [0.0, 5.0]]}
    assert np.array_equal(matrix_from_dict(d), [[1 + 2j, 3], [4, 5j]])


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"rows": 2, "cols": 2}, "entries"),
        ({"rows": 0, "cols": 2, "entries": []}, "rows"),
        ({"rows": 2, "cols": "2", "entries": []}, "cols"),
        ({"rows": 1, "cols": 2, "entries": [[1, 0]]}, "entries"),
        ({"rows": 1, "cols": 1, "entries": [[1, "x"]]}, "entries[0]"),
    ],
)
def test_malformed_names_field(doc, field):
    with pytest.raises(MatrixFormatError) as info:
        matrix_from_dict(doc)
    assert info.value.field == field


def test_invalid_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(MatrixFormatError):
        read_matrix(p)


def test_csv_errors():
    with pytest.raises(MatrixFormatError):
        matrix_from_csv("1,2,3\n")
    with pytest.raises(MatrixFormatError):
        matrix_from_csv("1,2\n1,2,3,4\n")
    with pytest.raises(MatrixFormatError):
        matrix_from_csv("")
    assert np.array_equal(matrix_from_csv(matrix_to_csv(np.eye(2))), np.eye(2))


def test_json_is_plain(tmp_path):
    write_matrix(tmp_path / "m.json", np.eye(2))
    data = json.loads((tmp_path / "m.json").read_text())
    assert data["rows"] == 2 and len(data["entries"]) == 4
