import json

import numpy as np
import pytest

from noisy_indicators import InvariantError, SolutionSet, sample_weights
from noisy_indicators.io import (
    ParseError,
    read_reference_set,
    read_solution_set,
    read_weights,
    write_solution_set,
    write_weights,
)


def test_csv_round_trip(tmp_path):
    S = SolutionSet([(0.1, 0.2), (0.3, 0.4)], [(1 / 3, 0.2), (0.3, 2 / 7)], ids=["a", "b"])
    p = tmp_path / "s.csv"
    write_solution_set(p, S)
    again = read_solution_set(p)
    assert again.ids == ("a", "b")
    np.testing.assert_array_equal(again.estimated_values, S.estimated_values)


def test_csv_tolerates_spaces_in_header(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("id, t1, t2, r1, r2\nx, 0, 1, 0, 1\n")
    assert read_solution_set(p).dimension == 2


def test_json_solution_set(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"dimension": 2, "solutions": [{"id": "q", "true": [0, 1], "estimated": [0.1, 1]}]}))
    S = read_solution_set(p)
    assert S.ids == ("q",)
    p.write_text(json.dumps({"dimension": 3, "solutions": [{"id": "q", "true": [0, 1], "estimated": [0.1, 1]}]}))
    with pytest.raises(ParseError, match="row 1"):
        read_solution_set(p)


@pytest.mark.parametrize(
    "text, row",
    [
        ("id,t1,t2,r1,r2\na,0,1,0,1\nb,0,1,0\n", 3),
        ("id,t1,t2,r1,r2\na,0,1,0,1\nb,0,x,0,1\n", 3),
        ("id,t1,t2,r1,r2\na,0,nan,0,1\n", 2),
        ("id,t1,r1,t2,r2\na,0,1,0,1\n", 1),
    ],
)
def test_csv_parse_errors_report_row(tmp_path, text, row):
    p = tmp_path / "s.csv"
    p.write_text(text)
    with pytest.raises(ParseError) as info:
        read_solution_set(p)
    assert info.value.row == row


def test_reference_set_file(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("a1,a2\n0,1\n1,0\n")
    assert len(read_reference_set(p)) == 2
    p.write_text("a1,a2\n0,0\n1,1\n")
    with pytest.raises(InvariantError):
        read_reference_set(p)


def test_weights_round_trip_is_bit_exact(tmp_path):
    W = sample_weights(3, 50, 7)
    p = tmp_path / "w.csv"
    write_weights(p, W)
    np.testing.assert_array_equal(read_weights(p).samples, W.samples)
