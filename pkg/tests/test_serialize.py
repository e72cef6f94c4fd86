import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

import aeq
from aeq import PointSet


def test_float_roundtrip():
    s = aeq.construct_two_simplices(3)
    back = aeq.load_pointset(aeq.dumps_report(aeq.pointset_to_dict(s)))
    assert back.mode == "float"
    assert np.array_equal(back.array, s.array)


def test_exact_roundtrip(rhombus):
    back = aeq.load_pointset(aeq.dumps_report(aeq.pointset_to_dict(rhombus)))
    assert back.mode == "exact"
    assert back.points == rhombus.points
    assert isinstance(back.points[2][0], Fraction)


def test_exact_dict_encodes_fraction_strings(zigzag):
    obj = aeq.pointset_to_dict(zigzag)
    assert obj["points"][1] == ["3/5", "4/5"]


def test_from_dict_accepts_ints_in_exact_mode():
    s = aeq.pointset_from_dict(
        {"dim": 1, "mode": "exact", "points": [[0], ["1/2"]]}
    )
    assert s.points == ((Fraction(0),), (Fraction(1, 2),))


def test_from_dict_rejects_float_in_exact_mode():
    with pytest.raises(ValueError, match="exact mode"):
        aeq.pointset_from_dict(
            {"dim": 1, "mode": "exact", "points": [[0.5], [1]]}
        )


def test_from_dict_rejects_bool_coordinates():
    with pytest.raises(ValueError, match="numbers"):
        aeq.pointset_from_dict({"dim": 1, "points": [[True], [0.0]]})


def test_from_dict_rejects_missing_keys():
    with pytest.raises(ValueError, match="missing key"):
        aeq.pointset_from_dict({"points": [[0.0]]})
    with pytest.raises(ValueError, match="object"):
        aeq.pointset_from_dict([1, 2])
    with pytest.raises(ValueError, match="nonempty"):
        aeq.pointset_from_dict({"dim": 1, "points": []})


def test_load_pointset_bad_json():
    with pytest.raises(ValueError, match="invalid JSON"):
        aeq.load_pointset("{not json")


def test_csv_roundtrip_with_comments():
    text = "# two points\n0.0, 0.0\n1.0 0.5\n"
    s = aeq.load_pointset_csv(text)
    assert s.n == 2 and s.dim == 2
    assert s.points[1] == (1.0, 0.5)


def test_csv_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        aeq.load_pointset_csv("1.0\nbogus\n")
    with pytest.raises(ValueError, match="row 2 has 1 columns"):
        aeq.load_pointset_csv("1.0 2.0\n3.0\n")
    with pytest.raises(ValueError, match="empty"):
        aeq.load_pointset_csv("# nothing\n")


def test_matrix_csv():
    m = aeq.load_matrix_csv("0 1\n1 0\n")
    assert np.array_equal(m, np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="ragged"):
        aeq.load_matrix_csv("0 1\n1\n")
    with pytest.raises(ValueError, match="line 1"):
        aeq.load_matrix_csv("a b\n")


def test_report_floats_have_17_digits():
    out = aeq.dumps_report({"x": 0.1})
    assert '"x": 0.10000000000000001' in out


def test_report_roundtrips_through_json():
    vals = [0.1, 1.0 / 3.0, 2.945722417977, 1e-300, -0.0]
    out = aeq.dumps_report({"vals": vals})
    assert json.loads(out)["vals"] == vals


def test_report_rejects_nan():
    with pytest.raises(ValueError, match="NaN"):
        aeq.dumps_report({"x": math.nan})
    with pytest.raises(ValueError):
        aeq.dumps_report({"x": math.inf})


def test_report_renders_fractions_as_strings():
    assert aeq.dumps_report(Fraction(1, 3)).strip() == '"1/3"'


def test_report_handles_dataclasses_and_numpy():
    @dataclass
    class Row:
        name: str
        value: float

    out = aeq.dumps_report(
        {"row": Row("a", 0.5), "arr": np.array([1.0, 2.0]), "n": np.int64(3)}
    )
    obj = json.loads(out)
    assert obj == {"row": {"name": "a", "value": 0.5}, "arr": [1.0, 2.0], "n": 3}


def test_report_indent_mode_is_valid_json():
    out = aeq.dumps_report({"a": [1, 2], "b": {"c": None}}, indent=2)
    assert json.loads(out) == {"a": [1, 2], "b": {"c": None}}
    assert out.endswith("\n")
