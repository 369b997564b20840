import json

import numpy as np
import pytest

from tfuprob.errors import ValidationError
from tfuprob.report import dumps_canonical, dumps_csv, dumps_table, format_float, render


def test_float_formatting():
    assert format_float(0.25) == "0.25"
    assert format_float(-0.25) == "-0.25"
    assert format_float(0.0) == "0"
    assert format_float(-0.0) == "0"  # sign of zero normalized
    assert format_float(1 / 3) == "0.333333333333"
    with pytest.raises(ValidationError, match="NaN"):
        format_float(float("nan"))
    with pytest.raises(ValidationError, match="NaN or infinite"):
        format_float(float("inf"))


def test_canonical_keys_sorted_and_newline_terminated():
    text = dumps_canonical({"b": 1, "a": {"z": True, "y": None}})
    assert text == '{"a":{"y":null,"z":true},"b":1}\n'


def test_canonical_round_trip_is_idempotent():
    report = {
        "nested": {"x": 0.5, "list": [1, 2.5, "three", False]},
        "unicode": "θ = π/4",
        "zero": 0.0,
    }
    once = dumps_canonical(report)
    again = dumps_canonical(json.loads(once))
    assert once == again
    # non-ascii escapes keep the stream ascii-only
    assert once == once.encode("ascii", errors="strict").decode()


def test_numpy_scalars_normalized():
    text = dumps_canonical({"f": np.float64(0.5), "i": np.int64(3), "b": np.bool_(True)})
    assert json.loads(text) == {"f": 0.5, "i": 3, "b": True}


def test_unserializable_values_rejected():
    with pytest.raises(ValidationError, match="cannot serialize"):
        dumps_canonical({"x": object()})
    with pytest.raises(ValidationError, match="keys must be strings"):
        dumps_canonical({1: "one"})


def test_csv_flattens_and_quotes():
    text = dumps_csv({"pairs": {"p,q": {"|p&q|": 0.25}}, "ok": True})
    lines = text.splitlines()
    assert lines[0] == "label,value"
    assert '"pairs.p,q.|p&q|",0.25' in lines
    assert "ok,true" in lines


def test_csv_indexes_lists():
    text = dumps_csv({"thetas": [0.0, 0.5]})
    assert "thetas[0],0" in text.splitlines()
    assert "thetas[1],0.5" in text.splitlines()


def test_table_alignment():
    text = dumps_table({"short": 1, "a much longer label": 2})
    lines = text.splitlines()
    # both value columns start in the same place
    starts = {line.rindex(" ") for line in lines}
    assert len(starts) == 1


def test_render_dispatch():
    report = {"x": 1}
    assert render(report, "structured") == dumps_canonical(report)
    assert render(report, "csv") == dumps_csv(report)
    assert render(report, "table") == dumps_table(report)
    with pytest.raises(ValidationError, match="unknown format"):
        render(report, "yaml")
