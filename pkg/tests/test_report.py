import json
import os

import pytest

from zlab.report import emit_csv, emit_manifest, emit_svg, format_float


def test_format_float_17_digits_round_trip():
    import math

    for x in (1.0 / 3.0, 1e-300, 12345.678901234567, -math.pi):
        assert float(format_float(x)) == x
    assert format_float(3) == "3"
    assert format_float(True) == "true"
    assert format_float(False) == "false"


def test_emit_csv(tmp_path):
    path = str(tmp_path / "t.csv")
    emit_csv(path, ("a", "b"), [(1, 0.5), ("x", 2.0 / 3.0)])
    text = open(path, "rb").read().decode()
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert lines[1] == "1,0.5"
    assert lines[2].startswith("x,0.6666666666666666")
    assert text.endswith("\n") and "\r" not in text


def test_emit_csv_errors(tmp_path):
    path = str(tmp_path / "t.csv")
    with pytest.raises(ValueError):
        emit_csv(path, ("a",), [])
    with pytest.raises(ValueError):
        emit_csv(path, ("a", "b"), [(1,)])
    assert not os.path.exists(path)


def test_emit_manifest(tmp_path):
    path = str(tmp_path / "m.json")
    emit_manifest(path, {"command": "x", "checks": []})
    data = json.load(open(path))
    assert data == {"command": "x", "checks": []}


def test_emit_svg_deterministic(tmp_path):
    p1 = str(tmp_path / "a.svg")
    p2 = str(tmp_path / "b.svg")
    emit_svg(p1, [1.0, 2.0, 4.0], [1.0, 0.5, 0.25], logx=True, logy=True)
    emit_svg(p2, [1.0, 2.0, 4.0], [1.0, 0.5, 0.25], logx=True, logy=True)
    b1, b2 = open(p1, "rb").read(), open(p2, "rb").read()
    assert b1 == b2
    assert b1.startswith(b"<?xml")
    with pytest.raises(ValueError):
        emit_svg(str(tmp_path / "c.svg"), [], [])
    with pytest.raises(ValueError):
        emit_svg(str(tmp_path / "c.svg"), [1.0], [1.0, 2.0])


def test_no_leftover_temp_files(tmp_path):
    emit_csv(str(tmp_path / "t.csv"), ("a",), [(1,)])
    emit_manifest(str(tmp_path / "m.json"), {})
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["m.json", "t.csv"]
