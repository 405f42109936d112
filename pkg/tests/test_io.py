import pytest
from importlib import resources

from heffter.core import PartiallyFilledArray
from heffter.errors import DimensionMismatch, ParseError
from heffter.io import ArrayDocument, emit_array, parse_array, read_array

from conftest import fixture_path


def bundled():
    root = resources.files("heffter").joinpath("fixtures")
    names = sorted(p.name for p in root.iterdir() if p.name.endswith(".grid"))
    names += sorted("ingredients/" + p.name for p in root.joinpath("ingredients").iterdir())
    return names


def test_parse_h12():
    doc = read_array(fixture_path("h_12_3.grid"))
    assert doc.array.shape == (12, 12) and doc.array.size == 36
    assert doc.kind == "integer_heffter"


def test_json_nulls():
    doc = parse_array('{"grid": [[1, null], [null, -1]]}')
    assert doc.array.size == 2


def test_ragged_rows():
    with pytest.raises(DimensionMismatch):
        parse_array("1 2 3\n4 5\n")


def test_float_rejected():
    with pytest.raises(ParseError):
        parse_array('{"grid": [[1.5]]}')


def test_emit_examples():
    doc = read_array(fixture_path("sma_14_3.grid"))
    body = [l for l in emit_array(doc, "grid").splitlines() if not l.startswith("#")]
    assert len(body) == 15  # header plus 14 rows
    assert emit_array(PartiallyFilledArray.empty(1, 1)).strip() == "."


@pytest.mark.parametrize("name", bundled())
@pytest.mark.parametrize("fmt", ["grid", "json"])
def test_round_trip(name, fmt):
    doc = read_array(fixture_path(name))
    text = emit_array(doc, fmt)
    again = parse_array(text, fmt)
    assert again == doc
    assert emit_array(again, fmt) == text
