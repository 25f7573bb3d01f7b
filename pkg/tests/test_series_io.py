import json
from fractions import Fraction

from pytest import fixture, mark, raises

from blowup_kit.series import ExactComplex, Mode, Series, germ_variables, to_float
from blowup_kit.series_io import (
    SeriesFormatError,
    dumps_series,
    loads_series,
    one_form_from_document,
    read_json_document,
    read_one_form,
    read_series,
    series_from_document,
    series_to_document,
    write_one_form,
    write_series,
)


@fixture(scope="module")
def germ() -> Series:
    return Series.from_terms(
        germ_variables(1),
        6,
        Mode.exact,
        [((0, 3), 1), ((1, 1), ExactComplex(Fraction(-2, 6), Fraction(1, 3)))],
    )


def test_document_layout(germ):
    doc = series_to_document(germ)
    assert doc["variables"] == ["z", "w1"]
    assert doc["truncation"] == 6
    assert doc["mode"] == "exact"
    # graded lexicographic: degree 2 before degree 3
    assert doc["terms"] == [
        {"exp": [1, 1], "re": "-1/3", "im": "1/3"},
        {"exp": [0, 3], "re": "1/1", "im": "0/1"},
    ]


def test_text_is_canonical(germ):
    text = dumps_series(germ)
    assert text.endswith("\n")
    assert loads_series(text) == germ
    shuffled = json.loads(text)
    shuffled["terms"].reverse()
    assert dumps_series(series_from_document(shuffled)) == text


def test_float_document():
    s = to_float(Series.from_terms(("x",), 2, Mode.exact, [((1,), Fraction(1, 4))]))
    doc = series_to_document(s)
    assert doc["terms"] == [{"exp": [1], "re": 0.25, "im": 0.0}]
    assert series_from_document(doc) == s


def test_zero_coefficients_dropped_on_read():
    doc = {
        "variables": ["x"],
        "truncation": 2,
        "mode": "exact",
        "terms": [{"exp": [1], "re": "0/1", "im": "0"}],
    }
    assert series_from_document(doc).is_zero()


def _valid() -> dict:
    return {
        "variables": ["x", "y"],
        "truncation": 3,
        "mode": "exact",
        "terms": [{"exp": [1, 0], "re": "1/2", "im": "0/1"}],
    }


def _with(**changes) -> dict:
    doc = _valid()
    doc.update(changes)
    return doc


@mark.parametrize(
    "doc",
    [
        [],
        {"variables": ["x"], "truncation": 1, "mode": "exact"},
        _with(extra=1),
        _with(variables="xy"),
        _with(truncation=-1),
        _with(truncation=True),
        _with(mode="rational"),
        _with(terms={}),
        _with(terms=[{"re": "1", "im": "0"}]),
        _with(terms=[{"exp": [1], "re": "1", "im": "0"}]),
        _with(terms=[{"exp": [-1, 0], "re": "1", "im": "0"}]),
        _with(terms=[{"exp": [4, 0], "re": "1", "im": "0"}]),
        _with(terms=[{"exp": [1, 0], "re": "1"}]),
        _with(terms=[{"exp": [1, 0], "re": 0.5, "im": "0"}]),
        _with(terms=[{"exp": [1, 0], "re": "1/0", "im": "0"}]),
        _with(terms=[{"exp": [1, 0], "re": "one", "im": "0"}]),
        _with(
            terms=[
                {"exp": [1, 0], "re": "1", "im": "0"},
                {"exp": [1, 0], "re": "2", "im": "0"},
            ]
        ),
        _with(variables=["x", "x"]),
        _with(mode="float", terms=[{"exp": [1, 0], "re": "1/2", "im": 0}]),
    ],
)
def test_invalid_documents(doc):
    with raises(SeriesFormatError):
        series_from_document(doc)


def test_malformed_text():
    with raises(SeriesFormatError) as e:
        loads_series("{not json", source="inline")
    assert "inline" in str(e.value)


def test_file_roundtrip(tmp_path, germ):
    path = tmp_path / "germ.json"
    write_series(germ, path)
    assert read_series(path) == germ
    assert path.read_text() == dumps_series(germ)


def test_missing_file(tmp_path):
    with raises(SeriesFormatError):
        read_json_document(tmp_path / "absent.json")


def test_one_form(tmp_path, germ):
    path = tmp_path / "v.json"
    write_one_form([germ, germ], path)
    assert read_one_form(path) == [germ, germ]
    with raises(SeriesFormatError):
        one_form_from_document({"components": "nope"})
    with raises(SeriesFormatError) as e:
        one_form_from_document({"components": [{}]}, "v")
    assert "components[0]" in str(e.value)
