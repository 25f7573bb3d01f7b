import json
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pytest import mark, raises

from blowup_kit.serialization import (
    REPORT_FORMAT,
    FieldDeserializeFail,
    MissingRequired,
    UnknownField,
    canonical_json,
    deserialize,
    fraction_str,
    parse_fraction,
    serialize,
)
from blowup_kit.series import ExactComplex
from blowup_kit.support_for_testing import symmetric_wedge
from blowup_kit.wedge import WedgeSpec


class Colour(Enum):
    red, green = auto(), auto()


@dataclass(frozen=True)
class Inner:
    value: int
    label: Optional[str] = None


@dataclass(frozen=True)
class Outer:
    inner: Inner
    colours: Tuple[Colour, ...]
    weights: Dict[str, float]
    pair: Tuple[int, str]
    anything: Any = None
    either: Union[int, List[int]] = 0


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                         Rational helpers                          #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@mark.parametrize(
    "q,text",
    [
        (Fraction(0), "0/1"),
        (Fraction(-1, 3), "-1/3"),
        (Fraction(4, 2), "2/1"),
        (Fraction(7), "7/1"),
    ],
)
def test_fraction_str(q, text):
    assert fraction_str(q) == text
    assert parse_fraction(text) == q


def test_parse_fraction():
    assert parse_fraction("5") == Fraction(5)
    assert parse_fraction(" -2/4 ") == Fraction(-1, 2)
    for bad in ["", "1/", "/2", "1/2/3", "1/0", "a/b", "0.5"]:
        with raises(ValueError):
            parse_fraction(bad)
    with raises(ValueError):
        parse_fraction(3)  # type: ignore


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                             Serialize                             #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def test_serialize_dataclasses():
    value = Outer(Inner(1), (Colour.red, Colour.green), {"a": 0.5}, (2, "b"))
    assert serialize(value) == {
        "inner": {"value": 1},
        "colours": ["red", "green"],
        "weights": {"a": 0.5},
        "pair": [2, "b"],
        "either": 0,
    }
    assert serialize(value, no_none_values=False)["inner"] == {"value": 1, "label": None}


def test_report_format():
    value = {
        "q": Fraction(-3, 6),
        "c": ExactComplex(Fraction(1, 3), 2),
        "f": complex(0.5, -1.0),
        "xs": [Fraction(1), 2.5],
    }
    assert serialize(value, REPORT_FORMAT) == {
        "q": "-1/2",
        "c": {"re": "1/3", "im": "2/1"},
        "f": {"re": 0.5, "im": -1.0},
        "xs": ["1/1", 2.5],
    }


def test_canonical_json_is_stable():
    a = canonical_json({"b": Fraction(1, 2), "a": [1, 2]})
    b = canonical_json({"a": [1, 2], "b": Fraction(1, 2)})
    assert a == b
    assert a.endswith("\n")
    assert a.index('"a"') < a.index('"b"')
    assert json.loads(a) == {"a": [1, 2], "b": "1/2"}


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                            Deserialize                            #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def test_deserialize_round_trip():
    value = Outer(Inner(1, "x"), (Colour.green,), {"a": 0.5}, (2, "b"), {"free": [1]}, [3, 4])
    assert deserialize(Outer, json.loads(json.dumps(serialize(value)))) == value


def test_deserialize_wedge_spec():
    w = symmetric_wedge()
    assert deserialize(WedgeSpec, json.loads(canonical_json(w))) == w
    doc = {"n": 1, "edge": [[-1, 1]], "cone_generators": [[1], [-1]], "radius": 1}
    spec = deserialize(WedgeSpec, doc)
    assert spec.radius == 1.0
    assert isinstance(spec.edge[0][0], float)
    assert spec.chart_radius is None


def test_deserialize_scalars():
    assert deserialize(float, 1) == 1.0
    assert deserialize(int, 2.0) == 2
    assert deserialize(Optional[int], None) is None
    assert deserialize(Sequence[int], [1, 2]) == [1, 2]
    assert deserialize(Mapping, {"a": 1}) == {"a": 1}
    for type_value, value in [
        (int, 2.5),
        (int, True),
        (float, "1.0"),
        (str, 1),
        (bool, 1),
        (Colour, "blue"),
        (Tuple[int, int], [1]),
        (List[int], "12"),
        (Dict[str, int], [1]),
        (Union[int, List[int]], "x"),
    ]:
        with raises(FieldDeserializeFail):
            deserialize(type_value, value)


def test_deserialize_failures_name_the_field():
    with raises(FieldDeserializeFail) as e:
        deserialize(Inner, {"value": "one"})
    assert e.value.field_name == "value"
    assert "value" in str(e.value)

    with raises(MissingRequired) as e:
        deserialize(Inner, {"label": "x"})
    assert e.value.field_name == "value"
    assert "Inner" in str(e.value)

    with raises(UnknownField) as e:
        deserialize(Inner, {"value": 1, "extra": 2, "more": 3})
    assert list(e.value.field_names) == ["extra", "more"]

    with raises(FieldDeserializeFail):
        deserialize(Inner, [1])


def test_deserialize_validates():
    doc = {"n": 1, "edge": [[1, -1]], "cone_generators": [[1], [-1]], "radius": 1}
    with raises(ValueError):
        deserialize(WedgeSpec, doc)
