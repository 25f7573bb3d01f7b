"""Dataclass <-> JSON-value conversion for configs, specs and reports.

`serialize` turns frozen report dataclasses into plain JSON values, with a
`CustomFormat` hook for domain types. `deserialize` builds typed dataclasses
(RunConfig, WedgeSpec, ...) from parsed YAML/JSON, rejecting unknown keys and
reporting the first offending field.
"""

import collections.abc as cabc
import json
from dataclasses import MISSING, dataclass, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Iterable,
    Mapping,
    Optional,
    Sequence,
    Type,
    Union,
    get_args,
    get_origin,
)

from blowup_kit.series import ExactComplex

__all__: Sequence[str] = (
    "serialize",
    "deserialize",
    "CustomFormat",
    "REPORT_FORMAT",
    "canonical_json",
    "fraction_str",
    "parse_fraction",
    "MissingRequired",
    "FieldDeserializeFail",
    "UnknownField",
)

CustomFormat = Mapping[Type, Callable[[Any], Any]]
"""Maps a type to the function that will either serialize or deserialize it."""


def fraction_str(q: Fraction) -> str:
    """Lowest-terms `"p/q"` with a positive denominator, always written with the slash."""
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Inverse of :func:`fraction_str`; also accepts integer strings.

    :raises ValueError On anything that is not a rational literal.
    """
    if not isinstance(text, str):
        raise ValueError(f"Expecting a rational string 'p/q', not {text!r}")
    parts = text.strip().split("/")
    if len(parts) > 2 or any(len(p.strip()) == 0 for p in parts):
        raise ValueError(f"Not a rational literal: {text!r}")
    num = int(parts[0])
    den = int(parts[1]) if len(parts) == 2 else 1
    if den == 0:
        raise ValueError(f"Zero denominator in {text!r}")
    return Fraction(num, den)


REPORT_FORMAT: CustomFormat = {
    Fraction: fraction_str,
    ExactComplex: lambda c: {"re": fraction_str(c.re), "im": fraction_str(c.im)},
    complex: lambda c: {"re": c.real, "im": c.imag},
}
"""Rendering of the numeric domain types inside JSON reports."""


def serialize(
    value: Any, custom: Optional[CustomFormat] = None, no_none_values: bool = True
) -> Any:
    """Attempts to convert the `value` into an equivalent JSON-compatible structure.

    Dataclasses become dicts, mappings keep their keys, enums become their name,
    other iterables become lists. Types in :param:`custom` take priority.
    Fields whose value is `None` are dropped unless :param:`no_none_values` is False.
    """
    if custom is not None and type(value) in custom:
        return custom[type(value)](value)

    if is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: serialize(getattr(value, f.name), custom, no_none_values)
            for f in fields(value)
            if not (no_none_values and getattr(value, f.name) is None)
        }

    if isinstance(value, Enum):
        return value.name

    if isinstance(value, Mapping):
        return {
            serialize(k, custom, no_none_values): serialize(v, custom, no_none_values)
            for k, v in value.items()
            if not (no_none_values and v is None)
        }

    if isinstance(value, Iterable) and not isinstance(value, (str, bytes)):
        return [serialize(x, custom, no_none_values) for x in value]

    return value


def canonical_json(value: Any) -> str:
    """Byte-stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(serialize(value, REPORT_FORMAT), sort_keys=True, indent=2) + "\n"


def deserialize(type_value: Type, value: Any, custom: Optional[CustomFormat] = None) -> Any:
    """Converts the parsed `value` into an instance of `type_value`.

    Supports dataclasses (recursively), `Optional`, `Union`, `List`, `Tuple`
    (fixed and variable length), `Dict`, enums by name and the JSON scalars,
    with the usual int -> float widening and integral float -> int narrowing.

    :raises FieldDeserializeFail On a value that does not fit its declared type.
    :raises MissingRequired If a dataclass field without a default is absent.
    :raises UnknownField If a dataclass document carries keys the type does not declare.
    """
    if custom is not None and type_value in custom:
        return custom[type_value](value)

    if type_value is Any:
        return value

    if is_dataclass(type_value):
        return _dataclass_from_dict(type_value, value, custom)

    origin = get_origin(type_value)
    args = get_args(type_value)

    if origin is Union:
        if value is None and type(None) in args:
            return None
        for candidate in args:
            if candidate is type(None):
                continue
            try:
                return deserialize(candidate, value, custom)
            except (FieldDeserializeFail, MissingRequired, UnknownField, ValueError, TypeError):
                continue
        raise FieldDeserializeFail("", type_value, value)

    if origin in (list, tuple, cabc.Sequence) and not isinstance(value, (list, tuple)):
        raise FieldDeserializeFail("", type_value, value)

    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(deserialize(args[0], v, custom) for v in value)
        if len(args) != len(value):
            raise FieldDeserializeFail("", type_value, value)
        return tuple(deserialize(t, v, custom) for t, v in zip(args, value))

    if origin in (list, cabc.Sequence):
        return [deserialize(args[0], v, custom) for v in value]

    if origin is dict:
        if not isinstance(value, Mapping):
            raise FieldDeserializeFail("", type_value, value)
        k_type, v_type = args
        return {
            deserialize(k_type, k, custom): deserialize(v_type, v, custom)
            for k, v in value.items()
        }

    if isinstance(type_value, type) and issubclass(type_value, Enum):
        try:
            return type_value[value]
        except KeyError:
            raise FieldDeserializeFail("", type_value, value)

    return _scalar(type_value, value)


def _scalar(type_value: Type, value: Any) -> Any:
    if type_value is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise FieldDeserializeFail("", float, value)
        return float(value)
    if type_value is int:
        if isinstance(value, bool):
            raise FieldDeserializeFail("", int, value)
        if isinstance(value, float) and int(value) == value:
            return int(value)
        if not isinstance(value, int):
            raise FieldDeserializeFail("", int, value)
        return value
    if type_value in (str, bool) and not isinstance(value, type_value):
        raise FieldDeserializeFail("", type_value, value)
    return value


def _dataclass_from_dict(dataclass_type: Type, data: Any, custom: Optional[CustomFormat]) -> Any:
    if not isinstance(data, Mapping):
        raise FieldDeserializeFail("", dataclass_type, data)
    declared = {f.name: f for f in fields(dataclass_type) if f.init}
    unknown = sorted(set(data) - set(declared))
    if unknown:
        raise UnknownField(unknown, dataclass_type)
    values = {}
    for name, f in declared.items():
        if name not in data:
            if f.default is MISSING and f.default_factory is MISSING:  # type: ignore
                if get_origin(f.type) is Union and type(None) in get_args(f.type):
                    values[name] = None
                    continue
                raise MissingRequired(name, f.type, dataclass_type)
            continue
        try:
            values[name] = deserialize(f.type, data[name], custom)
        except FieldDeserializeFail as e:
            raise FieldDeserializeFail(name, f.type, data[name]) from e
    return dataclass_type(**values)


def _type_name(t: Any) -> str:
    return getattr(t, "__name__", None) or str(t)


@dataclass(frozen=True)
class MissingRequired(Exception):
    """A data dict is missing a required field."""

    field_name: str
    field_expected_type: Any
    expected_containing_type: Any

    def __str__(self) -> str:
        return (
            f"Missing '{self.field_name}' (expected type of '{_type_name(self.field_expected_type)}') "
            f"in data dict for type '{_type_name(self.expected_containing_type)}'."
        )


@dataclass(frozen=True)
class FieldDeserializeFail(Exception):
    """A specific field (or a top-level value when `field_name` is empty) has the wrong shape."""

    field_name: str
    expected_type: Any
    actual_value: Any

    def __str__(self) -> str:
        if len(self.field_name) > 0:
            prefix = f"Expecting field '{self.field_name}' to have"
        else:
            prefix = "Expecting to find"
        return (
            f"{prefix} type '{_type_name(self.expected_type)}'. "
            f"Instead, found value '{self.actual_value}', "
            f"which has incorrect type '{_type_name(type(self.actual_value))}'."
        )


@dataclass(frozen=True)
class UnknownField(Exception):
    field_names: Sequence[str]
    expected_containing_type: Any

    def __str__(self) -> str:
        return (
            f"Unknown field(s) {list(self.field_names)} for type "
            f"'{_type_name(self.expected_containing_type)}'."
        )
