"""Reading and writing series documents.

A series document is a JSON object:

    {"variables": ["z", "zbar", "s1", "t1"], "truncation": 8, "mode": "exact",
     "terms": [{"exp": [0, 0, 2, 0], "re": "1/1", "im": "0/1"}, ...]}

Exact coefficients are `"p/q"` strings in lowest terms; float coefficients are
JSON numbers. Terms are written in graded lexicographic order of `exp`, so an
exact series has exactly one byte representation.

A one-form document wraps its components: `{"components": [<series>, ...]}`.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Union

from blowup_kit.serialization import fraction_str, parse_fraction
from blowup_kit.series import (
    Coefficient,
    ExactComplex,
    Mode,
    MultiIndex,
    Series,
    SeriesError,
)

__all__: Sequence[str] = (
    "SeriesFormatError",
    "series_to_document",
    "series_from_document",
    "dumps_series",
    "loads_series",
    "read_series",
    "write_series",
    "one_form_to_document",
    "one_form_from_document",
    "read_one_form",
    "write_one_form",
    "read_json_document",
)


@dataclass(frozen=True)
class SeriesFormatError(ValueError):
    """A series document is syntactically or structurally invalid."""

    source: str
    problem: str

    def __str__(self) -> str:
        return f"Invalid series document ({self.source}): {self.problem}"


def _coefficient_to_document(c: Coefficient) -> Dict[str, Any]:
    if isinstance(c, ExactComplex):
        return {"re": fraction_str(c.re), "im": fraction_str(c.im)}
    return {"re": c.real, "im": c.imag}


def series_to_document(a: Series) -> Dict[str, Any]:
    terms = []
    for alpha, c in a.sorted_terms():
        entry: Dict[str, Any] = {"exp": list(alpha)}
        entry.update(_coefficient_to_document(c))
        terms.append(entry)
    return {
        "variables": list(a.variables),
        "truncation": a.truncation,
        "mode": a.mode.name,
        "terms": terms,
    }


def _coefficient_from_document(entry: Mapping[str, Any], mode: Mode, source: str) -> Coefficient:
    if "re" not in entry or "im" not in entry:
        raise SeriesFormatError(source, f"term {dict(entry)} needs both 're' and 'im'")
    re, im = entry["re"], entry["im"]
    if mode is Mode.exact:
        if not isinstance(re, str) or not isinstance(im, str):
            raise SeriesFormatError(source, f"exact coefficients are 'p/q' strings, found {re!r}, {im!r}")
        try:
            return ExactComplex(parse_fraction(re), parse_fraction(im))
        except ValueError as e:
            raise SeriesFormatError(source, str(e))
    for part in (re, im):
        if isinstance(part, bool) or not isinstance(part, (int, float)):
            raise SeriesFormatError(source, f"float coefficients are JSON numbers, found {part!r}")
    return complex(float(re), float(im))


def series_from_document(doc: Any, source: str = "<document>") -> Series:
    """Validates a parsed document and builds the series.

    Zero coefficients are dropped on read.

    :raises SeriesFormatError On missing keys, wrong types, bad exponents, duplicate
                              exponent entries or terms above the truncation.
    """
    if not isinstance(doc, Mapping):
        raise SeriesFormatError(source, "top level must be an object")
    missing = [k for k in ("variables", "truncation", "mode", "terms") if k not in doc]
    if missing:
        raise SeriesFormatError(source, f"missing keys {missing}")
    extra = sorted(set(doc) - {"variables", "truncation", "mode", "terms"})
    if extra:
        raise SeriesFormatError(source, f"unknown keys {extra}")

    variables = doc["variables"]
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise SeriesFormatError(source, "'variables' must be a list of names")
    truncation = doc["truncation"]
    if isinstance(truncation, bool) or not isinstance(truncation, int) or truncation < 0:
        raise SeriesFormatError(source, f"'truncation' must be a non-negative integer, not {truncation!r}")
    try:
        mode = Mode[doc["mode"]]
    except (KeyError, TypeError):
        raise SeriesFormatError(source, f"'mode' must be 'exact' or 'float', not {doc['mode']!r}")
    if not isinstance(doc["terms"], list):
        raise SeriesFormatError(source, "'terms' must be a list")

    acc: Dict[MultiIndex, Coefficient] = {}
    for entry in doc["terms"]:
        if not isinstance(entry, Mapping) or "exp" not in entry:
            raise SeriesFormatError(source, f"term {entry!r} has no 'exp'")
        exp = entry["exp"]
        if (
            not isinstance(exp, list)
            or len(exp) != len(variables)
            or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp)
        ):
            raise SeriesFormatError(source, f"exponent {exp!r} does not index {variables}")
        alpha = tuple(exp)
        if alpha in acc:
            raise SeriesFormatError(source, f"duplicate exponent {exp}")
        if sum(alpha) > truncation:
            raise SeriesFormatError(source, f"term {exp} exceeds truncation {truncation}")
        acc[alpha] = _coefficient_from_document(entry, mode, source)

    try:
        return Series._trusted(tuple(variables), truncation, mode, acc)
    except (SeriesError, ValueError) as e:
        raise SeriesFormatError(source, str(e))


def dumps_series(a: Series) -> str:
    return json.dumps(series_to_document(a), sort_keys=True, indent=2) + "\n"


def read_json_document(path: Union[str, Path]) -> Any:
    """Parses a JSON file, turning every read or parse problem into :class:`SeriesFormatError`."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise SeriesFormatError(str(p), f"cannot read file: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SeriesFormatError(str(p), f"malformed JSON: {e}")


def loads_series(text: str, source: str = "<string>") -> Series:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SeriesFormatError(source, f"malformed JSON: {e}")
    return series_from_document(doc, source)


def read_series(path: Union[str, Path]) -> Series:
    return series_from_document(read_json_document(path), str(path))


def write_series(a: Series, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_series(a), encoding="utf-8")


def one_form_to_document(components: Sequence[Series]) -> Dict[str, Any]:
    return {"components": [series_to_document(v) for v in components]}


def one_form_from_document(doc: Any, source: str = "<document>") -> List[Series]:
    """:raises SeriesFormatError Unless `doc` is `{"components": [<series>, ...]}`."""
    if not isinstance(doc, Mapping) or not isinstance(doc.get("components"), list):
        raise SeriesFormatError(source, "a one-form document is {'components': [...]}")
    return [
        series_from_document(c, f"{source}#components[{i}]")
        for i, c in enumerate(doc["components"])
    ]


def read_one_form(path: Union[str, Path]) -> List[Series]:
    return one_form_from_document(read_json_document(path), str(path))


def write_one_form(components: Sequence[Series], path: Union[str, Path]) -> None:
    text = json.dumps(one_form_to_document(components), sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8")
