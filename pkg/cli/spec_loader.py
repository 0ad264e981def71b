"""
Spec documents: JSON files describing a product, an array product, a set
of lemma cases or a list of algebraic numbers.

    {
      "schema_version": 1,
      "kind": "product",
      "meta": {"name": "double exponential", "description": "..."},
      "alpha": "2^(2^n)", "b": "1", "epsilon": "1/2", "a": "1/2", "e": 1, "D": 1,
      "majorant": {"kind": "geometric", "c": "1", "r": "1/2", "start": 1}
    }

Generators are grammar expressions, `{"template": [c_0, c_1, ...], "center": [re, im]}`
for a root of sum c_k x^k near the center, or `{"explicit": [...]}` for a finite list.
Errors carry the JSON path of the offending field.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from algebra.number import AlgebraicNumber, from_hint, from_polynomial
from algebra.polynomial import IntegerPolynomial
from cli.errors import ExpressionError, ParseError, SchemaError
from cli.grammar import VARIABLES, parse_expression, parse_fraction, parse_ratio
from criteria.majorant import TailMajorant
from criteria.specs import ArraySpec, SequenceSpec
from criteria.terms import ExplicitTerm, IntegerTerm, TemplateTerm, TermGenerator
from lemmalab.cases import LemmaCase, RealSequence
from utils.config import get_config
from utils.io_utils import read_text
from utils.logging_utils import get_logger

logger = get_logger(__name__)

KINDS = ("product", "product_of_series", "lemma", "heights")

_COMMON = {"schema_version", "kind", "meta"}
_FIELDS = {
    "product": {"alpha", "b", "epsilon", "a", "e", "D", "majorant", "declared_degrees", "asserted",
                "validity_start", "prefix"},
    "product_of_series": {"alpha", "b", "epsilon", "e", "D", "sign_mode", "mode_params", "majorant",
                          "diagnostic_majorant", "declared_degrees", "asserted", "validity_start", "prefix"},
    "lemma": {"cases"},
    "heights": {"numbers", "triples"},
}
_MISSING = object()


@dataclass
class SpecDocument:
    kind: str
    name: str = ""
    description: str = ""
    spec: Optional[Union[SequenceSpec, ArraySpec]] = None
    cases: List[LemmaCase] = field(default_factory=list)
    numbers: List[AlgebraicNumber] = field(default_factory=list)
    prefix: Optional[int] = None
    triples: bool = True
    schema_version: int = 1
    source: str = ""


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _field(obj: Dict[str, Any], key: str, path: str, types, default=_MISSING):
    where = _join(path, key)
    if key not in obj:
        if default is _MISSING:
            raise SchemaError(f"missing field '{key}'", where)
        return default
    value = obj[key]
    types = types if isinstance(types, tuple) else (types,)
    if isinstance(value, bool) and bool not in types or not isinstance(value, types):
        names = " or ".join(t.__name__ for t in types)
        raise SchemaError(f"expected {names}, got {type(value).__name__}", where)
    return value


def _located(error: ExpressionError, path: str) -> ExpressionError:
    error.coordinates = f"{path}: {error.coordinates}"
    return error


def _fraction(value, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"expected a rational as int or string, got {type(value).__name__}", path)
    try:
        return parse_fraction(value)
    except ExpressionError as e:
        raise _located(e, path)


def _optional_fraction(obj, key: str, path: str) -> Optional[Fraction]:
    if key not in obj or obj[key] is None:
        return None
    return _fraction(obj[key], _join(path, key))


def _positive_int(obj, key: str, path: str, default=_MISSING) -> int:
    value = _field(obj, key, path, int, default)
    if value is not None and value < 1:
        raise SchemaError(f"must be a positive integer, got {value}", _join(path, key))
    return value


def _expression(value, path: str, variables: Tuple[str, ...]):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"expected an expression string, got {type(value).__name__}", path)
    try:
        return parse_expression(str(value), variables)
    except ExpressionError as e:
        raise _located(e, path)


def _ratio(value, path: str, variables: Tuple[str, ...]):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"expected a ratio string, got {type(value).__name__}", path)
    try:
        return parse_ratio(str(value), variables)
    except ExpressionError as e:
        raise _located(e, path)


def _generator(value, path: str, variables: Tuple[str, ...], allow_explicit: bool) -> TermGenerator:
    if not isinstance(value, dict):
        return IntegerTerm(_expression(value, path, variables))
    if "template" in value:
        coefficients = _field(value, "template", path, list)
        if len(coefficients) < 2:
            raise SchemaError("a template needs at least two coefficients", _join(path, "template"))
        center = _field(value, "center", path, list)
        if len(center) != 2:
            raise SchemaError("center must be [re, im]", _join(path, "center"))
        half_width = value.get("half_width")
        return TemplateTerm(
            tuple(_expression(c, _join(_join(path, "template"), i), variables) for i, c in enumerate(coefficients)),
            _ratio(center[0], _join(_join(path, "center"), 0), variables),
            _ratio(center[1], _join(_join(path, "center"), 1), variables),
            None if half_width is None else _ratio(half_width, _join(path, "half_width"), variables),
        )
    if "explicit" in value:
        if not allow_explicit:
            raise SchemaError("explicit lists are only allowed for single products", path)
        items = _field(value, "explicit", path, list)
        if not items:
            raise SchemaError("an explicit list needs at least one term", _join(path, "explicit"))
        return ExplicitTerm(tuple(_generator(item, _join(_join(path, "explicit"), i), ("n",), False)
                                  for i, item in enumerate(items)))
    raise SchemaError("a generator object needs a 'template' or 'explicit' key", path)


def build_majorant(obj, path: str) -> TailMajorant:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected object, got {type(obj).__name__}", path)
    kind = _field(obj, "kind", path, str)
    bounds = tuple(_fraction(b, _join(_join(path, "bounds"), i))
                   for i, b in enumerate(_field(obj, "bounds", path, list, [])))
    c = _optional_fraction(obj, "c", path)
    try:
        return TailMajorant(
            kind=kind,
            start=_positive_int(obj, "start", path, 1),
            c=Fraction(1) if c is None else c,
            r=_optional_fraction(obj, "r", path),
            epsilon=_optional_fraction(obj, "epsilon", path),
            p=_optional_fraction(obj, "p", path),
            bounds=bounds,
        )
    except ValueError as e:
        raise SchemaError(str(e), path)


def _check_ids(data: Dict[str, Any]) -> List[str]:
    ids = _field(data, "asserted", "", list, [])
    for i, item in enumerate(ids):
        if not isinstance(item, str):
            raise SchemaError(f"check ids are strings, got {item!r}", _join("asserted", i))
    return ids


def _common_spec_fields(data: Dict[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "epsilon": _fraction(_field(data, "epsilon", "", (int, str)), "epsilon"),
        "e": _field(data, "e", "", int, 1),
        "D": _positive_int(data, "D", "", 1),
        "validity_start": _positive_int(data, "validity_start", "", 1),
        "asserted": frozenset(_check_ids(data)),
    }
    if "majorant" in data:
        out["tail_majorant"] = build_majorant(data["majorant"], "majorant")
    if "declared_degrees" in data:
        degrees = _field(data, "declared_degrees", "", list)
        for i, d in enumerate(degrees):
            if isinstance(d, bool) or not isinstance(d, int) or d < 1:
                raise SchemaError(f"degrees must be positive integers, got {d!r}", _join("declared_degrees", i))
        out["declared_degrees"] = tuple(degrees)
    return out


def _sequence_spec(data: Dict[str, Any], name: str) -> SequenceSpec:
    fields = _common_spec_fields(data)
    alpha = _generator(_field(data, "alpha", "", (int, str, dict)), "alpha", ("n",), True)
    b = _generator(data.get("b", "1"), "b", ("n",), True)
    a = _fraction(_field(data, "a", "", (int, str)), "a")
    unknown = fields["asserted"] - {"h1", "h2", "h3", "h4", "h5"}
    if unknown:
        raise SchemaError(f"unknown check ids: {', '.join(sorted(unknown))}", "asserted")
    try:
        return SequenceSpec(alpha=alpha, b=b, a=a, name=name, **fields)
    except ValueError as e:
        raise SchemaError(str(e), "product")


def _array_spec(data: Dict[str, Any], name: str) -> ArraySpec:
    fields = _common_spec_fields(data)
    alpha = _generator(_field(data, "alpha", "", (int, str, dict)), "alpha", VARIABLES, False)
    b = _generator(data.get("b", "1"), "b", VARIABLES, False)
    unknown = fields["asserted"] - {"g1", "g2", "g3", "g4", "g5"}
    if unknown:
        raise SchemaError(f"unknown check ids: {', '.join(sorted(unknown))}", "asserted")
    mode_params = _field(data, "mode_params", "", dict, {})
    if "diagnostic_majorant" in data:
        fields["diagnostic_majorant"] = build_majorant(data["diagnostic_majorant"], "diagnostic_majorant")
    try:
        return ArraySpec(
            alpha=alpha,
            b=b,
            sign_mode=_field(data, "sign_mode", "", str, "main"),
            X=_optional_fraction(mode_params, "X", "mode_params"),
            R=_optional_fraction(mode_params, "R", "mode_params"),
            name=name,
            **fields,
        )
    except ValueError as e:
        raise SchemaError(str(e), "product_of_series")


def _lemma_param(key: str, value, path: str):
    if key in ("a", "D_n"):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise SchemaError(f"expected a sequence expression, got {type(value).__name__}", path)
        try:
            return RealSequence.parse(value)
        except ExpressionError as e:
            raise _located(e, path)
    if key in ("epsilon", "delta"):
        return _fraction(value, path)
    if key in ("N", "k", "D"):
        if value is None and key == "k":
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"expected an integer, got {type(value).__name__}", path)
        return value
    if key == "majorant":
        return build_majorant(value, path)
    if key == "intervals":
        if not isinstance(value, list):
            raise SchemaError("expected a list of [t, k] pairs", path)
        out = []
        for i, pair in enumerate(value):
            if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(x, int) for x in pair):
                raise SchemaError("expected an integer pair [t, k]", _join(path, i))
            out.append((pair[0], pair[1]))
        return tuple(out)
    raise SchemaError(f"unknown lemma parameter '{key}'", path)


def _lemma_cases(data: Dict[str, Any]) -> List[LemmaCase]:
    cases = []
    default_prefix = get_config().criteria.prefix
    for i, raw in enumerate(_field(data, "cases", "", list)):
        path = _join("cases", i)
        if not isinstance(raw, dict):
            raise SchemaError(f"expected object, got {type(raw).__name__}", path)
        lemma_id = _field(raw, "lemma", path, str)
        params_raw = _field(raw, "params", path, dict, {})
        params_path = _join(path, "params")
        params = {key: _lemma_param(key, value, _join(params_path, key)) for key, value in params_raw.items()}
        try:
            cases.append(LemmaCase(lemma_id, params, _positive_int(raw, "prefix", path, default_prefix),
                                   _field(raw, "name", path, str, "")))
        except ValueError as e:
            raise SchemaError(str(e), path)
    if not cases:
        raise SchemaError("a lemma document needs at least one case", "cases")
    return cases


def _numbers(data: Dict[str, Any]) -> List[AlgebraicNumber]:
    numbers = []
    for i, raw in enumerate(_field(data, "numbers", "", list)):
        path = _join("numbers", i)
        if not isinstance(raw, dict):
            raise SchemaError(f"expected object, got {type(raw).__name__}", path)
        coefficients = _field(raw, "poly", path, list)
        if len(coefficients) < 2 or not all(isinstance(c, int) and not isinstance(c, bool) for c in coefficients):
            raise SchemaError("poly must list at least two integer coefficients, constant first",
                              _join(path, "poly"))
        poly = IntegerPolynomial(tuple(coefficients))
        try:
            if "center" in raw:
                center = _field(raw, "center", path, list)
                if len(center) != 2:
                    raise SchemaError("center must be [re, im]", _join(path, "center"))
                numbers.append(from_hint(poly, _fraction(center[0], _join(_join(path, "center"), 0)),
                                         _fraction(center[1], _join(_join(path, "center"), 1))))
            else:
                numbers.append(from_polynomial(poly, _field(raw, "root", path, int, 0)))
        except ValueError as e:
            raise SchemaError(str(e), path)
    if not numbers:
        raise SchemaError("a heights document needs at least one number", "numbers")
    return numbers


def parse_document(data: Any, source: str = "<memory>") -> SpecDocument:
    if not isinstance(data, dict):
        raise SchemaError(f"expected a JSON object at the top level, got {type(data).__name__}", "$")
    version = _field(data, "schema_version", "", int, 1)
    supported = get_config().report.schema_version
    if version != supported:
        raise SchemaError(f"unsupported schema_version {version}, expected {supported}", "schema_version")
    kind = _field(data, "kind", "", str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind '{kind}', must be one of {', '.join(KINDS)}", "kind")
    unknown = sorted(set(data) - _COMMON - _FIELDS[kind])
    if unknown:
        raise SchemaError(f"unknown field for kind {kind}", unknown[0])
    meta = _field(data, "meta", "", dict, {})
    document = SpecDocument(
        kind=kind,
        name=_field(meta, "name", "meta", str, ""),
        description=_field(meta, "description", "meta", str, ""),
        schema_version=version,
        source=source,
    )
    if kind == "product":
        document.spec = _sequence_spec(data, document.name)
    elif kind == "product_of_series":
        document.spec = _array_spec(data, document.name)
    elif kind == "lemma":
        document.cases = _lemma_cases(data)
    else:
        document.numbers = _numbers(data)
        document.triples = _field(data, "triples", "", bool, True)
    if kind in ("product", "product_of_series"):
        prefix = _positive_int(data, "prefix", "", None)
        if prefix is not None and prefix < 2:
            raise SchemaError(f"prefix must be at least 2, got {prefix}", "prefix")
        document.prefix = prefix
    logger.debug(f"Loaded {kind} document '{document.name}' from {source}")
    return document


def load_spec(path: str) -> SpecDocument:
    """Read and validate a spec document; FileNotFoundError when the path is missing."""
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno)
    return parse_document(data, str(path))
