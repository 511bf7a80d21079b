"""JSON scenario files.

A scenario is a single JSON object::

    {"name": "lem31", "kind": "two-point", "lambda1": 1, "lambda2": 2}

Sequence-valued keys (``forward_seq``, ``backward_seq``, ``alpha_seq``,
``beta_seq``) take one of

* ``{"values": [..], "tail": "constant" | "cycle"}``
* ``{"telescoping": {"poly": [ascending integer coefficients], "scale": c, "invert": false}}``
* ``{"formula": "<family>-<above|below>", "limit": v, "amplitude": a, "shift": s}``

Phase lists are arrays of ``"a+bi"`` strings or ``[re, im]`` pairs.  An
optional ``budget`` object overrides ``n_max`` and ``precision``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any, Optional

from .analysis import Budget
from .errors import ModelError, ParseError, SchemaError, ValidationError
from .model import Kind, Model, PeriodicPattern, PhaseSet, ScenarioSpec, build_model
from .sequences import ConvergentFormula, ExplicitList, PresetFormula, SequenceSpec, TelescopingRational, formula_preset

_SEQ_KEYS = ("forward_seq", "backward_seq", "alpha_seq", "beta_seq")

REQUIRED = {
    Kind.TWO_POINT: {"lambda2"},
    Kind.PERIODIC: {"lambda2", "pattern"},
    Kind.PRESCRIBED_CIRCLES: {"lambda2"},
    Kind.COMBINED: {"lambda2"},
    Kind.ACCUMULATING: {"lambda2", "forward_seq", "backward_seq"},
    Kind.SINGLE_ESSENTIAL: {"forward_seq", "backward_seq"},
    Kind.INTERVAL: {"lambda2", "alpha_seq", "beta_seq"},
}
OPTIONAL = {
    Kind.PRESCRIBED_CIRCLES: {"phases1", "phases2"},
    Kind.COMBINED: {"pattern", "phases1", "phases2"},
}
_COMMON_REQUIRED = {"name", "kind", "lambda1"}
_COMMON_OPTIONAL = {"budget"}

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_NUM})?(?:([+-])({_NUM})?i)?$|^([+-]?)({_NUM})?i$")


def parse_complex(text: str) -> complex:
    """Parse ``"a+bi"``, ``"a"``, ``"bi"`` or ``"-i"`` with decimal literals."""
    s = text.strip().replace(" ", "")
    m = _COMPLEX.match(s)
    if not s or not m:
        raise ValueError(f"not a complex literal of the form a+bi: {text!r}")
    if m.group(5) is not None or (m.group(1) is None and m.group(2) is None):
        sign = -1.0 if m.group(4) == "-" else 1.0
        return complex(0.0, sign * float(m.group(5) or 1.0))
    re_part = float(m.group(1)) if m.group(1) else 0.0
    im_part = 0.0
    if m.group(2):
        im_part = float(m.group(3) or 1.0) * (-1.0 if m.group(2) == "-" else 1.0)
    return complex(re_part, im_part)


@dataclass(frozen=True)
class Scenario:
    name: str
    spec: ScenarioSpec
    budget: Optional[Budget] = None

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise SchemaError("scenario name must be a nonempty string")

    def model(self) -> Model:
        return build_model(self.spec)


def _number(v, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, Decimal)):
        raise SchemaError(f"{what} must be a number, got {v!r}")
    return float(v)


def _integer(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{what} must be an integer, got {v!r}")
    return v


def _object(v, what: str, required: set, optional: set = frozenset()) -> dict:
    if not isinstance(v, dict):
        raise SchemaError(f"{what} must be an object")
    missing = required - v.keys()
    extra = v.keys() - required - set(optional)
    if missing:
        raise SchemaError(f"{what} is missing {', '.join(sorted(missing))}")
    if extra:
        raise SchemaError(f"{what} has unknown key(s) {', '.join(sorted(extra))}")
    return v


def _scale(v, what: str) -> Fraction:
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{what} must be a number or 'p/q' string, got {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, (int, Decimal)):
        raise SchemaError(f"{what} must be a number or 'p/q' string, got {v!r}")
    return Fraction(v)


def _sequence(v, what: str) -> SequenceSpec:
    if not isinstance(v, dict):
        raise SchemaError(f"{what} must be an object")
    if "values" in v:
        d = _object(v, what, {"values"}, {"tail"})
        if not isinstance(d["values"], list) or not d["values"]:
            raise SchemaError(f"{what}.values must be a nonempty array")
        tail = d.get("tail", "constant")
        if tail not in ("constant", "cycle"):
            raise SchemaError(f"{what}.tail must be 'constant' or 'cycle'")
        return ExplicitList(tuple(_number(x, f"{what}.values") for x in d["values"]), tail)
    if "telescoping" in v:
        _object(v, what, {"telescoping"})
        t = _object(v["telescoping"], f"{what}.telescoping", {"poly"}, {"scale", "invert"})
        if not isinstance(t["poly"], list) or not t["poly"]:
            raise SchemaError(f"{what}.telescoping.poly must be a nonempty integer array")
        poly = tuple(_integer(c, f"{what}.telescoping.poly") for c in t["poly"])
        invert = t.get("invert", False)
        if not isinstance(invert, bool):
            raise SchemaError(f"{what}.telescoping.invert must be true or false")
        return TelescopingRational(poly, _scale(t.get("scale", 1), f"{what}.telescoping.scale"), invert)
    if "formula" in v:
        d = _object(v, what, {"formula", "limit"}, {"amplitude", "shift"})
        if not isinstance(d["formula"], str):
            raise SchemaError(f"{what}.formula must be a preset name")
        return formula_preset(d["formula"], _number(d["limit"], f"{what}.limit"),
                              _number(d.get("amplitude", 1), f"{what}.amplitude"),
                              _number(d.get("shift", 1), f"{what}.shift"))
    raise SchemaError(f"{what} needs one of 'values', 'telescoping' or 'formula'")


def _phase(v, what: str) -> complex:
    if isinstance(v, str):
        try:
            return parse_complex(v)
        except ValueError as e:
            raise SchemaError(f"{what}: {e}") from None
    if isinstance(v, list) and len(v) == 2:
        return complex(_number(v[0], what), _number(v[1], what))
    raise SchemaError(f"{what} entries must be 'a+bi' strings or [re, im] pairs")


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise SchemaError("scenario must be a JSON object")
    missing = _COMMON_REQUIRED - doc.keys()
    if missing:
        raise SchemaError(f"scenario is missing {', '.join(sorted(missing))}")
    try:
        kind = Kind(doc["kind"])
    except ValueError:
        raise SchemaError(f"unknown kind {doc['kind']!r}; known: {', '.join(k.value for k in Kind)}") from None
    _object(doc, "scenario", _COMMON_REQUIRED | REQUIRED[kind], _COMMON_OPTIONAL | OPTIONAL.get(kind, set()))
    if not isinstance(doc["name"], str):
        raise SchemaError("name must be a string")

    fields = {"lambda1": _number(doc["lambda1"], "lambda1")}
    if "lambda2" in doc:
        fields["lambda2"] = _number(doc["lambda2"], "lambda2")
    if "pattern" in doc:
        p = _object(doc["pattern"], "pattern", {"n1", "n2", "m1", "m2"})
        fields["pattern"] = {k: _integer(p[k], f"pattern.{k}") for k in ("n1", "n2", "m1", "m2")}
    for key in ("phases1", "phases2"):
        if key in doc:
            if not isinstance(doc[key], list):
                raise SchemaError(f"{key} must be an array")
            fields[key] = tuple(_phase(z, key) for z in doc[key])
    for key in _SEQ_KEYS:
        if key in doc:
            try:
                fields[key] = _sequence(doc[key], key)
            except ModelError as e:
                raise ValidationError(f"{key}: {e}") from e
    budget = None
    if "budget" in doc:
        b = _object(doc["budget"], "budget", set(), {"n_max", "precision"})
        try:
            budget = Budget(n_max=_integer(b.get("n_max", Budget.n_max), "budget.n_max"),
                            precision=_number(b.get("precision", Budget.precision), "budget.precision"))
        except ValueError as e:
            raise ValidationError(str(e)) from e
    try:
        if "pattern" in fields:
            fields["pattern"] = PeriodicPattern(**fields["pattern"])
        for key in ("phases1", "phases2"):
            if key in fields:
                fields[key] = PhaseSet(fields[key])
        spec = ScenarioSpec(kind, **fields)
        scenario = Scenario(doc["name"], spec, budget)
        scenario.model()
    except ModelError as e:
        raise ValidationError(str(e)) from e
    return scenario


def parse_scenario(text: str | bytes) -> Scenario:
    """Parse and fully validate a scenario document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"scenario is not UTF-8: {e}") from None
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e}") from None
    return scenario_from_dict(doc)


def _seq_to_dict(seq: SequenceSpec) -> dict:
    if isinstance(seq, ExplicitList):
        return {"values": list(seq.values), "tail": seq.tail}
    if isinstance(seq, TelescopingRational):
        s = seq.scale
        scale = s.numerator if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
        return {"telescoping": {"poly": list(seq.poly), "scale": scale, "invert": seq.invert}}
    if isinstance(seq, ConvergentFormula) and isinstance(seq.fn, PresetFormula):
        f = seq.fn
        return {"formula": f.name, "limit": f.limit, "amplitude": f.amplitude, "shift": f.shift}
    raise ModelError("only named formula presets can be written to a scenario file")


def scenario_to_dict(scenario: Scenario) -> dict:
    spec = scenario.spec
    doc: dict[str, Any] = {"name": scenario.name, "kind": spec.kind.value, "lambda1": spec.lambda1}
    if spec.lambda2 is not None:
        doc["lambda2"] = spec.lambda2
    if spec.pattern is not None:
        p = spec.pattern
        doc["pattern"] = {"n1": p.n1, "n2": p.n2, "m1": p.m1, "m2": p.m2}
    for key in ("phases1", "phases2"):
        ph = getattr(spec, key)
        if ph is not None:
            doc[key] = [[z.real, z.imag] for z in ph]
    for key in _SEQ_KEYS:
        seq = getattr(spec, key)
        if seq is not None:
            doc[key] = _seq_to_dict(seq)
    if scenario.budget is not None:
        doc["budget"] = {"n_max": scenario.budget.n_max, "precision": scenario.budget.precision}
    return doc


def serialize_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
