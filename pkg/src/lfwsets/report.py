"""Text and JSON rendering of verdicts.

Set-level quantities are serialised exactly: rationals as ``"num/den"``
strings, infinity as ``"inf"``, balls as pasteable ``ball scale=.. center=..``
lines.  Floating-point numbers are only allowed below the ``"oracle"`` key.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any

from .field import FieldElement
from .sets import Ball, ClopenSet, ExtendedRational, StepFunction
from .verdict import Verdict

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "exact", "verdict_dict", "render_json", "render_text", "load_schema"]


def _fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def exact(x: Any) -> Any:
    """Convert a quantity to JSON data without floats (raises TypeError on a float)."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return _fraction(x)
    if isinstance(x, ExtendedRational):
        return str(x)
    if isinstance(x, Ball):
        return x.to_expr()
    if isinstance(x, FieldElement):
        return x.to_expr()
    if isinstance(x, ClopenSet):
        return [b.to_expr() for b in x.balls]
    if isinstance(x, StepFunction):
        return [{"ball": b.to_expr(), "value": exact(v)} for b, v in x.pieces]
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return {k: exact(getattr(x, k)) for k in x.__dataclass_fields__}
    raise TypeError(f"no exact serialisation for {type(x).__name__}")


def _loose(x: Any) -> Any:
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _loose(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_loose(v) for v in x]
    return exact(x)


def verdict_dict(v: Verdict, command: str, oracle: dict | None = None) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "name": v.name,
        "verdict": v.status,
        "clauses": [{"tag": c.tag, "passed": c.passed, "detail": c.detail} for c in v.clauses],
        "witnesses": [exact(w) for w in v.witnesses],
        "quantities": exact(v.quantities),
        "notes": list(v.notes),
    }
    if oracle is not None:
        out["oracle"] = _loose(oracle)
    return out


def refusal_dict(command: str, message: str) -> dict:
    return {"schema": SCHEMA_VERSION, "command": command, "verdict": "REFUSED", "error": message}


def render_json(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=False) + "\n"


def _fmt(x: Any) -> str:
    if isinstance(x, (dict, list)):
        return json.dumps(x)
    return str(x)


def render_text(d: dict) -> str:
    """Sectioned plain text: one ``key: value`` line per item under ``== section ==`` headers."""
    lines = [f"== {d['command']} ==", f"verdict: {d['verdict']}"]
    if "error" in d:
        lines.append(f"error: {d['error']}")
        return "\n".join(lines) + "\n"
    lines.append("== clauses ==")
    for c in d["clauses"]:
        mark = "pass" if c["passed"] else "FAIL"
        lines.append(f"{c['tag']}: {mark}" + (f"  ({c['detail']})" if c["detail"] else ""))
    if d["witnesses"]:
        lines.append("== witnesses ==")
        for w in d["witnesses"]:
            lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in w.items()))
    if d["quantities"]:
        lines.append("== quantities ==")
        for k, v in d["quantities"].items():
            lines.append(f"{k}: {_fmt(v)}")
    if d.get("oracle"):
        lines.append("== oracle ==")
        for k, v in d["oracle"].items():
            lines.append(f"{k}: {_fmt(v)}")
    if d["notes"]:
        lines.append("== notes ==")
        lines.extend(d["notes"])
    if d.get("figures"):
        lines.append("== figures ==")
        lines.extend(d["figures"])
    return "\n".join(lines) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("lfwsets").joinpath("report.schema.json").read_text("utf-8"))
