"""JSON encoding of reports: exact values as strings, precise floats as hex plus decimal."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources

import jsonschema
import mpmath
import numpy as np

from . import __version__


def longdouble_hex(x) -> str:
    """Exact hexadecimal form ``0x<mantissa>p<exp>`` of a longdouble."""
    x = np.longdouble(x)
    if x == 0:
        return "0x0p+0"
    sign = "-" if x < 0 else ""
    m, e = np.frexp(abs(x))
    mant = int(m * np.longdouble(2) ** 64)
    return f"{sign}0x{mant:x}p{e - 64:+d}"


def hex_to_longdouble(text: str) -> np.longdouble:
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("-")[2:]
    mant, exp = body.split("p")
    return sign * np.ldexp(np.longdouble(int(mant, 16)), int(exp))


def mpf_hex(x: mpmath.mpf) -> str:
    sign, man, exp, _ = x._mpf_
    if not man:
        return "0x0p+0"
    return f"{'-' if sign else ''}0x{man:x}p{exp:+d}"


def encode(value):
    """Recursively convert a value into JSON-ready data."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, np.longdouble):
        return {"hex": longdouble_hex(value), "decimal": np.format_float_positional(value, precision=21, unique=False, trim="-")}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            return {"hex": repr(value), "decimal": repr(value)}
        return {"hex": value.hex(), "decimal": repr(value)}
    if isinstance(value, mpmath.mpf):
        return {"hex": mpf_hex(value), "decimal": mpmath.nstr(value, 25)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def assertion(name: str, passed: bool, value=None, bound=None, provenance: str = "derived", note: str | None = None) -> dict:
    out = {"name": name, "pass": bool(passed), "provenance": provenance}
    if value is not None:
        out["value"] = encode(value)
    if bound is not None:
        out["bound"] = encode(bound)
    if note:
        out["note"] = note
    return out


def make_report(command: str, config: dict, assertions: list[dict], data: dict | None = None,
                warnings: list[str] | None = None, timestamp: str | None = None) -> dict:
    return {
        "tool": "xiongsets",
        "version": __version__,
        "command": command,
        "config": encode(config),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "assertions": assertions,
        "warnings": list(warnings or []),
        "data": encode(data or {}),
        "pass": all(a["pass"] for a in assertions),
    }


def load_schema(name: str = "report") -> dict:
    text = resources.files("xiongsets").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj: dict, name: str = "report"):
    jsonschema.validate(obj, load_schema(name))


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
