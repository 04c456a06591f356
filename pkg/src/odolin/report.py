"""Report serialization.

JSON is the exact format: rationals are written as ``"p/q"`` strings and
integers beyond the IEEE double range as digit strings, so parsing a
report back gives bit-identical values. CSV carries decimal renderings
only and says so in its first line.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import re
from decimal import Context, Decimal
from fractions import Fraction
from typing import Any

from . import cylinders as cyl

SAFE_INT = 2**53
_RATIONAL = re.compile(r"^-?\d+/\d+$")
_BIGINT = re.compile(r"^-?\d+$")


def approx(x: Fraction | int, digits: int = 12) -> str:
    """Decimal rendering of an exact value to ``digits`` significant digits."""
    x = Fraction(x)
    ctx = Context(prec=digits)
    return format(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)), "g")


def encode(obj: Any) -> Any:
    """Convert results to JSON-ready data without losing exactness."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, int):
        return obj if abs(obj) < SAFE_INT else str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (cyl.Box, cyl.Block)) or obj is cyl.EMPTY:
        return _encode_set(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [encode(v) for v in sorted(obj)]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(v) for v in k)
    return str(k)


def _encode_set(S) -> dict:
    if S is cyl.EMPTY:
        return {"type": "empty"}
    if isinstance(S, cyl.Box):
        return {
            "type": "box",
            "describe": S.describe(),
            "allowed": {str(i): sorted(a) for i, a in enumerate(S.allowed) if a is not None},
        }
    return {"type": "block", "describe": S.describe(), "lo": S.lo, "hi": S.hi, "cells": [list(c) for c in sorted(S.cells)]}


def decode(obj: Any) -> Any:
    """Inverse of :func:`encode` on numbers: ``"p/q"`` and digit strings become exact values."""
    if isinstance(obj, str):
        if _RATIONAL.match(obj):
            return Fraction(obj)
        if _BIGINT.match(obj):
            return int(obj)
        return obj
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    return obj


def dumps(report: dict) -> str:
    return json.dumps(encode(report), indent=2)


def loads(text: str) -> Any:
    return decode(json.loads(text))


def approx_tree(obj: Any) -> Any:
    """Same shape as the input with every rational replaced by its decimal rendering."""
    if isinstance(obj, Fraction):
        return approx(obj)
    if isinstance(obj, dict):
        return {_key(k): approx_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [approx_tree(v) for v in obj]
    return obj


def build_report(command: str, config_echo: dict, results: dict, rules_fired=(), exact=None) -> dict:
    exact = exact if exact is not None else _rationals(results)
    return {
        "command": command,
        "config_echo": config_echo,
        "results": results,
        "rules_fired": list(rules_fired),
        "exact": exact,
        "approx": approx_tree(exact),
    }


def _rationals(results: dict) -> dict:
    return {k: v for k, v in results.items() if isinstance(v, Fraction)}


def to_csv(rows: list[dict]) -> str:
    """Decimal-only table; exact values live in the JSON report."""
    buf = io.StringIO()
    buf.write("# approximate decimal renderings; use --format json for exact values\n")
    if not rows:
        return buf.getvalue()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, Fraction):
        return approx(v)
    if v is None:
        return ""
    return v


def to_text(value: Any) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, (cyl.Box, cyl.Block)) or value is cyl.EMPTY:
        return value.describe() if value is not cyl.EMPTY else "empty"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(to_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {to_text(v)}" for k, v in value.items()) + "}"
    if value is None:
        return "-"
    return str(value)


def text_table(rows: list[dict]) -> str:
    if not rows:
        return "(empty table)"
    cols = list(rows[0])
    cells = [[to_text(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[n]) for row in cells)) for n, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)
