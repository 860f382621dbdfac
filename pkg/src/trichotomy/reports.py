"""JSON report plumbing shared by the command-line front end."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

SCHEMA_VERSION = 1


def rational(q: Fraction | int | None):
    if q is None:
        return None
    q = Fraction(q)
    return [q.numerator, q.denominator]


def _default(obj):
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(kind: str, body: dict) -> dict:
    out = {"schema": SCHEMA_VERSION, "kind": kind}
    out.update({k: v for k, v in body.items() if k not in ("schema", "kind")})
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, default=_default, ensure_ascii=False) + "\n"


def write_report(report: dict, path: str | Path | None) -> str:
    text = dumps(report)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
