"""Rational <-> string conversion and deterministic JSON output."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import InvalidParameterError

SCHEMA_VERSION = 1


def fmt_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"not a rational number: {text!r}") from exc


def dumps(doc: dict[str, Any]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
