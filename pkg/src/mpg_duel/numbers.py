"""Exact-rational parsing and rendering helpers."""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, float]


def parse_rational(value) -> Fraction:
    """Parse an integer, ``"a/b"`` string, finite decimal string or JSON number."""
    if isinstance(value, bool):
        raise ValueError(f"malformed number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"malformed number: {value!r}")
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"malformed number: {value!r}")
        # JSON floats are read as the decimal literal, not the binary double
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("malformed number: empty string")
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            dec = Decimal(text)
        except (ValueError, ZeroDivisionError, InvalidOperation):
            raise ValueError(f"malformed number: {value!r}") from None
        if not dec.is_finite():
            raise ValueError(f"malformed number: {value!r}")
        return Fraction(dec)
    raise ValueError(f"malformed number: {value!r}")


def parse_float(value) -> float:
    if isinstance(value, bool):
        raise ValueError(f"malformed number: {value!r}")
    try:
        if isinstance(value, str) and "/" in value:
            out = float(parse_rational(value))
        else:
            out = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"malformed number: {value!r}") from None
    if not math.isfinite(out):
        raise ValueError(f"malformed number: {value!r}")
    return out


def simplify(x: Number) -> Number:
    """Collapse integral Fractions to int so hot loops stay on int arithmetic."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def to_exact(x: Number) -> Fraction:
    if isinstance(x, float):
        raise TypeError("float value in exact context")
    return Fraction(x)


def render(x: Number) -> str:
    """Render exact values as ``"a/b"`` (or ``"a"``) and floats with ``repr``."""
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Rational):
        f = Fraction(x)
        if f.denominator == 1:
            return str(f.numerator)
        return f"{f.numerator}/{f.denominator}"
    raise TypeError(f"cannot render {x!r}")


def rationals_in_interval(lo: Fraction, hi: Fraction, max_den: int) -> list[Fraction]:
    """All rationals p/q in [lo, hi] with 1 <= q <= max_den, sorted, deduplicated."""
    found = set()
    for q in range(1, max_den + 1):
        p_lo = math.ceil(lo * q)
        p_hi = math.floor(hi * q)
        for p in range(p_lo, p_hi + 1):
            found.add(Fraction(p, q))
    return sorted(found)
