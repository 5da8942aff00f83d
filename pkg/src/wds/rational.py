"""Helpers for exact angles stored as rationals in units of pi."""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import InputError

Rational = Union[Fraction, int]


def parse_fraction(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def encode(x: Fraction) -> list[int]:
    """JSON form: ``[numerator, denominator]``."""
    x = Fraction(x)
    return [x.numerator, x.denominator]


def decode(pair) -> Fraction:
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return Fraction(int(pair[0]), int(pair[1]))
    return parse_fraction(pair)


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
