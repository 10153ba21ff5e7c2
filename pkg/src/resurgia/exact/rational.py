"""Rational scalar helpers on top of :class:`fractions.Fraction`."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

Q = Fraction


def q(x) -> Fraction:
    """Coerce ints, strings like ``"-3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("refusing to coerce float to an exact rational")
    return Fraction(x)


def qstr(x: Fraction) -> str:
    """Canonical ``p/q`` string, denominator omitted when it is 1."""
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def falling(e: Fraction, b: int) -> Fraction:
    """Falling factorial e (e-1) ... (e-b+1)."""
    out = Fraction(1)
    for i in range(b):
        out *= e - i
    return out


def rising(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def gamma_ratio(x: Fraction, y: Fraction) -> Fraction:
    """Gamma(x)/Gamma(y) for x - y an integer, as an exact rational.

    Raises ValueError at poles (a nonpositive integer argument).
    """
    x, y = q(x), q(y)
    d = x - y
    if d.denominator != 1:
        raise ValueError(f"Gamma ratio needs an integer offset, got {x} - {y}")
    d = int(d)
    for z in (x, y):
        if z.denominator == 1 and z <= 0:
            raise ValueError(f"Gamma pole at {z}")
    if d >= 0:
        return rising(y, d)
    return 1 / rising(x, -d)


def gamma_rational(x: Fraction) -> Fraction:
    """Gamma at a positive integer."""
    x = q(x)
    if x.denominator != 1 or x <= 0:
        raise ValueError(f"Gamma({x}) is not rational here")
    return Fraction(factorial(int(x) - 1))


__all__ = ["Q", "q", "qstr", "falling", "rising", "gamma_ratio", "gamma_rational", "comb", "factorial"]
