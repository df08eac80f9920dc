"""Parsing and formatting of exact rationals."""
from fractions import Fraction


def as_fraction(v):
    """Exact rational from an int, Fraction, "p/q" or decimal string, or float.

    Floats go through their shortest repr so 0.1 becomes 1/10.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def format_value(v):
    """Integers and Fractions print exactly, floats via repr."""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(v) if isinstance(v, float) else str(v)
