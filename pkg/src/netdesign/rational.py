"""Exact rational arithmetic helpers.

All numeric state in this package (costs, capacities, LP data) is kept as
gmpy2.mpq values; nothing in the solvers compares floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from gmpy2 import mpq

Rat = mpq
RatLike = Union[int, Fraction, mpq]

ZERO = mpq(0)
ONE = mpq(1)


def rat(value: RatLike) -> mpq:
    """Coerce an int, Fraction, or mpq to mpq."""
    if isinstance(value, mpq):
        return value
    return mpq(value)


def parse_rat(text: str) -> mpq:
    """Parse '3', '-4', '3/4', or '0.75' into an exact rational."""
    return mpq(Fraction(text.strip()))


def fmt_rat(value: RatLike) -> str:
    """Canonical text form: integer when the denominator is 1, else 'p/q'."""
    return str(mpq(value))
