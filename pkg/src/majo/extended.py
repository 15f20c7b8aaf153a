"""Exact rationals extended with a single positive infinity.

Measures take values in the nonnegative rationals plus ``INF``; there is no
negative infinity anywhere in this package. ``INF`` compares and adds the
obvious way, and operations without an unambiguous value (``INF - INF``,
negation) raise :class:`~majo.errors.ExtendedArithmeticError`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Union

from .errors import ExtendedArithmeticError


class Infinity:
    """The extended value +inf (a singleton, see module-level ``INF``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    # -- ordering -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinity)

    def __hash__(self) -> int:
        return hash("majo.extended.Infinity")

    def __lt__(self, other) -> bool:
        if isinstance(other, (Infinity, int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        if isinstance(other, Infinity):
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, (Infinity, int, Fraction)):
            return True
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (Infinity, int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Infinity):
            raise ExtendedArithmeticError("inf - inf is undefined")
        if isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ExtendedArithmeticError("finite - inf has no extended value here")

    def __neg__(self):
        raise ExtendedArithmeticError("negative infinity is not representable")


INF = Infinity()

ExtendedRational = Union[Fraction, Infinity]


def as_fraction(x) -> Fraction:
    """Coerce an exact rational given as int, Fraction or 'p/q' string.

    Floats are rejected: binary rounding would silently break the exactness
    guarantees every verdict in this package relies on.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}: {x!r}")


def as_extended(x) -> ExtendedRational:
    """Coerce to a finite Fraction or INF; accepts the string 'inf'."""
    if isinstance(x, Infinity):
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return as_fraction(x)


def fraction_gcd(values: Iterable[Fraction]) -> Fraction:
    """Greatest common divisor of a nonempty collection of positive rationals."""

    def pair(a: Fraction, b: Fraction) -> Fraction:
        return Fraction(
            gcd(a.numerator * b.denominator, b.numerator * a.denominator),
            a.denominator * b.denominator,
        )

    values = [as_fraction(v) for v in values]
    if not values:
        raise ValueError("gcd of an empty collection")
    return reduce(pair, values)
