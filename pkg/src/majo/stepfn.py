"""Exact step functions on finite or sigma-finite measure spaces.

A step function is stored as its level sets: ``(value, mass)`` pairs with
positive rational masses, sorted by strictly decreasing value. On a space of
infinite total measure the remainder of the space is an implicit zero tail
(never stored), and all values must be nonnegative. Only the masses of level
sets matter; the geometry of the underlying sets never enters a computation,
so the canonical piece order *is* the decreasing rearrangement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Tuple

from .errors import (
    DivergentHingeError,
    MassExceedsTotalError,
    NegativeMassError,
    NegativeValueOnInfiniteSpaceError,
    SOutOfRangeError,
)
from .extended import INF, ExtendedRational, Infinity, as_extended, as_fraction

ZERO = Fraction(0)


class Piece(NamedTuple):
    """One level set: the function takes ``value`` on a set of measure ``mass``."""

    value: Fraction
    mass: Fraction


@dataclass(frozen=True)
class StepFunction:
    """Canonical exact representation of an integrable step function.

    Construct through :func:`canonicalize`; direct construction asserts the
    canonical form (sorted, merged, tail-normalized) and raises otherwise.
    """

    pieces: Tuple[Piece, ...]
    total_measure: ExtendedRational

    def __post_init__(self):
        object.__setattr__(
            self,
            "pieces",
            tuple(Piece(as_fraction(v), as_fraction(m)) for v, m in self.pieces),
        )
        object.__setattr__(self, "total_measure", as_extended(self.total_measure))
        infinite = self.total_measure is INF or isinstance(self.total_measure, Infinity)
        for piece in self.pieces:
            if piece.mass <= 0:
                raise NegativeMassError(f"piece {piece} has nonpositive mass")
            if infinite and piece.value < 0:
                raise NegativeValueOnInfiniteSpaceError(
                    f"value {piece.value} < 0 on an infinite measure space"
                )
            if infinite and piece.value == 0:
                raise ValueError("zero piece must be absorbed into the infinite tail")
        values = [p.value for p in self.pieces]
        if any(a <= b for a, b in zip(values, values[1:])):
            raise ValueError("pieces must be sorted by strictly decreasing value")
        supp = sum((p.mass for p in self.pieces), ZERO)
        if infinite:
            return
        if supp > self.total_measure:
            raise MassExceedsTotalError(
                f"masses sum to {supp} > total measure {self.total_measure}"
            )
        if supp != self.total_measure:
            raise ValueError("on a finite space the pieces must tile the total measure")

    # -- derived structure ---------------------------------------------------

    @property
    def infinite(self) -> bool:
        return self.total_measure is INF

    @property
    def nonnegative(self) -> bool:
        return all(p.value >= 0 for p in self.pieces)

    @property
    def support_measure(self) -> Fraction:
        """Total mass of the explicitly stored level sets."""
        return sum((p.mass for p in self.pieces), ZERO)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(p.value for p in self.pieces)

    def cumulative_masses(self) -> Tuple[Fraction, ...]:
        """Running mass totals: the breakpoints of the rearrangement layout."""
        out, acc = [], ZERO
        for piece in self.pieces:
            acc += piece.mass
            out.append(acc)
        return tuple(out)

    # -- primitives ----------------------------------------------------------

    def integral(self) -> Fraction:
        return sum((p.value * p.mass for p in self.pieces), ZERO)

    def distribution(self, t) -> ExtendedRational:
        """Measure of the strict super-level set {x : f(x) > t}."""
        t = as_fraction(t)
        if self.infinite and t < 0:
            return INF
        return sum((p.mass for p in self.pieces if p.value > t), ZERO)

    def rearrangement(self) -> "StepFunction":
        """Decreasing rearrangement, a step function on [0, total measure).

        The canonical piece order already lists level sets by decreasing
        value, so the rearrangement is the function itself; the operation is
        idempotent by construction.
        """
        return self

    def partial_integral(self, s) -> Fraction:
        """Integral of the decreasing rearrangement over [0, s]."""
        s = as_extended(s)
        if s < 0 or s > self.total_measure:
            raise SOutOfRangeError(f"s = {s} outside [0, {self.total_measure}]")
        if s is INF:
            return self.integral()
        acc, remaining = ZERO, s
        for value, mass in self.pieces:
            if remaining <= 0:
                break
            take = mass if mass < remaining else remaining
            acc += value * take
            remaining -= take
        return acc

    def hinge_integral(self, u) -> Fraction:
        """Integral of max(f - u, 0) over the whole space."""
        u = as_fraction(u)
        if self.infinite and u < 0:
            raise DivergentHingeError(
                f"hinge at u = {u} < 0 diverges on an infinite measure space"
            )
        return sum(((p.value - u) * p.mass for p in self.pieces if p.value > u), ZERO)

    def tail_distribution_integral(self, u) -> Fraction:
        """Integral of the distribution function over [u, +oo).

        Computed directly by summing the distribution function over its
        constancy intervals; an independent route to the same quantity as
        :meth:`hinge_integral`.
        """
        u = as_fraction(u)
        if self.infinite and u < 0:
            raise DivergentHingeError(
                f"tail integral from u = {u} < 0 diverges on an infinite measure space"
            )
        cuts = sorted({p.value for p in self.pieces if p.value > u})
        acc, lo = ZERO, u
        for hi in cuts:
            acc += self.distribution(lo) * (hi - lo)
            lo = hi
        return acc

    def ess_sup(self) -> Fraction:
        """Largest value attained on a set of positive measure (0 if none)."""
        return self.pieces[0].value if self.pieces else ZERO

    def __str__(self) -> str:
        body = " + ".join(f"{p.value}*chi[{p.mass}]" for p in self.pieces) or "0"
        return f"{body} on total {self.total_measure}"


def canonicalize(raw_pieces: Iterable, total) -> StepFunction:
    """Build the canonical StepFunction from raw (value, mass) pairs.

    Equal values are merged, pieces are sorted by strictly decreasing value,
    zero pieces are absorbed into the tail on infinite spaces, and on finite
    spaces any unassigned remainder of the space becomes an explicit zero
    piece (the function is zero where unspecified). Idempotent.
    """
    total = as_extended(total)
    infinite = total is INF
    merged: dict = {}
    for value, mass in raw_pieces:
        value, mass = as_fraction(value), as_fraction(mass)
        if mass <= 0:
            raise NegativeMassError(f"mass {mass} must be positive")
        if infinite and value < 0:
            raise NegativeValueOnInfiniteSpaceError(
                f"value {value} < 0 on an infinite measure space"
            )
        merged[value] = merged.get(value, ZERO) + mass
    if infinite:
        merged.pop(ZERO, None)
    supp = sum(merged.values(), ZERO)
    if not infinite:
        if total < 0:
            raise MassExceedsTotalError(f"total measure {total} must be nonnegative")
        if supp > total:
            raise MassExceedsTotalError(f"masses sum to {supp} > total measure {total}")
        if supp < total:
            merged[ZERO] = merged.get(ZERO, ZERO) + (total - supp)
    pieces = tuple(Piece(v, merged[v]) for v in sorted(merged, reverse=True))
    return StepFunction(pieces=pieces, total_measure=total)


def indicator(mass, total=INF) -> StepFunction:
    """Indicator function of a set of the given measure."""
    return canonicalize([(Fraction(1), mass)], total)
