"""Quantitative equi-integrability diagnostics for families of step functions.

The worst integral of a nonnegative function over any set of measure at most
delta is attained on the top slice of its decreasing rearrangement, so the
small-set modulus is a partial integral in closed form. For every family of
images of one function under semi-doubly stochastic operators the modulus is
certified against the truncation bound hinge(f, c) + c * delta, exact at
every grid point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DeltaOutOfRangeError, EmptyFamilyError, MeasureMismatchError
from .extended import as_fraction
from .stepfn import ZERO, StepFunction


def small_set_modulus(h: StepFunction, delta) -> Fraction:
    """Largest integral of h over a measurable set of measure at most delta.

    Equals the integral of the decreasing rearrangement over [0, delta]; any
    explicit selection of level-set mass totalling at most delta integrates
    to no more than this.
    """
    delta = as_fraction(delta)
    if delta < 0 or delta > h.total_measure:
        raise DeltaOutOfRangeError(f"delta = {delta} outside [0, {h.total_measure}]")
    return h.partial_integral(delta)


@dataclass(frozen=True)
class EquiIntegrabilityReport:
    """Worst small-set integral over a family, against its certified bound.

    A family whose modulus vanishes as delta does is equi-integrable; on a
    finite measure space a norm-bounded equi-integrable family is relatively
    weakly compact. The report only quantifies the modulus and bound; the
    compactness consequence is recorded here, not computed.
    """

    delta: Fraction
    modulus: Fraction
    bound: Fraction
    family_size: int

    @property
    def within_bound(self) -> bool:
        return self.modulus <= self.bound


def equi_modulus(
    family: Sequence[StepFunction],
    delta,
    source: StepFunction,
    c_grid: Optional[Sequence] = None,
) -> EquiIntegrabilityReport:
    """Small-set modulus of a family with the truncation bound of its source.

    ``bound`` is the minimum over the truncation grid of
    hinge(source, c) + c * delta; it dominates the modulus whenever every
    family member is the image of ``source`` under a semi-doubly stochastic
    operator. The grid defaults to the piece values of the source (the bound
    is piecewise linear in c between them).
    """
    family = list(family)
    if not family:
        raise EmptyFamilyError("equi-integrability of an empty family")
    delta = as_fraction(delta)
    if c_grid is None:
        c_grid = sorted({p.value for p in source.pieces} | {ZERO})
    else:
        c_grid = [as_fraction(c) for c in c_grid]
        if not c_grid:
            raise EmptyFamilyError("empty truncation grid")
    modulus = max(small_set_modulus(h, delta) for h in family)
    bound = min(source.hinge_integral(c) + c * delta for c in c_grid)
    return EquiIntegrabilityReport(
        delta=delta, modulus=modulus, bound=bound, family_size=len(family)
    )


def l1_distance(f: StepFunction, g: StepFunction) -> Fraction:
    """L1 distance of the canonical layouts over their common refinement.

    Both functions are laid out as their rearrangements on [0, total); the
    piece masses of both induce the common refinement on which the pointwise
    difference is constant per segment.
    """
    if f.total_measure != g.total_measure:
        raise MeasureMismatchError(
            f"total measures differ: {f.total_measure} vs {g.total_measure}"
        )
    cuts = sorted(set(f.cumulative_masses()) | set(g.cumulative_masses()))
    acc, lo = ZERO, ZERO
    for hi in cuts:
        if hi > lo:
            acc += abs(_layout_value(f, lo) - _layout_value(g, lo)) * (hi - lo)
            lo = hi
    return acc


def _layout_value(f: StepFunction, position: Fraction) -> Fraction:
    """Value of the canonical layout at a position in [0, total)."""
    acc = ZERO
    for value, mass in f.pieces:
        if position < acc + mass:
            return value
        acc += mass
    return ZERO
