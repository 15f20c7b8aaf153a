"""Decide majorization by each of its equivalent criteria, with certificates.

For step functions both sides of every criterion are piecewise linear in the
scan parameter (s for partial integrals, u for hinge and tail integrals), so
the union of the breakpoints of both sides is a complete test set: the
difference is piecewise linear and attains its extrema at breakpoints. Every
verdict therefore carries either the full list of checked breakpoints or a
single violating point that re-verifies by direct evaluation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import (
    EmptyFamilyError,
    InternalInconsistencyError,
    MeasureMismatchError,
    SignednessViolationError,
)
from .extended import INF, ExtendedRational, as_fraction
from .stepfn import ZERO, StepFunction


class Criterion(enum.Enum):
    REARRANGEMENT = "rearrangement"
    TAIL_DISTRIBUTION = "tail-distribution"
    HINGE = "hinge"
    CONVEX_SAMPLE = "convex-sample"
    SUBLINEAR_SAMPLE = "sublinear-sample"


class Relation(enum.Enum):
    LE = "<="
    EQ = "=="


@dataclass(frozen=True)
class CheckPoint:
    """One evaluated comparison: left vs right at a scan point."""

    point: object  # Fraction, INF, or an (alpha, beta) slope pair
    left: Fraction
    right: Fraction
    relation: Relation = Relation.LE

    @property
    def satisfied(self) -> bool:
        if self.relation is Relation.LE:
            return self.left <= self.right
        return self.left == self.right


@dataclass(frozen=True)
class MajorizationVerdict:
    """Decision plus certificate.

    When ``holds`` is false, ``violation`` is the first failing checkpoint
    and re-verifies by evaluating both sides at that point. When true,
    ``checked`` covers every slope change of both sides.
    """

    holds: bool
    criterion: Criterion
    weak: bool
    checked: Tuple[CheckPoint, ...]
    violation: CheckPoint | None = None


@dataclass(frozen=True)
class CrossCheckReport:
    """Agreement report for the three exact criteria."""

    holds: bool
    weak: bool
    verdicts: Tuple[MajorizationVerdict, ...]


def _require_same_total(f: StepFunction, g: StepFunction) -> None:
    if f.total_measure != g.total_measure:
        raise MeasureMismatchError(
            f"total measures differ: {f.total_measure} vs {g.total_measure}"
        )


def _require_nonnegative(f: StepFunction, g: StepFunction) -> None:
    if not (f.nonnegative and g.nonnegative):
        raise SignednessViolationError("this criterion requires nonnegative functions")


def _decide(criterion: Criterion, weak: bool, points) -> MajorizationVerdict:
    checked = tuple(points)
    violation = next((p for p in checked if not p.satisfied), None)
    return MajorizationVerdict(
        holds=violation is None,
        criterion=criterion,
        weak=weak,
        checked=checked,
        violation=violation,
    )


# ---------------------------------------------------------------------------
# partial-integral (rearrangement) criterion
# ---------------------------------------------------------------------------


def _partial_points(f: StepFunction, g: StepFunction):
    cuts = {ZERO}
    cuts.update(f.cumulative_masses())
    cuts.update(g.cumulative_masses())
    endpoint: ExtendedRational = f.total_measure
    points = sorted(cuts) + ([INF] if endpoint is INF else [])
    if endpoint is not INF and endpoint not in cuts:
        points.append(endpoint)
    for s in points:
        yield CheckPoint(s, f.partial_integral(s), g.partial_integral(s))


def weak_majorize(f: StepFunction, g: StepFunction) -> MajorizationVerdict:
    """Decide f <w g: partial integrals of the rearrangements never cross."""
    _require_same_total(f, g)
    return _decide(Criterion.REARRANGEMENT, True, _partial_points(f, g))


def majorize(f: StepFunction, g: StepFunction) -> MajorizationVerdict:
    """Decide f < g: weak majorization plus exactly equal total integrals."""
    _require_same_total(f, g)
    points = list(_partial_points(f, g))
    points.append(
        CheckPoint(f.total_measure, f.integral(), g.integral(), Relation.EQ)
    )
    return _decide(Criterion.REARRANGEMENT, False, points)


# ---------------------------------------------------------------------------
# hinge and tail-distribution criteria
# ---------------------------------------------------------------------------


def _value_grid(f: StepFunction, g: StepFunction):
    cuts = {ZERO}
    cuts.update(v for v in f.values())
    cuts.update(v for v in g.values())
    return sorted(cuts)


def _scan_points(f, g, evaluate, weak: bool):
    for u in _value_grid(f, g):
        if u == 0 and not weak:
            yield CheckPoint(u, evaluate(f, u), evaluate(g, u), Relation.EQ)
        else:
            yield CheckPoint(u, evaluate(f, u), evaluate(g, u))


def hinge_criterion(
    f: StepFunction, g: StepFunction, *, weak: bool = False
) -> MajorizationVerdict:
    """Decide majorization through the hinge integrals u -> integral (f-u)+.

    The inequality is checked on the union of the piece values of f and g
    (the hinge difference is piecewise linear in u with breakpoints there);
    u = 0 carries the equal-integrals clause unless ``weak``.
    """
    _require_same_total(f, g)
    _require_nonnegative(f, g)
    points = _scan_points(f, g, lambda h, u: h.hinge_integral(u), weak)
    return _decide(Criterion.HINGE, weak, points)


def tail_distribution_criterion(
    f: StepFunction, g: StepFunction, *, weak: bool = False
) -> MajorizationVerdict:
    """Decide majorization through tail integrals of the distribution function.

    Evaluates integral_u^oo d_f exactly by summing the distribution function
    over its constancy intervals, an independent computation that must agree
    with :func:`hinge_criterion` everywhere.
    """
    _require_same_total(f, g)
    _require_nonnegative(f, g)
    points = _scan_points(f, g, lambda h, u: h.tail_distribution_integral(u), weak)
    return _decide(Criterion.TAIL_DISTRIBUTION, weak, points)


# ---------------------------------------------------------------------------
# sampled test families
# ---------------------------------------------------------------------------


class FamilyKind(enum.Enum):
    HINGE = "hinge"
    SUBLINEAR = "sublinear"


@dataclass(frozen=True)
class TestFunctionFamily:
    """Finite family of scalar test functions.

    ``HINGE`` parameters are thresholds u >= 0 for t -> max(t - u, 0).
    ``SUBLINEAR`` parameters are slope pairs (alpha, beta) >= 0 for
    t -> beta * max(t, 0) + alpha * max(-t, 0).
    """

    kind: FamilyKind
    parameters: Tuple

    def __post_init__(self):
        if not self.parameters:
            raise EmptyFamilyError("test-function family has no parameters")
        if self.kind is FamilyKind.HINGE:
            if any(u < 0 for u in self.parameters):
                raise ValueError("hinge thresholds must be nonnegative")
        else:
            if any(a < 0 or b < 0 for a, b in self.parameters):
                raise ValueError("sublinear slope pairs must be nonnegative")

    @staticmethod
    def hinges(thresholds: Sequence) -> "TestFunctionFamily":
        return TestFunctionFamily(
            FamilyKind.HINGE, tuple(as_fraction(u) for u in thresholds)
        )

    @staticmethod
    def sublinears(pairs: Sequence) -> "TestFunctionFamily":
        return TestFunctionFamily(
            FamilyKind.SUBLINEAR,
            tuple((as_fraction(a), as_fraction(b)) for a, b in pairs),
        )


def _sublinear_integral(h: StepFunction, alpha: Fraction, beta: Fraction) -> Fraction:
    def phi(v: Fraction) -> Fraction:
        return beta * max(v, ZERO) + alpha * max(-v, ZERO)

    return sum((phi(p.value) * p.mass for p in h.pieces), ZERO)


def convex_sample_test(
    f: StepFunction,
    g: StepFunction,
    family: TestFunctionFamily,
    *,
    weak: bool = False,
) -> MajorizationVerdict:
    """Sample the integral inequalities over a finite test-function family.

    A necessary condition for majorization. For a hinge family it is also
    sufficient when the thresholds include every piece value of f and g and
    the equal-integrals clause is checked (``weak=False``); the sublinear
    family only samples its integral inequalities and never implies
    majorization on its own.
    """
    _require_same_total(f, g)
    if family.kind is FamilyKind.HINGE:
        _require_nonnegative(f, g)
        points = [
            CheckPoint(u, f.hinge_integral(u), g.hinge_integral(u))
            for u in family.parameters
        ]
        if not weak:
            points.append(
                CheckPoint(f.total_measure, f.integral(), g.integral(), Relation.EQ)
            )
        return _decide(Criterion.CONVEX_SAMPLE, weak, points)
    points = [
        CheckPoint(
            (alpha, beta),
            _sublinear_integral(f, alpha, beta),
            _sublinear_integral(g, alpha, beta),
        )
        for alpha, beta in family.parameters
    ]
    return _decide(Criterion.SUBLINEAR_SAMPLE, weak, points)


# ---------------------------------------------------------------------------
# cross-check
# ---------------------------------------------------------------------------


def cross_check(
    f: StepFunction, g: StepFunction, *, weak: bool = False
) -> CrossCheckReport:
    """Run the three exact criteria and require unanimous agreement.

    A disagreement is an implementation bug, never a mathematical state, and
    raises :class:`InternalInconsistencyError` carrying all certificates.
    """
    _require_same_total(f, g)
    _require_nonnegative(f, g)
    rearr = weak_majorize(f, g) if weak else majorize(f, g)
    verdicts = (
        rearr,
        hinge_criterion(f, g, weak=weak),
        tail_distribution_criterion(f, g, weak=weak),
    )
    answers = {v.holds for v in verdicts}
    if len(answers) != 1:
        raise InternalInconsistencyError(
            "equivalent majorization criteria disagree: "
            + ", ".join(f"{v.criterion.value}={v.holds}" for v in verdicts),
            verdicts=verdicts,
        )
    return CrossCheckReport(holds=verdicts[0].holds, weak=weak, verdicts=verdicts)
