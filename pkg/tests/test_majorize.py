"""Criteria, certificates, cross-checks, and the preorder laws."""

import random
from fractions import Fraction as F

import pytest

from majo import TestFunctionFamily as Family
from majo import (
    INF,
    Criterion,
    Relation,
    canonicalize,
    convex_sample_test,
    cross_check,
    hinge_criterion,
    majorize,
    tail_distribution_criterion,
    weak_majorize,
)
from majo.errors import (
    EmptyFamilyError,
    MeasureMismatchError,
    SignednessViolationError,
)
from majo.operators import (
    AlignedStep,
    Partition,
    apply_matrix,
    in_order_overlaps,
    partition_average,
)
from majo.sampling import (
    random_doubly_stochastic,
    random_fraction,
    random_pair_same_total,
    random_step_function,
    random_unequal_partition,
    random_vector,
)


def incomparable_pair():
    f = canonicalize([(3, 1), (F(1, 2), 1)], INF)
    g = canonicalize([(2, 2)], INF)
    return f, g


def majorized_pair(rng):
    """(f, g) with f majorized by g, via a random doubly stochastic mix."""
    n = rng.randint(2, 5)
    mass = random_fraction(rng, max_numerator=4, positive=True)
    infinite = rng.random() < 0.5
    partition = Partition.equal_mass(n, mass, INF if infinite else mass * n)
    values = random_vector(rng, n)
    g = AlignedStep(partition, values).step_function()
    mixed = apply_matrix(random_doubly_stochastic(rng, n), values)
    f = AlignedStep(partition, mixed).step_function()
    return f, g


class TestWeakMajorize:
    def test_incomparable_forward_certificate(self):
        f, g = incomparable_pair()
        verdict = weak_majorize(f, g)
        assert not verdict.holds
        assert verdict.violation.point == 1
        assert verdict.violation.left == 3
        assert verdict.violation.right == 2

    def test_incomparable_backward_certificate(self):
        f, g = incomparable_pair()
        verdict = weak_majorize(g, f)
        assert not verdict.holds
        assert verdict.violation.point == 2
        assert verdict.violation.left == 4
        assert verdict.violation.right == F(7, 2)

    def test_reflexive(self):
        f, _ = incomparable_pair()
        assert weak_majorize(f, f).holds

    def test_measure_mismatch(self):
        with pytest.raises(MeasureMismatchError):
            weak_majorize(canonicalize([(1, 1)], 1), canonicalize([(1, 1)], 2))

    def test_success_certificate_covers_all_breakpoints(self):
        rng = random.Random(2)
        for _ in range(40):
            f, g = majorized_pair(rng)
            verdict = weak_majorize(f, g)
            assert verdict.holds
            points = {p.point for p in verdict.checked}
            expected = {F(0)} | set(f.cumulative_masses()) | set(g.cumulative_masses())
            assert expected <= points

    def test_failure_certificate_reverifies(self):
        rng = random.Random(3)
        seen = 0
        for _ in range(300):
            f, g = random_pair_same_total(rng)
            verdict = weak_majorize(f, g)
            if verdict.holds:
                continue
            seen += 1
            witness = verdict.violation
            assert f.partial_integral(witness.point) == witness.left
            assert g.partial_integral(witness.point) == witness.right
            assert witness.left > witness.right
        assert seen > 20


class TestMajorize:
    def test_flat_pair(self):
        f = canonicalize([(1, 1), (1, 1)], 2)
        g = canonicalize([(2, 1), (0, 1)], 2)
        assert majorize(f, g).holds

    def test_reflexive(self):
        f = canonicalize([(2, 1), (1, 3)], INF)
        assert majorize(f, f).holds

    def test_equality_clause(self):
        g = canonicalize([(2, 2)], 2)
        half = canonicalize([(1, 2)], 2)
        verdict = majorize(half, g)
        assert not verdict.holds
        assert verdict.violation.relation is Relation.EQ

    def test_transitive(self):
        rng = random.Random(7)
        for _ in range(60):
            n = rng.randint(2, 4)
            partition = Partition.equal_mass(n, 1, n)
            values = random_vector(rng, n)
            h = AlignedStep(partition, values).step_function()
            mixed_once = apply_matrix(random_doubly_stochastic(rng, n), values)
            g = AlignedStep(partition, mixed_once).step_function()
            mixed_twice = apply_matrix(random_doubly_stochastic(rng, n), mixed_once)
            f = AlignedStep(partition, mixed_twice).step_function()
            assert majorize(g, h).holds
            assert majorize(f, g).holds
            assert majorize(f, h).holds

    def test_rearrangement_invariance(self):
        rng = random.Random(9)
        for _ in range(60):
            f, g = random_pair_same_total(rng)
            assert majorize(f, g).holds == majorize(f.rearrangement(), g).holds

    def test_signed_functions_on_finite_space(self):
        f = canonicalize([(0, 2)], 2)
        g = canonicalize([(1, 1), (-1, 1)], 2)
        assert majorize(f, g).holds
        assert not majorize(g, f).holds


class TestHingeCriterion:
    def test_flat_pair_breakpoints(self):
        f = canonicalize([(1, 1), (1, 1)], 2)
        g = canonicalize([(2, 1), (0, 1)], 2)
        assert f.hinge_integral(1) == 0 <= g.hinge_integral(1) == 1
        assert f.hinge_integral(2) == 0 == g.hinge_integral(2)
        assert hinge_criterion(f, g).holds

    def test_incomparable_fails_on_integrals(self):
        f, g = incomparable_pair()
        verdict = hinge_criterion(f, g)
        assert not verdict.holds
        assert verdict.violation.relation is Relation.EQ
        assert (verdict.violation.left, verdict.violation.right) == (F(7, 2), F(4))

    def test_reflexive(self):
        f, _ = incomparable_pair()
        assert hinge_criterion(f, f).holds

    def test_rejects_signed(self):
        f = canonicalize([(1, 1), (-1, 1)], 2)
        with pytest.raises(SignednessViolationError):
            hinge_criterion(f, f)


class TestTailDistributionCriterion:
    def test_matches_hinge_everywhere(self):
        rng = random.Random(13)
        for _ in range(250):
            f, g = random_pair_same_total(rng)
            assert (
                tail_distribution_criterion(f, g).holds
                == hinge_criterion(f, g).holds
            )

    def test_no_violation_at_matched_tails(self):
        f, g = incomparable_pair()
        assert f.tail_distribution_integral(1) == g.tail_distribution_integral(1) == 2

    def test_reflexive(self):
        _, g = incomparable_pair()
        assert tail_distribution_criterion(g, g).holds


class TestConvexSampleTest:
    def test_sublinear_example_holds_despite_incomparability(self):
        f, g = incomparable_pair()
        family = Family.sublinears([(0, 1)])
        verdict = convex_sample_test(f, g, family)
        assert verdict.holds
        assert verdict.criterion is Criterion.SUBLINEAR_SAMPLE

    def test_hinge_family_on_all_values_matches_full_criterion(self):
        rng = random.Random(21)
        for _ in range(120):
            f, g = random_pair_same_total(rng)
            family = Family.hinges(
                sorted({F(0)} | set(f.values()) | set(g.values()))
            )
            assert (
                convex_sample_test(f, g, family).holds == hinge_criterion(f, g).holds
            )

    def test_identical_functions_pass_any_family(self):
        f, _ = incomparable_pair()
        family = Family.hinges([0, F(1, 3), 2, 7])
        assert convex_sample_test(f, f, family).holds
        family = Family.sublinears([(1, 1), (0, 3)])
        assert convex_sample_test(f, f, family).holds

    def test_empty_family_rejected(self):
        with pytest.raises(EmptyFamilyError):
            Family.hinges([])

    def test_sublinear_reduces_to_scaled_integrals_on_nonnegative(self):
        rng = random.Random(31)
        for _ in range(40):
            f, g = random_pair_same_total(rng)
            beta = random_fraction(rng, positive=True)
            family = Family.sublinears([(random_fraction(rng), beta)])
            verdict = convex_sample_test(f, g, family)
            assert verdict.holds == (beta * f.integral() <= beta * g.integral())


class TestCrossCheck:
    def test_incomparable_pair_consistent(self):
        f, g = incomparable_pair()
        for a, b in ((f, g), (g, f)):
            report = cross_check(a, b)
            assert not report.holds
            assert len(report.verdicts) == 3

    def test_randomized_agreement(self):
        rng = random.Random(37)
        for index in range(200):
            if index % 3 == 0:
                f, g = majorized_pair(rng)
            else:
                f, g = random_pair_same_total(rng, equal_integrals=index % 3 == 1)
            report = cross_check(f, g)
            assert {v.holds for v in report.verdicts} == {report.holds}

    def test_weak_mode_agreement(self):
        rng = random.Random(39)
        for _ in range(150):
            f, g = random_pair_same_total(rng)
            report = cross_check(f, g, weak=True)
            assert report.holds == weak_majorize(f, g).holds

    def test_constructed_pairs_hold(self):
        rng = random.Random(43)
        for _ in range(80):
            f, g = majorized_pair(rng)
            assert cross_check(f, g).holds


class TestDilationMonotonicity:
    def test_averaging_never_breaks_majorization(self):
        rng = random.Random(47)
        for _ in range(80):
            partition = random_unequal_partition(rng, rng.randint(2, 4))
            f = random_step_function(rng, infinite=False, total=partition.total_measure)
            averaged = partition_average(partition, f, in_order_overlaps(partition, f))
            assert majorize(averaged.step_function(), f).holds


class TestBreakpointSufficiency:
    """The breakpoint procedure agrees with a dense rational grid."""

    def test_partial_integral_grid(self):
        rng = random.Random(53)
        for _ in range(60):
            f, g = random_pair_same_total(rng)
            span = max(f.support_measure, g.support_measure, F(1)) + 1
            grid_holds = all(
                f.partial_integral(span * k / 400) <= g.partial_integral(span * k / 400)
                for k in range(401)
                if span * k / 400 <= f.total_measure
            )
            breaks = weak_majorize(f, g).holds
            # the grid is a subset of all s, so it can only be more lenient
            if breaks:
                assert grid_holds

    def test_hinge_grid(self):
        rng = random.Random(59)
        for _ in range(60):
            f, g = random_pair_same_total(rng)
            top = max(f.ess_sup(), g.ess_sup()) + 1
            grid_holds = all(
                f.hinge_integral(top * k / 400) <= g.hinge_integral(top * k / 400)
                for k in range(401)
            )
            if hinge_criterion(f, g, weak=True).holds:
                assert grid_holds
