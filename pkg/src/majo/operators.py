"""The stochastic operator hierarchy on partitions of a measure space.

Matrices act on sequence space in the integral basis: column j holds the
image coefficients of the j-th basis direction, so Markov means every column
sums to exactly 1, semi-doubly stochastic additionally bounds every row sum
by 1, and doubly stochastic pins the row sums to 1. Partition operators move
between step functions and sequences through the per-atom integral map and
its right inverse; the doubly stochastic witness for a majorized pair is a
chain of two-coordinate mixings on a common equal-mass refinement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    MeasureMismatchError,
    NegativeEntryError,
    NegativeMassError,
    NegativeValueOnInfiniteSpaceError,
    NotMajorizedError,
    NotStochasticError,
    PartitionMisalignedError,
    UnequalMassesUnsupportedError,
)
from .extended import INF, ExtendedRational, as_extended, as_fraction, fraction_gcd
from .majorize import majorize
from .stepfn import ZERO, StepFunction, canonicalize

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# partitions and aligned step functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tail:
    """Equal-mass atoms tiling the zero region beyond the explicit ones.

    ``count`` is a positive integer, or None for an unbounded tail (required
    on spaces of infinite total measure). The tail mass being positive keeps
    the infimum of all atom masses away from zero.
    """

    mass: Fraction
    count: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "mass", as_fraction(self.mass))
        if self.mass <= 0:
            raise NegativeMassError(f"tail atom mass {self.mass} must be positive")
        if self.count is not None and self.count < 1:
            raise ValueError("finite tail count must be >= 1")


@dataclass(frozen=True)
class Partition:
    """Ordered family of disjoint finite-measure atoms tiling the space."""

    atoms: Tuple[Fraction, ...]
    total_measure: ExtendedRational
    tail: Optional[Tail] = None

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(as_fraction(a) for a in self.atoms))
        object.__setattr__(self, "total_measure", as_extended(self.total_measure))
        for atom in self.atoms:
            if atom <= 0:
                raise NegativeMassError(f"atom mass {atom} must be positive")
        explicit = sum(self.atoms, ZERO)
        if self.total_measure is INF:
            if self.tail is None or self.tail.count is not None:
                raise ValueError("an infinite-measure partition needs an unbounded tail")
        else:
            tail_mass = ZERO
            if self.tail is not None:
                if self.tail.count is None:
                    raise ValueError("unbounded tail on a finite measure space")
                tail_mass = self.tail.mass * self.tail.count
            if explicit + tail_mass != self.total_measure:
                raise MeasureMismatchError(
                    f"atoms tile {explicit + tail_mass}, total is {self.total_measure}"
                )

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def explicit_measure(self) -> Fraction:
        return sum(self.atoms, ZERO)

    @property
    def equal_masses(self) -> bool:
        masses = set(self.atoms)
        if self.tail is not None:
            masses.add(self.tail.mass)
        return len(masses) <= 1

    @staticmethod
    def equal_mass(count: int, mass, total=INF) -> "Partition":
        """Partition of ``count`` explicit atoms of one mass, tail as needed."""
        mass = as_fraction(mass)
        total = as_extended(total)
        tail = Tail(mass, None) if total is INF else None
        return Partition(atoms=(mass,) * count, total_measure=total, tail=tail)


@dataclass(frozen=True)
class AlignedStep:
    """A step function given by its value on each explicit atom of a partition.

    The alignment metadata of this package: it fixes which atom carries which
    value (zero on every tail atom), which a bare :class:`StepFunction` does
    not know.
    """

    partition: Partition
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))
        if len(self.values) != self.partition.size:
            raise DimensionMismatchError(
                f"{len(self.values)} values for {self.partition.size} atoms"
            )
        if self.partition.total_measure is INF and any(v < 0 for v in self.values):
            raise NegativeValueOnInfiniteSpaceError(
                "negative values are not representable on an infinite measure space"
            )

    def integral(self) -> Fraction:
        return sum((v * m for v, m in zip(self.values, self.partition.atoms)), ZERO)

    def step_function(self) -> StepFunction:
        """Forget the alignment: the canonical step function."""
        return canonicalize(
            zip(self.values, self.partition.atoms), self.partition.total_measure
        )


def align(partition: Partition, f: StepFunction) -> AlignedStep:
    """Lay the canonical rearrangement of f over the partition, in order.

    Succeeds exactly when the partition refines the level sets of the
    canonical layout and the explicit atoms cover the support.
    """
    if partition.total_measure != f.total_measure:
        raise MeasureMismatchError(
            f"partition tiles {partition.total_measure}, function lives on "
            f"{f.total_measure}"
        )
    values = []
    index, left = 0, f.pieces[0].mass if f.pieces else ZERO
    for atom in partition.atoms:
        if index >= len(f.pieces):
            values.append(ZERO)
            continue
        if atom > left:
            raise PartitionMisalignedError(
                f"atom of mass {atom} straddles a level boundary "
                f"(only {left} left at value {f.pieces[index].value})"
            )
        values.append(f.pieces[index].value)
        left -= atom
        if left == 0:
            index += 1
            left = f.pieces[index].mass if index < len(f.pieces) else ZERO
    if index < len(f.pieces):
        raise PartitionMisalignedError(
            "support extends past the explicit atoms into the tail"
        )
    return AlignedStep(partition=partition, values=tuple(values))


def in_order_overlaps(
    partition: Partition, f: StepFunction
) -> Tuple[Tuple[Fraction, ...], ...]:
    """Overlap masses of each atom with each level set, in the canonical layout.

    ``overlaps[n][k]`` is the mass of atom n lying in the k-th level set of f
    when the rearrangement is laid left to right over the partition. This is
    the explicit alignment metadata :func:`partition_average` needs for a
    function that is not constant on atoms.
    """
    if partition.total_measure != f.total_measure:
        raise MeasureMismatchError(
            f"partition tiles {partition.total_measure}, function lives on "
            f"{f.total_measure}"
        )
    rows = []
    index, left = 0, f.pieces[0].mass if f.pieces else ZERO
    for atom in partition.atoms:
        row = [ZERO] * len(f.pieces)
        need = atom
        while need > 0 and index < len(f.pieces):
            take = left if left < need else need
            row[index] += take
            left -= take
            need -= take
            if left == 0:
                index += 1
                left = f.pieces[index].mass if index < len(f.pieces) else ZERO
        rows.append(tuple(row))
    if index < len(f.pieces):
        raise PartitionMisalignedError(
            "support extends past the explicit atoms into the tail"
        )
    return tuple(rows)


# ---------------------------------------------------------------------------
# operator matrices
# ---------------------------------------------------------------------------


class OperatorClass(enum.IntEnum):
    """Most specific stochasticity class; higher is more specific."""

    NONE = 0
    MARKOV = 1
    SEMI_DOUBLY_STOCHASTIC = 2
    DOUBLY_STOCHASTIC = 3

    @property
    def label(self) -> str:
        return {
            OperatorClass.NONE: "none",
            OperatorClass.MARKOV: "markov",
            OperatorClass.SEMI_DOUBLY_STOCHASTIC: "semi-doubly-stochastic",
            OperatorClass.DOUBLY_STOCHASTIC: "doubly-stochastic",
        }[self]


@dataclass(frozen=True)
class OperatorMatrix:
    """Nonnegative rational matrix acting on sequence space.

    Rectangular shapes are allowed so that mass-preserving truncations of
    infinite operators (e.g. shifts) keep their column sums; a square
    truncation that silently dropped mass would misclassify them.
    """

    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(e) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if len({len(row) for row in rows}) > 1:
            raise DimensionMismatchError("rows have differing lengths")
        for row in rows:
            for entry in row:
                if entry < 0:
                    raise NegativeEntryError(f"negative entry {entry}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def identity(n: int) -> "OperatorMatrix":
        return OperatorMatrix(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        )

    def column_sums(self) -> Tuple[Fraction, ...]:
        return tuple(
            sum((row[j] for row in self.entries), ZERO) for j in range(self.cols)
        )

    def row_sums(self) -> Tuple[Fraction, ...]:
        return tuple(sum(row, ZERO) for row in self.entries)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        product = tuple(
            tuple(
                sum(
                    (self.entries[i][k] * other.entries[k][j] for k in range(self.cols)),
                    ZERO,
                )
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return OperatorMatrix(product)


def classify_matrix(matrix: OperatorMatrix) -> OperatorClass:
    """Most specific class by exact column and row sums."""
    if matrix.cols and any(s != 1 for s in matrix.column_sums()):
        return OperatorClass.NONE
    row_sums = matrix.row_sums()
    if any(s > 1 for s in row_sums):
        return OperatorClass.MARKOV
    if any(s != 1 for s in row_sums):
        return OperatorClass.SEMI_DOUBLY_STOCHASTIC
    return OperatorClass.DOUBLY_STOCHASTIC


def apply_matrix(matrix: OperatorMatrix, vector: Sequence) -> Tuple[Fraction, ...]:
    """Exact matrix-vector product."""
    vector = tuple(as_fraction(v) for v in vector)
    if len(vector) != matrix.cols:
        raise DimensionMismatchError(
            f"vector of length {len(vector)} for a {matrix.rows}x{matrix.cols} matrix"
        )
    return tuple(
        sum((row[j] * vector[j] for j in range(matrix.cols)), ZERO)
        for row in matrix.entries
    )


# ---------------------------------------------------------------------------
# partition operators
# ---------------------------------------------------------------------------


def phi(partition: Partition, f) -> Tuple[Fraction, ...]:
    """Per-atom integrals of an aligned step function (its sequence image)."""
    aligned = f if isinstance(f, AlignedStep) else align(partition, f)
    if aligned.partition != partition:
        raise PartitionMisalignedError("aligned function lives on another partition")
    return tuple(v * m for v, m in zip(aligned.values, partition.atoms))


def psi(partition: Partition, coefficients: Sequence) -> AlignedStep:
    """Step function carrying the n-th coefficient on atom n, spread by mass.

    Shorter coefficient vectors are zero-padded; the integral of the result
    is the coefficient sum. Right inverse of :func:`phi`.
    """
    coefficients = tuple(as_fraction(a) for a in coefficients)
    if len(coefficients) > partition.size:
        raise DimensionMismatchError(
            f"{len(coefficients)} coefficients for {partition.size} atoms"
        )
    padded = coefficients + (ZERO,) * (partition.size - len(coefficients))
    values = tuple(a / m for a, m in zip(padded, partition.atoms))
    return AlignedStep(partition=partition, values=values)


def partition_average(
    partition: Partition,
    f: StepFunction,
    overlaps: Optional[Sequence[Sequence]] = None,
) -> AlignedStep:
    """Average f over each atom (the conditional-expectation operator).

    A function constant on every atom averages to itself. Otherwise the
    per-atom overlap masses with each level set must be supplied (see
    :func:`in_order_overlaps` for the canonical layout); the geometry of
    level sets is never invented here.
    """
    if overlaps is None:
        try:
            return align(partition, f)
        except PartitionMisalignedError:
            raise PartitionMisalignedError(
                "function is not constant on the atoms; supply overlap masses"
            ) from None
    overlaps = tuple(tuple(as_fraction(m) for m in row) for row in overlaps)
    if len(overlaps) != partition.size:
        raise DimensionMismatchError(
            f"{len(overlaps)} overlap rows for {partition.size} atoms"
        )
    if any(len(row) != len(f.pieces) for row in overlaps):
        raise DimensionMismatchError("overlap rows must cover every level set")
    for k, piece in enumerate(f.pieces):
        assigned = sum((row[k] for row in overlaps), ZERO)
        if assigned != piece.mass:
            raise PartitionMisalignedError(
                f"level set {k} has mass {piece.mass} but overlaps assign {assigned}"
            )
    values = []
    for row, atom in zip(overlaps, partition.atoms):
        inside = sum(row, ZERO)
        if inside > atom:
            raise PartitionMisalignedError(
                f"overlaps put mass {inside} into an atom of mass {atom}"
            )
        if not f.infinite and inside != atom:
            raise PartitionMisalignedError(
                "on a finite space the overlaps must tile every atom"
            )
        values.append(sum((m * p.value for m, p in zip(row, f.pieces)), ZERO) / atom)
    return AlignedStep(partition=partition, values=tuple(values))


def partition_average_matrix(
    partition: Partition, refinement: Partition
) -> OperatorMatrix:
    """Sequence-basis matrix of the averaging operator, seen on a refinement.

    Each atom of ``refinement`` must sit inside a single atom of ``partition``
    (in order); entry (r, c) is mass(r)/mass(block) when both fine atoms share
    a coarse block.
    """
    if partition.total_measure != refinement.total_measure:
        raise MeasureMismatchError("partition and refinement tile different totals")
    if partition.explicit_measure != refinement.explicit_measure:
        raise PartitionMisalignedError(
            "the refinement's explicit atoms must tile the partition's"
        )
    blocks = []
    index, left = 0, partition.atoms[0] if partition.atoms else ZERO
    for fine in refinement.atoms:
        if index >= partition.size or fine > left:
            raise PartitionMisalignedError(
                f"fine atom of mass {fine} straddles a coarse boundary"
            )
        blocks.append(index)
        left -= fine
        if left == 0:
            index += 1
            left = partition.atoms[index] if index < partition.size else ZERO
    entries = tuple(
        tuple(
            refinement.atoms[r] / partition.atoms[blocks[r]]
            if blocks[r] == blocks[c]
            else ZERO
            for c in range(refinement.size)
        )
        for r in range(refinement.size)
    )
    return OperatorMatrix(entries)


def lift(partition: Partition, matrix: OperatorMatrix) -> OperatorMatrix:
    """Value-basis matrix of the operator a sequence matrix induces.

    The induced operator maps the value vector v of an aligned function to
    M v with M[n][j] = d[n][j] * mass(j) / mass(n); on equal masses M equals
    the sequence matrix. Integrals are preserved for every Markov input; the
    full semi-doubly stochastic guarantee carries over on equal masses.
    """
    if matrix.rows != partition.size or matrix.cols != partition.size:
        raise DimensionMismatchError(
            f"{matrix.rows}x{matrix.cols} matrix on {partition.size} atoms"
        )
    if classify_matrix(matrix) < OperatorClass.SEMI_DOUBLY_STOCHASTIC:
        raise NotStochasticError("lift needs a semi-doubly stochastic matrix")
    masses = partition.atoms
    entries = tuple(
        tuple(matrix.entries[n][j] * masses[j] / masses[n] for j in range(matrix.cols))
        for n in range(matrix.rows)
    )
    return OperatorMatrix(entries)


def lift_apply(partition: Partition, matrix: OperatorMatrix, f) -> AlignedStep:
    """Apply the lifted operator to an aligned (or alignable) function."""
    aligned = f if isinstance(f, AlignedStep) else align(partition, f)
    values = apply_matrix(lift(partition, matrix), aligned.values)
    return AlignedStep(partition=partition, values=values)


def restrict(partition: Partition, operator: OperatorMatrix) -> OperatorMatrix:
    """Sequence-basis matrix of a value-basis operator on the partition.

    Exact inverse of :func:`lift`. Only equal-mass partitions are accepted:
    with unequal masses the restricted row sums are bounded by mass ratios
    that can exceed 1, so the semi-doubly stochastic guarantee would be
    silently lost; that is surfaced as an error instead.
    """
    if not partition.equal_masses:
        raise UnequalMassesUnsupportedError(
            "sequence restriction is only exact on equal-mass partitions"
        )
    if operator.rows != partition.size or operator.cols != partition.size:
        raise DimensionMismatchError(
            f"{operator.rows}x{operator.cols} matrix on {partition.size} atoms"
        )
    if classify_matrix(operator) < OperatorClass.SEMI_DOUBLY_STOCHASTIC:
        raise NotStochasticError("restrict needs a semi-doubly stochastic operator")
    masses = partition.atoms
    entries = tuple(
        tuple(operator.entries[n][j] * masses[n] / masses[j] for j in range(operator.cols))
        for n in range(operator.rows)
    )
    return OperatorMatrix(entries)


# ---------------------------------------------------------------------------
# doubly stochastic witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TTransform:
    """Two-coordinate mixing: the 2x2 block [[w, 1-w], [1-w, w]] on (j, k)."""

    j: int
    k: int
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if not 0 <= self.j < self.k:
            raise ValueError("T-transform needs coordinates 0 <= j < k")
        if not 0 <= self.weight <= 1:
            raise ValueError(f"mixing weight {self.weight} outside [0, 1]")

    def matrix(self, n: int) -> OperatorMatrix:
        if self.k >= n:
            raise DimensionMismatchError(f"coordinate {self.k} outside dimension {n}")
        rows = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
        rows[self.j][self.j] = self.weight
        rows[self.j][self.k] = 1 - self.weight
        rows[self.k][self.j] = 1 - self.weight
        rows[self.k][self.k] = self.weight
        return OperatorMatrix(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class WitnessChain:
    """Doubly stochastic witness: ordered T-transforms and their product.

    ``product`` equals the ordered product of the step matrices (last step
    leftmost) and maps the source value vector exactly onto the target one on
    ``source_partition``.
    """

    steps: Tuple[TTransform, ...]
    product: OperatorMatrix
    source_partition: Partition

    @property
    def dimension(self) -> int:
        return self.product.rows

    def step_matrices(self) -> Tuple[OperatorMatrix, ...]:
        return tuple(step.matrix(self.dimension) for step in self.steps)

    def apply_to(self, g: StepFunction) -> StepFunction:
        """Apply the witness operator to a function on its partition."""
        aligned = align(self.source_partition, g)
        values = apply_matrix(self.product, aligned.values)
        return AlignedStep(self.source_partition, values).step_function()


def _spread(f: StepFunction, unit: Fraction, length: int) -> list:
    """Value vector of f on ``length`` atoms of mass ``unit``, zero padded."""
    out = []
    for value, mass in f.pieces:
        out.extend([value] * int(mass / unit))
    out.extend([ZERO] * (length - len(out)))
    return out


def _t_transform_chain(target: Sequence, source: Sequence):
    """Chain of two-coordinate mixings carrying ``source`` onto ``target``.

    Both vectors start sorted decreasingly with equal sums and the target
    majorized by the source; prefix-sum dominance is preserved step by step,
    and every step equalizes at least one more coordinate, so at most n - 1
    steps are produced. The scan rule is deterministic: first surplus
    coordinate j, first deficit coordinate k after it, transfer the smaller
    of the two discrepancies.
    """
    x = list(target)
    y = list(source)
    n = len(x)
    rows = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
    steps = []
    for _ in range(n + 1):
        j = next((i for i in range(n) if y[i] != x[i]), None)
        if j is None:
            break
        if y[j] < x[j]:
            raise InternalInconsistencyError(
                "first discrepancy is a deficit; majorization precondition broken"
            )
        k = next((i for i in range(j + 1, n) if y[i] < x[i]), None)
        if k is None:
            raise InternalInconsistencyError(
                "surplus without a later deficit; sums cannot have been equal"
            )
        delta = min(y[j] - x[j], x[k] - y[k])
        lam = 1 - delta / (y[j] - y[k])
        steps.append(TTransform(j, k, lam))
        y[j] -= delta
        y[k] += delta
        mixed_j = [lam * a + (1 - lam) * b for a, b in zip(rows[j], rows[k])]
        mixed_k = [(1 - lam) * a + lam * b for a, b in zip(rows[j], rows[k])]
        rows[j], rows[k] = mixed_j, mixed_k
    else:
        raise InternalInconsistencyError("T-transform chain failed to terminate")
    return steps, OperatorMatrix(tuple(tuple(r) for r in rows))


def ds_witness(f: StepFunction, g: StepFunction) -> WitnessChain:
    """Doubly stochastic matrix carrying g onto f, as a T-transform chain.

    Requires f majorized by g. Both functions are laid out on the common
    equal-mass refinement whose atom mass is the gcd of all piece masses
    (infinite spaces get enough zero-tail atoms to pad both value vectors to
    one length), and the chain is built coordinate by coordinate. The product
    satisfies ``apply_matrix(product, values(g)) == values(f)`` exactly.
    """
    verdict = majorize(f, g)
    if not verdict.holds:
        point = verdict.violation.point if verdict.violation else "?"
        raise NotMajorizedError(
            f"f is not majorized by g (violation at {point} under the "
            f"{verdict.criterion.value} criterion)"
        )
    masses = [p.mass for p in f.pieces] + [p.mass for p in g.pieces]
    unit = fraction_gcd(masses) if masses else ONE
    length = max(int(f.support_measure / unit), int(g.support_measure / unit), 1)
    steps, product = _t_transform_chain(
        _spread(f, unit, length), _spread(g, unit, length)
    )
    tail = Tail(unit, None) if f.total_measure is INF else None
    partition = Partition(
        atoms=(unit,) * length, total_measure=f.total_measure, tail=tail
    )
    return WitnessChain(steps=tuple(steps), product=product, source_partition=partition)


def sds_approx_sequence(
    f: StepFunction,
    g: StepFunction,
    n_steps: int,
    *,
    approximate: bool = False,
) -> list:
    """Operators carrying f toward g (for g majorized by f), with L1 errors.

    Exact rational masses always admit a single exact witness, returned as a
    one-element list with error 0. ``approximate=True`` instead builds the
    approximating sequence: g is averaged over equal-mass binnings whose
    width halves up to ``n_steps`` times, each average gets its own exact
    witness, and only strictly improving errors are reported.
    """
    from .diagnostics import l1_distance

    if not approximate or not g.pieces:
        return [(ds_witness(g, f), ZERO)]
    support = g.support_measure
    out = []
    last_error = None
    for k in range(1, n_steps + 1):
        count = 2**k
        partition = Partition.equal_mass(count, support / count, g.total_measure)
        averaged = partition_average(
            partition, g, in_order_overlaps(partition, g)
        ).step_function()
        chain = ds_witness(averaged, f)
        error = l1_distance(averaged, g)
        if last_error is None or error < last_error:
            out.append((chain, error))
            last_error = error
        if error == 0:
            break
    return out
