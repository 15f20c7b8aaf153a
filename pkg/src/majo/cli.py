"""Command-line front end.

Exit codes: 0 success (relation holds / command completed), 1 the checked
relation fails, 2 malformed input or violated precondition, 3 internal
inconsistency (equivalent criteria disagreed, which is a bug). JSON reports
use stable key order and serialize every rational as 'p/q', so identical
inputs and seed produce byte-identical output; timings are emitted only on
request because they would break that.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import selftest
from .diagnostics import equi_modulus
from .errors import InternalInconsistencyError, MajoError, NotMajorizedError
from .extended import INF, Infinity, as_fraction, fraction_gcd
from .formats import (
    dump_mat,
    dumps_mat,
    dumps_sfn,
    format_rational,
    load_mat,
    load_sfn,
)
from .kernels import kernel_classify, matrix_to_kernel
from .majorize import (
    MajorizationVerdict,
    cross_check,
    hinge_criterion,
    majorize,
    tail_distribution_criterion,
    weak_majorize,
)
from .operators import (
    AlignedStep,
    Partition,
    align,
    apply_matrix,
    classify_matrix,
    ds_witness,
    lift,
    psi,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


def _jsonable(value):
    if isinstance(value, (Fraction, Infinity)):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _emit(report: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(_jsonable(report), indent=2))
    else:
        for line in lines:
            print(line)


def _checkpoint_dict(point) -> Optional[dict]:
    if point is None:
        return None
    return {
        "point": point.point,
        "left": point.left,
        "right": point.right,
        "relation": point.relation.value,
    }


def _verdict_dict(verdict: MajorizationVerdict) -> dict:
    return {
        "criterion": verdict.criterion.value,
        "holds": verdict.holds,
        "weak": verdict.weak,
        "violation": _checkpoint_dict(verdict.violation),
        "checked": [_checkpoint_dict(p) for p in verdict.checked],
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_rearrange(args) -> int:
    doc = load_sfn(args.function)
    rearranged = doc.function.rearrangement()
    text = dumps_sfn(rearranged)
    if args.output:
        Path(args.output).write_text(text)
    report = {
        "command": "rearrange",
        "input": args.function,
        "pieces": [[p.value, p.mass] for p in rearranged.pieces],
        "total": rearranged.total_measure,
        "output": args.output,
    }
    _emit(report, args.json, text.splitlines())
    return EXIT_HOLDS


_CRITERIA = {
    "rearr": lambda f, g, weak: weak_majorize(f, g) if weak else majorize(f, g),
    "hinge": lambda f, g, weak: hinge_criterion(f, g, weak=weak),
    "tail": lambda f, g, weak: tail_distribution_criterion(f, g, weak=weak),
}


def cmd_check(args) -> int:
    f = load_sfn(args.f).function
    g = load_sfn(args.g).function
    start = time.monotonic()
    signed = not (f.nonnegative and g.nonnegative)
    criterion = args.criterion
    if criterion == "all" and signed:
        # hinge and tail scans need nonnegative inputs; signed functions on a
        # finite space are decided by the rearrangement criterion directly
        criterion = "rearr"
    verdicts = []
    if criterion == "all":
        report_obj = cross_check(f, g, weak=args.weak)
        verdicts = list(report_obj.verdicts)
        holds = report_obj.holds
        agreement = True
    else:
        verdict = _CRITERIA[criterion](f, g, args.weak)
        verdicts = [verdict]
        holds = verdict.holds
        agreement = None

    summary: str
    reverse_holds = None
    if holds:
        relation = "weakly majorized" if args.weak else "majorized"
        summary = f"f is {relation} by g"
    else:
        reverse = (
            weak_majorize(g, f) if args.weak else majorize(g, f)
        )
        reverse_holds = reverse.holds
        if reverse.holds:
            summary = "not majorized (the reverse direction holds)"
        else:
            summary = "incomparable: both directions fail"

    first_violation = next((v.violation for v in verdicts if v.violation), None)
    report = {
        "command": "check",
        "inputs": {"f": args.f, "g": args.g},
        "weak": args.weak,
        "verdicts": {v.criterion.value: _verdict_dict(v) for v in verdicts},
        "certificate": _checkpoint_dict(first_violation),
        "agreement": agreement,
        "reverse_holds": reverse_holds,
        "summary": summary,
        "witness_path": None,
        "timings": {"total_s": round(time.monotonic() - start, 6)}
        if args.timings
        else None,
    }
    lines = []
    for v in verdicts:
        mark = "holds" if v.holds else f"fails at {_point_str(v.violation)}"
        lines.append(f"{v.criterion.value}: {mark}")
    if agreement is not None:
        lines.append("cross-check: all criteria agree")
    lines.append(summary)
    _emit(report, args.json, lines)
    return EXIT_HOLDS if holds else EXIT_FAILS


def _point_str(violation) -> str:
    if violation is None:
        return "?"
    op = "!=" if violation.relation.value == "==" else ">"
    return (
        f"{format_rational(violation.point)} "
        f"({format_rational(violation.left)} {op} {format_rational(violation.right)})"
    )


def cmd_witness(args) -> int:
    f = load_sfn(args.f).function
    g = load_sfn(args.g).function
    chain = ds_witness(f, g)
    dump_mat(args.output, chain.product)
    partition = chain.source_partition
    report = {
        "command": "witness",
        "inputs": {"f": args.f, "g": args.g},
        "witness_path": args.output,
        "steps": [[s.j, s.k, s.weight] for s in chain.steps],
        "dimension": chain.dimension,
        "atom_mass": partition.atoms[0] if partition.atoms else None,
        "total": partition.total_measure,
    }
    lines = [
        f"wrote {chain.dimension}x{chain.dimension} doubly stochastic witness "
        f"to {args.output}",
        f"chain of {len(chain.steps)} T-transform(s) on atoms of mass "
        f"{format_rational(partition.atoms[0])}",
    ]
    _emit(report, args.json, lines)
    return EXIT_HOLDS


def cmd_classify(args) -> int:
    matrix = load_mat(args.matrix)
    cls = classify_matrix(matrix)
    report = {
        "command": "classify",
        "input": args.matrix,
        "class": cls.label,
        "rows": matrix.rows,
        "cols": matrix.cols,
        "column_sums": list(matrix.column_sums()),
        "row_sums": list(matrix.row_sums()),
    }
    _emit(report, args.json, [cls.label])
    return EXIT_HOLDS


def _load_partition(path, *, require: bool = True) -> Optional[Partition]:
    doc = load_sfn(path)
    if doc.partition is None and require:
        raise MajoError(f"{path} carries no partition block")
    return doc.partition


def cmd_lift(args) -> int:
    partition = _load_partition(args.partition)
    matrix = load_mat(args.matrix)
    lifted = lift(partition, matrix)
    text = dumps_mat(lifted)
    if args.output:
        Path(args.output).write_text(text)
    report = {
        "command": "lift",
        "partition": args.partition,
        "matrix": args.matrix,
        "entries": [list(row) for row in lifted.entries],
        "output": args.output,
    }
    _emit(report, args.json, text.splitlines())
    return EXIT_HOLDS


def cmd_kernel(args) -> int:
    partition = _load_partition(args.partition)
    matrix = load_mat(args.matrix)
    kernel = matrix_to_kernel(partition, matrix)
    cls = kernel_classify(kernel)
    report = {
        "command": "kernel",
        "partition": args.partition,
        "matrix": args.matrix,
        "class": cls.label,
        "values": [list(row) for row in kernel.values],
        "column_integrals": list(kernel.column_integrals()),
        "row_integrals": list(kernel.row_integrals()),
    }
    lines = [f"kernel classifies {cls.label}"]
    for row in kernel.values:
        lines.append(" ".join(format_rational(v) for v in row))
    _emit(report, args.json, lines)
    return EXIT_HOLDS


def cmd_apply(args) -> int:
    matrix = load_mat(args.matrix)
    doc = load_sfn(args.function)
    f = doc.function
    partition = doc.partition
    if (
        partition is not None
        and args.atom_mass is None
        and partition.size == matrix.cols == matrix.rows
    ):
        # square matrix on the file's own partition: the lifted action
        out_values = apply_matrix(lift(partition, matrix), align(partition, f).values)
        result = AlignedStep(partition, out_values).step_function()
        out_partition = partition
    else:
        # sequence action on an equal-mass alignment, rectangular allowed
        if args.atom_mass:
            mass = as_fraction(args.atom_mass)
        elif partition is not None and partition.equal_masses and partition.atoms:
            mass = partition.atoms[0]
        elif f.total_measure is not INF:
            mass = f.total_measure / matrix.cols
        else:
            raise MajoError(
                "an infinite-measure function needs a partition block or "
                "--atom-mass to fix the alignment"
            )
        infinite = f.total_measure is INF
        col_total = INF if infinite else mass * matrix.cols
        if not infinite and col_total != f.total_measure:
            raise MajoError(
                f"{matrix.cols} atoms of mass {format_rational(mass)} cannot "
                f"tile total {format_rational(f.total_measure)}"
            )
        col_partition = Partition.equal_mass(matrix.cols, mass, col_total)
        values = align(col_partition, f).values
        coefficients = apply_matrix(matrix, tuple(v * mass for v in values))
        row_total = INF if infinite else mass * matrix.rows
        out_partition = Partition.equal_mass(matrix.rows, mass, row_total)
        result = psi(out_partition, coefficients).step_function()
    text = dumps_sfn(result, out_partition)
    if args.output:
        Path(args.output).write_text(text)
    report = {
        "command": "apply",
        "matrix": args.matrix,
        "function": args.function,
        "pieces": [[p.value, p.mass] for p in result.pieces],
        "total": result.total_measure,
        "output": args.output,
    }
    _emit(report, args.json, text.splitlines())
    return EXIT_HOLDS


def _parse_delta_grid(pattern: str):
    pattern = pattern.strip()
    if ".." in pattern:
        lo, hi = pattern.split("..", 1)

        def power(tok: str) -> int:
            tok = tok.strip()
            if not tok.startswith("2^"):
                raise MajoError(f"delta grid bounds look like 2^-3, got {tok!r}")
            return int(tok[2:])

        a, b = power(lo), power(hi)
        step = -1 if a > b else 1
        return [Fraction(2) ** k for k in range(a, b + step, step)]
    return [as_fraction(tok) for tok in pattern.split(",") if tok.strip()]


def cmd_equi(args) -> int:
    doc = load_sfn(args.function)
    f = doc.function
    deltas = _parse_delta_grid(args.delta_grid)
    ops_dir = Path(args.ops)
    matrices = sorted(ops_dir.glob("*.mat"))
    if not matrices:
        raise MajoError(f"no .mat files under {ops_dir}")
    unit = fraction_gcd([p.mass for p in f.pieces]) if f.pieces else Fraction(1)
    needed = int(f.support_measure / unit)
    family = []
    names = []
    for path in matrices:
        matrix = load_mat(path)
        if needed > matrix.cols:
            raise MajoError(
                f"{path.name}: function needs {needed} atoms of mass "
                f"{format_rational(unit)}, matrix has {matrix.cols} columns"
            )
        if f.total_measure is not INF and unit * matrix.cols != f.total_measure:
            raise MajoError(
                f"{path.name}: {matrix.cols} columns of mass "
                f"{format_rational(unit)} cannot tile total "
                f"{format_rational(f.total_measure)}"
            )
        infinite = f.total_measure is INF
        col_partition = Partition.equal_mass(matrix.cols, unit, f.total_measure)
        row_total = INF if infinite else unit * matrix.rows
        row_partition = Partition.equal_mass(matrix.rows, unit, row_total)
        values = align(col_partition, f).values
        coefficients = apply_matrix(matrix, tuple(v * unit for v in values))
        family.append(psi(row_partition, coefficients).step_function())
        names.append(path.name)
    rows = []
    all_within = True
    for delta in deltas:
        report = equi_modulus(family, delta, f)
        all_within = all_within and report.within_bound
        rows.append(
            {
                "delta": report.delta,
                "modulus": report.modulus,
                "bound": report.bound,
                "within_bound": report.within_bound,
            }
        )
    report = {
        "command": "equi",
        "function": args.function,
        "operators": names,
        "family_size": len(family),
        "rows": rows,
    }
    lines = [f"{'delta':>12} {'modulus':>12} {'bound':>12}  ok"]
    for row in rows:
        lines.append(
            f"{format_rational(row['delta']):>12} "
            f"{format_rational(row['modulus']):>12} "
            f"{format_rational(row['bound']):>12}  "
            f"{'yes' if row['within_bound'] else 'NO'}"
        )
    _emit(report, args.json, lines)
    return EXIT_HOLDS if all_within else EXIT_FAILS


def cmd_selftest(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("MAJO_SEED", "0"))
    outcomes = selftest.run_all(seed, only=args.only or None)
    passed = sum(o.passed for o in outcomes)
    report = {
        "command": "selftest",
        "seed": seed,
        "passed": passed,
        "failed": len(outcomes) - passed,
        "outcomes": [
            {
                "name": o.name,
                "passed": o.passed,
                "cases": o.cases,
                "note": o.note,
                "failures": o.failures,
            }
            for o in outcomes
        ],
    }
    lines = [o.line() for o in outcomes]
    for o in outcomes:
        lines.extend(f"    {msg}" for msg in o.failures)
    lines.append(f"{passed}/{len(outcomes)} criteria passed (seed {seed})")
    _emit(report, args.json, lines)
    return EXIT_HOLDS if passed == len(outcomes) else EXIT_FAILS


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majo",
        description=(
            "Decide and certify majorization between exact step functions, "
            "classify and construct stochastic operators, and run the "
            "randomized invariant suite."
        ),
        epilog=(
            "Formats: .sfn starts with 'total <rational>|inf', then one "
            "'<value> <mass>' line per level set, optionally 'partition "
            "<mass> ...' and 'tail <mass> x <count|inf>'; '#' comments. "
            ".mat is 'rows cols' then row-major rational entries."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rearrange", help="canonical decreasing rearrangement")
    p.add_argument("function", help=".sfn file")
    p.add_argument("-o", "--output", help="write the result here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_rearrange)

    p = sub.add_parser("check", help="decide whether f is majorized by g")
    p.add_argument("f", help=".sfn file")
    p.add_argument("g", help=".sfn file")
    p.add_argument(
        "--criterion", choices=("rearr", "hinge", "tail", "all"), default="all"
    )
    p.add_argument("--weak", action="store_true", help="drop the equality clause")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true", help="include timings in JSON")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("witness", help="doubly stochastic witness for f < g")
    p.add_argument("f", help=".sfn file")
    p.add_argument("g", help=".sfn file")
    p.add_argument("-o", "--output", required=True, help="write the witness .mat here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("classify", help="Markov / semi-doubly / doubly stochastic")
    p.add_argument("matrix", help=".mat file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("lift", help="value-basis matrix on a partition")
    p.add_argument("partition", help=".sfn file with a partition block")
    p.add_argument("matrix", help=".mat file")
    p.add_argument("-o", "--output", help="write the lifted .mat here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_lift)

    p = sub.add_parser("kernel", help="piecewise-constant kernel of a matrix")
    p.add_argument("partition", help=".sfn file with a partition block")
    p.add_argument("matrix", help=".mat file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_kernel)

    p = sub.add_parser("apply", help="apply a matrix to a step function")
    p.add_argument("matrix", help=".mat file")
    p.add_argument("function", help=".sfn file")
    p.add_argument(
        "--atom-mass",
        help="alignment atom mass when the .sfn has no partition block",
    )
    p.add_argument("-o", "--output", help="write the image .sfn here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("equi", help="equi-integrability report for operator images")
    p.add_argument("function", help=".sfn file")
    p.add_argument("--ops", required=True, help="directory of .mat operators")
    p.add_argument(
        "--delta-grid",
        default="2^-1..2^-8",
        help="'2^-1..2^-8' or a comma-separated list of rationals",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_equi)

    p = sub.add_parser("selftest", help="run the randomized invariant suite")
    p.add_argument(
        "--seed", type=int, default=None, help="defaults to MAJO_SEED or 0"
    )
    p.add_argument(
        "--only",
        action="append",
        choices=[name for name, _ in selftest.SUITE],
        help="run a single battery (repeatable)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except NotMajorizedError as exc:
        print(f"not majorized: {exc}", file=sys.stderr)
        return EXIT_FAILS
    except (MajoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
