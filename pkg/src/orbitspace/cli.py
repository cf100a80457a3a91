"""Command-line surface.

Everything is controlled from the command line (no configuration files or
environment variables) and every run with the same arguments produces
byte-identical text output.  Exit codes: 0 on success, 1 on a domain error
(the error class name goes to stderr), 2 on a usage error.  Output files
are written only after the computation has fully succeeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import basisreg, boundary, catalog, searchq2, strata
from .basisreg import BasisFormatError, BasisValidationError
from .catalog import BadParameters
from .linalg import NotSymmetric
from .pmatrix import (
    BadIbt,
    IbtSpec,
    PMatrixFormatError,
    apply_ibt,
    build_p_matrix,
    format_p_matrix,
    RewriteFailed,
)
from .polyring import (
    ArityMismatch,
    MultiPoly,
    ParseError,
    SpaceMismatch,
    UnknownVariable,
    ZeroDivisor,
    ZeroPolynomial,
    parse_poly,
)

_DOMAIN_ERRORS = (
    BasisFormatError,
    BasisValidationError,
    basisreg.UnknownBasis,
    basisreg.BadParameter,
    basisreg.NotInvariantInSpan,
    basisreg.RelationFound,
    BadParameters,
    BadIbt,
    PMatrixFormatError,
    RewriteFailed,
    boundary.WeightOutOfBounds,
    boundary.NothingActive,
    boundary.DegenerateMatrix,
    NotSymmetric,
    ParseError,
    SpaceMismatch,
    UnknownVariable,
    ArityMismatch,
    ZeroPolynomial,
    ZeroDivisor,
    ValueError,
)


def _load_basis(args) -> basisreg.IntegrityBasis:
    if args.file:
        with open(args.file, "r", encoding="utf-8") as handle:
            return basisreg.parse_basis(handle.read())
    return basisreg.builtin_basis(args.builtin, args.m)


def _add_basis_source(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--builtin", help="built-in basis name (I2, A2, A3, A4, B2, B3, B4, D4)")
    source.add_argument("--file", help="path to a basis file")
    parser.add_argument("--m", type=int, default=None, help="parameter for the I2 family")


def _parse_fractions(text: str) -> list[Fraction]:
    return [Fraction(part) for part in text.split(",") if part != ""]


def _parse_ranges(text: str) -> list[tuple[Fraction, Fraction]]:
    ranges = []
    for part in text.split(","):
        lo, hi = part.split(":")
        ranges.append((Fraction(lo), Fraction(hi)))
    return ranges


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_basis_verify(args) -> int:
    if args.file:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
        # Parse without validation-raising so every violation can be listed.
        try:
            basis = basisreg.parse_basis(text)
            report = basisreg.verify_basis(basis)
        except BasisValidationError as err:
            report = err.report
            if report is None:
                raise
    else:
        basis = basisreg.builtin_basis(args.builtin, args.m)
        report = basisreg.verify_basis(basis)
    if report.ok:
        sys.stdout.write("ok: all checks passed\n")
        return 0
    for violation in report.violations:
        sys.stdout.write(f"violation: {violation.kind}: {violation.message}\n")
    print(report.violations[0].kind, file=sys.stderr)
    return 1


def _cmd_pmatrix_build(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    if args.format == "json":
        payload = {
            "schema": "p-matrix/1",
            "q": matrix.q,
            "degrees": list(matrix.degrees),
            "entries": {
                f"P[{a + 1}][{b + 1}]": str(matrix.entries[a][b])
                for a in range(matrix.q)
                for b in range(a, matrix.q)
            },
        }
        _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        _emit(args, format_p_matrix(matrix))
    return 0


def _parse_ibt(maps_args, matrix) -> IbtSpec:
    space = matrix.space
    maps = {name: MultiPoly.variable(space, name) for name in space.names}
    for text in maps_args or []:
        if ":" not in text:
            raise ValueError(f"--map needs the form 'p<i>: expression', got {text!r}")
        key, expr = text.split(":", 1)
        key = key.strip()
        if key not in maps:
            raise ValueError(f"unknown coordinate {key!r} in --map")
        maps[key] = parse_poly(expr.strip(), space)
    return IbtSpec(space, tuple(maps[name] for name in space.names))


def _cmd_pmatrix_ibt(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    ibt = _parse_ibt(args.map, matrix)
    transformed = apply_ibt(matrix, ibt)
    _emit(args, format_p_matrix(transformed))
    return 0


def _cmd_boundary_residual(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    candidate = parse_poly(args.poly, matrix.space)
    residual = boundary.boundary_residual(matrix, candidate)
    if args.format == "json":
        payload = {
            "schema": "boundary-residual/1",
            "components": [str(r) for r in residual.components],
            "zero_flags": [not r for r in residual.components],
        }
        _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        lines = [f"r[{i + 1}]: {r}" for i, r in enumerate(residual.components)]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_boundary_find_active(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    det_weight = 2 * sum(d - 1 for d in matrix.degrees)
    if args.weight is not None:
        weights = [args.weight]
    else:
        weights = list(range(det_weight, 1, -1))
    lines = []
    for weight in weights:
        solutions = boundary.find_active(matrix, weight)
        for i, solution in enumerate(solutions):
            lines.append(f"w={weight} A[{i + 1}]: {solution}")
    if not lines:
        lines.append("none")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_boundary_split(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    split = boundary.complete_factor_scan(matrix)
    activity = boundary.check_active(matrix, split.a)
    if args.format == "json":
        payload = {
            "schema": "boundary-split/1",
            "A": str(split.a),
            "B": str(split.b),
            "wA": split.a.weight(),
            "activity": activity.kind,
        }
        _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        text = (
            f"A: {split.a}\n"
            f"B: {split.b}\n"
            f"wA: {split.a.weight()}\n"
            f"activity: {activity.kind}\n"
        )
        _emit(args, text)
    return 0


def _cmd_boundary_initial_conditions(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    if args.poly:
        candidate = parse_poly(args.poly, matrix.space)
    else:
        candidate = boundary.complete_factor_scan(matrix).a
    report = boundary.initial_conditions_check(matrix, candidate)
    checks = {
        "positive_at_p0": report.positive_at_p0,
        "no_linear_terms": report.no_linear_terms,
        "quadratic_diagonal": report.quadratic_diagonal,
        "hessian_diagonal": report.hessian_diagonal,
        "p_diagonal": report.p_diagonal,
        "nondegenerate": report.nondegenerate,
    }
    if args.format == "json":
        payload = {
            "schema": "initial-conditions/1",
            "A": str(candidate),
            "checks": checks,
            "hessian_diagonal_at_p0": [str(report.hessian_at_p0[i][i]) for i in range(matrix.q)],
            "p_diagonal_at_p0": [str(report.p_at_p0[i][i]) for i in range(matrix.q)],
        }
        _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        lines = [f"A: {candidate}"]
        lines += [f"{name}: {'true' if ok else 'false'}" for name, ok in checks.items()]
        lines.append(
            "hessian_diagonal_at_p0: "
            + " ".join(str(report.hessian_at_p0[i][i]) for i in range(matrix.q))
        )
        lines.append(
            "p_diagonal_at_p0: "
            + " ".join(str(report.p_at_p0[i][i]) for i in range(matrix.q))
        )
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_strata_classify(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    point = _parse_fractions(args.point)
    label = strata.classify_point(matrix, point)
    rank_text = "" if label.rank is None else str(label.rank)
    _emit(args, f"status: {label.status}\nrank: {rank_text}\n")
    return 0


def _cmd_strata_section(args) -> int:
    basis = _load_basis(args)
    matrix = build_p_matrix(basis)
    box = _parse_ranges(args.box)
    grid = strata.section_grid(matrix, box, args.resolution, threads=args.threads)
    csv_text = strata.write_section_csv(grid)
    summary = strata.section_summary(grid)
    if summary["principal_components"] > 1:
        print(
            f"warning: principal stratum sampled in {summary['principal_components']} components; "
            "expected a connected section",
            file=sys.stderr,
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
        sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        from .plotting import render_section

        render_section(grid, args.plot, title=basis.name)
    return 0


def _cmd_catalog_degrees(args) -> int:
    params = tuple(int(v) for v in args.params.split(",")) if args.params else ()
    degrees, wa = catalog.class_degrees(args.label, params, args.s)
    if catalog.is_extrapolated(args.label, args.s):
        print("warning: scaling a group-annotated class is extrapolation", file=sys.stderr)
    _emit(
        args,
        f"label: {args.label}\n"
        f"degrees: {' '.join(str(d) for d in degrees)}\n"
        f"wA: {wa}\n",
    )
    return 0


def _cmd_catalog_match(args) -> int:
    degrees = [int(v) for v in args.degrees.split(",")]
    matches = catalog.table_match(args.q, degrees)
    lines = []
    for match in matches:
        bits = [f"match: {match.label}"]
        if match.params:
            bits.append("params=" + ",".join(str(v) for v in match.params))
        bits.append(f"s={match.s}")
        bits.append(f"wA={match.wa}")
        if match.group:
            bits.append(f"(group {match.group})")
        if match.extrapolated:
            bits.append("[extrapolated]")
        lines.append(" ".join(bits))
    if not lines:
        lines.append("none")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_search_q2(args) -> int:
    solutions = searchq2.search_allowable_q2(args.d1)
    chunks = []
    for i, solution in enumerate(solutions):
        lines = [f"# solution {i + 1} of {len(solutions)} for d1 = {solution.d1}"]
        lines += [f"# {note}" for note in solution.notes]
        lines.append(format_p_matrix(solution.pmatrix()).rstrip("\n"))
        lines.append(f"# A: {solution.a}")
        chunks.append("\n".join(lines))
    _emit(args, "\n".join(chunks) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitspace",
        description="Exact toolkit for orbit spaces of compact coregular linear groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    basis_parser = sub.add_parser("basis", help="integrity basis operations")
    basis_sub = basis_parser.add_subparsers(dest="subcommand", required=True)
    verify = basis_sub.add_parser("verify", help="validate a basis")
    _add_basis_source(verify)
    verify.set_defaults(func=_cmd_basis_verify)

    pmatrix_parser = sub.add_parser("pmatrix", help="P-matrix operations")
    pmatrix_sub = pmatrix_parser.add_subparsers(dest="subcommand", required=True)
    build = pmatrix_sub.add_parser("build", help="build P from a basis")
    _add_basis_source(build)
    build.add_argument("--format", choices=("text", "json"), default="text")
    build.add_argument("--out")
    build.set_defaults(func=_cmd_pmatrix_build)
    ibt = pmatrix_sub.add_parser("ibt", help="apply a triangular basis change")
    _add_basis_source(ibt)
    ibt.add_argument(
        "--map",
        action="append",
        help="coordinate map 'p<i>: expression' (repeatable; unspecified coordinates stay fixed)",
    )
    ibt.add_argument("--out")
    ibt.set_defaults(func=_cmd_pmatrix_ibt)

    boundary_parser = sub.add_parser("boundary", help="boundary equation operations")
    boundary_sub = boundary_parser.add_subparsers(dest="subcommand", required=True)
    residual = boundary_sub.add_parser("residual", help="residual of a candidate factor")
    _add_basis_source(residual)
    residual.add_argument("--poly", required=True, help="candidate A in the p variables")
    residual.add_argument("--format", choices=("text", "json"), default="text")
    residual.add_argument("--out")
    residual.set_defaults(func=_cmd_boundary_residual)
    find_active = boundary_sub.add_parser("find-active", help="strictly-active factors by weight")
    _add_basis_source(find_active)
    group = find_active.add_mutually_exclusive_group(required=True)
    group.add_argument("--weight", type=int)
    group.add_argument("--scan", action="store_true")
    find_active.add_argument("--out")
    find_active.set_defaults(func=_cmd_boundary_find_active)
    split = boundary_sub.add_parser("split", help="complete factor of det(P)")
    _add_basis_source(split)
    split.add_argument("--format", choices=("text", "json"), default="text")
    split.add_argument("--out")
    split.set_defaults(func=_cmd_boundary_split)
    initial = boundary_sub.add_parser("initial-conditions", help="local checks at p0")
    _add_basis_source(initial)
    initial.add_argument("--poly", help="candidate A (default: the complete factor)")
    initial.add_argument("--format", choices=("text", "json"), default="text")
    initial.add_argument("--out")
    initial.set_defaults(func=_cmd_boundary_initial_conditions)

    strata_parser = sub.add_parser("strata", help="stratum classification")
    strata_sub = strata_parser.add_subparsers(dest="subcommand", required=True)
    classify = strata_sub.add_parser("classify", help="classify one point")
    _add_basis_source(classify)
    classify.add_argument("--point", required=True, help="comma-separated rationals")
    classify.add_argument("--out")
    classify.set_defaults(func=_cmd_strata_classify)
    section = strata_sub.add_parser("section", help="classify a grid on the section hyperplane")
    _add_basis_source(section)
    section.add_argument("--box", required=True, help="ranges lo:hi per axis, comma-separated")
    section.add_argument("--resolution", type=int, required=True)
    section.add_argument("--out", help="CSV output path (summary then goes to stdout)")
    section.add_argument("--plot", help="also render the grid to an image file")
    section.add_argument("--threads", type=int, default=1)
    section.set_defaults(func=_cmd_strata_section)

    catalog_parser = sub.add_parser("catalog", help="allowable degree patterns")
    catalog_sub = catalog_parser.add_subparsers(dest="subcommand", required=True)
    degrees = catalog_sub.add_parser("degrees", help="degrees and w(A) of a class")
    degrees.add_argument("--label", required=True)
    degrees.add_argument("--params", default="", help="comma-separated positive integers")
    degrees.add_argument("--s", type=int, default=1)
    degrees.add_argument("--out")
    degrees.set_defaults(func=_cmd_catalog_degrees)
    match = catalog_sub.add_parser("match", help="classes matching a degree vector")
    match.add_argument("--q", type=int, required=True)
    match.add_argument("--degrees", required=True, help="comma-separated, last must be 2")
    match.add_argument("--out")
    match.set_defaults(func=_cmd_catalog_match)

    search_parser = sub.add_parser("search", help="inverse classification searches")
    search_sub = search_parser.add_subparsers(dest="subcommand", required=True)
    q2 = search_sub.add_parser("q2", help="all allowable 2x2 matrices for a top degree")
    q2.add_argument("--d1", type=int, required=True)
    q2.add_argument("--out")
    q2.set_defaults(func=_cmd_search_q2)

    return parser


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Join '--box -2:2' into '--box=-2:2' so argparse accepts values that
    begin with a minus sign."""
    merged = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in ("--box", "--point") and i + 1 < len(argv):
            merged.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            merged.append(token)
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_values(list(argv)))
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
