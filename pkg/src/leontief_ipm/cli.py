"""Command-line front end: solve, verify, oracle, and check-matrix.

Model files follow the schema of :mod:`leontief_ipm.model`; solve writes a
solution JSON ({x, slack, merit, iterations, status}) and an iteration trace
CSV (k,mu,alpha,merit,gap,residual_norm,step_floor). Numbers are written with
repr so files round-trip bit-exactly. Exit codes: 0 success, 1 verification
or enumeration came up negative, 2 parse error, 3 solver failure, 4
enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CapExceeded,
    EnumerationCapExceeded,
    ModelFormatError,
    RecoveryVerificationFailed,
)
from .ipm import SolveStatus, SolverConfig, solve_vlcp
from .model import (
    build_generalized_leontief_vlcp,
    build_open_leontief_lcp,
    is_vertical_block_P,
    load_model,
    m_matrix_report,
    verify_vlcp_solution,
)
from .oracle import enumerate_vlcp_solutions

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_CAP = 4


@dataclass(frozen=True)
class RunArtifacts:
    solution_path: Path | None
    trace_path: Path | None
    exit_code: int


def _load_model_or_none(path):
    try:
        return load_model(path)
    except (ModelFormatError, OSError) as exc:
        print(f"error: cannot load model {path}: {exc}", file=sys.stderr)
        return None


def _write_solution(path: Path, solution, report) -> None:
    # json emits shortest round-trip reprs, so the file is bit-stable.
    doc = {
        "x": [float(v) for v in solution.x],
        "slack": [float(v) for v in solution.slack],
        "merit": float(report.final.merit),
        "iterations": report.iterations,
        "status": report.status.value,
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _write_trace(path: Path, trace) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k", "mu", "alpha", "merit", "gap", "residual_norm", "step_floor"])
        for rec in trace:
            writer.writerow(
                [
                    rec.k,
                    repr(rec.mu),
                    repr(rec.alpha),
                    repr(rec.merit),
                    repr(rec.gap),
                    repr(rec.residual_norm),
                    repr(rec.step_floor),
                ]
            )


def _read_solution_x(path):
    try:
        doc = json.loads(Path(path).read_text())
        x = [float(v) for v in doc["x"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: cannot load solution {path}: {exc}", file=sys.stderr)
        return None
    return np.array(x)


def cmd_solve(
    model_path,
    solution_path=None,
    trace_path=None,
    config: SolverConfig | None = None,
) -> RunArtifacts:
    """Solve a model file; write solution JSON and trace CSV."""
    model_path = Path(model_path)
    model = _load_model_or_none(model_path)
    if model is None:
        return RunArtifacts(None, None, EXIT_PARSE)
    instance = build_generalized_leontief_vlcp(model)
    cfg = config if config is not None else SolverConfig()
    verified = True
    try:
        report, solution = solve_vlcp(instance, cfg)
    except RecoveryVerificationFailed as exc:
        print(f"warning: {exc}", file=sys.stderr)
        report, solution = exc.report, exc.solution
        verified = False
    solution_path = Path(solution_path) if solution_path else model_path.with_suffix(".solution.json")
    trace_path = Path(trace_path) if trace_path else model_path.with_suffix(".trace.csv")
    _write_solution(solution_path, solution, report)
    _write_trace(trace_path, report.trace)
    for note in report.warnings:
        print(f"note: {note}", file=sys.stderr)
    ok = report.status is SolveStatus.CONVERGED and verified
    print(
        f"status={report.status.value} iterations={report.iterations} "
        f"merit={report.final.merit:.6e}"
    )
    print("x = [" + ", ".join(f"{v:.10g}" for v in solution.x) + "]")
    return RunArtifacts(solution_path, trace_path, EXIT_OK if ok else EXIT_SOLVER)


def cmd_verify(model_path, solution_path, tol: float = 1e-6) -> int:
    """Check a solution file against a model file; print per-sector lines."""
    model = _load_model_or_none(model_path)
    if model is None:
        return EXIT_PARSE
    x = _read_solution_x(solution_path)
    if x is None:
        return EXIT_PARSE
    instance = build_generalized_leontief_vlcp(model)
    try:
        result = verify_vlcp_solution(instance, x, tol)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for diag in result.sectors:
        mark = "ok" if diag.complementary else "VIOLATED"
        print(
            f"sector {diag.sector}: activity={diag.activity:.10g} "
            f"min_slack={diag.min_slack:.10g} complementarity={mark}"
        )
    print(
        f"min activity={result.min_activity:.10g} min slack={result.min_slack:.10g} "
        f"tol={tol:g}"
    )
    print("verification: PASS" if result.ok else "verification: FAIL")
    return EXIT_OK if result.ok else EXIT_FAILED_CHECK


def cmd_oracle(model_path, cap: int = 1_000_000) -> int:
    """Enumerate all basic solutions of a model file."""
    model = _load_model_or_none(model_path)
    if model is None:
        return EXIT_PARSE
    instance = build_generalized_leontief_vlcp(model)
    try:
        solutions = enumerate_vlcp_solutions(instance, cap)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    for idx, sol in enumerate(solutions):
        support = [j for j, v in enumerate(sol.x) if v > 1e-9]
        xs = ", ".join(f"{v:.10g}" for v in sol.x)
        print(f"solution {idx}: x = [{xs}] active sectors = {support}")
    print(f"{len(solutions)} solution(s) found")
    return EXIT_OK if solutions else EXIT_FAILED_CHECK


def cmd_check_matrix(model_path, cap: int = 1_000_000) -> int:
    """Report the structural verdict of a model's coefficient matrix."""
    model = _load_model_or_none(model_path)
    if model is None:
        return EXIT_PARSE
    if model.is_single_technology():
        technology, _ = model.open_components()
        instance = build_open_leontief_lcp(technology, np.zeros(model.sectors))
        ok, reason = m_matrix_report(instance.M)
        print(f"nonsingular M-matrix: {'yes' if ok else 'no'} ({reason})")
        return EXIT_OK
    instance = build_generalized_leontief_vlcp(model)
    try:
        strict = is_vertical_block_P(instance.N, weak=False, cap=cap)
        weak = is_vertical_block_P(instance.N, weak=True, cap=cap)
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(f"vertical block P: {'yes' if strict else 'no'}")
    print(f"vertical block P0: {'yes' if weak else 'no'}")
    return EXIT_OK


def _config_from_args(args) -> SolverConfig:
    overrides = {}
    if args.delta is not None:
        overrides["delta"] = args.delta
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.gamma is not None:
        overrides["gamma"] = args.gamma
    if args.gamma_prime is not None:
        overrides["gamma_prime"] = args.gamma_prime
    if args.sigma is not None:
        overrides["sigma"] = args.sigma
    if args.max_iter is not None:
        overrides["max_iterations"] = args.max_iter
    if args.start_scale is not None:
        overrides["start_scale"] = args.start_scale
    return SolverConfig(**overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leontief-ipm",
        description="Solve open and multi-technology input-output economies "
        "as complementarity problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the interior-point solver on a model file")
    solve.add_argument("model", help="model JSON file")
    solve.add_argument("--solution-out", help="solution JSON path (default: <model>.solution.json)")
    solve.add_argument("--trace-out", help="trace CSV path (default: <model>.trace.csv)")
    solve.add_argument("--delta", type=float, help="termination threshold on the merit value")
    solve.add_argument("--beta", type=float, help="Armijo constant in (0, 1/2]")
    solve.add_argument("--gamma", type=float, help="centrality constant in (0, 1)")
    solve.add_argument("--gamma-prime", type=float, dest="gamma_prime", help="residual-coupling constant")
    solve.add_argument("--sigma", type=float, help="centering parameter in [0, 1)")
    solve.add_argument("--max-iter", type=int, help="iteration cap")
    solve.add_argument("--start-scale", type=float, help="starting value of every z0/w0 component")
    solve.add_argument("--seed", type=int, help="reserved for instance generator extensions")

    verify = sub.add_parser("verify", help="check a solution file against a model file")
    verify.add_argument("model", help="model JSON file")
    verify.add_argument("solution", help="solution JSON file")
    verify.add_argument("--tol", type=float, default=1e-6, help="verification tolerance")

    oracle = sub.add_parser("oracle", help="enumerate all basic solutions of a model file")
    oracle.add_argument("model", help="model JSON file")
    oracle.add_argument("--cap", type=int, default=1_000_000, help="enumeration budget")

    check = sub.add_parser("check-matrix", help="report M-matrix / block-P structure verdicts")
    check.add_argument("model", help="model JSON file")
    check.add_argument("--cap", type=int, default=1_000_000, help="enumeration budget")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve":
        try:
            config = _config_from_args(args)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        artifacts = cmd_solve(
            args.model,
            solution_path=args.solution_out,
            trace_path=args.trace_out,
            config=config,
        )
        return artifacts.exit_code
    if args.command == "verify":
        return cmd_verify(args.model, args.solution, tol=args.tol)
    if args.command == "oracle":
        return cmd_oracle(args.model, cap=args.cap)
    if args.command == "check-matrix":
        return cmd_check_matrix(args.model, cap=args.cap)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
