"""Command-line surface: generation, solving, reductions, verification, bench.

All commands are deterministic given (seed, input, params); timing is only
recorded with --timing so reports stay byte-reproducible by default.
Exit codes: 0 success, 2 an exact bound comparison failed, 3 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import sys
import time
from fractions import Fraction
from typing import Optional

from . import generators, serialize
from .errors import BalanceLatError, BudgetExceeded, InvalidParams, OracleContractViolation
from .lattice import lll_reduce
from .linalg import determinant
from .nbp import (
    NbpInstance,
    brute_force_min,
    karmarkar_karp,
    mitm_min,
    pigeonhole_bound,
    pigeonhole_solve,
    verify,
)
from .oracles import (
    adversarial_minkowski_oracle,
    exact_minkowski_oracle,
    exact_svp_oracle,
    kk_delta_oracle,
    lll_svp_oracle,
    mitm_delta_oracle,
    pigeonhole_delta_oracle,
)
from .rationals import format_rational, format_scientific
from .reduce_to_minkowski import minkowski_from_nbp
from .reduce_to_nbp import (
    ReductionResult,
    nbp_from_minkowski_full,
    nbp_from_svp_full,
    nbp_via_minkowski,
    nbp_via_svp,
)

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 2
EXIT_INVALID = 3


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _fmt_opt(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else format_rational(x)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "nbp":
        inst = generators.gen_nbp(args.n, args.seed, args.precision_bits, args.signed)
        doc = serialize.instance_to_doc(inst, args.precision_bits)
    elif args.kind == "basis":
        basis = generators.gen_basis(args.n, args.seed, args.span)
        doc = serialize.basis_to_doc(basis)
    else:
        e = generators.gen_ellipsoid(args.n, args.seed)
        doc = serialize.ellipsoid_to_doc(e)
    _write_output(serialize.dumps(doc), args.out)
    return EXIT_OK


def _solve_named(
    inst: NbpInstance, algo: str, args: argparse.Namespace
) -> tuple[dict, Optional[Fraction], Optional[Fraction], str]:
    """Run a solver/reduction; returns (solution doc, error, claimed bound, formula)."""
    k = args.k
    if algo == "brute-force":
        sol = brute_force_min(inst, k)
        return serialize.solution_to_doc(sol), sol.error, None, "brute-force"
    if algo == "mitm":
        sol = mitm_min(inst, k)
        return serialize.solution_to_doc(sol), sol.error, None, "mitm"
    if algo == "kk":
        sol = karmarkar_karp(inst)
        return serialize.solution_to_doc(sol), sol.error, None, "karmarkar-karp"
    if algo == "pigeonhole":
        pigeons = args.pigeons if args.pigeons else inst.n**3
        sol = pigeonhole_solve(inst, pigeons)
        return (
            serialize.solution_to_doc(sol),
            sol.error,
            pigeonhole_bound(pigeons),
            "pigeonhole",
        )
    if algo == "reduce-to-nbp":
        result = _run_to_nbp(inst, args.oracle, k, args.full)
        return (
            serialize.solution_to_doc(result.solution),
            result.solution.error,
            result.claimed_bound,
            result.formula,
        )
    raise InvalidParams(f"unknown algorithm {algo!r}")


def _run_to_nbp(inst: NbpInstance, oracle_name: str, k: int, full: bool) -> ReductionResult:
    if oracle_name == "exact-mink":
        oracle = exact_minkowski_oracle()
        if full:
            return nbp_from_minkowski_full(inst, oracle)
        return nbp_via_minkowski(inst, k, oracle)
    if oracle_name == "exact-svp":
        if full:
            return nbp_from_svp_full(inst, lambda dim: exact_svp_oracle())
        return nbp_via_svp(inst, k, exact_svp_oracle())
    if oracle_name == "lll":
        if full:
            return nbp_from_svp_full(inst, lll_svp_oracle)
        return nbp_via_svp(inst, k, lll_svp_oracle(inst.n + 1))
    raise InvalidParams(f"unknown oracle {oracle_name!r}")


def _delta_oracle(name: str):
    if name == "mitm":
        return mitm_delta_oracle()
    if name == "kk":
        return kk_delta_oracle()
    if name == "pigeonhole":
        return pigeonhole_delta_oracle()
    raise InvalidParams(f"unknown delta oracle {name!r}")


def cmd_solve(args: argparse.Namespace) -> int:
    raw = _read_input(args.input)
    inst = serialize.instance_from_doc(serialize.loads(raw))
    start = time.monotonic()
    solution_doc, error, bound, formula = _solve_named(inst, args.algo, args)
    elapsed_ms = int((time.monotonic() - start) * 1000)
    satisfied = True if bound is None else error <= bound
    report = {
        "command": ["solve", "--algo", args.algo],
        "input_digest": _digest(raw),
        "solution": solution_doc,
        "achieved_error": format_rational(error),
        "claimed_bound": _fmt_opt(bound),
        "bound_satisfied": satisfied,
        "formula": formula,
        "wall_time_ms": elapsed_ms if args.timing else None,
    }
    _write_output(serialize.dumps(report), args.out)
    return EXIT_OK if satisfied else EXIT_BOUND_VIOLATION


def cmd_reduce_to_nbp(args: argparse.Namespace) -> int:
    raw = _read_input(args.input)
    inst = serialize.instance_from_doc(serialize.loads(raw))
    result = _run_to_nbp(inst, args.oracle, args.k, args.full)
    doc = {
        "solution": serialize.solution_to_doc(result.solution),
        "audit": {
            "claimed_bound": format_rational(result.claimed_bound),
            "achieved_error": format_rational(result.solution.error),
            "formula": result.formula,
        },
    }
    _write_output(serialize.dumps(doc), args.out)
    return EXIT_OK if result.bound_satisfied else EXIT_BOUND_VIOLATION


def cmd_reduce_to_minkowski(args: argparse.Namespace) -> int:
    raw = _read_input(args.input)
    ellipsoid = serialize.ellipsoid_from_doc(serialize.loads(raw))
    oracle = _delta_oracle(args.oracle)
    result = minkowski_from_nbp(
        ellipsoid, oracle, Q_override=args.Q, precision_bits=args.precision_bits
    )
    doc = {
        "x": list(result.x),
        "rho_star": format_rational(result.rho_star),
        "branch": result.branch,
    }
    _write_output(serialize.dumps(doc), args.out)
    return EXIT_OK


def cmd_lll(args: argparse.Namespace) -> int:
    raw = _read_input(args.input)
    basis = serialize.basis_from_doc(serialize.loads(raw))
    reduced, transform, cert = lll_reduce(basis)
    doc = {
        "reduced": serialize.basis_to_doc(reduced),
        "transform": serialize.transform_to_doc(transform),
        "size_reduced": cert.size_reduced,
        "lovasz_ok": cert.lovasz_ok,
        "det_input": format_rational(determinant(basis.B)),
        "det_reduced": format_rational(determinant(reduced.B)),
    }
    _write_output(serialize.dumps(doc), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = serialize.instance_from_doc(serialize.loads(_read_input(args.instance)))
    x, k, declared = serialize.solution_from_doc(serialize.loads(_read_input(args.solution)))
    sol = verify(inst, x, k)
    ok = sol.error == declared
    doc = {
        "ok": ok,
        "recomputed_error": format_rational(sol.error),
        "declared_error": format_rational(declared),
    }
    _write_output(serialize.dumps(doc), args.out)
    return EXIT_OK if ok else EXIT_BOUND_VIOLATION


def _bench_cell(
    inst: NbpInstance, algo: str, args: argparse.Namespace
) -> tuple[Optional[Fraction], Optional[Fraction], str]:
    try:
        if algo == "pigeonhole":
            pigeons = inst.n**3
            sol = pigeonhole_solve(inst, pigeons)
            return sol.error, pigeonhole_bound(pigeons), "ok"
        if algo == "kk":
            return karmarkar_karp(inst).error, None, "ok"
        if algo == "mitm":
            return mitm_min(inst, args.k).error, None, "ok"
        if algo == "brute-force":
            return brute_force_min(inst, args.k).error, None, "ok"
        if algo == "reduce-mink":
            oracle = (
                adversarial_minkowski_oracle() if args.adversarial else exact_minkowski_oracle()
            )
            result = nbp_via_minkowski(inst, args.k, oracle)
            status = "ok" if result.bound_satisfied else "bound-violation"
            return result.solution.error, result.claimed_bound, status
        raise InvalidParams(f"unknown bench algorithm {algo!r}")
    except BudgetExceeded:
        return None, None, "budget-exceeded"
    except OracleContractViolation:
        return None, None, "bound-violation"
    except BalanceLatError as exc:
        return None, None, f"error: {exc}"


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = sorted(int(s) for s in args.sizes.split(",") if s)
    algos = sorted(a for a in args.algos.split(",") if a)
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(
        ["n", "seed", "algorithm", "error", "error_sci", "bound", "bound_sci", "ratio_sci", "status"]
    )
    any_violation = False
    for n in sizes:
        for seed in range(args.seeds):
            inst = generators.gen_nbp(n, seed, args.precision_bits, args.signed)
            for algo in algos:
                error, bound, status = _bench_cell(inst, algo, args)
                if status == "bound-violation":
                    any_violation = True
                ratio = (
                    format_scientific(error / bound)
                    if error is not None and bound not in (None, 0)
                    else ""
                )
                writer.writerow(
                    [
                        n,
                        seed,
                        algo,
                        format_rational(error) if error is not None else "",
                        format_scientific(error) if error is not None else "",
                        format_rational(bound) if bound is not None else "",
                        format_scientific(bound) if bound is not None else "",
                        ratio,
                        status,
                    ]
                )
    _write_output(out.getvalue(), args.out)
    return EXIT_BOUND_VIOLATION if any_violation else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balancelat",
        description="Number balancing, lattice reduction, and oracle reductions "
        "in exact rational arithmetic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a seeded instance/basis/ellipsoid")
    p_gen.add_argument("kind", choices=["nbp", "basis", "ellipsoid"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--precision-bits", type=int, default=30)
    p_gen.add_argument("--signed", action="store_true", help="entries in [-1,1] instead of [0,1]")
    p_gen.add_argument("--span", type=int, default=99, help="basis entry magnitude")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="run a solver or reduction on an instance")
    p_solve.add_argument("--algo", required=True,
                         choices=["brute-force", "mitm", "pigeonhole", "kk", "reduce-to-nbp"])
    p_solve.add_argument("--input", default="-")
    p_solve.add_argument("--k", type=int, default=1)
    p_solve.add_argument("--pigeons", type=int, default=None)
    p_solve.add_argument("--oracle", default="exact-mink",
                         choices=["exact-mink", "exact-svp", "lll"])
    p_solve.add_argument("--full", action="store_true",
                         help="run the full self-reduction pipeline")
    p_solve.add_argument("--timing", action="store_true")
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_reduce = sub.add_parser("reduce", help="oracle reductions")
    reduce_sub = p_reduce.add_subparsers(dest="direction", required=True)

    p_tonbp = reduce_sub.add_parser("to-nbp", help="solve NBP with a Minkowski/SVP oracle")
    p_tonbp.add_argument("--oracle", required=True, choices=["exact-mink", "exact-svp", "lll"])
    p_tonbp.add_argument("--k", type=int, default=1)
    p_tonbp.add_argument("--full", action="store_true")
    p_tonbp.add_argument("--input", default="-")
    p_tonbp.add_argument("--out", default=None)
    p_tonbp.set_defaults(func=cmd_reduce_to_nbp)

    p_tomink = reduce_sub.add_parser("to-minkowski", help="find integer ellipsoid points with an NBP oracle")
    p_tomink.add_argument("--oracle", required=True, choices=["mitm", "kk", "pigeonhole"])
    p_tomink.add_argument("--Q", type=int, default=None, help="power-of-two range override")
    p_tomink.add_argument("--precision-bits", type=int, default=128)
    p_tomink.add_argument("--input", default="-")
    p_tomink.add_argument("--out", default=None)
    p_tomink.set_defaults(func=cmd_reduce_to_minkowski)

    p_lll = sub.add_parser("lll", help="LLL-reduce a basis, tracking the unimodular transform")
    p_lll.add_argument("--input", default="-")
    p_lll.add_argument("--out", default=None)
    p_lll.set_defaults(func=cmd_lll)

    p_verify = sub.add_parser("verify", help="re-verify a solution against its instance")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--solution", required=True)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser("bench", help="seeded sweep; CSV per (n, seed, algorithm)")
    p_bench.add_argument("--sizes", required=True, help="comma-separated dimensions")
    p_bench.add_argument("--seeds", type=int, default=5)
    p_bench.add_argument("--algos", required=True,
                         help="comma-separated: pigeonhole,kk,mitm,brute-force,reduce-mink")
    p_bench.add_argument("--k", type=int, default=1)
    p_bench.add_argument("--precision-bits", type=int, default=30)
    p_bench.add_argument("--signed", action="store_true")
    p_bench.add_argument("--adversarial", action="store_true",
                         help="use a contract-violating oracle (failure-path demo)")
    p_bench.add_argument("--out", default=None)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OracleContractViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_BOUND_VIOLATION
    except BalanceLatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
