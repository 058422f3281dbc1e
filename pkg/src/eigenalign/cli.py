"""Command-line frontend: gen, solve, verify, rates, infeasible, sweep.

Every subcommand is a pure function of its flags and input files, so
repeated runs produce byte-identical output. Exit codes: 0 success /
positive finding, 1 negative finding (failed verification, rank-deficient
or non-converged solve, confirmed infeasibility, inconclusive sweep cell),
2 usage or malformed input, 3 no usable eigenpair, 4 I/O failure.

``EIGENALIGN_SEED`` provides the default for every ``--seed`` flag.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, channel, closed_form, iterative
from .errors import (ConfigMismatch, DimensionMismatch, EigenalignError,
                     MalformedDocument, NoUsableEigenpair,
                     RankDeficientSolution, ShapeMismatch, SingularChannel,
                     SingularMatrix, UnverifiedSolution)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NO_EIGENPAIR = 3
EXIT_IO = 4


def _default_seed():
    return int(os.environ.get("EIGENALIGN_SEED", "0"))


def _read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write_bytes(path, data):
    if path is None:
        sys.stdout.write(data.decode("utf-8"))
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _load_network(path):
    return channel.deserialize(_read_bytes(path))


def _parse_int_range(text, flag):
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ValueError(f"{flag} expects A or A:B, got {text!r}") from None
    if lo > hi:
        raise ValueError(f"{flag} range is empty: {text!r}")
    return list(range(lo, hi + 1))


def _parse_snr_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"--snr-db expects A:STEP:B, got {text!r}")
    start, step, stop = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("--snr-db step must be positive")
    if stop < start:
        raise ValueError("--snr-db range is empty")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _solution_summary(sol, method):
    lam = sol.eigenvalue
    lam_text = "-" if lam is None else f"{lam.real:.12g}{lam.imag:+.12g}j"
    rank = (float("nan") if sol.diagnostics.rank_metrics is None
            else float(np.min(sol.diagnostics.rank_metrics)))
    return (f"method={method} residual={sol.diagnostics.alignment_residual:.6e}"
            f" rank_metric={rank:.6e} lambda={lam_text}")


def cmd_gen(args):
    try:
        dims = channel.NetworkDims(args.users, args.nt, args.nr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    net = channel.generate(dims, args.seed)
    _write_bytes(args.out, channel.serialize(net))
    return EXIT_OK


def _solution_from_trace(trace, dims):
    precoders = np.stack([v[:, 0] for v in trace.precoders])
    combiners = np.stack([u[:, 0] for u in trace.combiners])
    sol = closed_form.AlignmentSolution(
        precoders, combiners, np.ones(dims.k, dtype=int), None,
        closed_form.SolutionDiagnostics(0.0, None, None, True))
    return sol


def cmd_solve(args):
    net = _load_network(args.infile)
    if args.method in ("eigen", "loop"):
        solver = (closed_form.solve_eigen_method if args.method == "eigen"
                  else closed_form.solve_loop_method)
        try:
            sol = solver(net)
        except RankDeficientSolution as exc:
            sol = exc.solution
            if args.out and sol is not None:
                _write_bytes(args.out, closed_form.solution_to_document(
                    sol, net.dims, args.method))
            print(_solution_summary(sol, args.method))
            print(f"FAIL rank condition: {exc}")
            return EXIT_NEGATIVE
        if args.out:
            _write_bytes(args.out, closed_form.solution_to_document(
                sol, net.dims, args.method))
        print(_solution_summary(sol, args.method))
        return EXIT_OK

    cfg = iterative.IterativeConfig(
        d=(1,) * net.dims.k, max_iters=args.max_iters,
        leakage_tol=args.tol, seed=args.seed)
    trace = iterative.iterate(net, cfg)
    sol = _solution_from_trace(trace, net.dims)
    report = analysis.verify(net, sol)
    sol.diagnostics.alignment_residual = float(
        report.residuals.max() / report.channel_scale)
    direct = np.array([np.linalg.norm(net.h[i, i]) for i in range(net.dims.k)])
    sol.diagnostics.rank_metrics = report.rank_metrics / direct
    if args.out:
        _write_bytes(args.out, closed_form.solution_to_document(
            sol, net.dims, "iterative"))
    print(f"method=iterative leakage={trace.leakage[-1]:.6e}"
          f" iterations={trace.iterations}"
          f" residual={sol.diagnostics.alignment_residual:.6e}"
          f" rank_metric={np.min(sol.diagnostics.rank_metrics):.6e}")
    if not trace.converged:
        print(f"FAIL leakage above threshold {args.tol:.6e} after"
              f" {trace.iterations} iterations")
        return EXIT_NEGATIVE
    return EXIT_OK


def _check_solution_dims(net, dims):
    if dims != net.dims:
        raise ShapeMismatch(
            f"solution was built for (k={dims.k}, nt={dims.n_t},"
            f" nr={dims.n_r}) but the channel file has (k={net.dims.k},"
            f" nt={net.dims.n_t}, nr={net.dims.n_r})")


def cmd_verify(args):
    net = _load_network(args.channel)
    sol, dims, _ = closed_form.solution_from_document(_read_bytes(args.solution))
    _check_solution_dims(net, dims)
    report = analysis.verify(net, sol)
    k = net.dims.k
    print("pair residual_grid (rows: receiver i, cols: transmitter j)")
    for i in range(k):
        print(" ".join(f"{report.residuals[i, j]:.6e}" for j in range(k)))
    print("rank_metrics " + " ".join(f"{m:.6e}" for m in report.rank_metrics))
    print(f"align_tol={report.align_tol:.1e} rank_tol={report.rank_tol:.1e}"
          f" channel_scale={report.channel_scale:.6e}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_rates(args):
    net = _load_network(args.channel)
    sol, dims, _ = closed_form.solution_from_document(_read_bytes(args.solution))
    _check_solution_dims(net, dims)
    snr_list = _parse_snr_range(args.snr_db)
    points = analysis.sum_rate_curve(net, sol, snr_list)
    k = net.dims.k
    print("snr_db " + " ".join(f"rate_user_{i + 1}" for i in range(k))
          + " sum_rate")
    for p in points:
        print(f"{p.snr_db:.2f} "
              + " ".join(f"{r:.6f}" for r in p.per_user)
              + f" {p.sum_rate:.6f}")
    return EXIT_OK


def cmd_infeasible(args):
    net = channel.generate(channel.NetworkDims(4, 2, 2), args.seed)
    report = analysis.infeasibility_demo(net)
    print(f"seed={args.seed}")
    print("chordal_distances (rows: first loop, cols: second loop)")
    for row in report.distances:
        print(" ".join(f"{d:.6e}" for d in row))
    print(f"min_chordal_distance={report.min_chordal_distance:.6e}"
          f" closest_pair={report.closest_pair[0]},{report.closest_pair[1]}")
    print(f"joint_residual={report.joint_residual:.6e}")
    if report.incompatible:
        print("INFEASIBLE single-stream alignment: the two loop products"
              " share no eigenvector")
        return EXIT_NEGATIVE
    print("COMPATIBLE eigenvectors found; alignment not ruled out")
    return EXIT_OK


def cmd_sweep(args):
    n_values = _parse_int_range(args.n_range, "--n-range")
    k_values = _parse_int_range(args.k_range, "--k-range")
    result = analysis.feasibility_sweep(
        n_values, k_values, args.seeds, max_iters=args.max_iters)
    sys.stdout.write(analysis.records_table(result.records))
    print()
    sys.stdout.write(analysis.render_feasibility_table(result, n_values,
                                                       k_values))
    if args.out:
        doc = {
            "records": [
                {"n": r.n_t, "k": r.k, "seed": r.seed,
                 "final_leakage": r.final_leakage,
                 "iterations": r.iterations, "verdict": r.verdict}
                for r in result.records],
            "cells": [
                {"n": c.n, "k": c.k, "verdict": c.verdict,
                 "feasible_seeds": c.feasible_seeds,
                 "infeasible_seeds": c.infeasible_seeds,
                 "inconclusive_seeds": c.inconclusive_seeds,
                 "predicted_feasible": c.predicted_feasible}
                for c in result.cells.values()],
        }
        _write_bytes(args.out, (json.dumps(doc, indent=1) + "\n").encode())
    if any(c.verdict == "inconclusive" for c in result.cells.values()):
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eigenalign",
        description="Construct, verify and stress-test interference"
                    " alignment on constant MIMO interference channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random channel file")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve alignment on a channel file")
    p.add_argument("--method", choices=("eigen", "loop", "iterative"),
                   required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--max-iters", type=int, default=iterative.DEFAULT_MAX_ITERS)
    p.add_argument("--tol", type=float, default=iterative.DEFAULT_LEAKAGE_TOL)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against a channel")
    p.add_argument("--channel", required=True)
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rates", help="interference-free rate table")
    p.add_argument("--channel", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--snr-db", required=True,
                   help="range A:STEP:B in dB, endpoints included")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("infeasible",
                       help="4-user 2x2 eigenvector-incompatibility demo")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_infeasible)

    p = sub.add_parser("sweep", help="feasibility sweep over an (N, K) grid")
    p.add_argument("--n-range", required=True, help="A or A:B, inclusive")
    p.add_argument("--k-range", required=True, help="A or A:B, inclusive")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--max-iters", type=int, default=iterative.DEFAULT_MAX_ITERS)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NoUsableEigenpair as exc:
        print(f"no usable eigenpair: {exc}", file=sys.stderr)
        return EXIT_NO_EIGENPAIR
    except (MalformedDocument, ShapeMismatch, DimensionMismatch,
            ConfigMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularChannel, SingularMatrix, UnverifiedSolution,
            EigenalignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
