"""Verification, rate curves, the 4-user counterexample, and the
feasibility sweep.

Rates assume unit-power symbols, unit-norm zero-forcing combiners (which
preserve the unit noise variance) and a perfectly suppressed interference
term, so each user sees the scalar channel ``u_i^H H_ii v_i`` and
contributes ``log2(1 + snr |u_i^H H_ii v_i|^2)`` bits per channel use.

The sweep drives the alternating minimizer over a grid of (N, K) cells and
many seeds and reduces each cell to feasible / infeasible / inconclusive
by fixed leakage thresholds, next to the dimension-count prediction that
single-stream alignment works iff ``n_r + n_t - 1 >= k``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channel import NetworkDims, generate
from .closed_form import ALIGN_TOL, RANK_TOL, _channel_scale
from .errors import (DimensionMismatch, ShapeMismatch, SingularChannel,
                     UnverifiedSolution)
from .iterative import IterativeConfig, iterate

#: Chordal distance above which the two eigenbases count as incompatible.
INCOMPATIBILITY_TOL = 1e-2


@dataclass
class VerificationReport:
    """Raw alignment residuals and direct-link gains with the verdict.

    ``residuals[i, j]`` is ``|u_i^H H_ij v_j|`` for ``i != j`` (diagonal
    zero); ``rank_metrics[i]`` is ``|u_i^H H_ii v_i|``. The verdict
    compares residuals against ``align_tol`` times the largest channel
    Frobenius norm and gains against ``rank_tol * ||H_ii||_F``.
    """

    residuals: np.ndarray
    rank_metrics: np.ndarray
    passed: bool
    align_tol: float
    rank_tol: float
    channel_scale: float


def verify(net, sol, align_tol=ALIGN_TOL, rank_tol=RANK_TOL):
    """Evaluate all K(K-1) alignment residuals and K direct-link gains."""
    k = net.dims.k
    if np.shape(sol.precoders) != (k, net.dims.n_t):
        raise ShapeMismatch(
            f"precoders have shape {np.shape(sol.precoders)},"
            f" expected {(k, net.dims.n_t)}")
    if np.shape(sol.combiners) != (k, net.dims.n_r):
        raise ShapeMismatch(
            f"combiners have shape {np.shape(sol.combiners)},"
            f" expected {(k, net.dims.n_r)}")
    residuals = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i != j:
                residuals[i, j] = abs(
                    sol.combiners[i].conj() @ net.h[i, j] @ sol.precoders[j])
    rank_metrics = np.array([
        abs(sol.combiners[i].conj() @ net.h[i, i] @ sol.precoders[i])
        for i in range(k)])
    scale = _channel_scale(net)
    direct_norms = np.array([np.linalg.norm(net.h[i, i]) for i in range(k)])
    passed = bool(residuals.max() <= align_tol * scale
                  and np.all(rank_metrics >= rank_tol * direct_norms))
    return VerificationReport(residuals, rank_metrics, passed,
                              align_tol, rank_tol, scale)


@dataclass
class RatePoint:
    """Per-user and sum rates (bits per channel use) at one SNR."""

    snr_db: float
    per_user: np.ndarray
    sum_rate: float


def sum_rate_curve(net, sol, snr_db_list):
    """Interference-free rates over an SNR list for a verified solution.

    Raises
    ------
    UnverifiedSolution
        If ``verify`` fails: with residual interference the formula would
        overstate the rates.
    """
    report = verify(net, sol)
    if not report.passed:
        raise UnverifiedSolution(
            f"solution fails verification (max residual"
            f" {report.residuals.max():.3e}); rates would be"
            " interference-limited")
    gains_sq = report.rank_metrics ** 2
    points = []
    for snr_db in snr_db_list:
        snr = 10.0 ** (snr_db / 10.0)
        per_user = np.log2(1.0 + snr * gains_sq)
        points.append(RatePoint(float(snr_db), per_user, float(per_user.sum())))
    return points


@dataclass
class InfeasibilityReport:
    """Eigenbasis incompatibility of the two 4-user loop products.

    Single-stream alignment would need the two products to share an
    eigenvector (both fix the same precoder); ``min_chordal_distance``
    measures how far the closest pair of unit eigenvectors is from that,
    and ``joint_residual`` shows how badly the best compromise precoder
    violates alignment.
    """

    distances: np.ndarray
    min_chordal_distance: float
    closest_pair: tuple
    joint_residual: float
    incompatible: bool


def _product_of_ratios(net, pairs):
    out = None
    for l, den, num in pairs:
        cond = linalg.condition_estimate(net.h[l, den])
        if not cond < linalg.CONDITION_CAP:
            raise SingularChannel(
                f"cross channel ({l}, {den}) has condition estimate {cond:.3e}",
                pair=(l, den))
        factor = linalg.solve(net.h[l, den], net.h[l, num])
        out = factor if out is None else out @ factor
    return out


def infeasibility_demo(net, incompatibility_tol=INCOMPATIBILITY_TOL):
    """The 4-user, 2x2 counterexample, made quantitative.

    Composing the alignment constraints around the two distinct 4-user
    loops pins the second precoder to an eigenvector of two independent
    matrix products simultaneously. This computes both products, all their
    eigenvectors, and the minimum chordal distance ``sqrt(1 - |a^H b|^2)``
    over cross pairs; it also sets the precoder to the phase-aligned
    average of the closest pair, back-substitutes the rest, and reports
    the resulting (normalized) best-case alignment residual.
    """
    if net.dims.k != 4 or net.dims.n_t != 2 or net.dims.n_r != 2:
        raise DimensionMismatch(
            f"the demonstrator is specific to K=4 users with 2x2 channels,"
            f" got K={net.dims.k}, {net.dims.n_r}x{net.dims.n_t}")

    # Loop A: receivers 1, 4, 2, 3 (1-based); loop B: receivers 1, 3, 2, 4.
    prod_a = _product_of_ratios(
        net, [(0, 1, 2), (3, 2, 0), (1, 0, 3), (2, 3, 1)])
    prod_b = _product_of_ratios(
        net, [(0, 1, 3), (2, 3, 0), (1, 0, 2), (3, 1, 2)])

    vecs_a = [p.vector for p in linalg.eig_general(prod_a)]
    vecs_b = [p.vector for p in linalg.eig_general(prod_b)]
    distances = np.zeros((len(vecs_a), len(vecs_b)))
    for ia, a in enumerate(vecs_a):
        for ib, b in enumerate(vecs_b):
            overlap = abs(np.vdot(a, b))
            distances[ia, ib] = np.sqrt(max(0.0, 1.0 - overlap ** 2))
    closest = np.unravel_index(int(np.argmin(distances)), distances.shape)
    min_dist = float(distances[closest])

    a = vecs_a[closest[0]]
    b = vecs_b[closest[1]]
    overlap = np.vdot(a, b)
    if abs(overlap) > 0:
        b = b * np.conj(overlap / abs(overlap))
    v2 = a + b
    v2 = v2 / np.linalg.norm(v2)

    # Back-substitute the remaining precoders along one consistent chain.
    v3 = linalg.solve(net.h[3, 2], net.h[3, 1]) @ v2
    v3 = v3 / np.linalg.norm(v3)
    v1 = linalg.solve(net.h[1, 0], net.h[1, 2]) @ v3
    v1 = v1 / np.linalg.norm(v1)
    v4 = linalg.solve(net.h[2, 3], net.h[2, 0]) @ v1
    v4 = v4 / np.linalg.norm(v4)
    precoders = np.stack([v1, v2, v3, v4])

    # Best least-squares combiners: weakest left singular direction of the
    # interference each receiver sees.
    scale = _channel_scale(net)
    worst = 0.0
    for i in range(4):
        cols = np.column_stack([net.h[i, j] @ precoders[j]
                                for j in range(4) if j != i])
        u = np.linalg.svd(cols)[0][:, -1]
        for j in range(4):
            if j != i:
                worst = max(worst, abs(u.conj() @ net.h[i, j] @ precoders[j]))

    return InfeasibilityReport(
        distances=distances,
        min_chordal_distance=min_dist,
        closest_pair=(int(closest[0]), int(closest[1])),
        joint_residual=worst / scale,
        incompatible=min_dist > incompatibility_tol,
    )


@dataclass(frozen=True)
class FeasibilityRecord:
    """Outcome of one iterative run at one (n, k, seed) grid point."""

    n_t: int
    n_r: int
    k: int
    d: tuple
    seed: int
    final_leakage: float
    iterations: int
    verdict: str


@dataclass
class CellSummary:
    """Aggregated verdict for one (n, k) cell of the sweep."""

    n: int
    k: int
    verdict: str
    feasible_seeds: int
    infeasible_seeds: int
    inconclusive_seeds: int
    predicted_feasible: bool


@dataclass
class SweepResult:
    records: list
    cells: dict
    traces: list | None = field(default=None, repr=False)


def predicted_feasible(n_r, n_t, k):
    """Dimension-count prediction for single-stream alignment."""
    return n_r + n_t - 1 >= k


def feasibility_sweep(n_values, k_values, seeds, max_iters=5000,
                      feasible_tol=1e-6, infeasible_tol=1e-3, quorum=0.9,
                      keep_traces=False, progress=None):
    """Run the iterative probe over an (N, K) grid of square networks.

    ``seeds`` may be an integer count (seeds 0..count-1) or an explicit
    list. A run is feasible when its final leakage drops below
    ``feasible_tol``, infeasible when it still exceeds ``infeasible_tol``
    at the iteration cap, inconclusive otherwise; a cell verdict needs a
    ``quorum`` fraction of its runs to agree. Records are produced in
    sorted (n, k, seed) order, so the result does not depend on how the
    work is scheduled.
    """
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    else:
        seeds = sorted(int(s) for s in seeds)
    n_values = sorted(int(n) for n in n_values)
    k_values = sorted(int(k) for k in k_values)

    records = []
    traces = [] if keep_traces else None
    cells = {}
    for n in n_values:
        for k in k_values:
            counts = {"feasible": 0, "infeasible": 0, "inconclusive": 0}
            for seed in seeds:
                net = generate(NetworkDims(k, n, n), seed)
                cfg = IterativeConfig(d=(1,) * k, max_iters=max_iters,
                                      leakage_tol=feasible_tol, seed=seed)
                trace = iterate(net, cfg)
                final = float(trace.leakage[-1])
                if final <= feasible_tol:
                    verdict = "feasible"
                elif final > infeasible_tol:
                    verdict = "infeasible"
                else:
                    verdict = "inconclusive"
                counts[verdict] += 1
                records.append(FeasibilityRecord(
                    n_t=n, n_r=n, k=k, d=(1,) * k, seed=seed,
                    final_leakage=final, iterations=trace.iterations,
                    verdict=verdict))
                if keep_traces:
                    traces.append(trace.leakage)
                if progress is not None:
                    progress(records[-1])
            total = len(seeds)
            if counts["feasible"] >= quorum * total:
                cell_verdict = "feasible"
            elif counts["infeasible"] >= quorum * total:
                cell_verdict = "infeasible"
            else:
                cell_verdict = "inconclusive"
            cells[(n, k)] = CellSummary(
                n=n, k=k, verdict=cell_verdict,
                feasible_seeds=counts["feasible"],
                infeasible_seeds=counts["infeasible"],
                inconclusive_seeds=counts["inconclusive"],
                predicted_feasible=predicted_feasible(n, n, k))
    return SweepResult(records, cells, traces)


_CELL_CHARS = {"feasible": "Y", "infeasible": ".", "inconclusive": "?"}


def records_table(records):
    """Per-run tabular text: n k seed final_leakage iterations verdict."""
    lines = ["n k seed final_leakage iterations verdict"]
    for r in records:
        lines.append(f"{r.n_t} {r.k} {r.seed} {r.final_leakage:.6e}"
                     f" {r.iterations} {r.verdict}")
    return "\n".join(lines) + "\n"


def render_feasibility_table(result, n_values, k_values):
    """Achievability grid (rows N, columns K) with the prediction column.

    Y = feasible, . = infeasible, ? = inconclusive; a trailing column
    shows the largest K the dimension count allows, and cells that
    disagree with it are flagged with '!'.
    """
    header = " N\\K |" + "".join(f" {k:>2}" for k in k_values) + " | predicted"
    lines = [header, "-" * len(header)]
    for n in n_values:
        row = f" {n:>3} |"
        for k in k_values:
            cell = result.cells[(n, k)]
            mark = _CELL_CHARS[cell.verdict]
            if (cell.verdict != "inconclusive"
                    and (cell.verdict == "feasible") != cell.predicted_feasible):
                mark += "!"
            row += f" {mark:<2}"
        row += " | K <= " + str(2 * n - 1)
        lines.append(row)
    lines.append("")
    lines.append("Y feasible, . infeasible, ? inconclusive,"
                 " ! disagrees with the dimension count")
    return "\n".join(lines) + "\n"
