"""Closed-form interference alignment via a stacked eigenvalue problem.

For a K-user network with square N x N channels and K = N + 1, requiring
the K - 1 = N interfering signals at each receiver to be linearly
dependent turns the alignment conditions into one standard eigenvalue
problem on a KN x KN block matrix assembled from the cross channels. Every
eigenvector with a nonzero eigenvalue encodes all K precoders at once; the
combiners then come from the orthogonal complement of the (at most
(N-1)-dimensional) interference subspace at each receiver.

For K = 3 the cyclic structure collapses further: composing the three
pairwise alignment constraints around the user loop gives an N x N
eigenproblem for the first precoder alone, from which the other two follow
by back-substitution. Both routes are implemented, plus a spectral
consistency check tying them together (each stacked eigenvalue, cubed,
must land on the spectrum of the loop matrix).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channel import InterferenceNetwork, NetworkDims
from .errors import (DimensionMismatch, MalformedDocument, NoUsableEigenpair,
                     RankDeficientSolution, SingularChannel)

#: Version tag written into every solution document.
SOLUTION_FORMAT = 1

#: Minimum norm of one per-user block of a usable stacked eigenvector,
#: relative to the 1/sqrt(K) norm an evenly spread unit vector would have.
BLOCK_TOL = 1e-8

#: Alignment residual bound, relative to the largest channel Frobenius norm.
ALIGN_TOL = 1e-8

#: Minimum direct-link gain |u^H H_ii v| relative to ||H_ii||_F.
RANK_TOL = 1e-6


def coupling_mask(k):
    """Boolean (k, k) grid marking the nonzero blocks of the compensated
    matrix: everything except the diagonal and column ``(row - 1) mod k``."""
    mask = ~np.eye(k, dtype=bool)
    for r in range(k):
        mask[r, (r - 1) % k] = False
    return mask


def unit_couplings(k):
    """The all-ones coupling grid (zeros off the mask), the default choice."""
    return coupling_mask(k).astype(np.complex128)


@dataclass(frozen=True)
class StackedSystem:
    """The assembled block matrices of the eigenvalue construction.

    ``stacked`` collects every weighted cross channel with zero diagonal
    blocks; ``permutation`` is the cyclic block-row shift that moves one
    invertible block per row onto the diagonal; ``block_diagonal`` holds
    those diagonal blocks; ``compensated`` is the matrix whose eigenvectors
    encode the precoders. ``couplings`` is the per-block scale grid,
    ``dependency_weights`` the equivalent per-receiver combination weights,
    and ``shift`` the free nonzero parameter of the parametrization
    (fixed to -1 here), tied together by
    ``compensated == -shift * (inv(block_diagonal) @ permutation @ stacked - I)``.
    """

    dims: NetworkDims
    stacked: np.ndarray = field(repr=False)
    permutation: np.ndarray = field(repr=False)
    block_diagonal: np.ndarray = field(repr=False)
    compensated: np.ndarray = field(repr=False)
    couplings: np.ndarray = field(repr=False)
    dependency_weights: np.ndarray = field(repr=False)
    shift: complex = -1.0


@dataclass
class SolutionDiagnostics:
    """Residual summary attached to every solution.

    ``alignment_residual`` is max over cross links of ``|u_i^H H_ij v_j|``
    divided by the largest channel Frobenius norm; ``rank_metrics`` holds
    the per-user normalized direct-link gains ``|u_i^H H_ii v_i| / ||H_ii||_F``.
    """

    alignment_residual: float
    rank_metrics: np.ndarray | None
    eigen_residual: float | None
    rank_ok: bool


@dataclass
class AlignmentSolution:
    """Per-user unit-norm precoders and combiners, one stream each."""

    precoders: np.ndarray   # (K, n_t)
    combiners: np.ndarray   # (K, n_r)
    streams: np.ndarray     # (K,) ints, all ones for the closed forms
    eigenvalue: complex | None
    diagnostics: SolutionDiagnostics


def _require_invertible_cross_channels(net):
    for i, j in net.cross_pairs():
        cond = linalg.condition_estimate(net.h[i, j])
        if not cond < linalg.CONDITION_CAP:
            raise SingularChannel(
                f"cross channel ({i}, {j}) has condition estimate {cond:.3e}",
                pair=(i, j))


def _compensated_matrix(net, couplings):
    """Assemble only the compensated matrix; no dimension gate, so the
    K = 3 spectral check can reuse it for any square N."""
    k, n = net.dims.k, net.dims.n_t
    out = np.zeros((k * n, k * n), dtype=np.complex128)
    for r in range(k):
        l = (r - 1) % k
        lu = linalg.as_complex_matrix(net.h[l, r])
        for c in range(k):
            if c == r or c == l:
                continue
            block = linalg.solve(lu, net.h[l, c])
            out[r * n:(r + 1) * n, c * n:(c + 1) * n] = couplings[r, c] * block
    return out


def build_stacked(net, couplings=None):
    """Assemble the full stacked system for a K = N + 1 square network.

    Parameters
    ----------
    net : InterferenceNetwork
        Square channels with K = N + 1 users and invertible cross links.
    couplings : array_like, optional
        (K, K) complex grid, nonzero exactly on :func:`coupling_mask`.
        Defaults to all-ones, the choice that keeps results deterministic.

    Raises
    ------
    DimensionMismatch
        If the channels are not square or K != N + 1.
    SingularChannel
        If some cross channel fails the condition cap.
    """
    k, n_t, n_r = net.dims.k, net.dims.n_t, net.dims.n_r
    if n_t != n_r:
        raise DimensionMismatch(
            f"the construction needs square channels, got {n_r}x{n_t}")
    if k != n_t + 1:
        raise DimensionMismatch(
            f"the construction needs K = N + 1 users, got K={k}, N={n_t}")
    n = n_t
    if couplings is None:
        couplings = unit_couplings(k)
    couplings = np.asarray(couplings, dtype=np.complex128)
    mask = coupling_mask(k)
    if couplings.shape != (k, k):
        raise ValueError(f"couplings must be {k}x{k}, got {couplings.shape}")
    if np.any(couplings[~mask] != 0) or np.any(couplings[mask] == 0):
        raise ValueError(
            "couplings must be nonzero exactly on the off-diagonal blocks"
            " the compensated matrix keeps")
    _require_invertible_cross_channels(net)

    # One consistent choice of per-receiver dependency weights: row l keeps
    # weight 1 on its successor column and inherits the couplings elsewhere,
    # which realizes the compensated matrix with shift -1.
    weights = np.zeros((k, k), dtype=np.complex128)
    for l in range(k):
        succ = (l + 1) % k
        weights[l, succ] = 1.0
        for j in range(k):
            if j != l and j != succ:
                weights[l, j] = couplings[succ, j]

    stacked = np.zeros((k * n, k * n), dtype=np.complex128)
    permutation = np.zeros((k * n, k * n), dtype=np.complex128)
    block_diagonal = np.zeros((k * n, k * n), dtype=np.complex128)
    eye = np.eye(n, dtype=np.complex128)
    for r in range(k):
        l = (r - 1) % k
        permutation[r * n:(r + 1) * n, l * n:(l + 1) * n] = eye
        block_diagonal[r * n:(r + 1) * n, r * n:(r + 1) * n] = (
            weights[l, r] * net.h[l, r])
        for c in range(k):
            if c != r:
                stacked[r * n:(r + 1) * n, c * n:(c + 1) * n] = (
                    weights[r, c] * net.h[r, c])

    compensated = _compensated_matrix(net, couplings)
    return StackedSystem(net.dims, stacked, permutation, block_diagonal,
                         compensated, couplings, weights, shift=-1.0)


def _fix_phase(v):
    """Rotate so the largest-modulus entry is real positive."""
    idx = int(np.argmax(np.abs(v)))
    return v * np.conj(v[idx] / abs(v[idx]))


def _interference_columns(net, precoders, receiver):
    cols = [net.h[receiver, j] @ precoders[j]
            for j in range(net.dims.k) if j != receiver]
    return np.column_stack(cols)


def _channel_scale(net):
    norms = np.linalg.norm(net.h, axis=(2, 3))
    return float(norms.max())


def _finish_solution(net, precoders, eigenvalue, eigen_residual):
    """Combiners, residual summary and the rank gate, shared by both
    construction routes. Raises RankDeficientSolution (with the otherwise
    complete solution attached) when a direct link is zero-forced away."""
    k = net.dims.k
    combiners = np.empty((k, net.dims.n_r), dtype=np.complex128)
    for i in range(k):
        basis = linalg.null_space_orthonormal(_interference_columns(net, precoders, i))
        combiners[i] = _fix_phase(basis[:, 0])

    scale = _channel_scale(net)
    worst = 0.0
    for i, j in net.cross_pairs():
        worst = max(worst, abs(combiners[i].conj() @ net.h[i, j] @ precoders[j]))
    rank_metrics = np.array([
        abs(combiners[i].conj() @ net.h[i, i] @ precoders[i])
        / np.linalg.norm(net.h[i, i]) for i in range(k)])

    diag = SolutionDiagnostics(
        alignment_residual=worst / scale,
        rank_metrics=rank_metrics,
        eigen_residual=eigen_residual,
        rank_ok=bool(np.all(rank_metrics >= RANK_TOL)),
    )
    sol = AlignmentSolution(np.asarray(precoders), combiners,
                            np.ones(k, dtype=int), eigenvalue, diag)
    if not diag.rank_ok:
        user = int(np.argmin(rank_metrics))
        raise RankDeficientSolution(
            f"direct link of user {user} is confined to the interference"
            f" subspace (gain {rank_metrics[user]:.3e} < {RANK_TOL:.0e})",
            user=user, solution=sol)
    return sol


def solve_eigen_method(net):
    """Solve alignment through the stacked eigenvalue problem.

    Scans the eigenpairs of the compensated matrix in the fixed order
    (descending ``|value|``, ties by argument) and keeps the first one with
    a nonzero eigenvalue, an in-bound eigenvector residual, and all K
    per-user blocks of usable size; the blocks, normalized, are the
    precoders.

    Raises
    ------
    DimensionMismatch, SingularChannel
        Propagated from :func:`build_stacked`.
    NoUsableEigenpair
        If every eigenpair fails the filters (a measure-zero event for
        generically drawn channels).
    RankDeficientSolution
        If interference aligns but some direct link is lost with it.
    """
    system = build_stacked(net)
    k, n = net.dims.k, net.dims.n_t
    scale = float(np.linalg.norm(system.compensated))
    pairs = linalg.eig_general(system.compensated)
    block_tol = BLOCK_TOL / np.sqrt(k)

    for pair in pairs:
        if abs(pair.value) <= 1e-8 * scale:
            continue
        if pair.residual > 1e-8 * scale:
            continue
        blocks = pair.vector.reshape(k, n)
        norms = np.linalg.norm(blocks, axis=1)
        if np.any(norms < block_tol):
            continue
        precoders = blocks / norms[:, None]
        return _finish_solution(net, precoders, pair.value, pair.residual)

    raise NoUsableEigenpair(
        "every eigenpair has a near-zero eigenvalue, an out-of-bound"
        " residual, or a vanishing per-user block")


def _loop_factors(net):
    """The three inverse-product factors of the 3-user loop, receiver by
    receiver: returns (inv(h31) h32, inv(h12) h13, inv(h23) h21)."""
    def ratio(l, num_col, den_col):
        cond = linalg.condition_estimate(net.h[l, den_col])
        if not cond < linalg.CONDITION_CAP:
            raise SingularChannel(
                f"cross channel ({l}, {den_col}) has condition estimate {cond:.3e}",
                pair=(l, den_col))
        return linalg.solve(net.h[l, den_col], net.h[l, num_col])

    return ratio(2, 1, 0), ratio(0, 2, 1), ratio(1, 0, 2)


def loop_matrix(net):
    """The N x N product matrix of the 3-user loop equations."""
    if net.dims.k != 3:
        raise DimensionMismatch(f"loop method needs K = 3, got K={net.dims.k}")
    if net.dims.n_t != net.dims.n_r:
        raise DimensionMismatch(
            f"loop method needs square channels, got {net.dims.n_r}x{net.dims.n_t}")
    first, second, third = _loop_factors(net)
    return first @ second @ third


def solve_loop_method(net):
    """Solve the 3-user case by composing the pairwise constraints.

    Works for any square N >= 2 (odd N included; no channel extension is
    needed): the first precoder is the dominant eigenvector of
    :func:`loop_matrix`, the third and second follow by back-substitution
    through the receivers they interfere at, and combiners are built as in
    the stacked route.
    """
    if net.dims.k != 3:
        raise DimensionMismatch(f"loop method needs K = 3, got K={net.dims.k}")
    if net.dims.n_t != net.dims.n_r:
        raise DimensionMismatch(
            f"loop method needs square channels, got {net.dims.n_r}x{net.dims.n_t}")
    first, second, third = _loop_factors(net)
    pairs = linalg.eig_general(first @ second @ third)
    lead = pairs[0]
    v1 = lead.vector

    v3 = third @ v1
    if np.linalg.norm(v3) < 1e-12:
        raise SingularChannel("back-substitution for user 3 annihilated the"
                              " precoder; channel (1, 0) is degenerate",
                              pair=(1, 0))
    v3 = v3 / np.linalg.norm(v3)
    v2 = second @ v3
    if np.linalg.norm(v2) < 1e-12:
        raise SingularChannel("back-substitution for user 2 annihilated the"
                              " precoder; channel (0, 2) is degenerate",
                              pair=(0, 2))
    v2 = v2 / np.linalg.norm(v2)

    precoders = np.stack([v1, v2, v3])
    return _finish_solution(net, precoders, lead.value, lead.residual)


@dataclass
class CubeRelationReport:
    """Match of each cubed stacked eigenvalue against the loop spectrum.

    ``matches`` rows are (stacked value, its cube, closest loop value,
    relative mismatch); ``worst_mismatch`` is the largest relative
    mismatch over all nonzero stacked eigenvalues.
    """

    matches: list
    worst_mismatch: float
    skipped_near_zero: int
    passed: bool = False


def cube_relation_check(net, rel_tol=1e-6):
    """Verify that stacked and loop spectra are consistent for K = 3.

    The compensated matrix is block-cyclic for K = 3, so its cube is block
    diagonal with similar blocks: every nonzero eigenvalue, cubed, must be
    an eigenvalue of the loop matrix. Returns the matched pairs and the
    worst relative mismatch; the report's ``passed`` flag applies
    ``rel_tol``.
    """
    if net.dims.k != 3:
        raise DimensionMismatch(
            f"cube relation check needs K = 3, got K={net.dims.k}")
    if net.dims.n_t != net.dims.n_r:
        raise DimensionMismatch(
            f"cube relation check needs square channels,"
            f" got {net.dims.n_r}x{net.dims.n_t}")
    compensated = _compensated_matrix(net, unit_couplings(3))
    stacked_vals = np.array([p.value for p in linalg.eig_general(compensated)])
    loop_vals = np.array([p.value for p in linalg.eig_general(loop_matrix(net))])

    nonzero_floor = 1e-8 * np.abs(stacked_vals).max()
    matches = []
    worst = 0.0
    skipped = 0
    for val in stacked_vals:
        if abs(val) <= nonzero_floor:
            skipped += 1
            continue
        cube = val ** 3
        gaps = np.abs(loop_vals - cube)
        best = int(np.argmin(gaps))
        rel = float(gaps[best] / max(abs(cube), abs(loop_vals[best])))
        matches.append((complex(val), complex(cube), complex(loop_vals[best]), rel))
        worst = max(worst, rel)
    return CubeRelationReport(matches, worst, skipped,
                              passed=worst <= rel_tol and bool(matches))


def solution_to_document(sol, dims, method=""):
    """Serialize a solution to the versioned JSON solution document."""
    doc = {
        "format": SOLUTION_FORMAT,
        "k": dims.k,
        "nt": dims.n_t,
        "nr": dims.n_r,
        "method": method,
        "lambda": (None if sol.eigenvalue is None
                   else [float(sol.eigenvalue.real), float(sol.eigenvalue.imag)]),
        "residual": float(sol.diagnostics.alignment_residual),
        "rank_metric": (None if sol.diagnostics.rank_metrics is None
                        else float(np.min(sol.diagnostics.rank_metrics))),
        "users": [
            {"v": [[float(x.real), float(x.imag)] for x in sol.precoders[i]],
             "u": [[float(x.real), float(x.imag)] for x in sol.combiners[i]]}
            for i in range(dims.k)
        ],
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def _parse_vector(doc, length, where):
    if (not isinstance(doc, list) or len(doc) != length
            or any(not isinstance(e, list) or len(e) != 2
                   or not all(isinstance(x, (int, float)) for x in e)
                   for e in doc)):
        raise MalformedDocument(
            f"expected a length-{length} list of [re, im] pairs", where)
    return np.array([complex(e[0], e[1]) for e in doc], dtype=np.complex128)


def solution_from_document(data):
    """Parse a solution document; returns (solution, dims, method)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc.msg}",
                                f"line {exc.lineno}") from exc
    if not isinstance(doc, dict) or doc.get("format") != SOLUTION_FORMAT:
        raise MalformedDocument("unsupported solution format", "format")
    for key in ("k", "nt", "nr"):
        if not isinstance(doc.get(key), int):
            raise MalformedDocument(f"field '{key}' must be an integer", key)
    dims = NetworkDims(doc["k"], doc["nt"], doc["nr"])
    users = doc.get("users")
    if (not isinstance(users, list) or len(users) != dims.k
            or any(not isinstance(u, dict) for u in users)):
        raise MalformedDocument(f"'users' must list {dims.k} objects", "users")
    precoders = np.stack([
        _parse_vector(u.get("v"), dims.n_t, f"users[{i}].v")
        for i, u in enumerate(users)])
    combiners = np.stack([
        _parse_vector(u.get("u"), dims.n_r, f"users[{i}].u")
        for i, u in enumerate(users)])
    lam = doc.get("lambda")
    if lam is not None and (not isinstance(lam, list) or len(lam) != 2):
        raise MalformedDocument("'lambda' must be [re, im] or null", "lambda")
    eigenvalue = None if lam is None else complex(lam[0], lam[1])
    residual = doc.get("residual")
    diag = SolutionDiagnostics(
        alignment_residual=(float(residual) if isinstance(residual, (int, float))
                            else float("nan")),
        rank_metrics=None,
        eigen_residual=None,
        rank_ok=True,
    )
    sol = AlignmentSolution(precoders, combiners,
                            np.ones(dims.k, dtype=int), eigenvalue, diag)
    return sol, dims, doc.get("method", "")
