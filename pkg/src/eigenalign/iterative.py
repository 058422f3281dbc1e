"""Alternating leakage minimization over forward and reciprocal networks.

Each half-iteration points every combiner at the weakest eigen-directions
of its local interference covariance; the reciprocal half does the same
for the precoders on the conjugated links. The total leakage (sum over
receivers of interference power surviving the combiners, normalized by
the total cross-channel energy so thresholds are channel-scale-free) is
non-increasing and its trace is the feasibility probe: it collapses to
numerical zero exactly when alignment is achievable.

Per-stream transmit power is 1/d_j (unit total power per transmitter);
degrees-of-freedom questions are power-scale-free so nothing else is
needed. Initial precoders are Haar-random truncated-unitary matrices drawn
from PCG64 streams ``SeedSequence(seed, spawn_key=(i,))``, one per user.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigMismatch

#: Leakage below this counts as converged by default.
DEFAULT_LEAKAGE_TOL = 1e-6

#: Default iteration cap.
DEFAULT_MAX_ITERS = 5000


@dataclass(frozen=True)
class IterativeConfig:
    """Stream counts, stopping rule and initialization seed for one run."""

    d: tuple
    max_iters: int = DEFAULT_MAX_ITERS
    leakage_tol: float = DEFAULT_LEAKAGE_TOL
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if any(x < 1 for x in self.d):
            raise ValueError(f"stream counts must be >= 1, got {self.d}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.leakage_tol > 0:
            raise ValueError(f"leakage_tol must be > 0, got {self.leakage_tol}")


@dataclass
class LeakageTrace:
    """Outcome of one run: the leakage sequence and the final filters.

    ``leakage[t]`` is the normalized total leakage after the combiner
    update of iteration ``t`` (entry 0 reflects the initial precoders).
    """

    leakage: np.ndarray
    precoders: list = field(repr=False)
    combiners: list = field(repr=False)
    converged: bool
    iterations: int


def _haar_columns(rng, rows, cols):
    z = (rng.standard_normal((rows, cols))
         + 1j * rng.standard_normal((rows, cols))) * np.sqrt(0.5)
    q, r = np.linalg.qr(z)
    signs = np.diagonal(r).copy()
    signs = signs / np.abs(signs)
    return q * signs[None, :]


def _random_precoders(dims, d, seed):
    out = []
    for i in range(dims.k):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))
        out.append(_haar_columns(rng, dims.n_t, d[i]))
    return out


def _min_leakage_filters(h, filters, d):
    """One half-iteration: for every receiver of the (possibly reversed)
    channel tensor ``h``, stack the interference covariance of the given
    transmit filters and keep its weakest eigenvectors.

    Returns the new per-receiver filters and the total (unnormalized)
    leakage they admit.
    """
    k = h.shape[0]
    cov = np.zeros((k, h.shape[2], h.shape[2]), dtype=np.complex128)
    for j in range(k):
        g = h[:, j] @ filters[j]                      # (k, n_r, d_j)
        c = (g @ g.conj().transpose(0, 2, 1)) / d[j]  # (k, n_r, n_r)
        c[j] = 0.0                                    # no self-interference
        cov += c
    vals, vecs = np.linalg.eigh(cov)
    new_filters = [vecs[i][:, :d[i]] for i in range(k)]
    leakage = float(sum(vals[i, :d[i]].sum() for i in range(k)))
    return new_filters, max(leakage, 0.0)


def _run(net, d, max_iters, tol, seed, init_precoders):
    h = net.h
    h_rev = h.conj().transpose(1, 0, 3, 2)
    if init_precoders is None:
        v = _random_precoders(net.dims, d, seed)
    else:
        v = [np.array(p, dtype=np.complex128, copy=True) for p in init_precoders]

    cross_energy = float(sum(np.linalg.norm(h[i, j]) ** 2
                             for i in range(net.dims.k)
                             for j in range(net.dims.k) if i != j))
    denom = cross_energy if cross_energy > 0 else 1.0

    u, raw = _min_leakage_filters(h, v, d)
    trace = [raw / denom]
    it = 0
    while trace[-1] > tol and it < max_iters:
        v, _ = _min_leakage_filters(h_rev, u, d)
        u, raw = _min_leakage_filters(h, v, d)
        it += 1
        trace.append(raw / denom)
    return LeakageTrace(np.array(trace), v, u,
                        converged=trace[-1] <= tol, iterations=it)


def _check_config(net, cfg):
    if len(cfg.d) != net.dims.k:
        raise ConfigMismatch(
            f"config lists {len(cfg.d)} stream counts for {net.dims.k} users")
    cap = min(net.dims.n_t, net.dims.n_r)
    if any(x > cap for x in cfg.d):
        raise ConfigMismatch(
            f"stream counts {cfg.d} exceed min(n_t, n_r) = {cap}")


def iterate(net, cfg, init_precoders=None):
    """Run alternating leakage minimization on ``net``.

    Parameters
    ----------
    net : InterferenceNetwork
    cfg : IterativeConfig
    init_precoders : sequence of (n_t, d_i) arrays, optional
        Warm start; the seeded Haar draw is used when omitted.

    Returns
    -------
    LeakageTrace

    Raises
    ------
    ConfigMismatch
        If ``cfg`` is inconsistent with the network dimensions or the
        warm-start shapes do not match.
    """
    _check_config(net, cfg)
    if init_precoders is not None:
        if len(init_precoders) != net.dims.k:
            raise ConfigMismatch(
                f"{len(init_precoders)} warm-start precoders for"
                f" {net.dims.k} users")
        for i, p in enumerate(init_precoders):
            p = np.asarray(p)
            if p.shape != (net.dims.n_t, cfg.d[i]):
                raise ConfigMismatch(
                    f"warm-start precoder {i} has shape {p.shape},"
                    f" expected {(net.dims.n_t, cfg.d[i])}")
    return _run(net, cfg.d, cfg.max_iters, cfg.leakage_tol, cfg.seed,
                init_precoders)


@dataclass
class WarmStartReport:
    """Leakage behavior when a closed-form solution seeds the iteration."""

    initial_leakage: float
    max_leakage: float
    iterations: int
    passed: bool
    trace: np.ndarray = field(repr=False)


def warm_start_check(net, cfg, sol, iterations=100,
                     initial_tol=1e-12, drift_tol=1e-10):
    """Confirm an aligned solution is a fixed point of the iteration.

    Feeds ``sol``'s precoders as warm start, runs ``iterations`` full
    iterations with no early stopping, and reports whether the leakage
    starts below ``initial_tol`` and never exceeds ``drift_tol``.
    """
    if any(x != 1 for x in cfg.d):
        raise ConfigMismatch(
            f"warm start check needs single-stream users, got d={cfg.d}")
    _check_config(net, cfg)
    if sol.precoders.shape != (net.dims.k, net.dims.n_t):
        raise ConfigMismatch(
            f"solution precoders have shape {sol.precoders.shape}, expected"
            f" {(net.dims.k, net.dims.n_t)}")
    init = [sol.precoders[i][:, None] for i in range(net.dims.k)]
    trace = _run(net, cfg.d, iterations, 0.0, cfg.seed, init)
    initial = float(trace.leakage[0])
    peak = float(trace.leakage.max())
    return WarmStartReport(
        initial_leakage=initial,
        max_leakage=peak,
        iterations=trace.iterations,
        passed=initial < initial_tol and peak < drift_tol,
        trace=trace.leakage,
    )


def trace_table(trace):
    """Render a leakage trace as tabular text (iteration, leakage)."""
    lines = ["iteration leakage"]
    for t, val in enumerate(trace.leakage):
        lines.append(f"{t} {val:.17e}")
    return "\n".join(lines) + "\n"
