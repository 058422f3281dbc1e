"""K-user MIMO interference network: generation and (de)serialization.

A network is the full K x K grid of channel matrices ``h[i, j]`` from
transmitter ``j`` to receiver ``i`` (direct links on the diagonal), stored
as one complex array of shape ``(K, K, n_r, n_t)``.

Random networks draw every entry i.i.d. circularly-symmetric complex
Gaussian with unit variance (real and imaginary parts each of variance
1/2), the standard rich-scattering fading model. Reproducibility rule:
entries of ``h[i, j]`` come from the PCG64 stream seeded with
``SeedSequence(seed, spawn_key=(i, j))``, real part drawn before imaginary
part, so identical seeds give bit-identical networks on any platform.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedDocument, ShapeMismatch

#: Version tag written into every channel document.
CHANNEL_FORMAT = 1


@dataclass(frozen=True)
class NetworkDims:
    """Dimensions of a K-user interference network."""

    k: int
    n_t: int
    n_r: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"need at least 2 users, got k={self.k}")
        if self.n_t < 1 or self.n_r < 1:
            raise ValueError(
                f"antenna counts must be >= 1, got n_t={self.n_t}, n_r={self.n_r}")


@dataclass(frozen=True, eq=False)
class InterferenceNetwork:
    """Immutable bundle of dims plus all K^2 channel matrices.

    ``seed`` is a provenance tag only; networks built from explicit
    matrices carry ``seed=None``.
    """

    dims: NetworkDims
    h: np.ndarray = field(repr=False)
    seed: int | None = None

    def __post_init__(self):
        expected = (self.dims.k, self.dims.k, self.dims.n_r, self.dims.n_t)
        h = np.asarray(self.h, dtype=np.complex128)
        if h.shape != expected:
            raise ShapeMismatch(
                f"channel grid has shape {h.shape}, expected {expected}")
        if not np.isfinite(h).all():
            raise ValueError("channel entries must be finite")
        object.__setattr__(self, "h", h)

    def __eq__(self, other):
        if not isinstance(other, InterferenceNetwork):
            return NotImplemented
        return (self.dims == other.dims and self.seed == other.seed
                and np.array_equal(self.h, other.h))

    def cross_pairs(self):
        """All (receiver, transmitter) index pairs with i != j."""
        k = self.dims.k
        return [(i, j) for i in range(k) for j in range(k) if i != j]


def generate(dims, seed):
    """Draw a random network, a pure function of ``(dims, seed)``."""
    if not isinstance(dims, NetworkDims):
        dims = NetworkDims(*dims)
    h = np.empty((dims.k, dims.k, dims.n_r, dims.n_t), dtype=np.complex128)
    scale = np.sqrt(0.5)
    for i in range(dims.k):
        for j in range(dims.k):
            rng = np.random.Generator(
                np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i, j))))
            re = rng.standard_normal((dims.n_r, dims.n_t))
            im = rng.standard_normal((dims.n_r, dims.n_t))
            h[i, j] = scale * (re + 1j * im)
    return InterferenceNetwork(dims, h, seed=int(seed))


def _matrix_doc(m):
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def serialize(net):
    """Serialize a network to the versioned JSON channel document.

    Floats are written with Python's shortest round-trip representation
    (at most 17 significant digits), so ``deserialize(serialize(net))``
    reproduces the entries exactly.
    """
    doc = {
        "format": CHANNEL_FORMAT,
        "k": net.dims.k,
        "nt": net.dims.n_t,
        "nr": net.dims.n_r,
        "seed": net.seed,
        "h": [[_matrix_doc(net.h[i, j]) for j in range(net.dims.k)]
              for i in range(net.dims.k)],
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def _parse_entry(entry, where):
    if (not isinstance(entry, list) or len(entry) != 2
            or not all(isinstance(x, (int, float)) for x in entry)):
        raise MalformedDocument("entry must be a [re, im] pair", where)
    return complex(entry[0], entry[1])


def _parse_matrix(m, n_r, n_t, where):
    if not isinstance(m, list):
        raise MalformedDocument("matrix must be an array of rows", where)
    if len(m) != n_r or any(not isinstance(r, list) or len(r) != n_t for r in m):
        raise ShapeMismatch(
            f"matrix at {where} is {len(m)}x{len(m[0]) if m and isinstance(m[0], list) else '?'},"
            f" expected {n_r}x{n_t}")
    return np.array(
        [[_parse_entry(m[r][c], f"{where}[{r}][{c}]") for c in range(n_t)]
         for r in range(n_r)],
        dtype=np.complex128)


def deserialize(data):
    """Parse a channel document back into an :class:`InterferenceNetwork`.

    Raises
    ------
    MalformedDocument
        On syntax errors, missing fields or wrong field types; the message
        names the offending location.
    ShapeMismatch
        When a matrix disagrees with the declared dimensions.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc.msg}",
                                f"line {exc.lineno}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be an object", "document root")
    if doc.get("format") != CHANNEL_FORMAT:
        raise MalformedDocument(
            f"unsupported format {doc.get('format')!r}", "format")
    for key in ("k", "nt", "nr"):
        if not isinstance(doc.get(key), int):
            raise MalformedDocument(f"field '{key}' must be an integer", key)
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise MalformedDocument("field 'seed' must be an integer or null", "seed")
    try:
        dims = NetworkDims(doc["k"], doc["nt"], doc["nr"])
    except ValueError as exc:
        raise MalformedDocument(str(exc), "k/nt/nr") from exc

    grid = doc.get("h")
    if (not isinstance(grid, list) or len(grid) != dims.k
            or any(not isinstance(row, list) or len(row) != dims.k for row in grid)):
        raise MalformedDocument(f"'h' must be a {dims.k}x{dims.k} grid", "h")
    h = np.empty((dims.k, dims.k, dims.n_r, dims.n_t), dtype=np.complex128)
    for i in range(dims.k):
        for j in range(dims.k):
            h[i, j] = _parse_matrix(grid[i][j], dims.n_r, dims.n_t, f"h[{i}][{j}]")
    return InterferenceNetwork(dims, h, seed=seed)
