"""Dense complex linear-algebra primitives used by every other module.

Everything here operates on plain ``numpy.ndarray`` objects with dtype
``complex128``. The heavy lifting (QR iteration, SVD, LU) is delegated to
LAPACK through ``numpy.linalg``; what this module adds is the contract the
rest of the package relies on: validated inputs, a fixed deterministic
eigenvalue ordering, residuals reported alongside eigenvectors, and
condition-capped solves that fail loudly instead of regularizing.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyNullSpace, NonSquare, NumericalFailure, SingularMatrix

#: Relative singular-value threshold below which a direction counts as null.
DEFAULT_RANK_TOL = 1e-8

#: Condition-number estimate above which a solve is refused.
CONDITION_CAP = 1e12


def as_complex_matrix(a):
    """Return ``a`` as a 2-D complex128 array, validating finiteness.

    Raises
    ------
    ValueError
        If ``a`` is not 2-D or contains NaN/Inf entries.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with a unit-norm eigenvector and its residual.

    ``residual`` is the Euclidean norm of ``a @ vector - value * vector``.
    Pairs with ``residual > 1e-8 * ||a||_F`` should not be accepted by
    callers; for defective matrices the best-effort vectors returned by the
    QR iteration may exceed the bound and are filtered downstream.
    """

    value: complex
    vector: np.ndarray
    residual: float


def eig_general(a):
    """All eigenpairs of a general (non-Hermitian) square complex matrix.

    Pairs are ordered by descending ``|value|`` with ties broken by
    ascending complex argument, which makes downstream eigenvector
    selection deterministic. Each vector is normalized to unit Euclidean
    norm and returned together with its residual.

    Parameters
    ----------
    a : array_like
        Square complex matrix.

    Returns
    -------
    list of EigenPair

    Raises
    ------
    NonSquare
        If ``a`` is not square.
    NumericalFailure
        If the underlying QR iteration does not converge.
    """
    a = as_complex_matrix(a)
    n, m = a.shape
    if n != m:
        raise NonSquare(f"eig_general needs a square matrix, got {n}x{m}")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration failed: {exc}") from exc

    order = np.lexsort((np.angle(values), -np.abs(values)))
    pairs = []
    for idx in order:
        vec = vectors[:, idx]
        vec = vec / np.linalg.norm(vec)
        res = float(np.linalg.norm(a @ vec - values[idx] * vec))
        pairs.append(EigenPair(complex(values[idx]), vec, res))
    return pairs


def null_space_orthonormal(a, rank_tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of the left null space of ``a``.

    Returns the matrix ``U`` whose columns are unit vectors ``u`` with
    ``u^H a = 0`` up to ``rank_tol * ||a||_F``. The numerical rank is the
    number of singular values above ``rank_tol`` times the largest one.

    Parameters
    ----------
    a : array_like
        Matrix whose left null space is wanted; need not be square.
    rank_tol : float
        Relative singular-value threshold, > 0.

    Returns
    -------
    ndarray of shape (rows, rows - rank)

    Raises
    ------
    EmptyNullSpace
        If the numerical rank equals the row count.
    """
    a = as_complex_matrix(a)
    if a.size == 0:
        raise ValueError("null_space_orthonormal needs a non-empty matrix")
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    u, s, _ = np.linalg.svd(a)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size else 0
    if rank >= a.shape[0]:
        raise EmptyNullSpace(
            f"matrix of shape {a.shape} has full row rank {rank}")
    return u[:, rank:]


def condition_estimate(a):
    """2-norm condition number of ``a`` (inf for exactly singular input)."""
    a = as_complex_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def solve(a, b):
    """Solve ``a x = b`` with a condition cap.

    Raises
    ------
    SingularMatrix
        If the condition estimate of ``a`` exceeds ``CONDITION_CAP``.
    """
    a = as_complex_matrix(a)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"solve needs a square matrix, got {a.shape}")
    cond = condition_estimate(a)
    if not cond < CONDITION_CAP:
        raise SingularMatrix(
            f"condition estimate {cond:.3e} exceeds cap {CONDITION_CAP:.0e}")
    return np.linalg.solve(a, b)


def inverse(a):
    """Inverse of ``a`` under the same condition cap as :func:`solve`."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"inverse needs a square matrix, got {a.shape}")
    return solve(a, np.eye(a.shape[0], dtype=np.complex128))
