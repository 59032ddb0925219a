"""Dense matrix primitives for M-matrix work.

Matrices are plain ``numpy.ndarray`` objects of shape ``(n, n)`` and dtype
float64. Every function here is pure: inputs are never modified.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "MMinError",
    "InputError",
    "SingularMatrixError",
    "ConvergenceError",
    "MatrixClass",
    "PerronRoot",
    "as_matrix",
    "classify",
    "invert",
    "jacobi_matrix",
    "perron_root",
    "spectral_radius_nonneg",
    "tau_oracle",
    "hadamard",
    "is_doubly_stochastic",
]

#: relative factor applied to ``max|a_ij|`` for sign tests
SIGN_RTOL = 1e-12
#: pivots below this fraction of ``max|a_ij|`` are treated as zero
PIVOT_RTOL = 1e-13
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


class MMinError(Exception):
    """Base class for errors raised by this package."""


class InputError(MMinError, ValueError):
    """Malformed or out-of-contract input."""


class SingularMatrixError(MMinError, ArithmeticError):
    """Elimination hit a pivot that is numerically zero."""


class ConvergenceError(MMinError, ArithmeticError):
    """Power iteration did not settle within the iteration budget."""

    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Validate ``A`` as a finite square float matrix and return it as an array."""
    M = np.array(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] < 1:
        raise InputError(f"{name} must have order n >= 1")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def _scale(M: np.ndarray) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0


def _offdiag(M: np.ndarray) -> np.ndarray:
    return M[~np.eye(M.shape[0], dtype=bool)]


@dataclass(frozen=True)
class MatrixClass:
    is_z_matrix: bool
    positive_diagonal: bool
    is_sdd: bool
    is_wcdd: bool
    is_m_matrix: bool
    dominance_ratios: np.ndarray
    zero_tolerance: float

    def as_dict(self) -> dict:
        return {
            "is_z_matrix": self.is_z_matrix,
            "positive_diagonal": self.positive_diagonal,
            "is_sdd": self.is_sdd,
            "is_wcdd": self.is_wcdd,
            "is_m_matrix": self.is_m_matrix,
            "dominance_ratios": [float(x) for x in self.dominance_ratios],
            "zero_tolerance": self.zero_tolerance,
        }


def dominance_ratios(A: np.ndarray) -> np.ndarray:
    """Row ratios d_i = sum_{j != i} |a_ij| / |a_ii| (``inf`` for a zero diagonal)."""
    absA = np.abs(A)
    diag = np.diag(absA)
    off = absA.sum(axis=1) - diag
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(diag > 0, off / np.where(diag > 0, diag, 1.0), np.inf)
    return d


def _chains_to_strict_rows(A: np.ndarray, strict: np.ndarray, eps: float) -> bool:
    # Walk edges i -> j (a_ij != 0) backwards from the strict rows.
    n = A.shape[0]
    edges = (np.abs(A) > eps) & ~np.eye(n, dtype=bool)
    reached = strict.copy()
    queue = deque(np.flatnonzero(strict))
    while queue:
        j = queue.popleft()
        for i in np.flatnonzero(edges[:, j] & ~reached):
            reached[i] = True
            queue.append(i)
    return bool(reached.all())


def classify(A, eps: float | None = None) -> MatrixClass:
    """Sign pattern, diagonal dominance and M-matrix membership of ``A``.

    ``eps`` is the absolute tolerance for the sign tests; by default
    ``1e-12 * max|a_ij|``. The inverse is accepted as nonnegative when its
    entries are ``>= -(eps / max|a_ij|) * max|A^-1|``, i.e. the same relative
    tolerance applied to the scale of the inverse.
    """
    A = as_matrix(A)
    scale = _scale(A)
    if eps is None:
        eps = SIGN_RTOL * scale
    if eps < 0:
        raise InputError("eps must be nonnegative")

    off = _offdiag(A)
    is_z = bool(np.all(off <= eps))
    pos_diag = bool(np.all(np.diag(A) > eps))

    d = dominance_ratios(A)
    strict = d < 1
    is_sdd = bool(strict.all())
    is_wcdd = bool(np.all(d <= 1) and strict.any() and _chains_to_strict_rows(A, strict, eps))

    is_m = False
    if is_z and pos_diag:
        try:
            X = invert(A)
        except SingularMatrixError:
            X = None
        if X is not None:
            rel = eps / scale if scale > 0 else 0.0
            is_m = bool(X.min() >= -rel * _scale(X))

    return MatrixClass(is_z, pos_diag, is_sdd, is_wcdd, is_m, d, float(eps))


def invert(A, *, return_residual: bool = False):
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    One step of iterative refinement ``X <- X + X (I - A X)`` follows the
    elimination. With ``return_residual=True`` the pair ``(X, r)`` is returned,
    where ``r = max|A X - I|``.

    Raises SingularMatrixError when a pivot falls below ``1e-13 * max|a_ij|``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    threshold = PIVOT_RTOL * _scale(A)
    W = np.hstack([A, np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(W[col:, col])))
        if abs(W[piv, col]) <= threshold:
            raise SingularMatrixError(
                f"pivot {W[piv, col]:.3e} in column {col} below threshold {threshold:.3e}"
            )
        if piv != col:
            W[[col, piv]] = W[[piv, col]]
        W[col] /= W[col, col]
        factors = W[:, col].copy()
        factors[col] = 0.0
        W -= np.outer(factors, W[col])
    X = W[:, n:]

    I = np.eye(n)
    X = X + X @ (I - A @ X)
    if return_residual:
        return X, float(np.max(np.abs(A @ X - I)))
    return X


def jacobi_matrix(A) -> np.ndarray:
    """J_A = G^{-1}(G - A) with G the diagonal part of ``A``."""
    A = as_matrix(A)
    diag = np.diag(A)
    if np.any(diag == 0):
        raise InputError("Jacobi matrix needs a nonzero diagonal")
    J = -A / diag[:, None]
    np.fill_diagonal(J, 0.0)
    return J


class PerronRoot(NamedTuple):
    value: float
    residual: float
    iterations: int


def _power_iteration(M: np.ndarray, tol: float, max_iter: int) -> PerronRoot:
    # M is irreducible with n >= 2, so every row sum is positive
    scale = float(M.sum(axis=1).max())
    S = M / scale + np.eye(M.shape[0])
    v = np.ones(M.shape[0])
    est = lo = hi = 0.0
    for it in range(1, max_iter + 1):
        w = S @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        est = float(v @ w) / float(v @ v)
        # Collatz-Wielandt: lo <= rho(S) <= hi for positive v
        if hi - lo <= tol * (hi - 1.0):
            res = float(np.max(np.abs(w - est * v))) / float(np.max(v))
            return PerronRoot(scale * (est - 1.0), scale * res, it)
        v = w / np.max(w)
    res = float(np.max(np.abs(S @ v - est * v))) / float(np.max(v))
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps "
        f"(bracket [{scale * (lo - 1):.6g}, {scale * (hi - 1):.6g}])",
        scale * (est - 1.0),
        scale * res,
    )


def perron_root(M, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> PerronRoot:
    """Spectral radius of a nonnegative matrix by shifted power iteration.

    The matrix is split into the strongly connected components of its
    nonzero pattern; rho(M) is the largest radius over the irreducible
    diagonal blocks, which sidesteps the algebraic convergence of reducible
    (e.g. nilpotent) matrices. Each block ``B`` is divided by its largest row
    sum ``s`` and iterated as ``B/s + I`` from the all-ones vector; the shift
    makes an irreducible block primitive, so the iteration cannot cycle.

    Iteration stops when the Collatz-Wielandt bracket
    ``min_i (Bv)_i/v_i <= rho(B) <= max_i (Bv)_i/v_i`` is narrower than
    ``tol`` relative to rho, so ``tol`` bounds the relative error of the
    result. The value reported is the Rayleigh estimate inside the bracket;
    ``residual`` is ``||(B+sI)v - (rho+s)v||_inf / ||v||_inf`` for the
    dominant block.
    """
    M = as_matrix(M)
    if tol <= 0 or max_iter < 1:
        raise InputError("tol must be positive and max_iter >= 1")
    floor = -SIGN_RTOL * max(_scale(M), 1.0)
    if M.min() < floor:
        raise InputError(f"matrix has a negative entry {M.min():.3e}")
    M = np.clip(M, 0.0, None)

    ncomp, labels = connected_components(csr_matrix(M > 0), directed=True, connection="strong")
    best = PerronRoot(0.0, 0.0, 0)
    total = 0
    for comp in range(ncomp):
        idx = np.flatnonzero(labels == comp)
        if idx.size == 1:
            k = idx[0]
            root = PerronRoot(float(M[k, k]), 0.0, 0)
        else:
            root = _power_iteration(M[np.ix_(idx, idx)], tol, max_iter)
        total += root.iterations
        if root.value > best.value or comp == 0:
            best = root
    return PerronRoot(best.value, best.residual, total)


def spectral_radius_nonneg(M, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    return perron_root(M, tol, max_iter).value


def tau_oracle(A, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Minimum eigenvalue tau(A) = 1 / rho(A^{-1}) of a nonsingular M-matrix."""
    A = as_matrix(A)
    if not classify(A).is_m_matrix:
        invert(A)  # a singular input surfaces as SingularMatrixError
        raise InputError("tau(A) is only defined here for nonsingular M-matrices")
    rho = spectral_radius_nonneg(invert(A), tol, max_iter)
    return 1.0 / rho


def hadamard(A, B) -> np.ndarray:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape != B.shape:
        raise InputError(f"order mismatch: {A.shape[0]} vs {B.shape[0]}")
    return A * B


def is_doubly_stochastic(M, eps: float = 1e-10) -> bool:
    M = as_matrix(M)
    if M.min() < -eps:
        return False
    rows = M.sum(axis=1)
    cols = M.sum(axis=0)
    return bool(np.all(np.abs(rows - 1) <= eps) and np.all(np.abs(cols - 1) <= eps))
