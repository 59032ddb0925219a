"""Auxiliary quantities and the iteration ladder behind the bound sequences.

Index convention for every ``n x n`` array in this module: ``X[j, i]`` is the
quantity with row index ``j`` and reference (excluded column) index ``i``.
Diagonal slots are unused and held at 0.

Every ladder quantity is a ratio of entry magnitudes within a single row, so
the ladder is computed from the row-normalized magnitudes
``c_jk = |a_jk| / |a_jj|`` and is invariant under ``A -> c A``.

Quantities that cannot be formed (a positive numerator over a nonpositive
denominator) are stored as NaN. Everything at reference index ``i`` depends
only on column ``i``, so a failure kills exactly one column from the failing
stage onward; ``AuxLadder.status`` names that stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import InputError, as_matrix

__all__ = ["BaseQuantities", "AuxLadder", "base_quantities", "build_ladder"]


@dataclass(frozen=True)
class BaseQuantities:
    """d_i, d = max d_i and phi_i = 1 / (a_ii - sum_{k != i} |a_ik| d_k).

    ``phi`` holds NaN where its denominator is nonpositive.
    """

    d: np.ndarray
    d_max: float
    phi: np.ndarray


def _check_diagonal(A: np.ndarray) -> None:
    if np.any(np.diag(A) == 0):
        raise InputError("all diagonal entries must be nonzero")


def _offdiag_abs(A: np.ndarray) -> np.ndarray:
    O = np.abs(A)
    np.fill_diagonal(O, 0.0)
    return O


def base_quantities(A) -> BaseQuantities:
    A = as_matrix(A)
    _check_diagonal(A)
    O = _offdiag_abs(A)
    d = O.sum(axis=1) / np.abs(np.diag(A))
    den = np.diag(A) - O @ d
    with np.errstate(divide="ignore"):
        phi = np.where(den > 0, 1.0 / np.where(den > 0, den, 1.0), np.nan)
    return BaseQuantities(d=d, d_max=float(d.max()), phi=phi)


@dataclass(frozen=True)
class AuxLadder:
    """Per-iteration storage of the ladder r -> m -> h -> u^(0) -> p^(1) -> ...

    Lists indexed by ``t`` keep a ``None`` placeholder where a level does not
    exist (``p[0]``, ``ht[0]``, ``phi_t[0]``, ``p_max[0]``, ``p_colsum[0]``),
    so ``p[t]`` is always ``p^(t)``.
    """

    n: int
    t_max: int
    r: np.ndarray
    m: np.ndarray
    h0: np.ndarray
    u: list
    p: list
    ht: list
    phi_t: list
    u_max: np.ndarray
    p_max: list
    p_colsum: list
    status: tuple

    def applicable(self, t: int) -> np.ndarray:
        """Boolean mask over reference indices whose column of ``p^(t)`` exists."""
        self._check_level(t)
        return ~np.isnan(self.p_colsum[t])

    def _check_level(self, t: int) -> None:
        if not 1 <= t <= self.t_max:
            raise InputError(f"level t={t} outside ladder depth 1..{self.t_max}")


def _ratio_max(C: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Column-wise max over j != i of C[j, i] / den[j, i].

    Zero numerators contribute 0 whatever the denominator; a positive
    numerator over a nonpositive denominator yields NaN for that column.
    NaN already present in ``den`` propagates to its column.
    """
    n = C.shape[0]
    off = ~np.eye(n, dtype=bool)
    live = (C > 0) & off
    bad = live & ~(den > 0)
    dead_in = np.isnan(den) & off
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(live & (den > 0), C / np.where(den > 0, den, 1.0), 0.0)
    out = terms.max(axis=0, initial=0.0)
    out[bad.any(axis=0) | dead_in.any(axis=0)] = np.nan
    return out


def build_ladder(A, t_max: int) -> AuxLadder:
    A = as_matrix(A)
    _check_diagonal(A)
    if int(t_max) != t_max or t_max < 1:
        raise InputError("t_max must be an integer >= 1")
    t_max = int(t_max)
    n = A.shape[0]
    off = ~np.eye(n, dtype=bool)

    # C[j, k] = |a_jk| / |a_jj|, zero diagonal
    C = _offdiag_abs(A) / np.abs(np.diag(A))[:, None]
    # S[j, i] = sum_{k != j, i} C[j, k]
    S = C.sum(axis=1)[:, None] - C

    def carry(X: np.ndarray) -> np.ndarray:
        # sum_{k != j, i} C[j, k] X[k, i]; X keeps a zero diagonal
        return C @ X

    def mask(X: np.ndarray) -> np.ndarray:
        return np.where(off, X, 0.0)

    status: list = [None] * n

    def note(stage: str, col_values: np.ndarray) -> None:
        for i in np.flatnonzero(np.isnan(col_values)):
            if status[i] is None:
                status[i] = stage

    r = _ratio_max(C, 1.0 - S)
    note("r", r)
    m = C + S * r[None, :]
    m[:, np.isnan(r)] = np.nan
    m = mask(m)

    h0 = _ratio_max(C, m - carry(m))
    note("h", h0)
    u0 = mask(C + carry(m) * h0[None, :])

    u = [u0]
    p: list = [None]
    ht: list = [None]
    phi_t: list = [None]
    p_max: list = [None]
    p_colsum: list = [None]
    diag = np.diag(A)
    absA_off = _offdiag_abs(A)

    for t in range(1, t_max + 1):
        pt = mask(C + carry(u[t - 1]))
        h_t = _ratio_max(C, pt - carry(pt))
        note(f"h({t})", h_t)
        ut = mask(C + carry(pt) * h_t[None, :])

        # phi_i^(t) = 1 / (a_ii - sum_{j != i} |a_ij| p_ji^(t)): row i of |A| against column i of p
        den = diag - np.einsum("ij,ji->i", absA_off, pt)
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = np.where(den > 0, 1.0 / np.where(den > 0, den, 1.0), np.nan)

        p.append(pt)
        ht.append(h_t)
        u.append(ut)
        phi_t.append(phi)
        p_max.append(_row_max_offdiag(pt))
        p_colsum.append(pt.sum(axis=0))

    return AuxLadder(
        n=n,
        t_max=t_max,
        r=r,
        m=m,
        h0=h0,
        u=u,
        p=p,
        ht=ht,
        phi_t=phi_t,
        u_max=_row_max_offdiag(u0),
        p_max=p_max,
        p_colsum=p_colsum,
        status=tuple(status),
    )


def _row_max_offdiag(X: np.ndarray) -> np.ndarray:
    """x_i = max_{j != i} X[i, j], NaN if any term is NaN (0 for n = 1)."""
    n = X.shape[0]
    if n == 1:
        return np.zeros(1)
    Y = np.where(np.eye(n, dtype=bool), -np.inf, X)
    return Y.max(axis=1)
