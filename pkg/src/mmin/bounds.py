"""Lower bounds for tau(A) and upper bounds for rho(B o A^{-1}).

Each bound is returned as a :class:`BoundResult`; a bound whose hypotheses
fail comes back with ``applicable=False`` and a reason instead of raising.
Pair maxima run over ordered pairs ``i != j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    InputError,
    MatrixClass,
    as_matrix,
    classify,
    invert,
    jacobi_matrix,
    spectral_radius_nonneg,
)
from .sequences import AuxLadder, BaseQuantities, base_quantities, build_ladder

__all__ = [
    "METHODS",
    "SEQUENCE_METHODS",
    "BoundResult",
    "BoundReport",
    "HadamardUpper",
    "legacy_bounds",
    "gamma",
    "omega",
    "gamma_tilde",
    "omega_tilde",
    "hadamard_upper",
    "entry_diagonal_lower",
    "full_report",
]

METHODS = (
    "shivakumar_lower",
    "shivakumar_upper_rowsum",
    "shivakumar_upper_diag",
    "shivakumar_inv_lower",
    "shivakumar_inv_upper",
    "th31_tianhuang",
    "cor34_tianhuang",
    "li_inverse",
    "li_entries",
    "wang_sun",
    "upsilon_t",
    "upsilon_tilde_t",
    "gamma_t",
    "omega_t",
    "gamma_tilde_t",
    "omega_tilde_t",
)
SEQUENCE_METHODS = ("upsilon_t", "gamma_t", "omega_t", "upsilon_tilde_t", "gamma_tilde_t", "omega_tilde_t")
UPPER_METHODS = frozenset(
    {"shivakumar_upper_rowsum", "shivakumar_upper_diag", "shivakumar_inv_upper"}
)

NOT_WCDD = "matrix not weakly chained diagonally dominant"
NOT_SDD = "matrix not strictly diagonally dominant"
NOT_M = "matrix is not a nonsingular M-matrix"
SMALL_N = "pair bound needs n >= 2"


@dataclass(frozen=True)
class BoundResult:
    method: str
    kind: str
    value: Optional[float]
    t: Optional[int] = None
    applicable: bool = True
    reason: str = ""

    @classmethod
    def of(cls, method: str, value: float, t: Optional[int] = None) -> "BoundResult":
        kind = "upper" if method in UPPER_METHODS else "lower"
        if not np.isfinite(value):
            return cls.na(method, "nonfinite value", t)
        return cls(method, kind, float(value), t)

    @classmethod
    def na(cls, method: str, reason: str, t: Optional[int] = None) -> "BoundResult":
        kind = "upper" if method in UPPER_METHODS else "lower"
        return cls(method, kind, None, t, applicable=False, reason=reason)

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "kind": self.kind,
            "t": self.t,
            "value": self.value,
            "applicable": self.applicable,
            "reason": self.reason,
        }


@dataclass
class BoundReport:
    matrix_id: str
    tau: Optional[float]
    t_max: int
    rows: list = field(default_factory=list)
    matrix_class: Optional[MatrixClass] = None
    rho_jacobi: Optional[float] = None

    def get(self, method: str, t: Optional[int] = None) -> BoundResult:
        for row in self.rows:
            if row.method == method and row.t == t:
                return row
        raise KeyError((method, t))

    def series(self, method: str) -> list:
        """Values of a sequence method for t = 1..t_max (None where inapplicable)."""
        return [self.get(method, t).value for t in range(1, self.t_max + 1)]


def _pair_max(F: np.ndarray) -> float:
    n = F.shape[0]
    return float(np.max(F[~np.eye(n, dtype=bool)]))


def _sqrt0(x: np.ndarray) -> np.ndarray:
    # the radicands are squares plus nonnegative terms; clamp rounding noise
    return np.sqrt(np.maximum(x, 0.0))


def _pair_lower(diag: np.ndarray, spread: np.ndarray, coupling: np.ndarray) -> float:
    """2 / max_{i != j} { x_i + x_j + sqrt(spread_ij^2 + 4 x_i x_j coupling_ij) }."""
    x = diag
    F = x[:, None] + x[None, :] + _sqrt0(spread**2 + 4.0 * np.outer(x, x) * coupling)
    return 2.0 / _pair_max(F)


def _ladder_level(ladder: AuxLadder, t: int) -> None:
    if not 1 <= t <= ladder.t_max:
        raise InputError(f"t={t} exceeds ladder depth {ladder.t_max}")


def _colsum_or_reason(ladder: AuxLadder, t: int):
    cs = ladder.p_colsum[t]
    if np.any(np.isnan(cs)):
        bad = [i for i in range(ladder.n) if np.isnan(cs[i])]
        stages = sorted({ladder.status[i] for i in bad if ladder.status[i]})
        return None, f"ladder not applicable at reference indices {bad} (stage {', '.join(stages)})"
    return cs, ""


def gamma(A_inv, ladder: AuxLadder, t: int) -> BoundResult:
    """Pairwise lower bound from the diagonal of the inverse and p^(t) column sums."""
    _ladder_level(ladder, t)
    if ladder.n < 2:
        return BoundResult.na("gamma_t", SMALL_N, t)
    cs, why = _colsum_or_reason(ladder, t)
    if cs is None:
        return BoundResult.na("gamma_t", why, t)
    alpha = np.diag(as_matrix(A_inv))
    spread = alpha[:, None] - alpha[None, :]
    return BoundResult.of("gamma_t", _pair_lower(alpha, spread, np.outer(cs, cs)), t)


def omega(A_inv, ladder: AuxLadder, t: int) -> BoundResult:
    """Single-index lower bound 1 / max_i (1 + sum_{k != i} p_ki^(t)) alpha_ii."""
    _ladder_level(ladder, t)
    cs, why = _colsum_or_reason(ladder, t)
    if cs is None:
        return BoundResult.na("omega_t", why, t)
    alpha = np.diag(as_matrix(A_inv))
    return BoundResult.of("omega_t", 1.0 / float(np.max((1.0 + cs) * alpha)), t)


def entry_diagonal_lower(A) -> np.ndarray:
    """1 / (a_ii - sum_{k != i} a_ik a_ki / a_kk), a lower estimate of alpha_ii for SDD M-matrices.

    NaN where the denominator is nonpositive.
    """
    A = as_matrix(A)
    diag = np.diag(A)
    P = A * A.T / diag[None, :]
    np.fill_diagonal(P, 0.0)
    den = diag - P.sum(axis=1)
    with np.errstate(divide="ignore"):
        return np.where(den > 0, 1.0 / np.where(den > 0, den, 1.0), np.nan)


def _sdd_phi_or_reason(A: np.ndarray, ladder: AuxLadder, t: int, is_sdd: Optional[bool]):
    if is_sdd is None:
        is_sdd = classify(A).is_sdd
    if not is_sdd:
        return None, NOT_SDD
    phi = ladder.phi_t[t]
    if np.any(np.isnan(phi)):
        return None, "phi^(t) undefined (nonpositive denominator)"
    return phi, ""


def gamma_tilde(A, ladder: AuxLadder, t: int, *, is_sdd: Optional[bool] = None) -> BoundResult:
    """Entries-only version of :func:`gamma` for strictly diagonally dominant M-matrices.

    The spread term uses ``max(phi_i, phi_j) - min(low_i, low_j)`` with
    ``low`` from :func:`entry_diagonal_lower`.
    """
    A = as_matrix(A)
    _ladder_level(ladder, t)
    phi, why = _sdd_phi_or_reason(A, ladder, t, is_sdd)
    if phi is None:
        return BoundResult.na("gamma_tilde_t", why, t)
    if ladder.n < 2:
        return BoundResult.na("gamma_tilde_t", SMALL_N, t)
    cs, why = _colsum_or_reason(ladder, t)
    if cs is None:
        return BoundResult.na("gamma_tilde_t", why, t)
    low = entry_diagonal_lower(A)
    spread = np.maximum(phi[:, None], phi[None, :]) - np.minimum(low[:, None], low[None, :])
    return BoundResult.of("gamma_tilde_t", _pair_lower(phi, spread, np.outer(cs, cs)), t)


def omega_tilde(A, ladder: AuxLadder, t: int, *, is_sdd: Optional[bool] = None) -> BoundResult:
    A = as_matrix(A)
    _ladder_level(ladder, t)
    phi, why = _sdd_phi_or_reason(A, ladder, t, is_sdd)
    if phi is None:
        return BoundResult.na("omega_tilde_t", why, t)
    cs, why = _colsum_or_reason(ladder, t)
    if cs is None:
        return BoundResult.na("omega_tilde_t", why, t)
    return BoundResult.of("omega_tilde_t", 1.0 / float(np.max((1.0 + cs) * phi)), t)


def legacy_bounds(
    A,
    A_inv,
    ladder: AuxLadder,
    base: BaseQuantities,
    rho_JA: float,
    t: int,
    *,
    matrix_class: Optional[MatrixClass] = None,
) -> list:
    """Earlier bounds: the two-sided row-sum family, the Jacobi-radius bounds,
    the u_i bound and the two p_i^(t) sequences (only at level ``t``)."""
    A = as_matrix(A)
    A_inv = as_matrix(A_inv, "A_inv")
    _ladder_level(ladder, t)
    cls = matrix_class if matrix_class is not None else classify(A)
    n = A.shape[0]
    out = []

    # two-sided row-sum family
    names = (
        "shivakumar_lower",
        "shivakumar_upper_rowsum",
        "shivakumar_upper_diag",
        "shivakumar_inv_lower",
        "shivakumar_inv_upper",
    )
    if cls.is_wcdd and cls.is_m_matrix:
        rows = A.sum(axis=1)
        inv_rows = A_inv.sum(axis=1)
        vals = (rows.min(), rows.max(), np.diag(A).min(), 1.0 / inv_rows.max(), 1.0 / inv_rows.min())
        out.extend(BoundResult.of(m, v) for m, v in zip(names, vals))
    else:
        why = NOT_WCDD if not cls.is_wcdd else NOT_M
        out.extend(BoundResult.na(m, why) for m in names)

    alpha = np.diag(A_inv)
    spread = alpha[:, None] - alpha[None, :]
    out.append(BoundResult.of("th31_tianhuang", 1.0 / ((1 + (n - 1) * rho_JA) * alpha.max())))

    if cls.is_sdd and not np.any(np.isnan(base.phi)):
        phi = base.phi
        out.append(
            BoundResult.of("cor34_tianhuang", 1.0 / ((1 + (n - 1) * base.d_max) * phi.max()))
        )
    else:
        out.append(BoundResult.na("cor34_tianhuang", NOT_SDD))

    if n < 2:
        out.append(BoundResult.na("li_inverse", SMALL_N))
        out.append(BoundResult.na("li_entries", SMALL_N))
        out.append(BoundResult.na("wang_sun", SMALL_N))
        out.append(BoundResult.na("upsilon_t", SMALL_N, t))
        out.append(BoundResult.na("upsilon_tilde_t", SMALL_N, t))
        return out

    k = 4.0 * (n - 1) ** 2
    out.append(BoundResult.of("li_inverse", _pair_lower(alpha, spread, (n - 1) ** 2 * rho_JA**2)))

    if cls.is_sdd and not np.any(np.isnan(base.phi)):
        phi = base.phi
        inv_diag = 1.0 / np.diag(A)
        phi_spread = np.maximum(phi[:, None], phi[None, :]) - np.minimum(
            inv_diag[:, None], inv_diag[None, :]
        )
        F = phi[:, None] + phi[None, :] + _sqrt0(
            phi_spread**2 + k * np.outer(phi, phi) * base.d_max**2
        )
        out.append(BoundResult.of("li_entries", 2.0 / _pair_max(F)))
    else:
        out.append(BoundResult.na("li_entries", NOT_SDD))

    if np.any(np.isnan(ladder.u_max)):
        out.append(BoundResult.na("wang_sun", "u_i undefined (ladder not applicable)"))
    else:
        u = ladder.u_max
        out.append(BoundResult.of("wang_sun", _pair_lower(alpha, spread, (n - 1) ** 2 * np.outer(u, u))))

    pm = ladder.p_max[t]
    if np.any(np.isnan(pm)):
        out.append(BoundResult.na("upsilon_t", "p_i^(t) undefined (ladder not applicable)", t))
    else:
        out.append(
            BoundResult.of("upsilon_t", _pair_lower(alpha, spread, (n - 1) ** 2 * np.outer(pm, pm)), t)
        )

    phi_t = ladder.phi_t[t]
    if not cls.is_sdd:
        out.append(BoundResult.na("upsilon_tilde_t", NOT_SDD, t))
    elif np.any(np.isnan(pm)) or np.any(np.isnan(phi_t)):
        out.append(BoundResult.na("upsilon_tilde_t", "p_i^(t) or phi^(t) undefined", t))
    else:
        inv_diag = 1.0 / np.diag(A)
        psi = np.maximum(phi_t[:, None], phi_t[None, :]) - np.minimum(
            inv_diag[:, None], inv_diag[None, :]
        )
        out.append(
            BoundResult.of(
                "upsilon_tilde_t", _pair_lower(phi_t, psi, (n - 1) ** 2 * np.outer(pm, pm)), t
            )
        )
    return out


@dataclass(frozen=True)
class HadamardUpper:
    tight: Optional[float]
    loose: Optional[float]
    applicable: bool = True
    reason: str = ""

    def __iter__(self):
        return iter((self.tight, self.loose))


def hadamard_upper(A, A_inv, B, ladder: AuxLadder, t: int) -> HadamardUpper:
    """Upper bounds (tight, loose) on rho(B o A^{-1}) for B >= 0.

    ``tight`` is the pairwise bound, ``loose`` the single-index one; for an
    M-matrix A, rho(B o A^{-1}) <= tight <= loose.
    """
    A_inv = as_matrix(A_inv, "A_inv")
    B = as_matrix(B, "B")
    if B.shape != A_inv.shape:
        raise InputError("B and A must have the same order")
    if np.any(B < 0):
        raise InputError("B must be entrywise nonnegative")
    _ladder_level(ladder, t)
    cls = classify(A)
    if not cls.is_m_matrix:
        return HadamardUpper(None, None, False, NOT_M)
    cs, why = _colsum_or_reason(ladder, t)
    if cs is None:
        return HadamardUpper(None, None, False, why)

    alpha = np.diag(A_inv)
    bd = np.diag(B) * alpha
    W = B * ladder.p[t]
    np.fill_diagonal(W, 0.0)
    ws = W.sum(axis=0)
    loose = float(np.max((np.diag(B) + ws) * alpha))
    if ladder.n < 2:
        return HadamardUpper(loose, loose)
    F = 0.5 * (
        bd[:, None] + bd[None, :]
        + _sqrt0((bd[:, None] - bd[None, :]) ** 2 + 4.0 * np.outer(alpha, alpha) * np.outer(ws, ws))
    )
    return HadamardUpper(_pair_max(F), loose)


def full_report(A, t_max: int, tol: float = DEFAULT_TOL, matrix_id: str = "") -> BoundReport:
    """Every bound for t = 1..t_max, with tau(A) and rho(J_A) for comparison.

    Row order: two-sided row-sum family, Jacobi-radius bound, u_i bound,
    pairwise Jacobi-radius bound, upsilon_t, gamma_t, omega_t per t, then the
    entries-only family (Jacobi/d bound, pairwise d bound, upsilon_tilde_t,
    gamma_tilde_t, omega_tilde_t per t). Entries-only rows on a non-SDD matrix
    are kept and marked inapplicable.
    """
    A = as_matrix(A)
    if int(t_max) != t_max or t_max < 1:
        raise InputError("t_max must be an integer >= 1")
    cls = classify(A)
    report = BoundReport(matrix_id=matrix_id, tau=None, t_max=t_max, matrix_class=cls)

    if not cls.is_m_matrix:
        report.rows = [BoundResult.na(m, NOT_M, t) for m, t in _row_layout(t_max)]
        return report

    A_inv = invert(A)
    report.tau = 1.0 / spectral_radius_nonneg(A_inv, tol)
    ladder = build_ladder(A, t_max)
    base = base_quantities(A)
    rho = spectral_radius_nonneg(jacobi_matrix(A), tol)
    report.rho_jacobi = rho

    per_t = {}
    for t in range(1, t_max + 1):
        rows = legacy_bounds(A, A_inv, ladder, base, rho, t, matrix_class=cls)
        rows += [
            gamma(A_inv, ladder, t),
            omega(A_inv, ladder, t),
            gamma_tilde(A, ladder, t, is_sdd=cls.is_sdd),
            omega_tilde(A, ladder, t, is_sdd=cls.is_sdd),
        ]
        for row in rows:
            per_t.setdefault((row.method, row.t), row)
    report.rows = [per_t[key] for key in _row_layout(t_max)]
    return report


def _row_layout(t_max: int) -> list:
    ts = range(1, t_max + 1)
    layout = [
        ("shivakumar_lower", None),
        ("shivakumar_upper_rowsum", None),
        ("shivakumar_upper_diag", None),
        ("shivakumar_inv_lower", None),
        ("shivakumar_inv_upper", None),
        ("th31_tianhuang", None),
        ("wang_sun", None),
        ("li_inverse", None),
    ]
    layout += [("upsilon_t", t) for t in ts]
    layout += [("gamma_t", t) for t in ts]
    layout += [("omega_t", t) for t in ts]
    layout += [("cor34_tianhuang", None), ("li_entries", None)]
    layout += [("upsilon_tilde_t", t) for t in ts]
    layout += [("gamma_tilde_t", t) for t in ts]
    layout += [("omega_tilde_t", t) for t in ts]
    return layout
