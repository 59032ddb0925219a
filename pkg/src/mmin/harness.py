"""Seeded instance generators and the batch property checker.

Random streams come from numpy's PCG64 bit generator keyed by
``[seed, stream]``. PCG64 output is platform independent and each generator
draws in a fixed order, so a given spec always yields the same matrix bit
for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import (
    BoundResult,
    gamma,
    gamma_tilde,
    hadamard_upper,
    legacy_bounds,
    omega,
    omega_tilde,
)
from .matcore import (
    ConvergenceError,
    InputError,
    MMinError,
    classify,
    invert,
    jacobi_matrix,
    spectral_radius_nonneg,
)
from .sequences import base_quantities, build_ladder

__all__ = [
    "FAMILIES",
    "GenSpec",
    "PropertyReport",
    "Failure",
    "gen_sdd_m",
    "gen_ds_inverse",
    "ds_inverse_from_mixture",
    "uniform_ds_matrix",
    "generate",
    "random_specs",
    "check_instance",
    "check_properties",
]

FAMILIES = ("sdd", "ds_inverse", "uniform")

LOWER_SLACK = 1e-8
CHAIN_SLACK = 1e-12
MONO_SLACK = 1e-12
INVERSE_SLACK = 1e-9
HADAMARD_SLACK = 1e-8
DS_ORDER_SLACK = 1e-10
JACOBI_SLACK = 1e-9


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([int(seed), stream]))


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one test matrix.

    ``family`` picks the generator: ``"sdd"`` (:func:`gen_sdd_m`),
    ``"ds_inverse"`` (:func:`gen_ds_inverse` with ``strength = magnitude * (n - 1)``)
    or ``"uniform"`` (:func:`uniform_ds_matrix`, off-diagonal ``-magnitude``).
    """

    n: int
    seed: int
    dominance_margin: float = 0.1
    density: float = 1.0
    magnitude: float = 1.0
    family: str = "sdd"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        if not 0 < self.density <= 1:
            raise InputError("density must lie in (0, 1]")
        if self.dominance_margin <= 0 or self.magnitude <= 0:
            raise InputError("dominance_margin and magnitude must be positive")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")


def gen_sdd_m(spec: GenSpec) -> np.ndarray:
    """Strictly diagonally dominant Z-matrix with row margins >= ``dominance_margin``.

    Draw order: n*n off-diagonal magnitudes, n*n density coins, n margins.
    """
    n = spec.n
    if n < 2:
        raise InputError("gen_sdd_m needs n >= 2")
    rng = _rng(spec.seed)
    mags = spec.magnitude * rng.random((n, n))
    keep = rng.random((n, n)) < spec.density
    margins = spec.dominance_margin * (1.0 + rng.random(n))
    A = -np.where(keep, mags, 0.0)
    np.fill_diagonal(A, 0.0)
    np.fill_diagonal(A, -A.sum(axis=1) + margins)
    return A


def _derangement(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        perm = rng.permutation(n)
        if np.all(perm != np.arange(n)):
            return perm


def ds_inverse_from_mixture(perms, weights, strength: float) -> np.ndarray:
    """A = (s + 1) I - s * sum_k w_k P_k for derangements P_k and convex weights w.

    A e = e and A^T e = e, A is a strictly diagonally dominant M-matrix with
    constant diagonal s + 1, and A^{-1} is doubly stochastic.
    """
    perms = [np.asarray(p) for p in perms]
    w = np.asarray(weights, dtype=float)
    if not perms or len(perms) != len(w):
        raise InputError("need one weight per permutation")
    if np.any(w < 0) or not math.isclose(w.sum(), 1.0, rel_tol=0, abs_tol=1e-12):
        raise InputError("weights must be a convex combination")
    n = len(perms[0])
    P = np.zeros((n, n))
    rows = np.arange(n)
    for perm, wk in zip(perms, w):
        if np.any(perm == rows):
            raise InputError("mixture components must be derangements")
        P[rows, perm] += wk
    A = -strength * P
    np.fill_diagonal(A, strength + 1.0)
    return A


def gen_ds_inverse(n: int, seed: int, strength: float) -> np.ndarray:
    """Random member of the equal-diagonal, doubly-stochastic-inverse family.

    Mixes ``n - 1`` random derangements with Dirichlet(1, ..., 1) weights.
    """
    if n < 3:
        raise InputError("gen_ds_inverse needs n >= 3")
    if strength <= 0:
        raise InputError("strength must be positive")
    rng = _rng(seed)
    perms = [_derangement(rng, n) for _ in range(n - 1)]
    weights = rng.dirichlet(np.ones(n - 1))
    weights /= weights.sum()
    return ds_inverse_from_mixture(perms, weights, strength)


def uniform_ds_matrix(n: int, offdiagonal: float = 1.0) -> np.ndarray:
    """a_ii = 1 + (n - 1) * offdiagonal, a_ij = -offdiagonal: the uniform derangement mixture."""
    shifts = [(np.arange(n) + k) % n for k in range(1, n)]
    return ds_inverse_from_mixture(shifts, np.full(n - 1, 1.0 / (n - 1)), offdiagonal * (n - 1))


def generate(spec: GenSpec) -> np.ndarray:
    if spec.family == "sdd":
        return gen_sdd_m(spec)
    if spec.family == "ds_inverse":
        return gen_ds_inverse(spec.n, spec.seed, spec.magnitude * (spec.n - 1))
    return uniform_ds_matrix(spec.n, spec.magnitude)


def random_specs(
    count: int, seed: int, n_range: tuple = (3, 12), family: str = "sdd", **kwargs
) -> list:
    """``count`` specs with orders drawn uniformly from ``n_range`` (inclusive)."""
    rng = _rng(seed, stream=1)
    lo, hi = n_range
    ns = rng.integers(lo, hi + 1, size=count)
    seeds = rng.integers(0, 2**63, size=count)
    return [GenSpec(n=int(n), seed=int(s), family=family, **kwargs) for n, s in zip(ns, seeds)]


@dataclass(frozen=True)
class Failure:
    prop: str
    spec: Optional[GenSpec]
    detail: str


@dataclass
class PropertyReport:
    trials: int = 0
    failures: list = field(default_factory=list)
    max_gap: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


class _Collector:
    def __init__(self, spec):
        self.spec = spec
        self.failures = []

    def check(self, ok: bool, prop: str, detail) -> None:
        if not ok:
            self.failures.append(Failure(prop, self.spec, detail() if callable(detail) else detail))


def _ladder_chain(ladder, c: _Collector) -> None:
    n = ladder.n
    off = ~np.eye(n, dtype=bool)
    r = np.broadcast_to(ladder.r[None, :], (n, n))
    steps = [("r", r), ("m", ladder.m), ("u(0)", ladder.u[0])]
    for t in range(1, ladder.t_max + 1):
        steps += [(f"p({t})", ladder.p[t]), (f"u({t})", ladder.u[t])]
    c.check(bool(np.all(ladder.r < 1)), "ladder_chain", lambda: f"max r_i = {ladder.r.max()!r} not < 1")
    for (na, X), (nb, Y) in zip(steps, steps[1:]):
        bad = off & ~(X >= Y - CHAIN_SLACK)
        c.check(not bad.any(), "ladder_chain", lambda: f"{na} >= {nb} fails at {np.argwhere(bad)[0].tolist()}")
    last = steps[-1][1]
    c.check(bool(np.all(last[off] >= -CHAIN_SLACK)), "ladder_chain", "negative tail entry")


def _inverse_entry_bounds(A, A_inv, ladder, c: _Collector) -> None:
    alpha = np.diag(A_inv)
    off = ~np.eye(ladder.n, dtype=bool)
    c.check(
        bool(np.all(alpha >= 1.0 / np.diag(A) - CHAIN_SLACK)),
        "inverse_entry_bounds",
        "alpha_ii < 1/a_ii",
    )
    for t in range(1, ladder.t_max + 1):
        # alpha_ji <= p_ji^(t) alpha_ii : column i scaled by alpha_ii
        bad = off & (A_inv > ladder.p[t] * alpha[None, :] + INVERSE_SLACK)
        c.check(not bad.any(), "inverse_entry_bounds", lambda: f"alpha_ji > p_ji alpha_ii at t={t}")
        c.check(
            bool(np.all(alpha <= ladder.phi_t[t] + INVERSE_SLACK)),
            "inverse_entry_bounds",
            lambda: f"alpha_ii > phi_i^({t})",
        )


def _monotone(name: str, values: list, c: _Collector) -> None:
    for t in range(len(values) - 1):
        a, b = values[t], values[t + 1]
        if a is None or b is None:
            continue
        c.check(b >= a - MONO_SLACK, f"monotone_{name}", lambda: f"t={t + 1}: {a!r} -> {b!r}")


def check_instance(
    A,
    t_max: int,
    *,
    spec: Optional[GenSpec] = None,
    doubly_stochastic_family: bool = False,
    rng: Optional[np.random.Generator] = None,
    tol: float = 1e-12,
):
    """Run every property on one matrix; return ``(failures, gap)``.

    ``gap`` is tau minus the best applicable lower bound (0 when tau is
    unavailable). Properties whose hypotheses fail (non-M-matrix, non-SDD)
    are skipped rather than reported.
    """
    c = _Collector(spec)
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    cls = classify(A)
    if not cls.is_m_matrix:
        return c.failures, 0.0

    try:
        A_inv = invert(A)
        tau = 1.0 / spectral_radius_nonneg(A_inv, tol)
        rho_j = spectral_radius_nonneg(jacobi_matrix(A), tol)
    except (ConvergenceError, MMinError) as exc:
        c.check(False, "oracle", f"{type(exc).__name__}: {exc}")
        return c.failures, 0.0

    ladder = build_ladder(A, t_max)
    base = base_quantities(A)

    if cls.is_sdd:
        _ladder_chain(ladder, c)
        _inverse_entry_bounds(A, A_inv, ladder, c)
        c.check(rho_j < 1, "jacobi_radius", lambda: f"rho(J_A) = {rho_j!r} >= 1")

    rows: list = []
    per_t: dict = {}
    for t in range(1, t_max + 1):
        level = legacy_bounds(A, A_inv, ladder, base, rho_j, t, matrix_class=cls)
        if t > 1:
            level = [r for r in level if r.t is not None]
        level += [
            gamma(A_inv, ladder, t),
            omega(A_inv, ladder, t),
            gamma_tilde(A, ladder, t, is_sdd=cls.is_sdd),
            omega_tilde(A, ladder, t, is_sdd=cls.is_sdd),
        ]
        rows += level
        per_t[t] = {r.method: r for r in level}

    best = -math.inf
    for r in rows:
        if not r.applicable:
            continue
        if r.kind == "lower":
            best = max(best, r.value)
            c.check(r.value <= tau + LOWER_SLACK, "soundness", lambda: f"{r.method} t={r.t}: {r.value!r} > tau={tau!r}")
        else:
            c.check(r.value >= tau - LOWER_SLACK, "soundness", lambda: f"{r.method}: {r.value!r} < tau={tau!r}")
    gap = tau - best if best > -math.inf else 0.0

    def series(method):
        return [per_t[t][method].value for t in range(1, t_max + 1)]

    for method in ("gamma_t", "omega_t", "gamma_tilde_t", "omega_tilde_t"):
        _monotone(method, series(method), c)
    for g, o in zip(series("gamma_t"), series("omega_t")):
        if g is not None and o is not None:
            c.check(g >= o - MONO_SLACK, "pair_vs_single_order", lambda: f"gamma {g!r} < omega {o!r}")

    if rng is None:
        rng = _rng(spec.seed if spec is not None else 0, stream=2)
    B = rng.random((n, n))
    rho_b = spectral_radius_nonneg(B * A_inv, tol)
    for t in (1, t_max):
        hu = hadamard_upper(A, A_inv, B, ladder, t)
        if not hu.applicable:
            continue
        c.check(rho_b <= hu.tight + HADAMARD_SLACK, "hadamard_chain", lambda: f"rho={rho_b!r} > tight={hu.tight!r}")
        c.check(hu.tight <= hu.loose + HADAMARD_SLACK, "hadamard_chain", lambda: f"tight={hu.tight!r} > loose={hu.loose!r}")

    if doubly_stochastic_family:
        _equal_diagonal_orders(A, rho_j, per_t, t_max, c)
    return c.failures, gap


def _equal_diagonal_orders(A, rho_j, per_t, t_max, c: _Collector) -> None:
    diag = np.diag(A)
    expect = 1.0 - 1.0 / diag
    c.check(
        bool(np.all(np.abs(rho_j - expect) <= JACOBI_SLACK)),
        "ds_jacobi_radius",
        lambda: f"rho(J_A)={rho_j!r} vs 1 - 1/a_ii={expect[0]!r}",
    )
    s = DS_ORDER_SLACK
    first = per_t[1]
    jac = first["th31_tianhuang"].value
    jac_d = first["cor34_tianhuang"].value
    pair_jac = first["li_inverse"].value
    pair_d = first["li_entries"].value
    for t in range(1, t_max + 1):
        row = per_t[t]
        g, o = row["gamma_t"].value, row["omega_t"].value
        gt, ot = row["gamma_tilde_t"].value, row["omega_tilde_t"].value
        c.check(g is not None and o is not None and g >= o - s and o >= jac - s, "ds_order_a",
                lambda: f"t={t}: gamma={g!r} omega={o!r} jacobi={jac!r}")
        c.check(g is not None and g >= pair_jac - s and pair_jac >= jac - s, "ds_order_b",
                lambda: f"t={t}: gamma={g!r} pair_jacobi={pair_jac!r} jacobi={jac!r}")
        c.check(ot is not None and jac_d is not None and ot >= jac_d - s, "ds_order_c",
                lambda: f"t={t}: omega_tilde={ot!r} vs {jac_d!r}")
        c.check(gt is not None and pair_d is not None and gt >= pair_d - s, "ds_order_d",
                lambda: f"t={t}: gamma_tilde={gt!r} vs {pair_d!r}")


def check_properties(specs, t_max: int, tol: float = 1e-12) -> PropertyReport:
    """Generate every spec and run :func:`check_instance` on it.

    Doubly-stochastic-inverse families (``ds_inverse``, ``uniform``) also get
    the equal-diagonal ordering checks. Failures come back sorted by seed.
    """
    specs = list(specs)
    if not specs:
        raise InputError("specs must be nonempty")
    report = PropertyReport()
    for spec in specs:
        A = generate(spec)
        try:
            failures, gap = check_instance(
                A, t_max, spec=spec, doubly_stochastic_family=spec.family != "sdd", tol=tol
            )
        except MMinError as exc:
            failures, gap = [Failure("oracle", spec, f"{type(exc).__name__}: {exc}")], 0.0
        report.trials += 1
        report.failures.extend(failures)
        report.max_gap = max(report.max_gap, gap)
    report.failures.sort(key=lambda f: (f.spec.seed if f.spec else -1, f.prop))
    return report
