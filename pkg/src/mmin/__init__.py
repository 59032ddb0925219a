"""Certified lower bounds for the minimum eigenvalue of nonsingular M-matrices.

The minimum eigenvalue is ``tau(A) = 1 / rho(A^{-1})``. The bound sequences
``gamma_t``, ``omega_t``, ``gamma_tilde_t`` and ``omega_tilde_t`` sit next to
older closed-form bounds, and a Perron root oracle supplies the exact value.
"""

from .bounds import (
    BoundReport,
    BoundResult,
    full_report,
    gamma,
    gamma_tilde,
    hadamard_upper,
    legacy_bounds,
    omega,
    omega_tilde,
)
from .fixtures import fixture
from .harness import GenSpec, check_properties, gen_ds_inverse, gen_sdd_m
from .matcore import (
    ConvergenceError,
    InputError,
    MatrixClass,
    MMinError,
    SingularMatrixError,
    classify,
    hadamard,
    invert,
    is_doubly_stochastic,
    jacobi_matrix,
    spectral_radius_nonneg,
    tau_oracle,
)
from .sequences import AuxLadder, BaseQuantities, base_quantities, build_ladder

__version__ = "0.1.0"
