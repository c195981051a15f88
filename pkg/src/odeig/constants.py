"""Numerical tolerances shared by the library and its tests."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    orthonormal: float = 1e-10
    rank: float = 1e-12
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100
    reconstruction: float = 1e-9
    symmetry: float = 1e-12
    unit_norm: float = 1e-10
    eigen_residual: float = 1e-10
    hessian_precondition: float = 1e-8
    spectrum: float = 1e-8
    oracle_residual: float = 1e-9
    oracle_match: float = 1e-6
    oracle_dedup: float = 1e-5


TOL = Tolerances()
