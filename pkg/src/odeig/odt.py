"""Orthogonally diagonalizable decompositions S = sum_i lambda_i u_i^{o m}."""

from dataclasses import dataclass

import numpy as np

from .constants import TOL
from .errors import InvalidDecompositionError, RankDeficiencyError
from .linalg import gram_schmidt, max_abs
from .symtensor import from_rank_one_sum

DEFAULT_LAMBDA_RANGE = (0.5, 10.0)


@dataclass(frozen=True, eq=False)
class OrthoDiagDecomp:
    order: int
    u_matrix: np.ndarray  # n x r, orthonormal columns
    lambdas: np.ndarray  # length r, all positive

    def __post_init__(self):
        u = np.array(self.u_matrix, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        lam = np.array(self.lambdas, dtype=float).reshape(-1)
        if u.ndim != 2 or u.shape[1] != lam.size:
            raise ValueError(
                f"u_matrix shape {u.shape} does not match {lam.size} lambdas"
            )
        u.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "u_matrix", u)
        object.__setattr__(self, "lambdas", lam)

    @property
    def dim(self):
        return self.u_matrix.shape[0]

    @property
    def rank(self):
        return self.u_matrix.shape[1]

    def column(self, i):
        return self.u_matrix[:, i]


def validate(d):
    """List every violated invariant of `d`; an empty list means valid."""
    problems = []
    if d.order < 3:
        problems.append(f"order m={d.order} must be >= 3")
    if d.rank < 1:
        problems.append("rank r must be >= 1")
    if d.rank > d.dim:
        problems.append(f"rank r={d.rank} exceeds dimension n={d.dim}")
    if not np.all(np.isfinite(d.u_matrix)) or not np.all(np.isfinite(d.lambdas)):
        problems.append("non-finite entries")
        return problems
    for i, lam in enumerate(d.lambdas):
        if not lam > 0:
            problems.append(f"nonpositive lambda at index {i + 1} (value {lam!r})")
    if d.rank >= 1:
        err = max_abs(d.u_matrix.T @ d.u_matrix - np.eye(d.rank))
        if err > TOL.orthonormal:
            problems.append(f"columns of u_matrix not orthonormal (max |U^T U - I| = {err:.3e})")
    return problems


def random_decomp(n, r, m, lambda_range=DEFAULT_LAMBDA_RANGE, seed=0):
    """
    Random valid decomposition: Gram-Schmidt of a standard normal n x r
    matrix and lambdas uniform on `lambda_range`.  Deterministic in `seed`.
    """
    lo, hi = lambda_range
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    if m < 3:
        raise ValueError(f"order m must be >= 3, got {m}")
    if not 0 < lo <= hi:
        raise ValueError(f"need 0 < lo <= hi, got ({lo}, {hi})")
    rng = np.random.default_rng(seed)
    for _ in range(10):
        try:
            u = gram_schmidt(rng.standard_normal((n, r)))
            break
        except RankDeficiencyError:
            continue
    else:
        raise RankDeficiencyError("10 consecutive rank-deficient draws")
    lambdas = rng.uniform(lo, hi, size=r)
    return OrthoDiagDecomp(order=m, u_matrix=u, lambdas=lambdas)


def materialize(d):
    """Dense tensor sum_i lambda_i u_i^{o m} (keeps the factored form)."""
    problems = validate(d)
    if problems:
        raise InvalidDecompositionError(problems)
    return from_rank_one_sum(d.lambdas, d.u_matrix, d.order)
