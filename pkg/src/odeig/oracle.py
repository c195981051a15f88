"""
Independent numerical checks.

The power-method oracle works on dense tensor entries only and never sees
the decomposition, so it cannot inherit mistakes from the closed form.
"""

from dataclasses import dataclass, field

import numpy as np

from .constants import TOL
from .errors import ZeroUpdateError
from .odt import materialize
from .symtensor import contract_full, contract_grad, contract_hess

DEFAULT_MAX_ITERS = 5000


@dataclass
class IterationTrace:
    start_vector: np.ndarray
    shift: float
    iterates: int
    eigenvalue: float
    eigenvector: np.ndarray
    converged: bool
    residual: float
    objective: list = field(default_factory=list)

    @property
    def final_pair(self):
        return self.eigenvalue, self.eigenvector


@dataclass
class Match:
    discovered: int
    enumerated: int
    distance: float


@dataclass
class MatchReport:
    discovered: list  # (lambda, u) tuples, deduplicated
    matched: list
    unmatched_discovered: list
    coverage: float
    restarts: int
    shift: float
    converged_runs: int
    traces: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.unmatched_discovered and self.coverage == 1.0


def _residual(g, lam, u):
    return float(np.max(np.abs(g - lam * u)))


def shifted_power_iterate(s, start, shift, max_iters=DEFAULT_MAX_ITERS, tol=None):
    """
    Shifted symmetric higher-order power iteration.

    u <- normalize(S u^(m-1) + shift u), lambda = u^T S u^(m-1); stops when
    ||S u^(m-1) - lambda u||_max <= tol.
    """
    tol = TOL.oracle_residual if tol is None else tol
    if shift < 0:
        raise ValueError("shift must be nonnegative for maximization")
    u = np.asarray(start, dtype=float).reshape(-1)
    if abs(np.linalg.norm(u) - 1.0) > TOL.unit_norm:
        raise ValueError("start vector must have unit norm")
    start_vec = u.copy()
    objective = []
    it = 0
    while True:
        g = contract_grad(s, u, method="dense")
        lam = float(u @ g)
        objective.append(lam)
        res = _residual(g, lam, u)
        if res <= tol or it >= max_iters:
            break
        x = g + shift * u
        nrm = np.linalg.norm(x)
        if nrm == 0.0:
            raise ZeroUpdateError(f"update vanished at iteration {it}")
        u = x / nrm
        it += 1
    return IterationTrace(
        start_vector=start_vec,
        shift=float(shift),
        iterates=it,
        eigenvalue=lam,
        eigenvector=u,
        converged=res <= tol,
        residual=res,
        objective=objective,
    )


def pair_distance(lam_d, u_d, lam_e, u_e, m):
    """
    Distance between pairs modulo u ~ -u (lambda picks up (-1)^(m-2)).
    Returns max(vector distance, eigenvalue distance) for the better sign.
    """
    best = np.inf
    for t in (1.0, -1.0):
        du = float(np.linalg.norm(u_d - t * u_e))
        dl = abs(lam_d - t ** (m - 2) * lam_e)
        best = min(best, max(du, dl))
    return best


def discover(d, restarts=200, seed=0, shift=None, enumerated=None, starts=None,
             max_iters=DEFAULT_MAX_ITERS, keep_traces=False):
    """
    Run the oracle from random unit starts and match what it finds against
    the enumerated eigenpairs.

    :param enumerated: list of objects with ``eigenvalue``, ``eigenvector``
        and ``k``; computed with `enumerate_real` if omitted
    :param starts: explicit start vectors, used instead of random ones
    """
    from .enumeration import enumerate_real

    tensor = materialize(d).dense()
    m, n = d.order, d.dim
    if shift is None:
        shift = 1.0 + float(np.max(d.lambdas))
    if enumerated is None:
        enumerated = enumerate_real(d).pairs
    if starts is None:
        rng = np.random.default_rng(seed)
        starts = []
        for _ in range(restarts):
            x = rng.standard_normal(n)
            starts.append(x / np.linalg.norm(x))
    else:
        starts = [np.asarray(x, dtype=float) / np.linalg.norm(x) for x in starts]

    traces = []
    discovered = []
    for x in starts:
        try:
            tr = shifted_power_iterate(tensor, x, shift, max_iters=max_iters)
        except ZeroUpdateError:
            continue
        traces.append(tr)
        if not tr.converged:
            continue
        if any(pair_distance(tr.eigenvalue, tr.eigenvector, lam, u, m) < TOL.oracle_dedup
               for lam, u in discovered):
            continue
        discovered.append((tr.eigenvalue, tr.eigenvector))

    matched, unmatched = [], []
    for i, (lam, u) in enumerate(discovered):
        dists = [pair_distance(lam, u, e.eigenvalue, np.asarray(e.eigenvector), m)
                 for e in enumerated]
        j = int(np.argmin(dists)) if dists else -1
        if j >= 0 and dists[j] <= TOL.oracle_match:
            matched.append(Match(discovered=i, enumerated=j, distance=dists[j]))
        else:
            unmatched.append((lam, u))

    basic = [j for j, e in enumerate(enumerated) if e.k == 1]
    hit = {mt.enumerated for mt in matched}
    coverage = sum(j in hit for j in basic) / len(basic) if basic else 1.0
    return MatchReport(
        discovered=discovered,
        matched=matched,
        unmatched_discovered=unmatched,
        coverage=coverage,
        restarts=len(starts),
        shift=float(shift),
        converged_runs=sum(t.converged for t in traces),
        traces=traces if keep_traces else [],
    )


def fd_gradient_check(s, u, step=1e-5):
    """Max deviation between central differences of S u^m and m S u^(m-1)."""
    if not 1e-7 <= step <= 1e-3:
        raise ValueError("step must lie in [1e-7, 1e-3]")
    u = np.asarray(u, dtype=float).reshape(-1)
    m = s.order
    fd = np.empty_like(u)
    for i in range(u.size):
        e = np.zeros_like(u)
        e[i] = step
        fd[i] = (contract_full(s, u + e, method="dense")
                 - contract_full(s, u - e, method="dense")) / (2 * step)
    return float(np.max(np.abs(fd - m * contract_grad(s, u, method="dense"))))


def fd_hessian_check(s, pair, step=1e-4):
    """
    Max deviation between (m-1) S u^(m-2) - lambda I and second central
    differences of the Lagrangian L(u, lambda) = S u^m / m - lambda (u^T u - 1) / 2.
    """
    if not 1e-7 <= step <= 1e-3:
        raise ValueError("step must lie in [1e-7, 1e-3]")
    if hasattr(pair, "eigenvector"):
        lam, u = float(pair.eigenvalue), np.asarray(pair.eigenvector, dtype=float)
    else:
        lam, u = float(pair[0]), np.asarray(pair[1], dtype=float)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    m, n = s.order, s.dim

    def lagrangian(x):
        return contract_full(s, x, method="dense") / m - 0.5 * lam * (x @ x - 1.0)

    fd = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = step
            ej[j] = step
            val = (lagrangian(u + ei + ej) - lagrangian(u + ei - ej)
                   - lagrangian(u - ei + ej) + lagrangian(u - ei - ej)) / (4 * step * step)
            fd[i, j] = fd[j, i] = val
    exact = (m - 1) * contract_hess(s, u, method="dense") - lam * np.eye(n)
    return float(np.max(np.abs(fd - exact)))
