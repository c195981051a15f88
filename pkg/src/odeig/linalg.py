"""
Small dense linear-algebra kernel.

numpy arrays are used for storage only; orthonormalization and the
symmetric eigensolver are implemented here so the stability analysis does
not lean on LAPACK.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import TOL
from .errors import ConvergenceError, DimensionError, RankDeficiencyError


@dataclass(frozen=True)
class SymEigResult:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues
    sweeps: int = 0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def as_matrix(a):
    """Return `a` as a 2-D float array; 1-D input becomes a single column."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array with ndim={arr.ndim}")
    return arr


def max_abs(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def orthonormality_error(q):
    q = as_matrix(q)
    return max_abs(q.T @ q - np.eye(q.shape[1]))


def _project_out(x, basis):
    # two passes of modified Gram-Schmidt
    for _ in range(2):
        for b in basis:
            x = x - (b @ x) * b
    return x


def gram_schmidt(vectors):
    """
    Orthonormalize the columns of `vectors` with modified Gram-Schmidt and
    one reorthogonalization pass.

    :param vectors: n x r matrix (or a single length-n vector)
    :returns: n x r matrix with orthonormal columns spanning the same space
    :raises RankDeficiencyError: if a column is (numerically) dependent on
        the previous ones
    """
    a = as_matrix(vectors)
    basis = []
    for j in range(a.shape[1]):
        col = a[:, j]
        x = _project_out(col.copy(), basis)
        nrm = math.sqrt(float(x @ x))
        if nrm < TOL.rank * max(1.0, float(np.linalg.norm(col))):
            raise RankDeficiencyError(
                f"column {j} is linearly dependent (residual norm {nrm:.3e})"
            )
        basis.append(x / nrm)
    return np.column_stack(basis)


def orthonormal_complement(basis):
    """
    Orthonormal basis of the orthogonal complement of span(basis).

    Canonical basis vectors are appended greedily (largest residual first)
    and orthonormalized against everything kept so far; dependent
    candidates are skipped.
    """
    u = as_matrix(basis)
    n, r = u.shape
    err = orthonormality_error(u)
    if err > TOL.orthonormal:
        raise ValueError(f"basis columns are not orthonormal (max error {err:.3e})")
    if r > n:
        raise DimensionError(f"{r} columns cannot be orthonormal in dimension {n}")

    kept = [u[:, j] for j in range(r)]
    added = []
    candidates = list(range(n))
    while len(added) < n - r:
        best, best_vec, best_norm = None, None, 0.0
        for i in candidates:
            e = np.zeros(n)
            e[i] = 1.0
            x = _project_out(e, kept)
            nrm = float(np.linalg.norm(x))
            if nrm > best_norm:
                best, best_vec, best_norm = i, x, nrm
        if best is None or best_norm < 1e-8:
            raise RankDeficiencyError("could not extend basis to full dimension")
        candidates.remove(best)
        q = best_vec / best_norm
        q = _project_out(q, kept)
        q /= np.linalg.norm(q)
        kept.append(q)
        added.append(q)
    if not added:
        return np.zeros((n, 0))
    return np.column_stack(added)


def projector_complement(u, n=None):
    """I_n - u u^T for a unit vector u."""
    u = np.asarray(u, dtype=float).reshape(-1)
    if n is None:
        n = u.size
    if u.size != n:
        raise DimensionError(f"vector has length {u.size}, expected {n}")
    nrm = float(np.linalg.norm(u))
    if abs(nrm - 1.0) > TOL.unit_norm:
        raise ValueError(f"u must be a unit vector (norm {nrm!r})")
    return np.eye(n) - np.outer(u, u)


def sym_eig(a, tol=None, max_sweeps=None):
    """
    Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the largest off-diagonal magnitude drops to
    ``tol * max(1, max|a_ij|)``.  Eigenvalues come back in descending order.
    """
    tol = TOL.jacobi_offdiag if tol is None else tol
    max_sweeps = TOL.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    a = np.array(as_matrix(a), dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    asym = max_abs(a - a.T)
    if asym > 1e-10:
        raise ValueError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = tol * max(1.0, max_abs(a))

    def off():
        return max_abs(a - np.diag(np.diag(a))) if n > 1 else 0.0

    sweeps = 0
    while off() > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off():.3e})"
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-18 * abs(diff):
                    # small-angle limit; avoids overflow in theta
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return SymEigResult(eigenvalues=w[order], eigenvectors=v[:, order], sweeps=sweeps)
