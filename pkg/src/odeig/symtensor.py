"""Dense symmetric tensors and the contractions S u^m, S u^(m-1), S u^(m-2)."""

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .constants import TOL
from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class SymTensor:
    """
    Order-m, dimension-n symmetric tensor stored as a dense n^m array.

    When the tensor was built from a rank-one sum, ``factors`` keeps the
    (weights, vectors) pair so contractions can skip the dense loops.
    """

    entries: np.ndarray
    factors: Optional[tuple] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim < 3:
            raise ValueError(
                f"order must be >= 3 (got {entries.ndim}); the eigenpair formulas divide by m - 2"
            )
        if len(set(entries.shape)) != 1:
            raise DimensionError(f"all modes must share one dimension, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def order(self):
        return self.entries.ndim

    @property
    def dim(self):
        return self.entries.shape[0]

    def dense(self):
        """Same tensor with the factored form dropped."""
        return SymTensor(self.entries)

    @classmethod
    def zeros(cls, n, m):
        return cls(np.zeros((n,) * m))


def from_rank_one_sum(weights, vectors, order):
    """
    Build sum_t w_t v_t^{o m}.

    Each entry is a product over the *sorted* index tuple, so every
    permutation of an index yields a bit-identical value.
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    v = np.asarray(vectors, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    n, r = v.shape
    if w.size != r:
        raise DimensionError(f"{w.size} weights for {r} vectors")
    if order < 3:
        raise ValueError(f"order must be >= 3 (got {order})")
    idx = np.indices((n,) * order).reshape(order, -1)
    idx.sort(axis=0)
    flat = np.zeros(idx.shape[1])
    for t in range(r):
        prod = v[idx[0], t].copy()
        for j in range(1, order):
            prod *= v[idx[j], t]
        flat += w[t] * prod
    return SymTensor(flat.reshape((n,) * order), factors=(w.copy(), v.copy()))


def _check_vector(s, u):
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != s.dim:
        raise DimensionError(f"vector has length {u.size}, tensor dimension is {s.dim}")
    return u


def _use_factors(s, method):
    if method == "dense":
        return False
    if method == "factored":
        if s.factors is None:
            raise ValueError("tensor carries no rank-one factors")
        return True
    if method != "auto":
        raise ValueError(f"unknown contraction method {method!r}")
    return s.factors is not None


def _contract(s, u, times):
    t = s.entries
    for _ in range(times):
        t = t @ u
    return t


def contract_full(s, u, method="auto"):
    """Scalar S u^m."""
    u = _check_vector(s, u)
    if _use_factors(s, method):
        w, v = s.factors
        return float(np.sum(w * (v.T @ u) ** s.order))
    return float(_contract(s, u, s.order))


def contract_grad(s, u, method="auto"):
    """Vector S u^(m-1), entry j = sum s_{j i2..im} u_i2 ... u_im."""
    u = _check_vector(s, u)
    if _use_factors(s, method):
        w, v = s.factors
        return v @ (w * (v.T @ u) ** (s.order - 1))
    return _contract(s, u, s.order - 1)


def contract_hess(s, u, method="auto"):
    """n x n matrix S u^(m-2)."""
    u = _check_vector(s, u)
    if _use_factors(s, method):
        w, v = s.factors
        return (v * (w * (v.T @ u) ** (s.order - 2))) @ v.T
    return _contract(s, u, s.order - 2)


def symmetry_check(s, samples=256, seed=0, tol=None):
    """
    Probe index-permutation invariance.

    Each probe draws a random multi-index and a random permutation of it.
    ``samples=None`` runs the exhaustive check over adjacent transpositions
    (which generate every permutation).
    """
    tol = TOL.symmetry if tol is None else tol
    a = s.entries
    m, n = s.order, s.dim
    if samples is None:
        for j in range(m - 1):
            axes = list(range(m))
            axes[j], axes[j + 1] = axes[j + 1], axes[j]
            if np.max(np.abs(a - a.transpose(axes))) > tol:
                return False
        return True
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        index = tuple(rng.integers(0, n, size=m))
        perm = rng.permutation(m)
        other = tuple(index[p] for p in perm)
        if abs(a[index] - a[other]) > tol:
            return False
    return True


def random_symmetric(n, m, seed=0):
    """Random dense symmetric tensor (normal entries, symmetrized by averaging)."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((n,) * m)
    out = np.zeros_like(raw)
    perms = list(permutations(range(m)))
    for p in perms:
        out += raw.transpose(p)
    return SymTensor(out / len(perms))
