"""
Closed-form real Z-eigenpairs of an orthogonally diagonalizable tensor.

Every eigenvector is a normalized combination sum_{i in A} c_i u_i of the
decomposition columns over a nonempty index set A, with raw coefficients
(1/lambda_i)^(1/(m-2)).  Only real roots are materialized: one per index
for odd m, two (+/-) for even m.  Complex classes are only counted.
"""

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import NamedTuple, Optional

import numpy as np

from .constants import TOL
from .errors import InvalidDecompositionError
from .odt import materialize, validate
from .symtensor import contract_grad

MAX_ENUM_RANK = 20


@dataclass(frozen=True)
class IndexSelection:
    """Sorted, nonempty set of 0-based column indices."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValueError("index selection must be nonempty")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate indices in {idx}")
        if any(i < 0 for i in idx):
            raise ValueError(f"negative index in {idx}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @property
    def k(self):
        return len(self.indices)

    @property
    def labels(self):
        """1-based indices, as used in reports."""
        return tuple(i + 1 for i in self.indices)

    def check_rank(self, r):
        if self.indices[-1] >= r:
            raise ValueError(f"index {self.indices[-1]} out of range for rank {r}")


class Coefficients(NamedTuple):
    raw: np.ndarray
    normalizer: float
    coeffs: np.ndarray


@dataclass(frozen=True, eq=False)
class Eigenpair:
    eigenvalue: float
    eigenvector: np.ndarray
    selection: IndexSelection
    raw_coeffs: np.ndarray
    normalizer: float
    coeffs: np.ndarray
    sign_pattern: Optional[tuple] = None
    residual: float = float("nan")

    @property
    def k(self):
        return self.selection.k

    @property
    def signs(self):
        return self.sign_pattern if self.sign_pattern is not None else (1,) * self.k


@dataclass
class EnumerationReport:
    pairs: list
    order: int
    dim: int
    rank: int
    complex_class_count: int
    bound: int
    meta: dict = field(default_factory=dict)

    @property
    def real_class_count(self):
        return len(self.pairs)

    @property
    def max_residual(self):
        return max((p.residual for p in self.pairs), default=0.0)


def _check_order(m):
    if int(m) != m or m < 3:
        raise ValueError(f"order m must be an integer >= 3, got {m!r}")


def coefficients_for(selection, lambdas, m, sign_pattern=None):
    """
    Raw coefficients s_i (1/lambda_i)^(1/(m-2)), their norm l, and the
    normalized coefficients c_i = raw_i / l, over the selected indices.
    """
    _check_order(m)
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    selection.check_rank(lambdas.size)
    lam = lambdas[list(selection.indices)]
    if np.any(lam <= 0):
        bad = [i + 1 for i, x in zip(selection.indices, lam) if x <= 0]
        raise ValueError(f"nonpositive lambda at index {bad}")
    if sign_pattern is None:
        signs = np.ones(selection.k)
    else:
        if m % 2 == 1 and any(s != 1 for s in sign_pattern):
            raise ValueError("sign patterns only apply to even order; odd m has a single real root")
        signs = np.asarray(sign_pattern, dtype=float)
        if signs.size != selection.k or not np.all(np.abs(signs) == 1):
            raise ValueError(f"sign pattern {sign_pattern!r} must be {selection.k} entries of +/-1")
    raw = signs * lam ** (-1.0 / (m - 2))
    l = float(np.sqrt(np.sum(raw * raw)))
    return Coefficients(raw=raw, normalizer=l, coeffs=raw / l)


def assemble_eigenpair(d, selection, sign_pattern=None, tensor=None):
    """
    Eigenpair (1/l^(m-2), U c) for the given selection and signs.

    The residual ||S u^(m-1) - lambda u||_max is measured against the dense
    entries of `tensor` (materialized from `d` when not supplied).
    """
    selection.check_rank(d.rank)
    m = d.order
    co = coefficients_for(selection, d.lambdas, m, sign_pattern)
    c = np.zeros(d.rank)
    c[list(selection.indices)] = co.coeffs
    u = d.u_matrix @ c
    lam = 1.0 / co.normalizer ** (m - 2)
    if tensor is None:
        tensor = materialize(d)
    residual = float(np.max(np.abs(contract_grad(tensor, u, method="dense") - lam * u)))
    return Eigenpair(
        eigenvalue=lam,
        eigenvector=u,
        selection=selection,
        raw_coeffs=co.raw,
        normalizer=co.normalizer,
        coeffs=co.coeffs,
        sign_pattern=tuple(int(s) for s in sign_pattern) if sign_pattern is not None else None,
        residual=residual,
    )


def canonical_sign_patterns(k, m):
    """Sign patterns for one representative per real class, binary order."""
    if m % 2 == 1:
        return [None]
    return [p for p in product((1, -1), repeat=k) if p[0] == 1]


def iter_selections(r):
    for k in range(1, r + 1):
        for idx in combinations(range(r), k):
            yield IndexSelection(idx)


def enumerate_real(d, allow_large=False, tensor=None):
    """One eigenpair per real equivalence class, ordered by (k, A, signs)."""
    problems = validate(d)
    if problems:
        raise InvalidDecompositionError(problems)
    if d.rank > MAX_ENUM_RANK and not allow_large:
        raise ValueError(
            f"rank {d.rank} > {MAX_ENUM_RANK}: enumeration is exponential; pass allow_large=True"
        )
    if tensor is None:
        tensor = materialize(d)
    pairs = []
    for sel in iter_selections(d.rank):
        for signs in canonical_sign_patterns(sel.k, d.order):
            pairs.append(assemble_eigenpair(d, sel, signs, tensor=tensor))
    pairs.sort(key=lambda p: (p.k, p.selection.indices, tuple(s < 0 for s in p.signs)))
    return EnumerationReport(
        pairs=pairs,
        order=d.order,
        dim=d.dim,
        rank=d.rank,
        complex_class_count=count_complex_classes(d.order, d.rank),
        bound=theoretical_bound(d.order, d.dim),
    )


def _class_formula(m, x, name):
    if int(m) != m or int(x) != x:
        raise TypeError("counts need integer arguments")
    m, x = int(m), int(x)
    _check_order(m)
    if x < 1:
        raise ValueError(f"{name} must be >= 1, got {x}")
    num = (m - 1) ** x - 1
    q, rem = divmod(num, m - 2)
    assert rem == 0, "(m-1)^x - 1 is always divisible by m-2"
    return q


def count_complex_classes(m, r):
    """((m-1)^r - 1)/(m-2): eigenpair classes over C for rank r."""
    return _class_formula(m, r, "rank r")


def theoretical_bound(m, n):
    """((m-1)^n - 1)/(m-2): upper bound on eigenpair classes in dimension n."""
    return _class_formula(m, n, "dimension n")


def real_class_count(m, r):
    """
    Number of real classes: 2^r - 1 for odd m, (3^r - 1)/2 for even m.

    Derived by restricting the complex root count to real roots (one per
    index for odd m, two for even m) and identifying u with -u.
    """
    _check_order(m)
    if r < 1:
        raise ValueError(f"rank r must be >= 1, got {r}")
    if m % 2 == 1:
        return 2 ** r - 1
    return (3 ** r - 1) // 2
