"""
Second-order analysis of eigenpairs of max S u^m subject to u^T u = 1.

For a pair built from k selected columns the projected Hessian
M = (I - u u^T) H (I - u u^T) has the spectrum
{-lambda x (n-k), (m-2) lambda x (k-1), 0}, which makes the label a
function of k alone: k = 1 is an isolated local max, k = n an isolated
local min, anything in between a saddle.  `classify` computes the
spectrum numerically and checks it against that rule.
"""

from dataclasses import dataclass, field

import numpy as np

from .constants import TOL
from .errors import IntegrityError
from .linalg import SymEigResult, orthonormal_complement, projector_complement, sym_eig
from .symtensor import contract_grad, contract_hess

LOCAL_MAX = "isolated-local-max"
SADDLE = "saddle"
LOCAL_MIN = "isolated-local-min"
LABELS = (LOCAL_MAX, SADDLE, LOCAL_MIN)

# stability vocabulary used in the SS-HOPM literature
STABILITY_ALIASES = {
    LOCAL_MAX: "negative-stable",
    SADDLE: "unstable",
    LOCAL_MIN: "positive-stable",
}


@dataclass(frozen=True)
class SpectrumPrediction:
    lam: float
    order: int
    dim: int
    k: int

    @property
    def neg_count(self):
        return self.dim - self.k

    @property
    def pos_count(self):
        return self.k - 1

    @property
    def zero_count(self):
        return 1

    def values(self):
        """Predicted spectrum, sorted descending."""
        vals = (
            [(self.order - 2) * self.lam] * self.pos_count
            + [0.0]
            + [-self.lam] * self.neg_count
        )
        return np.array(vals)


@dataclass
class StabilityReport:
    hessian: np.ndarray
    projected: np.ndarray
    computed_spectrum: SymEigResult
    predicted: SpectrumPrediction
    classification: str
    spectrum_label: str
    spectrum_match_error: float
    issues: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.issues


def _unpack(pair):
    if hasattr(pair, "eigenvector"):
        return float(pair.eigenvalue), np.asarray(pair.eigenvector, dtype=float)
    lam, u = pair
    return float(lam), np.asarray(u, dtype=float)


def hessian(s, pair):
    """H(u) = (m-1) S u^(m-2) - lambda I for an eigenpair of `s`."""
    lam, u = _unpack(pair)
    res = float(np.max(np.abs(contract_grad(s, u, method="dense") - lam * u)))
    if res > TOL.hessian_precondition:
        raise ValueError(f"not an eigenpair of the tensor (residual {res:.3e})")
    h = (s.order - 1) * contract_hess(s, u) - lam * np.eye(s.dim)
    return 0.5 * (h + h.T)


def projected_hessian(h, u):
    p = projector_complement(u)
    mat = p @ np.asarray(h, dtype=float) @ p
    return 0.5 * (mat + mat.T)


def predicted_spectrum(pair, m, n):
    return SpectrumPrediction(lam=float(pair.eigenvalue), order=m, dim=n, k=pair.k)


def label_from_k(k, n):
    if k == 1:
        return LOCAL_MAX
    if k == n:
        return LOCAL_MIN
    return SADDLE


def zero_tolerance(lam):
    return TOL.spectrum * max(1.0, abs(lam))


def label_from_spectrum(eigenvalues, lam):
    """
    Label from the sign pattern of M's spectrum.

    Exactly one eigenvalue must sit at the structural zero; the remaining
    n - 1 are P's spectrum and must be strictly signed.  Returns
    (label, issues).
    """
    tol = zero_tolerance(lam)
    ev = np.asarray(eigenvalues, dtype=float)
    zero = np.abs(ev) <= tol
    if zero.sum() != 1:
        return None, [f"expected exactly one zero eigenvalue, found {int(zero.sum())}"]
    rest = ev[~zero]
    if np.all(rest < -tol):
        return LOCAL_MAX, []
    if np.all(rest > tol):
        return LOCAL_MIN, []
    return SADDLE, []


def classify(s, pair):
    """
    Build H and M, diagonalize M by Jacobi and label the pair.

    Disagreement between the k-based label and the spectrum-based label is
    recorded in ``issues``; it is never resolved silently.
    """
    lam, u = _unpack(pair)
    n = s.dim
    h = hessian(s, pair)
    mat = projected_hessian(h, u)
    eig = sym_eig(mat)
    pred = predicted_spectrum(pair, s.order, n)
    err = float(np.max(np.abs(eig.eigenvalues - pred.values())))
    k_label = label_from_k(pair.k, n)
    spec_label, issues = label_from_spectrum(eig.eigenvalues, lam)
    if spec_label is not None and spec_label != k_label:
        issues.append(f"k-rule says {k_label}, spectrum says {spec_label}")
    if err > zero_tolerance(lam):
        issues.append(f"spectrum deviates from prediction by {err:.3e}")
    return StabilityReport(
        hessian=h,
        projected=mat,
        computed_spectrum=eig,
        predicted=pred,
        classification=k_label,
        spectrum_label=spec_label,
        spectrum_match_error=err,
        issues=issues,
    )


def classify_strict(s, pair):
    report = classify(s, pair)
    if not report.ok:
        raise IntegrityError("; ".join(report.issues))
    return report


def verify_tangent_equivalence(s, pair):
    """
    Distance between eig(Q2^T H Q2) and the nonzero slots of eig(M), where
    Q2 spans the orthogonal complement of u.
    """
    lam, u = _unpack(pair)
    n = s.dim
    if n < 2:
        raise ValueError("the tangent space is empty for n = 1")
    h = hessian(s, pair)
    q2 = orthonormal_complement(u)
    p = q2.T @ h @ q2
    p_eigs = sym_eig(0.5 * (p + p.T)).eigenvalues
    m_eigs = sym_eig(projected_hessian(h, u)).eigenvalues
    # M carries one extra zero, in the direction of u itself
    expected = np.sort(np.append(p_eigs, 0.0))
    return float(np.max(np.abs(np.sort(m_eigs) - expected)))
