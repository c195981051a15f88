"""
Exit criteria, one test per criterion at its pinned tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(and to stdout when this file is run as a script).
"""

import time
from itertools import combinations, product
from math import comb

import numpy as np
import pytest

from odeig.enumeration import enumerate_real, real_class_count, theoretical_bound
from odeig.odt import materialize, random_decomp
from odeig.oracle import discover, fd_gradient_check, fd_hessian_check
from odeig.stability import LOCAL_MAX, LOCAL_MIN, SADDLE, classify, verify_tangent_equivalence
from odeig.symtensor import contract_full

from conftest import ACCEPTANCE_LINES, dense_grad, suite_instances

RESIDUAL_TOL = 1e-10
SPECTRUM_REL_TOL = 1e-8
TANGENT_EQUIV_TOL = 1e-8
MATCH_TOL = 1e-6
FD_GRAD_TOL = 1e-6
FD_HESS_TOL = 1e-4


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def suite():
    """50 seeded instances (n in 2..6, r in 1..n, m in 3..6), enumerated and classified."""
    t0 = time.perf_counter()
    cases = []
    for n, r, m, seed in suite_instances(50):
        d = random_decomp(n, r, m, seed=seed)
        tensor = materialize(d).dense()
        report = enumerate_real(d, tensor=tensor)
        cases.append((d, tensor, report))
    enum_seconds = time.perf_counter() - t0
    for d, tensor, report in cases:
        report.meta["stability"] = [classify(tensor, p) for p in report.pairs]
    return cases, enum_seconds


def test_suite_coverage(suite):
    cases, _ = suite
    ns = {d.dim for d, _, _ in cases}
    ms = {d.order for d, _, _ in cases}
    assert len(cases) == 50
    assert ns == {2, 3, 4, 5, 6} and ms == {3, 4, 5, 6}
    assert any(d.rank == d.dim for d, _, _ in cases) and any(d.rank < d.dim for d, _, _ in cases)


def test_criterion_1_residuals(suite):
    cases, seconds = suite
    worst = 0.0
    for d, tensor, report in cases:
        for p in report.pairs:
            # recomputed here with an einsum contraction, independent of the library path
            g = dense_grad(tensor.entries, p.eigenvector)
            worst = max(worst, float(np.max(np.abs(g - p.eigenvalue * p.eigenvector))))
    total = sum(len(r.pairs) for _, _, r in cases)
    ok = worst <= RESIDUAL_TOL and seconds < 60
    record("1 eigenpair residual", ok,
           f"{total} pairs, max residual {worst:.2e} (tol {RESIDUAL_TOL:g}), {seconds:.2f}s (< 60s)")
    assert ok


def _independent_real_count(d, tensor):
    """All 2^k sign patterns per subset, deduplicated modulo u ~ -u."""
    m = d.order
    kept = []
    for k in range(1, d.rank + 1):
        for A in combinations(range(d.rank), k):
            for signs in (product((1, -1), repeat=k) if m % 2 == 0 else [(1,) * k]):
                raw = np.array([s * d.lambdas[i] ** (-1.0 / (m - 2)) for s, i in zip(signs, A)])
                u = d.u_matrix[:, list(A)] @ raw
                u /= np.linalg.norm(u)
                if not any(min(np.linalg.norm(u - v), np.linalg.norm(u + v)) < 1e-8 for v in kept):
                    kept.append(u)
    return len(kept)


def test_criterion_2_counting(suite):
    cases, _ = suite
    failures = []
    full_rank = 0
    for d, tensor, report in cases:
        m, n, r = d.order, d.dim, d.rank
        formula_real = 2 ** r - 1 if m % 2 else (3 ** r - 1) // 2
        if not (report.real_class_count == formula_real == real_class_count(m, r)
                == _independent_real_count(d, tensor)):
            failures.append(f"real count m={m} r={r}")
        combos = sum(comb(r, k) * (m - 2) ** k for k in range(1, r + 1))
        if not (report.complex_class_count * (m - 2) == combos
                and report.complex_class_count == ((m - 1) ** r - 1) // (m - 2)):
            failures.append(f"complex count m={m} r={r}")
        if r == n:
            full_rank += 1
            if report.complex_class_count != theoretical_bound(m, n) or report.bound != theoretical_bound(m, n):
                failures.append(f"bound m={m} n={n}")
    ok = not failures
    record("2 counting", ok,
           f"{len(cases)} instances exact ({full_rank} with r = n reach M(m,n))"
           + ("" if ok else f"; failures: {failures}"))
    assert ok, failures


def test_criterion_3_spectrum(suite):
    cases, _ = suite
    worst_ratio = 0.0
    count = 0
    for d, tensor, report in cases:
        for p, st in zip(report.pairs, report.meta["stability"]):
            predicted = np.sort(st.predicted.values())
            computed = np.sort(st.computed_spectrum.eigenvalues)
            err = float(np.max(np.abs(predicted - computed)))
            worst_ratio = max(worst_ratio, err / (SPECTRUM_REL_TOL * max(1.0, p.eigenvalue)))
            count += 1
    ok = worst_ratio <= 1.0
    record("3 spectrum reproduction", ok,
           f"{count} pairs, worst error / (1e-8 max(1, lambda)) = {worst_ratio:.2e}")
    assert ok


def test_criterion_4_classification(suite):
    cases, _ = suite
    failures = []
    integrity = 0
    for d, tensor, report in cases:
        m, n, r = d.order, d.dim, d.rank
        labels = [st.classification for st in report.meta["stability"]]
        integrity += sum(not st.ok for st in report.meta["stability"])
        # the computed-spectrum rule must reproduce every label independently
        if any(st.spectrum_label != st.classification for st in report.meta["stability"]):
            failures.append(f"spectrum/k mismatch m={m} n={n} r={r}")
        if labels.count(LOCAL_MAX) != r:
            failures.append(f"max count m={m} n={n} r={r}")
        mins = [p for p, lab in zip(report.pairs, labels) if lab == LOCAL_MIN]
        if r < n and mins:
            failures.append(f"min present with r < n (m={m} n={n} r={r})")
        if r == n:
            # one index set A = {1..n}: a single pair for odd m; for even m its
            # 2^(n-1) canonical sign classes (for n = 2, (1,1)/sqrt2 and (1,-1)/sqrt2)
            sets = {p.selection.indices for p in mins}
            expected = 1 if m % 2 else 2 ** (n - 1)
            if n > 1 and (sets != {tuple(range(n))} or len(mins) != expected):
                failures.append(f"min classes m={m} n={n}: {len(mins)} (expected {expected})")
        rest = [lab for p, lab in zip(report.pairs, labels) if 1 < p.k < n]
        if any(lab != SADDLE for lab in rest):
            failures.append(f"non-saddle with 1 < k < n (m={m} n={n} r={r})")
    ok = not failures and integrity == 0
    record("4 classification totals", ok,
           f"{len(cases)} instances, {integrity} integrity failures"
           + ("" if ok else f"; failures: {failures}"))
    assert ok, failures


def test_criterion_5_tangent_equivalence(suite):
    cases, _ = suite
    worst = max(verify_tangent_equivalence(tensor, p) for d, tensor, report in cases for p in report.pairs)
    ok = worst <= TANGENT_EQUIV_TOL
    record("5 projected-Hessian equivalence", ok, f"max |eig(P) u {{0}} - eig(M)| = {worst:.2e}")
    assert ok


def test_criterion_6_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    unmatched = 0
    shortfalls = []
    instances = 0
    for n in (2, 3, 4, 5):
        for m in (3, 4):
            for rep_i in range(2):
                r = n if rep_i == 0 else int(rng.integers(1, n + 1))
                seed = 500 + 10 * n + m + 100 * rep_i
                d = random_decomp(n, r, m, seed=seed)
                report = discover(d, restarts=200, seed=seed, shift=1.0 + float(d.lambdas.max()))
                unmatched += len(report.unmatched_discovered)
                if report.coverage != 1.0:
                    shortfalls.append((n, r, m, report.coverage))
                instances += 1
    seconds = time.perf_counter() - t0
    ok = unmatched == 0 and not shortfalls and seconds < 120
    record("6 oracle soundness/completeness", ok,
           f"{instances} instances, {unmatched} unmatched, shortfalls {shortfalls}, {seconds:.1f}s (< 120s)")
    assert ok


def test_criterion_7_derivatives():
    rng = np.random.default_rng(77)
    worst_g = worst_h = 0.0
    for probe in range(20):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(3, 6))
        r = int(rng.integers(1, n + 1))
        s = materialize(random_decomp(n, r, m, seed=900 + probe)).dense()
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        worst_g = max(worst_g, fd_gradient_check(s, u, 1e-5))
        lam = abs(contract_full(s, u)) + 0.5
        worst_h = max(worst_h, fd_hessian_check(s, (lam, u), 1e-4))
    ok = worst_g <= FD_GRAD_TOL and worst_h <= FD_HESS_TOL
    record("7 derivative checks", ok,
           f"20 probes, gradient dev {worst_g:.2e} (<= 1e-6), Hessian dev {worst_h:.2e} (<= 1e-4)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
