import numpy as np
import pytest

from odeig.odt import OrthoDiagDecomp, random_decomp


def suite_instances(count, dims=(2, 3, 4, 5, 6), orders=(3, 4, 5, 6), seed=0):
    """Seeded (n, r, m, seed) tuples covering the requested ranges."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(dims[i % len(dims)])
        m = int(orders[(i // len(dims)) % len(orders)])
        # every third instance is full rank so the r = n cases are always covered
        r = n if i % 3 == 0 else int(rng.integers(1, n + 1))
        out.append((n, r, m, 1000 + i))
    return out


def dense_grad(entries, u):
    """S u^(m-1) via einsum, independent of the library contractions."""
    m = entries.ndim
    letters = "abcdefgh"[:m]
    subscripts = letters + "," + ",".join(letters[1:]) + "->a"
    return np.einsum(subscripts, entries, *([u] * (m - 1)))


@pytest.fixture
def diag_2_8():
    return OrthoDiagDecomp(order=3, u_matrix=np.eye(2), lambdas=[2.0, 8.0])


@pytest.fixture
def diag_unit_m4():
    return OrthoDiagDecomp(order=4, u_matrix=np.eye(2), lambdas=[1.0, 1.0])


@pytest.fixture
def rank_one_5():
    return OrthoDiagDecomp(order=3, u_matrix=np.array([[1.0], [0.0]]), lambdas=[5.0])


@pytest.fixture
def random_instance():
    return random_decomp(4, 3, 4, seed=11)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
