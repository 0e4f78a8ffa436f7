import numpy as np
import pytest

from fermirep.basis import enumerate_basis
from fermirep.operators import HermitianOperator, WaveFunction

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_geminal(rng, n, real=False):
    d = n * (n - 1) // 2
    z = rng.normal(size=d) + (0 if real else 1j * rng.normal(size=d))
    return WaveFunction(enumerate_basis(n, 2), z / np.linalg.norm(z))


def random_state(rng, n, p):
    b = enumerate_basis(n, p)
    z = rng.normal(size=b.size) + 1j * rng.normal(size=b.size)
    return WaveFunction(b, z / np.linalg.norm(z))


def random_hermitian(rng, n, p):
    b = enumerate_basis(n, p)
    a = rng.normal(size=(b.size, b.size)) + 1j * rng.normal(size=(b.size, b.size))
    return HermitianOperator(b, (a + a.conj().T) / 2)


def random_density(rng, n, p, rank=None):
    b = enumerate_basis(n, p)
    k = b.size if rank is None else rank
    a = rng.normal(size=(b.size, k)) + 1j * rng.normal(size=(b.size, k))
    m = a @ a.conj().T
    from fermirep.operators import DensityOperator
    return DensityOperator(b, m / np.trace(m).real)
