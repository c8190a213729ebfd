import numpy as np
import pytest
from hypothesis import strategies as st

from zenolab.dynamics import RabiModel

ACCEPTANCE_LINES: list[str] = []

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, dim=3):
    re = draw(st.lists(finite, min_size=dim * dim, max_size=dim * dim))
    im = draw(st.lists(finite, min_size=dim * dim, max_size=dim * dim))
    return (np.array(re) + 1j * np.array(im)).reshape(dim, dim)


@st.composite
def hermitian_matrices(draw, dim=3, scale=10.0):
    a = draw(complex_matrices(dim))
    return scale * 0.5 * (a + a.conj().T)


@st.composite
def density_matrices(draw, dim=3):
    a = draw(complex_matrices(dim))
    rho = a @ a.conj().T
    tr = np.trace(rho).real
    if tr < 1e-3:
        # fall back to a valid mixed state rather than rejecting the draw
        return np.eye(dim, dtype=complex) / dim
    rho = rho / tr
    return 0.5 * (rho + rho.conj().T)


rabi_models = st.builds(
    RabiModel,
    omega01=st.floats(0.05, 5.0),
    omega12=st.floats(0.05, 5.0),
    phi01=st.floats(-np.pi, np.pi),
    phi12=st.floats(-np.pi, np.pi),
)


@pytest.fixture
def model():
    return RabiModel.ize_scenario()


@pytest.fixture
def rho_ground():
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = 1.0
    return rho


@pytest.fixture
def grid():
    return np.linspace(0.0, 1.0, 401)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
