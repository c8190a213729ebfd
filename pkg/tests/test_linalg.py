import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zenolab.dynamics import RabiModel, rwa_hamiltonian
from zenolab.errors import ValidationError
from zenolab.linalg import (
    Tolerances,
    check_density,
    hermitian_propagator,
    require_density,
    unitarity_defect,
)

from conftest import hermitian_matrices
from oracles import product_integration


def test_zero_generator_gives_identity():
    u = hermitian_propagator(np.zeros((3, 3)), 1.7)
    assert np.array_equal(u, np.eye(3))


def test_poincare_period_gives_identity():
    m = rwa_hamiltonian(RabiModel.ize_scenario())
    u = hermitian_propagator(m, np.pi / 2)
    assert np.max(np.abs(u - np.eye(3))) <= 1e-10


def test_half_period_entry_matches_product_integration():
    m = rwa_hamiltonian(RabiModel.ize_scenario())
    u = hermitian_propagator(m, np.pi / 4)
    assert u[0, 0] == pytest.approx(7 / 8, abs=1e-12)
    # first-order product integral with 10^6 steps, error O(1e-6)
    reference = product_integration(m, np.pi / 4, 10**6)
    assert abs(u[0, 0] - reference[0, 0]) < 1e-5


def test_non_hermitian_input_names_defect():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = 1e-3
    with pytest.raises(ValidationError, match=r"1\.000e-03 at entry \((0, 1|1, 0)\)"):
        hermitian_propagator(m, 1.0)


def test_non_finite_duration_rejected():
    with pytest.raises(ValidationError):
        hermitian_propagator(np.eye(2), np.inf)


@settings(max_examples=1000, deadline=None)
@given(hermitian_matrices(), st.floats(-20, 20))
def test_propagator_is_unitary(m, s):
    assert unitarity_defect(hermitian_propagator(m, s)) <= 1e-12


@settings(max_examples=300, deadline=None)
@given(hermitian_matrices(scale=2.0), st.floats(-5, 5), st.floats(-5, 5))
def test_group_property(m, s1, s2):
    lhs = hermitian_propagator(m, s1 + s2)
    rhs = hermitian_propagator(m, s1) @ hermitian_propagator(m, s2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


@pytest.mark.parametrize("rho, passed, trace_defect", [
    (np.diag([1.0, 0.0, 0.0]), True, 0.0),
    (np.diag([0.5, 0.5, 0.1]), False, 0.1),
    (np.ones((3, 3)) / 3, True, 0.0),
])
def test_check_density_examples(rho, passed, trace_defect):
    report = check_density(rho)
    assert report.passed is passed
    assert report.trace_defect == pytest.approx(trace_defect, abs=1e-15)


def test_check_density_reports_negative_eigenvalue():
    report = check_density(np.diag([1.2, -0.2, 0.0]))
    assert not report.passed
    assert report.min_eigenvalue == pytest.approx(-0.2)


def test_check_density_accepts_scalar_tolerance():
    rho = np.diag([0.5, 0.5 + 1e-8, 0.0])
    assert not check_density(rho).passed
    assert check_density(rho, 1e-6).passed
    assert check_density(rho, Tolerances(trace=1e-6)).passed


def test_require_density_raises():
    with pytest.raises(ValidationError, match="trace defect"):
        require_density(np.diag([0.5, 0.5, 0.1]))
