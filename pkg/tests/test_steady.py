import warnings

import numpy as np
import pytest
from conftest import base_params, drives, perturbed_params, rel_err
from hypothesis import given
from hypothesis import strategies as st

from aptqfi import EffectiveHamiltonian, Scenario, SingularResponse, SystemParams, Unstable, build_hamiltonian
from aptqfi.steady import (
    closed_form_base,
    closed_form_dispersive,
    closed_form_mismatch,
    response,
    steady_state_solve,
)


def numpy_steady(p: SystemParams, scenario=None) -> np.ndarray:
    """Independent oracle: solve 0 = -i H x + (E, 0) with LAPACK."""
    H = build_hamiltonian(p, scenario).entries
    return np.linalg.solve(-1j * H, -np.array([p.drive, 0]))


def test_base_example():
    p = SystemParams(delta=0, kappa=1, gamma_collective=1, drive=1)
    for amps in (closed_form_base(p), response(p)):
        assert amps.alpha0 == pytest.approx(2 / 3, abs=1e-15)
        assert amps.beta0 == pytest.approx(-1 / 3, abs=1e-15)


def test_detuned_example():
    p = SystemParams(delta=0.3, kappa=1, gamma_collective=1, drive=1)
    amps = closed_form_base(p)
    assert amps.alpha0 == pytest.approx(-(2 - 0.3j) / -3.09, abs=1e-15)
    assert amps.beta0 == pytest.approx(1 / -3.09, abs=1e-15)
    # four-digit rounded values
    assert amps.alpha0 == pytest.approx(0.6472 - 0.0971j, abs=1e-4)
    assert amps.beta0 == pytest.approx(-0.3236, abs=1e-4)
    np.testing.assert_allclose(amps.as_tuple(), numpy_steady(p), rtol=1e-14)


def test_zero_drive():
    assert response(SystemParams(drive=0)).as_tuple() == (0, 0)


def test_closed_form_equals_solver_exactly():
    p = SystemParams(delta=0.3, kappa=0.7, gamma_collective=1.3, drive=0.4 - 0.2j)
    a = closed_form_base(p).as_tuple()
    b = steady_state_solve(build_hamiltonian(p), p.drive).as_tuple()
    assert rel_err(a, b) < 1e-14


def test_delta_reflection_conjugates_alpha():
    p = SystemParams(delta=0.3)
    q = SystemParams(delta=-0.3)
    assert response(q).alpha0 == pytest.approx(response(p).alpha0.conjugate(), abs=1e-15)
    assert response(q).beta0 == pytest.approx(response(p).beta0, abs=1e-15)


def test_mismatch_examples():
    zero = closed_form_mismatch(SystemParams(mismatch_s=0))
    assert zero.as_tuple() == pytest.approx((2 / 3, -1 / 3), abs=1e-15)
    p = SystemParams(mismatch_s=0.1)
    amps = closed_form_mismatch(p)
    den = -3 + 0.2j
    assert amps.alpha0 == pytest.approx(-(2 - 0.1j) / den, abs=1e-15)
    assert amps.beta0 == pytest.approx(1 / den, abs=1e-15)
    np.testing.assert_allclose(amps.as_tuple(), numpy_steady(p), rtol=1e-14)
    assert rel_err(amps.as_tuple(), response(p).as_tuple()) < 1e-14


def test_dispersive_examples():
    assert closed_form_dispersive(SystemParams(delta=0.2)).as_tuple() == closed_form_base(SystemParams(delta=0.2)).as_tuple()
    p = SystemParams(delta=0.1, dispersive_g=0.1)
    assert rel_err(closed_form_dispersive(p).as_tuple(), response(p).as_tuple()) < 1e-14
    q = SystemParams(dispersive_g=0.05)
    den = (1 + 0.05j) ** 2 - 4
    assert den == pytest.approx(-3.0025 + 0.1j)
    amps = closed_form_dispersive(q)
    assert amps.alpha0 == pytest.approx(-2 / den, abs=1e-15)
    assert amps.beta0 == pytest.approx((1 + 0.05j) / den, abs=1e-15)
    np.testing.assert_allclose(amps.as_tuple(), numpy_steady(q), rtol=1e-14)


def test_closed_forms_reject_wrong_scenario():
    with pytest.raises(ValueError):
        closed_form_base(SystemParams(mismatch_s=0.1))
    with pytest.raises(ValueError):
        closed_form_mismatch(SystemParams(dispersive_g=0.1))
    with pytest.raises(ValueError):
        closed_form_dispersive(SystemParams(mismatch_s=0.1))


def test_singular_point_raises():
    # Delta = 0, kappa = 0 makes Gamma^2 - gamma^2 vanish
    with pytest.raises(SingularResponse):
        response(SystemParams(kappa=0))
    with pytest.raises(SingularResponse):
        closed_form_base(SystemParams(kappa=0))


def test_unstable_raises():
    H = EffectiveHamiltonian([[-0.5j, -1j], [-1j, -0.5j]])
    with pytest.raises(Unstable):
        steady_state_solve(H, 1.0)


def test_divergence_toward_singularity():
    mags = [abs(response(SystemParams(delta=x, kappa=x)).alpha0) for x in np.geomspace(1e-1, 1e-6, 12)]
    assert all(b > a for a, b in zip(mags, mags[1:]))
    assert mags[-1] > 1e5


@given(st.one_of(base_params(), perturbed_params("s"), perturbed_params("g")))
def test_solver_matches_lapack(p):
    ours = np.array(response(p).as_tuple())
    assert rel_err(ours, numpy_steady(p)) < 1e-10


@given(base_params())
def test_closed_form_base_matches_solver(p):
    assert rel_err(closed_form_base(p).as_tuple(), steady_state_solve(build_hamiltonian(p), p.drive).as_tuple()) < 1e-12


@given(perturbed_params("s"))
def test_closed_form_mismatch_matches_solver(p):
    ref = steady_state_solve(build_hamiltonian(p, Scenario.MISMATCH), p.drive).as_tuple()
    assert rel_err(closed_form_mismatch(p).as_tuple(), ref) < 1e-12


@given(perturbed_params("g"))
def test_closed_form_dispersive_matches_solver(p):
    ref = steady_state_solve(build_hamiltonian(p), p.drive).as_tuple()
    assert rel_err(closed_form_dispersive(p).as_tuple(), ref) < 1e-12


@given(st.one_of(base_params(), perturbed_params("s"), perturbed_params("g")), drives())
def test_linear_in_drive(p, c):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q = SystemParams(
            delta=p.delta, kappa=p.kappa, gamma_collective=p.gamma_collective, drive=c * p.drive,
            mismatch_s=p.mismatch_s, dispersive_g=p.dispersive_g,
        )
    a = np.array(response(p).as_tuple())
    b = np.array(response(q).as_tuple())
    assert rel_err(b, c * a) < 1e-13


@given(st.one_of(base_params(), perturbed_params("s"), perturbed_params("g")))
def test_stationarity_residual(p):
    H = build_hamiltonian(p).entries
    x = np.array(response(p).as_tuple())
    residual = -1j * H @ x + np.array([p.drive, 0])
    assert np.linalg.norm(residual) < 1e-12 * abs(p.drive) * max(1.0, np.linalg.norm(H) * np.linalg.norm(x) / abs(p.drive))


@given(st.one_of(base_params(), perturbed_params("s"), perturbed_params("g")))
def test_magnitude_bounded_by_smallest_singular_value(p):
    H = build_hamiltonian(p).entries
    smin = np.linalg.svd(H, compute_uv=False)[-1]
    x = np.array(response(p).as_tuple())
    assert np.linalg.norm(x) <= abs(p.drive) / smin * (1 + 1e-10)
