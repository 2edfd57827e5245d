import math

import numpy as np
import pytest
from conftest import base_params, drives, perturbed_params
from hypothesis import given, settings
from hypothesis import strategies as st

from aptqfi import Parameter, SystemParams, ZeroInformation, qfi, qfi_pure_state_oracle, qfi_sld_oracle
from aptqfi.fock import coherent_state
from aptqfi.qfi import (
    analytic_density_derivative,
    pure_state_qfi,
    qfi_closed_form,
    sld_decomposition,
    sld_qfi,
    sweep_bound,
)
from aptqfi.sensitivity import SensitivityPair, analytic_sensitivity, scenario_for
from aptqfi.steady import response

EQ_POINT = SystemParams(delta=0, kappa=1, gamma_collective=1, drive=1)


def test_closed_form_example():
    report = qfi(EQ_POINT, Parameter.MISMATCH_S)
    assert report.fisher_info == pytest.approx(20 / 81, rel=1e-14)
    assert report.cr_bound == pytest.approx(9 / math.sqrt(20), rel=1e-14)
    assert report.cr_bound == pytest.approx(2.0125, abs=1e-4)
    assert (report.d_alpha_mag, report.d_beta_mag) == pytest.approx((1 / 9, 2 / 9))


def test_drive_parameter_example():
    report = qfi(EQ_POINT, Parameter.DRIVE_REAL)
    assert report.fisher_info == pytest.approx(20 / 9, rel=1e-14)
    assert report.cr_bound == pytest.approx(0.6708, abs=1e-4)


def test_drive_information_independent_of_drive():
    p = SystemParams(drive=0.3)
    assert qfi(p, Parameter.DRIVE_REAL).fisher_info == pytest.approx(20 / 9, rel=1e-14)
    assert qfi_sld_oracle(p, Parameter.DRIVE_REAL) == pytest.approx(20 / 9, rel=1e-5)


def test_zero_information():
    with pytest.raises(ZeroInformation):
        qfi(SystemParams(drive=0), Parameter.MISMATCH_S)
    with pytest.raises(ZeroInformation):
        qfi_closed_form(SensitivityPair(0j, 0j, Parameter.DELTA))
    with pytest.raises(ValueError):
        qfi_closed_form(SensitivityPair(complex(math.inf), 0j, Parameter.DELTA))


def test_oracles_at_example_point():
    closed = qfi(EQ_POINT, Parameter.MISMATCH_S).fisher_info
    assert qfi_sld_oracle(EQ_POINT, Parameter.MISMATCH_S) == pytest.approx(closed, rel=1e-5)
    assert qfi_pure_state_oracle(EQ_POINT, Parameter.MISMATCH_S) == pytest.approx(closed, rel=1e-6)


def test_oracles_on_vacuum():
    p = SystemParams(drive=0)
    assert qfi_sld_oracle(p, Parameter.MISMATCH_S) == 0
    assert qfi_pure_state_oracle(p, Parameter.MISMATCH_S) == 0


def test_global_phase_carries_no_information():
    base = coherent_state(0.7, -0.2j, (15, 12))
    assert pure_state_qfi(lambda e: np.exp(1j * e) * base, 0.3, 1e-5) == pytest.approx(0, abs=1e-9)

    def rho_of(e):
        psi = np.exp(1j * e) * base
        return np.outer(psi, psi.conj())

    assert sld_qfi(rho_of, 0.3, 1e-5) == pytest.approx(0, abs=1e-9)


def test_sld_oracle_on_mixed_qubit():
    # rho = diag(p, 1 - p): classical Fisher information 1/(p(1-p))
    def rho_of(p):
        return np.diag([p, 1 - p]).astype(complex)

    assert sld_qfi(rho_of, 0.3, 1e-6) == pytest.approx(1 / 0.21, rel=1e-8)


@pytest.mark.parametrize("parameter", [Parameter.MISMATCH_S, Parameter.DISPERSIVE_G, Parameter.DELTA])
def test_sld_decomposition(parameter):
    p = SystemParams(delta=0.3, kappa=0.8, drive=0.9 + 0.4j)
    cutoffs = (20, 16)
    dec = sld_decomposition(p, parameter, cutoffs)
    amps = response(p, scenario_for(p, parameter))
    psi = coherent_state(amps.alpha0, amps.beta0, cutoffs)
    rho = np.outer(psi, psi.conj())
    L = dec.matrix
    assert np.max(np.abs(L - L.conj().T)) < 1e-10
    assert abs(np.trace(rho @ L)) < 1e-8
    drho = analytic_density_derivative(p, parameter, cutoffs)
    assert np.max(np.abs((L @ rho + rho @ L) / 2 - drho)) < 1e-8
    assert dec.fisher_info(rho) == pytest.approx(qfi(p, parameter).fisher_info, rel=1e-8)


def test_sld_decomposition_needs_nonzero_amplitudes():
    with pytest.raises(ValueError):
        sld_decomposition(SystemParams(drive=0), Parameter.MISMATCH_S)


def test_single_point_sweep_matches_closed_form():
    (row,) = sweep_bound(EQ_POINT, Parameter.MISMATCH_S, [1.0], [0.05])
    report = qfi(SystemParams(mismatch_s=0.05), Parameter.MISMATCH_S)
    assert (row.xi, row.epsilon, row.error) == (1.0, 0.05, None)
    assert row.fisher_info == report.fisher_info
    assert row.cr_bound == report.cr_bound


def test_sweep_records_failures():
    rows = sweep_bound(SystemParams(drive=0), Parameter.MISMATCH_S, [0.1], [0.1])
    assert rows[0].error == "ZeroInformation" and rows[0].cr_bound == math.inf
    # kappa = 0 at g = 0 is the singular point; with g != 0 one eigenvalue sits on the real axis
    rows = sweep_bound(EQ_POINT, Parameter.DISPERSIVE_G, [0.0], [0.0, 0.1])
    assert rows[0].error == "SingularResponse" and math.isnan(rows[0].fisher_info)
    assert rows[1].error == "Unstable" and math.isnan(rows[1].cr_bound)
    with pytest.raises(ValueError):
        sweep_bound(EQ_POINT, Parameter.MISMATCH_S, [], [0.1])


@pytest.mark.parametrize(
    "parameter, base",
    [(Parameter.MISMATCH_S, SystemParams()), (Parameter.DISPERSIVE_G, SystemParams(delta=0.1))],
)
def test_sweep_is_ordered_in_xi(parameter, base):
    xis = [1e-1, 1e-2, 1e-3]
    grid = np.geomspace(1e-3, 1, 25)
    rows = sweep_bound(base, parameter, xis, grid)
    assert [r.xi for r in rows[:: len(grid)]] == sorted(xis)
    table = {(r.xi, r.epsilon): r.cr_bound for r in rows}
    for eps in grid:
        assert table[(1e-3, eps)] < table[(1e-2, eps)] < table[(1e-1, eps)]


def test_bound_slope_near_singularity():
    grid = np.geomspace(1e-3, 1e-2, 10)
    for parameter in (Parameter.MISMATCH_S, Parameter.DISPERSIVE_G):
        rows = sweep_bound(SystemParams(), parameter, [1e-6], grid)
        slope = np.polyfit(np.log(grid), np.log([r.cr_bound for r in rows]), 1)[0]
        assert slope == pytest.approx(2, abs=0.05)


PERTURBED = st.one_of(
    st.tuples(perturbed_params("s"), st.just(Parameter.MISMATCH_S)),
    st.tuples(perturbed_params("g"), st.just(Parameter.DISPERSIVE_G)),
)


@given(PERTURBED, drives())
def test_fisher_scales_with_drive_squared(case, c):
    p, parameter = case
    q = SystemParams(
        delta=p.delta, kappa=p.kappa, gamma_collective=p.gamma_collective, drive=c * p.drive,
        mismatch_s=p.mismatch_s, dispersive_g=p.dispersive_g,
    )
    a, b = qfi(p, parameter), qfi(q, parameter)
    assert b.fisher_info == pytest.approx(abs(c) ** 2 * a.fisher_info, rel=1e-12)
    assert b.cr_bound == pytest.approx(a.cr_bound / abs(c), rel=1e-12)


@given(st.one_of(base_params(), perturbed_params("s"), perturbed_params("g")), st.sampled_from(list(Parameter)))
def test_cramer_rao_reciprocal(p, parameter):
    try:
        report = qfi(p, parameter)
    except ZeroInformation:
        return
    assert report.fisher_info > 0
    assert report.cr_bound * math.sqrt(report.fisher_info) == pytest.approx(1, abs=1e-12)
    assert report.fisher_info == 4 * (report.d_alpha_mag**2 + report.d_beta_mag**2)


@settings(max_examples=15)
@given(
    base_params(gamma_range=(1.0, 1.0)),
    st.sampled_from([Parameter.DELTA, Parameter.GAMMA, Parameter.DRIVE_REAL, Parameter.MISMATCH_S]),
    st.floats(0.05, 1.5),
)
def test_triple_agreement(p, parameter, size):
    amps = response(p, scenario_for(p, parameter))
    scale = size / max(abs(amps.alpha0), abs(amps.beta0), 1e-12)
    q = SystemParams(delta=p.delta, kappa=p.kappa, drive=p.drive * scale)
    closed = qfi(q, parameter).fisher_info
    assert qfi_sld_oracle(q, parameter) == pytest.approx(closed, rel=1e-5)
    assert qfi_pure_state_oracle(q, parameter) == pytest.approx(closed, rel=1e-5)


def test_analytic_density_derivative_matches_fd():
    p = SystemParams(delta=0.2, kappa=0.5, drive=0.6)
    cutoffs = (18, 14)
    h = 1e-5

    def rho(delta):
        amps = response(SystemParams(delta=delta, kappa=0.5, drive=0.6))
        psi = coherent_state(amps.alpha0, amps.beta0, cutoffs)
        return np.outer(psi, psi.conj())

    fd = (rho(0.2 + h) - rho(0.2 - h)) / (2 * h)
    assert np.max(np.abs(analytic_density_derivative(p, Parameter.DELTA, cutoffs) - fd)) < 1e-8
    assert analytic_sensitivity(p, Parameter.DELTA).d_alpha != 0
