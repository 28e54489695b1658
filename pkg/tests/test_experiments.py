"""Tests for the experiment drivers and the third-derivative quadrature."""

import numpy as np
import pytest

from nnlslab.equations import EquationSpec
from nnlslab.experiments import (
    TwoBumpData,
    exp_conservation,
    exp_gauge_equivalence,
    exp_norm_inflation,
    exp_picard_window,
    exp_scaling_global,
    exp_support_invariance,
    largest_contracting_time,
    make_initial_data,
    rho_kernel,
    third_derivative_field,
)
from nnlslab.grid import FrequencyGrid, forward_transform, inverse_transform
from nnlslab.spaces import esigma_norm


def test_two_bump_profile():
    prof = TwoBumpData(8, -1.0)
    assert prof.amplitude == 2.0 ** 4
    assert prof.upper_box == (8.125, 8.25)
    assert prof.lower_box == (-15.75, -15.5)
    with pytest.raises(ValueError):
        TwoBumpData(0, -1.0)
    with pytest.raises(ValueError):
        TwoBumpData(4, 0.5)


def test_make_initial_data_gaussian(grid):
    f = make_initial_data("gaussian", grid, amplitude=2.0, width=1.0)
    s = inverse_transform(f)
    i0 = np.argmin(np.abs(grid.points))
    assert abs(s[i0] - 2.0) <= 1e-10
    with pytest.raises(ValueError):
        make_initial_data("soliton", grid)


def test_make_initial_data_halfline(grid):
    f = make_initial_data("halfline_bump", grid, amplitude=1.0, lo=0.5, hi=2.0)
    xi = grid.frequencies
    assert np.all(f.coeffs[xi <= 0.5] == 0)
    assert np.all(f.coeffs[xi >= 2.0] == 0)
    with pytest.raises(ValueError):
        make_initial_data("halfline_bump", grid, lo=2.0, hi=1.0)


def test_plemelj_derivative_norm_oracle():
    g = FrequencyGrid(512, 40.0)
    f = make_initial_data("plemelj_derivative", g, amplitude=1.0, k=3)
    # frozen adaptive-quadrature value of the (s, sigma) = (-1, 1) norm
    oracle = 27.465727983843113
    assert abs(esigma_norm(f, -1.0, 1.0) - oracle) <= 1e-6 * oracle


def test_plemelj_derivative_overflow_guard():
    g = FrequencyGrid(512, 40.0)
    with pytest.raises(ValueError):
        make_initial_data("plemelj_derivative", g, k=500)


def test_two_bump_data_on_grid(grid):
    f = make_initial_data("two_bump", grid, k=8, s=-1.0)
    xi = grid.frequencies
    on = np.abs(f.coeffs) > 0
    assert np.all((xi[on] > 8.0) | (xi[on] < -15.0))
    assert np.max(np.abs(f.coeffs)) == 2.0 ** 4


def test_rho_kernel_lower_bound():
    # at t = kappa/k^2 the combination stays above t/2 across the boxes
    k, kappa = 8, 0.1
    t = kappa / k ** 2
    prof = TwoBumpData(k, -1.0)
    up = np.linspace(*prof.upper_box, 40)
    xi = np.linspace(0.5, 1.0, 21)
    rho = rho_kernel(t, xi[:, None, None], up[None, :, None], up[None, None, :])
    assert float(np.min(-rho.imag)) >= t / 2.0


def test_third_derivative_zero_time():
    prof = TwoBumpData(8, -1.0)
    xi, vals, _ = third_derivative_field(prof, 0.0)
    assert np.all(np.isfinite(vals))
    with pytest.raises(ValueError):
        third_derivative_field(prof, -1.0)
    with pytest.raises(ValueError):
        third_derivative_field(prof, 0.1, equation="gNdNLS")


def test_third_derivative_quadrature_converges():
    prof = TwoBumpData(8, -1.0)
    t = 0.1 / 64.0
    xi = np.array([0.7])
    _, coarse, _ = third_derivative_field(prof, t, xi=xi, n_outer=12, n_inner=12)
    _, fine, _ = third_derivative_field(prof, t, xi=xi, n_outer=24, n_inner=24)
    assert abs(coarse[0] - fine[0]) <= 1e-8 * abs(fine[0])


def test_conservation_experiment(grid):
    spec = EquationSpec("NNLS", alpha=1.0)
    u0 = make_initial_data("gaussian", grid)
    rep = exp_conservation(spec, u0, 0.2, 2e-3, sample_every=20)
    assert rep.passed
    assert rep.claim_id == "mass-energy-conservation"
    assert rep.measurements["mass_drift"] <= 1e-6
    assert rep.trajectory is not None
    with pytest.raises(ValueError):
        exp_conservation(EquationSpec("GaugedNdNLS"), u0, 0.1, 1e-3)


def test_conservation_failure_path(grid):
    spec = EquationSpec("NNLS", alpha=1.0)
    u0 = make_initial_data("gaussian", grid)
    rep = exp_conservation(spec, u0, 0.2, 2e-3, tolerance=0.0)
    assert not rep.passed


def test_gauge_equivalence_small(grid):
    u0 = make_initial_data("modulated_gaussian", grid, amplitude=0.3, width=1.0, carrier=3.0)
    rep = exp_gauge_equivalence(1.0, 0.0, u0, 0.1, 2e-3)
    assert rep.passed
    assert rep.measurements["max_relative_residual"] <= 1e-4


def test_support_invariance_precondition(grid, gaussian):
    spec = EquationSpec("NdNLS", alpha=1.0)
    with pytest.raises(ValueError):
        exp_support_invariance(spec, 1.0, gaussian, 0.1, 1e-3)


def test_support_invariance_runs(grid):
    spec = EquationSpec("NdNLS", alpha=1.0)
    u0 = make_initial_data("halfline_bump", grid, amplitude=0.5, lo=1.5, hi=3.0)
    rep = exp_support_invariance(spec, 1.0, u0, 0.2, 2e-3)
    assert rep.passed
    assert rep.measurements["max_leakage"] <= 1e-10


def test_scaling_skips_overflowing_lambda(grid):
    u0 = make_initial_data("modulated_gaussian", grid, amplitude=1.0, width=2.0, carrier=4.5)
    rep = exp_scaling_global(u0, -1.0, 0.5, 1.0, [1, 2, 32], T_max=0.05)
    assert 32 in rep.measurements["skipped"]
    assert 2 not in rep.measurements["skipped"]


def test_largest_contracting_time_monotone_in_amplitude(grid):
    spec = EquationSpec("NNLS", alpha=1.0)
    small = make_initial_data("modulated_gaussian", grid, amplitude=4.0, width=1.0, carrier=3.0)
    big = make_initial_data("modulated_gaussian", grid, amplitude=40.0, width=1.0, carrier=3.0)
    t_small = largest_contracting_time(small, spec)
    t_big = largest_contracting_time(big, spec)
    assert t_small is not None and t_big is not None
    assert t_big < t_small


def test_picard_window_needs_enough_points(grid):
    spec = EquationSpec("NNLS", alpha=1.0)
    fam = [make_initial_data("gaussian", grid, amplitude=a) for a in (0.5, 1.0)]
    rep = exp_picard_window(fam, spec)
    assert not rep.passed  # fewer than three usable points


def test_norm_inflation_small_case():
    rep = exp_norm_inflation(k_list=(4, 8), n_nodes=8)
    assert rep.measurements["monotone"]
    assert rep.measurements["rho_bound_ok"]
    assert rep.measurements["norms"][1] > rep.measurements["norms"][0]
    with pytest.raises(ValueError):
        exp_norm_inflation(s=0.5)
    with pytest.raises(ValueError):
        exp_norm_inflation(kappa=0.5)


def test_norm_inflation_derivative_grows_faster():
    a = exp_norm_inflation(k_list=(4, 8), n_nodes=8, equation="NNLS")
    b = exp_norm_inflation(k_list=(4, 8), n_nodes=8, equation="NdNLS")
    assert b.measurements["slope"] > a.measurements["slope"]


def test_experiments_deterministic(grid):
    u0 = make_initial_data("gaussian", grid)
    spec = EquationSpec("NNLS", alpha=1.0)
    r1 = exp_conservation(spec, u0, 0.1, 2e-3)
    r2 = exp_conservation(spec, u0, 0.1, 2e-3)
    assert r1.measurements["mass_drift"] == r2.measurements["mass_drift"]
