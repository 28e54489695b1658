"""Named reproducible experiments, each probing one verifiable claim.

Every experiment returns an ExperimentReport with the measured residuals and
an explicit pass flag; all are deterministic (no unseeded randomness).
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .equations import EquationSpec, GAUGED_GNDNLS, GAUGED_NDNLS, GNDNLS, NDNLS, NNLS
from .evolve import picard_solve, solve
from .gauge import gauge_forward
from .grid import SpectralField, l2_distance, l2_norm
from .spaces import dilate, esigma_norm, scaling_bound_check

DATA_KINDS = ("gaussian", "modulated_gaussian", "halfline_bump", "plemelj_derivative", "two_bump")


@dataclass
class ExperimentReport:
    """Outcome record for one experiment run."""

    claim_id: str
    parameters: dict = field(default_factory=dict)
    measurements: dict = field(default_factory=dict)
    tolerance: float = 0.0
    passed: bool = False
    runtime_seconds: float = 0.0
    trajectory: object = None  # attached by trajectory-based experiments, not serialized


@dataclass(frozen=True)
class TwoBumpData:
    """Spectral profile with two box bumps near +k and -2k.

    amplitude 2^{-s k/2} on [k + 1/8, k + 1/4] and [-2k + 1/4, -2k + 1/2].
    """

    k: int
    s: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.s < 0:
            raise ValueError("s must be negative")

    @property
    def amplitude(self):
        return 2.0 ** (-self.s * self.k / 2.0)

    @property
    def upper_box(self):
        return (self.k + 0.125, self.k + 0.25)

    @property
    def lower_box(self):
        return (-2.0 * self.k + 0.25, -2.0 * self.k + 0.5)


def _bump_profile(xi, lo, hi):
    # C-infinity bump supported on (lo, hi), peak value 1 at the midpoint
    t = (xi - lo) / (hi - lo)
    inside = (t > 0) & (t < 1)
    out = np.zeros_like(np.asarray(xi, dtype=float))
    ts = t[inside]
    out[inside] = np.exp(4.0 - 1.0 / (ts * (1.0 - ts)))
    return out


def make_initial_data(kind, grid, **params):
    """Build one of the named initial profiles on the given grid."""
    if kind == "gaussian":
        a = params.get("amplitude", 1.0)
        w = params.get("width", 1.0)
        x = grid.points
        from .grid import forward_transform

        return forward_transform(a * np.exp(-(x / w) ** 2 / 2.0).astype(complex), grid)
    if kind == "modulated_gaussian":
        a = params.get("amplitude", 1.0)
        w = params.get("width", 1.0)
        carrier = params.get("carrier", 3.0)
        x = grid.points
        from .grid import forward_transform

        s = a * np.exp(1j * carrier * x) * np.exp(-(x / w) ** 2 / 2.0)
        return forward_transform(s, grid)
    if kind == "halfline_bump":
        a = params.get("amplitude", 1.0)
        lo = params.get("lo", 1.0)
        hi = params.get("hi", 2.0)
        if not (lo < hi):
            raise ValueError("halfline_bump needs lo < hi")
        return SpectralField(grid, a * _bump_profile(grid.frequencies, lo, hi))
    if kind == "plemelj_derivative":
        c = params.get("amplitude", 1.0)
        order = int(params.get("k", 3))
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if order * np.log10(max(grid.xi_max, 2.0)) > 280:
            raise ValueError("derivative order %d overflows at the grid band" % order)
        xi = grid.frequencies
        coeffs = np.where(xi >= 1.0, c * (1j * (xi - 1.0)) ** order, 0.0)
        return SpectralField(grid, coeffs)
    if kind == "two_bump":
        prof = TwoBumpData(int(params["k"]), float(params["s"]))
        xi = grid.frequencies
        up, dn = prof.upper_box, prof.lower_box
        ind = ((xi >= up[0]) & (xi <= up[1])) | ((xi >= dn[0]) & (xi <= dn[1]))
        return SpectralField(grid, prof.amplitude * ind.astype(complex))
    raise ValueError("unknown initial-data kind %r; expected one of %s" % (kind, (DATA_KINDS,)))


def exp_conservation(spec, u0, T, dt, tolerance=1e-6, sample_every=50, norm_params=()):
    """Check mass (and, for the cubic equation, energy) drift along a solve."""
    if spec.kind not in (NNLS, NDNLS):
        raise ValueError("conservation experiment covers NNLS and NdNLS only")
    t0 = time.perf_counter()
    traj = solve(u0, T, dt, spec, sample_every=sample_every, norm_params=norm_params)
    m = traj.diagnostic_series("mass")
    drift_m = float(np.max(np.abs(m - m[0])) / max(abs(m[0]), 1e-300))
    meas = {"mass_drift": drift_m}
    ok = not traj.blown_up and drift_m <= tolerance
    if spec.kind == NNLS:
        e = traj.diagnostic_series("energy")
        drift_e = float(np.max(np.abs(e - e[0])) / max(abs(e[0]), 1e-300))
        meas["energy_drift"] = drift_e
        ok = ok and drift_e <= tolerance
    return ExperimentReport(
        claim_id="mass-energy-conservation",
        parameters={"kind": spec.kind, "alpha": spec.alpha, "T": T, "dt": dt},
        measurements=dict(meas, blown_up=traj.blown_up),
        tolerance=tolerance,
        passed=bool(ok),
        runtime_seconds=time.perf_counter() - t0,
        trajectory=traj,
    )


def exp_gauge_equivalence(alpha, beta, u0, T, dt, mode="rederived", tolerance=1e-4, sample_every=25):
    """Evolve u and its gauged image v by their own equations; compare G(u(t)) to v(t)."""
    t0 = time.perf_counter()
    delta = -alpha / 2.0
    if beta == 0:
        spec_u = EquationSpec(NDNLS, alpha=alpha)
        spec_v = EquationSpec(GAUGED_NDNLS, alpha=alpha)
    else:
        spec_u = EquationSpec(GNDNLS, alpha=alpha, beta=beta)
        spec_v = EquationSpec(GAUGED_GNDNLS, alpha=alpha, beta=beta, gauged_coefficient_mode=mode)
    from .grid import EndpointDecayWarning

    v0 = gauge_forward(u0, delta)
    tr_u = solve(u0, T, dt, spec_u, sample_every=sample_every)
    tr_v = solve(v0, T, dt, spec_v, sample_every=sample_every)
    blown = tr_u.blown_up or tr_v.blown_up
    residual = np.inf
    if not blown:
        residual = 0.0
        with warnings.catch_warnings():
            # dispersive tails wrap at ~1e-8 relative; far below the tolerance
            warnings.simplefilter("ignore", EndpointDecayWarning)
            for fu, fv in zip(tr_u.states, tr_v.states):
                gu = gauge_forward(fu, delta)
                residual = max(residual, l2_distance(gu, fv) / max(l2_norm(fv), 1e-300))
    return ExperimentReport(
        claim_id="gauge-equivalence",
        parameters={"alpha": alpha, "beta": beta, "mode": mode, "T": T, "dt": dt},
        measurements={"max_relative_residual": float(residual), "blown_up": blown},
        tolerance=tolerance,
        passed=bool(not blown and residual <= tolerance),
        runtime_seconds=time.perf_counter() - t0,
    )


def exp_support_invariance(spec, eps0, u0, T, dt, tolerance=1e-10, sample_every=50):
    """Verify that spectral support above eps0 is preserved along the flow."""
    from .equations import support_leakage

    if support_leakage(u0, eps0) > 1e-13:
        raise ValueError("initial data leaks below eps0 already")
    t0 = time.perf_counter()
    traj = solve(u0, T, dt, spec, sample_every=sample_every, eps0=eps0)
    leak = traj.diagnostic_series("leakage")
    worst = float(np.max(leak))
    return ExperimentReport(
        claim_id="halfline-support-invariance",
        parameters={"kind": spec.kind, "eps0": eps0, "T": T, "dt": dt},
        measurements={"max_leakage": worst, "blown_up": traj.blown_up},
        tolerance=tolerance,
        passed=bool(not traj.blown_up and worst <= tolerance),
        runtime_seconds=time.perf_counter() - t0,
        trajectory=traj,
    )


def exp_scaling_global(u0, s, sigma, eps0, lambda_list, spec=None, T_max=0.5, dt=2e-3,
                       ratio_bound=10.0, sample_every=25):
    """Dilation-bound ratios plus decay of the lam-weighted norm along solves."""
    if spec is None:
        spec = EquationSpec(NNLS, alpha=1.0)
    t0 = time.perf_counter()
    ratios, sup_norms, skipped = {}, {}, []
    for lam in lambda_list:
        try:
            if lam > 1:
                ratios[lam] = scaling_bound_check(u0, s, sigma, lam, eps0)
            data = u0 if lam == 1 else dilate(u0, lam)
        except ValueError:
            skipped.append(lam)
            continue
        horizon = min(T_max, 2.0 ** np.sqrt(lam))
        traj = solve(data, horizon, dt, spec, sample_every=sample_every,
                     norm_params=[(s * lam, sigma)])
        sup_norms[lam] = float(np.max(traj.diagnostic_series("esigma(%g,%g)" % (s * lam, sigma))))
    l2_ratio = scaling_bound_check(u0, 0.0, 0.0, 2.0, eps0)
    kept = [lam for lam in lambda_list if lam not in skipped]
    seq = [sup_norms[lam] for lam in kept]
    monotone = all(b < a for a, b in zip(seq, seq[1:]))
    ratio_ok = all(r <= ratio_bound for r in ratios.values())
    identity_ok = abs(l2_ratio - 1.0) <= 1e-10
    return ExperimentReport(
        claim_id="dilation-scaling-bound",
        parameters={"s": s, "sigma": sigma, "eps0": eps0, "lambdas": tuple(lambda_list)},
        measurements={
            "ratios": {lam: float(r) for lam, r in ratios.items()},
            "l2_identity_ratio": float(l2_ratio),
            "sup_norms": sup_norms,
            "monotone_decay": monotone,
            "skipped": tuple(skipped),
        },
        tolerance=ratio_bound,
        passed=bool(ratio_ok and identity_ok and monotone),
        runtime_seconds=time.perf_counter() - t0,
    )


def _contracting(u0, T, spec):
    # keep the quadrature step below 1/4 so long horizons stay resolved
    n_nodes = max(33, 2 * int(np.ceil(2.0 * T)) + 1)
    _, rep = picard_solve(u0, T, spec, n_nodes=n_nodes, n_iter=10, tol=1e-12)
    d = rep.iterates_distances
    # ratios while the distances are still well above the roundoff floor
    ratios = [b / a for a, b in zip(d, d[1:]) if a > 1e-10]
    return len(ratios) >= 2 and max(ratios) <= 0.5


def largest_contracting_time(u0, spec, t_floor=1e-6, t_cap=256.0, rel_tol=0.02):
    """Bisect the largest horizon on which the Duhamel map still contracts."""
    T = 1.0
    if _contracting(u0, T, spec):
        lo = T
        while lo < t_cap and _contracting(u0, min(2 * lo, t_cap), spec):
            lo = min(2 * lo, t_cap)
            if lo >= t_cap:
                return t_cap
        hi = min(2 * lo, t_cap)
    else:
        hi = T
        while hi > t_floor and not _contracting(u0, hi / 2, spec):
            hi = hi / 2
        if hi <= t_floor:
            return None
        lo = hi / 2
    while hi / lo > 1 + rel_tol:
        mid = np.sqrt(lo * hi)
        if _contracting(u0, mid, spec):
            lo = mid
        else:
            hi = mid
    return float(lo)


def _linefit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * np.asarray(x) + intercept
    ss_res = float(np.sum((np.asarray(y) - pred) ** 2))
    ss_tot = float(np.sum((np.asarray(y) - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return float(slope), r2


def exp_picard_window(u0_family, spec, s=-1.0, sigma=0.0, r2_min=0.9):
    """Fit the contracting-window size against the data norm across a family."""
    t0 = time.perf_counter()
    norms, windows, excluded = [], [], []
    for i, u0 in enumerate(u0_family):
        T_star = largest_contracting_time(u0, spec)
        if T_star is None:
            excluded.append(i)
            continue
        norms.append(esigma_norm(u0, s, sigma))
        windows.append(T_star)
    ok = len(norms) >= 3
    slope, r2 = (np.nan, 0.0)
    if ok:
        slope, r2 = _linefit(np.log(norms), np.log(windows))
        ok = slope < 0 and r2 >= r2_min
    return ExperimentReport(
        claim_id="contraction-window-scaling",
        parameters={"kind": spec.kind, "alpha": spec.alpha, "s": s, "sigma": sigma},
        measurements={
            "norms": tuple(float(v) for v in norms),
            "windows": tuple(float(v) for v in windows),
            "slope": float(slope),
            "r_squared": float(r2),
            "excluded": tuple(excluded),
        },
        tolerance=r2_min,
        passed=bool(ok),
        runtime_seconds=time.perf_counter() - t0,
    )


_GL_CACHE = {}


def _gl(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _phase_ratio(z):
    # (e^{iz} - 1)/z with its series continuation through z = 0
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape, dtype=np.complex128)
    small = np.abs(z) < 1e-6
    zs = z[small]
    out[small] = 1j * (1.0 + 1j * zs / 2.0 - zs * zs / 6.0)
    zl = z[~small]
    out[~small] = (np.exp(1j * zl) - 1.0) / zl
    return out


def _kernel(xi, xi1, xi2, t):
    # t (e^{iz}-1)/z with z = 2t(xi-xi1)(xi-xi2); limit value i*t on the diagonal
    return t * _phase_ratio(2.0 * t * (xi - xi1) * (xi - xi2))


def rho_kernel(t, xi, xi1, xi2):
    """Oscillatory kernel combination whose -Im part is bounded below by t/2."""
    first = _kernel(xi, xi1, xi2, t)
    second = 2.0 * t * _phase_ratio(2.0 * t * (xi - xi1) * (xi1 + xi2))
    return first - second


def _combo_integral(xi, t, b1, b2, b3, n1, n2, with_xi2_factor, rho_track=False):
    """Integral over xi1 in b1, xi2 in b2, xi - xi1 - xi2 in b3 of the kernel."""
    lo1, hi1 = b1
    lo2, hi2 = b2
    lo3, hi3 = b3
    a = max(lo1, xi - hi3 - hi2)
    b = min(hi1, xi - lo3 - lo2)
    min_rho = np.inf
    if b <= a:
        return 0.0 + 0.0j, min_rho
    cuts = sorted({a, b, xi - hi3 - lo2, xi - lo3 - hi2})
    cuts = [a] + [c for c in cuts if a < c < b] + [b]
    g1, w1 = _gl(n1)
    g2, w2 = _gl(n2)
    total = 0.0 + 0.0j
    for pa, pb in zip(cuts[:-1], cuts[1:]):
        if pb - pa <= 1e-15:
            continue
        x1 = 0.5 * (pa + pb) + 0.5 * (pb - pa) * g1
        wx1 = 0.5 * (pb - pa) * w1
        in_lo = np.maximum(lo2, xi - x1 - hi3)
        in_hi = np.minimum(hi2, xi - x1 - lo3)
        h = 0.5 * (in_hi - in_lo)
        mid = 0.5 * (in_hi + in_lo)
        x2 = mid[:, None] + h[:, None] * g2[None, :]
        w = (wx1 * h)[:, None] * w2[None, :]
        vals = _kernel(xi, x1[:, None], x2, t)
        if with_xi2_factor:
            vals = vals * (1j * x2)
        total += complex(np.sum(w * vals))
        if rho_track:
            rho = rho_kernel(t, xi, x1[:, None], x2)
            min_rho = min(min_rho, float(np.min(-rho.imag)))
    return total, min_rho


def third_derivative_field(phi, t, equation=NNLS, xi=None, n_outer=24, n_inner=24, alpha=1.0):
    """Third directional derivative of the data-to-solution map, in Fourier space.

    Returns (xi, values, min_neg_im_rho): the spectral values on the output
    band near [1/2, 1] and the worst value of -Im rho over the symmetric-box
    quadrature nodes.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if equation not in (NNLS, NDNLS):
        raise ValueError("third derivative is available for NNLS and NdNLS")
    if xi is None:
        xi = np.linspace(0.5, 1.0, 65)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    up, dn = phi.upper_box, phi.lower_box
    combos = [(up, up, dn), (dn, up, up), (up, dn, up)]
    with_factor = equation == NDNLS
    values = np.zeros(xi.shape, dtype=np.complex128)
    min_rho = np.inf
    pref = 6.0 * alpha * phi.amplitude ** 3 / (4.0 * np.pi ** 2)
    for i, x in enumerate(xi):
        acc = 0.0 + 0.0j
        for j, (b1, b2, b3) in enumerate(combos):
            val, mr = _combo_integral(x, t, b1, b2, b3, n_outer, n_inner,
                                      with_factor, rho_track=(j == 0 and t > 0))
            acc += val
            min_rho = min(min_rho, mr)
        values[i] = pref * np.exp(-1j * t * x ** 2) * acc
    return xi, values, min_rho


_BAND_CUTS = (0.5, 0.625, 0.75, 0.875, 1.0)


def _band_nodes(n_per_segment):
    g, w = _gl(n_per_segment)
    xs, ws = [], []
    for a, b in zip(_BAND_CUTS[:-1], _BAND_CUTS[1:]):
        xs.append(0.5 * (a + b) + 0.5 * (b - a) * g)
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(xs), np.concatenate(ws)


def _band_norm(phi, t, equation, sprime, sigmaprime, n_nodes, alpha=1.0):
    xi, w = _band_nodes(n_nodes)
    _, vals, min_rho = third_derivative_field(phi, t, equation, xi=xi,
                                              n_outer=n_nodes, n_inner=n_nodes, alpha=alpha)
    weight = (1.0 + xi ** 2) ** sigmaprime * 4.0 ** (sprime * np.abs(xi))
    norm = float(np.sqrt(np.sum(w * weight * np.abs(vals) ** 2)))
    return norm, min_rho


def exp_norm_inflation(s=-1.0, k_list=(8, 16, 32), kappa=0.1, sprime=-1.0, sigmaprime=0.0,
                       equation=NNLS, n_nodes=16, quad_tol=1e-6):
    """Growth in k of the weighted band norm of the third derivative at t = kappa/k^2."""
    if not s < 0:
        raise ValueError("s must be negative")
    if kappa > 0.1:
        raise ValueError("kappa must be <= 0.1")
    t0 = time.perf_counter()
    norms, rho_ok, quad_ok = [], True, True
    for k in k_list:
        phi = TwoBumpData(int(k), s)
        t = kappa / k ** 2
        coarse, _ = _band_norm(phi, t, equation, sprime, sigmaprime, n_nodes)
        fine, min_rho = _band_norm(phi, t, equation, sprime, sigmaprime, 2 * n_nodes)
        quad_ok = quad_ok and abs(fine - coarse) <= quad_tol * abs(fine)
        rho_ok = rho_ok and min_rho >= t / 2.0
        norms.append(fine)
    log2n = np.log2(norms)
    slope, r2 = _linefit(np.asarray(k_list, dtype=float), log2n)
    target = -s / 2.0
    monotone = all(b > a for a, b in zip(norms, norms[1:]))
    passed = quad_ok and rho_ok and monotone and slope >= target * 0.8
    return ExperimentReport(
        claim_id="third-derivative-norm-inflation",
        parameters={"s": s, "k_list": tuple(k_list), "kappa": kappa,
                    "sprime": sprime, "sigmaprime": sigmaprime, "equation": equation},
        measurements={
            "norms": tuple(float(v) for v in norms),
            "slope": float(slope),
            "r_squared": float(r2),
            "target_slope": float(target),
            "quad_converged": bool(quad_ok),
            "rho_bound_ok": bool(rho_ok),
            "monotone": bool(monotone),
        },
        tolerance=0.8 * target,
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
    )
