//! Checkable estimates and identities: norms, energy, the Gronwall bound,
//! the algebraic identity/inequality kernels, balance-law residuals,
//! blow-up bound checks, sign monitoring, Hölder-exponent and eps-scaling
//! fits.

use serde::{Deserialize, Serialize};

use crate::coeffs::SpeedModel;
use crate::error::{Error, Result};
use crate::numerics::{abs_pow, line_fit, trapz, trapz_uniform};
use crate::riccati::Constants;
use crate::solver::{TerminalEvent, Trajectory};
use crate::state::{FieldState, Grid1D};

/// One checked inequality: pass iff margin = right - left >= -tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    pub left: f64,
    pub right: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundReport {
    fn new(id: &str, left: f64, right: f64, tolerance: f64) -> Self {
        let margin = right - left;
        BoundReport {
            id: id.to_string(),
            left,
            right,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}

/// Least-squares power-law fit on log-log axes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFit {
    pub abscissae: Vec<f64>,
    pub ordinates: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// rms residual in log space
    pub residual: f64,
}

/// Absolute + relative tolerance used on quadrature-valued bounds.
pub fn quadrature_tolerance(scale: f64) -> f64 {
    1e-9 + 1e-6 * scale.abs()
}

/// Trapezoid integrals of |R|^p and |S|^p over the grid.
pub fn lp_norms(state: &FieldState, grid: &Grid1D, p: f64) -> (f64, f64) {
    let dx = grid.dx();
    let r: Vec<f64> = state.r.iter().map(|&v| abs_pow(v, p)).collect();
    let s: Vec<f64> = state.s.iter().map(|&v| abs_pow(v, p)).collect();
    (trapz_uniform(&r, dx), trapz_uniform(&s, dx))
}

/// Trapezoid energy integral u_t^2 + c(u)^2 u_x^2 with the primitive
/// derivatives reconstructed from (R, S).
pub fn energy(state: &FieldState, grid: &Grid1D, model: &SpeedModel) -> f64 {
    let vals: Vec<f64> = (0..state.len())
        .map(|i| {
            let c = model.c_raw(state.u[i]);
            let ut = state.u_t(i);
            let ux = (state.r[i] - state.s[i]) / (2.0 * c);
            ut * ut + c * c * ux * ux
        })
        .collect();
    trapz_uniform(&vals, grid.dx())
}

/// Residual of the exact algebraic identity
/// (R-S)(|R|^p - |S|^p) - (R-S)^2 (|R|^(p-2) R + |S|^(p-2) S)
///   = RS (R-S)(|R|^(p-2) - |S|^(p-2)).
pub fn key_identity_residual(r: f64, s: f64, p: f64) -> f64 {
    let rp = abs_pow(r, p);
    let sp = abs_pow(s, p);
    let rpm2 = abs_pow(r, p - 2.0);
    let spm2 = abs_pow(s, p - 2.0);
    let lhs = (r - s) * (rp - sp) - (r - s) * (r - s) * (rpm2 * r + spm2 * s);
    let rhs = r * s * (r - s) * (rpm2 - spm2);
    (lhs - rhs).abs()
}

/// Margin of the inequality |S| |R-S| ||R|^(p-2) - |S|^(p-2)| <= 4(|R|^p + |S|^p).
pub fn key_inequality_margin(r: f64, s: f64, p: f64) -> f64 {
    let lhs = s.abs() * (r - s).abs() * (abs_pow(r, p - 2.0) - abs_pow(s, p - 2.0)).abs();
    4.0 * (abs_pow(r, p) + abs_pow(s, p)) - lhs
}

/// End of the resolved measurement window: 95% of the final time on runs that
/// terminated in an event (the last stretch of a blow-up run is dominated by
/// the under-resolved spike), the whole run otherwise.
pub fn resolved_window_end(traj: &Trajectory) -> f64 {
    match traj.event {
        TerminalEvent::ReachedTMax => traj.t_final,
        _ => 0.95 * traj.t_final,
    }
}

/// L^(2/lambda) Gronwall bound: lp_sum(t) <= lp_sum(0) e^(C* t) with
/// C* = (2/lambda)(2 - lambda) sup||R||_inf sup||c'/c||_inf measured from the
/// trajectory's own samples.
pub fn gronwall_check(traj: &Trajectory) -> BoundReport {
    let lambda = traj.lambda;
    let sup_r = traj.samples.iter().map(|s| s.max_abs_r).fold(0.0, f64::max);
    let sup_cpc = traj
        .samples
        .iter()
        .map(|s| s.max_cp_over_c)
        .fold(0.0, f64::max);
    let c_star = (2.0 / lambda) * (2.0 - lambda) * sup_r * sup_cpc;
    let lp0 = traj.samples[0].lp_sum;
    let tol = quadrature_tolerance(lp0);
    let mut worst_margin = f64::INFINITY;
    let mut worst_t = 0.0;
    for s in &traj.samples {
        let bound = lp0 * (c_star * s.t).exp();
        let margin = bound - s.lp_sum;
        if margin < worst_margin {
            worst_margin = margin;
            worst_t = s.t;
        }
    }
    let mut rep = BoundReport::new("gronwall_lp", f64::NAN, f64::NAN, tol);
    rep.margin = worst_margin;
    rep.pass = worst_margin >= -tol;
    rep.left = worst_t; // time of the worst margin, for reporting
    rep.right = c_star;
    rep
}

/// Space-integrated residuals of the two balance-law forms, one entry per
/// consecutive snapshot pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BalanceSample {
    pub t_mid: f64,
    /// residual of (1/p) d/dt integral(|R|^p + |S|^p) = integral of source
    pub residual_sum_form: f64,
    /// residual of the subtracted form (1/p) d/dt integral(|S|^p - |R|^p)
    pub residual_diff_form: f64,
}

fn balance_integrands(
    state: &FieldState,
    grid: &Grid1D,
    model: &SpeedModel,
    p: f64,
) -> (f64, f64, f64, f64) {
    let n = state.len();
    let mut q_sum = vec![0.0; n];
    let mut q_diff = vec![0.0; n];
    let mut src_sum = vec![0.0; n];
    let mut src_diff = vec![0.0; n];
    let lambda = 2.0 / p;
    let pref = 0.5 - lambda / 4.0;
    for i in 0..n {
        let (r, s) = (state.r[i], state.s[i]);
        let rp = abs_pow(r, p);
        let sp = abs_pow(s, p);
        q_sum[i] = rp + sp;
        q_diff[i] = sp - rp;
        let c = model.c_raw(state.u[i]);
        let cpc = model.c_prime_raw(state.u[i]) / c;
        let rpm2 = abs_pow(r, p - 2.0);
        let spm2 = abs_pow(s, p - 2.0);
        src_sum[i] = pref * cpc * r * s * (r - s) * (rpm2 - spm2);
        src_diff[i] = pref * cpc * r * s * (s - r) * (rpm2 + spm2);
    }
    let dx = grid.dx();
    (
        trapz_uniform(&q_sum, dx),
        trapz_uniform(&q_diff, dx),
        trapz_uniform(&src_sum, dx),
        trapz_uniform(&src_diff, dx),
    )
}

/// Discrete residual of the Lemma-style balance laws per snapshot pair.
/// The flux terms integrate to zero over the grid (compact support), so the
/// residual compares the time derivative of the integral against the
/// integrated source.
pub fn balance_residual(traj: &Trajectory, p: f64) -> Vec<BalanceSample> {
    let mut out = Vec::new();
    for w in traj.snapshots.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dt = b.t - a.t;
        if dt <= 0.0 {
            continue;
        }
        let (qs_a, qd_a, ss_a, sd_a) = balance_integrands(a, &traj.grid, &traj.model, p);
        let (qs_b, qd_b, ss_b, sd_b) = balance_integrands(b, &traj.grid, &traj.model, p);
        out.push(BalanceSample {
            t_mid: 0.5 * (a.t + b.t),
            residual_sum_form: ((qs_b - qs_a) / (p * dt) - 0.5 * (ss_a + ss_b)).abs(),
            residual_diff_form: ((qd_b - qd_a) / (p * dt) - 0.5 * (sd_a + sd_b)).abs(),
        });
    }
    out
}

/// Mean of the sum-form residuals (the single number used in refinement
/// studies).
pub fn balance_residual_mean(samples: &[BalanceSample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|b| b.residual_sum_form).sum::<f64>() / samples.len() as f64
}

/// The three blow-up theorem bounds, measured over the resolved window:
/// sup|R| vs C*1 t_b^(1-lambda) eps^lambda, sup lp_sum vs the hypotenuse
/// constant times eps, and the c(u) range vs [c0/2, 2 c0].
pub fn theorem_bounds_check(traj: &Trajectory, consts: &Constants, eps: f64) -> Vec<BoundReport> {
    let window = resolved_window_end(traj);
    let lambda = consts.lambda;
    let mut sup_r: f64 = 0.0;
    let mut sup_lp: f64 = 0.0;
    let mut min_c = f64::INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    for s in traj.samples.iter().filter(|s| s.t <= window) {
        sup_r = sup_r.max(s.max_abs_r);
        sup_lp = sup_lp.max(s.lp_sum);
        min_c = min_c.min(s.min_c);
        max_c = max_c.max(s.max_c);
    }
    let r_bound = consts.cstar1 * consts.t_b.powf(1.0 - lambda) * eps.powf(lambda);
    let lp_bound = (2f64.powf(4.0 / lambda) * consts.c0.powf(2.0 / lambda) * consts.phi_x_norm_p
        + 1.0)
        * eps;
    let mut c_range = BoundReport::new("c_range", min_c, max_c, quadrature_tolerance(consts.c0));
    c_range.margin = (min_c - 0.5 * consts.c0).min(2.0 * consts.c0 - max_c);
    c_range.pass = c_range.margin >= -c_range.tolerance;
    vec![
        BoundReport::new("sup_r", sup_r, r_bound, quadrature_tolerance(r_bound)),
        BoundReport::new("lp_sum", sup_lp, lp_bound, quadrature_tolerance(lp_bound)),
        c_range,
    ]
}

/// Signs of u_t and u_x at the cell driving a blow-up event.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignMonitorReport {
    pub t: f64,
    pub x: f64,
    pub driver: char,
    pub u_t: f64,
    pub u_x: f64,
    pub abs_r: f64,
    pub abs_s: f64,
}

/// At the blow-up cell of the final snapshot, report sign(u_t), sign(u_x)
/// and the local |R|, |S| (the non-driving one should stay bounded).
pub fn blowup_sign_monitor(traj: &Trajectory) -> Result<SignMonitorReport> {
    if traj.event != TerminalEvent::BlowupThresholdCrossed {
        return Err(Error::NoBlowup {
            t_max: traj.t_final,
        });
    }
    let state = traj.final_state();
    let mut idx = 0;
    let mut best = 0.0;
    for i in 0..state.len() {
        let a = state.r[i].abs().max(state.s[i].abs());
        if a > best {
            best = a;
            idx = i;
        }
    }
    let c = traj.model.c_raw(state.u[idx]);
    Ok(SignMonitorReport {
        t: state.t,
        x: traj.grid.x(idx),
        driver: if state.s[idx].abs() >= state.r[idx].abs() { 'S' } else { 'R' },
        u_t: state.u_t(idx),
        u_x: (state.r[idx] - state.s[idx]) / (2.0 * c),
        abs_r: state.r[idx].abs(),
        abs_s: state.s[idx].abs(),
    })
}

fn loglog_fit(points: &[(f64, f64)]) -> ScalingFit {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, residual) = line_fit(&xs, &ys);
    ScalingFit {
        abscissae: points.iter().map(|p| p.0).collect(),
        ordinates: points.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        residual,
    }
}

/// Spatial and temporal Hölder-exponent fits near the end of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderFit {
    pub snapshot_t: f64,
    pub spatial: ScalingFit,
    pub temporal: Option<ScalingFit>,
}

/// Fit the spatial modulus of continuity w(h) = max_x |u(x+h) - u(x)| on
/// dyadic scales h in [4 dx, support/8] at the last snapshot inside the
/// window, plus the analogous temporal fit at the max-|S| location.
pub fn holder_exponent(traj: &Trajectory, window: (f64, f64)) -> Result<HolderFit> {
    let (t_lo, t_hi) = window;
    let snap = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= t_lo && s.t <= t_hi)
        .next_back()
        .ok_or_else(|| Error::OutOfRange(format!("no snapshot inside window [{t_lo}, {t_hi}]")))?;
    let spatial = spatial_modulus_fit(snap, &traj.grid)?;
    let temporal = temporal_modulus_fit(traj, snap, window);
    Ok(HolderFit {
        snapshot_t: snap.t,
        spatial,
        temporal,
    })
}

fn spatial_modulus_fit(state: &FieldState, grid: &Grid1D) -> Result<ScalingFit> {
    let n = state.len();
    let dx = grid.dx();
    let umax = state.u.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if umax == 0.0 {
        return Err(Error::InsufficientResolution {
            usable: 0,
            needed: 4,
        });
    }
    // measured support of u
    let cutoff = 1e-13 * umax;
    let lo = state.u.iter().position(|&v| v.abs() > cutoff).unwrap_or(0);
    let hi = n - 1 - state.u.iter().rev().position(|&v| v.abs() > cutoff).unwrap_or(0);
    let width = (hi - lo).max(1) as f64 * dx;
    let h_cap = width / 8.0;
    // steepest cell marks the incipient singularity; the modulus is taken
    // over the steep region around it so the smooth bulk does not inflate
    // the fitted exponent
    let mut steepest = 1;
    let mut best = 0.0f64;
    for i in 1..n {
        let g = (state.u[i] - state.u[i - 1]).abs();
        if g > best {
            best = g;
            steepest = i;
        }
    }
    let i_lo = steepest.saturating_sub((h_cap / dx).ceil() as usize);
    let i_hi = (steepest + (h_cap / dx).ceil() as usize).min(n - 1);
    let floor = 10.0 * f64::EPSILON * umax;
    let mut points = Vec::new();
    let mut m = 4usize;
    while m as f64 * dx <= h_cap {
        let mut w: f64 = 0.0;
        for i in i_lo..=i_hi.min(n - 1 - m) {
            w = w.max((state.u[i + m] - state.u[i]).abs());
        }
        if w > floor {
            points.push((m as f64 * dx, w));
        }
        m *= 2;
    }
    if points.len() < 4 {
        return Err(Error::InsufficientResolution {
            usable: points.len(),
            needed: 4,
        });
    }
    Ok(loglog_fit(&points))
}

fn temporal_modulus_fit(
    traj: &Trajectory,
    snap: &FieldState,
    window: (f64, f64),
) -> Option<ScalingFit> {
    // anchor at the max-|S| cell of the chosen snapshot
    let mut idx = 0;
    let mut best = 0.0;
    for i in 0..snap.len() {
        if snap.s[i].abs() > best {
            best = snap.s[i].abs();
            idx = i;
        }
    }
    let series: Vec<(f64, f64)> = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= window.0 && s.t <= window.1)
        .map(|s| (s.t, s.u[idx]))
        .collect();
    if series.len() < 9 {
        return None;
    }
    let umax = series.iter().map(|&(_, u)| u.abs()).fold(0.0, f64::max);
    let floor = 10.0 * f64::EPSILON * umax.max(f64::MIN_POSITIVE);
    let mut points = Vec::new();
    let mut lag = 1usize;
    while lag * 8 <= series.len() {
        let mut w: f64 = 0.0;
        let mut tau = 0.0;
        let mut cnt = 0;
        for j in 0..series.len() - lag {
            w = w.max((series[j + lag].1 - series[j].1).abs());
            tau += series[j + lag].0 - series[j].0;
            cnt += 1;
        }
        if w > floor && cnt > 0 {
            points.push((tau / cnt as f64, w));
        }
        lag *= 2;
    }
    if points.len() < 4 {
        return None;
    }
    Some(loglog_fit(&points))
}

/// Least-squares slope of log(measured) against log(eps).
pub fn epsilon_scaling_fit(sweep: &[(f64, f64)]) -> Result<ScalingFit> {
    let mut eps: Vec<f64> = sweep.iter().map(|p| p.0).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup_by(|a, b| (*a - *b).abs() < f64::EPSILON * a.abs());
    if eps.len() < 3 {
        return Err(Error::DegenerateAbscissae(eps.len()));
    }
    if sweep.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(Error::Validation(
            "scaling fit needs positive abscissae and ordinates".into(),
        ));
    }
    Ok(loglog_fit(sweep))
}

/// Time-quadrature of |R|^p + |S|^p at the grid node nearest x over [t1, t2],
/// evaluated on stored snapshots with linear interpolation at the ends.
pub fn temporal_lp_at_point(traj: &Trajectory, x: f64, t1: f64, t2: f64, p: f64) -> Result<f64> {
    if !(t2 > t1) {
        return Err(Error::OutOfRange(format!("need t2 > t1, got [{t1}, {t2}]")));
    }
    if x < traj.grid.x_min || x > traj.grid.x_max {
        return Err(Error::OutOfRange(format!("x = {x} outside the grid")));
    }
    let t0 = traj.snapshots.first().map(|s| s.t).unwrap_or(0.0);
    let t_end = traj.snapshots.last().map(|s| s.t).unwrap_or(0.0);
    if t1 < t0 - 1e-12 || t2 > t_end + 1e-12 {
        return Err(Error::OutOfRange(format!(
            "[{t1}, {t2}] outside stored snapshot range [{t0}, {t_end}]"
        )));
    }
    let idx = traj.grid.nearest(x);
    let value = |s: &FieldState| abs_pow(s.r[idx], p) + abs_pow(s.s[idx], p);
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (k, s) in traj.snapshots.iter().enumerate() {
        if s.t < t1 {
            if k + 1 < traj.snapshots.len() && traj.snapshots[k + 1].t > t1 {
                let nxt = &traj.snapshots[k + 1];
                let f = (t1 - s.t) / (nxt.t - s.t);
                ts.push(t1);
                vs.push(value(s) * (1.0 - f) + value(nxt) * f);
            }
            continue;
        }
        if s.t > t2 {
            if k > 0 && traj.snapshots[k - 1].t < t2 {
                let prev = &traj.snapshots[k - 1];
                let f = (t2 - prev.t) / (s.t - prev.t);
                ts.push(t2);
                vs.push(value(prev) * (1.0 - f) + value(s) * f);
            }
            break;
        }
        ts.push(s.t);
        vs.push(value(s));
    }
    Ok(trapz(&ts, &vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{run_from, RunConfig};
    use crate::state::ProfileModel;

    #[test]
    fn lp_norms_zero_and_hat() {
        let grid = Grid1D::new(-1.0, 1.0, 4000).unwrap();
        let st = FieldState::zeros(0.0, grid.len());
        assert_eq!(lp_norms(&st, &grid, 2.0), (0.0, 0.0));

        // piecewise-linear hat of height 1 over width 1: integral of square = 1/3
        let mut st = st;
        for i in 0..grid.len() {
            let x = grid.x(i);
            st.s[i] = (1.0 - 2.0 * x.abs()).max(0.0);
        }
        let (_, qs) = lp_norms(&st, &grid, 2.0);
        assert!((qs - 1.0 / 3.0).abs() < 1e-6, "{qs}");
    }

    #[test]
    fn energy_zero_and_pure_ut() {
        let grid = Grid1D::new(-1.0, 1.0, 64).unwrap();
        let model = SpeedModel::power(1.0);
        let st = FieldState::zeros(0.0, grid.len());
        assert_eq!(energy(&st, &grid, &model), 0.0);
        // R = S: u_x = 0 so E = integral u_t^2
        let mut st = st;
        st.r.iter_mut().for_each(|v| *v = 2.0);
        st.s.iter_mut().for_each(|v| *v = 2.0);
        let e = energy(&st, &grid, &model);
        assert!((e - 4.0 * 2.0).abs() < 1e-12, "{e}");
    }

    #[test]
    fn identity_trivial_zeros() {
        assert_eq!(key_identity_residual(0.7, 0.7, 4.0), 0.0);
        assert_eq!(key_identity_residual(1.3, 0.0, 2.0), 0.0);
    }

    #[test]
    fn inequality_trivial_margins() {
        // S = 0: margin = 4|R|^p
        let m = key_inequality_margin(2.0, 0.0, 3.0);
        assert!((m - 4.0 * 8.0).abs() < 1e-12);
        // |R| = |S|: difference of equal powers vanishes, margin = 8|R|^p
        let m = key_inequality_margin(1.5, -1.5, 4.0);
        assert!((m - 8.0 * 1.5f64.powi(4)).abs() < 1e-10);
    }

    #[test]
    fn zero_trajectory_gronwall_and_balance() {
        let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let mut cfg = RunConfig::new(1.0, 1.0, SpeedModel::power(1.0), grid, 0.5);
        cfg.record_every = 4;
        let traj = run_from(&cfg, FieldState::zeros(0.0, grid.len())).unwrap();
        let rep = gronwall_check(&traj);
        assert!(rep.pass);
        let res = balance_residual(&traj, 2.0);
        assert!(res.iter().all(|b| b.residual_sum_form == 0.0));
    }

    #[test]
    fn scaling_fit_exact_line_and_errors() {
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4].iter().map(|&e| (e, e)).collect();
        let fit = epsilon_scaling_fit(&pts).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(matches!(
            epsilon_scaling_fit(&pts[..2]),
            Err(Error::DegenerateAbscissae(2))
        ));
    }

    #[test]
    fn holder_fit_smooth_control_is_near_one() {
        // resolved smooth Gaussian: Lipschitz, fitted exponent >= 0.95
        let grid = Grid1D::new(-10.0, 10.0, 8192).unwrap();
        let mut st = FieldState::zeros(0.0, grid.len());
        for i in 0..grid.len() {
            let x = grid.x(i);
            st.u[i] = (-0.5 * (x / 2.0) * (x / 2.0)).exp();
            st.s[i] = st.u[i];
        }
        let traj = Trajectory {
            model: SpeedModel::power(1.0),
            lambda: 1.0,
            eps: None,
            grid,
            lp_exponent: 2.0,
            blowup_threshold: f64::INFINITY,
            snapshots: vec![st],
            samples: vec![],
            event: TerminalEvent::ReachedTMax,
            t_final: 0.0,
            steps: 0,
        };
        let fit = holder_exponent(&traj, (0.0, 1.0)).unwrap();
        assert!(
            fit.spatial.slope >= 0.95,
            "smooth control slope = {}",
            fit.spatial.slope
        );
    }

    #[test]
    fn temporal_lp_transport_matches_direct_sum() {
        // constant-speed transport: |R|^p + |S|^p at a point integrates the
        // translated profile exactly
        let grid = Grid1D::new(-5.0, 5.0, 1024).unwrap();
        let model = SpeedModel::affine(1.0, 0.0);
        let mut cfg = RunConfig::new(1.0, 1.0, model.clone(), grid, 1.0);
        cfg.record_every = 1;
        let init =
            crate::state::build_initial_data(&ProfileModel::BumpX, 1.0, &model, &grid).unwrap();
        let traj = run_from(&cfg, init).unwrap();
        let x = 0.5;
        let q = temporal_lp_at_point(&traj, x, 0.0, 1.0, 2.0).unwrap();
        // direct: S(t, x) = S0(x - t), R = 0
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for s in &traj.snapshots {
            let y = x - s.t;
            let s_exact = -2.0 * ProfileModel::BumpX.eval_prime(y);
            ts.push(s.t);
            vs.push(s_exact * s_exact);
        }
        let direct = trapz(&ts, &vs);
        assert!((q - direct).abs() < 2e-2 * direct.abs().max(1.0), "{q} vs {direct}");
        assert!(matches!(
            temporal_lp_at_point(&traj, 99.0, 0.0, 1.0, 2.0),
            Err(Error::OutOfRange(_))
        ));
    }
}
