//! Companion models from the concluding remarks: the generalized Carlemann
//! system with unit characteristic speeds, the lambda = 2 Riemann invariants
//! with the d'Alembert identity, and the degeneracy-threshold experiment.

use serde::{Deserialize, Serialize};

use crate::characteristics::{trace_curve, CharDirection};
use crate::coeffs::SpeedModel;
use crate::error::{Error, Result};
use crate::numerics::{cumtrapz_uniform, lagrange4_uniform, trapz_uniform};
use crate::solver::{advect_rhs, DiagSample, TerminalEvent, Trajectory, DEFAULT_BLOWUP_FACTOR};
use crate::state::{FieldState, Grid1D, ProfileModel};

/// Initial profile for one Carlemann field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialProfile {
    Uniform { value: f64 },
    Scaled { profile: ProfileModel, amplitude: f64 },
}

impl InitialProfile {
    fn eval(&self, x: f64) -> f64 {
        match self {
            InitialProfile::Uniform { value } => *value,
            InitialProfile::Scaled { profile, amplitude } => amplitude * profile.eval(x),
        }
    }

    fn is_uniform(&self) -> bool {
        matches!(self, InitialProfile::Uniform { .. })
    }
}

/// The generalized Carlemann system
///
/// ```text
/// dR/dt - dR/dx = a1 R^2 + b1 RS + c1 S^2
/// dS/dt + dS/dx = a2 S^2 + b2 RS + c2 R^2
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlemannConfig {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub r0: InitialProfile,
    pub s0: InitialProfile,
    pub grid: Grid1D,
    pub cfl: f64,
    pub t_max: f64,
    pub blowup_threshold: Option<f64>,
    pub record_every: usize,
    pub scheme_order: u8,
}

impl CarlemannConfig {
    pub fn new(grid: Grid1D, t_max: f64) -> Self {
        CarlemannConfig {
            a1: 0.0,
            b1: 0.0,
            c1: 0.0,
            a2: 0.0,
            b2: 0.0,
            c2: 0.0,
            r0: InitialProfile::Uniform { value: 0.0 },
            s0: InitialProfile::Uniform { value: 0.0 },
            grid,
            cfl: 0.4,
            t_max,
            blowup_threshold: None,
            record_every: 1,
            scheme_order: 2,
        }
    }

    /// Classical Carlemann sources: dR/dt - dR/dx = S^2 - R^2 and
    /// dS/dt + dS/dx = R^2 - S^2.
    pub fn classical(grid: Grid1D, t_max: f64) -> Self {
        let mut cfg = Self::new(grid, t_max);
        cfg.a1 = -1.0;
        cfg.c1 = 1.0;
        cfg.a2 = -1.0;
        cfg.c2 = 1.0;
        cfg
    }

    /// Scalar Riccati preset: only a1 = 1, uniform R0 = 1, S0 = 0, so
    /// R follows dR/dt = R^2 and blows up at t = 1.
    pub fn scalar_riccati(grid: Grid1D, t_max: f64) -> Self {
        let mut cfg = Self::new(grid, t_max);
        cfg.a1 = 1.0;
        cfg.r0 = InitialProfile::Uniform { value: 1.0 };
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Validation(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(self.t_max > 0.0) {
            return Err(Error::Validation("t_max must be positive".into()));
        }
        if self.scheme_order != 1 && self.scheme_order != 2 {
            return Err(Error::Validation(format!(
                "scheme_order must be 1 or 2, got {}",
                self.scheme_order
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Validation("record_every must be at least 1".into()));
        }
        // compactly supported data must respect the unit-speed light cone
        if !(self.r0.is_uniform() && self.s0.is_uniform()) {
            let reach = 1.05 * self.t_max;
            if self.grid.x_max - 1.0 < reach || -1.0 - self.grid.x_min < reach {
                return Err(Error::Validation(
                    "grid too narrow for the unit-speed light cone of the profile data".into(),
                ));
            }
        }
        Ok(())
    }
}

fn carlemann_diag(state: &FieldState, dx: f64, dt: f64) -> DiagSample {
    let n = state.len();
    let mut max_abs_r: f64 = 0.0;
    let mut max_abs_s: f64 = 0.0;
    let mut max_r = f64::NEG_INFINITY;
    let mut max_s = f64::NEG_INFINITY;
    let mut lp = vec![0.0; n];
    let mut en = vec![0.0; n];
    for i in 0..n {
        let (r, s) = (state.r[i], state.s[i]);
        max_abs_r = max_abs_r.max(r.abs());
        max_abs_s = max_abs_s.max(s.abs());
        max_r = max_r.max(r);
        max_s = max_s.max(s);
        lp[i] = r * r + s * s;
        en[i] = 0.5 * (r * r + s * s);
    }
    DiagSample {
        t: state.t,
        dt,
        max_abs_r,
        max_abs_s,
        lp_sum: trapz_uniform(&lp, dx),
        min_c: 1.0,
        max_c: 1.0,
        energy: trapz_uniform(&en, dx),
        max_r,
        max_s,
        max_cp_over_c: 0.0,
    }
}

/// Run the Carlemann system with the same upwind + SSP machinery as the main
/// solver, c frozen at 1.
pub fn carlemann_run(cfg: &CarlemannConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid;
    let n = grid.len();
    let dx = grid.dx();
    let mut state = FieldState::zeros(0.0, n);
    for i in 0..n {
        let x = grid.x(i);
        state.r[i] = cfg.r0.eval(x);
        state.s[i] = cfg.s0.eval(x);
    }
    let init_norm = state
        .r
        .iter()
        .chain(state.s.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let threshold = cfg.blowup_threshold.unwrap_or(if init_norm > 0.0 {
        DEFAULT_BLOWUP_FACTOR * init_norm
    } else {
        f64::INFINITY
    });

    let speeds = vec![1.0; n];
    let mut slope_r = vec![0.0; n];
    let mut slope_s = vec![0.0; n];
    let mut dr = vec![0.0; n];
    let mut ds = vec![0.0; n];
    let sources = |r: f64, s: f64, _i: usize| {
        (
            cfg.a1 * r * r + cfg.b1 * r * s + cfg.c1 * s * s,
            cfg.a2 * s * s + cfg.b2 * r * s + cfg.c2 * r * r,
        )
    };

    let mut snapshots = vec![state.clone()];
    let mut samples = vec![carlemann_diag(&state, dx, 0.0)];
    let mut steps = 0u64;
    let mut since = 0usize;
    let event;
    loop {
        if state.t >= cfg.t_max - 1e-14 * cfg.t_max {
            event = TerminalEvent::ReachedTMax;
            break;
        }
        let dt = (cfg.cfl * dx).min(cfg.t_max - state.t);
        let mut next = FieldState::zeros(state.t + dt, n);
        // SSP-RK2 over advection at speeds -+1 plus the quadratic sources
        advect_rhs(&state.r, &state.s, &speeds, dx, cfg.scheme_order, sources, &mut dr, &mut ds, &mut slope_r, &mut slope_s);
        let r1: Vec<f64> = (0..n).map(|i| state.r[i] + dt * dr[i]).collect();
        let s1: Vec<f64> = (0..n).map(|i| state.s[i] + dt * ds[i]).collect();
        if cfg.scheme_order == 1 {
            next.r = r1;
            next.s = s1;
        } else {
            advect_rhs(&r1, &s1, &speeds, dx, cfg.scheme_order, sources, &mut dr, &mut ds, &mut slope_r, &mut slope_s);
            for i in 0..n {
                next.r[i] = 0.5 * (state.r[i] + r1[i] + dt * dr[i]);
                next.s[i] = 0.5 * (state.s[i] + s1[i] + dt * ds[i]);
            }
        }
        steps += 1;
        state = next;
        let sample = carlemann_diag(&state, dx, dt);
        let finite = state.all_finite();
        let blown = sample.max_abs_r.max(sample.max_abs_s) >= threshold;
        samples.push(sample);
        since += 1;
        if !finite {
            event = TerminalEvent::NonfiniteValue;
            break;
        }
        if blown {
            event = TerminalEvent::BlowupThresholdCrossed;
            break;
        }
        if since >= cfg.record_every {
            snapshots.push(state.clone());
            since = 0;
        }
    }
    if snapshots.last().map(|s| s.t) != Some(state.t) {
        snapshots.push(state.clone());
    }
    Ok(Trajectory {
        model: SpeedModel::affine(1.0, 0.0),
        lambda: 1.0,
        eps: None,
        grid,
        lp_exponent: 2.0,
        blowup_threshold: threshold,
        snapshots,
        samples,
        event,
        t_final: state.t,
        steps,
    })
}

/// Riemann invariants of the lambda = 2 power-model system:
/// w_+- = (1+u)^(a+1)/(a+1) +- cumulative integral of u_t from the left edge.
pub fn riemann_invariants(
    u: &[f64],
    u_t: &[f64],
    a: f64,
    grid: &Grid1D,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if a == -1.0 {
        return Err(Error::DegenerateExponent);
    }
    if u.len() != u_t.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: u_t.len(),
        });
    }
    for &ui in u {
        if 1.0 + ui <= 0.0 {
            return Err(Error::DomainViolation {
                u: ui,
                lo: -1.0,
                hi: f64::INFINITY,
            });
        }
    }
    let cumulative = cumtrapz_uniform(u_t, grid.dx());
    let mut w_plus = Vec::with_capacity(u.len());
    let mut w_minus = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let head = (1.0 + u[i]).powf(a + 1.0) / (a + 1.0);
        w_plus.push(head + cumulative[i]);
        w_minus.push(head - cumulative[i]);
    }
    Ok((w_plus, w_minus))
}

/// Invert the invariants back to u: u = ((a+1)(w_+ + w_-)/2)^(1/(a+1)) - 1.
pub fn invert_riemann(w_plus: &[f64], w_minus: &[f64], a: f64) -> Result<Vec<f64>> {
    if a == -1.0 {
        return Err(Error::DegenerateExponent);
    }
    if w_plus.len() != w_minus.len() {
        return Err(Error::LengthMismatch {
            left: w_plus.len(),
            right: w_minus.len(),
        });
    }
    Ok(w_plus
        .iter()
        .zip(w_minus)
        .map(|(&wp, &wm)| ((a + 1.0) * 0.5 * (wp + wm)).powf(1.0 / (a + 1.0)) - 1.0)
        .collect())
}

fn power_exponent(traj: &Trajectory) -> Result<f64> {
    match traj.model {
        SpeedModel::Power([a]) => Ok(a),
        _ => Err(Error::Validation(
            "d'Alembert identity needs the power speed model".into(),
        )),
    }
}

/// d'Alembert identity residual at one sample point (t, x):
/// |2(1+u)^(a+1)/(a+1) - (w_+(0, x_-(0)) - w_-(0, x_+(0)))| with the feet of
/// the backward characteristics through (t, x).
pub fn dalembert_residual_at(traj: &Trajectory, t: f64, x: f64) -> Result<f64> {
    let a = power_exponent(traj)?;
    if (traj.lambda - 2.0).abs() > 1e-12 {
        return Err(Error::Validation(format!(
            "d'Alembert identity holds at lambda = 2, trajectory has {}",
            traj.lambda
        )));
    }
    let init = &traj.snapshots[0];
    let u_t0: Vec<f64> = (0..init.len()).map(|i| init.u_t(i)).collect();
    let (w_plus0, w_minus0) = riemann_invariants(&init.u, &u_t0, a, &traj.grid)?;

    let plus = trace_curve(traj, (t, x), CharDirection::Plus)?;
    let minus = trace_curve(traj, (t, x), CharDirection::Minus)?;
    let t0 = traj.snapshots[0].t;
    if plus.foot().t > t0 + 1e-10 || minus.foot().t > t0 + 1e-10 {
        return Err(Error::TriangleExitsGrid { t, x });
    }
    let foot_plus = plus.foot().x;
    let foot_minus = minus.foot().x;
    let x0 = traj.grid.x_min;
    let dx = traj.grid.dx();
    // w_+ is invariant along minus-curves, w_- along plus-curves
    let w_plus_val = lagrange4_uniform(&w_plus0, x0, dx, foot_minus);
    let w_minus_val = lagrange4_uniform(&w_minus0, x0, dx, foot_plus);

    let snaps = &traj.snapshots;
    let k = snaps.partition_point(|s| s.t <= t).clamp(1, snaps.len() - 1);
    let (sa, sb) = (&snaps[k - 1], &snaps[k]);
    let f = if sb.t > sa.t {
        ((t - sa.t) / (sb.t - sa.t)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let u_here = lagrange4_uniform(&sa.u, x0, dx, x) * (1.0 - f)
        + lagrange4_uniform(&sb.u, x0, dx, x) * f;
    let lhs = 2.0 * (1.0 + u_here).powf(a + 1.0) / (a + 1.0);
    Ok((lhs - (w_plus_val - w_minus_val)).abs())
}

/// Max d'Alembert residual over an interior sample fan (several times and
/// positions whose backward characteristics stay inside the grid).
pub fn dalembert_residual(traj: &Trajectory) -> Result<f64> {
    let t_end = traj.t_final;
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for kt in 1..=4 {
        let t = t_end * kt as f64 / 4.0;
        // both backward characteristics travel at speed <= max c
        let max_c = traj
            .samples
            .iter()
            .map(|s| s.max_c)
            .fold(1.0f64, f64::max);
        let margin = 1.1 * max_c * t + traj.grid.dx();
        let lo = traj.grid.x_min + margin;
        let hi = traj.grid.x_max - margin;
        if lo >= hi {
            continue;
        }
        for kx in 0..5 {
            let x = lo + (hi - lo) * kx as f64 / 4.0;
            worst = worst.max(dalembert_residual_at(traj, t, x)?);
            checked += 1;
        }
    }
    if checked == 0 {
        return Err(Error::TriangleExitsGrid {
            t: t_end,
            x: traj.grid.x_min,
        });
    }
    Ok(worst)
}

/// Degeneracy-threshold report for the lambda = 2 power-model scenarios.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegeneracyReport {
    /// integral of u_t(0, x) over the grid
    pub u1_integral: f64,
    /// -2 integral_{-1}^{0} (1+theta)^a dtheta = -2/(a+1)
    pub threshold: f64,
    pub min_one_plus_u_initial: f64,
    pub min_one_plus_u_final: f64,
    pub degeneracy_event: bool,
    /// true when the run outcome matches the side of the threshold
    pub consistent: bool,
    /// hypothesis notes (negativity of R, S at t = 0), reported not thrown
    pub hypothesis_notes: Vec<String>,
}

/// Compare a run against the degeneracy threshold -2/(a+1).
pub fn degeneracy_monitor(traj: &Trajectory, a: f64) -> Result<DegeneracyReport> {
    if a <= -1.0 {
        return Err(Error::Validation("threshold formula needs a > -1".into()));
    }
    let init = &traj.snapshots[0];
    let u_t0: Vec<f64> = (0..init.len()).map(|i| init.u_t(i)).collect();
    let u1_integral = trapz_uniform(&u_t0, traj.grid.dx());
    let threshold = -2.0 / (a + 1.0);
    let mut notes = Vec::new();
    if init.r.iter().any(|&v| v > 1e-12) {
        notes.push("R(0, .) is not everywhere non-positive".into());
    }
    if init.s.iter().any(|&v| v > 1e-12) {
        notes.push("S(0, .) is not everywhere non-positive".into());
    }
    let min_u = |st: &FieldState| st.u.iter().fold(f64::INFINITY, |m, &v| m.min(1.0 + v));
    let min_initial = min_u(init);
    let min_final = min_u(traj.final_state());
    let degeneracy_event = traj.event == TerminalEvent::Degeneracy;
    let below = u1_integral < threshold;
    let declined = min_final < 0.8 * min_initial;
    let consistent = if below {
        degeneracy_event || declined
    } else {
        !degeneracy_event
    };
    Ok(DegeneracyReport {
        u1_integral,
        threshold,
        min_one_plus_u_initial: min_initial,
        min_one_plus_u_final: min_final,
        degeneracy_event,
        consistent,
        hypothesis_notes: notes,
    })
}

/// The two concluding-remark scenario presets: data u0 = 0,
/// u1 = amplitude * bump with the amplitude on either side of the threshold.
pub fn degeneracy_scenario(
    degenerate_side: bool,
    n: usize,
) -> Result<(crate::solver::RunConfig, FieldState)> {
    let grid = Grid1D::new(-6.0, 6.0, n)?;
    let mut cfg = crate::solver::RunConfig::new(2.0, 1.0, SpeedModel::power(1.0), grid, 3.0);
    cfg.record_every = 8;
    let amplitude = if degenerate_side { -4.0 } else { -0.5 };
    let profile = ProfileModel::PolyBump(vec![1.0]);
    let mut st = FieldState::zeros(0.0, grid.len());
    for i in 0..grid.len() {
        let v = amplitude * profile.eval(grid.x(i));
        st.r[i] = v;
        st.s[i] = v;
    }
    Ok((cfg, st))
}

/// Drift of w_+ along traced minus-characteristics (invariance check for the
/// lambda = 2 system): max over a few anchors of |w_+(t, x_-(t)) - w_+(0, x_-(0))|.
pub fn invariant_drift(traj: &Trajectory, anchors: &[(f64, f64)]) -> Result<f64> {
    let a = power_exponent(traj)?;
    let init = &traj.snapshots[0];
    let u_t0: Vec<f64> = (0..init.len()).map(|i| init.u_t(i)).collect();
    let (w_plus0, _) = riemann_invariants(&init.u, &u_t0, a, &traj.grid)?;
    let x0 = traj.grid.x_min;
    let dx = traj.grid.dx();
    let mut worst: f64 = 0.0;
    for &anchor in anchors {
        let curve = trace_curve(traj, anchor, CharDirection::Minus)?;
        let foot = curve.foot();
        let w_foot = lagrange4_uniform(&w_plus0, x0, dx, foot.x);
        // w_+ at the anchor time needs the cumulative integral at that time
        let snaps = &traj.snapshots;
        let k = snaps
            .partition_point(|s| s.t <= anchor.0)
            .clamp(1, snaps.len() - 1);
        let (sa, sb) = (&snaps[k - 1], &snaps[k]);
        let f = if sb.t > sa.t {
            ((anchor.0 - sa.t) / (sb.t - sa.t)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let w_at = |st: &FieldState| -> Result<f64> {
            let u_t: Vec<f64> = (0..st.len()).map(|i| st.u_t(i)).collect();
            let (wp, _) = riemann_invariants(&st.u, &u_t, a, &traj.grid)?;
            Ok(lagrange4_uniform(&wp, x0, dx, anchor.1))
        };
        let w_anchor = w_at(sa)? * (1.0 - f) + w_at(sb)? * f;
        worst = worst.max((w_anchor - w_foot).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_uniform_symmetric_state_is_stationary() {
        // R0 = S0 = k: classical sources vanish identically
        let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let mut cfg = CarlemannConfig::classical(grid, 1.0);
        cfg.r0 = InitialProfile::Uniform { value: 0.7 };
        cfg.s0 = InitialProfile::Uniform { value: 0.7 };
        cfg.record_every = 64;
        let traj = carlemann_run(&cfg).unwrap();
        assert_eq!(traj.event, TerminalEvent::ReachedTMax);
        let fin = traj.final_state();
        for i in 0..fin.len() {
            assert!((fin.r[i] - 0.7).abs() < 1e-10);
            assert!((fin.s[i] - 0.7).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_coefficients_pure_transport() {
        let grid = Grid1D::new(-4.0, 4.0, 512).unwrap();
        let mut cfg = CarlemannConfig::new(grid, 1.0);
        cfg.s0 = InitialProfile::Scaled {
            profile: ProfileModel::BumpX,
            amplitude: 1.0,
        };
        cfg.t_max = 1.0;
        cfg.record_every = 1 << 30;
        let traj = carlemann_run(&cfg).unwrap();
        let fin = traj.final_state();
        // S translated right by t = 1
        let mut err: f64 = 0.0;
        for i in 0..fin.len() {
            let x = grid.x(i);
            let want = ProfileModel::BumpX.eval(x - 1.0);
            err = err.max((fin.s[i] - want).abs());
        }
        assert!(err < 5e-3, "translation error {err}");
    }

    #[test]
    fn scalar_riccati_blowup_near_one() {
        let grid = Grid1D::new(-1.0, 1.0, 2048).unwrap();
        let mut cfg = CarlemannConfig::scalar_riccati(grid, 1.5);
        cfg.blowup_threshold = Some(1e4);
        cfg.record_every = 1 << 30;
        let traj = carlemann_run(&cfg).unwrap();
        assert_eq!(traj.event, TerminalEvent::BlowupThresholdCrossed);
        // R = 1/(1-t): T(1e4) = 1 - 1e-4
        assert!((traj.t_final - 1.0).abs() < 5e-3, "t_final = {}", traj.t_final);
    }

    #[test]
    fn invariants_trivial_and_round_trip() {
        let grid = Grid1D::new(-2.0, 2.0, 128).unwrap();
        let n = grid.len();
        let (wp, wm) = riemann_invariants(&vec![0.0; n], &vec![0.0; n], 1.0, &grid).unwrap();
        assert!(wp.iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(wm.iter().all(|&v| (v - 0.5).abs() < 1e-15));

        let u: Vec<f64> = (0..n).map(|i| 0.3 * (grid.x(i)).sin()).collect();
        let u_t: Vec<f64> = (0..n).map(|i| 0.2 * (grid.x(i)).cos()).collect();
        let (wp, wm) = riemann_invariants(&u, &u_t, 1.5, &grid).unwrap();
        let back = invert_riemann(&wp, &wm, 1.5).unwrap();
        for i in 0..n {
            assert!((back[i] - u[i]).abs() < 1e-10 * u[i].abs().max(1.0));
        }
    }

    #[test]
    fn invariants_unit_mass_shift() {
        // u = 0, u_t = bump with unit integral: right of the support
        // w_+ = 1/2 + 1 and w_- = 1/2 - 1
        let grid = Grid1D::new(-4.0, 4.0, 4096).unwrap();
        let n = grid.len();
        let mass: f64 = 0.4439938161680786; // integral of exp(1/(x^2-1)) on (-1,1)
        let u_t: Vec<f64> = (0..n)
            .map(|i| ProfileModel::PolyBump(vec![1.0]).eval(grid.x(i)) / mass)
            .collect();
        let (wp, wm) = riemann_invariants(&vec![0.0; n], &u_t, 1.0, &grid).unwrap();
        let i = grid.nearest(2.5);
        assert!((wp[i] - 1.5).abs() < 1e-6, "{}", wp[i]);
        assert!((wm[i] + 0.5).abs() < 1e-6, "{}", wm[i]);
    }

    #[test]
    fn degenerate_exponent_rejected() {
        let grid = Grid1D::new(-1.0, 1.0, 32).unwrap();
        let n = grid.len();
        assert!(matches!(
            riemann_invariants(&vec![0.0; n], &vec![0.0; n], -1.0, &grid),
            Err(Error::DegenerateExponent)
        ));
    }

    #[test]
    fn degeneracy_threshold_closed_form() {
        let (cfg, st) = degeneracy_scenario(false, 512).unwrap();
        let traj = crate::solver::run_from(&cfg, st).unwrap();
        let rep = degeneracy_monitor(&traj, 1.0).unwrap();
        assert_eq!(rep.threshold, -1.0);
        assert!(rep.hypothesis_notes.is_empty());
    }
}
