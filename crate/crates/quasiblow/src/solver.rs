//! Upwind characteristic solver for the diagonal first-order system
//!
//! ```text
//! dR/dt - c(u) dR/dx = (c'/4c)(lambda R^2 + 2(1-lambda) RS - (2-lambda) S^2)
//! dS/dt + c(u) dS/dx = (c'/4c)(lambda S^2 + 2(1-lambda) RS - (2-lambda) R^2)
//! du/dt             = (R + S)/2
//! ```
//!
//! R is upwinded against its leftward speed -c, S against +c. Sources are
//! integrated unsplit inside each Runge-Kutta stage. Time stepping is forward
//! Euler (order 1) or SSP-RK2 with minmod-limited slopes (order 2), with dt
//! recomputed every step from the current maximum speed.

use serde::{Deserialize, Serialize};

use crate::coeffs::SpeedModel;
use crate::error::{Error, Result};
use crate::numerics::{abs_pow, trapz_uniform};
use crate::state::{build_initial_data, FieldState, Grid1D, ProfileModel};

/// Relative factor below c(0) at which the degeneracy event fires; guards
/// against rounding straight through zero.
pub const DEGENERACY_FACTOR: f64 = 1e-12;

/// Default blow-up threshold: this factor times the initial max norm.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e6;

/// Generalized minmod parameter for the limited slopes.
const MINMOD_THETA: f64 = 2.0;

/// Everything needed for a deterministic run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub lambda: f64,
    pub eps: f64,
    pub model: SpeedModel,
    pub profile: ProfileModel,
    pub grid: Grid1D,
    pub cfl: f64,
    pub t_max: f64,
    /// None selects DEFAULT_BLOWUP_FACTOR times the initial max norm.
    pub blowup_threshold: Option<f64>,
    pub record_every: usize,
    pub scheme_order: u8,
    /// Enables the main-theorem hypothesis checks (lambda in (0,1],
    /// c'(0) > 0, phi'(0) < 0) at validation time.
    pub theorem: bool,
}

impl RunConfig {
    pub fn new(lambda: f64, eps: f64, model: SpeedModel, grid: Grid1D, t_max: f64) -> Self {
        RunConfig {
            lambda,
            eps,
            model,
            profile: ProfileModel::BumpX,
            grid,
            cfl: 0.4,
            t_max,
            blowup_threshold: None,
            record_every: 1,
            scheme_order: 2,
            theorem: false,
        }
    }

    /// L^p exponent p = 2/lambda used by norm diagnostics.
    pub fn lp_exponent(&self) -> f64 {
        2.0 / self.lambda
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 2.0) {
            return Err(Error::Validation(format!(
                "lambda must lie in (0, 2], got {}",
                self.lambda
            )));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Validation(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Validation(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(self.t_max > 0.0) {
            return Err(Error::Validation(format!("t_max must be positive, got {}", self.t_max)));
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
        if self.grid.n < 16 {
            return Err(Error::Validation(format!(
                "grid needs n >= 16 cells, got {}",
                self.grid.n
            )));
        }
        if self.model.c_at_zero() <= 0.0 {
            return Err(Error::Validation("speed model must have c(0) > 0".into()));
        }
        if self.theorem {
            if self.lambda > 1.0 {
                return Err(Error::Validation(format!(
                    "theorem scenarios require lambda in (0, 1], got {}",
                    self.lambda
                )));
            }
            if self.model.c_prime_at_zero() <= 0.0 {
                return Err(Error::Validation(
                    "theorem scenarios require c'(0) > 0".into(),
                ));
            }
            self.profile
                .check_theorem_slope()
                .map_err(|e| Error::Validation(e.to_string()))?;
        }
        // Domain-of-dependence precheck against the scaled support. The run
        // loop tracks the exact light cone; this catches gross misconfiguration
        // early using the initial maximum speed with a 5% allowance.
        let (smin, smax) = self.profile.support();
        let (lo, hi) = (self.eps * smin, self.eps * smax);
        let mut max_c0: f64 = 0.0;
        for i in 0..self.grid.len() {
            let u0 = self.eps * self.profile.eval(self.grid.x(i) / self.eps);
            max_c0 = max_c0.max(self.model.c_raw(u0));
        }
        let reach = 1.05 * max_c0 * self.t_max;
        if self.grid.x_max - hi < reach || lo - self.grid.x_min < reach {
            return Err(Error::Validation(format!(
                "grid [{}, {}] too narrow: scaled support [{lo}, {hi}] plus 1.2 * max c * t_max = {reach} \
                 would reach the boundary",
                self.grid.x_min, self.grid.x_max
            )));
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalEvent {
    ReachedTMax,
    BlowupThresholdCrossed,
    Degeneracy,
    NonfiniteValue,
}

/// Per-step scalar diagnostics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiagSample {
    pub t: f64,
    pub dt: f64,
    pub max_abs_r: f64,
    pub max_abs_s: f64,
    /// integral |R|^p + |S|^p dx with p = 2/lambda
    pub lp_sum: f64,
    pub min_c: f64,
    pub max_c: f64,
    pub energy: f64,
    /// signed maxima, for sign-preservation checks
    pub max_r: f64,
    pub max_s: f64,
    pub max_cp_over_c: f64,
}

/// A completed run: snapshot cadence per `record_every`, diagnostics per step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub model: SpeedModel,
    pub lambda: f64,
    pub eps: Option<f64>,
    pub grid: Grid1D,
    pub lp_exponent: f64,
    pub blowup_threshold: f64,
    pub snapshots: Vec<FieldState>,
    pub samples: Vec<DiagSample>,
    pub event: TerminalEvent,
    pub t_final: f64,
    pub steps: u64,
}

impl Trajectory {
    pub fn initial_state(&self) -> &FieldState {
        &self.snapshots[0]
    }

    pub fn final_state(&self) -> &FieldState {
        self.snapshots.last().expect("trajectory stores at least the initial state")
    }

    /// First sample time at which max(|R|, |S|) reaches `level`, refined by
    /// log-linear interpolation between samples. None if never reached.
    pub fn crossing_time(&self, level: f64) -> Option<f64> {
        let mut prev: Option<&DiagSample> = None;
        for s in &self.samples {
            let norm = s.max_abs_r.max(s.max_abs_s);
            if norm >= level {
                if let Some(p) = prev {
                    let y0 = p.max_abs_r.max(p.max_abs_s);
                    if y0 > 0.0 && norm > y0 {
                        let f = (level.ln() - y0.ln()) / (norm.ln() - y0.ln());
                        return Some(p.t + f.clamp(0.0, 1.0) * (s.t - p.t));
                    }
                }
                return Some(s.t);
            }
            prev = Some(s);
        }
        None
    }

    /// Largest max(|R|, |S|) over samples with t <= window_end.
    pub fn sup_norm_until(&self, window_end: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.t <= window_end)
            .map(|s| s.max_abs_r.max(s.max_abs_s))
            .fold(0.0, f64::max)
    }
}

/// Result of one accepted step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: FieldState,
    pub dt: f64,
}

struct Workspace {
    c: Vec<f64>,
    slope_r: Vec<f64>,
    slope_s: Vec<f64>,
    dr: Vec<f64>,
    ds: Vec<f64>,
    r1: Vec<f64>,
    s1: Vec<f64>,
    u1: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            c: vec![0.0; n],
            slope_r: vec![0.0; n],
            slope_s: vec![0.0; n],
            dr: vec![0.0; n],
            ds: vec![0.0; n],
            r1: vec![0.0; n],
            s1: vec![0.0; n],
            u1: vec![0.0; n],
        }
    }
}

#[inline]
fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

fn limited_slopes(q: &[f64], dx: f64, out: &mut [f64]) {
    let n = q.len();
    for i in 0..n {
        let qm = if i == 0 { q[0] } else { q[i - 1] };
        let qp = if i + 1 == n { q[n - 1] } else { q[i + 1] };
        let dm = (q[i] - qm) / dx;
        let dp = (qp - q[i]) / dx;
        out[i] = minmod3(MINMOD_THETA * dm, 0.5 * (dm + dp), MINMOD_THETA * dp);
    }
}

/// Semidiscrete right-hand side shared by the main and Carlemann solvers.
///
/// `speeds` holds c at every node; `sources` receives (r, s, node index) and
/// returns the (R, S) source pair. Writes advection + source into dr/ds.
#[allow(clippy::too_many_arguments)]
pub(crate) fn advect_rhs<F: Fn(f64, f64, usize) -> (f64, f64)>(
    r: &[f64],
    s: &[f64],
    speeds: &[f64],
    dx: f64,
    order: u8,
    sources: F,
    dr: &mut [f64],
    ds: &mut [f64],
    slope_r: &mut [f64],
    slope_s: &mut [f64],
) {
    let n = r.len();
    if order == 2 {
        limited_slopes(r, dx, slope_r);
        limited_slopes(s, dx, slope_s);
    } else {
        slope_r.iter_mut().for_each(|v| *v = 0.0);
        slope_s.iter_mut().for_each(|v| *v = 0.0);
    }
    for i in 0..n {
        let c = speeds[i];
        // R moves left: bias interface states from the right
        let (rp, srp) = if i + 1 == n { (r[n - 1], 0.0) } else { (r[i + 1], slope_r[i + 1]) };
        let r_adv = c * ((rp - r[i]) - 0.5 * dx * (srp - slope_r[i])) / dx;
        // S moves right: bias interface states from the left
        let (sm, ssm) = if i == 0 { (s[0], 0.0) } else { (s[i - 1], slope_s[i - 1]) };
        let s_adv = -c * ((s[i] - sm) + 0.5 * dx * (slope_s[i] - ssm)) / dx;
        let (src_r, src_s) = sources(r[i], s[i], i);
        dr[i] = r_adv + src_r;
        ds[i] = s_adv + src_s;
    }
}

fn main_rhs(
    cfg: &RunConfig,
    r: &[f64],
    s: &[f64],
    u: &[f64],
    ws: &mut Workspace,
) {
    let n = r.len();
    let lambda = cfg.lambda;
    for i in 0..n {
        ws.c[i] = cfg.model.c_raw(u[i]);
    }
    let model = &cfg.model;
    let (c_buf, slope_r, slope_s, dr, ds) = (
        &ws.c[..],
        &mut ws.slope_r,
        &mut ws.slope_s,
        &mut ws.dr,
        &mut ws.ds,
    );
    advect_rhs(
        r,
        s,
        c_buf,
        cfg.grid.dx(),
        cfg.scheme_order,
        |ri, si, i| {
            let c = c_buf[i];
            let f = model.c_prime_raw(u[i]) / (4.0 * c);
            let cross = 2.0 * (1.0 - lambda) * ri * si;
            (
                f * (lambda * ri * ri + cross - (2.0 - lambda) * si * si),
                f * (lambda * si * si + cross - (2.0 - lambda) * ri * ri),
            )
        },
        dr,
        ds,
        slope_r,
        slope_s,
    );
}

fn apply_stage(
    cfg: &RunConfig,
    dt: f64,
    r: &[f64],
    s: &[f64],
    u: &[f64],
    out_r: &mut [f64],
    out_s: &mut [f64],
    out_u: &mut [f64],
    ws: &mut Workspace,
) {
    main_rhs(cfg, r, s, u, ws);
    for i in 0..r.len() {
        out_r[i] = r[i] + dt * ws.dr[i];
        out_s[i] = s[i] + dt * ws.ds[i];
        out_u[i] = u[i] + dt * 0.5 * (r[i] + s[i]);
    }
}

fn advance(cfg: &RunConfig, state: &FieldState, dt: f64, ws: &mut Workspace) -> FieldState {
    let n = state.len();
    let mut next = FieldState::zeros(state.t + dt, n);
    if cfg.scheme_order == 1 {
        apply_stage(cfg, dt, &state.r, &state.s, &state.u, &mut next.r, &mut next.s, &mut next.u, ws);
        return next;
    }
    // SSP-RK2: q1 = q + dt L(q); q_next = (q + q1 + dt L(q1)) / 2
    let mut r1 = std::mem::take(&mut ws.r1);
    let mut s1 = std::mem::take(&mut ws.s1);
    let mut u1 = std::mem::take(&mut ws.u1);
    apply_stage(cfg, dt, &state.r, &state.s, &state.u, &mut r1, &mut s1, &mut u1, ws);
    main_rhs(cfg, &r1, &s1, &u1, ws);
    for i in 0..n {
        next.r[i] = 0.5 * (state.r[i] + r1[i] + dt * ws.dr[i]);
        next.s[i] = 0.5 * (state.s[i] + s1[i] + dt * ws.ds[i]);
        next.u[i] = 0.5 * (state.u[i] + u1[i] + dt * 0.5 * (r1[i] + s1[i]));
    }
    ws.r1 = r1;
    ws.s1 = s1;
    ws.u1 = u1;
    next
}

fn max_speed(model: &SpeedModel, u: &[f64]) -> f64 {
    u.iter().fold(0.0f64, |m, &ui| m.max(model.c_raw(ui).abs()))
}

#[cfg(debug_assertions)]
fn debug_growth_bound(cfg: &RunConfig, before: &FieldState, after: &FieldState, dt: f64) {
    // No step may create an extremum beyond explicit source growth:
    // max(|R|,|S|) + dt * max|c'/4c| * (lambda + 2|1-lambda| + (2-lambda)) * max(R^2, S^2, |RS|)
    let old_max = before
        .r
        .iter()
        .chain(before.s.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut coeff: f64 = 0.0;
    for &ui in &before.u {
        let c = cfg.model.c_raw(ui);
        if c > 0.0 {
            coeff = coeff.max((cfg.model.c_prime_raw(ui) / (4.0 * c)).abs());
        }
    }
    let factor = cfg.lambda + 2.0 * (1.0 - cfg.lambda).abs() + (2.0 - cfg.lambda);
    let bound = old_max + dt * coeff * factor * old_max * old_max;
    let new_max = after
        .r
        .iter()
        .chain(after.s.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    debug_assert!(
        new_max <= 1.1 * bound + 1e-9,
        "growth bound violated: {new_max} > {bound} (dt = {dt})"
    );
}

/// Advance one step with dt = cfl * dx / max|c(u)|.
///
/// Fails with a degeneracy error if min c(u) falls to DEGENERACY_FACTOR * c(0)
/// after the step, or with a non-finite error on NaN/Inf.
pub fn step(state: &FieldState, cfg: &RunConfig) -> Result<StepOutcome> {
    let maxc = max_speed(&cfg.model, &state.u);
    if !(maxc > 0.0) || !maxc.is_finite() {
        return Err(Error::Degeneracy {
            min_c: maxc,
            t: state.t,
        });
    }
    let dt = cfg.cfl * cfg.grid.dx() / maxc;
    step_with_dt(state, cfg, dt)
}

fn step_with_dt(state: &FieldState, cfg: &RunConfig, dt: f64) -> Result<StepOutcome> {
    let mut ws = Workspace::new(state.len());
    let next = advance(cfg, state, dt, &mut ws);
    #[cfg(debug_assertions)]
    debug_growth_bound(cfg, state, &next, dt);
    check_state(cfg, &next)?;
    Ok(StepOutcome { state: next, dt })
}

fn check_state(cfg: &RunConfig, state: &FieldState) -> Result<()> {
    if !state.all_finite() {
        return Err(Error::NonfiniteValue { t: state.t });
    }
    let c0 = cfg.model.c_at_zero();
    let min_c = state
        .u
        .iter()
        .fold(f64::INFINITY, |m, &ui| m.min(cfg.model.c_raw(ui)));
    if min_c <= DEGENERACY_FACTOR * c0 {
        return Err(Error::Degeneracy { min_c, t: state.t });
    }
    Ok(())
}

fn diag_sample(cfg: &RunConfig, state: &FieldState, dt: f64) -> DiagSample {
    let p = cfg.lp_exponent();
    let dx = cfg.grid.dx();
    let n = state.len();
    let mut max_abs_r: f64 = 0.0;
    let mut max_abs_s: f64 = 0.0;
    let mut max_r = f64::NEG_INFINITY;
    let mut max_s = f64::NEG_INFINITY;
    let mut min_c = f64::INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    let mut max_cp_over_c: f64 = 0.0;
    let mut lp = vec![0.0; n];
    let mut en = vec![0.0; n];
    for i in 0..n {
        let (r, s, u) = (state.r[i], state.s[i], state.u[i]);
        max_abs_r = max_abs_r.max(r.abs());
        max_abs_s = max_abs_s.max(s.abs());
        max_r = max_r.max(r);
        max_s = max_s.max(s);
        let c = cfg.model.c_raw(u);
        min_c = min_c.min(c);
        max_c = max_c.max(c);
        if c > 0.0 {
            max_cp_over_c = max_cp_over_c.max((cfg.model.c_prime_raw(u) / c).abs());
        }
        lp[i] = abs_pow(r, p) + abs_pow(s, p);
        // u_t^2 + c^2 u_x^2 == (R^2 + S^2)/2
        en[i] = 0.5 * (r * r + s * s);
    }
    DiagSample {
        t: state.t,
        dt,
        max_abs_r,
        max_abs_s,
        lp_sum: trapz_uniform(&lp, dx),
        min_c,
        max_c,
        energy: trapz_uniform(&en, dx),
        max_r,
        max_s,
        max_cp_over_c,
    }
}

/// Run from the theorem-family initial data built from cfg's profile and eps.
pub fn run(cfg: &RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let initial = build_initial_data(&cfg.profile, cfg.eps, &cfg.model, &cfg.grid)?;
    run_from(cfg, initial)
}

/// Run from explicit initial data (generic (u0, u1) scenarios).
pub fn run_from(cfg: &RunConfig, initial: FieldState) -> Result<Trajectory> {
    if initial.len() != cfg.grid.len() {
        return Err(Error::LengthMismatch {
            left: initial.len(),
            right: cfg.grid.len(),
        });
    }
    let init_norm = initial
        .r
        .iter()
        .chain(initial.s.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let threshold = cfg.blowup_threshold.unwrap_or(if init_norm > 0.0 {
        DEFAULT_BLOWUP_FACTOR * init_norm
    } else {
        f64::INFINITY
    });

    // Exact light-cone tracking: the expanding domain of dependence of the
    // initial support must stay inside the grid. Skipped when the data already
    // touches the boundary (then the run is only valid for data constant near
    // the edges, e.g. spatially uniform states).
    let dx = cfg.grid.dx();
    let nonzero: Vec<usize> = (0..initial.len())
        .filter(|&i| initial.r[i] != 0.0 || initial.s[i] != 0.0 || initial.u[i] != 0.0)
        .collect();
    let (mut cone_lo, mut cone_hi, cone_tracked) = match (nonzero.first(), nonzero.last()) {
        (Some(&a), Some(&b)) if a > 0 && b < initial.len() - 1 => {
            (cfg.grid.x(a), cfg.grid.x(b), true)
        }
        _ => (cfg.grid.x_min, cfg.grid.x_max, false),
    };

    let mut ws = Workspace::new(initial.len());
    let mut snapshots = Vec::new();
    let mut samples = Vec::new();
    samples.push(diag_sample(cfg, &initial, 0.0));
    snapshots.push(initial.clone());

    let mut state = initial;
    let mut steps: u64 = 0;
    let mut since_snapshot = 0usize;
    let event;
    loop {
        if state.t >= cfg.t_max - 1e-14 * cfg.t_max {
            event = TerminalEvent::ReachedTMax;
            break;
        }
        let maxc = max_speed(&cfg.model, &state.u);
        if !(maxc > 0.0) || !maxc.is_finite() {
            event = TerminalEvent::Degeneracy;
            break;
        }
        let dt = (cfg.cfl * dx / maxc).min(cfg.t_max - state.t);
        if cone_tracked {
            cone_lo -= maxc * dt;
            cone_hi += maxc * dt;
            if cone_lo <= cfg.grid.x_min + dx || cone_hi >= cfg.grid.x_max - dx {
                return Err(Error::Validation(format!(
                    "domain of dependence reached the grid boundary at t = {}; widen the grid",
                    state.t
                )));
            }
        }
        let next = advance(cfg, &state, dt, &mut ws);
        #[cfg(debug_assertions)]
        debug_growth_bound(cfg, &state, &next, dt);
        steps += 1;
        state = next;
        let sample = diag_sample(cfg, &state, dt);
        let finite = state.all_finite();
        let degenerate = sample.min_c <= DEGENERACY_FACTOR * cfg.model.c_at_zero();
        let blown = sample.max_abs_r.max(sample.max_abs_s) >= threshold;
        samples.push(sample);
        since_snapshot += 1;
        if !finite {
            event = TerminalEvent::NonfiniteValue;
            break;
        }
        if degenerate {
            event = TerminalEvent::Degeneracy;
            break;
        }
        if blown {
            event = TerminalEvent::BlowupThresholdCrossed;
            break;
        }
        if since_snapshot >= cfg.record_every {
            snapshots.push(state.clone());
            since_snapshot = 0;
        }
    }
    if since_snapshot > 0 || snapshots.len() == 1 {
        // always store the terminal state
        if snapshots.last().map(|s| s.t) != Some(state.t) {
            snapshots.push(state.clone());
        }
    }
    Ok(Trajectory {
        model: cfg.model.clone(),
        lambda: cfg.lambda,
        eps: Some(cfg.eps),
        grid: cfg.grid,
        lp_exponent: cfg.lp_exponent(),
        blowup_threshold: threshold,
        snapshots,
        samples,
        event,
        t_final: state.t,
        steps,
    })
}

/// Threshold-crossing table and 1/M extrapolation for one trajectory.
///
/// Riccati-type growth S ~ 1/(T* - t) makes the first crossing time of level
/// M linear in 1/M, so a least-squares line in 1/M extrapolates to M -> inf.
pub fn extrapolate_crossings(traj: &Trajectory, thresholds: &[f64]) -> Option<(f64, f64, Vec<(f64, f64)>)> {
    let mut pts = Vec::new();
    for &m in thresholds {
        if let Some(t) = traj.crossing_time(m) {
            pts.push((m, t));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|(m, _)| 1.0 / m).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, t)| *t).collect();
    let (slope, intercept, resid) = crate::numerics::line_fit(&xs, &ys);
    let _ = slope;
    Some((intercept, resid, pts))
}

/// Blow-up time estimate across grid refinements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlowupEstimate {
    pub grid_sizes: Vec<usize>,
    /// first crossing times (threshold, t) per grid
    pub crossings: Vec<Vec<(f64, f64)>>,
    /// extrapolated T* per grid
    pub per_grid: Vec<f64>,
    /// extrapolated T* on the finest grid
    pub t_star: f64,
    /// (max - min) / finest over the per-grid extrapolations
    pub spread: f64,
    /// relative change between the two finest grids
    pub spread_last_pair: f64,
    /// rms residual of the finest 1/M fit
    pub fit_residual: f64,
}

/// Record threshold crossings on grids n, 2n, 4n, ... and extrapolate the
/// finest-grid crossing times against 1/M.
pub fn estimate_blowup_time(
    cfg: &RunConfig,
    thresholds: &[f64],
    refinements: usize,
) -> Result<BlowupEstimate> {
    if refinements < 2 {
        return Err(Error::Validation(format!(
            "refinements must be at least 2, got {refinements}"
        )));
    }
    if thresholds.len() < 2 || thresholds.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation(
            "thresholds must be at least two increasing values".into(),
        ));
    }
    let top = *thresholds.last().expect("nonempty");
    let mut grid_sizes = Vec::new();
    let mut crossings = Vec::new();
    let mut per_grid = Vec::new();
    let mut finest_resid = 0.0;
    for k in 0..refinements {
        let mut sub = cfg.clone();
        sub.grid.n = cfg.grid.n << k;
        sub.blowup_threshold = Some(top);
        let traj = run(&sub)?;
        let is_finest = k + 1 == refinements;
        match extrapolate_crossings(&traj, thresholds) {
            Some((t_star, resid, pts)) => {
                grid_sizes.push(sub.grid.n);
                crossings.push(pts);
                per_grid.push(t_star);
                if is_finest {
                    finest_resid = resid;
                }
            }
            None if is_finest => {
                return Err(Error::NoBlowup { t_max: sub.t_max });
            }
            None => {
                grid_sizes.push(sub.grid.n);
                crossings.push(Vec::new());
                per_grid.push(f64::NAN);
            }
        }
    }
    let t_star = *per_grid.last().expect("at least one grid");
    let finite: Vec<f64> = per_grid.iter().copied().filter(|v| v.is_finite()).collect();
    let spread = if finite.len() > 1 {
        let max = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / t_star
    } else {
        f64::NAN
    };
    let spread_last_pair = if per_grid.len() >= 2 {
        let a = per_grid[per_grid.len() - 2];
        (a - t_star).abs() / t_star
    } else {
        f64::NAN
    };
    Ok(BlowupEstimate {
        grid_sizes,
        crossings,
        per_grid,
        t_star,
        spread,
        spread_last_pair,
        fit_residual: finest_resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transport_cfg(n: usize) -> RunConfig {
        // affine with c1 = 0: constant speed, test-only
        let grid = Grid1D::new(-6.0, 6.0, n).unwrap();
        RunConfig::new(1.0, 1.0, SpeedModel::affine(1.0, 0.0), grid, 1.0)
    }

    #[test]
    fn uniform_state_sources_cancel() {
        // R = S = k: source coefficient lambda + 2(1-lambda) - (2-lambda) = 0
        for lambda in [0.5, 1.0, 1.7] {
            let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
            let mut cfg = RunConfig::new(lambda, 1.0, SpeedModel::power(1.0), grid, 1.0);
            cfg.record_every = 1000;
            let k = 0.3;
            let mut st = FieldState::zeros(0.0, grid.len());
            st.r.iter_mut().for_each(|v| *v = k);
            st.s.iter_mut().for_each(|v| *v = k);
            let out = step(&st, &cfg).unwrap();
            for i in 0..st.len() {
                assert!((out.state.r[i] - k).abs() < 1e-13, "lambda={lambda}");
                assert!((out.state.s[i] - k).abs() < 1e-13);
                assert!((out.state.u[i] - out.dt * k).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let cfg = transport_cfg(64);
        let st = FieldState::zeros(0.0, cfg.grid.len());
        let out = step(&st, &cfg).unwrap();
        assert!(out.state.r.iter().all(|&v| v == 0.0));
        assert!(out.state.s.iter().all(|&v| v == 0.0));
        assert!(out.state.u.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_data_run_reaches_t_max() {
        let mut cfg = transport_cfg(64);
        cfg.record_every = 16;
        let traj = run_from(&cfg, FieldState::zeros(0.0, cfg.grid.len())).unwrap();
        assert_eq!(traj.event, TerminalEvent::ReachedTMax);
        assert!(traj.samples.iter().all(|s| s.max_abs_r == 0.0 && s.max_abs_s == 0.0));
    }

    #[test]
    fn constant_speed_run_keeps_norms_bounded() {
        let mut cfg = transport_cfg(512);
        cfg.record_every = 64;
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.event, TerminalEvent::ReachedTMax);
        let init = traj.samples[0].max_abs_r.max(traj.samples[0].max_abs_s);
        for s in &traj.samples {
            assert!(s.max_abs_r.max(s.max_abs_s) <= init * (1.0 + 1e-9));
        }
    }

    #[test]
    fn snapshot_times_strictly_increase() {
        let mut cfg = transport_cfg(128);
        cfg.record_every = 7;
        let traj = run(&cfg).unwrap();
        for w in traj.snapshots.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        assert_eq!(traj.final_state().t, traj.t_final);
    }

    #[test]
    fn validation_rejects_bad_lambda_and_cfl() {
        let mut cfg = transport_cfg(64);
        cfg.lambda = 0.0;
        assert!(cfg.validate().is_err());
        cfg.lambda = 2.5;
        assert!(cfg.validate().is_err());
        cfg.lambda = 1.0;
        cfg.cfl = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn theorem_flag_requires_hypotheses() {
        let mut cfg = transport_cfg(64);
        cfg.theorem = true;
        // c'(0) = 0 for the constant-speed model
        assert!(cfg.validate().is_err());
        cfg.model = SpeedModel::power(1.0);
        cfg.t_max = 2.0;
        assert!(cfg.validate().is_ok());
        cfg.profile = ProfileModel::PolyBump(vec![0.0, 1.0]); // phi'(0) > 0
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn narrow_grid_rejected() {
        let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let cfg = RunConfig::new(1.0, 1.0, SpeedModel::power(1.0), grid, 10.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn blowup_event_fires_on_threshold() {
        // uniform positive S grows through the quadratic source; with the
        // threshold at 1.5x the initial norm the event fires well before t_max
        let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let mut cfg = RunConfig::new(1.0, 1.0, SpeedModel::power(1.0), grid, 6.0);
        cfg.record_every = 16;
        cfg.blowup_threshold = Some(1.5 * 0.736);
        let mut st = FieldState::zeros(0.0, grid.len());
        st.s.iter_mut().for_each(|v| *v = 0.736);
        let traj = run_from(&cfg, st).unwrap();
        assert_eq!(traj.event, TerminalEvent::BlowupThresholdCrossed);
        assert!(traj.t_final < 6.0);
        let last = traj.samples.last().unwrap();
        assert!(last.max_abs_s >= 1.5 * 0.736);
    }

    #[test]
    fn no_blowup_outcome_for_constant_speed() {
        let cfg = transport_cfg(64);
        let err = estimate_blowup_time(&cfg, &[10.0, 100.0], 2).unwrap_err();
        assert!(matches!(err, Error::NoBlowup { .. }));
    }
}
