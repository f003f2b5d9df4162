//! Post-hoc characteristic tracing through stored trajectories: the curves
//! x'(t) = +-c(u), the scaled Riemann quantities c^((lambda-1)/2) R and
//! c^((lambda-1)/2) S along them, and the characteristic-triangle balance.
//!
//! Curves are traced on snapshots (linear interpolation in time, 4-point
//! Lagrange in space), so one trajectory serves arbitrarily many anchors.

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::{lagrange4_uniform, trapz};
use crate::solver::Trajectory;

/// Direction of a characteristic: plus moves right (dx/dt = +c), minus left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharDirection {
    Plus,
    Minus,
}

impl CharDirection {
    fn sign(self) -> f64 {
        match self {
            CharDirection::Plus => 1.0,
            CharDirection::Minus => -1.0,
        }
    }
}

/// One point on a traced curve with the interpolated fields.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CharSample {
    pub t: f64,
    pub x: f64,
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub c: f64,
}

/// A traced characteristic curve.
#[derive(Debug, Clone)]
pub struct CharCurve {
    pub direction: CharDirection,
    pub anchor: (f64, f64),
    /// samples ordered by increasing t
    pub samples: Vec<CharSample>,
    /// max over sample pairs of |dx/dt -+ c| (midpoint c)
    pub speed_residual: f64,
}

impl CharCurve {
    /// Curve position at time t by linear interpolation of the samples.
    pub fn x_at(&self, t: f64) -> Option<f64> {
        let samples = &self.samples;
        if samples.is_empty() || t < samples[0].t - 1e-12 || t > samples[samples.len() - 1].t + 1e-12
        {
            return None;
        }
        let k = samples.partition_point(|s| s.t <= t).min(samples.len() - 1);
        if k == 0 {
            return Some(samples[0].x);
        }
        let (a, b) = (&samples[k - 1], &samples[k]);
        if b.t == a.t {
            return Some(b.x);
        }
        let f = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
        Some(a.x + f * (b.x - a.x))
    }

    /// Foot of the curve, i.e. its earliest sample.
    pub fn foot(&self) -> &CharSample {
        &self.samples[0]
    }
}

/// Interpolating view over a trajectory's snapshots.
struct FieldSampler<'a> {
    traj: &'a Trajectory,
}

impl<'a> FieldSampler<'a> {
    fn new(traj: &'a Trajectory) -> Result<Self> {
        if traj.snapshots.len() < 2 {
            return Err(Error::Validation(
                "characteristic tracing needs at least two stored snapshots".into(),
            ));
        }
        Ok(FieldSampler { traj })
    }

    fn t_first(&self) -> f64 {
        self.traj.snapshots[0].t
    }

    fn t_last(&self) -> f64 {
        self.traj.snapshots[self.traj.snapshots.len() - 1].t
    }

    fn contains(&self, t: f64, x: f64) -> bool {
        t >= self.t_first() - 1e-12
            && t <= self.t_last() + 1e-12
            && x >= self.traj.grid.x_min
            && x <= self.traj.grid.x_max
    }

    fn sample(&self, t: f64, x: f64) -> CharSample {
        let snaps = &self.traj.snapshots;
        let k = snaps
            .partition_point(|s| s.t <= t)
            .clamp(1, snaps.len() - 1);
        let (a, b) = (&snaps[k - 1], &snaps[k]);
        let f = if b.t > a.t {
            ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let x0 = self.traj.grid.x_min;
        let dx = self.traj.grid.dx();
        let interp = |va: &[f64], vb: &[f64]| {
            let ya = lagrange4_uniform(va, x0, dx, x);
            let yb = lagrange4_uniform(vb, x0, dx, x);
            ya * (1.0 - f) + yb * f
        };
        let r = interp(&a.r, &b.r);
        let s = interp(&a.s, &b.s);
        let u = interp(&a.u, &b.u);
        CharSample {
            t,
            x,
            r,
            s,
            u,
            c: self.traj.model.c_raw(u),
        }
    }
}

/// Trace the characteristic through `anchor`, forward and backward until it
/// leaves the trajectory footprint.
pub fn trace_curve(
    traj: &Trajectory,
    anchor: (f64, f64),
    direction: CharDirection,
) -> Result<CharCurve> {
    let sampler = FieldSampler::new(traj)?;
    let (t0, x0) = anchor;
    if !sampler.contains(t0, x0) {
        return Err(Error::AnchorOutOfRange { t: t0, x: x0 });
    }
    let sign = direction.sign();
    let dx = traj.grid.dx();
    let (x_min, x_max) = (traj.grid.x_min, traj.grid.x_max);

    // march over snapshot boundaries with RK2 (midpoint) substeps; the
    // substep count keeps |c dt| below one cell
    let march = |mut t: f64, mut x: f64, forward: bool| -> Vec<CharSample> {
        let mut out = Vec::new();
        let t_end = if forward { sampler.t_last() } else { sampler.t_first() };
        let dir = if forward { 1.0 } else { -1.0 };
        while (t_end - t) * dir > 1e-13 {
            let c_here = sampler.sample(t, x).c.abs().max(1e-12);
            let span = (t_end - t) * dir;
            let h_max = (dx / c_here).min(span);
            let n_sub = (span / h_max).ceil().min(1e7) as usize;
            let h = dir * span / n_sub as f64;
            let mut exited = false;
            for _ in 0..n_sub {
                let v0 = sign * sampler.sample(t, x).c;
                let xm = x + 0.5 * h * v0;
                if xm < x_min || xm > x_max {
                    exited = true;
                    break;
                }
                let vm = sign * sampler.sample(t + 0.5 * h, xm).c;
                let x_next = x + h * vm;
                if x_next < x_min || x_next > x_max {
                    exited = true;
                    break;
                }
                t += h;
                x = x_next;
                out.push(sampler.sample(t, x));
            }
            if exited {
                break;
            }
        }
        out
    };

    let back = march(t0, x0, false);
    let fwd = march(t0, x0, true);
    let mut samples: Vec<CharSample> = back.into_iter().rev().collect();
    samples.push(sampler.sample(t0, x0));
    samples.extend(fwd);

    let mut speed_residual: f64 = 0.0;
    for w in samples.windows(2) {
        let dt = w[1].t - w[0].t;
        if dt > 1e-13 {
            let slope = (w[1].x - w[0].x) / dt;
            let c_mid = sampler
                .sample(0.5 * (w[0].t + w[1].t), 0.5 * (w[0].x + w[1].x))
                .c;
            speed_residual = speed_residual.max((slope - sign * c_mid).abs());
        }
    }
    Ok(CharCurve {
        direction,
        anchor,
        samples,
        speed_residual,
    })
}

/// The scaled Riemann quantity along a curve with its ODE residual.
#[derive(Debug, Clone)]
pub struct ScaledTrace {
    pub curve: CharCurve,
    pub lambda: f64,
    /// scaled values c^((lambda-1)/2) S (plus) or ... R (minus), one per sample
    pub values: Vec<f64>,
    /// |d(value)/dt - rhs| at sample midpoints (len = samples - 1)
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

impl ScaledTrace {
    /// (t, value) pairs, the shape consumed by the Riccati comparison.
    pub fn time_series(&self) -> Vec<(f64, f64)> {
        self.curve
            .samples
            .iter()
            .zip(&self.values)
            .map(|(s, &v)| (s.t, v))
            .collect()
    }

    /// CSV export: t,x,R,S,u,c,scaled_value,ode_residual.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,R,S,u,c,scaled_value,ode_residual")?;
        for (k, (sample, &v)) in self.curve.samples.iter().zip(&self.values).enumerate() {
            let res = if k == 0 { 0.0 } else { self.residuals[k - 1] };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                sample.t, sample.x, sample.r, sample.s, sample.u, sample.c, v, res
            )?;
        }
        Ok(())
    }
}

fn scaled_rhs(traj: &Trajectory, sample: &CharSample, direction: CharDirection) -> f64 {
    let lambda = traj.lambda;
    let cp = traj.model.c_prime_raw(sample.u);
    let cpow = sample.c.powf((lambda - 3.0) / 2.0);
    let (own, other) = match direction {
        CharDirection::Plus => (sample.s, sample.r),
        CharDirection::Minus => (sample.r, sample.s),
    };
    cp * cpow / 4.0 * (lambda * own * own - (2.0 - lambda) * other * other)
}

/// Trace c^((lambda-1)/2) S along a plus-characteristic (or the R analogue
/// along a minus-characteristic) together with the residual of its ODE.
pub fn trace_scaled_riemann(
    traj: &Trajectory,
    anchor: (f64, f64),
    direction: CharDirection,
) -> Result<ScaledTrace> {
    let curve = trace_curve(traj, anchor, direction)?;
    let lambda = traj.lambda;
    let q = (lambda - 1.0) / 2.0;
    let values: Vec<f64> = curve
        .samples
        .iter()
        .map(|s| {
            let carrier = match direction {
                CharDirection::Plus => s.s,
                CharDirection::Minus => s.r,
            };
            if q == 0.0 {
                carrier
            } else {
                s.c.powf(q) * carrier
            }
        })
        .collect();
    let mut residuals = Vec::with_capacity(values.len().saturating_sub(1));
    let mut max_residual: f64 = 0.0;
    for k in 1..values.len() {
        let (a, b) = (&curve.samples[k - 1], &curve.samples[k]);
        let dt = b.t - a.t;
        if dt <= 1e-13 {
            residuals.push(0.0);
            continue;
        }
        let dval = (values[k] - values[k - 1]) / dt;
        let rhs = 0.5 * (scaled_rhs(traj, a, direction) + scaled_rhs(traj, b, direction));
        let res = (dval - rhs).abs();
        residuals.push(res);
        max_residual = max_residual.max(res);
    }
    Ok(ScaledTrace {
        curve,
        lambda,
        values,
        residuals,
        max_residual,
    })
}

/// The characteristic-triangle balance at an apex: hypotenuse integrals of
/// |R|^p and |S|^p against the initial-data term plus the interior source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleReport {
    pub apex_t: f64,
    pub apex_x: f64,
    /// feet of the backward plus/minus characteristics on t = 0
    pub x1: f64,
    pub x2: f64,
    pub hypotenuse_plus: f64,
    pub hypotenuse_minus: f64,
    pub initial_term: f64,
    pub interior_term: f64,
    pub residual: f64,
}

impl TriangleReport {
    pub fn lhs(&self) -> f64 {
        self.hypotenuse_plus + self.hypotenuse_minus
    }
}

/// Evaluate the triangle balance for the apex (t, x).
///
/// Both backward characteristics must reach t = 0 inside the grid. The
/// interior double integral sums space-time cell contributions whose centers
/// pass the inside-triangle test against the traced hypotenuses.
pub fn triangle_balance(traj: &Trajectory, apex: (f64, f64)) -> Result<TriangleReport> {
    let (t_apex, x_apex) = apex;
    let plus = trace_curve(traj, apex, CharDirection::Plus)?;
    let minus = trace_curve(traj, apex, CharDirection::Minus)?;
    let t0 = traj.snapshots[0].t;
    for curve in [&plus, &minus] {
        if curve.foot().t > t0 + 1e-10 {
            return Err(Error::TriangleExitsGrid {
                t: t_apex,
                x: x_apex,
            });
        }
    }
    let x1 = plus.foot().x;
    let x2 = minus.foot().x;
    let p = traj.lp_exponent;
    let lambda = traj.lambda;

    // hypotenuse integrals in y along the traced curves (t <= apex time)
    let hyp_integral = |curve: &CharCurve, use_s: bool| -> f64 {
        let mut pts: Vec<(f64, f64)> = curve
            .samples
            .iter()
            .filter(|s| s.t <= t_apex + 1e-13)
            .map(|s| {
                let v = if use_s { s.s } else { s.r };
                (s.x, crate::numerics::abs_pow(v, p))
            })
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-15);
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        trapz(&xs, &ys)
    };
    let hypotenuse_plus = hyp_integral(&plus, false);
    let hypotenuse_minus = hyp_integral(&minus, true);

    // initial-data term over [x1, x2]
    let init = &traj.snapshots[0];
    let dx = traj.grid.dx();
    let mut init_term = 0.0;
    for i in 0..init.len() - 1 {
        let xc = traj.grid.x(i) + 0.5 * dx;
        if xc >= x1 && xc <= x2 {
            let avg = 0.5
                * (crate::numerics::abs_pow(init.r[i], p)
                    + crate::numerics::abs_pow(init.r[i + 1], p)
                    + crate::numerics::abs_pow(init.s[i], p)
                    + crate::numerics::abs_pow(init.s[i + 1], p));
            init_term += 0.5 * avg * dx;
        }
    }

    // interior source over snapshot-interval x grid-cell space-time cells
    let pref = (1.0 / lambda) * (0.5 - lambda / 4.0);
    let mut interior = 0.0;
    for w in traj.snapshots.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.t >= t_apex {
            break;
        }
        let t_hi = b.t.min(t_apex);
        let dt = t_hi - a.t;
        if dt <= 0.0 {
            continue;
        }
        let t_mid = 0.5 * (a.t + t_hi);
        let (Some(xl), Some(xr)) = (plus.x_at(t_mid), minus.x_at(t_mid)) else {
            continue;
        };
        let f = if b.t > a.t { (t_mid - a.t) / (b.t - a.t) } else { 0.0 };
        for i in 0..a.len() - 1 {
            let xc = traj.grid.x(i) + 0.5 * dx;
            if xc < xl || xc > xr {
                continue;
            }
            // bilinear value at the cell center
            let mid = |fa: &[f64], fb: &[f64]| {
                let va = 0.5 * (fa[i] + fa[i + 1]);
                let vb = 0.5 * (fb[i] + fb[i + 1]);
                va * (1.0 - f) + vb * f
            };
            let r = mid(&a.r, &b.r);
            let s = mid(&a.s, &b.s);
            let u = mid(&a.u, &b.u);
            let c = traj.model.c_raw(u);
            let cpc = traj.model.c_prime_raw(u) / c;
            let val = cpc
                * r
                * s
                * (r - s)
                * (crate::numerics::abs_pow(r, p - 2.0) - crate::numerics::abs_pow(s, p - 2.0));
            interior += pref * val * dx * dt;
        }
    }

    let lhs = hypotenuse_plus + hypotenuse_minus;
    let rhs = init_term + interior;
    Ok(TriangleReport {
        apex_t: t_apex,
        apex_x: x_apex,
        x1,
        x2,
        hypotenuse_plus,
        hypotenuse_minus,
        initial_term: init_term,
        interior_term: interior,
        residual: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::SpeedModel;
    use crate::solver::{run_from, RunConfig};
    use crate::state::{FieldState, Grid1D};

    fn zero_traj(model: SpeedModel, t_max: f64) -> Trajectory {
        let grid = Grid1D::new(-4.0, 4.0, 256).unwrap();
        let mut cfg = RunConfig::new(1.0, 1.0, model, grid, t_max);
        cfg.record_every = 4;
        run_from(&cfg, FieldState::zeros(0.0, grid.len())).unwrap()
    }

    #[test]
    fn constant_speed_plus_curve_is_line() {
        let traj = zero_traj(SpeedModel::affine(1.0, 0.0), 2.0);
        let curve = trace_curve(&traj, (0.0, 0.0), CharDirection::Plus).unwrap();
        for s in &curve.samples {
            assert!((s.x - s.t).abs() < 1e-10, "x={} t={}", s.x, s.t);
        }
        assert!(curve.speed_residual < 1e-10);
    }

    #[test]
    fn zero_data_power_model_line_with_c0_slope() {
        let traj = zero_traj(SpeedModel::power(1.0), 2.0); // u = 0 so c = 1
        let plus = trace_curve(&traj, (0.0, 0.0), CharDirection::Plus).unwrap();
        let minus = trace_curve(&traj, (0.0, 0.0), CharDirection::Minus).unwrap();
        for s in &plus.samples {
            assert!((s.x - s.t).abs() < 1e-10);
        }
        for s in &minus.samples {
            assert!((s.x + s.t).abs() < 1e-10);
        }
    }

    #[test]
    fn anchor_out_of_range_rejected() {
        let traj = zero_traj(SpeedModel::power(1.0), 1.0);
        assert!(matches!(
            trace_curve(&traj, (0.0, 99.0), CharDirection::Plus),
            Err(Error::AnchorOutOfRange { .. })
        ));
    }

    #[test]
    fn scaled_trace_zero_data_vanishes() {
        let traj = zero_traj(SpeedModel::power(1.0), 1.0);
        let tr = trace_scaled_riemann(&traj, (0.0, 0.0), CharDirection::Plus).unwrap();
        assert!(tr.values.iter().all(|&v| v == 0.0));
        assert!(tr.max_residual == 0.0);
    }

    #[test]
    fn lambda_one_scaling_is_identity() {
        // lambda = 1: exponent (lambda-1)/2 = 0 so the trace equals S itself
        let grid = Grid1D::new(-6.0, 6.0, 512).unwrap();
        let mut cfg = RunConfig::new(1.0, 1.0, SpeedModel::power(1.0), grid, 1.0);
        cfg.record_every = 8;
        let traj = crate::solver::run(&cfg).unwrap();
        let tr = trace_scaled_riemann(&traj, (0.0, 0.0), CharDirection::Plus).unwrap();
        for (sample, &v) in tr.curve.samples.iter().zip(&tr.values) {
            assert_eq!(v, sample.s);
        }
    }

    #[test]
    fn triangle_zero_data_all_terms_vanish() {
        let traj = zero_traj(SpeedModel::power(1.0), 1.0);
        let rep = triangle_balance(&traj, (0.8, 0.0)).unwrap();
        assert_eq!(rep.lhs(), 0.0);
        assert_eq!(rep.initial_term, 0.0);
        assert_eq!(rep.interior_term, 0.0);
        assert!((rep.x1 + 0.8).abs() < 1e-9);
        assert!((rep.x2 - 0.8).abs() < 1e-9);
    }

    #[test]
    fn triangle_exits_grid_detected() {
        let traj = zero_traj(SpeedModel::power(1.0), 1.0);
        // apex too close to the boundary: backward curves leave the grid
        assert!(matches!(
            triangle_balance(&traj, (1.0, 3.7)),
            Err(Error::TriangleExitsGrid { .. }) | Err(Error::AnchorOutOfRange { .. })
        ));
    }
}
