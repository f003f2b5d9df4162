//! Grids, compactly supported profiles, field storage, and conversions
//! between primitive (u_t, u_x) and Riemann-type (R, S) variables.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::coeffs::SpeedModel;
use crate::error::{Error, Result};
use crate::numerics::trapz_uniform;

/// Uniform 1D grid with n cells, i.e. n + 1 nodes including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Validation(format!("grid needs n >= 16 cells, got {n}")));
        }
        if !(x_max > x_min) {
            return Err(Error::Validation(format!(
                "grid needs x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Grid1D { x_min, x_max, n })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    /// Number of nodes (n + 1).
    #[inline]
    pub fn len(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.x(i))
    }

    /// Index of the node nearest to x.
    pub fn nearest(&self, x: f64) -> usize {
        (((x - self.x_min) / self.dx()).round() as isize).clamp(0, self.n as isize) as usize
    }
}

/// Smooth compactly supported profile on [-1, 1].
///
/// `BumpX` is phi(x) = -x exp(1/(x^2-1)), the default initial shape: smooth,
/// supported on [-1, 1], with phi'(0) = -1/e available in closed form.
/// `PolyBump` multiplies the plain bump exp(1/(x^2-1)) by a polynomial, which
/// covers mirrored and otherwise reshaped variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum ProfileModel {
    BumpX,
    PolyBump(Vec<f64>),
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 / (x * x - 1.0)).exp()
    } else {
        0.0
    }
}

fn bump_prime(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let d = x * x - 1.0;
        (1.0 / d).exp() * (-2.0 * x / (d * d))
    } else {
        0.0
    }
}

impl ProfileModel {
    /// phi(x)
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ProfileModel::BumpX => -x * bump(x),
            ProfileModel::PolyBump(coeffs) => {
                let mut p = 0.0;
                for &c in coeffs.iter().rev() {
                    p = p * x + c;
                }
                p * bump(x)
            }
        }
    }

    /// phi'(x), analytic.
    pub fn eval_prime(&self, x: f64) -> f64 {
        match self {
            ProfileModel::BumpX => -bump(x) - x * bump_prime(x),
            ProfileModel::PolyBump(coeffs) => {
                let mut p = 0.0;
                let mut dp = 0.0;
                for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
                    dp = dp * x + k as f64 * c;
                }
                for &c in coeffs.iter().rev() {
                    p = p * x + c;
                }
                dp * bump(x) + p * bump_prime(x)
            }
        }
    }

    /// Support interval [s_min, s_max].
    pub fn support(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    /// phi'(0); the blow-up scenarios require this to be negative.
    pub fn slope_at_zero(&self) -> f64 {
        self.eval_prime(0.0)
    }

    /// Check the main-theorem hypothesis phi'(0) < 0.
    pub fn check_theorem_slope(&self) -> Result<()> {
        let s = self.slope_at_zero();
        if s < 0.0 {
            Ok(())
        } else {
            Err(Error::HypothesisViolation(format!(
                "initial profile must have negative slope at the origin, got phi'(0) = {s}"
            )))
        }
    }
}

impl Default for ProfileModel {
    fn default() -> Self {
        ProfileModel::BumpX
    }
}

/// Grid-sampled (R, S, u) at one time.
///
/// R = u_t + c(u) u_x and S = u_t - c(u) u_x; u is evolved prognostically via
/// u_t = (R + S)/2, so the relation u_x = (R - S)/(2c) is a checked invariant
/// rather than a definition (see [`consistency_residual`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub t: f64,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
}

impl FieldState {
    pub fn zeros(t: f64, len: usize) -> Self {
        FieldState {
            t,
            r: vec![0.0; len],
            s: vec![0.0; len],
            u: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.r.iter().all(|v| v.is_finite())
            && self.s.iter().all(|v| v.is_finite())
            && self.u.iter().all(|v| v.is_finite())
    }

    /// Pointwise u_t = (R + S)/2.
    pub fn u_t(&self, i: usize) -> f64 {
        0.5 * (self.r[i] + self.s[i])
    }

    /// Pointwise u_x = (R - S)/(2 c(u)).
    pub fn u_x(&self, i: usize, model: &SpeedModel) -> f64 {
        (self.r[i] - self.s[i]) / (2.0 * model.c_raw(self.u[i]))
    }

    /// Export as CSV: a comment header carrying run metadata, then x,R,S,u rows.
    pub fn write_csv<W: Write>(
        &self,
        grid: &Grid1D,
        lambda: f64,
        eps: f64,
        mut w: W,
    ) -> Result<()> {
        writeln!(w, "# t={} lambda={} eps={}", self.t, lambda, eps)?;
        writeln!(w, "x,R,S,u")?;
        for i in 0..self.len() {
            writeln!(w, "{},{},{},{}", grid.x(i), self.r[i], self.s[i], self.u[i])?;
        }
        Ok(())
    }
}

/// Build the scaled initial data u(0,x) = eps * phi(x/eps) with
/// u_t(0,x) = -c(u(0,x)) u_x(0,x), i.e. R(0,.) = 0 exactly and
/// S(0,x) = -2 c(eps phi(x/eps)) phi'(x/eps).
pub fn build_initial_data(
    profile: &ProfileModel,
    eps: f64,
    model: &SpeedModel,
    grid: &Grid1D,
) -> Result<FieldState> {
    if !(eps > 0.0) {
        return Err(Error::Validation(format!("eps must be positive, got {eps}")));
    }
    let (s_min, s_max) = profile.support();
    let (lo, hi) = (eps * s_min, eps * s_max);
    if lo <= grid.x_min || hi >= grid.x_max {
        return Err(Error::SupportOverflow {
            lo,
            hi,
            x_min: grid.x_min,
            x_max: grid.x_max,
        });
    }
    let mut state = FieldState::zeros(0.0, grid.len());
    for i in 0..grid.len() {
        let y = grid.x(i) / eps;
        let u0 = eps * profile.eval(y);
        state.u[i] = u0;
        state.s[i] = -2.0 * model.c_raw(u0) * profile.eval_prime(y);
        // R(0, x) = 0 by construction of the data family
    }
    Ok(state)
}

/// Convert primitive derivatives to Riemann-type variables:
/// R = u_t + c(u) u_x, S = u_t - c(u) u_x.
pub fn rs_from_primitive(
    u_t: &[f64],
    u_x: &[f64],
    u: &[f64],
    model: &SpeedModel,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if u_t.len() != u_x.len() {
        return Err(Error::LengthMismatch {
            left: u_t.len(),
            right: u_x.len(),
        });
    }
    if u_t.len() != u.len() {
        return Err(Error::LengthMismatch {
            left: u_t.len(),
            right: u.len(),
        });
    }
    let mut r = Vec::with_capacity(u.len());
    let mut s = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let c = crate::coeffs::c_eval(model, u[i])?;
        r.push(u_t[i] + c * u_x[i]);
        s.push(u_t[i] - c * u_x[i]);
    }
    Ok((r, s))
}

/// Inverse of [`rs_from_primitive`]: u_t = (R + S)/2, u_x = (R - S)/(2c).
pub fn primitive_from_rs(
    r: &[f64],
    s: &[f64],
    u: &[f64],
    model: &SpeedModel,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if r.len() != s.len() {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: s.len(),
        });
    }
    if r.len() != u.len() {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: u.len(),
        });
    }
    let mut u_t = Vec::with_capacity(u.len());
    let mut u_x = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let c = crate::coeffs::c_eval(model, u[i])?;
        u_t.push(0.5 * (r[i] + s[i]));
        u_x.push((r[i] - s[i]) / (2.0 * c));
    }
    Ok((u_t, u_x))
}

/// Sup-norm residual of the discrete relation D_x u = (R - S)/(2 c(u)),
/// with D_x the centered difference (one-sided at the ends).
///
/// Reports only; never fails.
pub fn consistency_residual(state: &FieldState, grid: &Grid1D, model: &SpeedModel) -> f64 {
    let n = state.len();
    let dx = grid.dx();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let dxu = if i == 0 {
            (state.u[1] - state.u[0]) / dx
        } else if i == n - 1 {
            (state.u[n - 1] - state.u[n - 2]) / dx
        } else {
            (state.u[i + 1] - state.u[i - 1]) / (2.0 * dx)
        };
        let target = (state.r[i] - state.s[i]) / (2.0 * model.c_raw(state.u[i]));
        worst = worst.max((dxu - target).abs());
    }
    worst
}

/// Trapezoid integral of u_t over the grid (used by the degeneracy monitor).
pub fn integral_u_t(state: &FieldState, grid: &Grid1D) -> f64 {
    let vals: Vec<f64> = (0..state.len()).map(|i| state.u_t(i)).collect();
    trapz_uniform(&vals, grid.dx())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::new(-4.0, 4.0, 512).unwrap()
    }

    #[test]
    fn default_bump_slope() {
        let p = ProfileModel::BumpX;
        assert!((p.slope_at_zero() + (-1.0f64).exp()).abs() < 1e-15);
        p.check_theorem_slope().unwrap();
        // mirrored profile x * bump has positive slope and fails the check
        let m = ProfileModel::PolyBump(vec![0.0, 1.0]);
        assert!(m.check_theorem_slope().is_err());
    }

    #[test]
    fn initial_data_r_vanishes_everywhere() {
        let model = SpeedModel::power(1.0);
        let st = build_initial_data(&ProfileModel::BumpX, 0.35, &model, &grid()).unwrap();
        assert!(st.r.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn initial_data_center_values() {
        // eps = 1, default bump: u(0,0) = 0 and S(0,0) = 2 c0 / e
        let model = SpeedModel::affine(1.7, 0.9);
        let g = grid();
        let st = build_initial_data(&ProfileModel::BumpX, 1.0, &model, &g).unwrap();
        let i0 = g.nearest(0.0);
        assert_eq!(g.x(i0), 0.0);
        assert!(st.u[i0].abs() < 1e-15);
        let want = 2.0 * 1.7 * (-1.0f64).exp();
        assert!((st.s[i0] - want).abs() < 1e-14, "{} vs {want}", st.s[i0]);
    }

    #[test]
    fn initial_data_outside_support_is_zero() {
        let model = SpeedModel::power(1.0);
        let g = grid();
        let st = build_initial_data(&ProfileModel::BumpX, 1.0, &model, &g).unwrap();
        for i in 0..g.len() {
            if g.x(i).abs() >= 1.0 {
                assert_eq!((st.r[i], st.s[i], st.u[i]), (0.0, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn support_overflow_detected() {
        let model = SpeedModel::power(1.0);
        let g = Grid1D::new(-0.5, 0.5, 64).unwrap();
        assert!(matches!(
            build_initial_data(&ProfileModel::BumpX, 1.0, &model, &g),
            Err(Error::SupportOverflow { .. })
        ));
    }

    #[test]
    fn rs_round_trip_and_trivial_cases() {
        let model = SpeedModel::affine(2.0, 0.5);
        let u = vec![0.0, 0.1, -0.2, 0.3];
        let u_t = vec![0.0, 1.0, 0.5, -0.25];
        let u_x = vec![0.0, 0.0, 1.0, 0.75];
        let (r, s) = rs_from_primitive(&u_t, &u_x, &u, &model).unwrap();
        assert_eq!((r[0], s[0]), (0.0, 0.0));
        assert_eq!((r[1], s[1]), (1.0, 1.0)); // u_x = 0: c drops out
        let (bt, bx) = primitive_from_rs(&r, &s, &u, &model).unwrap();
        for i in 0..u.len() {
            assert!((bt[i] - u_t[i]).abs() < 1e-12 * u_t[i].abs().max(1.0));
            assert!((bx[i] - u_x[i]).abs() < 1e-12 * u_x[i].abs().max(1.0));
        }
    }

    #[test]
    fn rs_unit_gradient_with_c_two() {
        let model = SpeedModel::affine(2.0, 0.0);
        let (r, s) = rs_from_primitive(&[0.0], &[1.0], &[0.0], &model).unwrap();
        assert_eq!((r[0], s[0]), (2.0, -2.0));
    }

    #[test]
    fn rs_length_mismatch() {
        let model = SpeedModel::power(1.0);
        assert!(matches!(
            rs_from_primitive(&[0.0, 1.0], &[0.0], &[0.0], &model),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn consistency_residual_zero_state_and_spike() {
        let model = SpeedModel::power(1.0);
        let g = grid();
        let st = FieldState::zeros(0.0, g.len());
        assert_eq!(consistency_residual(&st, &g, &model), 0.0);

        let mut st = st;
        st.u[200] = 1.0;
        let res = consistency_residual(&st, &g, &model);
        let expect = 1.0 / (2.0 * g.dx());
        assert!((res - expect).abs() < 1e-9, "{res} vs {expect}");
    }

    #[test]
    fn consistency_residual_second_order_on_initial_data() {
        let model = SpeedModel::power(1.0);
        let coarse = Grid1D::new(-4.0, 4.0, 512).unwrap();
        let fine = Grid1D::new(-4.0, 4.0, 1024).unwrap();
        let rc = consistency_residual(
            &build_initial_data(&ProfileModel::BumpX, 1.0, &model, &coarse).unwrap(),
            &coarse,
            &model,
        );
        let rf = consistency_residual(
            &build_initial_data(&ProfileModel::BumpX, 1.0, &model, &fine).unwrap(),
            &fine,
            &model,
        );
        let ratio = rc / rf;
        assert!((2.5..6.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn initial_s_sign_opposes_profile_slope() {
        let model = SpeedModel::power(1.0);
        let g = grid();
        let eps = 0.5;
        let st = build_initial_data(&ProfileModel::BumpX, eps, &model, &g).unwrap();
        for i in 0..g.len() {
            let y = g.x(i) / eps;
            let slope = ProfileModel::BumpX.eval_prime(y);
            if slope != 0.0 {
                assert!(st.s[i] * slope < 0.0, "sign at node {i}");
            } else {
                assert_eq!(st.s[i], 0.0);
            }
        }
    }
}
