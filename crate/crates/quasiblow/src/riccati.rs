//! The comparison constant system and the Riccati equation
//! y' = a^2 y^2 - m^2 whose blow-up bounds the growth of the scaled
//! Riemann quantity s(t) = c^((lambda-1)/2) S along plus-characteristics.

use serde::{Deserialize, Serialize};

use crate::coeffs::SpeedModel;
use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, line_fit};
use crate::state::ProfileModel;

/// The constant system entering the comparison argument.
///
/// All quantities depend only on (lambda, c0, c1, phi); the eps-dependence
/// enters later through [`RiccatiParams::from_constants`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constants {
    pub lambda: f64,
    /// p = 2/lambda
    pub p: f64,
    pub c0: f64,
    pub c1: f64,
    pub cstar1: f64,
    pub cstar2: f64,
    pub cstar3: f64,
    pub cstar4: f64,
    pub sigma_sq: f64,
    pub t_b: f64,
    /// integral |phi'|^p over the support
    pub phi_x_norm_p: f64,
    pub phi_x_zero: f64,
}

impl Constants {
    /// t_b recomputed through the algebraic identity t_b = 2/(C*3 sigma^2);
    /// must agree with the stored value to rounding.
    pub fn t_b_from_sigma(&self) -> f64 {
        2.0 / (self.cstar3 * self.sigma_sq)
    }
}

/// Compute the constant system for a theorem scenario.
pub fn compute_constants(
    lambda: f64,
    model: &SpeedModel,
    profile: &ProfileModel,
) -> Result<Constants> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::HypothesisViolation(format!(
            "constants are defined for lambda in (0, 1], got {lambda}"
        )));
    }
    let c0 = model.c_at_zero();
    let c1 = model.c_prime_at_zero();
    if c1 <= 0.0 {
        return Err(Error::HypothesisViolation(format!(
            "constants require c'(0) > 0, got {c1}"
        )));
    }
    profile.check_theorem_slope()?;
    let phi_x_zero = profile.slope_at_zero();
    let p = 2.0 / lambda;
    let (s_min, s_max) = profile.support();
    let phi_x_norm_p =
        adaptive_simpson(&|x: f64| profile.eval_prime(x).abs().powf(p), s_min, s_max, 1e-10);

    let cstar1 = (c1 / c0)
        * ((2.0 / c0) * (2f64.powf(4.0 / lambda) * c0.powf(2.0 / lambda) * phi_x_norm_p + 1.0))
            .powf(lambda);
    let cstar2 = 2f64.powf((4.0 + lambda) / lambda) * c0.powf(2.0 / lambda);
    let cstar3 = lambda * c1 * c0.powf(-(lambda + 1.0) / 2.0);
    let cstar4 = 2.0 * (2.0 - lambda) * c1 * c0.powf((lambda - 3.0) / 2.0) * cstar1 * cstar1;
    let sigma_sq = -2f64.powf((lambda - 1.0) / 2.0) * c0.powf((lambda + 1.0) / 2.0) * phi_x_zero;
    let t_b = -2f64.powf((3.0 - lambda) / 2.0)
        / (cstar3 * c0.powf((lambda + 1.0) / 2.0) * phi_x_zero);
    Ok(Constants {
        lambda,
        p,
        c0,
        c1,
        cstar1,
        cstar2,
        cstar3,
        cstar4,
        sigma_sq,
        t_b,
        phi_x_norm_p,
        phi_x_zero,
    })
}

/// Parameters of y' = a^2 y^2 - m^2 with y(0) = y0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RiccatiParams {
    pub a_sq: f64,
    pub m: f64,
    pub y0: f64,
}

impl RiccatiParams {
    pub fn new(a: f64, y0: f64, m: f64) -> Self {
        RiccatiParams {
            a_sq: a * a,
            m,
            y0,
        }
    }

    /// The eps-dependent comparison parameters: a^2 = C*3,
    /// m = sqrt(C*4) t_b^(1-lambda) eps^lambda, y0 = sigma^2.
    pub fn from_constants(c: &Constants, eps: f64) -> Self {
        RiccatiParams {
            a_sq: c.cstar3,
            m: c.cstar4.sqrt() * c.t_b.powf(1.0 - c.lambda) * eps.powf(c.lambda),
            y0: c.sigma_sq,
        }
    }

    pub fn a(&self) -> f64 {
        self.a_sq.sqrt()
    }

    /// The comparison solution blows up iff a y0 > m.
    pub fn on_blowup_branch(&self) -> bool {
        self.a() * self.y0 > self.m
    }

    /// t_b expressed through the same parameters: 2/(a^2 y0).
    pub fn t_b(&self) -> f64 {
        2.0 / (self.a_sq * self.y0)
    }
}

/// Blow-up time of the comparison solution, or infinity off the blow-up
/// branch. Uses atanh for small-m stability; continuous at m = 0.
pub fn riccati_blowup_time(params: &RiccatiParams) -> f64 {
    let a = params.a();
    let (m, y0) = (params.m, params.y0);
    if m == 0.0 {
        if y0 > 0.0 {
            1.0 / (params.a_sq * y0)
        } else {
            f64::INFINITY
        }
    } else if a * y0 > m {
        (m / (a * y0)).atanh() / (a * m)
    } else {
        f64::INFINITY
    }
}

/// Closed-form solution of y' = a^2 y^2 - m^2, y(0) = y0 at time t >= 0.
pub fn riccati_solve(params: &RiccatiParams, t: f64) -> Result<f64> {
    let a = params.a();
    let (m, y0) = (params.m, params.y0);
    let t_star = riccati_blowup_time(params);
    if t >= t_star {
        return Err(Error::EvaluationPastBlowup { t, t_star });
    }
    if t == 0.0 {
        return Ok(y0);
    }
    Ok(if m == 0.0 {
        y0 / (1.0 - params.a_sq * y0 * t)
    } else if a * y0 > m {
        // blow-up branch: y = (m/a) coth(a m (T* - t))
        (m / a) / (a * m * (t_star - t)).tanh()
    } else if a * y0 >= -m {
        // between the equilibria: decays toward -m/a
        (m / a) * ((a * y0 / m).atanh() - a * m * t).tanh()
    } else {
        // below -m/a: rises toward -m/a
        (m / a) / ((m / (a * y0)).atanh() - a * m * t).tanh()
    })
}

/// Least-squares projection of the blow-up time of a growing sampled signal.
///
/// For Riccati-type growth 1/y(t) is affine in t, so the zero crossing of a
/// line fitted to 1/y over the resolved growth window projects the blow-up
/// time without needing the (unresolvable) large-amplitude tail. Samples are
/// (t, y); uses the window from 2% above y(0) to 90% of the peak.
pub fn projected_blowup_onset(samples: &[(f64, f64)]) -> Option<f64> {
    if samples.len() < 6 {
        return None;
    }
    let y_start = samples[0].1;
    if !(y_start > 0.0) {
        return None;
    }
    let peak = samples.iter().map(|&(_, y)| y).fold(f64::NEG_INFINITY, f64::max);
    if peak < 1.1 * y_start {
        return None;
    }
    let lo = 1.02 * y_start;
    let hi = 0.9 * peak;
    let mut ts = Vec::new();
    let mut zs = Vec::new();
    for &(t, y) in samples {
        if y >= lo && y <= hi {
            ts.push(t);
            zs.push(1.0 / y);
        } else if y > hi {
            break;
        }
    }
    if ts.len() < 4 {
        return None;
    }
    let (slope, intercept, _) = line_fit(&ts, &zs);
    if slope >= 0.0 {
        return None;
    }
    Some(-intercept / slope)
}

/// Margin report of a traced signal against the closed-form comparison
/// solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// min over checked samples of s(t) - y(t)
    pub min_margin: f64,
    pub min_margin_t: f64,
    /// first sample (if any) where the margin went below -tolerance
    pub first_violation_t: Option<f64>,
    pub tolerance: f64,
    /// number of samples inside the comparison window
    pub samples_checked: usize,
    /// end of the comparison window (0.95 T* on the blow-up branch)
    pub window_end: f64,
    /// projected blow-up onset of the traced signal (1/s line fit)
    pub onset_t: Option<f64>,
    pub t_b: f64,
    pub onset_before_t_b: Option<bool>,
}

/// Check the comparison s(t) >= y(t) over the traced samples.
///
/// Samples must start at t = 0 with s(0) >= y0. On the blow-up branch the
/// window ends at 0.95 of the comparison blow-up time; otherwise every
/// sample is checked.
pub fn comparison_certificate(
    traced: &[(f64, f64)],
    params: &RiccatiParams,
    tolerance: f64,
) -> Result<ComparisonReport> {
    let first = traced
        .first()
        .ok_or_else(|| Error::Validation("comparison needs at least one traced sample".into()))?;
    if first.0.abs() > 1e-12 {
        return Err(Error::Validation(format!(
            "traced samples must start at t = 0, got {}",
            first.0
        )));
    }
    if first.1 < params.y0 {
        return Err(Error::HypothesisViolation(format!(
            "comparison requires s(0) >= y0: {} < {}",
            first.1, params.y0
        )));
    }
    let t_star = riccati_blowup_time(params);
    let window_end = if t_star.is_finite() {
        0.95 * t_star
    } else {
        f64::INFINITY
    };
    let mut min_margin = f64::INFINITY;
    let mut min_margin_t = 0.0;
    let mut first_violation_t = None;
    let mut checked = 0usize;
    for &(t, s) in traced {
        if t > window_end {
            break;
        }
        let y = riccati_solve(params, t)?;
        let margin = s - y;
        checked += 1;
        if margin < min_margin {
            min_margin = margin;
            min_margin_t = t;
        }
        if margin < -tolerance && first_violation_t.is_none() {
            first_violation_t = Some(t);
        }
    }
    let onset_t = projected_blowup_onset(traced);
    let t_b = params.t_b();
    Ok(ComparisonReport {
        min_margin,
        min_margin_t,
        first_violation_t,
        tolerance,
        samples_checked: checked,
        window_end,
        onset_t,
        t_b,
        onset_before_t_b: onset_t.map(|o| o < t_b),
    })
}
