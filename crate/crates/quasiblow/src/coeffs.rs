//! Wave-speed models c(u), their derivatives, and real powers c(u)^q.
//!
//! The source terms of the diagonal system divide by c and multiply by c',
//! so derivatives are analytic per family rather than differenced.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A smooth wave-speed function c(u) with c(0) > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum SpeedModel {
    /// c(u) = (1 + u)^a
    Power([f64; 1]),
    /// c(u) = c0 + c1 u
    Affine([f64; 2]),
    /// c(u) = alpha cos^2 u + beta sin^2 u
    Trigonometric([f64; 2]),
    /// c(u) = sum_k coeffs[k] u^k
    Polynomial(Vec<f64>),
}

impl SpeedModel {
    pub fn power(a: f64) -> Self {
        SpeedModel::Power([a])
    }

    pub fn affine(c0: f64, c1: f64) -> Self {
        SpeedModel::Affine([c0, c1])
    }

    pub fn trigonometric(alpha: f64, beta: f64) -> Self {
        SpeedModel::Trigonometric([alpha, beta])
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        SpeedModel::Polynomial(coeffs)
    }

    /// c(0); positive for every admissible model.
    pub fn c_at_zero(&self) -> f64 {
        self.c_raw(0.0)
    }

    /// c'(0); the main-theorem scenarios require this to be positive.
    pub fn c_prime_at_zero(&self) -> f64 {
        self.c_prime_raw(0.0)
    }

    /// Unchecked evaluation; may return non-positive values outside the
    /// positivity domain. The solver uses this in its hot loop and relies on
    /// event detection to catch degeneracy.
    #[inline]
    pub fn c_raw(&self, u: f64) -> f64 {
        match self {
            SpeedModel::Power([a]) => {
                let base = 1.0 + u;
                if *a == 1.0 {
                    base
                } else {
                    base.powf(*a)
                }
            }
            SpeedModel::Affine([c0, c1]) => c0 + c1 * u,
            SpeedModel::Trigonometric([alpha, beta]) => {
                let (s, c) = u.sin_cos();
                alpha * c * c + beta * s * s
            }
            SpeedModel::Polynomial(coeffs) => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * u + c;
                }
                acc
            }
        }
    }

    /// Unchecked analytic derivative c'(u).
    #[inline]
    pub fn c_prime_raw(&self, u: f64) -> f64 {
        match self {
            SpeedModel::Power([a]) => {
                let base = 1.0 + u;
                if *a == 1.0 {
                    1.0
                } else {
                    a * base.powf(a - 1.0)
                }
            }
            SpeedModel::Affine([_, c1]) => *c1,
            SpeedModel::Trigonometric([alpha, beta]) => (beta - alpha) * (2.0 * u).sin(),
            SpeedModel::Polynomial(coeffs) => {
                let mut acc = 0.0;
                for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * u + k as f64 * c;
                }
                acc
            }
        }
    }

    /// Largest interval around 0 on which c stays positive.
    pub fn positivity_domain(&self) -> (f64, f64) {
        match self {
            SpeedModel::Power(_) => (-1.0, f64::INFINITY),
            SpeedModel::Affine([c0, c1]) => {
                if *c1 > 0.0 {
                    (-c0 / c1, f64::INFINITY)
                } else if *c1 < 0.0 {
                    (f64::NEG_INFINITY, -c0 / c1)
                } else {
                    (f64::NEG_INFINITY, f64::INFINITY)
                }
            }
            SpeedModel::Trigonometric([alpha, beta]) => {
                if *alpha > 0.0 && *beta > 0.0 {
                    (f64::NEG_INFINITY, f64::INFINITY)
                } else {
                    self.bracket_domain()
                }
            }
            SpeedModel::Polynomial(_) => self.bracket_domain(),
        }
    }

    /// Scan for the nearest sign change on each side of 0, then bisect the
    /// zero to tolerance 1e-10. Reports infinity on a side with no change
    /// found within the scan horizon.
    fn bracket_domain(&self) -> (f64, f64) {
        let zero_side = |dir: f64| -> f64 {
            let mut prev: f64 = 0.0;
            let mut step = 1e-4;
            while prev.abs() < 1e6 {
                let next = prev + dir * step;
                if self.c_raw(next) <= 0.0 {
                    // bisect in (prev, next)
                    let (mut lo, mut hi) = (prev, next);
                    while (hi - lo).abs() > 1e-10 {
                        let mid = 0.5 * (lo + hi);
                        if self.c_raw(mid) > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    return 0.5 * (lo + hi);
                }
                prev = next;
                step *= 1.05;
            }
            dir * f64::INFINITY
        };
        (zero_side(-1.0), zero_side(1.0))
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.positivity_domain();
        if u > lo && u < hi && self.c_raw(u) > 0.0 {
            Ok(())
        } else {
            Err(Error::DomainViolation { u, lo, hi })
        }
    }
}

/// Evaluate c(u), failing if u lies outside the positivity domain.
pub fn c_eval(model: &SpeedModel, u: f64) -> Result<f64> {
    model.check_domain(u)?;
    Ok(model.c_raw(u))
}

/// Evaluate c'(u), failing if u lies outside the positivity domain.
pub fn c_prime(model: &SpeedModel, u: f64) -> Result<f64> {
    model.check_domain(u)?;
    Ok(model.c_prime_raw(u))
}

/// Evaluate c(u)^q for arbitrary real q; c_power(m, u, 1) == c_eval(m, u).
pub fn c_power(model: &SpeedModel, u: f64, q: f64) -> Result<f64> {
    model.check_domain(u)?;
    let c = model.c_raw(u);
    Ok(if q == 0.0 {
        1.0
    } else if q == 1.0 {
        c
    } else {
        c.powf(q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_eval_trivial_values() {
        assert_eq!(c_eval(&SpeedModel::power(1.0), 0.0).unwrap(), 1.0);
        assert_eq!(c_eval(&SpeedModel::trigonometric(2.0, 1.0), 0.0).unwrap(), 2.0);
        assert_eq!(c_eval(&SpeedModel::affine(1.0, 2.0), 0.5).unwrap(), 2.0);
    }

    #[test]
    fn c_power_trivial_values() {
        let m = SpeedModel::power(1.0);
        assert_eq!(c_power(&m, 0.3, 0.0).unwrap(), 1.0);
        assert_eq!(c_power(&SpeedModel::power(1.0), 0.0, -0.5).unwrap(), 1.0);
        assert_eq!(c_power(&SpeedModel::affine(4.0, 1.0), 0.0, 0.5).unwrap(), 2.0);
    }

    #[test]
    fn domain_violation_reported() {
        let m = SpeedModel::power(0.5);
        assert!(c_eval(&m, -1.5).is_err());
        let m = SpeedModel::affine(1.0, 2.0);
        assert!(c_eval(&m, -0.6).is_err());
        assert!(c_eval(&m, -0.4).is_ok());
    }

    #[test]
    fn polynomial_domain_bracketed() {
        // c(u) = 1 - u^2: zeros at +-1
        let m = SpeedModel::polynomial(vec![1.0, 0.0, -1.0]);
        let (lo, hi) = m.positivity_domain();
        assert!((lo + 1.0).abs() < 1e-9, "lo = {lo}");
        assert!((hi - 1.0).abs() < 1e-9, "hi = {hi}");
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let models = [
            SpeedModel::power(1.0),
            SpeedModel::power(0.5),
            SpeedModel::power(2.3),
            SpeedModel::affine(1.0, 2.0),
            SpeedModel::trigonometric(2.0, 1.0),
            SpeedModel::polynomial(vec![1.0, 0.5, -0.25, 0.125]),
        ];
        let h = 1e-5;
        for m in &models {
            let (lo, hi) = m.positivity_domain();
            let lo = lo.max(-0.8);
            let hi = hi.min(0.8);
            for k in 0..=40 {
                let u = lo + (hi - lo) * k as f64 / 40.0;
                let fd = (m.c_raw(u + h) - m.c_raw(u - h)) / (2.0 * h);
                let an = m.c_prime_raw(u);
                let scale = an.abs().max(1.0);
                assert!(
                    (fd - an).abs() / scale < 1e-6,
                    "{m:?} at u={u}: fd={fd} analytic={an}"
                );
            }
        }
    }

    #[test]
    fn power_homomorphism() {
        let m = SpeedModel::trigonometric(2.0, 1.0);
        for k in 0..50 {
            let u = -1.4 + 2.8 * k as f64 / 49.0;
            for (q1, q2) in [(0.5, -0.25), (1.3, 2.2), (-1.0, -0.5)] {
                let lhs = c_power(&m, u, q1 + q2).unwrap();
                let rhs = c_power(&m, u, q1).unwrap() * c_power(&m, u, q2).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let m = SpeedModel::power(1.0);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"family":"power","params":[1.0]}"#);
        let back: SpeedModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
