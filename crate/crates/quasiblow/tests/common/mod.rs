//! Shared test oracles, independent of the library's implementation paths:
//! an adaptive Cash-Karp RK45 integrator and a fixed-step Simpson rule.

#![allow(dead_code)]

/// Adaptive Cash-Karp RK45 for scalar y' = f(t, y) from (t0, y0) to t_end.
pub fn rk45<F: Fn(f64, f64) -> f64>(f: &F, t0: f64, y0: f64, t_end: f64, tol: f64) -> f64 {
    let mut t = t0;
    let mut y = y0;
    let mut h = (t_end - t0) / 100.0;
    let mut steps = 0u64;
    while t < t_end {
        steps += 1;
        assert!(steps < 50_000_000, "rk45 stalled at t = {t} (h = {h})");
        let h_floor = 4.0 * f64::EPSILON * t.abs().max(t_end - t0);
        h = h.min(t_end - t).max(h_floor);
        let (y5, err) = ck_step(f, t, y, h);
        let scale = tol * (1.0 + y.abs());
        if err.is_finite() && err <= scale || h <= h_floor {
            t += h;
            y = y5;
            h *= (0.9 * (scale / err.max(1e-300)).powf(0.2)).clamp(0.2, 5.0);
        } else {
            h *= 0.25;
        }
    }
    y
}

/// First time at which the solution reaches `level`, or None before t_cap.
pub fn rk45_first_crossing<F: Fn(f64, f64) -> f64>(
    f: &F,
    t0: f64,
    y0: f64,
    level: f64,
    t_cap: f64,
    tol: f64,
) -> Option<f64> {
    let mut t = t0;
    let mut y = y0;
    let mut h = (t_cap - t0) / 1000.0;
    let mut steps = 0u64;
    while t < t_cap {
        steps += 1;
        assert!(steps < 50_000_000, "rk45 stalled at t = {t} (h = {h})");
        let h_floor = 4.0 * f64::EPSILON * t.abs().max(t_cap - t0);
        h = h.min(t_cap - t).max(h_floor);
        let (y5, err) = ck_step(f, t, y, h);
        let scale = tol * (1.0 + y.abs());
        if err.is_finite() && err <= scale || h <= h_floor {
            if y5.is_finite() && y5 >= level {
                // bisect inside the accepted step
                let (mut lo, mut hi) = (0.0f64, h);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let (ym, _) = ck_step(f, t, y, mid);
                    if ym >= level {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(t + 0.5 * (lo + hi));
            }
            t += h;
            y = y5;
            h *= (0.9 * (scale / err.max(1e-300)).powf(0.2)).clamp(0.2, 5.0);
        } else {
            h *= 0.25;
        }
    }
    None
}

fn ck_step<F: Fn(f64, f64) -> f64>(f: &F, t: f64, y: f64, h: f64) -> (f64, f64) {
    const A2: f64 = 0.2;
    const A3: f64 = 0.3;
    const A4: f64 = 0.6;
    const A5: f64 = 1.0;
    const A6: f64 = 0.875;
    let k1 = f(t, y);
    let k2 = f(t + A2 * h, y + h * (0.2 * k1));
    let k3 = f(t + A3 * h, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = f(t + A4 * h, y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
    let k5 = f(
        t + A5 * h,
        y + h * (-11.0 / 54.0 * k1 + 2.5 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4),
    );
    let k6 = f(
        t + A6 * h,
        y + h
            * (1631.0 / 55296.0 * k1
                + 175.0 / 512.0 * k2
                + 575.0 / 13824.0 * k3
                + 44275.0 / 110592.0 * k4
                + 253.0 / 4096.0 * k5),
    );
    let y5 = y
        + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4
            + 512.0 / 1771.0 * k6);
    let y4 = y
        + h * (2825.0 / 27648.0 * k1
            + 18575.0 / 48384.0 * k3
            + 13525.0 / 55296.0 * k4
            + 277.0 / 14336.0 * k5
            + 0.25 * k6);
    (y5, (y5 - y4).abs())
}

/// Fixed-step composite Simpson rule with 2^k panels (independent quadrature
/// oracle for the adaptive one in the library).
pub fn simpson_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
