//! Small shared numeric kernels: quadrature, interpolation, line fits.

/// Trapezoid rule for samples on a uniform grid with spacing `dx`.
pub fn trapz_uniform(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    dx * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}

/// Trapezoid rule for samples at arbitrary increasing abscissae.
pub fn trapz(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    acc
}

/// Cumulative trapezoid from the left edge; output[0] = 0.
pub fn cumtrapz_uniform(values: &[f64], dx: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..values.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * dx;
        out.push(acc);
    }
    out
}

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Least-squares straight line y = slope * x + intercept.
///
/// Returns (slope, intercept, rms residual).
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    (slope, intercept, (ss / n.max(1.0)).sqrt())
}

/// 4-point Lagrange interpolation of uniformly gridded samples.
///
/// `x0` is the coordinate of `values[0]`; nodes are clamped near the ends.
pub fn lagrange4_uniform(values: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 4);
    let s = (x - x0) / dx;
    let j = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
    let t = s - j as f64; // offset from node j, in cells
    let (f0, f1, f2, f3) = (values[j - 1], values[j], values[j + 1], values[j + 2]);
    let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    w0 * f0 + w1 * f1 + w2 * f2 + w3 * f3
}

/// Linear interpolation of uniformly gridded samples (clamped at ends).
pub fn linear_uniform(values: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let n = values.len();
    let s = ((x - x0) / dx).clamp(0.0, (n - 1) as f64);
    let j = (s.floor() as usize).min(n - 2);
    let t = s - j as f64;
    values[j] * (1.0 - t) + values[j + 1] * t
}

/// |x|^p with the convention 0^0 = 1 (used by |R|^(p-2) factors at p = 2).
#[inline]
pub fn abs_pow(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 2.0 {
        x * x
    } else {
        x.abs().powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapz_hat_integral() {
        // piecewise-linear hat of height 1 over width 1: integral of square is 1/3
        let n = 4000;
        let dx = 2.0 / n as f64;
        let vals: Vec<f64> = (0..=n)
            .map(|i| {
                let x: f64 = -1.0 + i as f64 * dx;
                (1.0 - 2.0 * x.abs()).max(0.0)
            })
            .map(|h| h * h)
            .collect();
        let q = trapz_uniform(&vals, dx);
        assert!((q - 1.0 / 3.0).abs() < 1e-6, "q = {q}");
    }

    #[test]
    fn simpson_matches_closed_forms() {
        let q = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((q - 2.0).abs() < 1e-10);
        let q = adaptive_simpson(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((q - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 2.0).collect();
        let (m, b, r) = line_fit(&xs, &ys);
        assert!((m - 3.0).abs() < 1e-12 && (b + 2.0).abs() < 1e-12 && r < 1e-12);
    }

    #[test]
    fn lagrange4_exact_on_cubics() {
        let xs: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
        let vals: Vec<f64> = xs.iter().map(|x| x.powi(3) - 2.0 * x + 1.0).collect();
        for &x in &[0.8, 2.31, 4.99] {
            let got = lagrange4_uniform(&vals, 0.0, 0.5, x);
            let want = x.powi(3) - 2.0 * x + 1.0;
            assert!((got - want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn cumtrapz_linear() {
        let vals: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let c = cumtrapz_uniform(&vals, 1.0);
        assert_eq!(c[0], 0.0);
        assert!((c[10] - 50.0).abs() < 1e-12);
    }
}
