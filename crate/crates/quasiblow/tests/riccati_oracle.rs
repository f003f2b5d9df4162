//! Closed-form Riccati solution and constants against independent oracles.

mod common;

use quasiblow::riccati::{
    compute_constants, riccati_blowup_time, riccati_solve, RiccatiParams,
};
use quasiblow::state::ProfileModel;
use quasiblow::SpeedModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_matches_rk_oracle_on_blowup_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let a: f64 = rng.gen_range(0.3..3.0);
        let y0: f64 = rng.gen_range(0.2..5.0);
        let m: f64 = rng.gen_range(0.0..0.95) * a * y0;
        let params = RiccatiParams::new(a, y0, m);
        let rhs = move |_t: f64, y: f64| a * a * y * y - m * m;
        let t_star = riccati_blowup_time(&params);
        assert!(t_star.is_finite());
        for k in 1..=10 {
            let t = 0.9 * t_star * k as f64 / 10.0;
            let closed = riccati_solve(&params, t).unwrap();
            let rk = common::rk45(&rhs, 0.0, y0, t, 1e-12);
            let rel = (closed - rk).abs() / closed.abs().max(1.0);
            assert!(rel < 1e-8, "a={a} y0={y0} m={m} t={t}: {closed} vs {rk}");
        }
    }
}

#[test]
fn closed_form_matches_rk_oracle_off_blowup_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let a: f64 = rng.gen_range(0.3..2.0);
        let m: f64 = rng.gen_range(0.5..2.0);
        let y0: f64 = rng.gen_range(-3.0..0.9) * m / a;
        let params = RiccatiParams::new(a, y0, m);
        let rhs = move |_t: f64, y: f64| a * a * y * y - m * m;
        for k in 1..=5 {
            let t = 0.6 * k as f64;
            let closed = riccati_solve(&params, t).unwrap();
            let rk = common::rk45(&rhs, 0.0, y0, t, 1e-12);
            assert!(
                (closed - rk).abs() < 1e-8 * closed.abs().max(1.0),
                "a={a} y0={y0} m={m} t={t}"
            );
        }
    }
}

#[test]
fn blowup_time_matches_integrate_to_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..25 {
        let a: f64 = rng.gen_range(0.5..2.0);
        let y0: f64 = rng.gen_range(0.5..3.0);
        let m: f64 = rng.gen_range(0.0..0.8) * a * y0;
        let params = RiccatiParams::new(a, y0, m);
        let t_star = riccati_blowup_time(&params);
        let rhs = move |_t: f64, y: f64| a * a * y * y - m * m;
        let crossed =
            common::rk45_first_crossing(&rhs, 0.0, y0, 1e8, 2.0 * t_star, 1e-12).unwrap();
        let rel = (crossed - t_star).abs() / t_star;
        assert!(rel < 1e-4, "a={a} y0={y0} m={m}: {crossed} vs {t_star} ({rel:.2e})");
    }
}

#[test]
fn small_m_limit_approaches_pure_riccati_time() {
    let a: f64 = 1.3;
    let y0 = 0.7;
    let pure = 1.0 / (a * a * y0);
    let t = riccati_blowup_time(&RiccatiParams::new(a, y0, 1e-6));
    assert!((t - pure).abs() / pure < 1e-5, "{t} vs {pure}");
}

#[test]
fn constants_quadrature_matches_independent_simpson() {
    // lambda = 1, power a = 1: C*1 = 2 (16 |phi_x|_2^2 + 1) with the norm by
    // an independent fixed-step Simpson rule
    let profile = ProfileModel::BumpX;
    let c = compute_constants(1.0, &SpeedModel::power(1.0), &profile).unwrap();
    let norm = common::simpson_fixed(&|x: f64| profile.eval_prime(x).powi(2), -1.0, 1.0, 1 << 14);
    assert!(
        (c.phi_x_norm_p - norm).abs() < 1e-9,
        "{} vs {norm}",
        c.phi_x_norm_p
    );
    let cstar1 = 2.0 * (16.0 * norm + 1.0);
    assert!((c.cstar1 - cstar1).abs() < 1e-8);
    // derived comparison parameters for a desk-scale eps
    let p = RiccatiParams::from_constants(&c, 0.1);
    assert!((p.a_sq - 1.0).abs() < 1e-14);
    assert!((p.y0 - (-1.0f64).exp()).abs() < 1e-14);
    let m_expected = c.cstar4.sqrt() * 0.1;
    assert!((p.m - m_expected).abs() < 1e-12);
}

#[test]
fn t_b_identity_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let lambda: f64 = rng.gen_range(0.05..1.0);
        let c0: f64 = rng.gen_range(0.5..2.0);
        let c1: f64 = rng.gen_range(0.1..2.0);
        let q: f64 = rng.gen_range(0.2..3.0);
        // scaled profile phi = -q x exp(1/(x^2-1)): phi'(0) = -q/e
        let profile = ProfileModel::PolyBump(vec![0.0, -q]);
        let c = compute_constants(lambda, &SpeedModel::affine(c0, c1), &profile).unwrap();
        let rel = (c.t_b - c.t_b_from_sigma()).abs() / c.t_b;
        assert!(rel < 1e-12, "lambda={lambda} c0={c0} c1={c1} q={q}: {rel:.2e}");
        assert!((c.phi_x_zero + q * (-1.0f64).exp()).abs() < 1e-14);
    }
}
