use quasiblow::diagnostics::*;
use quasiblow::riccati::*;
use quasiblow::characteristics::{trace_scaled_riemann, CharDirection};
use quasiblow::*;

struct Cell {
    lambda: f64,
    eps: f64,
    n: usize,
}

fn cfg_for(lambda: f64, eps: f64, n: usize) -> RunConfig {
    let (half, t_max) = if lambda == 1.0 { (8.5, 6.5) } else { (15.5, 13.0) };
    let grid = Grid1D::new(-half, half, n).unwrap();
    let mut cfg = RunConfig::new(lambda, eps, SpeedModel::power(1.0), grid, t_max);
    cfg.record_every = 8;
    cfg.theorem = true;
    cfg
}

fn main() {
    let mut cells = vec![];
    for &lambda in &[0.5, 1.0] {
        for &eps in &[0.4, 0.2, 0.1] {
            for &n in &[4096usize, 8192] {
                cells.push(Cell { lambda, eps, n });
            }
        }
    }
    for c in &cells {
        let cfg = cfg_for(c.lambda, c.eps, c.n);
        let t0 = std::time::Instant::now();
        let traj = solver::run(&cfg).unwrap();
        let window = resolved_window_end(&traj);
        let mut sup_r: f64 = 0.0;
        let mut sup_lp: f64 = 0.0;
        let mut min_c = f64::INFINITY;
        let mut max_c: f64 = 0.0;
        for s in traj.samples.iter().filter(|s| s.t <= window) {
            sup_r = sup_r.max(s.max_abs_r);
            sup_lp = sup_lp.max(s.lp_sum);
            min_c = min_c.min(s.min_c);
            max_c = max_c.max(s.max_c);
        }
        let driver: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.max_s)).collect();
        let onset = projected_blowup_onset(&driver);
        let consts = compute_constants(c.lambda, &cfg.model, &cfg.profile).unwrap();
        let params = RiccatiParams::from_constants(&consts, c.eps);
        let trace = trace_scaled_riemann(&traj, (0.0, 0.0), CharDirection::Plus).unwrap();
        let series: Vec<(f64, f64)> = trace.time_series().into_iter().filter(|&(t, _)| t <= window).collect();
        let cert = comparison_certificate(&series, &params, 1e-3 * consts.sigma_sq).unwrap();
        // energy drift up to 0.9*onset
        let e0 = traj.samples[0].energy;
        let wmax = onset.map(|o| 0.9 * o).unwrap_or(window);
        let drift = traj.samples.iter().filter(|s| s.t <= wmax)
            .map(|s| (s.energy - e0).abs() / e0).fold(0.0f64, f64::max);
        // Holder at the last snapshot
        let hol = holder_exponent(&traj, (0.0, traj.t_final)).map(|h| h.spatial.slope);
        println!(
            "lam={} eps={} n={}: {:?} onset={} supR={:.4} supLp={:.4} c=[{:.3},{:.3}] margin={:.2e} drift(0.9T)={:.2e} holder={:?} Tb={:.3} [{:.1}s]",
            c.lambda, c.eps, c.n, traj.event,
            onset.map(|o| format!("{o:.3}")).unwrap_or("none".into()),
            sup_r, sup_lp, min_c, max_c, cert.min_margin, drift,
            hol.map(|h| (h * 1000.0).round() / 1000.0), consts.t_b,
            t0.elapsed().as_secs_f64()
        );
    }
}
