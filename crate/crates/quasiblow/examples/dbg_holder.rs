use quasiblow::diagnostics::holder_exponent;
use quasiblow::*;

fn main() {
    for (lambda, eps, half, t_max) in [(1.0, 0.4, 8.5, 6.5), (0.5, 0.4, 15.5, 13.0)] {
        let grid = Grid1D::new(-half, half, 8192).unwrap();
        let mut cfg = RunConfig::new(lambda, eps, SpeedModel::power(1.0), grid, t_max);
        cfg.record_every = 8;
        cfg.theorem = true;
        let traj = solver::run(&cfg).unwrap();
        for frac in [0.85, 0.95, 1.0] {
            let fit = holder_exponent(&traj, (0.0, frac * traj.t_final)).unwrap();
            println!(
                "lam={lambda} eps={eps} window_end={:.2}: snapshot t={:.2} spatial slope={:.3} ({} scales) temporal={:?}",
                frac * traj.t_final, fit.snapshot_t, fit.spatial.slope, fit.spatial.abscissae.len(),
                fit.temporal.map(|t| (t.slope * 1000.0).round() / 1000.0)
            );
        }
    }
}
