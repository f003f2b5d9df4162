use quasiblow::*;

fn probe(lambda: f64, eps: f64, n: usize, half: f64, t_max: f64) {
    let grid = Grid1D::new(-half, half, n).unwrap();
    let mut cfg = RunConfig::new(lambda, eps, SpeedModel::power(1.0), grid, t_max);
    cfg.record_every = 1 << 30;
    cfg.theorem = true;
    match solver::run(&cfg) {
        Ok(traj) => {
            let last = traj.samples.last().unwrap();
            let init_norm = traj.samples[0].max_abs_r.max(traj.samples[0].max_abs_s);
            print!(
                "lambda={lambda} eps={eps} n={n}: event={:?} t_final={:.4} steps={} maxS={:.3e} min_c={:.4}",
                traj.event, traj.t_final, traj.steps, last.max_abs_s, last.min_c
            );
            for m in [1e2, 1e4] {
                if let Some(t) = traj.crossing_time(m * init_norm) {
                    print!("  T({m:.0e}x)={t:.4}");
                }
            }
            println!();
        }
        Err(e) => println!("lambda={lambda} eps={eps} n={n}: error: {e}"),
    }
}

fn main() {
    probe(1.0, 0.1, 4096, 7.0, 6.2);
    probe(1.0, 0.1, 8192, 7.0, 6.2);
    probe(1.0, 0.2, 4096, 7.2, 6.2);
    probe(1.0, 0.4, 4096, 7.4, 6.2);
    probe(0.5, 0.1, 4096, 13.4, 12.0);
    probe(0.5, 0.4, 4096, 13.8, 12.0);
}
