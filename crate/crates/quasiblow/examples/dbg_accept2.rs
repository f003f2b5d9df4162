use quasiblow::*;

fn cfg_for(lambda: f64, eps: f64, n: usize) -> RunConfig {
    let (half, t_max) = if lambda == 1.0 { (8.5, 6.5) } else { (15.5, 13.0) };
    let grid = Grid1D::new(-half, half, n).unwrap();
    let mut cfg = RunConfig::new(lambda, eps, SpeedModel::power(1.0), grid, t_max);
    cfg.record_every = 8;
    cfg.theorem = true;
    cfg
}

fn main() {
    // (i) energy drift and min_c profiles
    for (lambda, eps, n) in [(1.0, 0.4, 8192usize), (1.0, 1.0, 8192), (0.5, 0.4, 8192), (0.5, 0.2, 8192), (0.5, 0.2, 4096)] {
        let mut cfg = cfg_for(lambda, eps, n);
        if eps == 1.0 { cfg.grid = Grid1D::new(-9.0, 9.0, n).unwrap(); }
        let traj = solver::run(&cfg).unwrap();
        let e0 = traj.samples[0].energy;
        print!("lam={lambda} eps={eps} n={n} {:?}: drift/minc/maxR@t:", traj.event);
        let tf = traj.t_final;
        for frac in [0.3, 0.5, 0.65, 0.8, 0.9, 1.0] {
            let tcut = frac * tf;
            let drift = traj.samples.iter().filter(|s| s.t <= tcut)
                .map(|s| (s.energy - e0).abs() / e0).fold(0.0f64, f64::max);
            let minc = traj.samples.iter().filter(|s| s.t <= tcut)
                .map(|s| s.min_c).fold(f64::INFINITY, f64::min);
            let maxr = traj.samples.iter().filter(|s| s.t <= tcut)
                .map(|s| s.max_abs_r).fold(0.0f64, f64::max);
            print!(" [{tcut:.2}: {drift:.1e} {minc:.2} {maxr:.3}]");
        }
        println!();
    }
}
