use quasiblow::riccati::projected_blowup_onset;
use quasiblow::*;

fn main() {
    // (a) lambda=1 energy drift at wide eps
    for (eps, half) in [(2.0f64, 12.0), (3.0, 14.0)] {
        let grid = Grid1D::new(-half, half, 8192).unwrap();
        let mut cfg = RunConfig::new(1.0, eps, SpeedModel::power(1.0), grid, 6.5);
        cfg.record_every = 8;
        cfg.theorem = true;
        let traj = solver::run(&cfg).unwrap();
        let e0 = traj.samples[0].energy;
        let driver: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.max_s)).collect();
        let onset = projected_blowup_onset(&driver);
        print!("eps={eps}: event={:?} onset={:?} drift@t:", traj.event, onset.map(|o| (o*100.0).round()/100.0));
        for frac in [0.4, 0.55, 0.7, 0.8, 0.9, 1.0] {
            let tcut = frac * traj.t_final;
            let drift = traj.samples.iter().filter(|s| s.t <= tcut)
                .map(|s| (s.energy - e0).abs() / e0).fold(0.0f64, f64::max);
            print!(" [{tcut:.2}: {drift:.1e}]");
        }
        println!();
    }

    // (b) Holder fit variants at lambda=1, eps=0.4, n=8192
    let grid = Grid1D::new(-8.5, 8.5, 8192).unwrap();
    let mut cfg = RunConfig::new(1.0, 0.4, SpeedModel::power(1.0), grid, 6.5);
    cfg.record_every = 8;
    cfg.theorem = true;
    let traj = solver::run(&cfg).unwrap();
    let dx = grid.dx();
    for t_snap in [5.0, 5.5, 6.0, 6.5] {
        let snap = traj.snapshots.iter().filter(|s| s.t <= t_snap).next_back().unwrap();
        // find the singular cell: max |u_x| via differences
        let mut istar = 1;
        let mut best = 0.0f64;
        for i in 1..snap.len() {
            let g = (snap.u[i] - snap.u[i-1]).abs();
            if g > best { best = g; istar = i; }
        }
        let xstar = grid.x(istar);
        for (name, xwin, hcap) in [
            ("global, W/8", f64::INFINITY, f64::INFINITY),
            ("x in +-2eps, h<=eps/2", 2.0*0.4, 0.4/2.0),
            ("x in +-4eps, h<=eps", 4.0*0.4, 0.4),
        ] {
            let mut pts = vec![];
            let mut m = 4usize;
            // measured support for the global cap
            let umax = snap.u.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            let lo = snap.u.iter().position(|&v| v.abs() > 1e-13*umax).unwrap();
            let hi = snap.len()-1 - snap.u.iter().rev().position(|&v| v.abs() > 1e-13*umax).unwrap();
            let wглоб = (hi-lo) as f64 * dx / 8.0;
            let cap = hcap.min(wглоб.max(0.0));
            while (m as f64) * dx <= cap {
                let mut w = 0.0f64;
                for i in 0..snap.len()-m {
                    let x = grid.x(i);
                    if (x - xstar).abs() <= xwin {
                        w = w.max((snap.u[i+m]-snap.u[i]).abs());
                    }
                }
                if w > 0.0 { pts.push(((m as f64)*dx, w)); }
                m *= 2;
            }
            if pts.len() >= 4 {
                let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
                let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
                let n = xs.len() as f64;
                let xm = xs.iter().sum::<f64>()/n; let ym = ys.iter().sum::<f64>()/n;
                let slope: f64 = xs.iter().zip(&ys).map(|(x,y)| (x-xm)*(y-ym)).sum::<f64>()
                    / xs.iter().map(|x| (x-xm)*(x-xm)).sum::<f64>();
                println!("t={:.2} x*={:.2} {name}: scales={} slope={:.3}", snap.t, xstar, pts.len(), slope);
            } else {
                println!("t={:.2} {name}: insufficient scales ({})", snap.t, pts.len());
            }
        }
    }
}
