use quasiblow::*;

fn transport_error(n: usize, order: u8, eps: f64, half: f64) -> f64 {
    let c0 = 1.0;
    let grid = Grid1D::new(-half, half, n).unwrap();
    let model = SpeedModel::affine(c0, 0.0);
    let mut cfg = RunConfig::new(1.0, eps, model, grid, 1.0);
    cfg.scheme_order = order;
    cfg.record_every = 1 << 30;
    let traj = solver::run(&cfg).unwrap();
    let fin = traj.final_state();
    let t = fin.t;
    let mut err: f64 = 0.0;
    for i in 0..grid.len() {
        let y = (grid.x(i) - c0 * t) / eps;
        let s_exact = if y.abs() < 1.0 { -2.0 * c0 * ProfileModel::BumpX.eval_prime(y) } else { 0.0 };
        err = err.max((fin.s[i] - s_exact).abs()).max(fin.r[i].abs());
    }
    err
}

fn main() {
    for (eps, half) in [(4.0, 6.0)] {
        for order in [1u8, 2u8] {
            let mut errs = vec![];
            for n in [4096usize, 8192, 16384] {
                errs.push(transport_error(n, order, eps, half));
            }
            let o1 = (errs[0]/errs[1]).log2();
            let o2 = (errs[1]/errs[2]).log2();
            // least-squares slope over the three points
            let xs: Vec<f64> = [4096f64, 8192.0, 16384.0].iter().map(|n| n.ln()).collect();
            let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
            let xm = xs.iter().sum::<f64>()/3.0; let ym = ys.iter().sum::<f64>()/3.0;
            let slope: f64 = xs.iter().zip(&ys).map(|(x,y)| (x-xm)*(y-ym)).sum::<f64>()
                / xs.iter().map(|x| (x-xm)*(x-xm)).sum::<f64>();
            println!("eps={eps} half={half} order {order}: errs={errs:?} pair orders=({o1:.2},{o2:.2}) LS={:.2}", -slope);
        }
    }
}
