use num_complex::Complex64;
use std::time::Instant;
fn main() {
    // beta* sign check: D'_{b^2/4}(-b) at b=1 and b=3
    for b in [1.0f64, 1.5, 1.857, 2.0, 3.0] {
        let th = Complex64::new(-b * b / 4.0, 0.0);
        let p = hwasym::specfun::pcf::pcf_pair(th, Complex64::new(-b, 0.0)).unwrap();
        println!("b={b}: D = {:+.6e}  D' = {:+.6e} (regime {:?})",
            p.d.re_lnval().to_f64(), p.dz.re_lnval().to_f64(), p.regime);
    }
    // timing of one G eval at beta = 4 and 8
    for beta in [4.0f64, 8.0] {
        let params = hwasym::ModelParams::new(beta, 1.0).unwrap();
        let t0 = Instant::now();
        let mut acc = 0.0;
        let n = 200;
        for k in 0..n {
            let th = -beta * beta / 4.0 + 1e-3 + (beta * beta / 4.0 - 2e-3) * k as f64 / n as f64;
            acc += hwasym::spectrum::g_fn(th, &params).unwrap().to_sign_f64();
        }
        println!("beta={beta}: {n} G evals in {:?} (acc {acc:.3})", t0.elapsed());
    }
}
