use hwasym::asym_neg::*;
fn main() {
    for x0 in [1.0f64, 2.0, 5.0] {
        let c = NegCurves::new(x0).unwrap();
        let mut best = (0.0, 0.0, 0.0);
        for k in 1..400 {
            let x = c.x_cusp + (0.0 - c.x_cusp) * k as f64 / 400.0;
            let ts = c.t_star(x).unwrap();
            if let Ok(ca) = c.caustics(x) {
                let lo = ts.max(ca.t_d);
                if ca.t_c <= lo { continue; }
                // candidate grid in the band; score = min distance to ts and edges
                for j in 1..20 {
                    let t = lo + (ca.t_c - lo) * j as f64 / 20.0;
                    let score = (t - ts).abs().min(t - ca.t_d).min(ca.t_c - t).min(t - ts.max(ca.t_d));
                    if score > best.2 {
                        best = (x, t, score);
                    }
                }
            }
        }
        println!("X0={x0}: best X={:.5} t={:.5} margin={:.4} -> beta needed {:.0}",
            best.0, best.1, best.2, (3.0f64 / best.2).powf(1.5));
    }
}
