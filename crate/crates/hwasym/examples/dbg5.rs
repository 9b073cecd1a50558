fn main() {
    let x0 = 1.0f64;
    let x = -0.5f64;
    let t_fluid = x0 - (1.0 + x).ln();
    let t = t_fluid - 0.3;
    println!("t = {t}");
    // manual S eval
    let s_eq = |phi: f64| {
        let opx = 1.0 + x;
        let s1 = (1.0f64 + 4.0 * phi).sqrt();
        let sx: f64 = (opx * opx + 4.0 * phi).sqrt();
        t - x0 / s1 + ((sx + opx) / (s1 + 1.0)).ln()
    };
    for phi in [-0.0624999, -0.01, 0.0, 0.5, 1.25, 10.0] {
        println!("S({phi}) = {}", s_eq(phi));
    }
    match hwasym::asym_neg::solve_phis(x, t, x0) {
        Ok(v) => println!("phis = {v:?}"),
        Err(e) => println!("ERR {e}"),
    }
}
