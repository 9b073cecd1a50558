use hwasym::asym_neg::*;
use hwasym::ModelParams;
fn main() {
    // gaussian layer case
    let p = ModelParams::from_scaled(10.0, 1.0).unwrap();
    let t = 2.0f64;
    let delta = 0.5f64;
    let x = -1.0 + (p.x0_scaled - t).exp() + p.eps.sqrt() * delta;
    println!("x = {x}");
    let d = density_asym_neg(x, t, &p).unwrap();
    println!("regime {:?} ln {} branches {:?}", d.regime, d.ln_value,
        d.branches.iter().map(|b| (b.label, b.ln_value)).collect::<Vec<_>>());
    let lg = ln_gaussian_layer(delta, t, &p);
    println!("gauss ln = {lg}");
    let phis = solve_phis(x, t, 1.0).unwrap().unwrap();
    println!("phi_s = {phis}, F = {}, G = {}", exponent_f(x, phis, 1.0), prefactor_g(x, phis, 1.0).unwrap());

    // interface case
    let p = ModelParams::from_scaled(10.0, 1.0).unwrap();
    let t = 1.2;
    let xn = -1e-7;
    let d = density_asym_neg(xn, t, &p).unwrap();
    println!("interface: regime {:?} ln {}", d.regime, d.ln_value);
    let phis = solve_phis(xn, t, 1.0).unwrap().unwrap();
    let explicit = (1.0 - t * t) / (4.0 * t * t);
    println!("phi_s = {phis} vs explicit {explicit}");
    println!("F = {} vs -(t-1)^2/4t = {}", exponent_f(xn, phis, 1.0), -(t - 1.0f64).powi(2) / (4.0 * t));
    println!("G = {} vs 1/(2 sqrt(pi t)) = {}", prefactor_g(xn, phis, 1.0).unwrap(),
        1.0 / (2.0 * (std::f64::consts::PI * t).sqrt()));
    let pos = hwasym::asym_pos::density_asym_pos(0.0, t, &p).unwrap();
    println!("pos ln = {} regime {:?}", pos.ln_value, pos.regime);
}
