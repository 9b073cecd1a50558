use num_complex::Complex64;
fn main() {
    let eps = 0.01f64;
    let phi = -0.07 + 0.37 * eps;
    let theta = Complex64::new(phi / eps, 0.0);
    for z in [-0.7f64/eps.sqrt(), -1.0/eps.sqrt()] {
        match hwasym::specfun::pcf::pcf_pair_symmetry(theta, -z) {
            Ok(p) => println!("z={z}: ln|D| = {} sign {}", p.d.ln_abs(), p.d.m.re),
            Err(e) => println!("z={z}: ERR {e}"),
        }
    }
    // also inner parts
    let b = 7.0f64;
    let bb = hwasym::specfun::pcf::pcf_pair_direct(Complex64::new(1.0,0.0)-theta, Complex64::new(0.0,b), 1e-12);
    match bb { Ok(p)=>println!("B-part ok ln={} err={}", p.d.ln_abs(), p.rel_err), Err(e)=>println!("B-part ERR {e}") }
}
