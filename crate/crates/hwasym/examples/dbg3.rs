use num_complex::Complex64;
use std::time::Instant;
fn main() {
    let beta = 4.0f64;
    for th in [-0.3f64, -1.5, -2.5, -3.5, -3.9] {
        let t0 = Instant::now();
        let mut r = None;
        for _ in 0..20 {
            r = Some(hwasym::specfun::pcf::pcf_pair(Complex64::new(th, 0.0), Complex64::new(-beta, 0.0)).unwrap());
        }
        println!("theta={th}: {:?} per eval, rel_err {:.2e}", t0.elapsed() / 20, r.unwrap().rel_err);
    }
    // also the two halves separately at a slow point
    let th = Complex64::new(-2.5, 0.0);
    let t0 = Instant::now();
    for _ in 0..20 { let _ = hwasym::specfun::pcf::pcf_pair_direct(th, Complex64::new(4.0, 0.0), 1e-12).unwrap(); }
    println!("A-part: {:?}", t0.elapsed() / 20);
    let t0 = Instant::now();
    for _ in 0..20 { let _ = hwasym::specfun::pcf::pcf_pair_direct(Complex64::new(3.5, 0.0), Complex64::new(0.0, 4.0), 1e-12).unwrap(); }
    println!("B-part: {:?}", t0.elapsed() / 20);
}
