use hwasym::inversion::*;
use hwasym::ModelParams;
fn main() {
    let p = ModelParams::new(2.0, 1.0).unwrap();
    let (x, t) = (0.5, 1.0);
    let spec = ContourSpec::auto(&p, x, t);
    println!("spec: a={} H={} nodes={}", spec.abscissa, spec.half_height, spec.nodes);
    match invert_bm_part(x, t, &p, &spec) {
        Ok(e) => println!("p1 = {} err {:?}, expect {}", e.value, e.error,
            hwasym::exact::p_bm(p.to_scaled(x), t, &p).unwrap()),
        Err(e) => println!("ERR {e}"),
    }
    match invert_bromwich(x, 3.0, &p, &ContourSpec::auto(&p, x, 3.0)) {
        Ok(e) => println!("p(0.5,3) = {} err {:?}", e.value, e.error),
        Err(e) => println!("ERR {e}"),
    }
}
