fn main() {
    hwasym::init_threads();
    println!("hwasym");
}
