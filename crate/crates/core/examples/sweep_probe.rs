fn main() {
    let start = std::time::Instant::now();
    let summary = ggm_group::sweep::sweep(6, 0).unwrap();
    println!("elapsed: {:?}", start.elapsed());
    for p in &summary.properties {
        println!("{}: checked {} failures {} {:?}", p.name, p.graphs_checked, p.failures, p.first_failure);
    }
    println!("passed: {}", summary.passed);
}
