use semistar_core::domain::Domain;
use semistar_core::probes::ProbeSet;
use semistar_core::star::StarOp;
use std::time::Instant;

#[test]
fn timing() {
    let zy = Domain::IntPoly;
    let d = StarOp::identity(&zy);
    let t0 = Instant::now();
    let probes = ProbeSet::generate(&zy, 42, 6).unwrap();
    println!("gen 6 probes: {:?}", t0.elapsed());
    for (i, e) in probes.probes.iter().enumerate() {
        let t1 = Instant::now();
        let _ = d.evaluate(e).unwrap();
        println!("probe {i} = {e}: evaluate {:?}", t1.elapsed());
    }
    for (i, e) in probes.probes.iter().enumerate() {
        for (j, f) in probes.probes.iter().enumerate().skip(i + 1) {
            let t1 = Instant::now();
            let r = e.intersect(f);
            println!(
                "intersect {i}x{j}: {:?} ok={}",
                t1.elapsed(),
                r.is_ok()
            );
        }
    }
}
