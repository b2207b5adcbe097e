//! The lower-bound toolkit on a 12-node oriented ring: behaviour vectors,
//! trimming, eager agents, the eager tournament and progress vectors.

use rendezvous::analyzer::{
    aggregate_vector, define_progress, eager_check, fact_suite, forward_back, tournament_order, trim, RingAlgorithm,
    RingGeometry,
};
use rendezvous::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, space) = (12, 4);
    let ring = RingAlgorithm::new(&Algorithm::CheapSim, n, space)?;
    let trimmed = trim(&ring)?;
    let geometry = RingGeometry::new(n)?;

    for l in ring.labels() {
        let v = trimmed.vector(l);
        let (forward, back) = forward_back(v.entries(), n);
        let agg = aggregate_vector(v, trimmed.m(l), &geometry, 0)?;
        let progress = define_progress(&agg)?;
        println!(
            "label {l}: m = {:>3}, forward {forward:>2}, back {back}, solo cost {:>3}, Agg {agg:?}, Prog {:?}",
            trimmed.m(l),
            v.solo_cost(),
            progress.prog
        );
    }

    let e = eager_check(&ring, 1, 2)?;
    println!("\nlabels 1 and 2 from antipodes: displacements {} and {}, eager {:?}", e.disp_x, e.disp_y, e.eager);

    let t = tournament_order(&ring, &[1, 2, 3, 4])?;
    println!("eager tournament edges {:?}", t.edges);
    println!("hamiltonian path {:?}, meeting rounds along it {:?}", t.path, t.chain);

    for alg in ["cheap", "fast", "fwr:w=2"] {
        let report = fact_suite(&alg.parse()?, n, space)?;
        let failed: Vec<&str> = report.facts.iter().filter(|f| !f.passed).map(|f| f.name.as_str()).collect();
        println!("{alg}: {} checks, failed {failed:?}", report.facts.iter().map(|f| f.checked).sum::<u64>());
    }
    Ok(())
}
