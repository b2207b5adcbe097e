//! The doubling wrapper: the same agent program, unaware of the ring size,
//! meets on rings of every size.

use rendezvous::agents::ExploreFamily;
use rendezvous::sweep::GraphSetup;
use rendezvous::{Algorithm, Graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let family = ExploreFamily::oriented_rings(4)?;
    let budgets: Vec<usize> = family.plans().iter().map(|p| p.budget()).collect();
    println!("ring exploration levels and their budgets: {budgets:?}");

    let alg: Algorithm = "doubling:cheap".parse()?;
    println!("\n{:>3} {:>3} {:>7} {:>6} {:>6}", "n", "E", "levels", "time", "cost");
    for n in 3..=12 {
        let setup = GraphSetup::new(format!("ring:{n}"), Graph::oriented_ring(n)?, &alg, 4)?;
        let trace = setup.execute((3, 4), (0, n / 2), 2, false)?;
        println!(
            "{n:>3} {:>3} {:>7} {:>6} {:>6}",
            setup.e,
            ExploreFamily::levels_for(n),
            trace.time.map_or("-".into(), |t| t.to_string()),
            trace.cost
        );
    }
    Ok(())
}
