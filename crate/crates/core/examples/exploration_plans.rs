//! Exploration procedures: the clockwise ring sweep, depth-first search from
//! a known start, and the unanchored variant that works from any start.

use rendezvous::exploration::{dfs_plan, ring_plan, unanchored_dfs_plan, walk_plan};
use rendezvous::Graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Graph::oriented_ring(6)?;
    let plan = ring_plan(6)?;
    println!("ring_plan(6), E = {}:\n{plan}", plan.budget());
    for start in [0, 3] {
        let walk = walk_plan(&ring, &plan, start)?;
        println!("  from {start}: {:?}", walk.positions);
    }

    let star = Graph::star(5)?;
    let plan = dfs_plan(&star, 0)?;
    println!("\ndfs_plan(star 5, center), E = {}:\n{plan}", plan.budget());
    let walk = walk_plan(&star, &plan, 0)?;
    println!("  visits all nodes by round {:?}", walk.coverage_round(5));

    let path = Graph::path(3)?;
    let plan = unanchored_dfs_plan(&path)?;
    println!("\nunanchored plan on a 3-node path: E = {} (2n(2n-2))", plan.budget());
    for start in path.nodes() {
        let walk = walk_plan(&path, &plan, start)?;
        println!(
            "  from {start}: all nodes seen by round {:?}, ends at {:?}",
            walk.coverage_round(3),
            walk.positions.last()
        );
    }
    Ok(())
}
