//! Worst measured time and cost of the cost-optimal and the time-optimal
//! algorithm over every label pair, start pair and delay.

use rendezvous::sweep::{run_sweep, GraphSource, SweepSpec};
use rendezvous::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphs: Vec<GraphSource> = vec!["ring:8".parse()?, "corpus".parse()?];
    println!("{:<10} {:>4} {:>9} {:>9}  bound", "algorithm", "L", "time/E", "cost/E");
    for alg in [Algorithm::Cheap, Algorithm::Fast] {
        for space in [4, 8, 16] {
            let spec = SweepSpec::new(alg.clone(), graphs.clone(), space);
            let s = run_sweep(&spec, None, None)?;
            assert_eq!(s.unmet, 0);
            let bound = s.bounds.map(|b| b.to_string()).unwrap_or_default();
            println!(
                "{:<10} {space:>4} {:>9.2} {:>9.2}  {bound}",
                alg.to_string(),
                s.max_time_ratio,
                s.max_cost_ratio
            );
        }
    }
    Ok(())
}
