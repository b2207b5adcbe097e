//! Cost against time as the relabeling weight grows, on an 8-node ring.

use rendezvous::labels::minimal_t;
use rendezvous::sweep::{run_sweep, GraphSource, SweepSpec};
use rendezvous::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = vec![GraphSource::Ring { min: 8, max: 8 }];
    println!("{:>3} {:>3} {:>3} {:>9} {:>9} {:>10}", "L", "w", "t", "time/E", "cost/E", "violations");
    for space in [8, 32] {
        for weight in 1..=4 {
            let t = minimal_t(space, weight)?;
            let spec = SweepSpec::new(Algorithm::FastWithRelabeling { weight }, ring.clone(), space);
            let s = run_sweep(&spec, None, None)?;
            println!(
                "{space:>3} {weight:>3} {t:>3} {:>9.2} {:>9.2} {:>10}",
                s.max_time_ratio, s.max_cost_ratio, s.violations
            );
        }
    }
    let fast = run_sweep(&SweepSpec::new(Algorithm::Fast, ring, 32), None, None)?;
    println!("fast, L=32: time {:.2}E, cost {:.2}E", fast.max_time_ratio, fast.max_cost_ratio);
    Ok(())
}
