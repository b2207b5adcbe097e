//! Label transformations: the prefix-free code behind the fast schedule and
//! the constant-weight relabeling.

use rendezvous::labels::{fast_schedule_bits, minimal_t, modified_label, relabel, Label};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("label  code M(l)      schedule blocks");
    for l in 1..=8 {
        let label = Label::new(l)?;
        println!("{l:>5}  {:<12}  {}", modified_label(label).to_string(), fast_schedule_bits(label));
    }

    let space = 8;
    for weight in [1, 2, 3] {
        let t = minimal_t(space, weight)?;
        println!("\nL = {space}, weight {weight}: codes of length t = {t}");
        for l in 1..=space {
            let code = relabel(Label::new(l)?, space, weight)?;
            println!("  {l} -> {code}");
        }
    }
    Ok(())
}
