//! A sweep described in TOML, streamed to a CSV file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};

use rendezvous::sweep::{count_runs, prepare, run_sweep, SweepSpec};

const SPEC: &str = r#"
algorithm = "cheap"
graphs = ["ring:3..6", "star:4", "corpus"]
labels = 4
tau = "auto"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec: SweepSpec = toml::from_str(SPEC)?;
    let setups = prepare(&spec)?;
    for s in &setups {
        println!("{:<8} E = {}", s.name, s.e);
    }
    println!("{} runs", count_runs(&spec, &setups));

    let path = std::env::temp_dir().join("rendezvous-sweep.csv");
    let mut out = BufWriter::new(File::create(&path)?);
    let summary = run_sweep(&spec, Some(&mut out), None)?;
    out.flush()?;
    println!("{summary}");

    let rows = BufReader::new(File::open(&path)?).lines().count() - 1;
    println!("{rows} rows in {}", path.display());
    Ok(())
}
