//! Command-line front end: `simulate`, `sweep`, `analyze` and `graph validate`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 bound or fact violation.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::agents::Algorithm;
use crate::analyzer::fact_suite;
use crate::graph::{parse_graph, Graph};
use crate::simulator::write_position_log;
use crate::sweep::{run_sweep, GraphSetup, GraphSource, RunRecord, SweepSpec, TauRange, CSV_HEADER, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rendezvous", version, about = "Deterministic two-agent rendezvous in port-labeled graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one two-agent execution.
    Simulate(SimulateArgs),
    /// Run every configuration of a grid and check the algorithm's bounds.
    Sweep(SweepArgs),
    /// Lower-bound analysis of an algorithm on an oriented ring.
    Analyze(AnalyzeArgs),
    /// Graph file utilities.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Check a graph file and print its size.
    Validate { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Oriented ring with this many nodes.
    #[arg(long, conflicts_with = "graph")]
    pub ring: Option<usize>,
    /// Graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub alg: Option<Algorithm>,
    /// Labels of agents A and B, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<u64>>,
    /// Start nodes of A and B; default `0` and `n/2`.
    #[arg(long, value_delimiter = ',')]
    pub starts: Option<Vec<usize>>,
    /// Wake-up round of B.
    #[arg(long)]
    pub tau: Option<u64>,
    /// Label space size L; default the larger label.
    #[arg(long = "L", alias = "space")]
    pub space: Option<u64>,
    /// B does not exist before it wakes up.
    #[arg(long)]
    pub parachute: bool,
    /// Write the per-round position log to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Print a CSV header and row instead of the summary line.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFile {
    ring: Option<usize>,
    graph: Option<PathBuf>,
    alg: Option<Algorithm>,
    labels: Option<[u64; 2]>,
    starts: Option<[usize; 2]>,
    tau: Option<u64>,
    #[serde(alias = "L")]
    space: Option<u64>,
    parachute: Option<bool>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML sweep spec; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alg: Option<Algorithm>,
    /// Graph sources, e.g. `ring:3..8,star:8,corpus,file:g.txt`.
    #[arg(long, value_delimiter = ',')]
    pub graphs: Option<Vec<GraphSource>>,
    /// Label space size L.
    #[arg(long = "L", alias = "labels")]
    pub labels: Option<u64>,
    /// Delays of B: `auto`, `N` or `A..B`.
    #[arg(long)]
    pub tau: Option<TauRange>,
    #[arg(long)]
    pub parachute: bool,
    /// Refuse sweeps with more runs than this.
    #[arg(long)]
    pub cap: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub alg: Algorithm,
    /// Ring size; must be divisible by 6.
    #[arg(long)]
    pub ring: usize,
    /// Label space size L.
    #[arg(long = "L")]
    pub space: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out`. Returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Simulate(args) => simulate(args, out),
        Command::Sweep(args) => sweep(args, out, err),
        Command::Analyze(args) => analyze(args, out),
        Command::Graph(GraphCommand::Validate { file }) => {
            let g = load_graph(&file)?;
            writeln!(out, "valid: {} nodes, {} edges", g.node_count(), g.edge_count()).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    usage(format!("i/o error: {e}"))
}

fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let file: SimulateFile = match &args.config {
        Some(p) => read_toml(p)?,
        None => SimulateFile::default(),
    };
    let (name, graph) = match (args.ring, &args.graph, file.ring, &file.graph) {
        (Some(n), _, _, _) => (format!("ring:{n}"), Graph::oriented_ring(n).map_err(usage)?),
        (None, Some(p), _, _) => (p.display().to_string(), load_graph(p)?),
        (None, None, Some(n), _) => (format!("ring:{n}"), Graph::oriented_ring(n).map_err(usage)?),
        (None, None, None, Some(p)) => (p.display().to_string(), load_graph(p)?),
        _ => return Err(usage("one of --ring or --graph is required")),
    };
    let alg = args.alg.or(file.alg).ok_or_else(|| usage("--alg is required"))?;
    let labels = match (args.labels, file.labels) {
        (Some(v), _) => pair(&v, "--labels")?,
        (None, Some([a, b])) => (a, b),
        _ => return Err(usage("--labels is required, e.g. --labels 1,2")),
    };
    let n = graph.node_count();
    let starts = match (args.starts, file.starts) {
        (Some(v), _) => pair(&v, "--starts")?,
        (None, Some([a, b])) => (a, b),
        _ => (0, n / 2),
    };
    let tau = args.tau.or(file.tau).unwrap_or(1);
    let space = args.space.or(file.space).unwrap_or(labels.0.max(labels.1)).max(2);
    let parachute = args.parachute || file.parachute.unwrap_or(false);
    if labels.0 == 0 || labels.1 == 0 || labels.0.max(labels.1) > space {
        return Err(usage(format!("labels must lie in 1..={space}")));
    }

    let setup = GraphSetup::new(name, graph, &alg, space).map_err(usage)?;
    let trace = setup.execute(labels, starts, tau, parachute).map_err(usage)?;
    if let Some(path) = &args.log {
        let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        write_position_log(&trace, BufWriter::new(f)).map_err(io_failure)?;
    }
    if args.csv {
        let record = RunRecord {
            algorithm: alg.to_string(),
            n,
            e: setup.e,
            label_a: labels.0,
            label_b: labels.1,
            start_a: starts.0,
            start_b: starts.1,
            tau,
            met: trace.met,
            time: trace.time,
            cost: trace.cost,
        };
        write!(out, "{CSV_HEADER}\n{}", record.csv_row()).map_err(io_failure)?;
    } else {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "met={} time={} cost={} meeting_round={} rounds={} E={}",
            trace.met,
            opt(trace.time),
            trace.cost,
            opt(trace.meeting_round),
            trace.rounds,
            setup.e
        )
        .map_err(io_failure)?;
    }
    Ok(if trace.met { EXIT_OK } else { EXIT_VIOLATION })
}

fn sweep(args: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut spec = match &args.config {
        Some(p) => read_toml::<SweepSpec>(p)?,
        None => {
            let alg = args.alg.clone().ok_or_else(|| usage("--alg is required"))?;
            let graphs = args.graphs.clone().ok_or_else(|| usage("--graphs is required"))?;
            let labels = args.labels.ok_or_else(|| usage("--L is required"))?;
            SweepSpec::new(alg, graphs, labels)
        }
    };
    if let Some(a) = args.alg {
        spec.algorithm = a;
    }
    if let Some(g) = args.graphs {
        spec.graphs = g;
    }
    if let Some(l) = args.labels {
        spec.labels = l;
    }
    if let Some(t) = args.tau {
        spec.tau = t;
    }
    spec.parachute |= args.parachute;
    spec.cap = args.cap.unwrap_or(if args.config.is_some() { spec.cap } else { DEFAULT_CAP });

    let summary = match &args.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            let s = run_sweep(&spec, Some(&mut w), args.jobs).map_err(usage)?;
            w.flush().map_err(io_failure)?;
            writeln!(out, "{s}").map_err(io_failure)?;
            s
        }
        None => {
            let s = run_sweep(&spec, Some(out), args.jobs).map_err(usage)?;
            writeln!(err, "{s}").map_err(io_failure)?;
            s
        }
    };
    Ok(if summary.ok() { EXIT_OK } else { EXIT_VIOLATION })
}

fn analyze(args: AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let report = fact_suite(&args.alg, args.ring, args.space).map_err(usage)?;
    if args.json {
        writeln!(out, "{}", report.to_json()).map_err(io_failure)?;
    } else {
        write!(out, "{}", report.render_text()).map_err(io_failure)?;
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VIOLATION })
}

fn pair<T: Copy>(values: &[T], flag: &str) -> Result<(T, T), Failure> {
    match values {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("{flag} takes exactly two comma-separated values"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(std::iter::once("rendezvous").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn simulate_ring_example() {
        let (code, out, _) = run(&["simulate", "--ring", "5", "--alg", "cheap-sim", "--labels", "1,2", "--starts", "0,2", "--tau", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("met=true time=2 cost=2 "), "{out}");
    }

    #[test]
    fn simulate_requires_labels() {
        let (code, _, err) = run(&["simulate", "--ring", "5", "--alg", "cheap"]);
        assert_eq!(code, 1);
        assert!(err.contains("--labels"));
    }

    #[test]
    fn bad_flag_is_usage_error() {
        assert_eq!(run(&["simulate", "--bogus"]).0, 1);
        assert_eq!(run(&["simulate", "--ring", "5", "--alg", "slow", "--labels", "1,2"]).0, 1);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn analyze_rejects_ring_10() {
        let (code, _, err) = run(&["analyze", "--alg", "cheap-sim", "--ring", "10", "--L", "4"]);
        assert_eq!(code, 1);
        assert!(err.contains("divisible by 6"), "{err}");
    }
}
