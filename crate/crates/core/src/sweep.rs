//! Exhaustive parameter sweeps: every ordered label pair, every pair of
//! distinct start nodes and every wake-up delay on a list of graphs.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{AgentError, AgentSchedule, Algorithm, ExploreFamily, Procedure};
use crate::bounds::Bounds;
use crate::exploration::{unanchored_dfs_plan, PlanError};
use crate::graph::{corpus_graph, Graph, GraphError, NodeId};
use crate::labels::{Label, LabelError};
use crate::simulator::{self, ExecutionTrace, RunConfig, SimError};

pub const CSV_HEADER: &str = "algorithm,n,E,labelA,labelB,startA,startB,tau,met,time,cost";

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("cannot read graph file {path}: {source}")]
    GraphFile { path: PathBuf, source: io::Error },
    #[error("invalid graph source `{0}`; expected ring:N, ring:A..B, star:..., path:..., corpus or file:PATH")]
    BadSource(String),
    #[error("invalid delay range `{0}`; expected auto, N or A..B with 1 <= A <= B")]
    BadTau(String),
    #[error("sweep needs at least 2 labels and one graph")]
    Empty,
    #[error("sweep would run {runs} configurations, above the cap of {cap}")]
    CapExceeded { runs: u64, cap: u64 },
}

/// A graph or a family of graphs to sweep over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSource {
    Ring { min: usize, max: usize },
    Star { min: usize, max: usize },
    Path { min: usize, max: usize },
    Corpus,
    File(PathBuf),
}

impl GraphSource {
    /// Named graphs this source stands for.
    pub fn instantiate(&self) -> Result<Vec<(String, Graph)>, SweepError> {
        let family = |name: &str, min: usize, max: usize, make: fn(usize) -> Result<Graph, GraphError>| {
            (min..=max)
                .map(|n| Ok((format!("{name}:{n}"), make(n)?)))
                .collect::<Result<Vec<_>, SweepError>>()
        };
        match self {
            GraphSource::Ring { min, max } => family("ring", *min, *max, Graph::oriented_ring),
            GraphSource::Star { min, max } => family("star", *min, *max, Graph::star),
            GraphSource::Path { min, max } => family("path", *min, *max, Graph::path),
            GraphSource::Corpus => Ok(vec![("corpus".to_string(), corpus_graph())]),
            GraphSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|source| SweepError::GraphFile {
                    path: path.clone(),
                    source,
                })?;
                Ok(vec![(format!("file:{}", path.display()), text.parse()?)])
            }
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let range = |f: &mut fmt::Formatter<'_>, name, min, max| {
            if min == max {
                write!(f, "{name}:{min}")
            } else {
                write!(f, "{name}:{min}..{max}")
            }
        };
        match self {
            GraphSource::Ring { min, max } => range(f, "ring", *min, *max),
            GraphSource::Star { min, max } => range(f, "star", *min, *max),
            GraphSource::Path { min, max } => range(f, "path", *min, *max),
            GraphSource::Corpus => write!(f, "corpus"),
            GraphSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn parse_range(s: &str) -> Option<(u64, u64)> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().ok()?, b.trim().trim_start_matches('=').parse().ok()?);
            (a <= b).then_some((a, b))
        }
        None => s.trim().parse().ok().map(|v| (v, v)),
    }
}

impl FromStr for GraphSource {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::BadSource(s.to_string());
        let s = s.trim();
        if s == "corpus" {
            return Ok(GraphSource::Corpus);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "file" {
            return Ok(GraphSource::File(PathBuf::from(rest)));
        }
        let (min, max) = parse_range(rest).ok_or_else(bad)?;
        let (min, max) = (min as usize, max as usize);
        match kind {
            "ring" => Ok(GraphSource::Ring { min, max }),
            "star" => Ok(GraphSource::Star { min, max }),
            "path" => Ok(GraphSource::Path { min, max }),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for GraphSource {
    type Error = SweepError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GraphSource> for String {
    fn from(g: GraphSource) -> String {
        g.to_string()
    }
}

/// Wake-up delays of agent B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TauRange {
    /// `1..=E+2` per graph, or just `1` for simultaneous-start algorithms.
    #[default]
    Auto,
    Range(u64, u64),
}

impl TauRange {
    pub fn values(&self, algorithm: &Algorithm, e: u64) -> std::ops::RangeInclusive<u64> {
        match *self {
            TauRange::Auto if algorithm.simultaneous_only() => 1..=1,
            TauRange::Auto => 1..=e + 2,
            TauRange::Range(a, b) => a..=b,
        }
    }
}

impl fmt::Display for TauRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauRange::Auto => write!(f, "auto"),
            TauRange::Range(a, b) if a == b => write!(f, "{a}"),
            TauRange::Range(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

impl FromStr for TauRange {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "auto" {
            return Ok(TauRange::Auto);
        }
        match parse_range(s) {
            Some((a, b)) if a >= 1 => Ok(TauRange::Range(a, b)),
            _ => Err(SweepError::BadTau(s.to_string())),
        }
    }
}

impl TryFrom<String> for TauRange {
    type Error = SweepError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TauRange> for String {
    fn from(t: TauRange) -> String {
        t.to_string()
    }
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

/// What to sweep. Loadable from TOML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub algorithm: Algorithm,
    pub graphs: Vec<GraphSource>,
    /// Label space `{1, ..., labels}`; every ordered pair of distinct labels is run.
    pub labels: u64,
    #[serde(default)]
    pub tau: TauRange,
    #[serde(default)]
    pub parachute: bool,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

impl SweepSpec {
    pub fn new(algorithm: Algorithm, graphs: Vec<GraphSource>, labels: u64) -> Self {
        SweepSpec {
            algorithm,
            graphs,
            labels,
            tau: TauRange::Auto,
            parachute: false,
            cap: DEFAULT_CAP,
        }
    }
}

/// Schedules of every label on one graph. Oriented rings use the clockwise
/// sweep, `E = n - 1`; other graphs use the unanchored depth-first plan,
/// `E = 2n(2n - 2)`, since agents do not know where they start. The doubling
/// wrapper gets the matching exploration family instead, and its `E` is the
/// one of the single plan.
#[derive(Debug, Clone)]
pub struct GraphSetup {
    pub name: String,
    pub graph: Graph,
    /// Exploration time the bounds are measured against.
    pub e: u64,
    /// `schedules[label - 1]`.
    schedules: Vec<AgentSchedule>,
    longest: u64,
}

impl GraphSetup {
    pub fn new(name: String, graph: Graph, algorithm: &Algorithm, space: u64) -> Result<Self, SweepError> {
        let n = graph.node_count();
        let (e, procedure) = if graph.is_oriented_ring() {
            (n as u64 - 1, Procedure::for_ring(algorithm, n)?)
        } else {
            let plan = Arc::new(unanchored_dfs_plan(&graph)?);
            let e = plan.budget() as u64;
            if algorithm.is_doubling() {
                (e, Procedure::Family(Arc::new(ExploreFamily::for_graph(&graph)?)))
            } else {
                (e, Procedure::Plan(plan))
            }
        };
        let schedules = (1..=space)
            .map(|l| algorithm.compile_with(Label::new(l).expect("labels start at 1"), space, &procedure))
            .collect::<Result<Vec<_>, _>>()?;
        let longest = schedules.iter().map(AgentSchedule::active_rounds).max().unwrap_or(0);
        Ok(GraphSetup {
            name,
            graph,
            e,
            schedules,
            longest,
        })
    }

    pub fn schedule(&self, label: u64) -> &AgentSchedule {
        &self.schedules[label as usize - 1]
    }

    /// Rounds after which neither agent can move any more, given B's delay.
    pub fn horizon(&self, tau: u64) -> u64 {
        tau + self.longest
    }

    /// One run with positions recorded.
    pub fn execute(
        &self,
        labels: (u64, u64),
        starts: (NodeId, NodeId),
        tau: u64,
        parachute: bool,
    ) -> Result<ExecutionTrace, SweepError> {
        let config = RunConfig::new(
            &self.graph,
            (self.schedule(labels.0), starts.0),
            (self.schedule(labels.1), starts.1),
            tau,
        )
        .parachute(parachute);
        Ok(simulator::run(&config, self.horizon(tau))?)
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub n: usize,
    pub e: u64,
    pub label_a: u64,
    pub label_b: u64,
    pub start_a: NodeId,
    pub start_b: NodeId,
    pub tau: u64,
    pub met: bool,
    pub time: Option<u64>,
    pub cost: u64,
}

impl RunRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            self.algorithm,
            self.n,
            self.e,
            self.label_a,
            self.label_b,
            self.start_a,
            self.start_b,
            self.tau,
            self.met,
            self.time.map(|t| t.to_string()).unwrap_or_default(),
            self.cost
        )
    }
}

/// Maxima of a sweep and how they compare with the algorithm's guarantees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub algorithm: String,
    pub label_space: u64,
    pub parachute: bool,
    pub runs: u64,
    pub unmet: u64,
    pub max_time: u64,
    pub max_cost: u64,
    /// Largest `time / E` and `cost / E` over all runs.
    pub max_time_ratio: f64,
    pub max_cost_ratio: f64,
    pub bounds: Option<Bounds>,
    pub violations: u64,
    /// Runs whose cost equals the cost bound exactly.
    pub cost_bound_hits: u64,
    pub first_violation: Option<String>,
}

impl SweepSummary {
    fn new(spec: &SweepSpec, bounds: Option<Bounds>) -> Self {
        SweepSummary {
            algorithm: spec.algorithm.to_string(),
            label_space: spec.labels,
            parachute: spec.parachute,
            runs: 0,
            unmet: 0,
            max_time: 0,
            max_cost: 0,
            max_time_ratio: 0.0,
            max_cost_ratio: 0.0,
            bounds,
            violations: 0,
            cost_bound_hits: 0,
            first_violation: None,
        }
    }

    fn add(&mut self, r: &RunRecord) {
        self.runs += 1;
        let problem = match r.time {
            None => {
                self.unmet += 1;
                Some("no rendezvous".to_string())
            }
            Some(time) => {
                self.max_time = self.max_time.max(time);
                self.max_cost = self.max_cost.max(r.cost);
                self.max_time_ratio = self.max_time_ratio.max(time as f64 / r.e as f64);
                self.max_cost_ratio = self.max_cost_ratio.max(r.cost as f64 / r.e as f64);
                self.bounds.and_then(|b| {
                    if b.cost_limit(r.e) == Some(r.cost) {
                        self.cost_bound_hits += 1;
                    }
                    b.check_run(r.label_a, r.label_b, r.e, time, r.cost).err()
                })
            }
        };
        if let Some(why) = problem {
            if r.met {
                self.violations += 1;
            }
            if self.first_violation.is_none() {
                self.first_violation = Some(format!(
                    "n={} labels=({},{}) starts=({},{}) tau={}: {why}",
                    r.n, r.label_a, r.label_b, r.start_a, r.start_b, r.tau
                ));
            }
        }
    }

    /// Every run met and stayed within the bounds.
    pub fn ok(&self) -> bool {
        self.unmet == 0 && self.violations == 0
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bounds {
            Some(b) => writeln!(f, "# bound for {} with L={}: {b}", self.algorithm, self.label_space)?,
            None => writeln!(f, "# no stated bound for {}", self.algorithm)?,
        }
        writeln!(
            f,
            "runs={} unmet={} max_time={} ({:.3}E) max_cost={} ({:.3}E) violations={}",
            self.runs, self.unmet, self.max_time, self.max_time_ratio, self.max_cost, self.max_cost_ratio, self.violations
        )?;
        if let Some(v) = &self.first_violation {
            writeln!(f, "first violation: {v}")?;
        }
        write!(f, "{}", if self.ok() { "OK" } else { "VIOLATION" })
    }
}

/// Builds every graph of the sweep with its schedules.
pub fn prepare(spec: &SweepSpec) -> Result<Vec<GraphSetup>, SweepError> {
    if spec.labels < 2 || spec.graphs.is_empty() {
        return Err(SweepError::Empty);
    }
    let mut setups = Vec::new();
    for source in &spec.graphs {
        for (name, graph) in source.instantiate()? {
            setups.push(GraphSetup::new(name, graph, &spec.algorithm, spec.labels)?);
        }
    }
    Ok(setups)
}

/// Number of runs the sweep expands to.
pub fn count_runs(spec: &SweepSpec, setups: &[GraphSetup]) -> u64 {
    let pairs = spec.labels * (spec.labels - 1);
    setups
        .iter()
        .map(|s| {
            let n = s.graph.node_count() as u64;
            let taus = spec.tau.values(&spec.algorithm, s.e).count() as u64;
            pairs * n * (n - 1) * taus
        })
        .sum()
}

/// Runs the sweep, streaming rows to `out` (header first) in a fixed order:
/// graph, label A, label B, start A, start B, delay. Rows are written one
/// label pair at a time and flushed, so an interrupted sweep leaves a valid
/// prefix. `jobs` bounds the worker threads.
pub fn run_sweep(spec: &SweepSpec, mut out: Option<&mut dyn Write>, jobs: Option<usize>) -> Result<SweepSummary, SweepError> {
    let setups = prepare(spec)?;
    let runs = count_runs(spec, &setups);
    if runs > spec.cap {
        return Err(SweepError::CapExceeded { runs, cap: spec.cap });
    }
    let bounds = Bounds::for_algorithm(&spec.algorithm, spec.labels)?;
    let mut summary = SweepSummary::new(spec, bounds);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    if let Some(w) = out.as_mut() {
        writeln!(w, "{CSV_HEADER}")?;
    }
    let algorithm = spec.algorithm.to_string();
    for setup in &setups {
        let n = setup.graph.node_count();
        let taus: Vec<u64> = spec.tau.values(&spec.algorithm, setup.e).collect();
        let cells: Vec<(NodeId, NodeId, u64)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .flat_map(|(a, b)| taus.iter().map(move |&t| (a, b, t)))
            .collect();
        for la in 1..=spec.labels {
            for lb in (1..=spec.labels).filter(|&lb| lb != la) {
                let rows = pool.install(|| {
                    cells
                        .par_iter()
                        .map(|&(sa, sb, tau)| {
                            let config = RunConfig::new(
                                &setup.graph,
                                (setup.schedule(la), sa),
                                (setup.schedule(lb), sb),
                                tau,
                            )
                            .parachute(spec.parachute);
                            let trace = simulator::run_outcome(&config, setup.horizon(tau))?;
                            Ok(RunRecord {
                                algorithm: algorithm.clone(),
                                n,
                                e: setup.e,
                                label_a: la,
                                label_b: lb,
                                start_a: sa,
                                start_b: sb,
                                tau,
                                met: trace.met,
                                time: trace.time,
                                cost: trace.cost,
                            })
                        })
                        .collect::<Result<Vec<_>, SweepError>>()
                })?;
                for r in &rows {
                    summary.add(r);
                }
                if let Some(w) = out.as_mut() {
                    for r in &rows {
                        w.write_all(r.csv_row().as_bytes())?;
                    }
                    w.flush()?;
                }
            }
        }
    }
    Ok(summary)
}
