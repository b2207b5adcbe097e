//! Lower-bound machinery for rendezvous on oriented rings.
//!
//! Nodes are numbered `0..n` ascending clockwise; port 0 leads clockwise and
//! port 1 counterclockwise. On such a ring, with both agents starting
//! together, an algorithm is fully described by the behaviour vector of each
//! label: entry `i` is `+1`, `0` or `-1` for a clockwise step, an idle round
//! or a counterclockwise step in round `i` of the solo run.
//!
//! Everything here works either directly on vectors or through the simulator
//! on compiled schedules, so the two can be checked against each other.
//! Blocks, sectors and progress-vector indices are 1-based.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::agents::{AgentError, AgentSchedule, Algorithm, Procedure};
use crate::graph::{Graph, GraphError, NodeId};
use crate::labels::Label;
use crate::simulator::{self, ExecutionTrace, RunConfig, SimError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("the label space needs at least two labels, got {0}")]
    SpaceTooSmall(u64),
    #[error("sector analysis needs a ring size divisible by 6, got {n}; try --ring {lower} or --ring {upper}")]
    Geometry { n: usize, lower: usize, upper: usize },
    #[error("correctness violation: labels {x} and {y} never meet when {y} starts {gap} nodes clockwise of {x}")]
    NeverMeet { x: u64, y: u64, gap: usize },
    #[error("model violation: round {round} exits through port {port}, but ring nodes only have ports 0 and 1")]
    ModelViolation { round: u64, port: usize },
    #[error("aggregate entry {value} at block {index} is outside -1..=1")]
    Domain { index: usize, value: i64 },
    #[error("eager violation between labels {x} and {y}: displacements {disp_x} and {disp_y}")]
    EagerViolation { x: u64, y: u64, disp_x: i64, disp_y: i64 },
}

/// Per-round movement of a solo run on the oriented ring. Rounds past the
/// end of the vector are idle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct BehaviourVector(Vec<i8>);

impl BehaviourVector {
    /// # Panics
    /// If an entry lies outside `-1..=1`.
    pub fn new(entries: Vec<i8>) -> Self {
        assert!(entries.iter().all(|e| (-1..=1).contains(e)), "entries must be -1, 0 or 1");
        BehaviourVector(entries)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry for 1-based `round`; zero past the end.
    pub fn at(&self, round: u64) -> i8 {
        round
            .checked_sub(1)
            .and_then(|i| self.0.get(i as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Edge traversals of the solo run.
    pub fn solo_cost(&self) -> u64 {
        self.0.iter().filter(|&&e| e != 0).count() as u64
    }

    /// Same walk seen on the mirrored ring.
    pub fn mirrored(&self) -> Self {
        BehaviourVector(self.0.iter().map(|e| -e).collect())
    }

    /// Keeps the first `rounds` entries, padding with idle rounds.
    pub fn truncated(&self, rounds: u64) -> Self {
        let mut v = self.0.clone();
        v.resize(rounds as usize, 0);
        BehaviourVector(v)
    }

    /// Net clockwise displacement after `rounds` rounds.
    pub fn displacement(&self, rounds: u64) -> i64 {
        surplus(&self.0[..(rounds as usize).min(self.0.len())])
    }
}

/// Sum of the entries.
pub fn surplus(v: &[i8]) -> i64 {
    v.iter().map(|&e| i64::from(e)).sum()
}

/// Behaviour vector of `schedule` over its first `rounds` rounds.
pub fn behaviour_vector(schedule: &AgentSchedule, n: usize, rounds: u64) -> Result<BehaviourVector, AnalyzerError> {
    let ring = Graph::oriented_ring(n)?;
    let solo = simulator::solo_run(&ring, schedule, 0, rounds).map_err(|e| match e {
        SimError::PortUnavailable { round, port, .. } => AnalyzerError::ModelViolation { round, port },
        other => other.into(),
    })?;
    Ok(BehaviourVector(
        solo.exits
            .iter()
            .map(|exit| match exit {
                None => 0,
                Some(0) => 1,
                Some(_) => -1,
            })
            .collect(),
    ))
}

/// `(forward, back)`: distinct ring edges covered on the clockwise and on the
/// counterclockwise side of the start. An edge belongs to the clockwise side
/// when, unwrapped, it lies at or beyond the start.
pub fn forward_back(v: &[i8], n: usize) -> (usize, usize) {
    let mut sides = [vec![false; n], vec![false; n]];
    let mut pos: i64 = 0;
    for &step in v {
        if step == 0 {
            continue;
        }
        let lower = pos.min(pos + i64::from(step));
        pos += i64::from(step);
        let side = usize::from(lower < 0);
        sides[side][lower.rem_euclid(n as i64) as usize] = true;
    }
    let count = |s: &[bool]| s.iter().filter(|&&b| b).count();
    (count(&sides[0]), count(&sides[1]))
}

/// Whether the walk covers strictly more edges clockwise than counterclockwise.
pub fn clockwise_heavy(v: &[i8], n: usize) -> bool {
    let (forward, back) = forward_back(v, n);
    back < forward
}

/// First round in which two agents replaying `vx` from `px` and `vy` from
/// `py` share a node, with the edge traversals spent up to then.
pub fn replay_meeting(vx: &[i8], px: NodeId, vy: &[i8], py: NodeId, n: usize) -> Option<(u64, u64)> {
    let n = n as i64;
    let (mut a, mut b) = (px as i64, py as i64);
    let mut cost = 0;
    for i in 0..vx.len().max(vy.len()) {
        let (sx, sy) = (vx.get(i).copied().unwrap_or(0), vy.get(i).copied().unwrap_or(0));
        cost += u64::from(sx != 0) + u64::from(sy != 0);
        a = (a + i64::from(sx)).rem_euclid(n);
        b = (b + i64::from(sy)).rem_euclid(n);
        if a == b {
            return Some((i as u64 + 1, cost));
        }
    }
    None
}

/// An algorithm compiled for every label of `1..=space` on one oriented ring.
///
/// The analysis can be run in a mirrored frame, where node `p` is real node
/// `-p mod n`; executions take and return positions in the current frame.
#[derive(Debug, Clone)]
pub struct RingAlgorithm {
    algorithm: Algorithm,
    graph: Graph,
    space: u64,
    schedules: Vec<AgentSchedule>,
    horizon: u64,
    mirrored: bool,
}

impl RingAlgorithm {
    pub fn new(algorithm: &Algorithm, n: usize, space: u64) -> Result<Self, AnalyzerError> {
        if space < 2 {
            return Err(AnalyzerError::SpaceTooSmall(space));
        }
        let graph = Graph::oriented_ring(n)?;
        let procedure = Procedure::for_ring(algorithm, n)?;
        let schedules = (1..=space)
            .map(|l| algorithm.compile_with(Label::new(l).expect("positive"), space, &procedure))
            .collect::<Result<Vec<_>, _>>()?;
        let horizon = schedules.iter().map(AgentSchedule::active_rounds).max().unwrap_or(0) + 1;
        Ok(RingAlgorithm {
            algorithm: algorithm.clone(),
            graph,
            space,
            schedules,
            horizon,
            mirrored: false,
        })
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn n(&self) -> usize {
        self.graph.node_count()
    }

    /// Exploration time of the ring, `n - 1`.
    pub fn e(&self) -> usize {
        self.n() - 1
    }

    pub fn label_space(&self) -> u64 {
        self.space
    }

    pub fn labels(&self) -> std::ops::RangeInclusive<u64> {
        1..=self.space
    }

    pub fn schedule(&self, label: u64) -> &AgentSchedule {
        &self.schedules[label as usize - 1]
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn set_mirrored(&mut self, mirrored: bool) {
        self.mirrored = mirrored;
    }

    /// Rounds after which no agent moves any more.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    fn flip(&self, p: NodeId) -> NodeId {
        if self.mirrored {
            (self.n() - p) % self.n()
        } else {
            p
        }
    }

    /// Behaviour vector of `label` in the current frame.
    pub fn behaviour_vector(&self, label: u64, rounds: u64) -> Result<BehaviourVector, AnalyzerError> {
        let v = behaviour_vector(self.schedule(label), self.n(), rounds)?;
        Ok(if self.mirrored { v.mirrored() } else { v })
    }

    /// Untrimmed vectors, each as long as its schedule.
    pub fn behaviour_vectors(&self) -> Result<Vec<BehaviourVector>, AnalyzerError> {
        self.labels()
            .map(|l| self.behaviour_vector(l, self.schedule(l).active_rounds()))
            .collect()
    }

    /// Simultaneous-start execution with positions recorded, capped at
    /// `max_rounds` (default: until nothing moves).
    pub fn execute(
        &self,
        x: u64,
        px: NodeId,
        y: u64,
        py: NodeId,
        max_rounds: Option<u64>,
    ) -> Result<ExecutionTrace, AnalyzerError> {
        let config = RunConfig::new(
            &self.graph,
            (self.schedule(x), self.flip(px)),
            (self.schedule(y), self.flip(py)),
            1,
        );
        let mut trace = simulator::run(&config, max_rounds.unwrap_or(self.horizon))?;
        for (a, b) in &mut trace.positions {
            *a = self.flip(*a);
            *b = self.flip(*b);
        }
        Ok(trace)
    }

    /// Meeting round and cost of a simultaneous-start execution.
    pub fn meeting(&self, x: u64, px: NodeId, y: u64, py: NodeId) -> Result<Option<(u64, u64)>, AnalyzerError> {
        let config = RunConfig::new(
            &self.graph,
            (self.schedule(x), self.flip(px)),
            (self.schedule(y), self.flip(py)),
            1,
        );
        let trace = simulator::run_outcome(&config, self.horizon)?;
        Ok(trace.meeting_round.map(|r| (r, trace.cost)))
    }
}

/// Per-round signed moves of one agent, recovered from its positions.
fn realized_moves(start: NodeId, positions: impl Iterator<Item = NodeId>, n: usize) -> Vec<i8> {
    let mut prev = start;
    positions
        .map(|p| {
            let step = match (p + n - prev) % n {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            prev = p;
            step
        })
        .collect()
}

/// Ring edges crossed by a move sequence, identified by their clockwise-lower endpoint.
fn edges_of(start: NodeId, moves: &[i8], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut pos = start;
    for &m in moves {
        match m {
            1 => {
                seen[pos] = true;
                pos = (pos + 1) % n;
            }
            -1 => {
                pos = (pos + n - 1) % n;
                seen[pos] = true;
            }
            _ => {}
        }
    }
    seen
}

/// Behaviour vectors with every entry after the last round any execution of
/// that label can still be running set to zero (and dropped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrimmedAlgorithm {
    pub n: usize,
    /// `vectors[l - 1]` has exactly `m[l - 1]` entries.
    pub vectors: Vec<BehaviourVector>,
    /// `m_x`: latest meeting round over all partners and start pairs.
    pub m: Vec<u64>,
    /// Largest cost over all simultaneous-start executions.
    pub worst_cost: u64,
}

impl TrimmedAlgorithm {
    pub fn label_space(&self) -> u64 {
        self.vectors.len() as u64
    }

    pub fn vector(&self, label: u64) -> &BehaviourVector {
        &self.vectors[label as usize - 1]
    }

    pub fn m(&self, label: u64) -> u64 {
        self.m[label as usize - 1]
    }

    /// Largest `m_x`: the worst-case time of the algorithm.
    pub fn worst_time(&self) -> u64 {
        self.m.iter().copied().max().unwrap_or(0)
    }

    pub fn mirrored(&self) -> Self {
        TrimmedAlgorithm {
            vectors: self.vectors.iter().map(BehaviourVector::mirrored).collect(),
            ..self.clone()
        }
    }
}

/// Runs every unordered pair at every clockwise gap and folds the latest
/// meeting round per label. By rotation symmetry this covers all start pairs.
fn sweep_pairs<F>(space: u64, n: usize, meet: F) -> Result<(Vec<u64>, u64), AnalyzerError>
where
    F: Fn(u64, u64, usize) -> Result<Option<(u64, u64)>, AnalyzerError> + Sync,
{
    let cells: Vec<(u64, u64, usize)> = (1..=space)
        .flat_map(|x| (x + 1..=space).flat_map(move |y| (1..n).map(move |d| (x, y, d))))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(x, y, d)| match meet(x, y, d)? {
            Some((round, cost)) => Ok((x, y, round, cost)),
            None => Err(AnalyzerError::NeverMeet { x, y, gap: d }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = vec![0; space as usize];
    let mut worst_cost = 0;
    for (x, y, round, cost) in results {
        m[x as usize - 1] = m[x as usize - 1].max(round);
        m[y as usize - 1] = m[y as usize - 1].max(round);
        worst_cost = worst_cost.max(cost);
    }
    Ok((m, worst_cost))
}

/// Trim driven by the simulator on the compiled schedules.
pub fn trim(ring: &RingAlgorithm) -> Result<TrimmedAlgorithm, AnalyzerError> {
    let (m, worst_cost) = sweep_pairs(ring.label_space(), ring.n(), |x, y, d| ring.meeting(x, 0, y, d))?;
    let vectors = ring
        .labels()
        .map(|l| ring.behaviour_vector(l, m[l as usize - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TrimmedAlgorithm {
        n: ring.n(),
        vectors,
        m,
        worst_cost,
    })
}

/// Trim driven purely by vector replay. `vectors[l - 1]` belongs to label `l`.
pub fn trim_vectors(vectors: &[BehaviourVector], n: usize) -> Result<TrimmedAlgorithm, AnalyzerError> {
    let space = vectors.len() as u64;
    if space < 2 {
        return Err(AnalyzerError::SpaceTooSmall(space));
    }
    let (m, worst_cost) = sweep_pairs(space, n, |x, y, d| {
        Ok(replay_meeting(
            vectors[x as usize - 1].entries(),
            0,
            vectors[y as usize - 1].entries(),
            d,
            n,
        ))
    })?;
    let vectors = vectors
        .iter()
        .zip(&m)
        .map(|(v, &mx)| v.truncated(mx))
        .collect();
    Ok(TrimmedAlgorithm {
        n,
        vectors,
        m,
        worst_cost,
    })
}

/// Position of B that keeps the two explored segments apart.
pub fn witness_node(p_a: NodeId, forward_a: usize, back_b: usize, n: usize) -> NodeId {
    (p_a + forward_a + 1 + back_b) % n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The segments explored in the reference execution cover too much of the ring.
    PremiseNotMet { seg_a: usize, seg_b: usize, e: usize },
    /// B moved to `p_b_prime`, replayed for `rounds` rounds.
    Found {
        p_b_prime: NodeId,
        rounds: u64,
        disjoint: bool,
        met: bool,
    },
}

impl Witness {
    /// Premise met and the moved execution really keeps the agents apart.
    pub fn verified(&self) -> bool {
        matches!(self, Witness::Found { disjoint: true, met: false, .. })
    }
}

/// Takes the reference execution `alpha(a, p_a, b, p_b)` and, if the segments
/// the agents explore in it leave room, moves B so that during the same
/// number of rounds the two agents use disjoint sets of edges.
pub fn disjoint_witness(
    ring: &RingAlgorithm,
    trimmed: &TrimmedAlgorithm,
    a: u64,
    p_a: NodeId,
    b: u64,
    p_b: NodeId,
) -> Result<Witness, AnalyzerError> {
    let n = ring.n();
    let rounds = ring
        .meeting(a, p_a, b, p_b)?
        .ok_or(AnalyzerError::NeverMeet {
            x: a,
            y: b,
            gap: (p_b + n - p_a) % n,
        })?
        .0;
    let prefix = |label: u64| {
        let v = trimmed.vector(label).entries();
        forward_back(&v[..(rounds as usize).min(v.len())], n)
    };
    let (fa, ba) = prefix(a);
    let (fb, bb) = prefix(b);
    let e = ring.e();
    if fa + ba + fb + bb >= e {
        return Ok(Witness::PremiseNotMet {
            seg_a: fa + ba,
            seg_b: fb + bb,
            e,
        });
    }
    let p_b_prime = witness_node(p_a, fa, bb, n);
    let trace = ring.execute(a, p_a, b, p_b_prime, Some(rounds))?;
    let moves_a = realized_moves(p_a, trace.positions.iter().map(|p| p.0), n);
    let moves_b = realized_moves(p_b_prime, trace.positions.iter().map(|p| p.1), n);
    let ea = edges_of(p_a, &moves_a, n);
    let eb = edges_of(p_b_prime, &moves_b, n);
    let disjoint = ea.iter().zip(&eb).all(|(x, y)| !(x & y));
    Ok(Witness::Found {
        p_b_prime,
        rounds,
        disjoint,
        met: trace.met,
    })
}

/// `F = ceil(E / 2)`.
pub fn eager_gap(n: usize) -> usize {
    (n - 1).div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EagerOutcome {
    pub x: u64,
    pub y: u64,
    pub meeting_round: u64,
    pub disp_x: i64,
    pub disp_y: i64,
    /// The eager label, or `None` when zero or two qualify.
    pub eager: Option<u64>,
    /// Both displacements are smaller than `n` in magnitude.
    pub guarded: bool,
}

/// Runs `x` from node 0 against `y` from node `F` and reports who is eager:
/// the agent whose displacement exceeds the other's by at least `F`.
pub fn eager_check(ring: &RingAlgorithm, x: u64, y: u64) -> Result<EagerOutcome, AnalyzerError> {
    let n = ring.n();
    let f = eager_gap(n);
    let trace = ring.execute(x, 0, y, f, None)?;
    let meeting_round = trace.meeting_round.ok_or(AnalyzerError::NeverMeet { x, y, gap: f })?;
    let disp_x = surplus(&realized_moves(0, trace.positions.iter().map(|p| p.0), n));
    let disp_y = surplus(&realized_moves(f, trace.positions.iter().map(|p| p.1), n));
    let f = f as i64;
    let eager = match (disp_x >= disp_y + f, disp_y >= disp_x + f) {
        (true, false) => Some(x),
        (false, true) => Some(y),
        _ => None,
    };
    Ok(EagerOutcome {
        x,
        y,
        meeting_round,
        disp_x,
        disp_y,
        eager,
        guarded: disp_x.abs() < n as i64 && disp_y.abs() < n as i64,
    })
}

/// Hamiltonian path of a tournament by insertion: each vertex goes in front
/// of the first path vertex it beats, or at the end.
pub fn hamiltonian_path<T: Copy>(vertices: &[T], mut beats: impl FnMut(T, T) -> bool) -> Vec<T> {
    let mut path: Vec<T> = Vec::with_capacity(vertices.len());
    for &v in vertices {
        let at = path.iter().position(|&u| beats(v, u)).unwrap_or(path.len());
        path.insert(at, v);
    }
    path
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tournament {
    pub vertices: Vec<u64>,
    /// `(tail, head)`: the tail is eager in `alpha(min, 0, max, F)`.
    pub edges: Vec<(u64, u64)>,
    pub path: Vec<u64>,
    /// Meeting round of the execution behind each consecutive path edge.
    pub chain: Vec<u64>,
}

impl Tournament {
    pub fn has_edge(&self, tail: u64, head: u64) -> bool {
        self.edges.contains(&(tail, head))
    }

    /// Every consecutive pair of the path is an edge, and every vertex appears once.
    pub fn path_is_valid(&self) -> bool {
        let mut seen = self.path.clone();
        seen.sort_unstable();
        let mut vertices = self.vertices.clone();
        vertices.sort_unstable();
        seen == vertices && self.path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

/// Builds the eager tournament on `labels` and a Hamiltonian path through it.
pub fn tournament_order(ring: &RingAlgorithm, labels: &[u64]) -> Result<Tournament, AnalyzerError> {
    let mut edges = Vec::new();
    let mut rounds = std::collections::HashMap::new();
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            let (lo, hi) = (a.min(b), a.max(b));
            let out = eager_check(ring, lo, hi)?;
            let tail = out.eager.ok_or(AnalyzerError::EagerViolation {
                x: lo,
                y: hi,
                disp_x: out.disp_x,
                disp_y: out.disp_y,
            })?;
            let head = if tail == lo { hi } else { lo };
            edges.push((tail, head));
            rounds.insert((lo, hi), out.meeting_round);
        }
    }
    let path = hamiltonian_path(labels, |u, v| edges.contains(&(u, v)));
    let chain = path
        .windows(2)
        .map(|w| rounds[&(w[0].min(w[1]), w[0].max(w[1]))])
        .collect();
    Ok(Tournament {
        vertices: labels.to_vec(),
        edges,
        path,
        chain,
    })
}

/// Six sectors of `n / 6` nodes and blocks of `n / 6` rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RingGeometry {
    pub n: usize,
    pub sector_len: usize,
    pub e: usize,
    pub f: usize,
}

impl RingGeometry {
    pub fn new(n: usize) -> Result<Self, AnalyzerError> {
        if n < 6 || !n.is_multiple_of(6) {
            let lower = (n / 6 * 6).max(6);
            let upper = if lower > n { lower } else { lower + 6 };
            let lower = if lower < n { lower } else { upper };
            return Err(AnalyzerError::Geometry { n, lower, upper });
        }
        Ok(RingGeometry {
            n,
            sector_len: n / 6,
            e: n - 1,
            f: eager_gap(n),
        })
    }

    /// Sector `0..6` holding `node`.
    pub fn sector(&self, node: NodeId) -> usize {
        node / self.sector_len
    }

    /// Index `M` of the block containing round `m`.
    pub fn blocks(&self, m: u64) -> usize {
        (m as usize).div_ceil(self.sector_len)
    }
}

/// Positions after each of rounds `0..=rounds`, starting at `start`.
fn solo_positions(v: &BehaviourVector, start: NodeId, rounds: u64, n: usize) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(rounds as usize + 1);
    let mut pos = start as i64;
    out.push(start);
    for r in 1..=rounds {
        pos = (pos + i64::from(v.at(r))).rem_euclid(n as i64);
        out.push(pos as NodeId);
    }
    out
}

/// Sector change from the start of block `i` to the start of block `i + 1`,
/// for blocks `1..=M` where `M` is the block containing round `m`.
pub fn aggregate_vector(
    v: &BehaviourVector,
    m: u64,
    geometry: &RingGeometry,
    start: NodeId,
) -> Result<Vec<i8>, AnalyzerError> {
    let s = geometry.sector_len;
    let blocks = geometry.blocks(m);
    let pos = solo_positions(v, start, (blocks * s) as u64, geometry.n);
    (1..=blocks)
        .map(|i| {
            let from = geometry.sector(pos[(i - 1) * s]) as i64;
            let to = geometry.sector(pos[i * s]) as i64;
            match (to - from).rem_euclid(6) {
                0 => Ok(0),
                1 => Ok(1),
                5 => Ok(-1),
                d => Err(AnalyzerError::Domain { index: i, value: d }),
            }
        })
        .collect()
}

/// Progress vector with the loop trace that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub prog: Vec<i8>,
    /// `(a_j, b_j)` for every loop iteration that preserved two entries.
    pub pairs: Vec<(usize, usize)>,
    /// `s_j` at the start of every iteration, including the final one.
    pub starts: Vec<usize>,
}

impl Progress {
    pub fn nonzero(&self) -> usize {
        self.prog.iter().filter(|&&e| e != 0).count()
    }
}

/// Keeps only the entries of `agg` that witness a net advance of two
/// sectors; everything else is zeroed.
pub fn define_progress(agg: &[i8]) -> Result<Progress, AnalyzerError> {
    if let Some((i, &v)) = agg.iter().enumerate().find(|(_, v)| !(-1..=1).contains(*v)) {
        return Err(AnalyzerError::Domain {
            index: i + 1,
            value: i64::from(v),
        });
    }
    let m = agg.len();
    // sum(s, k) = surplus of agg[s..=k], 1-based inclusive.
    let sum = |s: usize, k: usize| surplus(&agg[s - 1..k]);
    let mut prog = vec![0; m];
    let mut pairs = Vec::new();
    let mut starts = Vec::new();
    let mut s = 1;
    loop {
        starts.push(s);
        if s > m || (s..=m).all(|k| sum(s, k).abs() <= 1) {
            return Ok(Progress { prog, pairs, starts });
        }
        let b = (s..=m).find(|&i| sum(s, i).abs() == 2).expect("some prefix reaches 2");
        let a = (s..=b)
            .find(|&a| (a..=b).all(|i| sum(s, i).abs() >= 1))
            .expect("b itself qualifies");
        prog[a - 1] = agg[b - 1];
        prog[b - 1] = agg[b - 1];
        pairs.push((a, b));
        s = b + 1;
    }
}

/// Within every block the agent never leaves the sector it started the
/// block in or its two neighbours.
pub fn check_sector_confinement(
    v: &BehaviourVector,
    m: u64,
    geometry: &RingGeometry,
    start: NodeId,
) -> Result<(), String> {
    let s = geometry.sector_len;
    let blocks = geometry.blocks(m);
    let pos = solo_positions(v, start, (blocks * s) as u64, geometry.n);
    for i in 1..=blocks {
        let j = geometry.sector(pos[(i - 1) * s]);
        for r in (i - 1) * s..=i * s {
            let d = (geometry.sector(pos[r]) + 6 - j) % 6;
            if !matches!(d, 0 | 1 | 5) {
                return Err(format!("block {i} starts in sector {j}, round {r} is at node {}", pos[r]));
            }
        }
    }
    Ok(())
}

/// Aggregate vectors from nodes `0` and `n / 2` coincide.
pub fn check_start_equivalence(v: &BehaviourVector, m: u64, geometry: &RingGeometry) -> Result<(), String> {
    let a = aggregate_vector(v, m, geometry, 0).map_err(|e| e.to_string())?;
    let b = aggregate_vector(v, m, geometry, geometry.n / 2).map_err(|e| e.to_string())?;
    if a == b {
        Ok(())
    } else {
        Err(format!("from 0: {a:?}, from n/2: {b:?}"))
    }
}

/// `s_j <= a_j < b_j < s_{j+1}` for every iteration but the last.
pub fn check_index_order(p: &Progress) -> Result<(), String> {
    for (j, &(a, b)) in p.pairs.iter().enumerate() {
        let (s, next) = (p.starts[j], p.starts.get(j + 1).copied().unwrap_or(usize::MAX));
        if !(s <= a && a < b && b < next) {
            return Err(format!("iteration {}: s={s} a={a} b={b} next s={next}", j + 1));
        }
    }
    Ok(())
}

/// At every preserved pair, `Agg[a] = Agg[b] = Prog[a] = Prog[b] != 0`.
pub fn check_preserved_nonzero(agg: &[i8], p: &Progress) -> Result<(), String> {
    for &(a, b) in &p.pairs {
        let vals = [agg[a - 1], agg[b - 1], p.prog[a - 1], p.prog[b - 1]];
        if vals[0] == 0 || vals.iter().any(|&x| x != vals[0]) {
            return Err(format!("pair ({a},{b}): Agg {}, {} Prog {}, {}", vals[0], vals[1], vals[2], vals[3]));
        }
    }
    Ok(())
}

/// Over each maximal zero run `i1..=i2` of `Prog`, every prefix surplus of
/// `Agg[i1..]` has magnitude at most 1, and the whole run sums to 0 unless
/// it reaches the end.
pub fn check_zero_runs(agg: &[i8], prog: &[i8]) -> Result<(), String> {
    let m = prog.len();
    let mut i = 0;
    while i < m {
        if prog[i] != 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < m && prog[i] == 0 {
            i += 1;
        }
        let run = &agg[start..i];
        let mut acc = 0i64;
        for &e in run {
            acc += i64::from(e);
            if acc.abs() > 1 {
                return Err(format!("zero run {}..={}: prefix surplus {acc}", start + 1, i));
            }
        }
        if i < m && acc != 0 {
            return Err(format!("zero run {}..={} ends before M with surplus {acc}", start + 1, i));
        }
    }
    Ok(())
}

/// `k` preserved pairs cost at least `kE / 6` traversals in the solo run.
pub fn check_pair_cost(p: &Progress, solo_cost: u64, e: usize) -> Result<(), String> {
    let k = p.pairs.len() as u64;
    if 6 * solo_cost >= k * e as u64 {
        Ok(())
    } else {
        Err(format!("{k} pairs but solo cost {solo_cost} < {k}*{e}/6"))
    }
}

/// A clockwise-heavy solo run costs at least `2 back + forward`.
pub fn check_solo_cost(v: &BehaviourVector, n: usize) -> Result<(), String> {
    let (forward, back) = forward_back(v.entries(), n);
    if back >= forward || v.solo_cost() >= (2 * back + forward) as u64 {
        Ok(())
    } else {
        Err(format!("solo cost {} < 2*{back} + {forward}", v.solo_cost()))
    }
}

/// Outcome of one property over all the configurations it was checked on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactVerdict {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    /// First failing configuration.
    pub counterexample: Option<String>,
}

impl FactVerdict {
    pub fn new(name: &str) -> Self {
        FactVerdict {
            name: name.to_string(),
            passed: true,
            checked: 0,
            counterexample: None,
        }
    }

    /// Records one check; `context` labels the configuration on failure.
    pub fn record(&mut self, outcome: Result<(), String>, context: impl FnOnce() -> String) {
        self.checked += 1;
        if let Err(why) = outcome {
            if self.passed {
                self.counterexample = Some(format!("{}: {why}", context()));
            }
            self.passed = false;
        }
    }
}

impl fmt::Display for FactVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checks)", self.name, self.checked)?;
        if let Some(c) = &self.counterexample {
            write!(f, " -- {c}")?;
        }
        Ok(())
    }
}

/// Progress-vector artifacts of one label, from node 0 in the analysis frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelReport {
    pub label: u64,
    pub m: u64,
    pub forward: usize,
    pub back: usize,
    pub clockwise_heavy: bool,
    pub solo_cost: u64,
    pub agg: Vec<i8>,
    pub prog: Vec<i8>,
    pub pairs: Vec<(usize, usize)>,
}

/// Quantities the asymptotic arguments talk about, reported rather than judged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub max_prog_nonzero: usize,
    pub chain_lengths: Vec<u64>,
    pub chain_increasing: bool,
    pub worst_time: u64,
    pub worst_cost: u64,
    /// `worst_cost - E`.
    pub cost_slack: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyzerReport {
    pub algorithm: String,
    pub n: usize,
    pub label_space: u64,
    pub e: usize,
    pub f: usize,
    pub sector_len: usize,
    /// Ports were swapped because most labels lean counterclockwise.
    pub mirrored: bool,
    pub labels: Vec<LabelReport>,
    pub tournament: Tournament,
    pub facts: Vec<FactVerdict>,
    pub measured: Measured,
}

impl AnalyzerReport {
    pub fn all_passed(&self) -> bool {
        self.facts.iter().all(|f| f.passed)
    }

    pub fn fact(&self, name: &str) -> Option<&FactVerdict> {
        self.facts.iter().find(|f| f.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "algorithm {} on ring n={} (E={}, F={}, sector length {}), labels 1..={}{}",
            self.algorithm,
            self.n,
            self.e,
            self.f,
            self.sector_len,
            self.label_space,
            if self.mirrored { ", mirrored" } else { "" }
        );
        let _ = writeln!(out, "\nlabel  m_x  fwd  back  heavy  cost  pairs  Agg / Prog");
        let vec_str = |v: &[i8]| {
            v.iter()
                .map(|e| match e {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                })
                .collect::<String>()
        };
        for l in &self.labels {
            let _ = writeln!(
                out,
                "{:>5} {:>4} {:>4} {:>5} {:>6} {:>5} {:>6}  {} / {}",
                l.label,
                l.m,
                l.forward,
                l.back,
                if l.clockwise_heavy { "cw" } else { "ccw" },
                l.solo_cost,
                l.pairs.len(),
                vec_str(&l.agg),
                vec_str(&l.prog)
            );
        }
        let path: Vec<String> = self.tournament.path.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "\ntournament path: {}", path.join(" -> "));
        let _ = writeln!(out, "chain lengths: {:?}", self.measured.chain_lengths);
        let _ = writeln!(out, "\nfacts:");
        for f in &self.facts {
            let _ = writeln!(out, "  {f}");
        }
        let m = &self.measured;
        let _ = writeln!(
            out,
            "\nmeasured: max non-zero Prog entries {}, chain increasing {}, worst time {}, worst cost {}, cost slack {}",
            m.max_prog_nonzero, m.chain_increasing, m.worst_time, m.worst_cost, m.cost_slack
        );
        out
    }
}

/// Names of the verdicts produced by [`fact_suite`], in report order.
pub const FACT_NAMES: [&str; 12] = [
    "trim-neutrality",
    "solo-cost",
    "disjoint-witness",
    "exactly-one-eager",
    "tournament-path",
    "sector-confinement",
    "start-equivalence",
    "index-order",
    "preserved-nonzero",
    "zero-runs",
    "pair-cost",
    "progress-distinct",
];

/// Trimmed replay agrees with the simulator on every start pair of every
/// ordered pair of labels.
pub fn check_trim_neutrality(ring: &RingAlgorithm, trimmed: &TrimmedAlgorithm) -> Result<FactVerdict, AnalyzerError> {
    let n = ring.n();
    let labels: Vec<u64> = ring.labels().collect();
    let cells: Vec<(u64, u64, usize, usize)> = labels
        .iter()
        .flat_map(|&x| labels.iter().filter(move |&&y| y != x).map(move |&y| (x, y)))
        .flat_map(|(x, y)| (0..n).flat_map(move |p| (0..n).filter(move |&q| q != p).map(move |q| (x, y, p, q))))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(x, y, p, q)| {
            let real = ring.meeting(x, p, y, q)?.map(|r| r.0);
            let replay = replay_meeting(trimmed.vector(x).entries(), p, trimmed.vector(y).entries(), q, n).map(|r| r.0);
            Ok(((x, y, p, q), real, replay))
        })
        .collect::<Result<Vec<_>, AnalyzerError>>()?;
    let mut verdict = FactVerdict::new("trim-neutrality");
    for ((x, y, p, q), real, replay) in results {
        let outcome = if real == replay {
            Ok(())
        } else {
            Err(format!("simulated {real:?}, trimmed replay {replay:?}"))
        };
        verdict.record(outcome, || format!("x={x}@{p} y={y}@{q}"));
    }
    Ok(verdict)
}

/// Runs every check on `algorithm` over labels `1..=space` on the ring of
/// `n` nodes. Failed checks are reported, not returned as errors.
pub fn fact_suite(algorithm: &Algorithm, n: usize, space: u64) -> Result<AnalyzerReport, AnalyzerError> {
    let geometry = RingGeometry::new(n)?;
    let mut ring = RingAlgorithm::new(algorithm, n, space)?;
    let mut trimmed = trim(&ring)?;
    let neutrality = check_trim_neutrality(&ring, &trimmed)?;

    let heavy = trimmed
        .vectors
        .iter()
        .filter(|v| clockwise_heavy(v.entries(), n))
        .count() as u64;
    let mirrored = 2 * heavy < space;
    if mirrored {
        ring.set_mirrored(true);
        trimmed = trimmed.mirrored();
    }

    let mut solo_cost = FactVerdict::new("solo-cost");
    let mut confinement = FactVerdict::new("sector-confinement");
    let mut equivalence = FactVerdict::new("start-equivalence");
    let mut order = FactVerdict::new("index-order");
    let mut preserved = FactVerdict::new("preserved-nonzero");
    let mut zero_runs = FactVerdict::new("zero-runs");
    let mut pair_cost = FactVerdict::new("pair-cost");
    let mut labels = Vec::new();
    for l in ring.labels() {
        let v = trimmed.vector(l);
        let m = trimmed.m(l);
        let (forward, back) = forward_back(v.entries(), n);
        let ctx = || format!("label {l}");
        solo_cost.record(check_solo_cost(v, n), ctx);
        for start in [0, n / 2] {
            confinement.record(check_sector_confinement(v, m, &geometry, start), || {
                format!("label {l} from {start}")
            });
        }
        equivalence.record(check_start_equivalence(v, m, &geometry), ctx);
        let agg = aggregate_vector(v, m, &geometry, 0)?;
        let progress = define_progress(&agg)?;
        order.record(check_index_order(&progress), ctx);
        preserved.record(check_preserved_nonzero(&agg, &progress), ctx);
        zero_runs.record(check_zero_runs(&agg, &progress.prog), ctx);
        pair_cost.record(check_pair_cost(&progress, v.solo_cost(), geometry.e), ctx);
        labels.push(LabelReport {
            label: l,
            m,
            forward,
            back,
            clockwise_heavy: back < forward,
            solo_cost: v.solo_cost(),
            agg,
            prog: progress.prog,
            pairs: progress.pairs,
        });
    }

    // Labels whose progress vectors coincide over a common length must fail
    // to meet from antipodal starts; the algorithm meets, so they differ.
    let mut distinct = FactVerdict::new("progress-distinct");
    let common = labels.iter().map(|l| l.agg.len()).max().unwrap_or(0);
    let padded: Vec<Vec<i8>> = labels
        .iter()
        .map(|l| {
            let v = trimmed.vector(l.label);
            let agg = aggregate_vector(v, (common * geometry.sector_len) as u64, &geometry, 0)?;
            Ok(define_progress(&agg)?.prog)
        })
        .collect::<Result<_, AnalyzerError>>()?;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let outcome = if padded[i] != padded[j] {
                Ok(())
            } else {
                Err("equal progress vectors".to_string())
            };
            distinct.record(outcome, || format!("labels {} and {}", labels[i].label, labels[j].label));
        }
    }

    let mut witness = FactVerdict::new("disjoint-witness");
    for a in ring.labels() {
        for b in ring.labels().filter(|&b| b != a) {
            for p_b in 1..n {
                let w = disjoint_witness(&ring, &trimmed, a, 0, b, p_b)?;
                if let Witness::Found { .. } = w {
                    let outcome = if w.verified() { Ok(()) } else { Err(format!("{w:?}")) };
                    witness.record(outcome, || format!("A={a}@0 B={b}@{p_b}"));
                }
            }
        }
    }

    let mut eager = FactVerdict::new("exactly-one-eager");
    for x in ring.labels() {
        for y in ring.labels().filter(|&y| y != x) {
            let out = eager_check(&ring, x, y)?;
            if out.guarded {
                let outcome = if out.eager.is_some() {
                    Ok(())
                } else {
                    Err(format!("displacements {} and {}", out.disp_x, out.disp_y))
                };
                eager.record(outcome, || format!("x={x} y={y}"));
            }
        }
    }

    let heavy_labels: Vec<u64> = labels.iter().filter(|l| l.clockwise_heavy).map(|l| l.label).collect();
    let tournament = tournament_order(&ring, &heavy_labels)?;
    let mut path = FactVerdict::new("tournament-path");
    path.record(
        if tournament.path_is_valid() {
            Ok(())
        } else {
            Err(format!("{:?}", tournament.path))
        },
        || "heavy labels".to_string(),
    );

    let measured = Measured {
        max_prog_nonzero: labels.iter().map(|l| l.prog.iter().filter(|&&e| e != 0).count()).max().unwrap_or(0),
        chain_increasing: tournament.chain.windows(2).all(|w| w[0] < w[1]),
        chain_lengths: tournament.chain.clone(),
        worst_time: trimmed.worst_time(),
        worst_cost: trimmed.worst_cost,
        cost_slack: trimmed.worst_cost as i64 - geometry.e as i64,
    };

    Ok(AnalyzerReport {
        algorithm: algorithm.to_string(),
        n,
        label_space: space,
        e: geometry.e,
        f: geometry.f,
        sector_len: geometry.sector_len,
        mirrored,
        labels,
        tournament,
        facts: vec![
            neutrality,
            solo_cost,
            witness,
            eager,
            path,
            confinement,
            equivalence,
            order,
            preserved,
            zero_runs,
            pair_cost,
            distinct,
        ],
        measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: &[i8]) -> BehaviourVector {
        BehaviourVector::new(v.to_vec())
    }

    #[test]
    fn cheap_sim_vectors() {
        let ring = RingAlgorithm::new(&Algorithm::CheapSim, 5, 3).unwrap();
        let v1 = ring.behaviour_vector(1, 10).unwrap();
        assert_eq!(v1.entries(), &[1, 1, 1, 1, 0, 0, 0, 0, 0, 0]);
        let v2 = ring.behaviour_vector(2, 10).unwrap();
        assert_eq!(v2.entries(), &[0, 0, 0, 0, 1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn vectors_do_not_depend_on_start() {
        let g = Graph::oriented_ring(6).unwrap();
        let ring = RingAlgorithm::new(&Algorithm::Fast, 6, 4).unwrap();
        let s = ring.schedule(3);
        let from = |start| {
            simulator::solo_run(&g, s, start, 60)
                .unwrap()
                .exits
                .iter()
                .map(|e| e.map(|p| p as i8))
                .collect::<Vec<_>>()
        };
        assert_eq!(from(0), from(3));
    }

    #[test]
    fn surplus_examples() {
        assert_eq!(surplus(&[1, 0, -1, 1]), 1);
        assert_eq!(surplus(&[]), 0);
        assert_eq!(surplus(&[-1, -1]), -2);
    }

    #[test]
    fn forward_back_examples() {
        assert_eq!(forward_back(&[1, 1, 0, 0], 8), (2, 0));
        assert_eq!(forward_back(&[-1, 1, 1], 8), (1, 1));
        assert_eq!(forward_back(&[-1, -1, 1, 1, 1], 8), (1, 2));
        // Going around the ring twice still covers each edge once.
        assert_eq!(forward_back(&[1; 10], 4), (4, 0));
        assert!(clockwise_heavy(&[1, 1, -1], 8));
        assert!(!clockwise_heavy(&[1, -1, -1], 8));
        assert!(!clockwise_heavy(&[], 8));
    }

    #[test]
    fn trim_cheap_sim_ring5() {
        let ring = RingAlgorithm::new(&Algorithm::CheapSim, 5, 3).unwrap();
        let t = trim(&ring).unwrap();
        // Oracle: label 1 walks 4 steps, label 2 waits 4 then walks, label 3 waits 8.
        // x=1 vs y=2: 1 finds 2 within its first 4 rounds. x=1 vs y=3 likewise.
        // x=2 vs y=3: 3 sleeps until round 8, 2 reaches it at round 4 + gap.
        assert_eq!(t.m, vec![4, 8, 8]);
        assert_eq!(t.vector(1).entries(), &[1, 1, 1, 1]);
        assert_eq!(t.vector(3).entries(), &[0; 8]);
        assert_eq!(t.worst_cost, 4);
    }

    #[test]
    fn trim_by_replay_agrees_and_is_idempotent() {
        for alg in [Algorithm::CheapSim, Algorithm::Cheap, Algorithm::Fast] {
            let ring = RingAlgorithm::new(&alg, 6, 4).unwrap();
            let by_sim = trim(&ring).unwrap();
            let by_replay = trim_vectors(&ring.behaviour_vectors().unwrap(), 6).unwrap();
            assert_eq!(by_sim, by_replay, "{alg}");
            assert_eq!(trim_vectors(&by_sim.vectors, 6).unwrap(), by_sim, "{alg}");
        }
    }

    #[test]
    fn trim_reports_pairs_that_never_meet() {
        let idle = vec![bv(&[0, 0]), bv(&[0, 0, 0])];
        assert_eq!(
            trim_vectors(&idle, 4),
            Err(AnalyzerError::NeverMeet { x: 1, y: 2, gap: 1 })
        );
    }

    #[test]
    fn witness_node_example() {
        assert_eq!(witness_node(0, 2, 1, 12), 4);
        assert_eq!(witness_node(10, 2, 1, 12), 2);
    }

    #[test]
    fn witness_on_cheap_sim() {
        let ring = RingAlgorithm::new(&Algorithm::CheapSim, 12, 3).unwrap();
        let t = trim(&ring).unwrap();
        // Label 1 reaches label 2 one node ahead in the first round.
        let w = disjoint_witness(&ring, &t, 1, 0, 2, 1).unwrap();
        assert_eq!(
            w,
            Witness::Found {
                p_b_prime: 2,
                rounds: 1,
                disjoint: true,
                met: false
            }
        );
        // Reaching a partner 10 nodes on leaves one spare edge.
        let w = disjoint_witness(&ring, &t, 1, 0, 2, 10).unwrap();
        assert!(w.verified());
        // Reaching one 11 nodes on uses the whole ring.
        let w = disjoint_witness(&ring, &t, 1, 0, 2, 11).unwrap();
        assert_eq!(w, Witness::PremiseNotMet { seg_a: 11, seg_b: 0, e: 11 });
    }

    #[test]
    fn eager_examples() {
        let ring = RingAlgorithm::new(&Algorithm::CheapSim, 6, 2).unwrap();
        let out = eager_check(&ring, 1, 2).unwrap();
        assert_eq!((out.disp_x, out.disp_y, out.eager), (3, 0, Some(1)));
        let out = eager_check(&ring, 2, 1).unwrap();
        assert_eq!(out.eager, Some(1));
        assert_eq!((out.disp_x, out.disp_y), (0, 3));
    }

    #[test]
    fn insertion_path_on_a_cycle() {
        // 1 -> 2 -> 3 -> 1
        let beats = |a: u64, b: u64| matches!((a, b), (1, 2) | (2, 3) | (3, 1));
        let path = hamiltonian_path(&[1, 2, 3], beats);
        assert_eq!(path.len(), 3);
        assert!(path.windows(2).all(|w| beats(w[0], w[1])));
    }

    #[test]
    fn tournament_on_cheap_sim() {
        let ring = RingAlgorithm::new(&Algorithm::CheapSim, 12, 3).unwrap();
        let t = tournament_order(&ring, &[1, 2, 3]).unwrap();
        assert_eq!(t.path.len(), 3);
        assert!(t.path_is_valid());
        for w in t.path.windows(2) {
            let (lo, hi) = (w[0].min(w[1]), w[0].max(w[1]));
            assert_eq!(eager_check(&ring, lo, hi).unwrap().eager, Some(w[0]));
        }
    }

    #[test]
    fn geometry_guard() {
        assert!(RingGeometry::new(12).is_ok());
        assert_eq!(
            RingGeometry::new(10),
            Err(AnalyzerError::Geometry { n: 10, lower: 6, upper: 12 })
        );
        assert_eq!(
            RingGeometry::new(4),
            Err(AnalyzerError::Geometry { n: 4, lower: 6, upper: 6 })
        );
        let g = RingGeometry::new(12).unwrap();
        assert_eq!((g.sector_len, g.e, g.f), (2, 11, 6));
        assert_eq!(g.blocks(5), 3);
    }

    #[test]
    fn aggregate_examples() {
        let g = RingGeometry::new(12).unwrap();
        let walk = bv(&[1; 8]);
        assert_eq!(aggregate_vector(&walk, 8, &g, 0).unwrap(), vec![1, 1, 1, 1]);
        let idle = bv(&[0; 8]);
        assert_eq!(aggregate_vector(&idle, 8, &g, 0).unwrap(), vec![0; 4]);
        let back = bv(&[-1, -1, 0, 0, 1, 1]);
        assert_eq!(aggregate_vector(&back, 6, &g, 0).unwrap(), vec![-1, 0, 1]);
        assert_eq!(
            aggregate_vector(&back, 6, &g, 0).unwrap(),
            aggregate_vector(&back, 6, &g, 6).unwrap()
        );
    }

    #[test]
    fn progress_examples() {
        let p = define_progress(&[1, 1]).unwrap();
        assert_eq!(p.prog, vec![1, 1]);
        assert_eq!(p.pairs, vec![(1, 2)]);
        let p = define_progress(&[1, -1, 1, -1]).unwrap();
        assert_eq!(p.prog, vec![0; 4]);
        assert!(p.pairs.is_empty());
        let p = define_progress(&[1, 0, 1, -1, -1, -1, -1]).unwrap();
        assert_eq!(p.pairs[0], (1, 3));
        assert_eq!(p.prog, vec![1, 0, 1, -1, -1, -1, -1]);
        assert_eq!(p.pairs, vec![(1, 3), (4, 5), (6, 7)]);
        assert_eq!(p.starts, vec![1, 4, 6, 8]);
        let p = define_progress(&[0, 1, -1, 1, 0, 1, 0]).unwrap();
        assert_eq!(p.prog, vec![0, 0, 0, 1, 0, 1, 0]);
        assert_eq!(p.pairs, vec![(4, 6)]);
        assert!(matches!(define_progress(&[2]), Err(AnalyzerError::Domain { index: 1, value: 2 })));
    }

    #[test]
    fn corrupted_progress_fails_preserved_check() {
        let agg = [1, 0, 1, -1, -1, -1, -1];
        let mut p = define_progress(&agg).unwrap();
        assert!(check_preserved_nonzero(&agg, &p).is_ok());
        p.prog[2] = 0;
        assert!(check_preserved_nonzero(&agg, &p).is_err());
    }

    #[test]
    fn zero_run_check_catches_drift() {
        assert!(check_zero_runs(&[1, -1, 1, 1], &[0, 0, 1, 1]).is_ok());
        assert!(check_zero_runs(&[1, 0, 1, 1], &[0, 0, 1, 1]).is_err());
        assert!(check_zero_runs(&[1, 1], &[0, 0]).is_err());
        assert!(check_zero_runs(&[1], &[0]).is_ok());
    }

    #[test]
    fn suite_passes_on_cheap_sim_12() {
        let report = fact_suite(&Algorithm::CheapSim, 12, 4).unwrap();
        for f in &report.facts {
            assert!(f.passed, "{f}");
        }
        assert_eq!(report.labels.len(), 4);
        assert!(report.render_text().contains("PASS pair-cost"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["n"], 12);
    }

    #[test]
    fn suite_requires_sectors() {
        assert!(matches!(
            fact_suite(&Algorithm::CheapSim, 10, 4),
            Err(AnalyzerError::Geometry { n: 10, .. })
        ));
    }
}
