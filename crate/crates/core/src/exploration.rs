//! Exploration procedures as fixed-length action plans.
//!
//! A plan is exactly `E` actions long, one per round. Anchored plans assume
//! a particular start node; unanchored plans work from any start.
//!
//! Besides plain `wait` and `exit(p)`, unanchored DFS plans use two adaptive
//! actions. `try(p)` exits by `p` when the current node has such a port and
//! otherwise aborts the current attempt (the agent idles for the rest of the
//! attempt's forward part). `return` walks back one step along the entry
//! ports recorded by successful `try` moves, and clears the abort flag. An
//! attempt is a run of `try` actions followed by as many `return`s, so every
//! attempt ends where it started.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeId, Port};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanAction {
    Wait,
    Exit(Port),
    Try(Port),
    Return,
}

impl PlanAction {
    pub fn is_wait(self) -> bool {
        self == PlanAction::Wait
    }
}

impl fmt::Display for PlanAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanAction::Wait => f.write_str("w"),
            PlanAction::Exit(p) => write!(f, "{p}"),
            PlanAction::Try(p) => write!(f, "?{p}"),
            PlanAction::Return => f.write_str("r"),
        }
    }
}

impl FromStr for PlanAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "w" => Ok(PlanAction::Wait),
            "r" => Ok(PlanAction::Return),
            _ => {
                let (ctor, digits): (fn(Port) -> PlanAction, &str) = match s.strip_prefix('?') {
                    Some(rest) => (PlanAction::Try, rest),
                    None => (PlanAction::Exit, s),
                };
                digits
                    .parse()
                    .map(ctor)
                    .map_err(|_| format!("unknown plan action `{s}`"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("budget {requested} is smaller than the plan length {required}")]
    Budget { required: usize, requested: usize },
    #[error("cannot build an exploration plan for a graph with {n} node(s)")]
    TooSmall { n: usize },
    #[error("per-attempt budget must be positive")]
    ZeroAttemptBudget,
    #[error("plan line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("round {round}: exit port {port} does not exist at a node of degree {degree}")]
    PortUnavailable {
        round: usize,
        port: Port,
        degree: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A fixed-length exploration procedure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExplorationPlan {
    actions: Vec<PlanAction>,
    anchored: bool,
}

impl ExplorationPlan {
    pub fn new(actions: Vec<PlanAction>, anchored: bool) -> Self {
        ExplorationPlan { actions, anchored }
    }

    /// The round budget `E`; always equal to the number of actions.
    pub fn budget(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[PlanAction] {
        &self.actions
    }

    pub fn action(&self, step: usize) -> PlanAction {
        self.actions[step]
    }

    /// False when the plan is valid from every start node.
    pub fn anchored(&self) -> bool {
        self.anchored
    }

    /// Number of non-wait actions, an upper bound on the traversals it causes.
    pub fn active_len(&self) -> usize {
        let last = self.actions.iter().rposition(|a| !a.is_wait());
        last.map_or(0, |i| i + 1)
    }
}

impl fmt::Display for ExplorationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E {}", self.budget())?;
        if !self.anchored {
            f.write_str(" any-start")?;
        }
        writeln!(f)?;
        let mut first = true;
        for a in &self.actions {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        writeln!(f)
    }
}

impl FromStr for ExplorationPlan {
    type Err = PlanError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let perr = |line, message: String| PlanError::Parse { line, message };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| perr(1, "empty plan".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("E") {
            return Err(perr(1, format!("expected `E <budget>`, found `{header}`")));
        }
        let budget: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(1, "missing budget".into()))?;
        let anchored = match fields.next() {
            None => true,
            Some("any-start") => false,
            Some(other) => return Err(perr(1, format!("unknown plan flag `{other}`"))),
        };
        let mut actions = Vec::with_capacity(budget);
        for (i, line) in lines.enumerate() {
            for token in line.split_whitespace() {
                actions.push(token.parse().map_err(|m| perr(i + 2, m))?);
            }
        }
        if actions.len() != budget {
            return Err(perr(
                1,
                format!("budget {budget} but {} actions listed", actions.len()),
            ));
        }
        Ok(ExplorationPlan { actions, anchored })
    }
}

/// Per-execution state of a plan: the abort flag and the recorded trail of
/// entry ports used by `return` actions.
#[derive(Debug, Clone, Default)]
pub struct PlanRunner {
    aborted: bool,
    trail: Vec<Port>,
    record_arrival: bool,
}

impl PlanRunner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Forget everything; called at the start of each plan execution.
    pub fn reset(&mut self) {
        self.aborted = false;
        self.trail.clear();
        self.record_arrival = false;
    }

    /// Chooses the port to exit by (or `None` to stay) for one action, given
    /// the degree of the current node.
    pub fn choose(&mut self, action: PlanAction, degree: usize) -> Result<Option<Port>, (Port, usize)> {
        self.record_arrival = false;
        match action {
            PlanAction::Wait => Ok(None),
            PlanAction::Exit(p) if p < degree => Ok(Some(p)),
            PlanAction::Exit(p) => Err((p, degree)),
            PlanAction::Try(_) if self.aborted => Ok(None),
            PlanAction::Try(p) if p < degree => {
                self.record_arrival = true;
                Ok(Some(p))
            }
            PlanAction::Try(_) => {
                self.aborted = true;
                Ok(None)
            }
            PlanAction::Return => {
                self.aborted = false;
                Ok(self.trail.pop())
            }
        }
    }

    /// Reports the entry port after a move chosen by [`PlanRunner::choose`].
    pub fn arrived(&mut self, entry: Port) {
        if std::mem::take(&mut self.record_arrival) {
            self.trail.push(entry);
        }
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }
}

/// Walk produced by executing one plan alone from a start node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanWalk {
    /// Position after each round; `positions[0]` is the start.
    pub positions: Vec<NodeId>,
    pub traversals: usize,
}

impl PlanWalk {
    pub fn visited(&self, n: usize) -> Vec<bool> {
        let mut seen = vec![false; n];
        for &v in &self.positions {
            seen[v] = true;
        }
        seen
    }

    pub fn covers_all(&self, n: usize) -> bool {
        self.visited(n).into_iter().all(|s| s)
    }

    /// First round index (0 = before any move) at which every node has been seen.
    pub fn coverage_round(&self, n: usize) -> Option<usize> {
        let mut seen = vec![false; n];
        let mut remaining = n;
        for (round, &v) in self.positions.iter().enumerate() {
            if !std::mem::replace(&mut seen[v], true) {
                remaining -= 1;
                if remaining == 0 {
                    return Some(round);
                }
            }
        }
        None
    }
}

/// Executes `plan` from `start` on `graph`.
pub fn walk_plan(graph: &Graph, plan: &ExplorationPlan, start: NodeId) -> Result<PlanWalk, PlanError> {
    let mut runner = PlanRunner::new();
    let mut positions = Vec::with_capacity(plan.budget() + 1);
    positions.push(start);
    let mut at = start;
    let mut traversals = 0;
    for (round, &action) in plan.actions().iter().enumerate() {
        match runner.choose(action, graph.degree(at)) {
            Ok(Some(port)) => {
                let (next, entry) = graph.traverse(at, port)?;
                runner.arrived(entry);
                at = next;
                traversals += 1;
            }
            Ok(None) => {}
            Err((port, degree)) => {
                return Err(PlanError::PortUnavailable {
                    round: round + 1,
                    port,
                    degree,
                })
            }
        }
        positions.push(at);
    }
    Ok(PlanWalk {
        positions,
        traversals,
    })
}

/// Whether `plan` visits all nodes when started at `start`.
pub fn covers(graph: &Graph, plan: &ExplorationPlan, start: NodeId) -> bool {
    walk_plan(graph, plan, start).is_ok_and(|w| w.covers_all(graph.node_count()))
}

/// `n - 1` clockwise steps around an oriented ring; valid from every start.
pub fn ring_plan(n: usize) -> Result<ExplorationPlan, PlanError> {
    if n < 3 {
        return Err(PlanError::TooSmall { n });
    }
    Ok(ExplorationPlan::new(vec![PlanAction::Exit(0); n - 1], false))
}

/// Closed depth-first walk from `start`, always taking the smallest port that
/// leads to an unvisited node. Returns the exit port of every step; the walk
/// has `2n - 2` steps and ends at `start`.
pub fn closed_dfs_walk(graph: &Graph, start: NodeId) -> Vec<Port> {
    let n = graph.node_count();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut walk = Vec::with_capacity(2 * n);
    // (node, next port to examine, port leading back to the parent)
    let mut stack: Vec<(NodeId, Port, Option<Port>)> = vec![(start, 0, None)];
    while let Some(frame) = stack.last_mut() {
        let (v, next, back) = *frame;
        if next < graph.degree(v) {
            frame.1 += 1;
            let (u, entry) = graph.traverse(v, next).expect("port in range");
            if !visited[u] {
                visited[u] = true;
                walk.push(next);
                stack.push((u, 0, Some(entry)));
            }
        } else {
            stack.pop();
            if let Some(back) = back {
                walk.push(back);
            }
        }
    }
    walk
}

/// Anchored DFS from `start`: the closed DFS walk without its trailing
/// return moves (at most `2n - 3` traversals), padded to `E = 2n - 3`.
pub fn dfs_plan(graph: &Graph, start: NodeId) -> Result<ExplorationPlan, PlanError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(PlanError::TooSmall { n });
    }
    if start >= n {
        return Err(GraphError::NodeOutOfRange { node: start, n }.into());
    }
    let walk = closed_dfs_walk(graph, start);
    // Position after each step; keep the prefix up to the last new discovery.
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut at = start;
    let mut keep = 0;
    for (i, &p) in walk.iter().enumerate() {
        at = graph.traverse(at, p)?.0;
        if !std::mem::replace(&mut seen[at], true) {
            keep = i + 1;
        }
    }
    let actions = walk[..keep].iter().map(|&p| PlanAction::Exit(p)).collect();
    pad_plan(&ExplorationPlan::new(actions, true), 2 * n - 3)
}

/// Default per-attempt budget of [`unanchored_dfs_plan`]: forward walk plus
/// a full backtrack, `2 (2n - 2)`.
pub fn default_attempt_budget(n: usize) -> usize {
    2 * (2 * n - 2)
}

/// Unanchored exploration with the default per-attempt budget, for a total
/// of `E = 2n (2n - 2)`.
pub fn unanchored_dfs_plan(graph: &Graph) -> Result<ExplorationPlan, PlanError> {
    unanchored_dfs_plan_with_budget(graph, default_attempt_budget(graph.node_count()))
}

/// One attempt per candidate start node, in node order. Attempt `i` replays
/// the closed DFS walk computed for node `i` with `try` actions, then the
/// same number of `return` actions, and is padded (or cut) to
/// `attempt_budget` rounds.
pub fn unanchored_dfs_plan_with_budget(
    graph: &Graph,
    attempt_budget: usize,
) -> Result<ExplorationPlan, PlanError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(PlanError::TooSmall { n });
    }
    if attempt_budget == 0 {
        return Err(PlanError::ZeroAttemptBudget);
    }
    let mut actions = Vec::with_capacity(n * attempt_budget);
    for candidate in graph.nodes() {
        let walk = closed_dfs_walk(graph, candidate);
        let mut segment: Vec<PlanAction> = walk.iter().map(|&p| PlanAction::Try(p)).collect();
        segment.extend(std::iter::repeat_n(PlanAction::Return, walk.len()));
        segment.resize(attempt_budget, PlanAction::Wait);
        actions.extend(segment);
    }
    Ok(ExplorationPlan::new(actions, false))
}

/// Extends `plan` with trailing waits to exactly `budget` actions.
pub fn pad_plan(plan: &ExplorationPlan, budget: usize) -> Result<ExplorationPlan, PlanError> {
    if budget < plan.budget() {
        return Err(PlanError::Budget {
            required: plan.budget(),
            requested: budget,
        });
    }
    let mut actions = plan.actions.clone();
    actions.resize(budget, PlanAction::Wait);
    Ok(ExplorationPlan::new(actions, plan.anchored))
}

/// Pads or cuts `plan` to exactly `budget` actions.
pub fn fit_plan(plan: &ExplorationPlan, budget: usize) -> ExplorationPlan {
    let mut actions = plan.actions.clone();
    actions.resize(budget, PlanAction::Wait);
    ExplorationPlan::new(actions, plan.anchored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::corpus_graph;

    #[test]
    fn ring_plan_shape() {
        let plan = ring_plan(5).unwrap();
        assert_eq!(plan.budget(), 4);
        assert!(plan.actions().iter().all(|&a| a == PlanAction::Exit(0)));
        assert!(!plan.anchored());
        assert!(ring_plan(2).is_err());
    }

    #[test]
    fn ring_plan_walk_from_one() {
        let g = Graph::oriented_ring(3).unwrap();
        let walk = walk_plan(&g, &ring_plan(3).unwrap(), 1).unwrap();
        assert_eq!(walk.positions, vec![1, 2, 0]);
    }

    #[test]
    fn ring_plan_covers_from_every_start() {
        let g = Graph::oriented_ring(8).unwrap();
        let plan = ring_plan(8).unwrap();
        for s in g.nodes() {
            let walk = walk_plan(&g, &plan, s).unwrap();
            assert!(walk.covers_all(8));
            assert_eq!(walk.traversals, plan.budget());
        }
    }

    #[test]
    fn dfs_star_from_center() {
        let g = Graph::star(4).unwrap();
        let plan = dfs_plan(&g, 0).unwrap();
        assert_eq!(plan.budget(), 5);
        let walk = walk_plan(&g, &plan, 0).unwrap();
        assert!(walk.covers_all(4));
        assert!(walk.traversals <= 5);
    }

    #[test]
    fn dfs_two_node_path() {
        let g = Graph::path(2).unwrap();
        for s in 0..2 {
            let plan = dfs_plan(&g, s).unwrap();
            assert_eq!(plan.budget(), 1);
            assert_eq!(walk_plan(&g, &plan, s).unwrap().traversals, 1);
        }
    }

    #[test]
    fn dfs_ring_six() {
        let g = Graph::oriented_ring(6).unwrap();
        let plan = dfs_plan(&g, 0).unwrap();
        assert_eq!(plan.budget(), 9);
        // Oracle: a DFS on a ring from 0 walks 0,1,...,5 and stops.
        assert_eq!(plan.active_len(), 5);
        let walk = walk_plan(&g, &plan, 0).unwrap();
        assert_eq!(walk.coverage_round(6), Some(5));
    }

    #[test]
    fn closed_walk_returns_home() {
        let g = corpus_graph();
        for s in g.nodes() {
            let walk = closed_dfs_walk(&g, s);
            assert_eq!(walk.len(), 2 * g.node_count() - 2);
            let plan = ExplorationPlan::new(walk.iter().map(|&p| PlanAction::Exit(p)).collect(), true);
            let w = walk_plan(&g, &plan, s).unwrap();
            assert_eq!(*w.positions.last().unwrap(), s);
            assert!(w.covers_all(g.node_count()));
        }
    }

    #[test]
    fn unanchored_ring_first_attempt_suffices() {
        let g = Graph::oriented_ring(4).unwrap();
        let plan = unanchored_dfs_plan(&g).unwrap();
        assert_eq!(plan.budget(), 2 * 4 * 6);
        let attempt = default_attempt_budget(4);
        for s in g.nodes() {
            let walk = walk_plan(&g, &plan, s).unwrap();
            assert!(walk.covers_all(4));
            assert!(walk.coverage_round(4).unwrap() <= attempt);
        }
    }

    #[test]
    fn unanchored_star_from_leaf() {
        let g = Graph::star(4).unwrap();
        let plan = unanchored_dfs_plan(&g).unwrap();
        let attempt = default_attempt_budget(4);
        let walk = walk_plan(&g, &plan, 1).unwrap();
        // Attempt 0 (walk for the center) aborts: the leaf reached by its
        // second step has no port 1.
        let first: Vec<bool> = {
            let mut seen = vec![false; 4];
            for &v in &walk.positions[..=attempt] {
                seen[v] = true;
            }
            seen
        };
        assert!(!first.iter().all(|&s| s));
        assert_eq!(walk.positions[attempt], 1);
        let covered = walk.coverage_round(4).unwrap();
        assert!(covered > attempt && covered <= 2 * attempt);
    }

    #[test]
    fn attempts_return_to_their_start() {
        let graphs = [corpus_graph(), Graph::star(6).unwrap(), Graph::path(5).unwrap()];
        for g in &graphs {
            let plan = unanchored_dfs_plan(g).unwrap();
            let attempt = default_attempt_budget(g.node_count());
            for s in g.nodes() {
                let walk = walk_plan(g, &plan, s).unwrap();
                for k in 0..=g.node_count() {
                    assert_eq!(walk.positions[k * attempt], s, "attempt {k} from {s}");
                }
                assert!(walk.covers_all(g.node_count()));
            }
        }
    }

    #[test]
    fn pad_plan_cases() {
        let base = ExplorationPlan::new(vec![PlanAction::Exit(0); 4], true);
        assert_eq!(pad_plan(&base, 4).unwrap(), base);
        let padded = pad_plan(&base, 7).unwrap();
        assert_eq!(padded.budget(), 7);
        assert!(padded.actions()[4..].iter().all(|a| a.is_wait()));
        assert_eq!(
            pad_plan(&base, 3),
            Err(PlanError::Budget {
                required: 4,
                requested: 3
            })
        );
    }

    #[test]
    fn plan_text_round_trip() {
        let g = corpus_graph();
        for plan in [
            ring_plan(5).unwrap(),
            dfs_plan(&g, 3).unwrap(),
            unanchored_dfs_plan(&Graph::star(3).unwrap()).unwrap(),
        ] {
            let text = plan.to_string();
            let back: ExplorationPlan = text.parse().unwrap();
            assert_eq!(back, plan);
            assert_eq!(back.to_string(), text);
        }
        assert_eq!(ring_plan(4).unwrap().to_string(), "E 3 any-start\n0 0 0\n");
        assert!("E 2\n0\n".parse::<ExplorationPlan>().is_err());
        assert!("E 1\nx\n".parse::<ExplorationPlan>().is_err());
    }

    #[test]
    fn exit_on_missing_port_is_an_error() {
        let g = Graph::path(3).unwrap();
        let plan = ExplorationPlan::new(vec![PlanAction::Exit(1)], true);
        assert!(matches!(
            walk_plan(&g, &plan, 0),
            Err(PlanError::PortUnavailable { round: 1, port: 1, degree: 1 })
        ));
    }
}
