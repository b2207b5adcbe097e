//! Synchronous two-agent execution engine.
//!
//! Rounds are numbered from 1, the wake-up round of agent A. Agent B wakes
//! in round `tau >= 1`. A sleeping agent sits on its start node and can be
//! found there. Meetings are detected at the end of a round only: two agents
//! swapping places over one edge do not meet.
//!
//! In the parachute model B does not exist before round `tau`, and time and
//! cost are both counted from round `tau`.

use std::io::{self, Write};

use thiserror::Error;

use crate::agents::{AgentSchedule, ScheduleAction, ScheduleCursor};
use crate::exploration::PlanRunner;
use crate::graph::{Graph, NodeId, Port};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("agents must carry distinct labels (both are {0})")]
    SameLabel(u64),
    #[error("agents must start on distinct nodes (both on {0})")]
    SameStart(NodeId),
    #[error("start node {node} out of range for a graph with {n} nodes")]
    StartOutOfRange { node: NodeId, n: usize },
    #[error("wake-up round must be at least 1")]
    ZeroWake,
    #[error("max_rounds must be at least 1")]
    ZeroRounds,
    #[error("agent {agent}, round {round}: exit port {port} does not exist at a node of degree {degree}")]
    PortUnavailable {
        agent: char,
        round: u64,
        port: Port,
        degree: usize,
    },
}

/// One agent's part of a run.
#[derive(Debug, Clone, Copy)]
pub struct AgentSetup<'a> {
    pub schedule: &'a AgentSchedule,
    pub start: NodeId,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig<'a> {
    pub graph: &'a Graph,
    /// Wakes in round 1.
    pub a: AgentSetup<'a>,
    /// Wakes in round `tau`.
    pub b: AgentSetup<'a>,
    pub tau: u64,
    pub parachute: bool,
}

impl<'a> RunConfig<'a> {
    pub fn new(
        graph: &'a Graph,
        a: (&'a AgentSchedule, NodeId),
        b: (&'a AgentSchedule, NodeId),
        tau: u64,
    ) -> Self {
        RunConfig {
            graph,
            a: AgentSetup {
                schedule: a.0,
                start: a.1,
            },
            b: AgentSetup {
                schedule: b.0,
                start: b.1,
            },
            tau,
            parachute: false,
        }
    }

    pub fn parachute(mut self, on: bool) -> Self {
        self.parachute = on;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.graph.node_count();
        for node in [self.a.start, self.b.start] {
            if node >= n {
                return Err(SimError::StartOutOfRange { node, n });
            }
        }
        if self.a.start == self.b.start {
            return Err(SimError::SameStart(self.a.start));
        }
        let (la, lb) = (self.a.schedule.label(), self.b.schedule.label());
        if la == lb {
            return Err(SimError::SameLabel(la.get()));
        }
        if self.tau == 0 {
            return Err(SimError::ZeroWake);
        }
        Ok(())
    }
}

/// Guard on run length, comfortably above every implemented bound.
pub fn default_max_rounds(label_space: u64, budget: u64) -> u64 {
    4 * (2 * label_space + 1) * budget
}

/// Record of a two-agent run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub met: bool,
    pub meeting_round: Option<u64>,
    /// Rounds from the earlier wake-up (or from `tau` under the parachute
    /// model) to the meeting, inclusive.
    pub time: Option<u64>,
    /// Edge traversals by both agents up to and including the meeting round.
    pub cost: u64,
    /// Traversals of A and B, counted the same way as `cost`.
    pub traversals: [u64; 2],
    /// Last simulated round.
    pub rounds: u64,
    /// `(node of A, node of B)` at the end of each round; empty when not recorded.
    pub positions: Vec<(NodeId, NodeId)>,
}

/// One agent in motion.
struct Walker<'a> {
    graph: &'a Graph,
    schedule: &'a AgentSchedule,
    cursor: ScheduleCursor<'a>,
    runner: PlanRunner,
    at: NodeId,
}

impl<'a> Walker<'a> {
    fn new(graph: &'a Graph, schedule: &'a AgentSchedule, start: NodeId) -> Self {
        Walker {
            graph,
            schedule,
            cursor: schedule.cursor(),
            runner: PlanRunner::new(),
            at: start,
        }
    }

    /// Plays the next local round. Returns the exit port if the agent moved.
    fn step(&mut self, agent: char, round: u64) -> Result<Option<Port>, SimError> {
        let ScheduleAction::Explore { plan, step } = self.cursor.next_action() else {
            return Ok(None);
        };
        if step == 0 {
            self.runner.reset();
        }
        let action = self.schedule.plan(plan).action(step);
        match self.runner.choose(action, self.graph.degree(self.at)) {
            Ok(Some(port)) => {
                let (next, entry) = self.graph.traverse(self.at, port).expect("port checked");
                self.runner.arrived(entry);
                self.at = next;
                Ok(Some(port))
            }
            Ok(None) => Ok(None),
            Err((port, degree)) => Err(SimError::PortUnavailable {
                agent,
                round,
                port,
                degree,
            }),
        }
    }

    fn finished(&self) -> bool {
        self.cursor.finished()
    }
}

/// Runs until the agents meet or `max_rounds` rounds have passed, recording
/// positions every round.
pub fn run(config: &RunConfig<'_>, max_rounds: u64) -> Result<ExecutionTrace, SimError> {
    execute(config, max_rounds, true)
}

/// Same as [`run`] without the per-round position log.
pub fn run_outcome(config: &RunConfig<'_>, max_rounds: u64) -> Result<ExecutionTrace, SimError> {
    execute(config, max_rounds, false)
}

fn execute(config: &RunConfig<'_>, max_rounds: u64, record: bool) -> Result<ExecutionTrace, SimError> {
    config.validate()?;
    if max_rounds == 0 {
        return Err(SimError::ZeroRounds);
    }
    let graph = config.graph;
    let tau = config.tau;
    let mut a = Walker::new(graph, config.a.schedule, config.a.start);
    let mut b = Walker::new(graph, config.b.schedule, config.b.start);
    let count_from = if config.parachute { tau } else { 1 };
    let mut traversals = [0u64; 2];
    let mut positions = Vec::new();
    let mut round = 0;
    let mut meeting_round = None;

    while round < max_rounds {
        round += 1;
        let counted = round >= count_from;
        if a.step('A', round)?.is_some() && counted {
            traversals[0] += 1;
        }
        if round >= tau && b.step('B', round)?.is_some() && counted {
            traversals[1] += 1;
        }
        if record {
            positions.push((a.at, b.at));
        }
        let b_present = !config.parachute || round >= tau;
        if b_present && a.at == b.at {
            meeting_round = Some(round);
            break;
        }
        // Nothing moves any more once both schedules are exhausted.
        if round >= tau && a.finished() && b.finished() {
            break;
        }
    }

    Ok(ExecutionTrace {
        met: meeting_round.is_some(),
        meeting_round,
        time: meeting_round.map(|r| r - count_from + 1),
        cost: traversals[0] + traversals[1],
        traversals,
        rounds: round,
        positions,
    })
}

/// A single agent running alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoloTrace {
    /// Node at the end of each round.
    pub positions: Vec<NodeId>,
    /// Exit port taken in each round, if any.
    pub exits: Vec<Option<Port>>,
    pub traversals: u64,
}

/// Executes `schedule` alone from `start` for exactly `rounds` rounds.
pub fn solo_run(graph: &Graph, schedule: &AgentSchedule, start: NodeId, rounds: u64) -> Result<SoloTrace, SimError> {
    let n = graph.node_count();
    if start >= n {
        return Err(SimError::StartOutOfRange { node: start, n });
    }
    let mut walker = Walker::new(graph, schedule, start);
    let mut positions = Vec::with_capacity(rounds as usize);
    let mut exits = Vec::with_capacity(rounds as usize);
    for round in 1..=rounds {
        exits.push(walker.step('A', round)?);
        positions.push(walker.at);
    }
    let traversals = exits.iter().filter(|e| e.is_some()).count() as u64;
    Ok(SoloTrace {
        positions,
        exits,
        traversals,
    })
}

/// Writes the per-round position log as CSV: `round,nodeA,nodeB`.
pub fn write_position_log<W: Write>(trace: &ExecutionTrace, mut out: W) -> io::Result<()> {
    writeln!(out, "round,nodeA,nodeB")?;
    for (i, (a, b)) in trace.positions.iter().enumerate() {
        writeln!(out, "{},{a},{b}", i + 1)?;
    }
    out.flush()
}
