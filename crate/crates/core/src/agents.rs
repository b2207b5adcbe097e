//! Compiles a label and an exploration procedure into a round-indexed
//! agent schedule.
//!
//! A schedule is a list of phases, each either a block of waiting rounds or
//! one full execution of an exploration plan. After the last phase the agent
//! waits forever. Schedules never react to the other agent; the simulator
//! stops the run when the two meet.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exploration::{fit_plan, ring_plan, unanchored_dfs_plan, ExplorationPlan, PlanAction, PlanError};
use crate::graph::Graph;
use crate::labels::{
    doubled_schedule_bits, fast_schedule_bits, modified_label, relabel, BitString, Label,
    LabelError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("exploration plan must take at least one round")]
    EmptyPlan,
    #[error("`{0}` needs an exploration family, not a single plan")]
    NeedsFamily(Algorithm),
    #[error("`{0}` runs a single exploration plan, not a family")]
    NeedsPlan(Algorithm),
    #[error("doubling cannot wrap another doubling wrapper")]
    NestedDoubling,
    #[error("exploration family budgets must be positive and strictly increasing")]
    BadFamily,
    #[error("unknown algorithm descriptor `{0}`")]
    UnknownAlgorithm(String),
}

/// Algorithm descriptor: `cheap-sim | cheap | fast-sim | fast | fwr:w=<k> | doubling:<base>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    /// Simultaneous-start Cheap: wait `(l-1)E`, explore once.
    CheapSim,
    /// Explore, wait `2lE`, explore.
    Cheap,
    /// Simultaneous-start Fast: one `E`-round block per bit of `M(l)`.
    FastSim,
    /// One `E`-round block per bit of `(1, S1, S1, ..., Sm, Sm)`.
    Fast,
    /// Fast run on the constant-weight relabeled code.
    FastWithRelabeling { weight: u32 },
    /// Base algorithm iterated over a family of growing explorations.
    Doubling(Box<Algorithm>),
}

impl Algorithm {
    pub fn is_doubling(&self) -> bool {
        matches!(self, Algorithm::Doubling(_))
    }

    /// Whether correctness is only claimed when both agents wake together.
    pub fn simultaneous_only(&self) -> bool {
        match self {
            Algorithm::CheapSim | Algorithm::FastSim => true,
            Algorithm::Doubling(base) => base.simultaneous_only(),
            _ => false,
        }
    }

    /// Block pattern in units of `E`: `true` = explore, `false` = wait `E` rounds.
    /// Cheap's variants are expressed directly in [`Algorithm::base_phases`].
    fn block_bits(&self, label: Label, space: u64) -> Result<BitString, AgentError> {
        Ok(match self {
            Algorithm::FastSim => modified_label(label),
            Algorithm::Fast => fast_schedule_bits(label),
            Algorithm::FastWithRelabeling { weight } => {
                doubled_schedule_bits(&relabel(label, space, *weight)?.bits)
            }
            _ => unreachable!("block_bits only applies to the fast family"),
        })
    }

    fn base_phases(&self, label: Label, space: u64, budget: u64, plan: usize) -> Result<Vec<Phase>, AgentError> {
        label.within(space)?;
        let l = label.get();
        let explore = Phase::Explore { plan };
        Ok(match self {
            Algorithm::CheapSim => vec![Phase::Wait((l - 1) * budget), explore],
            Algorithm::Cheap => vec![explore, Phase::Wait(2 * l * budget), explore],
            Algorithm::FastSim | Algorithm::Fast | Algorithm::FastWithRelabeling { .. } => self
                .block_bits(label, space)?
                .bits()
                .iter()
                .map(|&b| if b { explore } else { Phase::Wait(budget) })
                .collect(),
            Algorithm::Doubling(_) => return Err(AgentError::NestedDoubling),
        })
    }

    /// Longest base schedule over the whole label space, in units of `E`.
    pub fn max_blocks(&self, space: u64) -> Result<u64, AgentError> {
        let widest = Label::new(space)?;
        Ok(match self {
            Algorithm::CheapSim => space,
            Algorithm::Cheap => 2 * space + 2,
            Algorithm::FastSim => modified_label(widest).len() as u64,
            Algorithm::Fast => fast_schedule_bits(widest).len() as u64,
            Algorithm::FastWithRelabeling { .. } => self.block_bits(widest, space)?.len() as u64,
            Algorithm::Doubling(_) => return Err(AgentError::NestedDoubling),
        })
    }

    /// Compiles the schedule of agent `label` running with a single plan.
    pub fn compile(&self, label: Label, space: u64, plan: &Arc<ExplorationPlan>) -> Result<AgentSchedule, AgentError> {
        if self.is_doubling() {
            return Err(AgentError::NeedsFamily(self.clone()));
        }
        if plan.budget() == 0 {
            return Err(AgentError::EmptyPlan);
        }
        let phases = self.base_phases(label, space, plan.budget() as u64, 0)?;
        Ok(AgentSchedule::new(label, self.clone(), phases, vec![plan.clone()]))
    }

    /// Compiles against whichever procedure fits the algorithm.
    pub fn compile_with(&self, label: Label, space: u64, procedure: &Procedure) -> Result<AgentSchedule, AgentError> {
        match (self, procedure) {
            (Algorithm::Doubling(base), Procedure::Family(family)) => doubling_wrapper(base, family, label, space),
            (Algorithm::Doubling(_), Procedure::Plan(_)) => Err(AgentError::NeedsFamily(self.clone())),
            (_, Procedure::Plan(plan)) => self.compile(label, space, plan),
            (_, Procedure::Family(_)) => Err(AgentError::NeedsPlan(self.clone())),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::CheapSim => f.write_str("cheap-sim"),
            Algorithm::Cheap => f.write_str("cheap"),
            Algorithm::FastSim => f.write_str("fast-sim"),
            Algorithm::Fast => f.write_str("fast"),
            Algorithm::FastWithRelabeling { weight } => write!(f, "fwr:w={weight}"),
            Algorithm::Doubling(base) => write!(f, "doubling:{base}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || AgentError::UnknownAlgorithm(s.to_string());
        match s.trim() {
            "cheap-sim" => Ok(Algorithm::CheapSim),
            "cheap" => Ok(Algorithm::Cheap),
            "fast-sim" => Ok(Algorithm::FastSim),
            "fast" => Ok(Algorithm::Fast),
            other => {
                if let Some(w) = other.strip_prefix("fwr:w=") {
                    let weight = w.parse().map_err(|_| unknown())?;
                    if weight == 0 {
                        return Err(unknown());
                    }
                    Ok(Algorithm::FastWithRelabeling { weight })
                } else if let Some(base) = other.strip_prefix("doubling:") {
                    match base.parse()? {
                        Algorithm::Doubling(_) => Err(AgentError::NestedDoubling),
                        base => Ok(Algorithm::Doubling(Box::new(base))),
                    }
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

impl TryFrom<String> for Algorithm {
    type Error = AgentError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.to_string()
    }
}

/// What an agent is told about exploring the graph.
#[derive(Debug, Clone)]
pub enum Procedure {
    Plan(Arc<ExplorationPlan>),
    Family(Arc<ExploreFamily>),
}

impl Procedure {
    /// The `E` that bounds are stated in: the plan budget, or for a family
    /// the smallest budget whose plan covers the graph from every start.
    pub fn budget_for(&self, graph: &Graph) -> Option<usize> {
        match self {
            Procedure::Plan(plan) => Some(plan.budget()),
            Procedure::Family(family) => family.first_covering(graph).map(|i| family.plan(i).budget()),
        }
    }

    /// What `algorithm` runs on an oriented ring of `n` nodes: the clockwise
    /// sweep for fixed-plan algorithms, the ring family for doubling.
    pub fn for_ring(algorithm: &Algorithm, n: usize) -> Result<Self, AgentError> {
        Ok(if algorithm.is_doubling() {
            Procedure::Family(Arc::new(ExploreFamily::oriented_rings(ExploreFamily::levels_for(n))?))
        } else {
            Procedure::Plan(Arc::new(ring_plan(n)?))
        })
    }
}

/// Explorations `EXPLORE_i`, `i = 1, 2, ...`, plan `i` intended for graphs of
/// at most `2^i` nodes, with strictly increasing budgets `E_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreFamily {
    plans: Vec<Arc<ExplorationPlan>>,
}

impl ExploreFamily {
    pub fn from_plans(plans: Vec<ExplorationPlan>) -> Result<Self, AgentError> {
        let ok = !plans.is_empty()
            && plans[0].budget() > 0
            && plans.windows(2).all(|w| w[0].budget() < w[1].budget());
        if !ok {
            return Err(AgentError::BadFamily);
        }
        Ok(ExploreFamily {
            plans: plans.into_iter().map(Arc::new).collect(),
        })
    }

    /// Plan `i` walks `2^i - 1` steps clockwise, which explores every oriented
    /// ring of at most `2^i` nodes. `E_i = 2^i - 1`.
    pub fn oriented_rings(levels: u32) -> Result<Self, AgentError> {
        let plans = (1..=levels)
            .map(|i| ExplorationPlan::new(vec![PlanAction::Exit(0); (1usize << i) - 1], false))
            .collect();
        Self::from_plans(plans)
    }

    /// Plan `i` is the unanchored DFS plan of `graph` fitted to the budget of
    /// a `2^i`-node graph, `E_i = 2^(i+1) (2^(i+1) - 2)`. Levels whose budget
    /// is too short are cut off and simply fail to explore.
    pub fn unanchored_dfs(graph: &Graph, levels: u32) -> Result<Self, AgentError> {
        let full = unanchored_dfs_plan(graph)?;
        let plans = (1..=levels)
            .map(|i| {
                let m = 1usize << i;
                fit_plan(&full, 2 * m * (2 * m - 2))
            })
            .collect();
        Self::from_plans(plans)
    }

    /// Levels needed so that the last two levels both exceed the graph size.
    pub fn levels_for(n: usize) -> u32 {
        n.max(2).next_power_of_two().trailing_zeros() + 1
    }

    /// Ring family for rings, unanchored DFS family otherwise.
    pub fn for_graph(graph: &Graph) -> Result<Self, AgentError> {
        let levels = Self::levels_for(graph.node_count());
        if graph.is_oriented_ring() {
            Self::oriented_rings(levels)
        } else {
            Self::unanchored_dfs(graph, levels)
        }
    }

    pub fn len(&self) -> usize {
        self.plans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plans.is_empty()
    }

    /// Zero-based access; `plan(0)` is `EXPLORE_1`.
    pub fn plan(&self, index: usize) -> &Arc<ExplorationPlan> {
        &self.plans[index]
    }

    pub fn plans(&self) -> &[Arc<ExplorationPlan>] {
        &self.plans
    }

    /// Zero-based index of the first plan covering `graph` from every start.
    pub fn first_covering(&self, graph: &Graph) -> Option<usize> {
        self.plans
            .iter()
            .position(|p| graph.nodes().all(|s| crate::exploration::covers(graph, p, s)))
    }
}

/// Concatenation of `base(label, plan_i)` over the family. Every iteration is
/// padded to the longest base schedule in the label space, so both agents
/// switch levels at the same local rounds.
pub fn doubling_wrapper(
    base: &Algorithm,
    family: &ExploreFamily,
    label: Label,
    space: u64,
) -> Result<AgentSchedule, AgentError> {
    if base.is_doubling() {
        return Err(AgentError::NestedDoubling);
    }
    let blocks = base.max_blocks(space)?;
    let mut phases = Vec::new();
    for (i, plan) in family.plans().iter().enumerate() {
        let budget = plan.budget() as u64;
        let iteration = base.base_phases(label, space, budget, i)?;
        let used: u64 = iteration.iter().map(|p| p.len(&family.plans)).sum();
        phases.extend(iteration);
        phases.push(Phase::Wait(blocks * budget - used));
    }
    Ok(AgentSchedule::new(
        label,
        Algorithm::Doubling(Box::new(base.clone())),
        phases,
        family.plans().to_vec(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Wait(u64),
    /// One full execution of plan number `plan` of the schedule.
    Explore { plan: usize },
}

impl Phase {
    fn len(&self, plans: &[Arc<ExplorationPlan>]) -> u64 {
        match *self {
            Phase::Wait(r) => r,
            Phase::Explore { plan } => plans[plan].budget() as u64,
        }
    }
}

/// What an agent does in one round of its local clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleAction {
    Wait,
    /// Step `step` (0-based) of an execution of plan `plan`.
    Explore { plan: usize, step: usize },
}

/// A label-determined, round-indexed program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSchedule {
    label: Label,
    algorithm: Algorithm,
    phases: Vec<Phase>,
    /// Local round (0-based) at which each phase begins.
    starts: Vec<u64>,
    plans: Vec<Arc<ExplorationPlan>>,
    total: u64,
}

impl AgentSchedule {
    fn new(label: Label, algorithm: Algorithm, phases: Vec<Phase>, plans: Vec<Arc<ExplorationPlan>>) -> Self {
        let phases: Vec<Phase> = phases.into_iter().filter(|p| p.len(&plans) > 0).collect();
        let mut starts = Vec::with_capacity(phases.len());
        let mut total = 0;
        for p in &phases {
            starts.push(total);
            total += p.len(&plans);
        }
        AgentSchedule {
            label,
            algorithm,
            phases,
            starts,
            plans,
            total,
        }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn plans(&self) -> &[Arc<ExplorationPlan>] {
        &self.plans
    }

    pub fn plan(&self, index: usize) -> &ExplorationPlan {
        &self.plans[index]
    }

    /// Number of rounds before the agent idles forever.
    pub fn active_rounds(&self) -> u64 {
        self.total
    }

    /// Local rounds (1-based, inclusive) of each exploration phase.
    pub fn explorations(&self) -> Vec<(u64, u64)> {
        self.phases
            .iter()
            .zip(&self.starts)
            .filter_map(|(p, &s)| match p {
                Phase::Explore { plan } => Some((s + 1, s + self.plans[*plan].budget() as u64)),
                Phase::Wait(_) => None,
            })
            .collect()
    }

    /// Action in local round `round` (1-based).
    pub fn action_at(&self, round: u64) -> ScheduleAction {
        if round == 0 || round > self.total {
            return ScheduleAction::Wait;
        }
        let offset = round - 1;
        let idx = self.starts.partition_point(|&s| s <= offset) - 1;
        match self.phases[idx] {
            Phase::Wait(_) => ScheduleAction::Wait,
            Phase::Explore { plan } => ScheduleAction::Explore {
                plan,
                step: (offset - self.starts[idx]) as usize,
            },
        }
    }

    pub fn cursor(&self) -> ScheduleCursor<'_> {
        ScheduleCursor {
            schedule: self,
            phase: 0,
            offset: 0,
        }
    }
}

/// Sequential reader of a schedule, equivalent to calling
/// [`AgentSchedule::action_at`] with `1, 2, 3, ...`.
#[derive(Debug, Clone)]
pub struct ScheduleCursor<'a> {
    schedule: &'a AgentSchedule,
    phase: usize,
    offset: u64,
}

impl ScheduleCursor<'_> {
    pub fn finished(&self) -> bool {
        self.phase >= self.schedule.phases.len()
    }

    pub fn next_action(&mut self) -> ScheduleAction {
        let Some(&phase) = self.schedule.phases.get(self.phase) else {
            return ScheduleAction::Wait;
        };
        let action = match phase {
            Phase::Wait(_) => ScheduleAction::Wait,
            Phase::Explore { plan } => ScheduleAction::Explore {
                plan,
                step: self.offset as usize,
            },
        };
        self.offset += 1;
        if self.offset == phase.len(&self.schedule.plans) {
            self.phase += 1;
            self.offset = 0;
        }
        action
    }
}
