//! Deterministic rendezvous of two labeled agents in anonymous port-labeled
//! graphs, with a toolkit for cost lower bounds on oriented rings.

pub mod agents;
pub mod analyzer;
pub mod bounds;
pub mod cli;
pub mod exploration;
pub mod graph;
pub mod labels;
pub mod simulator;
pub mod sweep;

pub use agents::{AgentSchedule, Algorithm, ExploreFamily, Procedure};
pub use exploration::{ExplorationPlan, PlanAction};
pub use graph::{Graph, NodeId, OrientedRing, Port};
pub use labels::Label;
pub use simulator::{run, run_outcome, solo_run, ExecutionTrace, RunConfig};
pub use analyzer::{fact_suite, AnalyzerReport};
pub use bounds::Bounds;
pub use sweep::{run_sweep, SweepSpec, SweepSummary};
