//! Worst-case time and cost guarantees of the implemented algorithms, in
//! units of the exploration time `E`.

use std::fmt;

use serde::Serialize;

use crate::agents::Algorithm;
use crate::labels::{minimal_t, LabelError};

/// `floor(log2(x))`, with `floor(log2(1)) = 0`.
pub fn floor_log2(x: u64) -> u32 {
    assert!(x > 0, "log of zero");
    63 - x.leading_zeros()
}

/// Global guarantees over a label space `{1, ..., L}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Worst-case time is at most `time_factor * E`.
    pub time_factor: Option<u64>,
    /// Worst-case cost is at most `cost_factor * E`.
    pub cost_factor: Option<u64>,
    #[serde(skip)]
    algorithm: Kind,
    #[serde(skip)]
    label_space: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    CheapSim,
    Cheap,
    FastSim,
    Fast,
    Relabeled { weight: u32, t: u32 },
}

impl Bounds {
    /// `None` for algorithms without a stated guarantee (the doubling wrapper).
    pub fn for_algorithm(algorithm: &Algorithm, label_space: u64) -> Result<Option<Bounds>, LabelError> {
        let l = label_space;
        let log = floor_log2(l.saturating_sub(1).max(1)) as u64;
        let (kind, time, cost) = match algorithm {
            Algorithm::CheapSim => (Kind::CheapSim, Some(l), Some(1)),
            Algorithm::Cheap => (Kind::Cheap, Some(2 * l + 1), Some(3)),
            Algorithm::FastSim => (Kind::FastSim, Some(2 * log + 4), Some(2 * (2 * log + 4))),
            Algorithm::Fast => (Kind::Fast, Some(4 * log + 9), Some(2 * (4 * log + 9))),
            Algorithm::FastWithRelabeling { weight } => {
                let t = minimal_t(l, *weight)?;
                (
                    Kind::Relabeled { weight: *weight, t },
                    Some(4 * u64::from(t) + 5),
                    Some(2 * u64::from(*weight)),
                )
            }
            Algorithm::Doubling(_) => return Ok(None),
        };
        Ok(Some(Bounds {
            time_factor: time,
            cost_factor: cost,
            algorithm: kind,
            label_space: l,
        }))
    }

    pub fn time_limit(&self, e: u64) -> Option<u64> {
        self.time_factor.map(|f| f * e)
    }

    pub fn cost_limit(&self, e: u64) -> Option<u64> {
        self.cost_factor.map(|f| f * e)
    }

    /// Checks one run against the global bounds and the per-run ones that
    /// depend on the smaller label.
    pub fn check_run(&self, label_a: u64, label_b: u64, e: u64, time: u64, cost: u64) -> Result<(), String> {
        if let Some(limit) = self.time_limit(e) {
            if time > limit {
                return Err(format!("time {time} > {limit}"));
            }
        }
        if let Some(limit) = self.cost_limit(e) {
            if cost > limit {
                return Err(format!("cost {cost} > {limit}"));
            }
        }
        let l_min = label_a.min(label_b);
        match self.algorithm {
            Kind::CheapSim if time > l_min * e => Err(format!("time {time} > l_min*E = {}", l_min * e)),
            Kind::Cheap if time > (2 * l_min + 3) * e => {
                Err(format!("time {time} > (2*l_min+3)E = {}", (2 * l_min + 3) * e))
            }
            Kind::FastSim | Kind::Fast | Kind::Relabeled { .. } if cost > 2 * time => {
                Err(format!("cost {cost} > 2*time = {}", 2 * time))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.label_space;
        match self.algorithm {
            Kind::CheapSim => write!(f, "cost <= E, time <= l_min*E <= {l}E (simultaneous start)"),
            Kind::Cheap => write!(f, "cost <= 3E, time <= (2L+1)E = {}E, per run time <= (2*l_min+3)E", 2 * l + 1),
            Kind::FastSim => write!(
                f,
                "time <= (2*floor(log(L-1))+4)E = {}E (simultaneous start)",
                self.time_factor.unwrap_or(0)
            ),
            Kind::Fast => write!(
                f,
                "time <= (4*floor(log(L-1))+9)E = {}E, cost <= 2*time",
                self.time_factor.unwrap_or(0)
            ),
            Kind::Relabeled { weight, t } => write!(
                f,
                "cost <= 2wE = {}E, time <= (4t+5)E = {}E with w={weight}, t={t}",
                2 * weight,
                4 * t + 5
            ),
        }
    }
}
