//! Corruption strategies. Plans only ever look at the initial graph.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::protocols::{degree_order, select_participants};
use crate::rng::fraction_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Uniformly random node subset.
    RandomFailures,
    /// The highest-degree nodes, ties by smaller id.
    TargetedDegree,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::RandomFailures => "random",
            Strategy::TargetedDegree => "targeted",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" | "random-failures" => Ok(Strategy::RandomFailures),
            "targeted" | "targeted-degree" => Ok(Strategy::TargetedDegree),
            other => Err(Error::invalid(format!("unknown adversary {other:?}"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionSpec {
    pub strategy: Strategy,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionPlan {
    pub strategy: Strategy,
    pub fraction: f64,
    /// Sorted corrupted node ids.
    pub corrupted: Vec<NodeId>,
}

impl CorruptionPlan {
    /// `alive[v]` is true for honest nodes.
    pub fn honest_mask(&self, n: usize) -> Vec<bool> {
        let mut alive = vec![true; n];
        for v in &self.corrupted {
            alive[v.index()] = false;
        }
        alive
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if (0.0..=1.0).contains(&fraction) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "corruption fraction {fraction} outside [0, 1]"
        )))
    }
}

pub fn plan_random_failures<R: Rng + ?Sized>(
    g: &Graph,
    fraction: f64,
    rng: &mut R,
) -> Result<CorruptionPlan> {
    check_fraction(fraction)?;
    let nodes: Vec<NodeId> = g.nodes().collect();
    Ok(CorruptionPlan {
        strategy: Strategy::RandomFailures,
        fraction,
        corrupted: select_participants(&nodes, fraction, rng)?,
    })
}

pub fn plan_targeted(g: &Graph, fraction: f64) -> Result<CorruptionPlan> {
    check_fraction(fraction)?;
    let mut plan = plan_targeted_count(g, fraction_count(fraction, g.node_count()));
    plan.fraction = fraction;
    Ok(plan)
}

/// The `k` highest-degree nodes (k clamped to n).
pub fn plan_targeted_count(g: &Graph, k: usize) -> CorruptionPlan {
    let mut corrupted = degree_order(g);
    corrupted.truncate(k);
    corrupted.sort_unstable();
    CorruptionPlan {
        strategy: Strategy::TargetedDegree,
        fraction: if g.is_empty() {
            0.0
        } else {
            corrupted.len() as f64 / g.node_count() as f64
        },
        corrupted,
    }
}

pub fn plan<R: Rng + ?Sized>(
    g: &Graph,
    spec: CorruptionSpec,
    rng: &mut R,
) -> Result<CorruptionPlan> {
    match spec.strategy {
        Strategy::RandomFailures => plan_random_failures(g, spec.fraction, rng),
        Strategy::TargetedDegree => plan_targeted(g, spec.fraction),
    }
}
