//! Synthetic instances with a planted fat set.
//!
//! Vertices are split into three blocks:
//!
//! * `W`: `⌈C ln n⌉` fat nodes with degrees in `[a n / ln n, b n / ln n]`,
//! * `N_W`: the nodes adjacent to `W` (each has at least one fat neighbor),
//! * `V_α`: `round(α n)` nodes with no edges at all.
//!
//! Fat nodes only connect to `N_W`, and `N_W` has no internal edges, so the
//! graph without `W` is completely disconnected. This is the hardest wiring
//! for the connectivity claims: every honest edge after removing `W` comes
//! from the protocol.
//!
//! Ids are laid out as `W = [0, |W|)`, then `N_W`, then `V_α`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::adversary::{CorruptionPlan, Strategy};
use crate::error::{Error, Result};
use crate::game::{EnrichedGraph, GameOutcome};
use crate::graph::{Graph, NodeId};
use crate::protocols::{self, ProtocolConfig, ProtocolKind};
use crate::rng::{fraction_count, substream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremInstanceSpec {
    pub n: usize,
    /// Fat-set constant: `|W| = ⌈C ln n⌉`.
    pub c: f64,
    /// Lower degree-band constant.
    pub a: f64,
    /// Upper degree-band constant.
    pub b: f64,
    /// `|V_α| = round(α n)`.
    pub alpha: f64,
    /// Participating fraction of `V_α`.
    pub beta: f64,
    /// Participating fraction of `N_W`.
    pub gamma: f64,
}

/// Block sizes and degree band implied by a spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremLayout {
    pub fat: usize,
    pub neighborhood: usize,
    pub isolated: usize,
    pub degree_min: usize,
    pub degree_max: usize,
}

impl TheoremInstanceSpec {
    pub fn ln_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// Protocol rounds per participant: `⌈ln n⌉`.
    pub fn rounds(&self) -> u32 {
        self.ln_n().ceil() as u32
    }

    /// `C a < 1 − α`.
    pub fn lower_condition(&self) -> bool {
        self.c * self.a < 1.0 - self.alpha
    }

    /// `C b > γ (1 − α)`.
    pub fn upper_condition(&self) -> bool {
        self.c * self.b > self.gamma * (1.0 - self.alpha)
    }

    pub fn full_participation(&self) -> bool {
        self.beta == 1.0 && self.gamma == 1.0
    }

    /// Guaranteed strength `1 − (1 − β) α`; 1 under full participation.
    pub fn xi_bound(&self) -> f64 {
        1.0 - (1.0 - self.beta) * self.alpha
    }

    pub fn layout(&self) -> Result<TheoremLayout> {
        let bad = |m: String| Err(Error::invalid(m));
        if self.n < 3 {
            return bad(format!("n = {} too small (need ln n > 1)", self.n));
        }
        if self.n > u32::MAX as usize {
            return bad("n exceeds u32 id space".into());
        }
        if !(self.c > 0.0) {
            return bad(format!("C = {} must be positive", self.c));
        }
        if !(self.a > 0.0 && self.a <= self.b) {
            return bad(format!(
                "need 0 < a <= b, got a = {}, b = {}",
                self.a, self.b
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} outside (0, 1)", self.alpha));
        }
        for (name, v) in [("beta", self.beta), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} outside [0, 1]"));
            }
        }
        let ln_n = self.ln_n();
        let n = self.n as f64;
        let fat = (self.c * ln_n).ceil() as usize;
        let isolated = fraction_count(self.alpha, self.n);
        if fat + isolated >= self.n {
            return bad(format!(
                "no room for N_W: |W| = {fat}, |V_alpha| = {isolated}, n = {}",
                self.n
            ));
        }
        let neighborhood = self.n - fat - isolated;
        let degree_min = (self.a * n / ln_n).ceil() as usize;
        let degree_max = ((self.b * n / ln_n).floor() as usize).min(neighborhood);
        if degree_min < 1 || degree_min > degree_max {
            return bad(format!(
                "empty degree band [{degree_min}, {degree_max}] (|N_W| = {neighborhood})"
            ));
        }
        if fat * degree_max < neighborhood {
            return bad(format!(
                "infeasible: {fat} fat nodes of degree <= {degree_max} cannot cover |N_W| = {neighborhood}"
            ));
        }
        Ok(TheoremLayout {
            fat,
            neighborhood,
            isolated,
            degree_min,
            degree_max,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TheoremInstance {
    pub spec: TheoremInstanceSpec,
    pub layout: TheoremLayout,
    pub graph: Graph,
    pub fat: Vec<NodeId>,
    pub neighborhood: Vec<NodeId>,
    pub isolated: Vec<NodeId>,
    /// Sorted participant ids.
    pub participants: Vec<NodeId>,
}

fn block(start: usize, len: usize) -> Vec<NodeId> {
    (start as u32..(start + len) as u32).map(NodeId).collect()
}

pub fn build_theorem_instance<R: Rng + ?Sized>(
    spec: TheoremInstanceSpec,
    rng: &mut R,
) -> Result<TheoremInstance> {
    let layout = spec.layout()?;
    let fat = block(0, layout.fat);
    let neighborhood = block(layout.fat, layout.neighborhood);
    let isolated = block(layout.fat + layout.neighborhood, layout.isolated);

    let mut degree: Vec<usize> = (0..layout.fat)
        .map(|_| rng.gen_range(layout.degree_min as u32..=layout.degree_max as u32) as usize)
        .collect();
    // Top up so the stubs can cover N_W, staying inside the band.
    let mut deficit = layout.neighborhood.saturating_sub(degree.iter().sum());
    if deficit > 0 {
        let mut order: Vec<usize> = (0..layout.fat).collect();
        order.shuffle(rng);
        for i in order {
            let raise = (layout.degree_max - degree[i]).min(deficit);
            degree[i] += raise;
            deficit -= raise;
        }
    }
    debug_assert_eq!(deficit, 0);

    let mut stubs: Vec<usize> = degree
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat_n(i, d))
        .collect();
    stubs.shuffle(rng);

    let mut adjacent: Vec<Vec<bool>> = vec![vec![false; layout.neighborhood]; layout.fat];
    let mut edges = Vec::with_capacity(stubs.len());
    let (cover, rest) = stubs.split_at(layout.neighborhood);
    for (j, &i) in cover.iter().enumerate() {
        adjacent[i][j] = true;
        edges.push((fat[i], neighborhood[j]));
    }
    for &i in rest {
        loop {
            let j = rng.gen_range(0..layout.neighborhood as u32) as usize;
            if !adjacent[i][j] {
                adjacent[i][j] = true;
                edges.push((fat[i], neighborhood[j]));
                break;
            }
        }
    }
    let graph = Graph::from_edges(spec.n, edges)?;

    let participants = if spec.full_participation() {
        graph.nodes().collect()
    } else {
        let mut p = protocols::select_participants(&neighborhood, spec.gamma, rng)?;
        p.extend(protocols::select_participants(&isolated, spec.beta, rng)?);
        p.sort_unstable();
        p
    };

    Ok(TheoremInstance {
        spec,
        layout,
        graph,
        fat,
        neighborhood,
        isolated,
        participants,
    })
}

impl TheoremInstance {
    /// `⌈ln n⌉`-A3F with fat list `W`, run by the instance's participants.
    pub fn enrich(&self, seed: u64) -> Result<EnrichedGraph<'_>> {
        let protocol = ProtocolConfig {
            kind: ProtocolKind::A3f,
            m: self.spec.rounds(),
            q: 1.0,
            fat_count: Some(self.fat.len()),
        };
        EnrichedGraph::with_participants(&self.graph, &protocol, self.participants.clone(), seed)
    }

    /// Corrupting exactly `W`. Whenever fat degrees exceed `|W|` this is also
    /// the top-`|W|` degree attack.
    pub fn fat_plan(&self) -> CorruptionPlan {
        CorruptionPlan {
            strategy: Strategy::TargetedDegree,
            fraction: self.fat.len() as f64 / self.spec.n as f64,
            corrupted: self.fat.clone(),
        }
    }

    /// Enriches, then corrupts exactly `W`.
    pub fn play(&self, seed: u64) -> Result<GameOutcome> {
        self.enrich(seed)?.attack(&self.fat_plan())
    }
}

/// Convenience: instance built from substream 0 of `seed`, game keyed by `seed`.
pub fn theorem_trial(
    spec: TheoremInstanceSpec,
    seed: u64,
) -> Result<(TheoremInstance, GameOutcome)> {
    let inst = build_theorem_instance(spec, &mut substream(seed, 0))?;
    let out = inst.play(seed)?;
    Ok((inst, out))
}
