//! The disconnection game: enrich, corrupt, measure.
//!
//! 1. Participants run the configured protocol on the initial graph, giving
//!    the protocol edge set `E_P`.
//! 2. The adversary's plan is computed from the initial graph alone and its
//!    nodes are removed together with every incident edge, original or added.
//! 3. The outcome is measured on the honest survivors: the fraction of them
//!    in the largest component (the graph's xi-strength), plus the same
//!    fraction restricted to honest participants and honest non-participants.
//!
//! Randomness for one game comes from three substreams of `seed`: stream 1
//! picks participants, stream 2 plans random failures and stream 3 keys the
//! protocol. A plan therefore never depends on the protocol or its edges,
//! and varying only the corruption fraction keeps the same enrichment.

use crate::adversary::{self, CorruptionPlan, CorruptionSpec};
use crate::components::{connected_components, AliveComponents};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::protocols::{self, EnrichmentResult, ProtocolConfig};
use crate::rng::substream;

const STREAM_PARTICIPANTS: u64 = 1;
const STREAM_CORRUPTION: u64 = 2;
const STREAM_PROTOCOL: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricsOver {
    All,
    Participants,
    NonParticipants,
}

impl MetricsOver {
    pub fn name(self) -> &'static str {
        match self {
            MetricsOver::All => "all",
            MetricsOver::Participants => "participants",
            MetricsOver::NonParticipants => "nonparticipants",
        }
    }
}

impl std::str::FromStr for MetricsOver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(MetricsOver::All),
            "participants" => Ok(MetricsOver::Participants),
            "nonparticipants" | "non-participants" => Ok(MetricsOver::NonParticipants),
            other => Err(Error::invalid(format!(
                "unknown metrics selection {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub protocol: ProtocolConfig,
    pub corruption: CorruptionSpec,
    pub seed: u64,
    /// Which population [`GameOutcome::primary`] reports.
    pub metrics_over: MetricsOver,
    /// Draw participants among honest nodes only. Off by default: the
    /// adversary's choice is independent of who participates.
    pub participants_among_honest: bool,
}

impl GameConfig {
    pub fn new(protocol: ProtocolConfig, corruption: CorruptionSpec, seed: u64) -> Self {
        GameConfig {
            protocol,
            corruption,
            seed,
            metrics_over: MetricsOver::All,
            participants_among_honest: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameOutcome {
    pub n: usize,
    pub corrupted: usize,
    pub honest: usize,
    pub honest_participants: usize,
    pub honest_nonparticipants: usize,
    /// Size of the largest honest component.
    pub lcc_size: usize,
    pub lcc_participants: usize,
    pub lcc_nonparticipants: usize,
    pub frac_all: f64,
    /// `None` when there are no honest participants.
    pub frac_participants: Option<f64>,
    pub frac_nonparticipants: Option<f64>,
    pub xi: f64,
    pub messages: u64,
    pub edges_added: usize,
    /// Protocol edges whose endpoints are both honest.
    pub edges_surviving: usize,
    /// Honest component sizes as `(size, count)`, ascending.
    pub component_histogram: Vec<(usize, usize)>,
}

impl GameOutcome {
    pub fn fraction(&self, over: MetricsOver) -> Option<f64> {
        match over {
            MetricsOver::All => Some(self.frac_all),
            MetricsOver::Participants => self.frac_participants,
            MetricsOver::NonParticipants => self.frac_nonparticipants,
        }
    }
}

/// Initial graph plus the outcome of the enrichment step, ready to be
/// attacked by any number of plans.
#[derive(Debug, Clone)]
pub struct EnrichedGraph<'g> {
    graph: &'g Graph,
    enrichment: EnrichmentResult,
    participant: Vec<bool>,
}

impl<'g> EnrichedGraph<'g> {
    /// Selects `round(q·n)` participants among all nodes and runs the protocol.
    pub fn prepare(graph: &'g Graph, protocol: &ProtocolConfig, seed: u64) -> Result<Self> {
        let nodes: Vec<NodeId> = graph.nodes().collect();
        let participants = protocols::select_participants(
            &nodes,
            protocol.q,
            &mut substream(seed, STREAM_PARTICIPANTS),
        )?;
        Self::with_participants(graph, protocol, participants, seed)
    }

    pub fn with_participants(
        graph: &'g Graph,
        protocol: &ProtocolConfig,
        participants: Vec<NodeId>,
        seed: u64,
    ) -> Result<Self> {
        let mut participant = vec![false; graph.node_count()];
        for &v in &participants {
            graph.check(v)?;
            participant[v.index()] = true;
        }
        let enrichment = protocols::enrich(
            graph,
            protocol,
            participants,
            &mut substream(seed, STREAM_PROTOCOL),
        )?;
        Ok(EnrichedGraph {
            graph,
            enrichment,
            participant,
        })
    }

    pub fn enrichment(&self) -> &EnrichmentResult {
        &self.enrichment
    }

    pub fn initial(&self) -> &Graph {
        self.graph
    }

    /// `G_P = (V, E ∪ E_P)` as a standalone graph.
    pub fn enriched_graph(&self) -> Graph {
        self.graph
            .with_edges(&self.enrichment.added_edges)
            .expect("protocol edges are in range")
    }

    pub fn is_participant(&self, v: NodeId) -> bool {
        self.participant[v.index()]
    }

    /// Removes the plan's nodes and measures the honest survivors.
    pub fn attack(&self, plan: &CorruptionPlan) -> Result<GameOutcome> {
        let n = self.graph.node_count();
        for &v in &plan.corrupted {
            self.graph.check(v)?;
        }
        let alive = plan.honest_mask(n);
        let mut comps = AliveComponents::compute(self.graph, &self.enrichment.added_edges, &alive);
        if comps.alive_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let (mut hp, mut hnp, mut lp, mut lnp) = (0, 0, 0, 0);
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let in_lcc = comps.in_largest(NodeId(v as u32));
            if self.participant[v] {
                hp += 1;
                lp += in_lcc as usize;
            } else {
                hnp += 1;
                lnp += in_lcc as usize;
            }
        }
        let honest = comps.alive_count;
        let frac_all = comps.largest_size as f64 / honest as f64;
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        let edges_surviving = self
            .enrichment
            .added_edges
            .iter()
            .filter(|(u, v)| alive[u.index()] && alive[v.index()])
            .count();
        Ok(GameOutcome {
            n,
            corrupted: n - honest,
            honest,
            honest_participants: hp,
            honest_nonparticipants: hnp,
            lcc_size: comps.largest_size,
            lcc_participants: lp,
            lcc_nonparticipants: lnp,
            frac_all,
            frac_participants: ratio(lp, hp),
            frac_nonparticipants: ratio(lnp, hnp),
            xi: frac_all,
            messages: self.enrichment.messages_sent,
            edges_added: self.enrichment.added_edges.len(),
            edges_surviving,
            component_histogram: std::mem::take(&mut comps.histogram),
        })
    }
}

/// The adversary's plan for a game seeded with `seed`. Depends only on the
/// initial graph, the corruption spec and the seed.
pub fn corruption_plan(g: &Graph, spec: CorruptionSpec, seed: u64) -> Result<CorruptionPlan> {
    adversary::plan(g, spec, &mut substream(seed, STREAM_CORRUPTION))
}

pub fn play_game(g: &Graph, cfg: &GameConfig) -> Result<GameOutcome> {
    cfg.protocol.validate()?;
    let plan = corruption_plan(g, cfg.corruption, cfg.seed)?;
    let enriched = if cfg.participants_among_honest {
        let alive = plan.honest_mask(g.node_count());
        let honest: Vec<NodeId> = g.nodes().filter(|v| alive[v.index()]).collect();
        let participants = protocols::select_participants(
            &honest,
            cfg.protocol.q,
            &mut substream(cfg.seed, STREAM_PARTICIPANTS),
        )?;
        EnrichedGraph::with_participants(g, &cfg.protocol, participants, cfg.seed)?
    } else {
        EnrichedGraph::prepare(g, &cfg.protocol, cfg.seed)?
    };
    enriched.attack(&plan)
}

/// Largest-component size over node count of an honest-induced subgraph.
pub fn xi_strength(g_honest: &Graph) -> Result<f64> {
    if g_honest.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(connected_components(g_honest).largest_size as f64 / g_honest.node_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Strategy;
    use crate::protocols::ProtocolKind;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b)))).unwrap()
    }

    fn no_attack() -> CorruptionSpec {
        CorruptionSpec {
            strategy: Strategy::RandomFailures,
            fraction: 0.0,
        }
    }

    #[test]
    fn identity_game() {
        let g = graph(6, &[(0, 1), (1, 2), (3, 4)]);
        let out = play_game(&g, &GameConfig::new(ProtocolConfig::none(), no_attack(), 1)).unwrap();
        assert_eq!(out.frac_all, 0.5);
        assert_eq!(out.xi, 0.5);
        assert_eq!(out.messages, 0);
        assert_eq!(out.component_histogram, vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_strength(&graph(3, &[(0, 1), (1, 2)])).unwrap(), 1.0);
        assert_eq!(xi_strength(&graph(5, &[(0, 1), (2, 3)])).unwrap(), 0.4);
        assert!(matches!(
            xi_strength(&Graph::new(0)),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn star_center_attack_disconnects_leaves() {
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let cfg = GameConfig::new(
            ProtocolConfig::none(),
            CorruptionSpec {
                strategy: Strategy::TargetedDegree,
                fraction: 0.2,
            },
            0,
        );
        let out = play_game(&g, &cfg).unwrap();
        assert_eq!(out.honest, 4);
        assert_eq!(out.frac_all, 0.25);
    }

    #[test]
    fn everything_corrupted_is_an_error() {
        let g = graph(3, &[(0, 1)]);
        let cfg = GameConfig::new(
            ProtocolConfig::none(),
            CorruptionSpec {
                strategy: Strategy::RandomFailures,
                fraction: 1.0,
            },
            0,
        );
        assert!(matches!(play_game(&g, &cfg), Err(Error::EmptyGraph)));
    }

    #[test]
    fn participation_counts_partition_honest() {
        let mut rng = crate::rng::rng_from_seed(3);
        let g = crate::generate::generate_ba(
            crate::generate::BaSpec {
                n: 400,
                m_attach: 2,
                seed_size: 3,
            },
            &mut rng,
        )
        .unwrap();
        let mut cfg = GameConfig::new(
            ProtocolConfig {
                kind: ProtocolKind::A3f,
                m: 3,
                q: 0.3,
                fat_count: None,
            },
            CorruptionSpec {
                strategy: Strategy::TargetedDegree,
                fraction: 0.1,
            },
            9,
        );
        for among_honest in [false, true] {
            cfg.participants_among_honest = among_honest;
            let out = play_game(&g, &cfg).unwrap();
            assert_eq!(
                out.honest,
                out.honest_participants + out.honest_nonparticipants
            );
            assert_eq!(out.lcc_size, out.lcc_participants + out.lcc_nonparticipants);
            assert_eq!(out.honest, 360);
            if among_honest {
                assert_eq!(out.honest_participants, 108);
            }
        }
    }
}
