//! Local enrichment protocols.
//!
//! Both protocols are one-shot: every walk or query reads the adjacency of
//! the graph as it was before the protocol started, so the result does not
//! depend on the order in which participants act. Each participant draws
//! from its own ChaCha substream (stream number = node id) keyed by a single
//! `u64` taken from the caller's generator, which lets the rounds run in
//! parallel while staying identical to a sequential execution.
//!
//! A candidate edge `{v, u}` is dropped when `u == v`, when `u` is already a
//! neighbor of `v` in the original graph, or when it duplicates another
//! candidate. Dropped candidates are not retried but still cost their two
//! messages (query and reply).

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{fraction_count, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    None,
    /// m-Two Steps Friend Finder: length-2 random walks.
    TwoSff,
    /// m-Ask Fat For a Friend: queries to the common fat-node list.
    A3f,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::None => "none",
            ProtocolKind::TwoSff => "2sff",
            ProtocolKind::A3f => "a3f",
        }
    }
}

impl std::str::FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(ProtocolKind::None),
            "2sff" | "twosff" => Ok(ProtocolKind::TwoSff),
            "a3f" => Ok(ProtocolKind::A3f),
            other => Err(Error::invalid(format!("unknown protocol {other:?}"))),
        }
    }
}

impl std::fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    /// Walks (2SFF) or queries (A3F) per participant.
    pub m: u32,
    /// Participation fraction.
    pub q: f64,
    /// Size of the fat-node list; `None` means [`default_fat_count`].
    pub fat_count: Option<usize>,
}

impl ProtocolConfig {
    pub fn none() -> Self {
        ProtocolConfig {
            kind: ProtocolKind::None,
            m: 0,
            q: 1.0,
            fat_count: None,
        }
    }

    pub fn two_sff(m: u32, q: f64) -> Self {
        ProtocolConfig {
            kind: ProtocolKind::TwoSff,
            m,
            q,
            fat_count: None,
        }
    }

    pub fn a3f(m: u32, q: f64) -> Self {
        ProtocolConfig {
            kind: ProtocolKind::A3f,
            m,
            q,
            fat_count: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::invalid(format!("q = {} outside [0, 1]", self.q)));
        }
        if self.kind == ProtocolKind::A3f && self.fat_count == Some(0) {
            return Err(Error::invalid("A3F needs a fat list of at least one node"));
        }
        Ok(())
    }

    /// Fat-list size this config resolves to on a graph with `n` nodes.
    pub fn resolved_fat_count(&self, n: usize) -> usize {
        self.fat_count
            .unwrap_or_else(|| default_fat_count(n))
            .min(n)
    }
}

/// `⌊log₂ n⌋`, at least 1. For n = 75 879 this is 16.
pub fn default_fat_count(n: usize) -> usize {
    if n < 2 {
        1
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnrichmentResult {
    /// New edges `(u, v)` with `u < v`, sorted, none present in the input graph.
    pub added_edges: Vec<(NodeId, NodeId)>,
    pub messages_sent: u64,
    /// Sorted participant ids.
    pub participants: Vec<NodeId>,
    /// 2SFF participants with no neighbors; they perform no walks.
    pub idle_participants: usize,
    /// Rounds that produced no new edge (self, existing neighbor, duplicate,
    /// or a fat node with no neighbors).
    pub rejected_candidates: u64,
}

impl EnrichmentResult {
    pub fn empty(participants: Vec<NodeId>) -> Self {
        EnrichmentResult {
            participants,
            ..Default::default()
        }
    }
}

/// Uniform subset of `nodes` of size `round(q · |nodes|)`, returned sorted.
pub fn select_participants<R: Rng + ?Sized>(
    nodes: &[NodeId],
    q: f64,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("q = {q} outside [0, 1]")));
    }
    let k = fraction_count(q, nodes.len());
    let mut pool = nodes.to_vec();
    if k < pool.len() {
        pool.partial_shuffle(rng, k);
        pool.truncate(k);
    }
    pool.sort_unstable();
    Ok(pool)
}

/// The `fat_count` highest-degree nodes, ordered by degree descending then
/// id ascending.
pub fn select_fat_nodes(g: &Graph, fat_count: usize) -> Result<Vec<NodeId>> {
    if fat_count > g.node_count() {
        return Err(Error::invalid(format!(
            "fat_count {fat_count} exceeds node count {}",
            g.node_count()
        )));
    }
    let mut order = degree_order(g);
    order.truncate(fat_count);
    Ok(order)
}

/// All nodes sorted by (degree desc, id asc).
pub fn degree_order(g: &Graph) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

fn check_participants(g: &Graph, participants: &[NodeId]) -> Result<()> {
    for &v in participants {
        g.check(v)?;
    }
    Ok(())
}

#[inline]
fn pick(rng: &mut SimRng, list: &[NodeId]) -> NodeId {
    list[rng.gen_range(0..list.len() as u32) as usize]
}

struct Rounds {
    candidates: Vec<(NodeId, NodeId)>,
    rejected: u64,
}

/// Runs `round` for every participant on its own substream and merges the
/// candidates into a deduplicated edge set.
fn run_rounds<F>(
    g: &Graph,
    participants: &[NodeId],
    m: u32,
    key: u64,
    round: F,
) -> (Vec<(NodeId, NodeId)>, u64)
where
    F: Fn(NodeId, &mut SimRng) -> Option<NodeId> + Sync,
{
    use rand::SeedableRng;
    let base = SimRng::seed_from_u64(key);
    let per_node: Vec<Rounds> = participants
        .par_iter()
        .map(|&v| {
            let mut rng = base.clone();
            rng.set_stream(v.0 as u64);
            let mut out = Rounds {
                candidates: Vec::new(),
                rejected: 0,
            };
            for _ in 0..m {
                match round(v, &mut rng) {
                    Some(u) if u != v && !g.has_edge(v, u) => {
                        out.candidates.push(if v < u { (v, u) } else { (u, v) })
                    }
                    _ => out.rejected += 1,
                }
            }
            out
        })
        .collect();
    let mut edges = Vec::new();
    let mut rejected = 0;
    for r in per_node {
        rejected += r.rejected;
        edges.extend(r.candidates);
    }
    let before = edges.len();
    edges.par_sort_unstable();
    edges.dedup();
    rejected += (before - edges.len()) as u64;
    (edges, rejected)
}

/// m-2SFF: each participant `v` takes `m` walks `v → w → u` with `w` uniform
/// over `N(v)` and `u` uniform over `N(w)`, proposing `{v, u}`.
pub fn run_2sff<R: RngCore + ?Sized>(
    g: &Graph,
    participants: &[NodeId],
    m: u32,
    rng: &mut R,
) -> Result<EnrichmentResult> {
    check_participants(g, participants)?;
    let key = rng.next_u64();
    let active: Vec<NodeId> = participants
        .iter()
        .copied()
        .filter(|&v| g.degree(v) > 0)
        .collect();
    let idle = participants.len() - active.len();
    if m == 0 {
        return Ok(EnrichmentResult {
            idle_participants: idle,
            ..EnrichmentResult::empty(participants.to_vec())
        });
    }
    let (added_edges, rejected) = run_rounds(g, &active, m, key, |v, rng| {
        let w = pick(rng, g.neighbors(v));
        // w has v as a neighbor, so N(w) is never empty
        Some(pick(rng, g.neighbors(w)))
    });
    Ok(EnrichmentResult {
        added_edges,
        messages_sent: 2 * m as u64 * active.len() as u64,
        participants: participants.to_vec(),
        idle_participants: idle,
        rejected_candidates: rejected,
    })
}

/// m-A3F: each participant sends `m` queries, each to a fat node drawn
/// uniformly from `fat_list`, which answers with a uniform neighbor `u`; the
/// participant proposes `{v, u}`. A fat node with no neighbors wastes the
/// query. Fat nodes that are participants act like any other participant.
pub fn run_a3f<R: RngCore + ?Sized>(
    g: &Graph,
    participants: &[NodeId],
    fat_list: &[NodeId],
    m: u32,
    rng: &mut R,
) -> Result<EnrichmentResult> {
    check_participants(g, participants)?;
    if fat_list.is_empty() {
        return Err(Error::invalid("fat list is empty"));
    }
    for &w in fat_list {
        g.check(w)?;
    }
    let key = rng.next_u64();
    if m == 0 {
        return Ok(EnrichmentResult::empty(participants.to_vec()));
    }
    let (added_edges, rejected) = run_rounds(g, participants, m, key, |_, rng| {
        let w = pick(rng, fat_list);
        let nbrs = g.neighbors(w);
        (!nbrs.is_empty()).then(|| pick(rng, nbrs))
    });
    Ok(EnrichmentResult {
        added_edges,
        messages_sent: 2 * m as u64 * participants.len() as u64,
        participants: participants.to_vec(),
        idle_participants: 0,
        rejected_candidates: rejected,
    })
}

/// Runs the configured protocol for an already chosen participant set.
pub fn enrich<R: RngCore + ?Sized>(
    g: &Graph,
    cfg: &ProtocolConfig,
    participants: Vec<NodeId>,
    rng: &mut R,
) -> Result<EnrichmentResult> {
    cfg.validate()?;
    match cfg.kind {
        ProtocolKind::None => Ok(EnrichmentResult::empty(participants)),
        ProtocolKind::TwoSff => run_2sff(g, &participants, cfg.m, rng),
        ProtocolKind::A3f => {
            let fat = select_fat_nodes(g, cfg.resolved_fat_count(g.node_count()))?;
            run_a3f(g, &participants, &fat, cfg.m, rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b)))).unwrap()
    }

    fn star() -> Graph {
        graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    fn all(g: &Graph) -> Vec<NodeId> {
        g.nodes().collect()
    }

    #[test]
    fn participants_rounding() {
        let nodes: Vec<NodeId> = (0..10).map(NodeId).collect();
        let mut rng = rng_from_seed(1);
        assert_eq!(select_participants(&nodes, 1.0, &mut rng).unwrap(), nodes);
        assert!(select_participants(&nodes, 0.0, &mut rng)
            .unwrap()
            .is_empty());
        let big: Vec<NodeId> = (0..75_879).map(NodeId).collect();
        let half = select_participants(&big, 0.5, &mut rng).unwrap();
        assert_eq!(half.len(), 37_940);
        assert!(half.windows(2).all(|w| w[0] < w[1]));
        assert!(select_participants(&nodes, 1.5, &mut rng).is_err());
    }

    #[test]
    fn m_zero_is_identity() {
        let g = star();
        let r = run_2sff(&g, &all(&g), 0, &mut rng_from_seed(0)).unwrap();
        assert!(r.added_edges.is_empty());
        assert_eq!(r.messages_sent, 0);
        let r = run_a3f(&g, &all(&g), &[NodeId(0)], 0, &mut rng_from_seed(0)).unwrap();
        assert!(r.added_edges.is_empty());
        assert_eq!(r.messages_sent, 0);
    }

    #[test]
    fn triangle_never_gains_edges() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        for seed in 0..50 {
            let r = run_2sff(&g, &all(&g), 3, &mut rng_from_seed(seed)).unwrap();
            assert!(r.added_edges.is_empty());
            assert_eq!(r.messages_sent, 2 * 3 * 3);
        }
    }

    #[test]
    fn star_leaf_walk_frequency() {
        // leaf 1 -> center -> uniform over {1,2,3,4}: new edge w.p. 3/4
        let g = star();
        let trials = 20_000;
        let mut hits = 0;
        let mut rng = rng_from_seed(11);
        for _ in 0..trials {
            let r = run_2sff(&g, &[NodeId(1)], 1, &mut rng).unwrap();
            assert!(r.added_edges.len() <= 1);
            hits += r.added_edges.len();
        }
        let p = hits as f64 / trials as f64;
        // 5 sigma of Binomial(20000, 0.75)
        assert!(
            (p - 0.75).abs() < 5.0 * (0.75f64 * 0.25 / trials as f64).sqrt(),
            "{p}"
        );
    }

    #[test]
    fn star_leaf_a3f_frequency() {
        let g = star();
        let trials = 20_000;
        let mut hits = 0;
        let mut rng = rng_from_seed(12);
        for _ in 0..trials {
            let r = run_a3f(&g, &[NodeId(1)], &[NodeId(0)], 1, &mut rng).unwrap();
            hits += r.added_edges.len();
        }
        let p = hits as f64 / trials as f64;
        assert!(
            (p - 0.75).abs() < 5.0 * (0.75f64 * 0.25 / trials as f64).sqrt(),
            "{p}"
        );
    }

    #[test]
    fn isolated_participants_idle() {
        let g = graph(4, &[(0, 1), (1, 2)]);
        let r = run_2sff(&g, &all(&g), 4, &mut rng_from_seed(2)).unwrap();
        assert_eq!(r.idle_participants, 1);
        assert_eq!(r.messages_sent, 2 * 4 * 3);
    }

    #[test]
    fn a3f_with_isolated_fat_node_wastes_queries() {
        let g = graph(4, &[(0, 1), (1, 2)]);
        let r = run_a3f(&g, &all(&g), &[NodeId(3)], 2, &mut rng_from_seed(2)).unwrap();
        assert!(r.added_edges.is_empty());
        assert_eq!(r.rejected_candidates, 8);
        assert_eq!(r.messages_sent, 16);
    }

    #[test]
    fn fat_selection_ties_by_id() {
        assert_eq!(select_fat_nodes(&star(), 1).unwrap(), vec![NodeId(0)]);
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(
            select_fat_nodes(&c4, 2).unwrap(),
            vec![NodeId(0), NodeId(1)]
        );
        assert!(select_fat_nodes(&c4, 5).is_err());
    }

    #[test]
    fn default_fat_count_is_floor_log2() {
        assert_eq!(default_fat_count(75_879), 16);
        assert_eq!(default_fat_count(1024), 10);
        assert_eq!(default_fat_count(1023), 9);
        assert_eq!(default_fat_count(1), 1);
    }

    #[test]
    fn added_edges_are_new_sorted_unique() {
        let mut rng = rng_from_seed(4);
        let g = crate::generate::generate_ba(
            crate::generate::BaSpec {
                n: 500,
                m_attach: 2,
                seed_size: 3,
            },
            &mut rng,
        )
        .unwrap();
        for r in [
            run_2sff(&g, &all(&g), 5, &mut rng).unwrap(),
            run_a3f(&g, &all(&g), &select_fat_nodes(&g, 8).unwrap(), 5, &mut rng).unwrap(),
        ] {
            assert!(r.added_edges.windows(2).all(|w| w[0] < w[1]));
            assert!(r
                .added_edges
                .iter()
                .all(|&(u, v)| u < v && !g.has_edge(u, v)));
        }
    }

    #[test]
    fn parse_kind() {
        assert_eq!(
            "2SFF".parse::<ProtocolKind>().unwrap(),
            ProtocolKind::TwoSff
        );
        assert_eq!("a3f".parse::<ProtocolKind>().unwrap(), ProtocolKind::A3f);
        assert!("3sff".parse::<ProtocolKind>().is_err());
    }
}
