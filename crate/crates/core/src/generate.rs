//! Synthetic graph generators.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Preferential-attachment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaSpec {
    pub n: usize,
    /// Edges brought by each arriving node.
    pub m_attach: usize,
    /// Size of the initial clique.
    pub seed_size: usize,
}

impl BaSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m_attach < 1 {
            return Err(Error::invalid("m_attach must be at least 1"));
        }
        if self.seed_size < self.m_attach {
            return Err(Error::invalid(format!(
                "seed_size {} smaller than m_attach {}",
                self.seed_size, self.m_attach
            )));
        }
        if self.n < self.seed_size {
            return Err(Error::invalid(format!(
                "n {} smaller than seed_size {}",
                self.n, self.seed_size
            )));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::invalid("n exceeds u32 id space"));
        }
        Ok(())
    }

    /// Number of edges every generated graph has.
    pub fn expected_edges(&self) -> usize {
        self.seed_size * (self.seed_size - 1) / 2 + (self.n - self.seed_size) * self.m_attach
    }
}

/// Barabási–Albert style growth.
///
/// Starts from a clique on `seed_size` nodes. Each later node picks
/// `m_attach` distinct existing targets by drawing uniformly from the list of
/// all edge endpoints so far (so proportional to degree), redrawing on a
/// repeat. When the endpoint list is empty (single-node seed) the target is
/// uniform over existing nodes.
pub fn generate_ba<R: Rng + ?Sized>(spec: BaSpec, rng: &mut R) -> Result<Graph> {
    spec.validate()?;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(spec.expected_edges());
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * spec.expected_edges());
    for u in 0..spec.seed_size as u32 {
        for v in u + 1..spec.seed_size as u32 {
            edges.push((NodeId(u), NodeId(v)));
            endpoints.push(NodeId(u));
            endpoints.push(NodeId(v));
        }
    }
    let mut chosen: Vec<NodeId> = Vec::with_capacity(spec.m_attach);
    for v in spec.seed_size as u32..spec.n as u32 {
        chosen.clear();
        while chosen.len() < spec.m_attach {
            let t = if endpoints.is_empty() {
                NodeId(rng.gen_range(0..v))
            } else {
                endpoints[rng.gen_range(0..endpoints.len() as u32) as usize]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, NodeId(v)));
            endpoints.push(t);
            endpoints.push(NodeId(v));
        }
    }
    Graph::from_edges(spec.n, edges)
}

/// Uniform random graph with exactly `m` edges (Erdős–Rényi `G(n, M)`).
pub fn generate_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max {
        return Err(Error::invalid(format!("{m} edges do not fit in {n} nodes")));
    }
    let mut g = Graph::new(n);
    while g.edge_count() < m {
        let u = NodeId(rng.gen_range(0..n as u32));
        let v = NodeId(rng.gen_range(0..n as u32));
        g.add_edge(u, v)?;
    }
    Ok(g)
}
