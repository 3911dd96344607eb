//! Undirected simple graph over dense node ids.

use std::fmt;

use crate::error::{Error, Result};

/// Dense node index in `[0, n)` of the owning graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Adjacency-list graph. Every list is sorted and free of duplicates and
/// self-loops; `u` appears in `v`'s list iff `v` appears in `u`'s.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

/// Induced subgraph produced by [`Graph::remove_nodes`].
///
/// Node `i` of `graph` is `original[i]` in the parent graph. Survivors keep
/// their relative order, so the mapping is monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub original: Vec<NodeId>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "node count exceeds u32 id space");
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a simple graph from an arbitrary edge list. Self-loops and
    /// repeated pairs (in either orientation) are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u != v {
                g.adjacency[u.index()].push(v);
                g.adjacency[v.index()].push(u);
            }
        }
        g.normalize();
        Ok(g)
    }

    fn normalize(&mut self) {
        let mut total = 0;
        for list in &mut self.adjacency {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        self.edge_count = total / 2;
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.adjacency.len() as u32).map(NodeId)
    }

    /// Sorted neighbor list of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = NodeId(u as u32);
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// `(node, degree)` for every node, in id order.
    pub fn degrees(&self) -> Vec<(NodeId, usize)> {
        self.nodes().map(|v| (v, self.degree(v))).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn check(&self, v: NodeId) -> Result<()> {
        if v.index() < self.adjacency.len() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: v,
                n: self.adjacency.len(),
            })
        }
    }

    /// Inserts `{u, v}`. Returns `false` and leaves the graph untouched for
    /// self-loops and edges that already exist.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(false);
        }
        let pos_u = match self.adjacency[u.index()].binary_search(&v) {
            Ok(_) => return Ok(false),
            Err(p) => p,
        };
        let pos_v = self.adjacency[v.index()]
            .binary_search(&u)
            .expect_err("adjacency lists out of sync");
        self.adjacency[u.index()].insert(pos_u, v);
        self.adjacency[v.index()].insert(pos_v, u);
        self.edge_count += 1;
        Ok(true)
    }

    /// Copy of this graph with `extra` edges merged in (rejected the same way
    /// as [`Graph::add_edge`]).
    pub fn with_edges(&self, extra: &[(NodeId, NodeId)]) -> Result<Graph> {
        let mut g = self.clone();
        for &(u, v) in extra {
            g.check(u)?;
            g.check(v)?;
            if u != v {
                g.adjacency[u.index()].push(v);
                g.adjacency[v.index()].push(u);
            }
        }
        g.normalize();
        Ok(g)
    }

    /// Induced subgraph on the nodes not in `removed`. Duplicate entries in
    /// `removed` are fine.
    pub fn remove_nodes(&self, removed: &[NodeId]) -> Result<Subgraph> {
        let n = self.node_count();
        let mut gone = vec![false; n];
        for &v in removed {
            self.check(v)?;
            gone[v.index()] = true;
        }
        let mut new_id = vec![u32::MAX; n];
        let mut original = Vec::with_capacity(n);
        for v in 0..n {
            if !gone[v] {
                new_id[v] = original.len() as u32;
                original.push(NodeId(v as u32));
            }
        }
        let mut adjacency = Vec::with_capacity(original.len());
        let mut degree_sum = 0;
        for &v in &original {
            // Old ids are sorted and the remap is monotone, so lists stay sorted.
            let list: Vec<NodeId> = self.adjacency[v.index()]
                .iter()
                .filter(|w| !gone[w.index()])
                .map(|w| NodeId(new_id[w.index()]))
                .collect();
            degree_sum += list.len();
            adjacency.push(list);
        }
        Ok(Subgraph {
            graph: Graph {
                adjacency,
                edge_count: degree_sum / 2,
            },
            original,
        })
    }

    /// Checks the structural invariants. Used by tests and debug assertions.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut total = 0;
        for (v, list) in self.adjacency.iter().enumerate() {
            total += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("adjacency of {v} not strictly sorted"));
                }
            }
            for &u in list {
                if u.index() == v {
                    return Err(format!("self-loop at {v}"));
                }
                if u.index() >= self.adjacency.len() {
                    return Err(format!("neighbor {u} of {v} out of range"));
                }
                if self.adjacency[u.index()]
                    .binary_search(&NodeId(v as u32))
                    .is_err()
                {
                    return Err(format!("edge {v}-{u} not symmetric"));
                }
            }
        }
        if total != 2 * self.edge_count {
            return Err(format!(
                "edge_count {} but degree sum {}",
                self.edge_count, total
            ));
        }
        Ok(())
    }
}
