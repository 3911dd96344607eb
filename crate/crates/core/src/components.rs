//! Connected components.
//!
//! Labels are canonical: every node is labelled with the smallest id in its
//! component. When several components share the maximum size, "the" largest
//! component is the one with the smallest label.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub fn set_size(&mut self, x: u32) -> usize {
        let r = self.find(x);
        self.size[r as usize] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    /// Per node: smallest node id of its component.
    pub label: Vec<NodeId>,
    /// Component sizes ordered by ascending label.
    pub component_sizes: Vec<usize>,
    pub largest_size: usize,
    /// Label of the largest component (smallest label among ties).
    pub largest_label: Option<NodeId>,
}

impl ComponentLabeling {
    fn from_labels(label: Vec<NodeId>) -> Self {
        let n = label.len();
        // label[v] <= v, and label[l] == l for every label l.
        let mut size_by_label = vec![0usize; n];
        for l in &label {
            size_by_label[l.index()] += 1;
        }
        let mut component_sizes = Vec::new();
        let mut largest_size = 0;
        let mut largest_label = None;
        for (v, &s) in size_by_label.iter().enumerate() {
            if s > 0 {
                component_sizes.push(s);
                if s > largest_size {
                    largest_size = s;
                    largest_label = Some(NodeId(v as u32));
                }
            }
        }
        ComponentLabeling {
            label,
            component_sizes,
            largest_size,
            largest_label,
        }
    }

    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn in_largest(&self, v: NodeId) -> bool {
        Some(self.label[v.index()]) == self.largest_label
    }

    pub fn same_component(&self, u: NodeId, v: NodeId) -> bool {
        self.label[u.index()] == self.label[v.index()]
    }

    /// `(size, count)` pairs in ascending size order.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        size_histogram(self.component_sizes.iter().copied())
    }
}

pub(crate) fn size_histogram(sizes: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut sizes: Vec<usize> = sizes.collect();
    sizes.sort_unstable();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for s in sizes {
        match out.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

/// Union-find component labeling.
pub fn connected_components(g: &Graph) -> ComponentLabeling {
    let n = g.node_count();
    let mut uf = UnionFind::new(n);
    for (u, v) in g.edges() {
        uf.union(u.0, v.0);
    }
    let mut root_label = vec![u32::MAX; n];
    let mut label = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let r = uf.find(v) as usize;
        if root_label[r] == u32::MAX {
            root_label[r] = v;
        }
        label.push(NodeId(root_label[r]));
    }
    ComponentLabeling::from_labels(label)
}

/// Breadth-first labeling. Slower than [`connected_components`]; kept as an
/// independent cross-check.
pub fn connected_components_bfs(g: &Graph) -> ComponentLabeling {
    let n = g.node_count();
    let mut label: Vec<Option<NodeId>> = vec![None; n];
    let mut queue = VecDeque::new();
    for s in g.nodes() {
        if label[s.index()].is_some() {
            continue;
        }
        label[s.index()] = Some(s);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if label[w.index()].is_none() {
                    label[w.index()] = Some(s);
                    queue.push_back(w);
                }
            }
        }
    }
    ComponentLabeling::from_labels(label.into_iter().map(Option::unwrap).collect())
}

/// `|largest ∩ over| / |over|`, where the largest component is taken over
/// the whole graph. `None` means every node.
pub fn largest_component_fraction(g: &Graph, over: Option<&[NodeId]>) -> Result<f64> {
    let comps = connected_components(g);
    match over {
        None => {
            if g.is_empty() {
                return Err(Error::EmptyGraph);
            }
            Ok(comps.largest_size as f64 / g.node_count() as f64)
        }
        Some([]) => Err(Error::invalid("`over` must be non-empty")),
        Some(over) => {
            let mut hits = 0usize;
            for &v in over {
                g.check(v)?;
                if comps.in_largest(v) {
                    hits += 1;
                }
            }
            Ok(hits as f64 / over.len() as f64)
        }
    }
}

/// Largest component of the graph formed by `base ∪ extra` restricted to the
/// nodes with `alive[v]`, computed without materialising the subgraph.
#[derive(Debug, Clone)]
pub struct AliveComponents {
    pub(crate) uf: UnionFind,
    pub largest_root: Option<u32>,
    pub largest_size: usize,
    pub alive_count: usize,
    pub histogram: Vec<(usize, usize)>,
}

impl AliveComponents {
    pub fn compute(base: &Graph, extra: &[(NodeId, NodeId)], alive: &[bool]) -> Self {
        let n = base.node_count();
        debug_assert_eq!(alive.len(), n);
        let mut uf = UnionFind::new(n);
        for (u, v) in base.edges() {
            if alive[u.index()] && alive[v.index()] {
                uf.union(u.0, v.0);
            }
        }
        for &(u, v) in extra {
            if alive[u.index()] && alive[v.index()] {
                uf.union(u.0, v.0);
            }
        }
        let mut largest_root = None;
        let mut largest_size = 0;
        let mut alive_count = 0;
        let mut roots = Vec::new();
        // Ascending id scan: the first root reaching a size wins ties, which
        // is the component holding the smallest surviving id.
        for v in 0..n as u32 {
            if !alive[v as usize] {
                continue;
            }
            alive_count += 1;
            let r = uf.find(v);
            let s = uf.size[r as usize] as usize;
            if s > largest_size {
                largest_size = s;
                largest_root = Some(r);
            }
            if r == v {
                roots.push(s);
            }
        }
        AliveComponents {
            uf,
            largest_root,
            largest_size,
            alive_count,
            histogram: size_histogram(roots.into_iter()),
        }
    }

    pub fn in_largest(&mut self, v: NodeId) -> bool {
        Some(self.uf.find(v.0)) == self.largest_root
    }
}
