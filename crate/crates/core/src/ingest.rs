//! SNAP edge-list loading.
//!
//! Format: one edge per line as two ASCII decimal ids separated by any
//! whitespace, `#` starts a comment line, LF or CRLF line endings. The graph
//! is treated as undirected: reciprocal pairs collapse into one edge and
//! self-loops are dropped. Raw ids are compacted to `[0, n)` in ascending
//! raw-id order.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone)]
pub struct SnapGraph {
    pub graph: Graph,
    /// `raw_ids[i]` is the id used in the file for dense node `i`.
    pub raw_ids: Vec<u64>,
    /// Number of data (non-comment, non-blank) lines.
    pub data_lines: usize,
    pub self_loops: usize,
}

impl SnapGraph {
    pub fn dense_id(&self, raw: u64) -> Option<NodeId> {
        self.raw_ids
            .binary_search(&raw)
            .ok()
            .map(|i| NodeId(i as u32))
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: "expected two node ids".into(),
    })?;
    tok.parse::<u64>().map_err(|e| Error::Parse {
        line,
        message: format!("bad node id {tok:?}: {e}"),
    })
}

pub fn load_snap_edgelist<R: BufRead>(mut source: R) -> Result<SnapGraph> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0;
    let mut buf = String::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if source.read_line(&mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = buf.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let from = parse_id(toks.next(), line_no)?;
        let to = parse_id(toks.next(), line_no)?;
        if toks.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "trailing fields after edge".into(),
            });
        }
        if from == to {
            self_loops += 1;
        }
        raw_edges.push((from, to));
    }
    if raw_edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut raw_ids: Vec<u64> = raw_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    raw_ids.sort_unstable();
    raw_ids.dedup();
    if raw_ids.len() > u32::MAX as usize {
        return Err(Error::invalid("more nodes than fit in u32 ids"));
    }
    let dense: HashMap<u64, u32> = raw_ids
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i as u32))
        .collect();
    let graph = Graph::from_edges(
        raw_ids.len(),
        raw_edges
            .iter()
            .map(|(a, b)| (NodeId(dense[a]), NodeId(dense[b]))),
    )?;
    Ok(SnapGraph {
        graph,
        raw_ids,
        data_lines: raw_edges.len(),
        self_loops,
    })
}

/// Writes the graph as a SNAP edge list over dense ids, each undirected edge
/// once as `u\tv` with `u < v`. Isolated nodes are written as self-loops so
/// that reloading keeps them.
pub fn write_snap_edgelist<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# Undirected graph: {} nodes, {} edges",
        g.node_count(),
        g.edge_count()
    )?;
    writeln!(out, "# FromNodeId\tToNodeId")?;
    for u in g.nodes() {
        if g.degree(u) == 0 {
            writeln!(out, "{u}\t{u}")?;
        }
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            writeln!(out, "{u}\t{v}")?;
        }
    }
    Ok(())
}
