//! Monte-Carlo sweeps over protocol, m, q and corruption fraction.
//!
//! Seeds: replicate `r` of protocol point `(kind, m, q, fat_count)` plays
//! with `derive_seed(base_seed, [kind, m, q bits, fat_count, r])`, a
//! SplitMix64 chain. The corruption fraction is not part of the key, so one
//! enrichment is attacked at every fraction, and adding m, q or fraction
//! values leaves every other point's seed unchanged.

use std::time::Instant;

use rayon::prelude::*;
use robustnet::adversary::{CorruptionSpec, Strategy};
use robustnet::game::{corruption_plan, EnrichedGraph};
use robustnet::protocols::{ProtocolConfig, ProtocolKind};
use robustnet::rng::derive_seed;
use robustnet::{play_game, GameConfig, GameOutcome, Graph, MetricsOver};

use crate::error::{CliError, Result};
use crate::spec::SweepSpec;

/// One game: config axes, replicate, seed and outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub graph: String,
    pub protocol: ProtocolKind,
    pub m: u32,
    pub q: f64,
    /// Fat-list size actually used (A3F only).
    pub fat_count: Option<usize>,
    pub adversary: Strategy,
    pub fraction: f64,
    pub replicate: usize,
    pub seed: u64,
    pub n: usize,
    pub corrupted: usize,
    pub honest: usize,
    pub honest_participants: usize,
    pub honest_nonparticipants: usize,
    pub lcc_size: usize,
    pub lcc_participants: usize,
    pub lcc_nonparticipants: usize,
    pub frac_all: f64,
    pub frac_participants: Option<f64>,
    pub frac_nonparticipants: Option<f64>,
    pub xi: f64,
    pub messages: u64,
    pub edges_added: usize,
    pub edges_surviving: usize,
    /// `size:count` pairs, ascending by size, `;`-separated.
    pub component_histogram: String,
    pub wall_ms: Option<f64>,
}

impl SweepRow {
    pub fn fraction_over(&self, over: MetricsOver) -> Option<f64> {
        match over {
            MetricsOver::All => Some(self.frac_all),
            MetricsOver::Participants => self.frac_participants,
            MetricsOver::NonParticipants => self.frac_nonparticipants,
        }
    }

    /// Identifies the config point, ignoring the replicate.
    pub fn point_key(&self) -> PointKey {
        PointKey {
            protocol: self.protocol,
            m: self.m,
            q: self.q,
            fat_count: self.fat_count,
            adversary: self.adversary,
            fraction: self.fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointKey {
    pub protocol: ProtocolKind,
    pub m: u32,
    pub q: f64,
    pub fat_count: Option<usize>,
    pub adversary: Strategy,
    pub fraction: f64,
}

/// Mean and sample standard deviation per config point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub graph: String,
    pub key: PointKey,
    pub replicates: usize,
    pub frac_all: Stat,
    pub frac_participants: Option<Stat>,
    pub frac_nonparticipants: Option<Stat>,
    pub messages_mean: f64,
    pub edges_added_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    /// `None` for an empty sample; sd is 0 for a single value.
    pub fn of(xs: &[f64]) -> Option<Stat> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Stat { mean, sd })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SummaryRow>,
}

/// Protocol settings in sweep order: protocol, then m, then q, each in the
/// order given. `none` contributes one point per q, with m = 0.
pub fn protocol_points(spec: &SweepSpec) -> Vec<ProtocolConfig> {
    let mut points = Vec::new();
    for &kind in &spec.protocols {
        let ms: &[u32] = if kind == ProtocolKind::None {
            &[0]
        } else {
            &spec.m_values
        };
        for &m in ms {
            for &q in &spec.q_values {
                let fat_count = if kind == ProtocolKind::A3f {
                    spec.fat_count
                } else {
                    None
                };
                let p = ProtocolConfig {
                    kind,
                    m,
                    q,
                    fat_count,
                };
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
    }
    points
}

pub fn replicate_seed(base_seed: u64, protocol: &ProtocolConfig, replicate: usize) -> u64 {
    let kind = match protocol.kind {
        ProtocolKind::None => 0,
        ProtocolKind::TwoSff => 1,
        ProtocolKind::A3f => 2,
    };
    derive_seed(
        base_seed,
        &[
            kind,
            protocol.m as u64,
            protocol.q.to_bits(),
            protocol.fat_count.map_or(u64::MAX, |f| f as u64),
            replicate as u64,
        ],
    )
}

/// Runs the full cross-product on the current rayon pool. Rows come out in
/// (protocol, m, q, fraction, replicate) order whatever the
/// number of workers.
pub fn run_sweep(spec: &SweepSpec, graph: &Graph) -> Result<SweepOutput> {
    spec.validate()?;
    if graph.is_empty() {
        return Err(robustnet::Error::EmptyGraph.into());
    }
    let label = spec.graph.label();
    let points = protocol_points(spec);
    let units: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..spec.replicates).map(move |r| (p, r)))
        .collect();

    let per_unit: Vec<Vec<SweepRow>> = units
        .par_iter()
        .map(|&(p, r)| run_unit(spec, graph, &label, &points[p], r))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(per_unit.len() * spec.fractions.len());
    for p in 0..points.len() {
        for f in 0..spec.fractions.len() {
            for r in 0..spec.replicates {
                rows.push(per_unit[p * spec.replicates + r][f].clone());
            }
        }
    }
    let summary = summarize(&rows);
    Ok(SweepOutput { rows, summary })
}

/// Same as [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(
    spec: &SweepSpec,
    graph: &Graph,
    threads: usize,
) -> Result<SweepOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(spec, graph))
}

/// All fractions for one protocol point and replicate.
fn run_unit(
    spec: &SweepSpec,
    graph: &Graph,
    label: &str,
    protocol: &ProtocolConfig,
    replicate: usize,
) -> Result<Vec<SweepRow>> {
    let seed = replicate_seed(spec.base_seed, protocol, replicate);
    let fat_count = (protocol.kind == ProtocolKind::A3f)
        .then(|| protocol.resolved_fat_count(graph.node_count()));
    let row = |fraction: f64, out: GameOutcome, ms: f64| SweepRow {
        graph: label.to_string(),
        protocol: protocol.kind,
        m: protocol.m,
        q: protocol.q,
        fat_count,
        adversary: spec.adversary,
        fraction,
        replicate,
        seed,
        n: out.n,
        corrupted: out.corrupted,
        honest: out.honest,
        honest_participants: out.honest_participants,
        honest_nonparticipants: out.honest_nonparticipants,
        lcc_size: out.lcc_size,
        lcc_participants: out.lcc_participants,
        lcc_nonparticipants: out.lcc_nonparticipants,
        frac_all: out.frac_all,
        frac_participants: out.frac_participants,
        frac_nonparticipants: out.frac_nonparticipants,
        xi: out.xi,
        messages: out.messages,
        edges_added: out.edges_added,
        edges_surviving: out.edges_surviving,
        component_histogram: out
            .component_histogram
            .iter()
            .map(|(size, count)| format!("{size}:{count}"))
            .collect::<Vec<_>>()
            .join(";"),
        wall_ms: spec.timing.then_some(ms),
    };
    let corruption = |fraction| CorruptionSpec {
        strategy: spec.adversary,
        fraction,
    };

    let mut rows = Vec::with_capacity(spec.fractions.len());
    if spec.participants_among_honest {
        // participants depend on the plan, so nothing is shared
        for &fraction in &spec.fractions {
            let start = Instant::now();
            let mut cfg = GameConfig::new(*protocol, corruption(fraction), seed);
            cfg.participants_among_honest = true;
            let out = play_game(graph, &cfg)?;
            rows.push(row(fraction, out, elapsed_ms(start)));
        }
    } else {
        let start = Instant::now();
        protocol.validate()?;
        let enriched = EnrichedGraph::prepare(graph, protocol, seed)?;
        let enrich_ms = elapsed_ms(start);
        for &fraction in &spec.fractions {
            let start = Instant::now();
            let plan = corruption_plan(graph, corruption(fraction), seed)?;
            let out = enriched.attack(&plan)?;
            rows.push(row(fraction, out, enrich_ms + elapsed_ms(start)));
        }
    }
    Ok(rows)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Groups consecutive rows sharing a config point.
pub fn summarize(rows: &[SweepRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = rows[start].point_key();
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| r.point_key() == key)
                .count();
        let group = &rows[start..end];
        let collect = |f: &dyn Fn(&SweepRow) -> Option<f64>| -> Vec<f64> {
            group.iter().filter_map(f).collect()
        };
        let mean =
            |f: &dyn Fn(&SweepRow) -> f64| group.iter().map(f).sum::<f64>() / group.len() as f64;
        out.push(SummaryRow {
            graph: rows[start].graph.clone(),
            key,
            replicates: group.len(),
            frac_all: Stat::of(&collect(&|r| Some(r.frac_all))).expect("non-empty group"),
            frac_participants: Stat::of(&collect(&|r| r.frac_participants)),
            frac_nonparticipants: Stat::of(&collect(&|r| r.frac_nonparticipants)),
            messages_mean: mean(&|r| r.messages as f64),
            edges_added_mean: mean(&|r| r.edges_added as f64),
        });
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::GraphSource;
    use robustnet::components::largest_component_fraction;

    fn small_spec() -> SweepSpec {
        let mut spec = SweepSpec::new(GraphSource::parse_ba("300,2,3").unwrap());
        spec.protocols = vec![ProtocolKind::TwoSff, ProtocolKind::A3f];
        spec.m_values = vec![0, 3];
        spec.q_values = vec![1.0, 0.5];
        spec.fractions = vec![0.0, 0.3];
        spec.replicates = 2;
        spec.base_seed = 5;
        spec
    }

    #[test]
    fn single_identity_row() {
        let mut spec = SweepSpec::new(GraphSource::parse_ba("200,1,2").unwrap());
        spec.fractions = vec![0.0];
        spec.replicates = 1;
        let g = spec.graph.resolve(spec.base_seed).unwrap();
        let out = run_sweep(&spec, &g).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(
            out.rows[0].frac_all,
            largest_component_fraction(&g, None).unwrap()
        );
        assert_eq!(out.summary.len(), 1);
        assert_eq!(out.summary[0].frac_all.sd, 0.0);
    }

    #[test]
    fn rows_equal_independent_games() {
        let spec = small_spec();
        let g = spec.graph.resolve(spec.base_seed).unwrap();
        let out = run_sweep(&spec, &g).unwrap();
        assert_eq!(out.rows.len(), 2 * 2 * 2 * 2 * 2);
        assert_eq!(out.summary.len(), out.rows.len() / 2);
        for row in &out.rows {
            let protocol = ProtocolConfig {
                kind: row.protocol,
                m: row.m,
                q: row.q,
                fat_count: None,
            };
            assert_eq!(
                row.seed,
                replicate_seed(spec.base_seed, &protocol, row.replicate)
            );
            let corruption = CorruptionSpec {
                strategy: row.adversary,
                fraction: row.fraction,
            };
            let direct = play_game(&g, &GameConfig::new(protocol, corruption, row.seed)).unwrap();
            assert_eq!(row.frac_all, direct.frac_all);
            assert_eq!(row.frac_participants, direct.frac_participants);
            assert_eq!(row.messages, direct.messages);
        }
    }

    #[test]
    fn honest_participation_mode_matches_games() {
        let mut spec = small_spec();
        spec.participants_among_honest = true;
        spec.protocols = vec![ProtocolKind::A3f];
        let g = spec.graph.resolve(spec.base_seed).unwrap();
        for row in run_sweep(&spec, &g).unwrap().rows {
            let protocol = ProtocolConfig {
                kind: row.protocol,
                m: row.m,
                q: row.q,
                fat_count: None,
            };
            let mut cfg = GameConfig::new(
                protocol,
                CorruptionSpec {
                    strategy: row.adversary,
                    fraction: row.fraction,
                },
                row.seed,
            );
            cfg.participants_among_honest = true;
            let direct = play_game(&g, &cfg).unwrap();
            assert_eq!(row.honest_participants, direct.honest_participants);
            assert_eq!(row.frac_all, direct.frac_all);
        }
    }

    #[test]
    fn order_is_protocol_m_q_fraction_replicate() {
        let spec = small_spec();
        let g = spec.graph.resolve(spec.base_seed).unwrap();
        let rows = run_sweep(&spec, &g).unwrap().rows;
        let keys: Vec<_> = rows
            .iter()
            .map(|r| {
                let qi = spec.q_values.iter().position(|&q| q == r.q).unwrap();
                (r.protocol, r.m, qi, r.fraction, r.replicate)
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn adding_points_keeps_seeds() {
        let spec = small_spec();
        let mut bigger = spec.clone();
        bigger.m_values.push(7);
        bigger.fractions.push(0.6);
        let g = spec.graph.resolve(spec.base_seed).unwrap();
        let small = run_sweep(&spec, &g).unwrap().rows;
        let big = run_sweep(&bigger, &g).unwrap().rows;
        for row in &small {
            assert!(big.contains(row));
        }
    }

    #[test]
    fn none_collapses_m() {
        let mut spec = small_spec();
        spec.protocols = vec![ProtocolKind::None];
        assert_eq!(protocol_points(&spec).len(), 2);
        assert!(protocol_points(&spec).iter().all(|p| p.m == 0));
    }

    #[test]
    fn stat_uses_sample_sd() {
        let s = Stat::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(Stat::of(&[]).is_none());
    }
}
