//! CSV output. Column order is fixed and versioned through the
//! `schema_version` column; fractions carry 6 decimals; lines end in LF.

use std::io::{Read, Write};

use robustnet::adversary::Strategy;
use robustnet::protocols::ProtocolKind;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::sweep::{PointKey, Stat, SummaryRow, SweepRow};

pub const SCHEMA_VERSION: u32 = 1;

pub const ROW_HEADER: [&str; 28] = [
    "schema_version",
    "graph",
    "protocol",
    "m",
    "q",
    "fat_count",
    "adversary",
    "fraction",
    "replicate",
    "seed",
    "n",
    "corrupted",
    "honest",
    "honest_participants",
    "honest_nonparticipants",
    "lcc_size",
    "lcc_participants",
    "lcc_nonparticipants",
    "frac_all",
    "frac_participants",
    "frac_nonparticipants",
    "xi",
    "messages",
    "edges_added",
    "edges_surviving",
    "components",
    "component_histogram",
    "wall_ms",
];

pub const SUMMARY_HEADER: [&str; 17] = [
    "schema_version",
    "graph",
    "protocol",
    "m",
    "q",
    "fat_count",
    "adversary",
    "fraction",
    "replicates",
    "frac_all_mean",
    "frac_all_sd",
    "frac_participants_mean",
    "frac_participants_sd",
    "frac_nonparticipants_mean",
    "frac_nonparticipants_sd",
    "messages_mean",
    "edges_added_mean",
];

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn component_count(histogram: &str) -> usize {
    histogram
        .split(';')
        .filter_map(|pair| pair.split_once(':'))
        .filter_map(|(_, c)| c.parse::<usize>().ok())
        .sum()
}

pub fn row_record(r: &SweepRow) -> Vec<String> {
    vec![
        SCHEMA_VERSION.to_string(),
        r.graph.clone(),
        r.protocol.name().to_string(),
        r.m.to_string(),
        f6(r.q),
        opt(r.fat_count, |f| f.to_string()),
        r.adversary.name().to_string(),
        f6(r.fraction),
        r.replicate.to_string(),
        r.seed.to_string(),
        r.n.to_string(),
        r.corrupted.to_string(),
        r.honest.to_string(),
        r.honest_participants.to_string(),
        r.honest_nonparticipants.to_string(),
        r.lcc_size.to_string(),
        r.lcc_participants.to_string(),
        r.lcc_nonparticipants.to_string(),
        f6(r.frac_all),
        opt(r.frac_participants, f6),
        opt(r.frac_nonparticipants, f6),
        f6(r.xi),
        r.messages.to_string(),
        r.edges_added.to_string(),
        r.edges_surviving.to_string(),
        component_count(&r.component_histogram).to_string(),
        r.component_histogram.clone(),
        opt(r.wall_ms, |ms| format!("{ms:.3}")),
    ]
}

/// Header plus one line per row.
pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(ROW_HEADER)?;
    for r in rows {
        w.write_record(row_record(r))?;
    }
    w.flush().map_err(|e| CliError::io("<csv output>", e))?;
    Ok(())
}

pub fn emit_summary_csv<W: Write>(summary: &[SummaryRow], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SUMMARY_HEADER)?;
    let stat = |s: Option<Stat>| (opt(s, |s| f6(s.mean)), opt(s, |s| f6(s.sd)));
    for s in summary {
        let k = &s.key;
        let (pm, psd) = stat(s.frac_participants);
        let (npm, npsd) = stat(s.frac_nonparticipants);
        w.write_record([
            SCHEMA_VERSION.to_string(),
            s.graph.clone(),
            k.protocol.name().to_string(),
            k.m.to_string(),
            f6(k.q),
            opt(k.fat_count, |f| f.to_string()),
            k.adversary.name().to_string(),
            f6(k.fraction),
            s.replicates.to_string(),
            f6(s.frac_all.mean),
            f6(s.frac_all.sd),
            pm,
            psd,
            npm,
            npsd,
            format!("{:.3}", s.messages_mean),
            format!("{:.3}", s.edges_added_mean),
        ])?;
    }
    w.flush().map_err(|e| CliError::io("<csv output>", e))?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Debug, Deserialize)]
struct RawRow {
    schema_version: u32,
    graph: String,
    protocol: String,
    m: u32,
    q: f64,
    fat_count: Option<usize>,
    adversary: String,
    fraction: f64,
    replicate: usize,
    seed: u64,
    n: usize,
    corrupted: usize,
    honest: usize,
    honest_participants: usize,
    honest_nonparticipants: usize,
    lcc_size: usize,
    lcc_participants: usize,
    lcc_nonparticipants: usize,
    frac_all: f64,
    frac_participants: Option<f64>,
    frac_nonparticipants: Option<f64>,
    xi: f64,
    messages: u64,
    edges_added: usize,
    edges_surviving: usize,
    #[allow(dead_code)]
    components: usize,
    component_histogram: String,
    wall_ms: Option<f64>,
}

/// Parses a sweep CSV written by [`emit_csv`]. Values come back at the
/// written precision.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(ROW_HEADER) {
        return Err(CliError::usage(format!(
            "not a sweep CSV (schema {SCHEMA_VERSION}): header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for raw in reader.deserialize() {
        let raw: RawRow = raw?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(CliError::usage(format!(
                "schema version {} not supported (expected {SCHEMA_VERSION})",
                raw.schema_version
            )));
        }
        rows.push(SweepRow {
            graph: raw.graph,
            protocol: raw.protocol.parse::<ProtocolKind>()?,
            m: raw.m,
            q: raw.q,
            fat_count: raw.fat_count,
            adversary: raw.adversary.parse::<Strategy>()?,
            fraction: raw.fraction,
            replicate: raw.replicate,
            seed: raw.seed,
            n: raw.n,
            corrupted: raw.corrupted,
            honest: raw.honest,
            honest_participants: raw.honest_participants,
            honest_nonparticipants: raw.honest_nonparticipants,
            lcc_size: raw.lcc_size,
            lcc_participants: raw.lcc_participants,
            lcc_nonparticipants: raw.lcc_nonparticipants,
            frac_all: raw.frac_all,
            frac_participants: raw.frac_participants,
            frac_nonparticipants: raw.frac_nonparticipants,
            xi: raw.xi,
            messages: raw.messages,
            edges_added: raw.edges_added,
            edges_surviving: raw.edges_surviving,
            component_histogram: raw.component_histogram,
            wall_ms: raw.wall_ms,
        });
    }
    Ok(rows)
}

/// Rows of a config point matching every given field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointFilter {
    pub protocol: Option<ProtocolKind>,
    pub m: Option<u32>,
    pub q: Option<f64>,
    pub adversary: Option<Strategy>,
    pub fraction: Option<f64>,
}

impl PointFilter {
    /// `protocol=a3f,m=15,q=1,adversary=targeted,fraction=0.15`
    pub fn parse(s: &str) -> Result<PointFilter> {
        let mut f = PointFilter::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                CliError::usage(format!("--point: expected key=value, got {part:?}"))
            })?;
            let bad = |_| CliError::usage(format!("--point: bad value in {part:?}"));
            match k.trim() {
                "protocol" => f.protocol = Some(v.parse()?),
                "m" => {
                    f.m = Some(
                        v.parse()
                            .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    )
                }
                "q" => {
                    f.q = Some(
                        v.parse()
                            .map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                    )
                }
                "adversary" => f.adversary = Some(v.parse()?),
                "fraction" => {
                    f.fraction = Some(
                        v.parse()
                            .map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                    )
                }
                other => return Err(CliError::usage(format!("--point: unknown key {other:?}"))),
            }
        }
        Ok(f)
    }

    pub fn matches(&self, k: &PointKey) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() < 5e-7;
        self.protocol.is_none_or(|p| p == k.protocol)
            && self.m.is_none_or(|m| m == k.m)
            && self.q.is_none_or(|q| close(q, k.q))
            && self.adversary.is_none_or(|a| a == k.adversary)
            && self.fraction.is_none_or(|f| close(f, k.fraction))
    }
}
