//! Sweep specifications: flags, config files and the figure presets.

use std::path::PathBuf;

use robustnet::adversary::Strategy;
use robustnet::protocols::ProtocolKind;
use robustnet::MetricsOver;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::source::GraphSource;

pub const DEFAULT_REPLICATES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub graph: GraphSource,
    pub protocols: Vec<ProtocolKind>,
    pub m_values: Vec<u32>,
    pub q_values: Vec<f64>,
    pub adversary: Strategy,
    pub fractions: Vec<f64>,
    pub replicates: usize,
    pub base_seed: u64,
    /// A3F fat-list size; `None` means `⌊log₂ n⌋`.
    pub fat_count: Option<usize>,
    /// Series drawn by `plot`. Every row carries all three fractions.
    pub metrics_over: Vec<MetricsOver>,
    pub participants_among_honest: bool,
    /// Fill the `wall_ms` column. Off by default so output is reproducible.
    pub timing: bool,
}

impl SweepSpec {
    pub fn new(graph: GraphSource) -> Self {
        SweepSpec {
            graph,
            protocols: vec![ProtocolKind::None],
            m_values: vec![0],
            q_values: vec![1.0],
            adversary: Strategy::RandomFailures,
            fractions: default_fractions(Strategy::RandomFailures),
            replicates: DEFAULT_REPLICATES,
            base_seed: 0,
            fat_count: None,
            metrics_over: vec![MetricsOver::All],
            participants_among_honest: false,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(CliError::usage("replicates must be >= 1"));
        }
        if self.fractions.is_empty() {
            return Err(CliError::usage("no corruption fractions"));
        }
        if let Some(f) = self.fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            return Err(CliError::usage(format!("fraction {f} outside [0, 1]")));
        }
        if self.protocols.is_empty() || self.m_values.is_empty() || self.q_values.is_empty() {
            return Err(CliError::usage("protocol, m and q lists must be non-empty"));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(CliError::usage(format!("q = {q} outside [0, 1]")));
        }
        if self.metrics_over.is_empty() {
            return Err(CliError::usage("no metrics selected"));
        }
        if self.fat_count == Some(0) {
            return Err(CliError::usage("fat count must be >= 1"));
        }
        Ok(())
    }

    /// Applies a preset's axes. The graph source is left alone.
    pub fn apply_preset(&mut self, preset: &Preset) {
        self.protocols = vec![preset.protocol];
        self.adversary = preset.adversary;
        if preset.partial {
            self.m_values = vec![15];
            self.q_values = vec![0.1, 0.25, 0.5, 1.0];
            self.metrics_over = vec![MetricsOver::Participants, MetricsOver::NonParticipants];
        } else {
            self.m_values = vec![0, 1, 5, 10, 15];
            self.q_values = vec![1.0];
            self.metrics_over = vec![MetricsOver::All];
        }
        self.fractions = default_fractions(preset.adversary);
    }
}

/// 0–90% in steps of 10 for random failures, 0–30% in steps of 5 for the
/// targeted adversary.
pub fn default_fractions(adversary: Strategy) -> Vec<f64> {
    match adversary {
        Strategy::RandomFailures => parse_fractions("0:0.9:0.1"),
        Strategy::TargetedDegree => parse_fractions("0:0.3:0.05"),
    }
    .expect("valid range")
}

/// A figure preset: protocol, full or partial
/// participation, and adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub protocol: ProtocolKind,
    pub partial: bool,
    pub adversary: Strategy,
}

pub const PRESETS: [Preset; 8] = {
    use ProtocolKind::{A3f, TwoSff};
    use Strategy::{RandomFailures as R, TargetedDegree as T};
    const fn p(
        name: &'static str,
        protocol: ProtocolKind,
        partial: bool,
        adversary: Strategy,
    ) -> Preset {
        Preset {
            name,
            protocol,
            partial,
            adversary,
        }
    }
    [
        p("figure-1", TwoSff, false, R),
        p("figure-2", TwoSff, true, R),
        p("figure-3", A3f, false, R),
        p("figure-4", A3f, true, R),
        p("figure-5", TwoSff, false, T),
        p("figure-6", TwoSff, true, T),
        p("figure-7", A3f, false, T),
        p("figure-8", A3f, true, T),
    ]
};

pub fn preset(name: &str) -> Result<Preset> {
    PRESETS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| {
            let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
            CliError::usage(format!(
                "unknown preset {name:?}; expected one of {}",
                names.join(", ")
            ))
        })
}

/// `a:b:step` (inclusive) or a comma list. Values are rounded to 1e-9 so
/// `0:0.3:0.1` gives exactly `0.3`.
pub fn parse_fractions(s: &str) -> Result<Vec<f64>> {
    let clean = |x: f64| (x * 1e9).round() / 1e9;
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts[..] {
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(CliError::usage(format!(
                    "bad range {s:?}: need a <= b and step > 0"
                )));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| clean(a + i as f64 * step)).collect())
        }
        [_] => parse_list::<f64>(s).map(|v| v.into_iter().map(clean).collect()),
        _ => Err(CliError::usage(format!("bad fraction range {s:?}"))),
    }
}

fn num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| CliError::usage(format!("not a number: {s:?}")))
}

pub fn parse_list<T>(s: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|e| CliError::usage(format!("{t:?}: {e}")))
        })
        .collect()
}

/// A list written either as `"1,5,10"` or as a TOML array.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ListValue {
    Text(String),
    Number(f64),
    Numbers(Vec<f64>),
    Words(Vec<String>),
}

impl ListValue {
    pub fn as_text(&self) -> String {
        match self {
            ListValue::Text(s) => s.clone(),
            ListValue::Number(x) => x.to_string(),
            ListValue::Numbers(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
            ListValue::Words(v) => v.join(","),
        }
    }
}

/// Sweep settings as they arrive from a config file or the command line.
/// Every field is optional; [`SweepOptions::merge`] layers them.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepOptions {
    pub preset: Option<String>,
    pub graph: Option<String>,
    pub ba: Option<String>,
    pub theorem: Option<String>,
    pub protocol: Option<ListValue>,
    pub m: Option<ListValue>,
    pub q: Option<ListValue>,
    pub adversary: Option<String>,
    pub fractions: Option<ListValue>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub fat_count: Option<usize>,
    pub metrics: Option<ListValue>,
    pub participants_among_honest: Option<bool>,
    pub timing: Option<bool>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl SweepOptions {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `over` wins wherever it sets a value. The graph source is one
    /// setting: any of `graph`/`ba`/`theorem` in `over` replaces all three.
    pub fn merge(self, over: SweepOptions) -> SweepOptions {
        let over_has_source = over.graph.is_some() || over.ba.is_some() || over.theorem.is_some();
        let (graph, ba, theorem) = if over_has_source {
            (over.graph, over.ba, over.theorem)
        } else {
            (self.graph, self.ba, self.theorem)
        };
        SweepOptions {
            preset: over.preset.or(self.preset),
            graph,
            ba,
            theorem,
            protocol: over.protocol.or(self.protocol),
            m: over.m.or(self.m),
            q: over.q.or(self.q),
            adversary: over.adversary.or(self.adversary),
            fractions: over.fractions.or(self.fractions),
            reps: over.reps.or(self.reps),
            seed: over.seed.or(self.seed),
            fat_count: over.fat_count.or(self.fat_count),
            metrics: over.metrics.or(self.metrics),
            participants_among_honest: over
                .participants_among_honest
                .or(self.participants_among_honest),
            timing: over.timing.or(self.timing),
            threads: over.threads.or(self.threads),
            out: over.out.or(self.out),
            summary: over.summary.or(self.summary),
            plot: over.plot.or(self.plot),
        }
    }

    pub fn graph_source(&self) -> Result<Option<GraphSource>> {
        match (&self.graph, &self.ba, &self.theorem) {
            (None, None, None) => Ok(None),
            (Some(g), None, None) => Ok(Some(GraphSource::from_graph_arg(g))),
            (None, Some(b), None) => GraphSource::parse_ba(b).map(Some),
            (None, None, Some(t)) => GraphSource::parse_theorem(t).map(Some),
            _ => Err(CliError::usage("give only one of --graph, --ba, --theorem")),
        }
    }

    /// Defaults, then the preset's axes, then explicit settings. Presets
    /// default the graph to Epinions.
    pub fn to_spec(&self) -> Result<SweepSpec> {
        let preset = self.preset.as_deref().map(preset).transpose()?;
        let graph = match (self.graph_source()?, preset) {
            (Some(g), _) => g,
            (None, Some(_)) => GraphSource::Epinions,
            (None, None) => {
                return Err(CliError::usage(
                    "no graph: use --graph, --ba, --theorem or --preset",
                ))
            }
        };
        let mut spec = SweepSpec::new(graph);
        if let Some(p) = &preset {
            spec.apply_preset(p);
        }
        if let Some(v) = &self.protocol {
            spec.protocols = parse_list(&v.as_text())?;
        }
        if let Some(v) = &self.m {
            spec.m_values = parse_list(&v.as_text())?;
        }
        if let Some(v) = &self.q {
            spec.q_values = parse_list(&v.as_text())?;
        }
        if let Some(a) = &self.adversary {
            spec.adversary = a.parse()?;
            spec.fractions = default_fractions(spec.adversary);
        }
        if let Some(v) = &self.fractions {
            spec.fractions = match v {
                ListValue::Text(s) => parse_fractions(s)?,
                other => parse_fractions(&other.as_text())?,
            };
        }
        if let Some(r) = self.reps {
            spec.replicates = r;
        }
        if let Some(s) = self.seed {
            spec.base_seed = s;
        }
        spec.fat_count = self.fat_count.or(spec.fat_count);
        if let Some(v) = &self.metrics {
            spec.metrics_over = parse_list(&v.as_text())?;
        }
        if let Some(b) = self.participants_among_honest {
            spec.participants_among_honest = b;
        }
        if let Some(b) = self.timing {
            spec.timing = b;
        }
        spec.validate()?;
        Ok(spec)
    }
}
