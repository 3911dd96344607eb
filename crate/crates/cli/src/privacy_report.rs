//! Privacy statements for a measured xi: the aggregation protocol's
//! parameters and the DP guarantee inside and outside the largest component.

use std::fmt::Write as _;

use robustnet::privacy::{
    dp_guarantee, noiseless_aggregation_plausible, paalec_params, DpGuarantee, PaalecParams,
    PrivacyParams,
};

use crate::error::{CliError, Result};
use crate::output::PointFilter;
use crate::sweep::SweepRow;

/// Privacy inputs other than xi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyInputs {
    pub epsilon: f64,
    pub delta: f64,
    pub sensitivity: f64,
    pub s: f64,
    /// Minimum largest-component size for the noiseless-aggregation flag.
    pub group_threshold: Option<f64>,
}

/// xi and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredXi {
    pub xi: f64,
    pub honest_n: Option<f64>,
    pub replicates: usize,
    pub source: String,
}

impl MeasuredXi {
    pub fn given(xi: f64) -> Self {
        MeasuredXi {
            xi,
            honest_n: None,
            replicates: 0,
            source: "given".into(),
        }
    }

    /// Mean xi over the replicates of the single config point matching
    /// `filter`.
    pub fn from_rows(rows: &[SweepRow], filter: &PointFilter, source: &str) -> Result<Self> {
        let matched: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| filter.matches(&r.point_key()))
            .collect();
        let Some(first) = matched.first() else {
            return Err(CliError::MissingRun(format!("{filter:?} in {source}")));
        };
        let key = first.point_key();
        if matched.iter().any(|r| r.point_key() != key) {
            return Err(CliError::usage(format!(
                "{filter:?} matches several config points in {source}; narrow it with --point"
            )));
        }
        let k = matched.len() as f64;
        Ok(MeasuredXi {
            xi: matched.iter().map(|r| r.xi).sum::<f64>() / k,
            honest_n: Some(matched.iter().map(|r| r.honest as f64).sum::<f64>() / k),
            replicates: matched.len(),
            source: format!(
                "{source}: {} m={} q={} {} {:.6}",
                key.protocol, key.m, key.q, key.adversary, key.fraction
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub inputs: PrivacyInputs,
    pub measured: MeasuredXi,
    /// `None` when delta = 0 leaves beta undefined.
    pub paalec: Option<PaalecParams>,
    pub guarantee: DpGuarantee,
    pub noiseless_plausible: Option<bool>,
}

pub fn privacy_report(inputs: PrivacyInputs, measured: MeasuredXi) -> Result<PrivacyReport> {
    let params = PrivacyParams {
        epsilon: inputs.epsilon,
        delta: inputs.delta,
        sensitivity: inputs.sensitivity,
        s: inputs.s,
        xi: measured.xi,
    };
    let guarantee = dp_guarantee(&params)?;
    let paalec = if inputs.delta == 0.0 {
        None
    } else {
        Some(paalec_params(&params)?)
    };
    let noiseless_plausible = match (inputs.group_threshold, measured.honest_n) {
        (Some(t), Some(h)) => Some(noiseless_aggregation_plausible(
            measured.xi,
            h.round() as usize,
            t,
        )),
        _ => None,
    };
    Ok(PrivacyReport {
        inputs,
        measured,
        paalec,
        guarantee,
        noiseless_plausible,
    })
}

impl PrivacyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let m = &self.measured;
        let _ = writeln!(w, "xi: {} ({})", m.xi, m.source);
        if let Some(h) = m.honest_n {
            let _ = writeln!(
                w,
                "honest nodes: {h} (mean over {} replicates)",
                m.replicates
            );
        }
        match self.paalec {
            Some(p) => {
                let _ = writeln!(
                    w,
                    "aggregation parameters: alpha = {} beta = {}",
                    p.alpha, p.beta
                );
            }
            None => {
                let _ = writeln!(w, "aggregation parameters: beta undefined for delta = 0");
            }
        }
        let g = &self.guarantee;
        let _ = writeln!(
            w,
            "largest-component members: ({}, {})-DP",
            g.component_epsilon, g.component_delta
        );
        let _ = writeln!(
            w,
            "arbitrary node: ({}, {})-DP",
            g.any_node_epsilon, g.any_node_delta
        );
        if let Some(b) = self.noiseless_plausible {
            let _ = writeln!(
                w,
                "noiseless aggregation plausible (heuristic, threshold {}): {b}",
                self.inputs.group_threshold.unwrap_or_default()
            );
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("xi", self.measured.xi.to_string()),
            ("epsilon", self.inputs.epsilon.to_string()),
            ("delta", self.inputs.delta.to_string()),
            ("sensitivity", self.inputs.sensitivity.to_string()),
            ("s", self.inputs.s.to_string()),
            (
                "paalec_alpha",
                self.paalec.map(|p| p.alpha.to_string()).unwrap_or_default(),
            ),
            (
                "paalec_beta",
                self.paalec.map(|p| p.beta.to_string()).unwrap_or_default(),
            ),
            (
                "component_epsilon",
                self.guarantee.component_epsilon.to_string(),
            ),
            (
                "component_delta",
                self.guarantee.component_delta.to_string(),
            ),
            (
                "any_node_epsilon",
                self.guarantee.any_node_epsilon.to_string(),
            ),
            ("any_node_delta", self.guarantee.any_node_delta.to_string()),
        ];
        if let Some(b) = self.noiseless_plausible {
            rows.push(("noiseless_plausible", b.to_string()));
        }
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }
}
