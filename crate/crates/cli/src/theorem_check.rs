//! Checks on constructed instances: build `trials`
//! instances, run `⌈ln n⌉`-A3F with the fat set as fat list, corrupt exactly
//! the fat set and record connectivity and xi.

use std::fmt::Write as _;

use rayon::prelude::*;
use robustnet::rng::derive_seed;
use robustnet::theorem::{theorem_trial, TheoremInstanceSpec, TheoremLayout};

use crate::error::Result;

/// Tolerance under the xi bound.
pub const XI_SLACK: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub connected: bool,
    pub xi: f64,
    pub honest: usize,
    pub edges_added: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub spec: TheoremInstanceSpec,
    pub layout: TheoremLayout,
    pub trials: Vec<TrialResult>,
}

impl TheoremReport {
    pub fn connected_trials(&self) -> usize {
        self.trials.iter().filter(|t| t.connected).count()
    }

    pub fn connectivity_rate(&self) -> f64 {
        self.connected_trials() as f64 / self.trials.len() as f64
    }

    /// `1 − (1 − β)·α`; equals 1 under full participation.
    pub fn xi_bound(&self) -> f64 {
        self.spec.xi_bound()
    }

    pub fn trials_meeting_bound(&self) -> usize {
        let floor = self.xi_bound() - XI_SLACK;
        self.trials.iter().filter(|t| t.xi >= floor).count()
    }

    pub fn min_xi(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| t.xi)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mean_xi(&self) -> f64 {
        self.trials.iter().map(|t| t.xi).sum::<f64>() / self.trials.len() as f64
    }

    pub fn render_text(&self) -> String {
        let s = &self.spec;
        let l = &self.layout;
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            "instance: n={} C={} a={} b={} alpha={} beta={} gamma={}",
            s.n, s.c, s.a, s.b, s.alpha, s.beta, s.gamma
        );
        let _ = writeln!(
            w,
            "layout: |W|={} |N_W|={} |V_alpha|={} fat degree in [{}, {}], rounds={}",
            l.fat,
            l.neighborhood,
            l.isolated,
            l.degree_min,
            l.degree_max,
            s.rounds()
        );
        let _ = writeln!(
            w,
            "hypotheses: C*a < 1-alpha: {} ({:.4} vs {:.4}); C*b > gamma*(1-alpha): {} ({:.4} vs {:.4})",
            s.lower_condition(),
            s.c * s.a,
            1.0 - s.alpha,
            s.upper_condition(),
            s.c * s.b,
            s.gamma * (1.0 - s.alpha)
        );
        let regime = if s.full_participation() {
            "full participation"
        } else {
            "partial participation"
        };
        let _ = writeln!(w, "regime: {regime}");
        let n = self.trials.len();
        let _ = writeln!(
            w,
            "connected after corrupting W: {}/{} ({:.4})",
            self.connected_trials(),
            n,
            self.connectivity_rate()
        );
        let _ = writeln!(
            w,
            "xi: mean {:.6} min {:.6}; bound {:.6}, >= bound-{XI_SLACK} in {}/{}",
            self.mean_xi(),
            self.min_xi(),
            self.xi_bound(),
            self.trials_meeting_bound(),
            n
        );
        out
    }
}

/// Trial `t` uses seed `derive_seed(base_seed, [t])`. Trials run in parallel;
/// results are in trial order.
pub fn run_theorem_check(
    spec: TheoremInstanceSpec,
    trials: usize,
    base_seed: u64,
) -> Result<TheoremReport> {
    let layout = spec.layout()?;
    let trials = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(base_seed, &[t]);
            let (_, out) = theorem_trial(spec, seed)?;
            Ok(TrialResult {
                seed,
                connected: out.lcc_size == out.honest,
                xi: out.xi,
                honest: out.honest,
                edges_added: out.edges_added,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if trials.is_empty() {
        return Err(crate::error::CliError::usage("trials must be >= 1"));
    }
    Ok(TheoremReport {
        spec,
        layout,
        trials,
    })
}
