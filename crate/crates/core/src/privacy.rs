//! Privacy consequences of xi-strength.
//!
//! For an aggregation protocol run on a xi-strong graph with budget
//! `(ε, δ)`, sensitivity `Δ` and group-size parameter `s`, the protocol is
//! instantiated with `α = exp(ε / Δ)` and `β = 2 ln(1/δ) / s`. Nodes inside
//! the largest honest component get `(ε, δ)`-DP; an arbitrary node gets
//! `(ε, δ + (1 − ξ))`-DP.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Sensitivity.
    pub sensitivity: f64,
    /// Group-size parameter of the aggregation protocol.
    pub s: f64,
    pub xi: f64,
}

impl PrivacyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid(format!(
                "epsilon = {} must be > 0",
                self.epsilon
            )));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::invalid(format!(
                "delta = {} outside [0, 1)",
                self.delta
            )));
        }
        if !(self.sensitivity > 0.0) {
            return Err(Error::invalid(format!(
                "sensitivity = {} must be > 0",
                self.sensitivity
            )));
        }
        if !(self.s > 0.0) {
            return Err(Error::invalid(format!("s = {} must be > 0", self.s)));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::invalid(format!("xi = {} outside [0, 1]", self.xi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaalecParams {
    pub alpha: f64,
    pub beta: f64,
}

pub fn paalec_params(p: &PrivacyParams) -> Result<PaalecParams> {
    p.validate()?;
    if p.delta == 0.0 {
        return Err(Error::invalid(
            "beta = 2 ln(1/delta)/s is undefined for delta = 0",
        ));
    }
    Ok(PaalecParams {
        alpha: (p.epsilon / p.sensitivity).exp(),
        beta: 2.0 * (1.0 / p.delta).ln() / p.s,
    })
}

/// Both guarantees: members of the largest component, and any node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpGuarantee {
    pub component_epsilon: f64,
    pub component_delta: f64,
    pub any_node_epsilon: f64,
    /// `min(1, δ + (1 − ξ))`.
    pub any_node_delta: f64,
}

pub fn dp_guarantee(p: &PrivacyParams) -> Result<DpGuarantee> {
    p.validate()?;
    Ok(DpGuarantee {
        component_epsilon: p.epsilon,
        component_delta: p.delta,
        any_node_epsilon: p.epsilon,
        any_node_delta: (p.delta + (1.0 - p.xi)).min(1.0),
    })
}

/// Heuristic flag only: true when the largest honest component,
/// `ξ · honest_n`, reaches `group_threshold` members, the regime in which
/// noiseless cryptographic aggregation is typically argued to be possible.
pub fn noiseless_aggregation_plausible(xi: f64, honest_n: usize, group_threshold: f64) -> bool {
    xi * honest_n as f64 >= group_threshold
}
