//! Numerical tolerances and precision settings used across the crate.
//!
//! Every threshold that appears in a validation or an internal consistency
//! check is defined here. Tests and the verification suites read the same
//! record so that a change in one place moves every gate together.

/// Tolerance and precision configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative symmetry tolerance for covariance matrices.
    pub symmetry_rel: f64,
    /// Symplectic eigenvalues may undershoot 1 by this much and still count as physical.
    pub physicality: f64,
    /// Absolute residual of the standard-form tuning constraint.
    pub standard_form_residual: f64,
    /// Closed-form determinant vs explicit matrix determinant (relative).
    pub det_oracle_rel: f64,
    /// Closed-form contangle identities (relative).
    pub contangle_identity_rel: f64,
    /// Strong-monogamy bookkeeping: total = terms + residual (relative).
    pub bookkeeping_rel: f64,
    /// Slack allowed in `strong <= weak` and in probe-equality checks.
    pub strong_vs_weak_abs: f64,
    /// Recursion vs closed-form agreement (relative).
    pub recursion_rel: f64,
    /// Gamma-function identity for the comparison sequence (relative).
    pub gamma_rel: f64,
    /// Molecular dual-path agreement (relative).
    pub molecular_rel: f64,
    /// Fidelity roundtrip in squeezing (absolute).
    pub fidelity_roundtrip_abs: f64,
    /// Values below `-positivity_floor` count as positivity violations.
    pub positivity_floor: f64,
    /// Extra bits on top of the mode count for the first precision attempt.
    pub guard_bits: usize,
    /// Lower bound on the first precision attempt (bits); 0 for none.
    pub min_precision_bits: usize,
    /// Escalation gives up beyond this working precision.
    pub max_precision_bits: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        symmetry_rel: 1e-12,
        physicality: 1e-9,
        standard_form_residual: 1e-13,
        det_oracle_rel: 1e-9,
        contangle_identity_rel: 1e-12,
        bookkeeping_rel: 1e-10,
        strong_vs_weak_abs: 1e-12,
        recursion_rel: 1e-12,
        gamma_rel: 1e-10,
        molecular_rel: 1e-14,
        fidelity_roundtrip_abs: 1e-10,
        positivity_floor: 1e-25,
        guard_bits: 64,
        min_precision_bits: 0,
        max_precision_bits: 1 << 16,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Environment variable that overrides the minimum starting precision (bits).
pub const PRECISION_ENV: &str = "STRONGMONO_PRECISION_BITS";

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
