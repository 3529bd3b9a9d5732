//! Optimal fidelity of `N`-party teleportation networks with pure symmetric
//! resources, and its relation to the residual contangle.
//!
//! The squeezing is tied to the optimal fidelity by
//! `r = (1/4) ln{1 + N (2F - 1) / [2 (F - 1)^2]}`, equivalently
//! `2 (e^{4r} - 1)(F - 1)^2 = N (2F - 1)`.

use crate::closed_forms::ContangleValue;
use crate::error::{domain, Result};
use crate::gaussian::{check_squeezing, SymmetricState};
use crate::monogamy::residual_contangle;

/// Best teleportation fidelity without shared entanglement.
pub const CLASSICAL_FIDELITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityPoint {
    pub parties: usize,
    pub r_bar: f64,
    pub fidelity: f64,
}

impl FidelityPoint {
    pub fn from_squeezing(parties: usize, r_bar: f64) -> Result<Self> {
        Ok(FidelityPoint {
            parties,
            r_bar,
            fidelity: fidelity_from_squeezing(parties, r_bar)?,
        })
    }
}

fn check_parties(n: usize) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("teleportation network needs N >= 2, got {n}")));
    }
    Ok(())
}

/// Average squeezing needed for optimal fidelity `F`.
pub fn squeezing_from_fidelity(n: usize, fidelity: f64) -> Result<f64> {
    check_parties(n)?;
    if !(CLASSICAL_FIDELITY..1.0).contains(&fidelity) {
        return Err(domain(format!("fidelity must lie in [1/2, 1), got {fidelity}")));
    }
    let gap = 1.0 - fidelity;
    let ratio = n as f64 * (2.0 * fidelity - 1.0) / (2.0 * gap * gap);
    Ok(0.25 * ratio.ln_1p())
}

/// Optimal fidelity for average squeezing `r`.
///
/// With `u = 1 - F` the relation is the quadratic
/// `2 (e^{4r} - 1) u^2 + 2 N u - N = 0`; its root in `(0, 1/2]` is taken in
/// the rationalized form `u = N / (N + sqrt(N^2 + 2 N (e^{4r} - 1)))`, which
/// gives exactly `1/2` at `r = 0`.
pub fn fidelity_from_squeezing(n: usize, r_bar: f64) -> Result<f64> {
    check_parties(n)?;
    check_squeezing(r_bar)?;
    let nf = n as f64;
    let em1 = (4.0 * r_bar).exp_m1();
    let u = nf / (nf + (nf * nf + 2.0 * nf * em1).sqrt());
    Ok(1.0 - u)
}

/// Residual contangle of the pure `N`-mode resource reaching fidelity `F`.
pub fn residual_from_fidelity(n: usize, fidelity: f64) -> Result<ContangleValue> {
    let r = squeezing_from_fidelity(n, fidelity)?;
    residual_contangle(&SymmetricState::new(n, 0, r)?)
}
