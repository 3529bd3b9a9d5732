//! Multipartitions of a symmetric state into "molecules" of `n` modes each.

use crate::closed_forms::{det_reduced, ContangleValue};
use crate::config::{rel_diff, Tolerances};
use crate::error::{domain, Error, Result};
use crate::gaussian::SymmetricState;

use super::residual::residual_contangle;

/// `count` parties, each made of `size` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoleculePartition {
    pub size: usize,
    pub count: usize,
}

impl MoleculePartition {
    pub fn new(size: usize, count: usize) -> Result<Self> {
        if size < 1 {
            return Err(domain("molecule size must be at least 1"));
        }
        if count < 2 {
            return Err(domain(format!("need at least 2 molecules, got {count}")));
        }
        Ok(MoleculePartition { size, count })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MolecularReport {
    pub residual: ContangleValue,
    /// Largest relative gap between `det sigma_{nK}^{(nT)}` and `det sigma_K^{(T)}`.
    pub max_det_rel_diff: f64,
    pub dets_checked: usize,
}

/// Genuine multipartite contangle among `part.count` molecules of a pure
/// symmetric state of `part.size * (part.count + traced)` modes, of which
/// `traced` molecules are traced out.
///
/// Every reduction the localized two-mode states are built from is checked
/// at molecular scale against the single-mode scale; the residual is then
/// the single-mode one.
pub fn molecular_residual(part: &MoleculePartition, traced: usize, r_bar: f64) -> Result<MolecularReport> {
    let tol = Tolerances::DEFAULT;
    let total = part.count + traced;
    let n = part.size;
    let mut worst = 0.0f64;
    for k in 1..=total {
        let single = det_reduced(k, total, r_bar)?;
        let molecular = det_reduced(n * k, n * total, r_bar)?;
        let gap = rel_diff(single, molecular);
        if gap > tol.molecular_rel {
            return Err(Error::Internal(format!(
                "molecular determinant det_{}^({}) = {molecular} differs from det_{k}^({total}) = {single}",
                n * k,
                n * total
            )));
        }
        worst = worst.max(gap);
    }
    let residual = residual_contangle(&SymmetricState::new(part.count, traced, r_bar)?)?;
    Ok(MolecularReport {
        residual,
        max_det_rel_diff: worst,
        dets_checked: total,
    })
}

/// Residuals of every equal-size molecular partition of `total_modes` pure
/// modes, ordered by increasing molecule size.
pub fn partitions_of(total_modes: usize, r_bar: f64) -> Result<Vec<(MoleculePartition, ContangleValue)>> {
    (1..=total_modes / 2)
        .filter(|size| total_modes.is_multiple_of(*size))
        .map(|size| {
            let part = MoleculePartition::new(size, total_modes / size)?;
            Ok((part, molecular_residual(&part, 0, r_bar)?.residual))
        })
        .collect()
}
