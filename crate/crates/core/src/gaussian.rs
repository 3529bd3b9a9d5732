//! Covariance matrices of fully symmetric Gaussian states.
//!
//! Matrices use block ordering `(x_1..x_n, p_1..p_n)`, so the symplectic form
//! is `[[0, I], [-I, 0]]` and the states built here are block diagonal.
//! Everything in this module is plain binary64 linear algebra; it serves as
//! the explicit-matrix oracle for the closed forms.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::config::Tolerances;
use crate::error::{domain, Error, Result};

/// Preparation squeezings (natural-log units) of a pure symmetric state.
///
/// `r_m` squeezes the momentum of one distinguished input, `r_p` the
/// position of the other `N - 1` inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParams {
    pub r_m: f64,
    pub r_p: f64,
    pub r_bar: f64,
}

impl SqueezingParams {
    pub fn new(r_m: f64, r_p: f64) -> Result<Self> {
        for (name, v) in [("r_m", r_m), ("r_p", r_p)] {
            if !v.is_finite() || v < 0.0 {
                return Err(domain(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        Ok(SqueezingParams {
            r_m,
            r_p,
            r_bar: 0.5 * (r_m + r_p),
        })
    }

    pub fn vacuum() -> Self {
        SqueezingParams {
            r_m: 0.0,
            r_p: 0.0,
            r_bar: 0.0,
        }
    }
}

/// `N` kept modes of a pure `(N + M)`-mode symmetric state with average squeezing `r_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricState {
    pub kept: usize,
    pub traced: usize,
    pub r_bar: f64,
}

impl SymmetricState {
    pub fn new(kept: usize, traced: usize, r_bar: f64) -> Result<Self> {
        if kept < 1 {
            return Err(domain("kept mode count must be at least 1"));
        }
        check_squeezing(r_bar)?;
        Ok(SymmetricState { kept, traced, r_bar })
    }

    /// Mode count of the underlying pure state.
    pub fn total(&self) -> usize {
        self.kept + self.traced
    }

    /// Errors unless at least two modes are kept, as every multipartite query requires.
    pub fn require_multipartite(&self) -> Result<()> {
        if self.kept < 2 {
            return Err(domain(format!(
                "entanglement query needs at least 2 kept modes, got {}",
                self.kept
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_squeezing(r_bar: f64) -> Result<()> {
    if !r_bar.is_finite() || r_bar < 0.0 {
        return Err(domain(format!("average squeezing must be finite and nonnegative, got {r_bar}")));
    }
    Ok(())
}

/// Real symmetric `2n x 2n` covariance matrix in block `(x, p)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a matrix after checking shape and symmetry.
    pub fn from_matrix(data: DMatrix<f64>) -> Result<Self> {
        let (r, c) = data.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(domain(format!("covariance matrix must be 2n x 2n, got {r} x {c}")));
        }
        let cm = CovarianceMatrix { n: r / 2, data };
        cm.check_symmetric(Tolerances::DEFAULT.symmetry_rel)?;
        Ok(cm)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("mode count must be positive"));
        }
        Ok(CovarianceMatrix {
            n,
            data: DMatrix::identity(2 * n, 2 * n),
        })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn x_block(&self) -> DMatrix<f64> {
        self.data.view((0, 0), (self.n, self.n)).into_owned()
    }

    pub fn p_block(&self) -> DMatrix<f64> {
        self.data.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    pub fn determinant(&self) -> f64 {
        self.data.clone().lu().determinant()
    }

    fn check_symmetric(&self, rel: f64) -> Result<()> {
        let scale = self.data.amax().max(f64::MIN_POSITIVE);
        let asym = (&self.data - self.data.transpose()).amax();
        if asym > rel * scale {
            return Err(domain(format!("matrix is not symmetric (asymmetry {asym:e})")));
        }
        Ok(())
    }
}

/// Pure permutation-invariant `N`-mode state produced by mixing one
/// momentum-squeezed and `N - 1` position-squeezed inputs.
///
/// `sigma_x = e^{-2 r_p} I + (e^{2 r_m} - e^{-2 r_p}) J / N` and
/// `sigma_p = e^{2 r_p} I + (e^{-2 r_m} - e^{2 r_p}) J / N`, `J` the all-ones matrix.
pub fn build_pure_symmetric_cm(n: usize, sq: &SqueezingParams) -> Result<CovarianceMatrix> {
    if n == 0 {
        return Err(domain("mode count must be positive"));
    }
    SqueezingParams::new(sq.r_m, sq.r_p)?;
    if sq.r_m == 0.0 && sq.r_p == 0.0 {
        return CovarianceMatrix::identity(n);
    }
    let nf = n as f64;
    let (em, ep) = ((2.0 * sq.r_m).exp(), (2.0 * sq.r_p).exp());
    let x_diag = 1.0 / ep;
    let x_all = (em - 1.0 / ep) / nf;
    let p_diag = ep;
    let p_all = (1.0 / em - ep) / nf;

    let mut data = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            data[(i, j)] = delta * x_diag + x_all;
            data[(n + i, n + j)] = delta * p_diag + p_all;
        }
    }
    Ok(CovarianceMatrix { n, data })
}

/// Squeezings `(r_m, r_p)` with `r_m + r_p = 2 r_bar` and
/// `sinh(2 r_m) = (N - 1) sinh(2 r_p)`, which balances every single-mode
/// reduction. Solved by bisection on `r_p in [0, 2 r_bar]`.
pub fn solve_standard_form(r_bar: f64, n: usize) -> Result<SqueezingParams> {
    check_squeezing(r_bar)?;
    if n < 2 {
        return Err(domain(format!("standard form needs N >= 2, got {n}")));
    }
    if r_bar == 0.0 {
        return Ok(SqueezingParams::vacuum());
    }
    if n == 2 {
        return SqueezingParams::new(r_bar, r_bar);
    }
    let total = 2.0 * r_bar;
    let weight = (n - 1) as f64;
    // Increasing in r_p: negative at r_p = 0, positive at r_p = 2 r_bar.
    let g = |rp: f64| weight * (2.0 * rp).sinh() - (2.0 * (total - rp)).sinh();
    let (mut lo, mut hi) = (0.0_f64, total);
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(Error::Internal(format!(
            "standard-form constraint not bracketed for r_bar = {r_bar}, N = {n}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rp = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    let rm = total - rp;
    let residual = g(rp).abs();
    let tol = Tolerances::DEFAULT.standard_form_residual;
    // The bracket collapses to adjacent floats; what remains is rounding in sinh.
    let scale = (2.0 * rm).sinh().abs().max(1.0);
    if residual > tol * scale {
        return Err(Error::Internal(format!(
            "standard-form residual {residual:e} exceeds {tol:e} for r_bar = {r_bar}, N = {n}"
        )));
    }
    Ok(SqueezingParams {
        r_m: rm,
        r_p: rp,
        r_bar,
    })
}

/// Reduced state of the modes in `keep` (principal submatrix in both blocks).
pub fn partial_trace(cm: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    if keep.is_empty() {
        return Err(domain("cannot keep an empty set of modes"));
    }
    let n = cm.n;
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n {
            return Err(domain(format!("mode index {k} out of range for {n} modes")));
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(domain(format!("mode index {k} repeated")));
        }
    }
    let idx: Vec<usize> = keep.iter().copied().chain(keep.iter().map(|k| k + n)).collect();
    let m = keep.len();
    let data = DMatrix::from_fn(2 * m, 2 * m, |i, j| cm.data[(idx[i], idx[j])]);
    Ok(CovarianceMatrix { n: m, data })
}

/// Symplectic eigenvalues in descending order.
///
/// Computed as the square roots of the (pairwise degenerate) spectrum of
/// `S^{1/2} Omega^T S Omega S^{1/2}`, which is symmetric positive definite for
/// a positive definite `S`.
pub fn symplectic_eigenvalues(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    cm.check_symmetric(Tolerances::DEFAULT.symmetry_rel)?;
    let n = cm.n;
    let eig = SymmetricEigen::new(cm.data.clone());
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::Numeric("covariance matrix is not positive definite".into()));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let omega = symplectic_form(n);
    let inner = &root * omega.transpose() * &cm.data * &omega * &root;
    let inner = 0.5 * (&inner + inner.transpose());
    let mut vals: Vec<f64> = SymmetricEigen::new(inner)
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}

/// `[[0, I], [-I, 0]]` for `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega[(i, n + i)] = 1.0;
        omega[(n + i, i)] = -1.0;
    }
    omega
}

/// `(det cm)^{-1/2}`.
pub fn purity(cm: &CovarianceMatrix) -> Result<f64> {
    let det = cm.determinant();
    if det.is_nan() || det <= 0.0 || det.is_infinite() {
        return Err(Error::Numeric(format!("determinant {det} is not positive")));
    }
    Ok(det.powf(-0.5))
}

/// Whether every symplectic eigenvalue is at least `1 - tol.physicality`.
pub fn is_physical(cm: &CovarianceMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(symplectic_eigenvalues(cm)?
        .iter()
        .all(|&nu| nu >= 1.0 - tol.physicality))
}

/// Explicit standard-form state reduced to its first `k` modes.
pub fn reduced_standard_form(k: usize, n: usize, r_bar: f64) -> Result<CovarianceMatrix> {
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= K <= N, got K = {k}, N = {n}")));
    }
    let sq = if n == 1 {
        SqueezingParams::new(r_bar, r_bar)?
    } else {
        solve_standard_form(r_bar, n)?
    };
    let full = build_pure_symmetric_cm(n, &sq)?;
    let keep: Vec<usize> = (0..k).collect();
    partial_trace(&full, &keep)
}
