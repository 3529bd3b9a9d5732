//! Closed-form determinants, localized purities and bipartite contangles of
//! symmetric Gaussian states.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::gaussian::check_squeezing;

/// A Gaussian contangle value (squared-arcsinh entanglement), nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ContangleValue(f64);

impl ContangleValue {
    pub const ZERO: ContangleValue = ContangleValue(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Numeric(format!("contangle must be finite and nonnegative, got {value}")));
        }
        Ok(ContangleValue(value))
    }

    /// Wraps a value without the sign check; used for residuals that may
    /// carry rounding-level negative noise.
    pub(crate) fn from_raw(value: f64) -> Self {
        ContangleValue(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ContangleValue> for f64 {
    fn from(c: ContangleValue) -> f64 {
        c.0
    }
}

impl fmt::Display for ContangleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Global and local purities of the two-mode state onto which an `L x K`
/// bipartition localizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityTriple {
    pub global_: f64,
    pub local_l: f64,
    pub local_k: f64,
}

/// `asinh(x)`, accurate in relative terms down to tiny arguments.
pub fn arcsinh(x: f64) -> f64 {
    let a = x.abs();
    let y = if a < 1e-8 {
        a - a * a * a / 6.0
    } else if a > 1e150 {
        (2.0 * a).ln()
    } else {
        let a2 = a * a;
        (a + a2 / (1.0 + (1.0 + a2).sqrt())).ln_1p()
    };
    y.copysign(x)
}

/// `asinh(x)^2`.
pub fn arcsinh_sq(x: f64) -> f64 {
    let a = arcsinh(x);
    a * a
}

/// `det sigma_K^(N) = [2K^2 - 2NK + 2(N-K)K cosh(4 r) + N^2] / N^2`, evaluated as
/// `1 + 4 K (N-K) sinh^2(2 r) / N^2` to avoid cancellation at small squeezing.
pub fn det_reduced(k: usize, n: usize, r_bar: f64) -> Result<f64> {
    if k < 1 || k > n {
        return Err(domain(format!("det_reduced needs 1 <= K <= N, got K = {k}, N = {n}")));
    }
    check_squeezing(r_bar)?;
    let s = (2.0 * r_bar).sinh();
    let ratio = (k as f64 * (n - k) as f64) / (n as f64 * n as f64);
    let det = 1.0 + 4.0 * ratio * s * s;
    if !det.is_finite() {
        return Err(Error::Numeric(format!("determinant overflow at r_bar = {r_bar}")));
    }
    Ok(det)
}

/// Purities `([det s_{L+K}]^{-1/2}, [det s_L]^{-1/2}, [det s_K]^{-1/2})`.
pub fn localized_purities(l: usize, k: usize, n: usize, r_bar: f64) -> Result<PurityTriple> {
    if l < 1 || k < 1 || l + k > n {
        return Err(domain(format!(
            "localized purities need L, K >= 1 and L + K <= N, got L = {l}, K = {k}, N = {n}"
        )));
    }
    let mu = |m: usize| det_reduced(m, n, r_bar).map(|d| d.powf(-0.5));
    Ok(PurityTriple {
        global_: mu(l + k)?,
        local_l: mu(l)?,
        local_k: mu(k)?,
    })
}

/// `f_j = asinh^2[2 sqrt(N-1-j) sinh(2r) / (sqrt(M+N) sqrt(e^{4r}(j+M) + N - j))]`,
/// the contangle between one mode and `N - 1 - j` others of the `N`-mode
/// reduction of a pure `(N+M)`-mode symmetric state.
pub fn f_tau(j: usize, n: usize, m: usize, r_bar: f64) -> Result<ContangleValue> {
    if n < 2 {
        return Err(domain(format!("f_tau needs N >= 2, got {n}")));
    }
    if j > n - 2 {
        return Err(domain(format!("f_tau needs j <= N - 2, got j = {j}, N = {n}")));
    }
    check_squeezing(r_bar)?;
    if r_bar == 0.0 {
        return Ok(ContangleValue::ZERO);
    }
    let num = 2.0 * ((n - 1 - j) as f64).sqrt() * (2.0 * r_bar).sinh();
    let den = ((m + n) as f64).sqrt() * ((4.0 * r_bar).exp() * (j + m) as f64 + (n - j) as f64).sqrt();
    finite_contangle(arcsinh_sq(num / den))
}

/// Contangle between one mode and `K` other modes of a pure `T`-mode
/// symmetric state (the remaining `T - 1 - K` modes are traced out).
pub fn bipartite_contangle_one_vs_k(k: usize, t: usize, r_bar: f64) -> Result<ContangleValue> {
    if t < 2 {
        return Err(domain(format!("need at least 2 modes, got T = {t}")));
    }
    if k < 1 || k >= t {
        return Err(domain(format!("need 1 <= K <= T - 1, got K = {k}, T = {t}")));
    }
    check_squeezing(r_bar)?;
    if r_bar == 0.0 {
        return Ok(ContangleValue::ZERO);
    }
    let e4 = (4.0 * r_bar).exp();
    let x = 2.0 * (k as f64).sqrt() * (2.0 * r_bar).sinh()
        / ((t as f64).sqrt() * (e4 * (t - 1 - k) as f64 + (k + 1) as f64).sqrt());
    finite_contangle(arcsinh_sq(x))
}

fn finite_contangle(v: f64) -> Result<ContangleValue> {
    if v.is_finite() {
        ContangleValue::new(v)
    } else {
        Err(Error::Numeric("contangle overflow; squeezing too large for binary64".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::rel_diff;

    #[test]
    fn arcsinh_matches_std_and_series() {
        for &x in &[0.0, 1e-300, 1e-12, 3e-9, 1e-7, 0.1, 1.0, 37.0, 1e100, -2.5] {
            let ours = arcsinh(x);
            let std = x.asinh();
            assert!(rel_diff(ours, std) < 4e-16, "x = {x}: {ours} vs {std}");
        }
        assert_eq!(arcsinh(0.0), 0.0);
        assert!(rel_diff(arcsinh(1e-9), 1e-9) < 1e-17);
        assert!(arcsinh(1e200).is_finite());
    }

    #[test]
    fn det_reduced_limits() {
        for n in 1..10 {
            assert_eq!(det_reduced(n, n, 1.7).unwrap(), 1.0);
            for k in 1..=n {
                assert_eq!(det_reduced(k, n, 0.0).unwrap(), 1.0);
            }
        }
        let d = det_reduced(1, 3, 0.5).unwrap();
        assert!(rel_diff(d, (5.0 + 4.0 * 2f64.cosh()) / 9.0) < 1e-15);
        assert!((d - 2.22764).abs() < 1e-5);
    }

    #[test]
    fn det_reduced_matches_bracket_form() {
        for n in 1..15usize {
            for k in 1..=n {
                for r in [0.3f64, 1.0, 2.0] {
                    let (nf, kf) = (n as f64, k as f64);
                    let bracket = (2.0 * kf * kf - 2.0 * nf * kf + 2.0 * (nf - kf) * (4.0 * r).cosh() * kf
                        + nf * nf)
                        / (nf * nf);
                    assert!(rel_diff(det_reduced(k, n, r).unwrap(), bracket) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn det_reduced_domain() {
        assert!(det_reduced(0, 3, 0.1).is_err());
        assert!(det_reduced(4, 3, 0.1).is_err());
        assert!(det_reduced(1, 3, -0.1).is_err());
    }

    #[test]
    fn det_reduced_complement_symmetry() {
        for n in 2..30 {
            for k in 1..n {
                for &r in &[0.05, 0.7, 2.5] {
                    assert_eq!(det_reduced(k, n, r).unwrap(), det_reduced(n - k, n, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn purity_triples() {
        for r in [0.0f64, 0.3, 1.2] {
            let t = localized_purities(1, 1, 2, r).unwrap();
            let c = 1.0 / (2.0 * r).cosh();
            assert!((t.global_ - 1.0).abs() < 1e-15);
            assert!(rel_diff(t.local_l, c) < 1e-14);
            assert!(rel_diff(t.local_k, c) < 1e-14);
        }
        assert_eq!(
            localized_purities(2, 3, 9, 0.0).unwrap(),
            PurityTriple { global_: 1.0, local_l: 1.0, local_k: 1.0 }
        );
        assert_eq!(localized_purities(1, 2, 3, 0.77).unwrap().global_, 1.0);
        assert!(localized_purities(2, 2, 3, 0.5).is_err());
        assert!(localized_purities(0, 2, 3, 0.5).is_err());
    }

    #[test]
    fn f_tau_examples() {
        assert_eq!(f_tau(0, 3, 0, 0.0).unwrap(), ContangleValue::ZERO);
        // Independent high-precision evaluation: 0.913383751002587, 0.184499252030474.
        let f0 = f_tau(0, 3, 0, 0.5).unwrap().value();
        let f1 = f_tau(1, 3, 0, 0.5).unwrap().value();
        assert!(rel_diff(f0, 0.913383751002587) < 1e-13);
        assert!(rel_diff(f1, 0.184499252030474) < 1e-13);
        assert!(rel_diff(f0, arcsinh_sq(2.0 * 2f64.sqrt() * 1f64.sinh() / 3.0)) < 1e-15);
        let expect1 = arcsinh_sq(2.0 * 1f64.sinh() / (3f64.sqrt() * (1f64.exp().powi(2) + 2.0).sqrt()));
        assert!(rel_diff(f1, expect1) < 1e-15);
        // Pure-state form: asinh^2 sqrt(det sigma_1 - 1).
        let d = det_reduced(1, 3, 0.5).unwrap();
        assert!(rel_diff(f0, arcsinh_sq((d - 1.0).sqrt())) < 1e-14);
    }

    #[test]
    fn f_tau_domain() {
        assert!(f_tau(2, 3, 0, 0.5).is_err());
        assert!(f_tau(0, 1, 0, 0.5).is_err());
        assert!(f_tau(0, 3, 0, -1.0).is_err());
    }

    #[test]
    fn bipartite_examples() {
        for &r in &[0.1, 0.5, 1.3] {
            let two = bipartite_contangle_one_vs_k(1, 2, r).unwrap().value();
            assert!(rel_diff(two, 4.0 * r * r) < 1e-14, "{two} vs {}", 4.0 * r * r);
        }
        for t in 2..=12usize {
            for &r in &[0.2, 0.9, 2.0] {
                let pure = bipartite_contangle_one_vs_k(t - 1, t, r).unwrap().value();
                let direct = arcsinh_sq(2.0 * ((t - 1) as f64).sqrt() * (2.0 * r).sinh() / t as f64);
                let via_det = arcsinh_sq((det_reduced(1, t, r).unwrap() - 1.0).sqrt());
                assert!(rel_diff(pure, direct) < 1e-14);
                assert!(rel_diff(pure, via_det) < 1e-12);
            }
            for k in 1..t {
                assert_eq!(bipartite_contangle_one_vs_k(k, t, 0.0).unwrap(), ContangleValue::ZERO);
            }
        }
        assert!(bipartite_contangle_one_vs_k(3, 3, 0.5).is_err());
        assert!(bipartite_contangle_one_vs_k(0, 3, 0.5).is_err());
    }

    #[test]
    fn reduction_consistency() {
        for n in 2..=30usize {
            for m in 0..=10usize {
                for j in 0..=n - 2 {
                    for &r in &[0.01, 0.4, 1.5, 3.0] {
                        let a = f_tau(j, n, m, r).unwrap().value();
                        let b = bipartite_contangle_one_vs_k(n - 1 - j, n + m, r).unwrap().value();
                        assert!(rel_diff(a, b) <= 1e-12, "j={j} N={n} M={m} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn f_tau_monotone_in_j_and_squeezing() {
        for n in 2..=30usize {
            for m in 0..=10usize {
                let grid: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
                for &r in &grid {
                    for j in 1..=n.saturating_sub(2) {
                        assert!(f_tau(j, n, m, r).unwrap() < f_tau(j - 1, n, m, r).unwrap());
                    }
                }
                for j in 0..=n - 2 {
                    for w in grid.windows(2) {
                        assert!(f_tau(j, n, m, w[1]).unwrap() > f_tau(j, n, m, w[0]).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn tiny_squeezing_keeps_relative_accuracy() {
        // asinh(x)^2 -> x^2 as r -> 0.
        let r = 1e-9f64;
        let x = 2.0 * 2f64.sqrt() * (2.0 * r).sinh() / 3.0;
        let f = f_tau(0, 3, 0, r).unwrap().value();
        assert!(rel_diff(f, x * x) < 1e-10);
    }
}
