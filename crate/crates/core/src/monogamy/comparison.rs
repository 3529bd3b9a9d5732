//! Comparison sequences `f~_j(a, b, c) = (N-1-j) / [(N-1)(c + b j^a)]` used to
//! bound the decay of the contangle terms, and their alternating sums.

use astro_float::{BigFloat, RoundingMode};
use statrs::function::gamma::ln_gamma;

use crate::closed_forms::f_tau;
use crate::config::Tolerances;
use crate::error::{domain, Result};
use crate::precision::{alternating_binomial_sum, binomial_row_big, escalate, new_consts, starting_precision, RM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonSequence {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
}

impl ComparisonSequence {
    pub fn new(a: f64, b: f64, c: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(domain(format!("exponent a must be finite and nonnegative, got {a}")));
        }
        if !(b.is_finite() && b > 0.0 && c.is_finite() && c > 0.0) {
            return Err(domain(format!("b and c must be finite and positive, got b = {b}, c = {c}")));
        }
        if n < 2 {
            return Err(domain(format!("comparison sequence needs N >= 2, got {n}")));
        }
        Ok(ComparisonSequence { a, b, c, n })
    }

    fn integer_exponent(&self) -> Option<usize> {
        (self.a.fract() == 0.0 && self.a <= 64.0).then_some(self.a as usize)
    }
}

/// `f~_j = (N-1-j) / [(N-1)(c + b j^a)]` for `0 <= j <= N-1`.
pub fn comparison_value(seq: &ComparisonSequence, j: usize) -> Result<f64> {
    if j > seq.n - 1 {
        return Err(domain(format!("index j = {j} exceeds N - 1 = {}", seq.n - 1)));
    }
    let nm1 = (seq.n - 1) as f64;
    Ok((nm1 - j as f64) / (nm1 * (seq.c + seq.b * (j as f64).powf(seq.a))))
}

/// `sum_{j=0}^{N-2} C(N-1, j) (-1)^j f~_j`, evaluated in extended precision.
pub fn comparison_alternating_sum(seq: &ComparisonSequence) -> Result<f64> {
    let n = seq.n;
    let tol = Tolerances::DEFAULT;
    let binom = binomial_row_big(n - 1);
    let mut consts = new_consts()?;
    let int_exp = seq.integer_exponent();
    let context = format!("comparison sum a = {}, b = {}, c = {}, N = {n}", seq.a, seq.b, seq.c);
    let out = escalate(starting_precision(n, &tol), &tol, &context, |p| {
        let b = BigFloat::from_f64(seq.b, p);
        let c = BigFloat::from_f64(seq.c, p);
        let a = BigFloat::from_f64(seq.a, p);
        let nm1 = BigFloat::from_u64((n - 1) as u64, p);
        let terms: Vec<BigFloat> = (0..=n - 2)
            .map(|j| {
                let jb = BigFloat::from_u64(j as u64, p);
                let pow = match (j, int_exp) {
                    (0, Some(0)) => BigFloat::from_word(1, p),
                    (0, _) => BigFloat::from_word(0, p),
                    (_, Some(k)) => jb.powi(k, p, RM),
                    // Directed rounding of pow never terminates on exact results such as 4^0.5.
                    (_, None) => jb.pow(&a, p, RoundingMode::None, &mut consts),
                };
                let den = nm1.mul(&c.add(&b.mul(&pow, p, RM), p, RM), p, RM);
                BigFloat::from_u64((n - 1 - j) as u64, p).div(&den, p, RM)
            })
            .collect();
        Ok(alternating_binomial_sum(&binom[..=n - 2], &terms, p))
    })?;
    Ok(out.to_f64())
}

/// `Gamma(c/b) Gamma(N-1) / [b Gamma(N-1+c/b)]`, the value of the alternating sum at `a = 1`.
pub fn gamma_closed_form(b: f64, c: f64, n: usize) -> Result<f64> {
    if n < 2 || !(b > 0.0 && c > 0.0) {
        return Err(domain(format!("gamma form needs N >= 2 and b, c > 0, got N = {n}, b = {b}, c = {c}")));
    }
    let x = c / b;
    let m = (n - 1) as f64;
    Ok((ln_gamma(x) + ln_gamma(m) - ln_gamma(m + x)).exp() / b)
}

/// Constants with `f~_j(1, b_hi, c_hi) <= f_j / f_0 <= f~_j(1, b_lo, c_lo)` for
/// `j = 0..=N-1`. Numerical evidence for one `(N, M, r)`, not a proof.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonBounds {
    pub b_lo: f64,
    pub c_lo: f64,
    pub b_hi: f64,
    pub c_hi: f64,
}

/// Searches for sandwiching comparison constants for the normalized
/// contangle terms of `N` kept out of `N + M` modes.
///
/// The normalization fixes `c = 1`; `b_hi` is the smallest and `b_lo` the
/// largest admissible slope. Returns `None` when no positive `b_lo` exists or
/// the squeezing vanishes.
pub fn comparison_bounds(n: usize, m: usize, r_bar: f64) -> Result<Option<ComparisonBounds>> {
    if n < 3 {
        return Err(domain(format!("comparison bounds need N >= 3, got {n}")));
    }
    let f0 = f_tau(0, n, m, r_bar)?.value();
    if f0 == 0.0 {
        return Ok(None);
    }
    let nm1 = (n - 1) as f64;
    let mut b_lo = f64::INFINITY;
    let mut b_hi = 0.0f64;
    for j in 1..=n - 2 {
        let g = f_tau(j, n, m, r_bar)?.value() / f0;
        // f~_j(1, b, 1) = g  <=>  b = [(N-1-j) / ((N-1) g) - 1] / j
        let b = ((nm1 - j as f64) / (nm1 * g) - 1.0) / j as f64;
        b_lo = b_lo.min(b);
        b_hi = b_hi.max(b);
    }
    if b_lo.is_nan() || b_lo <= 0.0 || !b_hi.is_finite() {
        return Ok(None);
    }
    Ok(Some(ComparisonBounds {
        b_lo,
        c_lo: 1.0,
        b_hi,
        c_hi: 1.0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::rel_diff;

    fn seq(a: f64, b: f64, c: f64, n: usize) -> ComparisonSequence {
        ComparisonSequence::new(a, b, c, n).unwrap()
    }

    #[test]
    fn sequence_values() {
        let s = seq(1.0, 1.0, 1.0, 3);
        assert_eq!(comparison_value(&s, 2).unwrap(), 0.0);
        assert_eq!(comparison_value(&s, 0).unwrap(), 1.0);
        assert_eq!(comparison_value(&s, 1).unwrap(), 0.25);
        let s = seq(0.5, 2.0, 4.0, 9);
        assert_eq!(comparison_value(&s, 0).unwrap(), 0.25);
        assert!(comparison_value(&s, 9).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(ComparisonSequence::new(1.0, 0.0, 1.0, 3).is_err());
        assert!(ComparisonSequence::new(1.0, 1.0, -1.0, 3).is_err());
        assert!(ComparisonSequence::new(-1.0, 1.0, 1.0, 3).is_err());
        assert!(ComparisonSequence::new(1.0, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn alternating_sums_small_cases() {
        assert!(rel_diff(comparison_alternating_sum(&seq(1.0, 1.0, 1.0, 3)).unwrap(), 0.5) < 1e-15);
        assert!(rel_diff(comparison_alternating_sum(&seq(1.0, 1.0, 1.0, 4)).unwrap(), 1.0 / 3.0) < 1e-15);
        for &(a, b, c) in &[(0.3, 2.0, 0.7), (1.0, 5.0, 0.1), (2.0, 1.0, 3.0)] {
            let v = comparison_alternating_sum(&seq(a, b, c, 2)).unwrap();
            assert!(rel_diff(v, 1.0 / c) < 1e-15);
        }
    }

    #[test]
    fn gamma_identity_on_grid() {
        for n in 2..=30 {
            for &b in &[0.5, 1.0, 2.0] {
                for &c in &[0.5, 1.0, 2.0] {
                    let sum = comparison_alternating_sum(&seq(1.0, b, c, n)).unwrap();
                    let gamma = gamma_closed_form(b, c, n).unwrap();
                    assert!(rel_diff(sum, gamma) <= 1e-10, "N={n} b={b} c={c}: {sum} vs {gamma}");
                }
            }
        }
        assert!(rel_diff(gamma_closed_form(1.0, 1.0, 4).unwrap(), 1.0 / 3.0) < 1e-14);
    }

    #[test]
    fn sums_positive_for_sublinear_exponents() {
        for n in 2..=40 {
            for &a in &[0.25, 0.5, 0.75, 1.0] {
                assert!(comparison_alternating_sum(&seq(a, 1.3, 0.8, n)).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn bounds_sandwich_normalized_terms() {
        for n in [3usize, 5, 10, 25] {
            for m in [0usize, 3] {
                for &r in &[0.2, 1.0, 2.5] {
                    let Some(bd) = comparison_bounds(n, m, r).unwrap() else {
                        continue;
                    };
                    let lo = seq(1.0, bd.b_hi, bd.c_hi, n);
                    let hi = seq(1.0, bd.b_lo, bd.c_lo, n);
                    let f0 = f_tau(0, n, m, r).unwrap().value();
                    for j in 0..=n - 2 {
                        let g = f_tau(j, n, m, r).unwrap().value() / f0;
                        assert!(comparison_value(&lo, j).unwrap() <= g * (1.0 + 1e-12));
                        assert!(g <= comparison_value(&hi, j).unwrap() * (1.0 + 1e-12));
                    }
                }
            }
        }
        assert_eq!(comparison_bounds(4, 0, 0.0).unwrap(), None);
    }
}
