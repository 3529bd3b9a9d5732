//! Genuine multipartite contangle of symmetric Gaussian states, evaluated in
//! extended precision.

use std::collections::HashMap;
use std::rc::Rc;

use astro_float::{BigFloat, Consts};
use num_bigint::BigUint;

use crate::closed_forms::ContangleValue;
use crate::config::Tolerances;
use crate::error::{domain, Result};
use crate::gaussian::{check_squeezing, SymmetricState};
use crate::precision::{
    alternating_binomial_sum, asinh_sq, big_to_f64, binomial_row, binomial_row_big, escalate, new_consts,
    starting_precision, Escalated, RM,
};

/// Extended-precision evaluator for one value of the average squeezing.
///
/// Bipartite contangles depend only on `(K, T)`, so tables of them are cached
/// per total mode count and working precision and shared between all
/// `(N, M)` with `N + M = T`. Not `Sync`; scans use one evaluator per worker.
pub struct ResidualEvaluator {
    r_bar: f64,
    tol: Tolerances,
    consts: Consts,
    squeeze: HashMap<usize, (BigFloat, BigFloat)>,
    tables: HashMap<(usize, usize), Rc<Vec<BigFloat>>>,
    binomials: HashMap<usize, Rc<Vec<BigFloat>>>,
    hints: HashMap<usize, usize>,
}

/// One term `C(N-1, j) (-1)^j f_j` of the residual sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTerm {
    pub j: usize,
    pub binomial: BigUint,
    pub negative: bool,
    pub f: f64,
}

/// Residual together with the precision bookkeeping of its evaluation.
#[derive(Debug, Clone)]
pub struct ResidualEvaluation {
    pub value: f64,
    pub bits: usize,
    /// Largest `|C(N-1, j) f_j|`, i.e. the scale the sum cancelled down from.
    pub max_term: f64,
    pub retained_bits: Option<i64>,
}

impl ResidualEvaluation {
    fn from_escalated(e: &Escalated) -> Self {
        ResidualEvaluation {
            value: e.to_f64(),
            bits: e.bits,
            max_term: big_to_f64(&e.max_term),
            retained_bits: e.retained_bits(),
        }
    }
}

impl ResidualEvaluator {
    pub fn new(r_bar: f64, tol: Tolerances) -> Result<Self> {
        check_squeezing(r_bar)?;
        Ok(ResidualEvaluator {
            r_bar,
            tol,
            consts: new_consts()?,
            squeeze: HashMap::new(),
            tables: HashMap::new(),
            binomials: HashMap::new(),
            hints: HashMap::new(),
        })
    }

    pub fn r_bar(&self) -> f64 {
        self.r_bar
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// `(sinh 2r, e^{4r})` at precision `p`.
    fn squeeze_at(&mut self, p: usize) -> (BigFloat, BigFloat) {
        if let Some(v) = self.squeeze.get(&p) {
            return v.clone();
        }
        let r = BigFloat::from_f64(self.r_bar, p);
        let two_r = r.mul(&BigFloat::from_word(2, p), p, RM);
        let s = two_r.sinh(p, RM, &mut self.consts);
        let e = two_r.mul(&BigFloat::from_word(2, p), p, RM).exp(p, RM, &mut self.consts);
        self.squeeze.insert(p, (s.clone(), e.clone()));
        (s, e)
    }

    /// Contangles `E^{1|K}` for `K = 0..T` (entry 0 is zero) of a pure `T`-mode state.
    fn table(&mut self, t: usize, p: usize) -> Rc<Vec<BigFloat>> {
        if let Some(tab) = self.tables.get(&(t, p)) {
            return Rc::clone(tab);
        }
        let (s, e) = self.squeeze_at(p);
        let two_s = s.mul(&BigFloat::from_word(2, p), p, RM);
        let t_big = BigFloat::from_u64(t as u64, p);
        let mut tab = Vec::with_capacity(t);
        tab.push(BigFloat::from_word(0, p));
        for k in 1..t {
            // x = 2 sinh(2r) sqrt(K / (T (e^{4r} (T-1-K) + K + 1)))
            let inner = e
                .mul(&BigFloat::from_u64((t - 1 - k) as u64, p), p, RM)
                .add(&BigFloat::from_u64((k + 1) as u64, p), p, RM)
                .mul(&t_big, p, RM);
            let ratio = BigFloat::from_u64(k as u64, p).div(&inner, p, RM);
            let x = two_s.mul(&ratio.sqrt(p, RM), p, RM);
            tab.push(asinh_sq(&x, p, &mut self.consts));
        }
        let tab = Rc::new(tab);
        self.tables.insert((t, p), Rc::clone(&tab));
        tab
    }

    fn binomials(&mut self, row: usize) -> Rc<Vec<BigFloat>> {
        Rc::clone(
            self.binomials
                .entry(row)
                .or_insert_with(|| Rc::new(binomial_row_big(row))),
        )
    }

    /// `E^{1|K}` of a pure `T`-mode state at precision `p`.
    pub fn bipartite_big(&mut self, k: usize, t: usize, p: usize) -> Result<BigFloat> {
        if t < 2 || k < 1 || k >= t {
            return Err(domain(format!("need 1 <= K <= T - 1, got K = {k}, T = {t}")));
        }
        Ok(self.table(t, p)[k].clone())
    }

    fn start_bits(&self, n: usize, m: usize) -> usize {
        let base = starting_precision(n, &self.tol);
        self.hints.get(&m).copied().unwrap_or(0).max(base)
    }

    fn residual_escalated(&mut self, n: usize, m: usize) -> Result<Escalated> {
        let t = n + m;
        let start = self.start_bits(n, m);
        let binom = self.binomials(n - 1);
        let tol = self.tol;
        let context = format!("residual N = {n}, M = {m}, r_bar = {}", self.r_bar);
        let out = escalate(start, &tol, &context, |p| {
            let tab = self.table(t, p);
            // f_j = E^{1|K} with K = N - 1 - j.
            let terms: Vec<BigFloat> = (0..=n - 2).map(|j| tab[n - 1 - j].clone()).collect();
            Ok(alternating_binomial_sum(&binom[..=n - 2], &terms, p))
        })?;
        self.hints.insert(m, out.bits);
        Ok(out)
    }

    /// `sum_{j=0}^{N-2} C(N-1, j) (-1)^j f_j` for `N` kept out of `N + M` modes.
    pub fn residual(&mut self, n: usize, m: usize) -> Result<ResidualEvaluation> {
        if n < 2 {
            return Err(domain(format!("residual needs at least 2 kept modes, got {n}")));
        }
        if self.r_bar == 0.0 {
            return Ok(ResidualEvaluation {
                value: 0.0,
                bits: 0,
                max_term: 0.0,
                retained_bits: None,
            });
        }
        let out = self.residual_escalated(n, m)?;
        Ok(ResidualEvaluation::from_escalated(&out))
    }

    /// Residual as an extended-precision value with the precision it was accepted at.
    pub fn residual_big(&mut self, n: usize, m: usize) -> Result<Escalated> {
        if n < 2 {
            return Err(domain(format!("residual needs at least 2 kept modes, got {n}")));
        }
        self.residual_escalated(n, m)
    }

    /// `E^{1|(N-1)} - (N-1) E^{1|1}` for `N` kept out of `N + M` modes.
    pub fn weak_residual(&mut self, n: usize, m: usize) -> Result<ResidualEvaluation> {
        if n < 2 {
            return Err(domain(format!("weak residual needs at least 2 kept modes, got {n}")));
        }
        if n == 2 || self.r_bar == 0.0 {
            return Ok(ResidualEvaluation {
                value: 0.0,
                bits: 0,
                max_term: 0.0,
                retained_bits: None,
            });
        }
        let t = n + m;
        let tol = self.tol;
        let context = format!("weak residual N = {n}, M = {m}, r_bar = {}", self.r_bar);
        let start = starting_precision(n, &tol);
        let out = escalate(start, &tol, &context, |p| {
            let tab = self.table(t, p);
            let pairwise = tab[1].mul(&BigFloat::from_u64((n - 1) as u64, p), p, RM);
            let total = tab[n - 1].clone();
            let max = if total.abs_cmp(&pairwise) == Some(1) { total.clone() } else { pairwise.clone() };
            Ok((total.sub(&pairwise, p, RM), max))
        })?;
        Ok(ResidualEvaluation::from_escalated(&out))
    }

    /// The individual terms of the residual sum, in binary64.
    pub fn terms(&mut self, n: usize, m: usize) -> Result<Vec<ResidualTerm>> {
        if n < 2 {
            return Err(domain(format!("residual needs at least 2 kept modes, got {n}")));
        }
        let p = starting_precision(n, &self.tol);
        let tab = self.table(n + m, p);
        Ok(binomial_row(n - 1)
            .into_iter()
            .take(n - 1)
            .enumerate()
            .map(|(j, binomial)| ResidualTerm {
                j,
                binomial,
                negative: j % 2 == 1,
                f: big_to_f64(&tab[n - 1 - j]),
            })
            .collect())
    }
}

/// Genuine `N`-partite Gaussian contangle of `N` modes of a pure `(N + M)`-mode symmetric state.
pub fn residual_contangle(state: &SymmetricState) -> Result<ContangleValue> {
    residual_contangle_with(state, &Tolerances::DEFAULT).map(|e| ContangleValue::from_raw(e.value))
}

/// As [`residual_contangle`], returning precision bookkeeping and honouring custom tolerances.
pub fn residual_contangle_with(state: &SymmetricState, tol: &Tolerances) -> Result<ResidualEvaluation> {
    state.require_multipartite()?;
    ResidualEvaluator::new(state.r_bar, *tol)?.residual(state.kept, state.traced)
}

/// CKW residual `E^{1|(N-1)} - (N-1) E^{1|1}`.
pub fn weak_ckw_residual(state: &SymmetricState) -> Result<f64> {
    state.require_multipartite()?;
    Ok(ResidualEvaluator::new(state.r_bar, Tolerances::DEFAULT)?
        .weak_residual(state.kept, state.traced)?
        .value)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::closed_forms::{bipartite_contangle_one_vs_k, f_tau};
    use crate::config::rel_diff;

    fn state(n: usize, m: usize, r: f64) -> SymmetricState {
        SymmetricState::new(n, m, r).unwrap()
    }

    #[test]
    fn two_modes_is_full_contangle() {
        for &r in &[0.1, 0.5, 2.0] {
            let g = residual_contangle(&state(2, 0, r)).unwrap().value();
            assert!(rel_diff(g, 4.0 * r * r) < 1e-14);
            let b = bipartite_contangle_one_vs_k(1, 2, r).unwrap().value();
            assert!(rel_diff(g, b) < 1e-14);
        }
    }

    #[test]
    fn three_modes_term_by_term() {
        let g = residual_contangle(&state(3, 0, 0.5)).unwrap().value();
        let f0 = f_tau(0, 3, 0, 0.5).unwrap().value();
        let f1 = f_tau(1, 3, 0, 0.5).unwrap().value();
        assert!(rel_diff(g, f0 - 2.0 * f1) < 1e-14);
        // Frozen from a 400-digit independent evaluation.
        assert!(rel_diff(g, 0.54438524694163870471) < 1e-14);
    }

    #[test]
    fn frozen_reference_values() {
        // (N, M, r, value) from an independent 400-digit evaluation of the alternating sum.
        let cases: &[(usize, usize, f64, f64)] = &[
            (5, 0, 1.0, 2.1542800194161854893),
            (4, 1, 1.0, 0.11860247947564156975),
            (10, 0, 1.0, 0.96870737889441901078),
            (100, 0, 1.0, 0.000067519112225434969715),
            (100, 20, 0.05, 2.2666771513318328562e-123),
            (100, 0, 0.05, 1.0362973876794987039e-114),
        ];
        for &(n, m, r, want) in cases {
            let got = residual_contangle(&state(n, m, r)).unwrap().value();
            assert!(rel_diff(got, want) < 1e-13, "N={n} M={m} r={r}: {got:e} vs {want:e}");
        }
    }

    #[test]
    fn vacuum_residual_is_zero() {
        for n in 2..12 {
            for m in 0..4 {
                assert_eq!(residual_contangle(&state(n, m, 0.0)).unwrap().value(), 0.0);
                assert_eq!(weak_ckw_residual(&state(n, m, 0.0)).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn single_mode_rejected() {
        assert!(residual_contangle(&state(1, 3, 0.5)).is_err());
        assert!(weak_ckw_residual(&state(1, 3, 0.5)).is_err());
    }

    #[test]
    fn weak_residual_cases() {
        assert_eq!(weak_ckw_residual(&state(2, 0, 0.9)).unwrap(), 0.0);
        assert_eq!(weak_ckw_residual(&state(2, 5, 0.9)).unwrap(), 0.0);
        let w = weak_ckw_residual(&state(3, 0, 0.5)).unwrap();
        let g = residual_contangle(&state(3, 0, 0.5)).unwrap().value();
        assert!(rel_diff(w, g) < 1e-15);
        for n in 3..20 {
            let w = weak_ckw_residual(&state(n, 2, 0.8)).unwrap();
            assert!(w >= -1e-12);
        }
    }

    #[test]
    fn precision_escalates_for_deep_cancellation() {
        let mut ev = ResidualEvaluator::new(0.05, Tolerances::DEFAULT).unwrap();
        let out = ev.residual(100, 0).unwrap();
        assert!(out.bits >= 1024, "{}", out.bits);
        assert!(out.retained_bits.unwrap() >= out.bits as i64 / 2);
        assert!(out.max_term > 1e20);
    }

    #[test]
    fn terms_expose_binomials_and_signs() {
        let mut ev = ResidualEvaluator::new(0.5, Tolerances::DEFAULT).unwrap();
        let terms = ev.terms(4, 1).unwrap();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[1].binomial, BigUint::from(3u32));
        assert!(terms[1].negative && !terms[2].negative);
        for t in &terms {
            let f = f_tau(t.j, 4, 1, 0.5).unwrap().value();
            assert!(rel_diff(t.f, f) < 1e-14);
        }
        let sum: f64 = terms
            .iter()
            .map(|t| {
                let c = t.binomial.to_string().parse::<f64>().unwrap();
                if t.negative {
                    -c * t.f
                } else {
                    c * t.f
                }
            })
            .sum();
        let g = ev.residual(4, 1).unwrap().value;
        assert!(rel_diff(sum, g) < 1e-12);
    }
}
