//! Strong-monogamy decomposition of the one-vs-rest entanglement of a
//! permutation-invariant state into all its `K`-partite contributions.
//!
//! With full symmetry every `K`-partite term depends only on `K`, and
//!
//! ```text
//! E^{1|K} = sum_{k=1}^{K} C(K, k) e_{k+1}
//! ```
//!
//! where `E^{1|K}` is the bipartite entanglement between the probe and `K`
//! other parties and `e_m` is the genuine `m`-partite term. Resolving this
//! bottom-up gives every `e_m`; inverting it in one step gives the alternating
//! closed form `e_N = sum_K C(N-1, K) (-1)^{K+N+1} E^{1|K}`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::closed_forms::ContangleValue;
use crate::config::{rel_diff, Tolerances};
use crate::error::{domain, Error, Result};
use crate::precision::{big_to_rational, binomial_row};

use super::residual::ResidualEvaluator;

/// Scalar field the decomposition can be carried out in.
pub trait Weight: Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_count(c: &BigUint) -> Self;
}

impl Weight for f64 {
    fn from_count(c: &BigUint) -> Self {
        c.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Weight for BigRational {
    fn from_count(c: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(c.clone()))
    }
}

/// Resolves the symmetric recursion bottom-up.
///
/// `bipartite[K - 1]` holds `E^{1|K}` for `K = 1..=N-1`; the result holds
/// `e_m` at index `m - 2` for `m = 2..=N`.
pub fn resolve_recursion<T: Weight>(bipartite: &[T]) -> Vec<T> {
    let mut terms: Vec<T> = Vec::with_capacity(bipartite.len());
    for (idx, lhs) in bipartite.iter().enumerate() {
        let level = idx + 1;
        let row = binomial_row(level);
        // e_{level+1} = E^{1|level} - sum_{k < level} C(level, k) e_{k+1}
        let mut acc = lhs.clone();
        for (k, e) in terms.iter().enumerate().map(|(i, e)| (i + 1, e)) {
            acc = acc - T::from_count(&row[k]) * e.clone();
        }
        terms.push(acc);
    }
    terms
}

/// `sum_{K=1}^{N-1} C(N-1, K) (-1)^{K+N+1} E^{1|K}` with `N = bipartite.len() + 1`.
pub fn closed_form_sum<T: Weight>(bipartite: &[T]) -> T {
    let n = bipartite.len() + 1;
    let row = binomial_row(n - 1);
    let mut acc = T::zero();
    for (idx, b) in bipartite.iter().enumerate() {
        let k = idx + 1;
        let term = T::from_count(&row[k]) * b.clone();
        acc = if (k + n + 1).is_multiple_of(2) { acc + term } else { acc - term };
    }
    acc
}

/// Residual multipartite entanglement from the bipartite sequence `E^{1|K}`,
/// `K = 1..=N-1`, via the alternating closed form (evaluated exactly).
pub fn symmetric_closed_form(bipartite: &[ContangleValue], n: usize) -> Result<ContangleValue> {
    if n < 2 || bipartite.len() != n - 1 {
        return Err(domain(format!(
            "closed form for N = {n} needs N - 1 bipartite values, got {}",
            bipartite.len()
        )));
    }
    let exact = bipartite
        .iter()
        .map(|b| to_rational(b.value()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContangleValue::from_raw(rational_to_f64(&closed_form_sum(&exact))))
}

/// One `K`-partite contribution with its multiplicity `C(N-1, K-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub multiplicity: BigUint,
    pub value: f64,
}

/// Strong-monogamy decomposition of `E^{p|(rest)}` for an `N`-party symmetric state.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub parties: usize,
    /// Probe labeling that attained the minimum residual.
    pub probe: usize,
    /// Probe labelings that were evaluated.
    pub probes_checked: Vec<usize>,
    /// `K`-partite terms for `2 <= K <= N-1`; for `N = 2` the single bipartite term.
    pub terms: BTreeMap<usize, DecompositionTerm>,
    pub bipartite_total: f64,
    pub weak_residual: f64,
    pub strong_residual: f64,
}

impl Decomposition {
    /// `bipartite_total - sum(terms) - strong_residual`.
    pub fn bookkeeping_error(&self) -> f64 {
        let mut acc = self.bipartite_total - self.strong_residual;
        for t in self.terms.values() {
            acc -= f64::from_count(&t.multiplicity) * t.value;
        }
        acc
    }

    /// Genuine `K`-partite values `e_K` for `K = 2..=N` (for `N = 2` only `K = 2`).
    pub fn genuine_terms(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self.terms.iter().map(|(&k, t)| (k, t.value)).collect();
        if self.parties >= 3 {
            out.push((self.parties, self.strong_residual));
        }
        out
    }
}

fn to_rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Numeric(format!("non-finite bipartite value {v}")))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Representative labels of the `K` parties the probe is paired with.
fn others_for(probe: usize, n: usize, k: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != probe).take(k).collect()
}

/// Resolves the strong-monogamy recursion for `N` parties.
///
/// `bipartite(probe, others)` must return `E^{probe|(others)}`. The
/// recursion is carried out for two different probes (the first and the
/// last party) in exact rational arithmetic on the returned values, and the
/// genuine residual is their minimum; the two must agree, as they do for any
/// permutation-invariant state.
pub fn recursive_decomposition<F>(n: usize, mut bipartite: F) -> Result<Decomposition>
where
    F: FnMut(usize, &[usize]) -> Result<ContangleValue>,
{
    recursive_decomposition_exact(n, |probe, others| to_rational(bipartite(probe, others)?.value()))
}

/// As [`recursive_decomposition`] with an oracle that already yields exact values.
pub fn recursive_decomposition_exact<F>(n: usize, mut bipartite: F) -> Result<Decomposition>
where
    F: FnMut(usize, &[usize]) -> Result<BigRational>,
{
    if n < 2 {
        return Err(domain(format!("decomposition needs at least 2 parties, got {n}")));
    }
    let tol = Tolerances::DEFAULT;
    let probes = [0, n - 1];
    let mut per_probe = Vec::with_capacity(probes.len());
    for &probe in &probes {
        let values = (1..n)
            .map(|k| bipartite(probe, &others_for(probe, n, k)))
            .collect::<Result<Vec<_>>>()?;
        let terms = resolve_recursion(&values);
        per_probe.push((probe, values, terms));
    }

    let residual_of = |terms: &[BigRational]| {
        if n == 2 {
            0.0
        } else {
            rational_to_f64(&terms[n - 2])
        }
    };
    let (first, second) = (&per_probe[0], &per_probe[1]);
    let (r0, r1) = (residual_of(&first.2), residual_of(&second.2));
    if rel_diff(r0, r1) > tol.recursion_rel && (r0 - r1).abs() > tol.strong_vs_weak_abs {
        return Err(Error::ProbeAsymmetry {
            first: first.0,
            first_value: r0,
            second: second.0,
            second_value: r1,
        });
    }
    let (probe, values, terms) = if r1 < r0 { second } else { first };

    let row = binomial_row(n - 1);
    let mut map = BTreeMap::new();
    let upper = if n == 2 { 2 } else { n - 1 };
    for k in 2..=upper {
        map.insert(
            k,
            DecompositionTerm {
                multiplicity: row[k - 1].clone(),
                value: rational_to_f64(&terms[k - 2]),
            },
        );
    }
    let weak = values[n - 2].clone() - BigRational::from_integer(BigInt::from(n - 1)) * values[0].clone();
    Ok(Decomposition {
        parties: n,
        probe: *probe,
        probes_checked: probes.to_vec(),
        terms: map,
        bipartite_total: rational_to_f64(&values[n - 2]),
        weak_residual: rational_to_f64(&weak),
        strong_residual: residual_of(terms),
    })
}

/// Decomposition of `N` kept modes of a pure `(N + M)`-mode symmetric state,
/// with bipartite inputs taken from the extended-precision evaluator at the
/// precision its residual needs.
pub fn gaussian_decomposition(evaluator: &mut ResidualEvaluator, n: usize, m: usize) -> Result<Decomposition> {
    if n < 2 {
        return Err(domain(format!("decomposition needs at least 2 parties, got {n}")));
    }
    let bits = if evaluator.r_bar() == 0.0 {
        crate::precision::MIN_PRECISION_BITS
    } else {
        evaluator.residual_big(n, m)?.bits
    };
    let t = n + m;
    recursive_decomposition_exact(n, |_, others| big_to_rational(&evaluator.bipartite_big(others.len(), t, bits)?))
}
