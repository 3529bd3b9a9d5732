//! Extended-precision support for alternating binomial sums.
//!
//! Sums of the form `sum_j C(n, j) (-1)^j t_j` are tiny compared with their
//! largest term once `n` reaches a few dozen, so binary64 returns noise. The
//! helpers here keep binomials as exact integers, evaluate the terms in
//! `astro_float::BigFloat` at a working precision of at least `n + 64` bits,
//! and double that precision until at least half of the working bits survive
//! the cancellation.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::{Tolerances, PRECISION_ENV};
use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest precision the ladder starts from, in bits.
pub const MIN_PRECISION_BITS: usize = 64;

/// Exact binomial coefficients `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for j in 0..n {
        c = c * BigUint::from(n - j) / BigUint::from(j + 1);
        row.push(c.clone());
    }
    row
}

/// Exact conversion of an unsigned integer to a `BigFloat`.
pub fn biguint_to_big(v: &BigUint) -> BigFloat {
    if v.is_zero() {
        return BigFloat::from_word(0, MIN_PRECISION_BITS);
    }
    let words: Vec<Word> = v.to_u64_digits().into_iter().map(|d| d as Word).collect();
    let bits = (words.len() * Word::BITS as usize) as i32;
    BigFloat::from_words(&words, Sign::Pos, bits)
}

/// Nearest-ish binary64 value of a `BigFloat` (truncated to the top 64 bits).
pub fn big_to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, exponent, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    let Some(&top) = words.last() else {
        return 0.0;
    };
    if top == 0 {
        return 0.0;
    }
    // value = 0.m * 2^exponent with the leading mantissa bit at the top of the last word.
    let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    let hi = top;
    let mant = hi as f64 + (next as f64) * 2f64.powi(-64);
    let shift = exponent as i64 - 64;
    let mag = scale_pow2(mant, shift);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

fn scale_pow2(x: f64, mut shift: i64) -> f64 {
    let mut v = x;
    while shift > 1000 {
        v *= 2f64.powi(1000);
        shift -= 1000;
    }
    while shift < -1000 {
        v *= 2f64.powi(-1000);
        shift += 1000;
    }
    v * 2f64.powi(shift as i32)
}

/// Exact rational value of a finite `BigFloat`.
pub fn big_to_rational(v: &BigFloat) -> Result<BigRational> {
    if v.is_zero() {
        return Ok(BigRational::zero());
    }
    let (words, _, sign, exponent, _) = v
        .as_raw_parts()
        .ok_or_else(|| Error::Numeric("non-finite extended value".into()))?;
    let digits: Vec<u64> = words.to_vec();
    let mantissa = BigInt::from(BigUint::new(
        digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect(),
    ));
    let mantissa = if sign == Sign::Neg { -mantissa } else { mantissa };
    // value = mantissa * 2^(exponent - bits)
    let shift = exponent as i64 - (words.len() * Word::BITS as usize) as i64;
    let two = BigInt::from(2u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(mantissa * num_traits::pow(two, shift as usize))
    } else {
        BigRational::new(mantissa, num_traits::pow(two, (-shift) as usize))
    })
}

/// Binary exponent `e` with `|v| in [2^(e-1), 2^e)`; `None` for zero or non-finite values.
pub(crate) fn exponent_of(v: &BigFloat) -> Option<i64> {
    if v.is_zero() || v.is_nan() || v.is_inf() {
        None
    } else {
        v.exponent().map(i64::from)
    }
}

/// First rung of the precision ladder for an alternating sum over `n` binomial terms.
///
/// The ladder is `64 * 2^k` so cached term tables at a given precision can be
/// shared between neighbouring sum lengths.
pub fn starting_precision(n: usize, tol: &Tolerances) -> usize {
    let need = (n + tol.guard_bits).max(tol.min_precision_bits).max(env_precision_floor());
    let mut p = MIN_PRECISION_BITS;
    while p < need {
        p *= 2;
    }
    p
}

/// Minimum starting precision requested through the environment, if any.
pub fn env_precision_floor() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Result of an escalated evaluation.
#[derive(Debug, Clone)]
pub struct Escalated {
    pub value: BigFloat,
    /// Largest absolute partial term of the sum.
    pub max_term: BigFloat,
    /// Working precision at which the result was accepted.
    pub bits: usize,
}

impl Escalated {
    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.value)
    }

    /// Bits of the working precision that survived cancellation.
    pub fn retained_bits(&self) -> Option<i64> {
        match (exponent_of(&self.value), exponent_of(&self.max_term)) {
            (Some(v), Some(m)) => Some(self.bits as i64 - (m - v)),
            _ => None,
        }
    }
}

/// True when at least half of the `bits` of working precision survive.
pub(crate) fn accurate_enough(sum: &BigFloat, max_term: &BigFloat, bits: usize) -> bool {
    match (exponent_of(sum), exponent_of(max_term)) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(s), Some(m)) => s - m >= 1 - (bits as i64) / 2,
    }
}

/// Runs `eval` at increasing precision until the cancellation test passes.
///
/// `eval(p)` returns `(sum, largest |term|)` at working precision `p`.
pub fn escalate<F>(start_bits: usize, tol: &Tolerances, context: &str, mut eval: F) -> Result<Escalated>
where
    F: FnMut(usize) -> Result<(BigFloat, BigFloat)>,
{
    let mut bits = start_bits.max(MIN_PRECISION_BITS);
    loop {
        let (value, max_term) = eval(bits)?;
        if value.is_nan() || value.is_inf() {
            return Err(Error::Numeric(format!("{context}: non-finite sum at {bits} bits")));
        }
        if accurate_enough(&value, &max_term, bits) {
            return Ok(Escalated { value, max_term, bits });
        }
        if bits >= tol.max_precision_bits {
            return Err(Error::PrecisionExhausted {
                bits,
                context: context.to_string(),
            });
        }
        bits = (bits * 2).min(tol.max_precision_bits);
    }
}

/// `sum_{j < terms.len()} C(row, j) (-1)^j terms[j]` at precision `p`.
///
/// Returns the sum and the largest absolute partial term.
pub fn alternating_binomial_sum(
    binomials: &[BigFloat],
    terms: &[BigFloat],
    p: usize,
) -> (BigFloat, BigFloat) {
    let mut sum = BigFloat::from_word(0, p);
    let mut max_term = BigFloat::from_word(0, p);
    for (j, (c, t)) in binomials.iter().zip(terms).enumerate() {
        let term = c.mul(t, p, RM);
        if term.abs_cmp(&max_term) == Some(1) {
            max_term = term.abs();
        }
        sum = if j % 2 == 0 {
            sum.add(&term, p, RM)
        } else {
            sum.sub(&term, p, RM)
        };
    }
    (sum, max_term)
}

/// Binomial row `C(n, 0..=n)` as exact `BigFloat`s.
pub fn binomial_row_big(n: usize) -> Vec<BigFloat> {
    binomial_row(n).iter().map(biguint_to_big).collect()
}

/// `asinh(x)^2` at precision `p`, for `x >= 0`.
///
/// Evaluated as `ln(x + sqrt(1 + x^2))`, several times cheaper than the
/// library `asinh` at thousands of bits; the working precision is raised by
/// twice the binary exponent of small `x` so the logarithm of a value near 1
/// keeps `p` significant bits.
pub(crate) fn asinh_sq(x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let e = x.exponent().map_or(0, |e| e as i64);
    if e < -24 {
        let a = x.asinh(p, RM, cc);
        return a.mul(&a, p, RM);
    }
    let q = p + 2 * (-e).max(0) as usize + 16;
    let root = x.mul(x, q, RM).add(&BigFloat::from_word(1, q), q, RM).sqrt(q, RM);
    let a = x.add(&root, q, RM).ln(q, RM, cc);
    a.mul(&a, p, RM)
}

pub(crate) fn new_consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::Internal(format!("cannot allocate constant cache: {e:?}")))
}
