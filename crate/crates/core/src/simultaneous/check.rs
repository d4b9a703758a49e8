use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{ConstraintSet, Strictness};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemCheck {
    pub error_ok: bool,
    pub exact_error: Rational,
    /// `eps * t_i`
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub per_item: Vec<ItemCheck>,
    /// `eps * q <= t_min`
    pub denom_ok: bool,
    pub overall: bool,
    pub strictness: Strictness,
}

/// Checks `p_i / q` against the joint constraint with non-strict error
/// inequalities.
pub fn check_solution(
    cs: &ConstraintSet,
    epsilon: &Rational,
    q: u64,
    ps: &[BigInt],
) -> Result<CheckReport> {
    check_solution_with(cs, epsilon, q, ps, Strictness::NonStrict)
}

/// As [`check_solution`], choosing `<=` or `<` for the error inequality.
///
/// The denominator condition is tested once against `t_min`; that is
/// equivalent to testing `eps * q <= t_i` for every item.
pub fn check_solution_with(
    cs: &ConstraintSet,
    epsilon: &Rational,
    q: u64,
    ps: &[BigInt],
    strictness: Strictness,
) -> Result<CheckReport> {
    if ps.len() != cs.len() {
        return Err(Error::invalid(format!(
            "{} numerators for {} constraints",
            ps.len(),
            cs.len()
        )));
    }
    if q == 0 {
        return Err(Error::invalid("denominator q must be at least 1"));
    }
    if !epsilon.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let per_item: Vec<ItemCheck> = cs
        .items()
        .iter()
        .zip(ps)
        .map(|(c, p)| {
            let exact_error = (&c.x - Rational::new(p.clone(), q).expect("q >= 1")).abs();
            let bound = epsilon * &c.t;
            let error_ok = match strictness {
                Strictness::NonStrict => exact_error <= bound,
                Strictness::Strict => exact_error < bound,
            };
            ItemCheck {
                error_ok,
                exact_error,
                bound,
            }
        })
        .collect();
    let denom_ok = epsilon * Rational::from(q) <= *cs.t_min();
    let overall = denom_ok && per_item.iter().all(|i| i.error_ok);
    Ok(CheckReport {
        per_item,
        denom_ok,
        overall,
        strictness,
    })
}

/// The `p` minimizing `|x - p/q|`: the nearest integer to `q x`, taking the
/// smaller one on an exact tie.
pub fn best_numerator(x: &Rational, q: u64) -> BigInt {
    round_half_down_ratio(&(x.numer() * BigInt::from(q)), x.denom())
}

/// Nearest integer to `n / d` (`d > 0`), ties to the smaller.
pub(crate) fn round_half_down_ratio(n: &BigInt, d: &BigInt) -> BigInt {
    // ceil((2n - d) / 2d)
    let two_d = d * 2u32;
    (n * 2u32 - d).div_ceil(&two_d)
}
