use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Method, ScaledItem, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dirichlet baseline with default options.
pub fn dirichlet_solve(xs: &[Rational], t: u64) -> Result<Solution> {
    dirichlet_solve_with(xs, t, &SolveOptions::default())
}

/// Smallest `q` in `1 <= q < T^n` with `||q x_i|| <= 1/T` for every `i`,
/// which makes `|x_i - p_i/q| <= 1/(T q)` with nearest numerators. Such a
/// `q` always exists, so running out of range is reported as an internal
/// error. Strictness in `opts` is ignored; the bound is the classical `<=`.
pub fn dirichlet_solve_with(xs: &[Rational], t: u64, opts: &SolveOptions) -> Result<Solution> {
    if t < 2 {
        return Err(Error::invalid(format!("T must be at least 2, got {t}")));
    }
    if xs.is_empty() {
        return Err(Error::invalid("no reals to approximate"));
    }
    let n = u32::try_from(xs.len()).map_err(|_| Error::invalid("too many reals"))?;
    let q_end = num_traits::pow(BigInt::from(t), n as usize); // exclusive
    let range = &q_end - 1u32;
    let limit = match range.to_u64() {
        Some(m) if m <= opts.max_scan => m,
        _ => opts.max_scan,
    };

    let bound = Rational::new(1, t).expect("t >= 2");
    let items: Vec<ScaledItem> = xs.iter().map(|x| ScaledItem::new(x, &bound)).collect();
    for q in 1..=limit {
        let qb = BigInt::from(q);
        let mut ps = Vec::with_capacity(items.len());
        let ok = items.iter().all(|item| {
            let (p, fits) = item.test_distance(&qb);
            ps.push(p);
            fits
        });
        if ok {
            return Solution::new(xs, q, ps, None, Method::Dirichlet);
        }
    }
    if range > BigInt::from(limit) {
        return Err(Error::BudgetExceeded {
            needed: range.to_string(),
            budget: opts.max_scan,
        });
    }
    Err(Error::Internal(format!(
        "no q < {t}^{n} with ||q x_i|| <= 1/{t}, impossible for exact inputs"
    )))
}
