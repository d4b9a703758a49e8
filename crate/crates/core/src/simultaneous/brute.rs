use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ConstraintSet, Feasibility, Method, ScaledItem, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exhaustive oracle with default options.
pub fn brute_force_solve(cs: &ConstraintSet, epsilon: &Rational) -> Result<Feasibility> {
    brute_force_solve_with(cs, epsilon, &SolveOptions::default())
}

/// Scans `q = 1, 2, ..., floor(t_min / eps)`, taking the nearest numerator
/// for every item, and returns the smallest `q` meeting every error bound.
///
/// Fails with [`Error::BudgetExceeded`] instead of answering infeasible when
/// the range is longer than `opts.max_scan` and nothing was found inside the
/// budget.
pub fn brute_force_solve_with(
    cs: &ConstraintSet,
    epsilon: &Rational,
    opts: &SolveOptions,
) -> Result<Feasibility> {
    if !epsilon.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let q_max = cs
        .t_min()
        .checked_div(epsilon)
        .expect("epsilon is positive")
        .floor();
    if q_max.is_zero() {
        return Ok(Feasibility::Infeasible {
            reason: "denominator range empty".into(),
        });
    }
    let limit = match q_max.to_u64() {
        Some(m) if m <= opts.max_scan => m,
        _ => opts.max_scan,
    };

    let items: Vec<ScaledItem> = cs
        .items()
        .iter()
        .map(|c| ScaledItem::new(&c.x, &(epsilon * &c.t)))
        .collect();

    let mut ps = Vec::with_capacity(items.len());
    for q in 1..=limit {
        let qb = BigInt::from(q);
        ps.clear();
        let mut ok = true;
        for item in &items {
            let (p, fits) = item.test(&qb, opts.strictness);
            if !fits {
                ok = false;
                break;
            }
            ps.push(p);
        }
        if ok {
            let solution = Solution::new(&cs.xs(), q, ps, Some(epsilon.clone()), Method::Brute)?;
            return Ok(Feasibility::Feasible { solution });
        }
    }

    if q_max > BigInt::from(limit) {
        return Err(Error::BudgetExceeded {
            needed: q_max.to_string(),
            budget: opts.max_scan,
        });
    }
    Ok(Feasibility::Infeasible {
        reason: format!("no denominator q <= {q_max} meets every error bound"),
    })
}
