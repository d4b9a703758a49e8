use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{
    brute_force_solve_with, dirichlet_solve_with, serialize_bigint, ConstraintSet, Feasibility,
    Solution, SolveOptions,
};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The constrained oracle and the Dirichlet baseline on the same reals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub epsilon: Rational,
    /// The common weight `t`.
    pub t: Rational,
    pub constrained: Feasibility,
    #[serde(rename = "dirichlet_T")]
    pub dirichlet_t: u64,
    /// Smallest `T >= 2` with `1/T <= eps t`.
    #[serde(rename = "forced_T")]
    pub forced_t: u64,
    pub dirichlet: Solution,
    /// `t / eps`
    pub q_bound_constrained: Rational,
    /// `T^n`
    #[serde(serialize_with = "serialize_bigint")]
    pub q_bound_dirichlet: BigInt,
    pub max_error_constrained: Option<Rational>,
    pub max_error_dirichlet: Rational,
}

impl ComparisonReport {
    /// Whether the Dirichlet range `T^n` is longer than the constrained
    /// range `t / eps`.
    pub fn dirichlet_bound_exceeds(&self) -> bool {
        self.q_bound_constrained < self.q_bound_dirichlet
    }
}

/// `max(2, ceil(1/(eps t)))`, the least `T` for which the Dirichlet error
/// `1/(T q)` is within `eps t` at every `q >= 1`.
pub fn forced_dirichlet_t(epsilon: &Rational, t: &Rational) -> Result<u64> {
    let et = epsilon * t;
    if !et.is_positive() {
        return Err(Error::invalid("eps * t must be positive"));
    }
    let inv = et.recip().expect("eps * t > 0");
    let ceil = inv.ceil().to_u64().ok_or_else(|| {
        Error::Overflow(format!("forced T = ceil({inv}) does not fit in 64 bits"))
    })?;
    Ok(ceil.max(2))
}

/// Runs both solvers. Every `t_i` must be equal. `t_dirichlet` defaults to
/// [`forced_dirichlet_t`].
pub fn compare(
    cs: &ConstraintSet,
    epsilon: &Rational,
    t_dirichlet: Option<u64>,
    opts: &SolveOptions,
) -> Result<ComparisonReport> {
    let t = cs
        .uniform_t()
        .ok_or_else(|| Error::invalid("compare requires every t_i to be equal (uniform t)"))?
        .clone();
    if !epsilon.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let forced_t = forced_dirichlet_t(epsilon, &t)?;
    let dirichlet_t = t_dirichlet.unwrap_or(forced_t);
    let xs = cs.xs();
    let dirichlet = dirichlet_solve_with(&xs, dirichlet_t, opts)?;
    let constrained = brute_force_solve_with(cs, epsilon, opts)?;
    let q_bound_dirichlet = num_traits::pow(BigInt::from(dirichlet_t), xs.len());
    Ok(ComparisonReport {
        epsilon: epsilon.clone(),
        q_bound_constrained: t.checked_div(epsilon).expect("epsilon > 0"),
        t,
        max_error_constrained: constrained.solution().map(Solution::max_error),
        constrained,
        dirichlet_t,
        forced_t,
        max_error_dirichlet: dirichlet.max_error(),
        dirichlet,
        q_bound_dirichlet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_real;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn cs(pairs: &[(Rational, Rational)]) -> ConstraintSet {
        ConstraintSet::from_pairs(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn thirds() {
        let set = cs(&[(r(1, 3), r(1, 1)), (r(2, 3), r(1, 1))]);
        let rep = compare(&set, &r(1, 10), Some(4), &SolveOptions::default()).unwrap();
        let s = rep.constrained.solution().unwrap();
        assert_eq!(s.q, 3);
        assert_eq!(rep.max_error_constrained, Some(r(0, 1)));
        assert!(rep.dirichlet.q < 16);
        assert!(rep.max_error_dirichlet <= Rational::new(1, 4 * rep.dirichlet.q).unwrap());
        assert_eq!(rep.q_bound_dirichlet, BigInt::from(16));
        assert_eq!(rep.q_bound_constrained, r(10, 1));
        assert_eq!(rep.forced_t, 10);
    }

    #[test]
    fn degenerate_half() {
        let set = cs(&[(r(1, 2), r(1, 1))]);
        let rep = compare(&set, &r(1, 2), Some(2), &SolveOptions::default()).unwrap();
        assert_eq!(rep.constrained.solution().unwrap().q, 1);
        assert_eq!(rep.dirichlet.q, 1);
    }

    #[test]
    fn forced_t_exceeds_constrained_range() {
        let xs = ["sqrt2", "sqrt3", "sqrt5"].map(|c| parse_real(c, 50).unwrap());
        let set = cs(&xs.map(|x| (x, r(1, 1))));
        let eps = r(1, 50);
        let rep = compare(&set, &eps, None, &SolveOptions::default()).unwrap();
        assert_eq!(rep.dirichlet_t, 50);
        assert_eq!(rep.q_bound_dirichlet, BigInt::from(125_000));
        assert!(rep.dirichlet_bound_exceeds());
        assert_eq!(
            rep.max_error_dirichlet,
            rep.dirichlet.errors.iter().max().unwrap().clone()
        );
    }

    #[test]
    fn forced_t_values() {
        assert_eq!(forced_dirichlet_t(&r(1, 50), &r(1, 1)).unwrap(), 50);
        assert_eq!(forced_dirichlet_t(&r(1, 3), &r(2, 1)).unwrap(), 2);
        assert_eq!(forced_dirichlet_t(&r(1, 7), &r(1, 2)).unwrap(), 14);
        assert_eq!(forced_dirichlet_t(&r(2, 7), &r(1, 1)).unwrap(), 4);
        assert!(forced_dirichlet_t(&r(0, 1), &r(1, 1)).is_err());
    }

    #[test]
    fn non_uniform_t_is_rejected() {
        let set = cs(&[(r(1, 3), r(1, 1)), (r(2, 3), r(1, 2))]);
        let err = compare(&set, &r(1, 10), Some(4), &SolveOptions::default()).unwrap_err();
        assert!(err.to_string().contains("uniform"));
    }
}
