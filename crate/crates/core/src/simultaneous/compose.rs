use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{check_solution_with, CheckReport, ConstraintSet, Method, Solution, Strictness};
use crate::error::{Error, Result};
use crate::farey::{farey_neighbors, Bracket, FareyOrder};
use crate::rational::{fractional_part, integral_part, Rational};

/// Default cap on the composed denominator.
pub const DEFAULT_DENOM_CAP: u64 = 1_000_000_000_000_000;

const HEURISTIC_NOTE: &str =
    "heuristic: the composed denominator is not guaranteed to satisfy the constraints; see satisfies_constraints";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComposeOptions {
    /// Largest composed denominator allowed before [`Error::Overflow`].
    pub denom_cap: u64,
    /// Used only for the final check.
    pub strictness: Strictness,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            denom_cap: DEFAULT_DENOM_CAP,
            strictness: Strictness::NonStrict,
        }
    }
}

/// One stage: `Q_prev * x_item` approximated by `approximation` at Farey
/// order `order`, after which the common denominator is `cumulative`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposeStage {
    pub item: usize,
    pub order: u64,
    pub denominator: u64,
    pub approximation: Rational,
    pub cumulative: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposeOutcome {
    pub solution: Solution,
    pub satisfies_constraints: bool,
    pub check: CheckReport,
    pub stages: Vec<ComposeStage>,
    pub note: &'static str,
}

/// Composition heuristic with default options.
pub fn compose_solve(cs: &ConstraintSet, epsilon: &Rational) -> Result<ComposeOutcome> {
    compose_solve_with(cs, epsilon, &ComposeOptions::default())
}

/// Builds a common denominator one real at a time. With `Q` the denominator
/// so far, `Q x_k` is approximated by `A/q'` from its Farey bracket at order
/// `ceil(1/(eps Q))`, taking the closer endpoint (the left one on a tie);
/// then `P_i <- P_i q'` for earlier items, `P_k = A` and `Q <- Q q'`.
///
/// The result carries exact errors and the verdict of [`check_solution`];
/// nothing guarantees that verdict is positive.
///
/// [`check_solution`]: super::check_solution
pub fn compose_solve_with(
    cs: &ConstraintSet,
    epsilon: &Rational,
    opts: &ComposeOptions,
) -> Result<ComposeOutcome> {
    if !epsilon.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let mut q_total: u64 = 1;
    let mut ps: Vec<BigInt> = Vec::with_capacity(cs.len());
    let mut stages = Vec::with_capacity(cs.len());

    for (k, c) in cs.items().iter().enumerate() {
        let theta = epsilon * Rational::from(q_total);
        let order = theta
            .recip()
            .expect("theta > 0")
            .ceil()
            .to_u64()
            .ok_or_else(|| {
                Error::Overflow(format!("Farey order 1/{theta} does not fit in 64 bits"))
            })?;
        let order = FareyOrder::new(order.max(1))?;

        let y = &c.x * Rational::from(q_total);
        let whole = integral_part(&y);
        let frac = fractional_part(&y);
        let near = match farey_neighbors(&frac, order)? {
            Bracket::Exact { value } => value,
            Bracket::Pair { pair } => {
                let to_left = &frac - pair.left();
                let to_right = pair.right() - &frac;
                if to_left <= to_right {
                    pair.left().clone()
                } else {
                    pair.right().clone()
                }
            }
        };
        let stage_q = near.denom().clone();
        let a = &whole * &stage_q + near.numer();
        let stage_q = stage_q.to_u64().expect("denominator <= order");

        q_total = q_total
            .checked_mul(stage_q)
            .filter(|&q| q <= opts.denom_cap)
            .ok_or_else(|| {
                Error::Overflow(format!(
                    "composed denominator {q_total} * {stage_q} exceeds the cap {}",
                    opts.denom_cap
                ))
            })?;
        if stage_q != 1 {
            let m = BigInt::from(stage_q);
            for p in ps.iter_mut() {
                *p *= &m;
            }
        }
        ps.push(a.clone());
        stages.push(ComposeStage {
            item: k,
            order: order.get(),
            denominator: stage_q,
            approximation: Rational::new(a, stage_q)?,
            cumulative: q_total,
        });
    }

    let solution = Solution::new(
        &cs.xs(),
        q_total,
        ps,
        Some(epsilon.clone()),
        Method::Compose,
    )?;
    let check = check_solution_with(cs, epsilon, q_total, &solution.ps, opts.strictness)?;
    Ok(ComposeOutcome {
        satisfies_constraints: check.overall,
        solution,
        check,
        stages,
        note: HEURISTIC_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_real;
    use crate::simultaneous::{brute_force_solve, check_solution};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn cs(pairs: &[(Rational, Rational)]) -> ConstraintSet {
        ConstraintSet::from_pairs(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn exact_half() {
        for eps in [r(1, 2), r(1, 3), r(1, 10), r(1, 1000)] {
            let out = compose_solve(&cs(&[(r(1, 2), r(1, 1))]), &eps).unwrap();
            assert_eq!(out.solution.q, 2);
            assert_eq!(out.solution.ps, vec![BigInt::from(1)]);
            assert!(out.satisfies_constraints);
        }
        // the order drops to 1 and only integers are reachable
        let out = compose_solve(&cs(&[(r(1, 2), r(1, 1))]), &r(1, 1)).unwrap();
        assert_eq!(out.solution.q, 1);
    }

    #[test]
    fn two_items_multiply_stage_denominators() {
        let set = cs(&[(r(1, 3), r(1, 1)), (r(1, 7), r(1, 1))]);
        let eps = r(1, 10);
        let out = compose_solve(&set, &eps).unwrap();
        assert_eq!(out.stages.len(), 2);
        assert_eq!(out.stages[0].order, 10);
        assert_eq!(out.stages[0].denominator, 3);
        let product: u64 = out.stages.iter().map(|s| s.denominator).product();
        assert_eq!(out.solution.q, product);
        assert_eq!(
            out.satisfies_constraints,
            check_solution(&set, &eps, out.solution.q, &out.solution.ps)
                .unwrap()
                .overall
        );
        if out.satisfies_constraints {
            assert!(brute_force_solve(&set, &eps).unwrap().is_feasible());
        }
    }

    #[test]
    fn sqrt2_stage_uses_farey_bracket() {
        let x = parse_real("sqrt2", 50).unwrap();
        let eps = r(1, 100);
        let out = compose_solve(&cs(&[(x.clone(), r(1, 1))]), &eps).unwrap();
        let stage = &out.stages[0];
        assert_eq!(stage.order, 100);
        let frac = fractional_part(&x);
        let Bracket::Pair { pair } = farey_neighbors(&frac, FareyOrder::new(100).unwrap()).unwrap()
        else {
            panic!("sqrt2 stand-in is not in F_100");
        };
        let expect = if &frac - pair.left() <= pair.right() - &frac {
            pair.left()
        } else {
            pair.right()
        };
        assert_eq!(BigInt::from(out.solution.q), *expect.denom());
        assert_eq!(stage.approximation, expect + Rational::one());
    }

    #[test]
    fn cap_overflow() {
        let opts = ComposeOptions {
            denom_cap: 10,
            ..ComposeOptions::default()
        };
        let x = parse_real("pi", 30).unwrap() - Rational::from(3);
        assert!(matches!(
            compose_solve_with(&cs(&[(x, r(1, 1))]), &r(1, 1000), &opts),
            Err(Error::Overflow(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn flag_is_sound(
            items in prop::collection::vec((0i64..100_000, 1i64..100_000), 1..=3),
            e in 2i64..60,
        ) {
            let set = cs(&items.iter().map(|&(n, d)| (r(n, d), r(1, 1))).collect::<Vec<_>>());
            let eps = r(1, e);
            let out = compose_solve(&set, &eps).unwrap();
            let rep = check_solution(&set, &eps, out.solution.q, &out.solution.ps).unwrap();
            prop_assert_eq!(rep.overall, out.satisfies_constraints);
            if out.satisfies_constraints {
                prop_assert!(brute_force_solve(&set, &eps).unwrap().is_feasible());
            }
        }
    }
}
