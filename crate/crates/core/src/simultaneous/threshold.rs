use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{brute_force_solve_with, ConstraintSet, Feasibility, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::rational::{parse_real, Rational};

/// Significant decimal digits kept by [`geometric_grid`] for interior points.
const GEOMETRIC_DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Strictly descending.
    pub grid: Vec<Rational>,
    pub feasible: Vec<bool>,
    /// Start of the longest all-feasible suffix of `grid`.
    pub epsilon0: Option<Rational>,
    /// The oracle's solution at each feasible point, `None` elsewhere.
    pub witnesses: Vec<Option<Solution>>,
}

impl ThresholdReport {
    /// One row per grid point: `epsilon,feasible,q,ps,max_error`, with
    /// numerators separated by `;` and empty cells where infeasible.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,feasible,q,ps,max_error\n");
        for ((eps, ok), w) in self.grid.iter().zip(&self.feasible).zip(&self.witnesses) {
            match w {
                Some(s) => {
                    let ps: Vec<String> = s.ps.iter().map(|p| p.to_string()).collect();
                    let _ = writeln!(out, "{eps},{ok},{},{},{}", s.q, ps.join(";"), s.max_error());
                }
                None => {
                    let _ = writeln!(out, "{eps},{ok},,,");
                }
            }
        }
        out
    }
}

/// Runs the oracle at every grid point, in parallel, and merges in grid
/// order. The first error in grid order is returned.
pub fn epsilon_threshold(
    cs: &ConstraintSet,
    grid: &[Rational],
    opts: &SolveOptions,
) -> Result<ThresholdReport> {
    validate_grid(grid)?;
    let results: Vec<Result<Feasibility>> = grid
        .par_iter()
        .map(|eps| brute_force_solve_with(cs, eps, opts))
        .collect();
    let mut feasible = Vec::with_capacity(grid.len());
    let mut witnesses = Vec::with_capacity(grid.len());
    for r in results {
        match r? {
            Feasibility::Feasible { solution } => {
                feasible.push(true);
                witnesses.push(Some(solution));
            }
            Feasibility::Infeasible { .. } => {
                feasible.push(false);
                witnesses.push(None);
            }
        }
    }
    let suffix = feasible.iter().rev().take_while(|&&ok| ok).count();
    let epsilon0 = (suffix > 0).then(|| grid[grid.len() - suffix].clone());
    Ok(ThresholdReport {
        grid: grid.to_vec(),
        feasible,
        epsilon0,
        witnesses,
    })
}

fn validate_grid(grid: &[Rational]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|g| !g.is_positive()) {
        return Err(Error::invalid(format!("grid point {bad} is not positive")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] <= w[1]) {
        return Err(Error::invalid(format!(
            "grid must be strictly descending, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Parses a comma-separated grid such as `"1/2, 1/4, 0.1"`.
pub fn parse_grid(text: &str, precision: u32) -> Result<Vec<Rational>> {
    let grid = text
        .split(',')
        .map(|s| parse_real(s.trim(), precision))
        .collect::<Result<Vec<_>>>()?;
    validate_grid(&grid)?;
    Ok(grid)
}

fn check_range(max: &Rational, min: &Rational, points: usize) -> Result<()> {
    if !min.is_positive() {
        return Err(Error::invalid("eps-min must be positive"));
    }
    if points < 2 {
        return Err(Error::invalid("a generated grid needs at least 2 points"));
    }
    if max <= min {
        return Err(Error::invalid(format!(
            "eps-max {max} must exceed eps-min {min}"
        )));
    }
    Ok(())
}

/// `points` evenly spaced values from `max` down to `min`, both included.
pub fn linear_grid(max: &Rational, min: &Rational, points: usize) -> Result<Vec<Rational>> {
    check_range(max, min, points)?;
    let steps = Rational::from(points - 1);
    let step = (max - min) / steps;
    Ok((0..points)
        .map(|i| max - &step * Rational::from(i))
        .collect())
}

/// `points` values from `max` down to `min` with a constant ratio. Interior
/// points are `max * r^i` with `r^i` truncated to a fixed number of
/// significant digits, so the grid stays exact and reproducible; endpoints
/// are exact.
pub fn geometric_grid(max: &Rational, min: &Rational, points: usize) -> Result<Vec<Rational>> {
    check_range(max, min, points)?;
    let ratio = min / max; // in (0, 1)
    let m = u32::try_from(points - 1).map_err(|_| Error::invalid("too many grid points"))?;
    // enough fractional digits that every interior root keeps
    // GEOMETRIC_DIGITS significant digits
    let spread = ratio.recip().expect("ratio > 0").ceil().to_string().len() as u32;
    let scale_digits = GEOMETRIC_DIGITS + spread;
    let scale = num_traits::pow(BigInt::from(10u32), scale_digits as usize);

    let (a, b) = (ratio.numer().clone(), ratio.denom().clone());
    let mut grid = Vec::with_capacity(points);
    grid.push(max.clone());
    for i in 1..m {
        // s = floor(10^scale * ratio^(i/m))
        let num =
            num_traits::pow(a.clone(), i as usize) * num_traits::pow(scale.clone(), m as usize);
        let den = num_traits::pow(b.clone(), i as usize);
        let inner: BigUint = (num / den).abs().to_biguint().expect("non-negative");
        let s = BigInt::from(inner.nth_root(m));
        grid.push(max * Rational::new(s, scale.clone())?);
    }
    grid.push(min.clone());
    validate_grid(&grid).map_err(|_| {
        Error::invalid(format!(
            "{points} geometric points between {min} and {max} collide at {GEOMETRIC_DIGITS} significant digits"
        ))
    })?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simultaneous::check_solution;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn cs(pairs: &[(Rational, Rational)]) -> ConstraintSet {
        ConstraintSet::from_pairs(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn examples() {
        let opts = SolveOptions::default();
        let rep = epsilon_threshold(
            &cs(&[(r(1, 2), r(1, 1))]),
            &[r(1, 1), r(1, 2), r(1, 4), r(1, 8)],
            &opts,
        )
        .unwrap();
        assert_eq!(rep.feasible, vec![true; 4]);
        assert_eq!(rep.epsilon0, Some(r(1, 1)));
        assert_eq!(rep.witnesses[0].as_ref().unwrap().q, 1);
        assert_eq!(rep.witnesses[3].as_ref().unwrap().q, 2);

        let two = cs(&[(r(1, 3), r(1, 1)), (r(2, 3), r(1, 1))]);
        let rep = epsilon_threshold(&two, &[r(1, 2), r(1, 5), r(1, 10)], &opts).unwrap();
        assert_eq!(rep.epsilon0, Some(r(1, 2)));
    }

    #[test]
    fn broken_suffix() {
        // at eps = 1/10 only q = 1 is allowed and its error 1/3 exceeds 1/100
        let set = cs(&[(r(1, 3), r(1, 10))]);
        let rep =
            epsilon_threshold(&set, &[r(1, 10), r(1, 100)], &SolveOptions::default()).unwrap();
        assert_eq!(rep.feasible, vec![false, true]);
        assert_eq!(rep.epsilon0, Some(r(1, 100)));
    }

    #[test]
    fn grid_validation() {
        let set = cs(&[(r(1, 2), r(1, 1))]);
        let opts = SolveOptions::default();
        assert!(epsilon_threshold(&set, &[], &opts).is_err());
        assert!(epsilon_threshold(&set, &[r(1, 4), r(1, 2)], &opts).is_err());
        assert!(epsilon_threshold(&set, &[r(1, 4), r(1, 4)], &opts).is_err());
        assert!(epsilon_threshold(&set, &[r(1, 4), r(0, 1)], &opts).is_err());
        assert_eq!(
            parse_grid("1/2, 1/4,1/8", 64).unwrap(),
            vec![r(1, 2), r(1, 4), r(1, 8)]
        );
        assert!(parse_grid("1/2,,1/4", 64).is_err());
        assert!(parse_grid("1/4,1/2", 64).is_err());
    }

    #[test]
    fn generated_grids() {
        assert_eq!(
            linear_grid(&r(1, 1), &r(1, 4), 4).unwrap(),
            vec![r(1, 1), r(3, 4), r(1, 2), r(1, 4)]
        );
        let g = geometric_grid(&r(1, 2), &r(1, 16384), 14).unwrap();
        assert_eq!(g.len(), 14);
        assert_eq!(g[0], r(1, 2));
        assert_eq!(g[13], r(1, 16384));
        // ratio 1/2 exactly: every interior power of 2 is representable
        for (k, v) in g.iter().enumerate() {
            assert_eq!(v, &r(1, 1 << (k + 1)));
        }
        let g = geometric_grid(&r(1, 1), &r(1, 3), 3).unwrap();
        assert!(g[1] < r(577351, 1_000_000) && g[1] > r(577350, 1_000_000));
        assert!(geometric_grid(&r(1, 1), &r(1, 1), 3).is_err());
        assert!(linear_grid(&r(1, 1), &r(1, 2), 1).is_err());
    }

    #[test]
    fn csv_rows() {
        let rep = epsilon_threshold(
            &cs(&[(r(1, 2), r(1, 1))]),
            &[r(1, 1), r(1, 4)],
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(
            rep.to_csv(),
            "epsilon,feasible,q,ps,max_error\n1/1,true,1,0,1/2\n1/4,true,2,1,0/1\n"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn report_is_consistent(
            n in 0i64..10_000, d in 1i64..10_000,
            ks in prop::collection::btree_set(1u32..12, 1..6),
        ) {
            let set = cs(&[(r(n, d), r(1, 1))]);
            let grid: Vec<Rational> = ks.iter().map(|&k| r(1, 1i64 << k)).collect();
            let rep = epsilon_threshold(&set, &grid, &SolveOptions::default()).unwrap();
            if let Some(e0) = &rep.epsilon0 {
                let idx = rep.grid.iter().position(|g| g == e0).unwrap();
                prop_assert!(rep.feasible[idx..].iter().all(|&b| b));
                prop_assert!(idx == 0 || !rep.feasible[idx - 1]);
            } else {
                prop_assert!(!rep.feasible.last().unwrap());
            }
            for ((eps, ok), w) in rep.grid.iter().zip(&rep.feasible).zip(&rep.witnesses) {
                prop_assert_eq!(*ok, w.is_some());
                if let Some(s) = w {
                    prop_assert!(check_solution(&set, eps, s.q, &s.ps).unwrap().overall);
                }
            }
        }
    }
}
