//! Packaged smoke test: Farey neighbour properties, the closed-form chain
//! gaps, and compose-versus-oracle agreement on fixed instances.
//!
//! The gap formulas under test are injectable through [`GapFormulas`] so a
//! corrupted formula can be shown to be caught.

use std::fmt::Write as _;

use crate::farey::{
    farey_length, farey_pairs, verify_farey_properties, FareyOrder, FareyPair, PropertyOutcome,
};
use crate::mediant_chain::{gap_u, gap_v, tail_u, tail_v, u_term, v_term};
use crate::rational::{parse_real, Rational};
use crate::simultaneous::{brute_force_solve, check_solution, compose_solve, ConstraintSet};

/// Orders whose Farey sequences are checked.
pub const FAREY_ORDERS: [u64; 4] = [1, 2, 25, 100];

/// Largest order whose pairs feed the gap identity checks.
const GAP_ORDER: u64 = 12;
/// Largest chain index in the gap identity checks.
const GAP_INDEX: u64 = 12;

type GapFn = fn(&FareyPair, u64) -> Rational;

/// The four closed forms checked against chain-term subtraction.
#[derive(Clone, Copy)]
pub struct GapFormulas {
    pub gap_u: GapFn,
    pub gap_v: GapFn,
    pub tail_u: GapFn,
    pub tail_v: GapFn,
}

impl Default for GapFormulas {
    fn default() -> Self {
        GapFormulas {
            gap_u,
            gap_v,
            tail_u,
            tail_v,
        }
    }
}

/// One named property with its check count and first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestItem {
    pub name: String,
    pub checks: u64,
    pub skipped: Option<String>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub items: Vec<SelftestItem>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.failure.is_none())
    }

    pub fn total_checks(&self) -> u64 {
        self.items.iter().map(|i| i.checks).sum()
    }

    /// Names of the failing properties, in run order.
    pub fn failures(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| i.failure.is_some())
            .map(|i| i.name.as_str())
            .collect()
    }

    /// One line per property, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let _ = match (&item.failure, &item.skipped) {
                (Some(f), _) => writeln!(out, "FAIL {} ({} checks): {f}", item.name, item.checks),
                (None, Some(s)) => writeln!(out, "SKIP {}: {s}", item.name),
                (None, None) => writeln!(out, "ok   {} ({} checks)", item.name, item.checks),
            };
        }
        let failed = self.failures().len();
        let _ = writeln!(
            out,
            "selftest: {} properties, {} checks, {} failed",
            self.items.len(),
            self.total_checks(),
            failed
        );
        out
    }
}

struct Counter {
    item: SelftestItem,
}

impl Counter {
    fn new(name: impl Into<String>) -> Self {
        Counter {
            item: SelftestItem {
                name: name.into(),
                checks: 0,
                skipped: None,
                failure: None,
            },
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.item.checks += 1;
        if !ok && self.item.failure.is_none() {
            self.item.failure = Some(describe());
        }
    }

    fn fail(&mut self, msg: String) {
        self.item.failure.get_or_insert(msg);
    }
}

/// Runs the self-test with the library's own gap formulas.
pub fn run_selftest() -> SelftestReport {
    run_selftest_with(&GapFormulas::default())
}

pub fn run_selftest_with(formulas: &GapFormulas) -> SelftestReport {
    let mut items = Vec::new();
    farey_section(&mut items);
    gap_section(formulas, &mut items);
    solver_section(&mut items);
    SelftestReport { items }
}

fn farey_section(items: &mut Vec<SelftestItem>) {
    for n in FAREY_ORDERS {
        let order = FareyOrder::new(n).expect("orders are positive");
        let report = verify_farey_properties(order);
        for r in &report.results {
            let mut c = Counter::new(format!("farey N={n}: {}", r.property.label()));
            c.item.checks = r.checks;
            match &r.outcome {
                PropertyOutcome::Pass => {}
                PropertyOutcome::Skipped { reason } => c.item.skipped = Some(reason.clone()),
                PropertyOutcome::Fail { counterexample } => {
                    c.fail(format!("counterexample {counterexample}"))
                }
            }
            items.push(c.item);
        }
        let mut c = Counter::new(format!("farey N={n} length matches totient sum"));
        let expected = farey_length(order);
        c.check(report.elements == expected, || {
            format!("{} elements, expected {expected}", report.elements)
        });
        items.push(c.item);
    }
}

fn gap_section(f: &GapFormulas, items: &mut Vec<SelftestItem>) {
    let mut gu = Counter::new("chain gap identity U_i - U_(i+1)");
    let mut gv = Counter::new("chain gap identity V_(j+1) - V_j");
    let mut tu = Counter::new("chain tail identity U_i - h1/k1");
    let mut tv = Counter::new("chain tail identity h2/k2 - V_j");
    for n in 1..=GAP_ORDER {
        let order = FareyOrder::new(n).expect("positive");
        for pair in farey_pairs(order) {
            for i in 0..=GAP_INDEX {
                let at = || format!("pair ({}, {}) index {i}", pair.left(), pair.right());
                let (ui, ui1) = (u_term(&pair, i), u_term(&pair, i + 1));
                let (vi, vi1) = (v_term(&pair, i), v_term(&pair, i + 1));
                gu.check(&ui - &ui1 == (f.gap_u)(&pair, i), at);
                gv.check(&vi1 - &vi == (f.gap_v)(&pair, i), at);
                tu.check(&ui - pair.left() == (f.tail_u)(&pair, i), at);
                tv.check(pair.right() - &vi == (f.tail_v)(&pair, i), at);
            }
        }
    }
    items.extend([gu.item, gv.item, tu.item, tv.item]);
}

/// Twenty fixed `(x list, t, eps)` instances; constants at 50 digits.
fn solver_instances() -> Vec<(ConstraintSet, Rational)> {
    const INSTANCES: [(&[&str], &str, &str); 20] = [
        (&["1/2"], "1", "3/10"),
        (&["1/3", "2/3"], "1", "1/5"),
        (&["1/3", "2/3"], "1", "1/10"),
        (&["1/3", "1/7"], "1", "1/10"),
        (&["sqrt2"], "1", "1/100"),
        (&["sqrt3"], "1", "1/50"),
        (&["sqrt5"], "1/2", "1/64"),
        (&["phi"], "2", "1/128"),
        (&["pi"], "1", "1/1000"),
        (&["e"], "1", "1/256"),
        (&["sqrt2", "sqrt3"], "1", "1/8"),
        (&["sqrt2", "sqrt3"], "1", "1/32"),
        (&["phi", "e"], "1", "1/16"),
        (&["pi", "sqrt5"], "2", "1/64"),
        (&["1/3", "sqrt2"], "1", "1/20"),
        (&["2/7", "3/11"], "1", "1/40"),
        (&["sqrt2", "sqrt3", "sqrt5"], "1", "1/4"),
        (&["sqrt2", "sqrt3", "sqrt5"], "1", "1/16"),
        (&["phi", "pi", "e"], "1/2", "1/8"),
        (&["5/13", "8/21", "13/34"], "1", "1/30"),
    ];
    INSTANCES
        .iter()
        .map(|(xs, t, eps)| {
            let t = parse_real(t, 50).expect("fixed weight");
            let cs = ConstraintSet::from_pairs(
                xs.iter()
                    .map(|x| (parse_real(x, 50).expect("fixed real"), t.clone())),
            )
            .expect("fixed instance");
            (cs, parse_real(eps, 50).expect("fixed epsilon"))
        })
        .collect()
}

fn solver_section(items: &mut Vec<SelftestItem>) {
    let mut oracle = Counter::new("oracle witness passes the exact check");
    let mut flag = Counter::new("compose flag matches the exact check");
    let mut agree = Counter::new("compose success implies oracle feasibility");
    for (k, (cs, eps)) in solver_instances().iter().enumerate() {
        let brute = match brute_force_solve(cs, eps) {
            Ok(b) => b,
            Err(e) => {
                oracle.fail(format!("instance {k}: {e}"));
                continue;
            }
        };
        if let Some(s) = brute.solution() {
            let ok = check_solution(cs, eps, s.q, &s.ps).map(|r| r.overall);
            oracle.check(ok == Ok(true), || format!("instance {k}: q = {}", s.q));
        }
        match compose_solve(cs, eps) {
            Ok(out) => {
                let ok =
                    check_solution(cs, eps, out.solution.q, &out.solution.ps).map(|r| r.overall);
                flag.check(ok == Ok(out.satisfies_constraints), || {
                    format!("instance {k}: q = {}", out.solution.q)
                });
                if out.satisfies_constraints {
                    agree.check(brute.is_feasible(), || format!("instance {k}"));
                }
            }
            Err(e) => flag.fail(format!("instance {k}: {e}")),
        }
    }
    items.extend([oracle.item, flag.item, agree.item]);
}
