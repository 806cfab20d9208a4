//! Named verification suites driven by the command line: each check is a
//! certified assertion with a one-line report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::bounds::{
    bound_report, large_r_threshold, lower_construction, refined_dominates, wbased_dominates,
    wbased_interval, wform_residual, young_dominates, Dominance,
};
use crate::chains::SixfoldProfile;
use crate::dyadic::{Dyadic, DyadicInterval, Round};
use crate::elementary::{e_const, exp_point, log_interval};
use crate::eval::{f_eval, g_eval, identity_chain, root_sum, term_value};
use crate::lambert::{lambert_w, lambert_w_interval};
use crate::radical::RadicalSum;
use crate::rational::Rational;
use crate::solver::{build_table, solve_f, solve_f_bruteforce, solve_g_sixfold};

/// Frozen reference floors checked by the `table1` suite, r = 1 and r = 2
/// rows for n = 2 ..= 17.
pub const TABLE1_REFERENCE_R1: [i64; 16] =
    [2, 3, 4, 6, 8, 9, 11, 13, 15, 17, 19, 21, 24, 26, 28, 30];
pub const TABLE1_REFERENCE_R2: [i64; 16] =
    [3, 4, 6, 8, 10, 11, 13, 15, 18, 20, 22, 24, 26, 28, 30, 33];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {} — {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Sixfold,
    Bounds,
    Oracle,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Table1,
        Suite::Sixfold,
        Suite::Bounds,
        Suite::Oracle,
        Suite::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Sixfold => "sixfold",
            Suite::Bounds => "bounds",
            Suite::Oracle => "oracle",
            Suite::Appendix => "appendix",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of table1, sixfold, bounds, oracle, appendix"))
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Table1 => table1_suite(),
        Suite::Sixfold => sixfold_suite(),
        Suite::Bounds => bounds_suite(),
        Suite::Oracle => oracle_suite(),
        Suite::Appendix => appendix_suite(),
    }
}

fn table1_suite() -> Vec<Check> {
    let cells = build_table(17, &[1, 2]);
    let mut checks = Vec::with_capacity(cells.len());
    for cell in &cells {
        let reference = match cell.r {
            1 => TABLE1_REFERENCE_R1[(cell.n - 2) as usize],
            2 => TABLE1_REFERENCE_R2[(cell.n - 2) as usize],
            _ => unreachable!(),
        };
        let passed = cell.floor == BigInt::from(reference);
        checks.push(Check::new(
            format!("table1 n={} r={}", cell.n, cell.r),
            passed,
            format!(
                "computed floor {} vs reference {} (exact {})",
                cell.floor, reference, cell.value
            ),
        ));
    }
    checks
}

fn sixfold_suite() -> Vec<Check> {
    let solved = solve_g_sixfold(6);
    let mut checks = Vec::new();
    let eight = RadicalSum::from_int(8);
    checks.push(Check::new(
        "sixfold G(6) < 8",
        solved.value < eight,
        format!("candidate max {} (floor {})", solved.value, solved.floor),
    ));
    // The candidate max dominates hand-picked integral profiles.
    let samples = [
        SixfoldProfile::integral(6, &[], &[]),
        SixfoldProfile::integral(6, &[(4, 4)], &[1]),
        SixfoldProfile::integral(6, &[(3, 4), (1, 3)], &[3, 10]),
        SixfoldProfile::integral(6, &[(2, 4), (1, 3)], &[6, 10]),
    ];
    for profile in samples {
        let value = g_eval(&profile).expect("sample profiles are valid");
        checks.push(Check::new(
            format!("sixfold dominates {profile}"),
            value <= solved.value,
            format!("g = {value}"),
        ));
    }
    checks.push(Check::new("sixfold witness", true, solved.witness_string()));
    checks
}

fn oracle_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 1..=6u32 {
        for r in 1..=3u64 {
            let dp = solve_f(n, r);
            let brute = solve_f_bruteforce(n, r).expect("n <= 8");
            let passed = dp.value == brute.value && dp.floor == brute.floor;
            checks.push(Check::new(
                format!("oracle n={n} r={r}"),
                passed,
                format!(
                    "dp {} vs brute {} ({} candidates)",
                    dp.value, brute.value, brute.stats.candidates
                ),
            ));
        }
    }
    checks
}

fn bounds_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    // Global upper bounds strictly dominate the exact maximum.
    for n in [2u32, 3, 4, 6, 8, 12, 16, 24, 32, 40] {
        for r in [1u64, 2, 5] {
            let report = bound_report(n, r, 64, 40, false).expect("n >= 2");
            for entry in &report.entries {
                let expect_dominates = entry.name != "easy_lower";
                let passed = if expect_dominates {
                    entry.dominates_f == Dominance::True
                } else {
                    entry.dominates_f == Dominance::False
                };
                checks.push(Check::new(
                    format!("bounds {} n={n} r={r}", entry.name),
                    passed,
                    format!("interval {}", entry.interval),
                ));
            }
        }
    }
    // Term-level bounds on a spot grid; the W-based bound is d-free and is
    // evaluated once per (b, n, r).
    for n in [5u32, 12, 20] {
        for r in [1u64, 2] {
            let mut all = true;
            for b in 1..=n {
                let b_rational = Rational::from_integer(BigInt::from(b));
                let wbound = wbased_interval(b, n, r, 64);
                for d in b..=n {
                    let term = term_value(&b_rational, d, n, r).expect("in range");
                    let wbased_ok =
                        term.enclose(64).hi() <= wbound.lo() || wbased_dominates(&term, b, n, r);
                    all &= young_dominates(&term, b, n, r)
                        && refined_dominates(&term, b, n, r)
                        && wbased_ok;
                }
            }
            checks.push(Check::new(
                format!("term bounds n={n} r={r}"),
                all,
                "young/refined/wbased dominate every term".to_string(),
            ));
        }
    }
    // W behaves: inverse identity, sandwich, omega constant.
    checks.push(w_identity_check());
    checks.push(w_sandwich_check());
    checks.push(omega_check());
    checks
}

fn w_identity_check() -> Check {
    let tolerance_num = BigInt::from(1);
    let tolerance_den = BigInt::from(10u64.pow(12));
    let mut worst = String::new();
    let mut passed = true;
    for (num, den) in [
        (1i64, 10i64),
        (1, 2),
        (1, 1),
        (2, 1),
        (5, 1),
        (10, 1),
        (100, 1),
        (1_000_000, 1),
    ] {
        let x = Rational::new(BigInt::from(num), BigInt::from(den));
        let w = lambert_w(&x, 64).expect("x >= 0");
        let mid = w.midpoint();
        let u = DyadicInterval::exact(mid.clone(), 128).mul(&exp_point(&mid, 128));
        let x_dyadic = Dyadic::from_ratio(x.numer(), x.denom(), 128, Round::Down);
        let residual = u.sub(&DyadicInterval::exact(x_dyadic, 128));
        let tol = Rational::new(tolerance_num.clone(), tolerance_den.clone())
            * x.clone().max(Rational::one());
        let ok = residual.lo().to_rational() >= -tol.clone() && residual.hi().to_rational() <= tol;
        if !ok {
            passed = false;
            worst = format!("failed at x = {x}");
        }
    }
    Check::new(
        "lambert identity grid",
        passed,
        if passed {
            "|W e^W - x| within 1e-12 rel".into()
        } else {
            worst
        },
    )
}

fn w_sandwich_check() -> Check {
    let mut passed = true;
    for n in [3i64, 5, 10, 100, 1000] {
        let w = lambert_w(&Rational::from_integer(BigInt::from(n)), 64).expect("n > 0");
        let log_n = log_interval(&DyadicInterval::exact(Dyadic::from_int(n), 96), 96);
        let half = log_n.lo().shift(-1);
        passed &= w.lo() > &half && w.hi() < log_n.lo();
    }
    Check::new(
        "lambert sandwich",
        passed,
        "W(n) within (log(n)/2, log n) for sampled n >= 3",
    )
}

fn omega_check() -> Check {
    let w1 = lambert_w(&Rational::one(), 96).expect("1 >= 0");
    let log_w1 = log_interval(&w1, 96);
    let inv = DyadicInterval::exact(Dyadic::one(), 96).div(&w1, 96);
    let c = log_w1.neg().add(&inv);
    let above = c.lo().to_rational() > Rational::new(BigInt::from(232), BigInt::from(100));
    let below = c.hi().to_rational() < Rational::new(BigInt::from(234), BigInt::from(100));
    Check::new(
        "omega constant",
        above && below,
        format!("-log W(1) + 1/W(1) in {c}"),
    )
}

fn appendix_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in [110u32, 150, 200] {
        match lower_construction(n, 64) {
            Ok(report) => {
                let passed = report.violations.is_empty()
                    && report.gap_at_least_two
                    && report.meets_target == Some(true);
                checks.push(Check::new(
                    format!("construction n={n}"),
                    passed,
                    format!(
                        "target {}, value enclosure {}",
                        report.target,
                        report
                            .value_enclosure
                            .map(|e| e.to_string())
                            .unwrap_or_else(|| "n/a".into())
                    ),
                ));
            }
            Err(err) => checks.push(Check::new(
                format!("construction n={n}"),
                false,
                err.to_string(),
            )),
        }
    }
    for (n, expected) in [(2u32, 1u64), (3, 2)] {
        let report = large_r_threshold(n, 10).expect("n in range");
        checks.push(Check::new(
            format!("large-r threshold n={n}"),
            report.threshold == Some(expected),
            format!(
                "threshold {:?}, certificates {:?}",
                report.threshold, report.certificates
            ),
        ));
    }
    let mut identity_ok = true;
    for n in 1..=8u32 {
        for r in 1..=3u64 {
            identity_ok &= f_eval(&identity_chain(n), r).expect("valid") == root_sum(n, r);
        }
    }
    checks.push(Check::new(
        "identity chain closed form",
        identity_ok,
        "f(identity chain) = sum of r^(1/b) for n <= 8, r <= 3",
    ));
    // The two W-based term-bound forms agree.
    let mut residual_ok = true;
    for (b, n, r) in [(1u32, 10u32, 1u64), (2, 20, 2), (5, 110, 1)] {
        let residual = wform_residual(b, n, r, 64);
        let tol = Rational::new(BigInt::from(n), BigInt::from(10u64.pow(10)));
        residual_ok &=
            residual.lo().to_rational() >= -tol.clone() && residual.hi().to_rational() <= tol;
    }
    checks.push(Check::new(
        "delta form agreement",
        residual_ok,
        "r^(1/b) e^{W} matches n/delta(b) within 1e-10 n",
    ));
    // W(e) = 1 exactly.
    let w_e = lambert_w_interval(&e_const(96), 80).expect("e > 0");
    checks.push(Check::new(
        "W(e) = 1",
        w_e.contains_dyadic(&Dyadic::one()),
        format!("enclosure {w_e}"),
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn oracle_suite_passes() {
        assert!(run_suite(Suite::Oracle).iter().all(|c| c.passed));
    }

    #[test]
    fn sixfold_suite_passes() {
        assert!(run_suite(Suite::Sixfold).iter().all(|c| c.passed));
    }

    #[test]
    fn appendix_suite_passes() {
        for check in run_suite(Suite::Appendix) {
            assert!(check.passed, "{check}");
        }
    }

    #[test]
    fn table1_suite_reports_reference_conflicts() {
        // The r=1 row matches the reference everywhere; the r=2 row is known
        // to disagree with the exact maxima at five cells (see the exact
        // counterexample in the solver tests).
        let checks = run_suite(Suite::Table1);
        assert_eq!(checks.len(), 32);
        for check in &checks {
            if check.name.contains("r=1") {
                assert!(check.passed, "{check}");
            }
        }
        let failing: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(
            failing,
            vec![
                "table1 n=7 r=2",
                "table1 n=8 r=2",
                "table1 n=9 r=2",
                "table1 n=15 r=2",
                "table1 n=16 r=2"
            ]
        );
    }
}
