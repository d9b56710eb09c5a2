//! Machine-readable verification suites over every module.

use std::fmt::{self, Display};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::classes::{canonical_representative, cc, class_path, corner_bounded_paths, member_path, partition_classes, paths_below, shift_inverse, shift_map};
use crate::insertion::{decode, encode, generate_all, par_fold_all, Generated, InsertionCode};
use crate::pasep::{expected_x, mc_sample, stationary_distribution, tableau_distribution, PasepParams};
use crate::perm::{corner_indices_code, corner_indices_geom, corner_indices_perm, count_pk_in_corner, phi, phi_inverse, Permutation};
use crate::poly::IntPolynomial;
use crate::stats::{a_recurrence_holds, corners_total, factorial, p_recurrence, perms_without_consecutive_cycles, stat_report};
use crate::symmetric::{
    b_recurrence_holds, corners_total_symmetric, corners_total_symmetric_factorial, diagonal_points, generate_symmetric,
    generate_symmetric_paired, q_enum, q_recurrence, signed_factorial, triplet_image, variance_oc_symmetric,
};
use crate::tableau::Cell;

/// Largest `n` the suites accept.
pub const MAX_N: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("n_max = {n} is outside the feasible range 1..={max}")]
    InfeasibleN { n: usize, max: usize },
    #[error("unknown suite {0:?}; expected theorems, conjectures, bijections, pasep or all")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Conjectures,
    Bijections,
    Pasep,
    All,
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "conjectures" => Ok(Suite::Conjectures),
            "bijections" => Ok(Suite::Bijections),
            "pasep" => Ok(Suite::Pasep),
            "all" => Ok(Suite::All),
            other => Err(VerifyError::UnknownSuite(other.to_string())),
        }
    }
}

impl Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Theorems => "theorems",
            Suite::Conjectures => "conjectures",
            Suite::Bijections => "bijections",
            Suite::Pasep => "pasep",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Conjecture-level check that held.
    FlaggedMatch,
    /// Conjecture-level check that did not hold; never fails a run.
    FlaggedMismatch,
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::FlaggedMatch => "flagged-match",
            Status::FlaggedMismatch => "flagged-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    /// The claim being checked.
    pub anchor: &'static str,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub n_max: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// True when some non-flagged check failed.
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// One JSON object per check, newline-terminated.
    pub fn to_jsonl(&self) -> String {
        self.checks.iter().map(|c| serde_json::to_string(c).expect("check serializes") + "\n").collect()
    }

    /// Fixed-width summary table.
    pub fn table(&self) -> String {
        let clip = |s: &str| if s.chars().count() > 40 { s.chars().take(37).collect::<String>() + "..." } else { s.to_string() };
        let idw = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("{:<idw$}  {:<16}  {:<40}  {}\n", "id", "status", "expected", "observed");
        for c in &self.checks {
            out += &format!("{:<idw$}  {:<16}  {:<40}  {}\n", c.id, c.status.to_string(), clip(&c.expected), clip(&c.observed));
        }
        out += &format!(
            "{} checks: {} pass, {} fail, {} flagged-match, {} flagged-mismatch\n",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::FlaggedMatch),
            self.count(Status::FlaggedMismatch)
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub n_max: usize,
    pub seed: u64,
    /// Record wall-clock time per check; makes the output nondeterministic.
    pub timings: bool,
}

impl SuiteOptions {
    pub fn new(n_max: usize) -> Self {
        SuiteOptions { n_max, seed: 0, timings: false }
    }
}

struct Runner {
    timings: bool,
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let mut c = f();
        if self.timings {
            c.millis = Some(start.elapsed().as_millis() as u64);
        }
        self.checks.push(c);
    }
}

fn strict(id: String, anchor: &'static str, expected: impl Display, observed: impl Display, ok: bool) -> Check {
    let status = if ok { Status::Pass } else { Status::Fail };
    Check { id, anchor, expected: expected.to_string(), observed: observed.to_string(), status, millis: None }
}

fn flagged(id: String, anchor: &'static str, expected: impl Display, observed: impl Display, ok: bool) -> Check {
    let status = if ok { Status::FlaggedMatch } else { Status::FlaggedMismatch };
    Check { id, anchor, expected: expected.to_string(), observed: observed.to_string(), status, millis: None }
}

fn equal<T: PartialEq + Display>(id: String, anchor: &'static str, expected: T, observed: T) -> Check {
    let ok = expected == observed;
    strict(id, anchor, expected, observed, ok)
}

fn list<T: Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn run_suite(suite: Suite, opts: SuiteOptions) -> Result<VerificationReport, VerifyError> {
    if opts.n_max < 1 || opts.n_max > MAX_N {
        return Err(VerifyError::InfeasibleN { n: opts.n_max, max: MAX_N });
    }
    let mut r = Runner { timings: opts.timings, checks: Vec::new() };
    let all = suite == Suite::All;
    if all || suite == Suite::Theorems {
        theorems(&mut r, opts.n_max);
    }
    if all || suite == Suite::Bijections {
        bijections(&mut r, opts.n_max);
    }
    if all || suite == Suite::Conjectures {
        conjectures(&mut r, opts.n_max);
    }
    if all || suite == Suite::Pasep {
        pasep(&mut r, opts.n_max, opts.seed);
    }
    Ok(VerificationReport { suite, n_max: opts.n_max, checks: r.checks })
}

fn theorems(r: &mut Runner, n_max: usize) {
    let mut prev: Option<IntPolynomial> = None;
    for n in 1..=n_max {
        let report = stat_report(n);
        let hist = IntPolynomial::from_histogram(&report.oc_histogram);
        r.run(|| equal(format!("theorems/cardinality/n={n}"), "|T_n| = n!", factorial(n), report.total_tableaux.clone()));
        r.run(|| equal(format!("theorems/oc-total/n={n}"), "oc(T_n) = n!", factorial(n), report.total_oc.clone()));
        r.run(|| {
            let rec = p_recurrence(n).expect("integral recurrence");
            equal(format!("theorems/p-polynomial/n={n}"), "P_n from the recurrence equals the enumerated histogram", rec, hist.clone())
        });
        if let Some(p) = &prev {
            r.run(|| {
                let ok = a_recurrence_holds(n, p, &hist);
                strict(format!("theorems/a-recurrence/n={n}"), "k a_{n,k} = 2k a_{n-1,k} + (n-2(k-1)) a_{n-1,k-1}", "holds", if ok { "holds" } else { "violated" }, ok)
            });
        }
        if n >= 2 {
            let expect = BigRational::new(BigInt::from(n) - 2, BigInt::from(n));
            r.run(|| equal(format!("theorems/variance/n={n}"), "variance of oc is (n-2)/n", expect, report.variance.clone()));
        }
        if n >= 2 {
            r.run(|| pk_corner_check(n));
        }
        prev = Some(hist);
    }
    r.run(|| {
        let printed = IntPolynomial::from_i64(&[1193760, 1475280, 748800, 188640, 21600, 720]);
        equal("theorems/p10-printed".into(), "printed P_10", printed, p_recurrence(10).expect("integral recurrence"))
    });

    for size in (1..=n_max).step_by(2) {
        let m = size / 2;
        let sym = generate_symmetric(size).expect("odd size");
        r.run(|| equal(format!("theorems/sym-cardinality/size={size}"), "|T^Sym_{2n+1}| = 2^n n!", signed_factorial(m), BigUint::from(sym.len())));
        r.run(|| {
            let oc: BigUint = sym.iter().map(|t| BigUint::from(t.occupied_corner_count())).sum();
            equal(format!("theorems/sym-oc-total/size={size}"), "oc(T^Sym_{2n+1}) = 2^n n!", signed_factorial(m), oc)
        });
        r.run(|| {
            let bad = sym.iter().filter(|t| diagonal_points(t) != [Cell::ROOT]).count();
            equal(format!("theorems/sym-diagonal/size={size}"), "the root is the only diagonal point", 0, bad)
        });
        r.run(|| {
            let ok = generate_symmetric_paired(size).expect("odd size") == sym;
            strict(format!("theorems/sym-generators-agree/size={size}"), "paired insertion yields the filtered set", "equal", if ok { "equal" } else { "different" }, ok)
        });
    }
    if n_max >= 9 {
        r.run(|| {
            let eleven = generate_symmetric_paired(11).expect("odd size");
            let oc: BigUint = eleven.iter().map(|t| BigUint::from(t.occupied_corner_count())).sum();
            let observed = format!("{} tableaux, oc {}", eleven.len(), oc);
            let expected = format!("{0} tableaux, oc {0}", signed_factorial(5));
            let ok = observed == expected;
            strict("theorems/sym-size-11".into(), "|T^Sym_11| = oc(T^Sym_11) = 3840", expected, observed, ok)
        });
    }
    let q_max = (n_max.saturating_sub(1) / 2).max(1);
    for m in 1..=q_max {
        r.run(|| equal(format!("theorems/q-polynomial/n={m}"), "Q_n from the recurrence equals the enumerated histogram", q_recurrence(m).expect("integral recurrence"), q_enum(m)));
        if m >= 2 {
            r.run(|| {
                let ok = b_recurrence_holds(m, &q_enum(m - 1), &q_enum(m));
                strict(format!("theorems/b-recurrence/n={m}"), "2k b_{n,k} = 2(2k b_{n-1,k} + (n-2(k-1)) b_{n-1,k-1})", "holds", if ok { "holds" } else { "violated" }, ok)
            });
        }
    }
    r.run(|| {
        let printed = IntPolynomial::from_i64(&[109405056, 0, 61380480, 0, 13566720, 0, 1386240, 0, 55680, 0, 384]);
        equal("theorems/q9-printed".into(), "printed Q_9", printed, q_recurrence(9).expect("integral recurrence"))
    });
    for m in 1..=4 {
        r.run(|| {
            let claimed = BigRational::new(BigInt::from(m) - 1, BigInt::from(m));
            equal(format!("theorems/sym-variance/n={m}"), "variance of oc on T^Sym_{2n+1} is (n-1)/n", claimed, variance_oc_symmetric(m).expect("integral recurrence"))
        });
    }
    for n in 1..=n_max.min(8) {
        r.run(|| class_check(n));
    }
    r.run(|| {
        let bad = corner_bounded_paths(12)
            .filter(|p| {
                let below = paths_below(p);
                below.iter().map(|q| cc(p, q).expect("below")).sum::<usize>() != below.len()
            })
            .count();
        equal("theorems/path-cc/steps<=12".into(), "#paths below P = sum of cc(P')", 0, bad)
    });
}

fn pk_corner_check(n: usize) -> Check {
    let counts = par_fold_all(
        n,
        || vec![0u64; n + 1],
        |mut acc, g: Generated| {
            for k in corner_indices_geom(&g.tableau, &g.trace) {
                acc[k] += 1;
            }
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let expected: Vec<BigUint> = (2..=n).map(|k| count_pk_in_corner(n, k).expect("k in range")).collect();
    let observed: Vec<BigUint> = counts[2..].iter().map(|&c| BigUint::from(c)).collect();
    let ok = expected == observed;
    strict(format!("theorems/pk-corner/n={n}"), "#{T : p_k in a corner} = n!/((n-k+2)(n-k+1)) (+ (n-1)! at k = n)", list(&expected), list(&observed), ok)
}

fn class_check(n: usize) -> Check {
    let classes = partition_classes(n);
    let mut problems = 0usize;
    for members in classes.values() {
        let Ok(canon) = canonical_representative(members) else {
            problems += 1;
            continue;
        };
        let oc: usize = members.iter().map(|t| t.occupied_corner_count()).sum();
        let p = class_path(canon);
        let mut paths: Vec<_> = members.iter().map(|m| member_path(m, canon)).collect();
        paths.sort();
        let cc_ok = members.iter().all(|m| cc(&p, &member_path(m, canon)).ok() == Some(m.occupied_corner_count()));
        if oc != members.len() || paths != paths_below(&p) || !cc_ok {
            problems += 1;
        }
    }
    let observed = format!("{} classes, {} violations", classes.len(), problems);
    let expected = format!("{} classes, 0 violations", classes.len());
    let ok = problems == 0;
    strict(format!("theorems/classes/n={n}"), "one canonical member per class, sum of oc = class size, members = paths below", expected, observed, ok)
}

fn bijections(r: &mut Runner, n_max: usize) {
    r.run(|| {
        let code = InsertionCode::from_full(&[1, 1, 3, 2, 2, 1, 4]).expect("valid code");
        equal("bijections/phi-example".into(), "phi(1,1,3,2,2,1,4) = 6275314", "6275314".to_string(), phi(&code).to_string())
    });
    for n in 1..=n_max.min(8) {
        r.run(|| {
            let bad = generate_all(n)
                .filter(|g| {
                    let code = encode(&g.tableau).ok();
                    let back = code.as_ref().map(|c| decode(c).0);
                    code.as_ref() != Some(&g.code) || back.as_ref() != Some(&g.tableau) || phi_inverse(&phi(&g.code)) != g.code
                })
                .count();
            equal(format!("bijections/tableaux-roundtrip/n={n}"), "decode . encode = id and phi^-1 . phi = id on T_n", 0, bad)
        });
        r.run(|| {
            let bad = Permutation::all(n).filter(|s| phi(&phi_inverse(s)) != *s).count();
            equal(format!("bijections/perm-roundtrip/n={n}"), "phi . phi^-1 = id on S_n", 0, bad)
        });
        r.run(|| {
            let bad = par_fold_all(
                n,
                || 0usize,
                |acc, g: Generated| {
                    let geom = corner_indices_geom(&g.tableau, &g.trace);
                    let ok = geom == corner_indices_perm(&phi(&g.code)) && geom == corner_indices_code(&g.code);
                    acc + usize::from(!ok)
                },
                |a, b| a + b,
            );
            equal(format!("bijections/corner-characterisation/n={n}"), "p_k in a corner iff the permutation condition at k holds", 0, bad)
        });
    }
    for size in (3..=n_max).step_by(2) {
        let m = size / 2;
        r.run(|| {
            let observed = triplet_image(m).map_or_else(|| "collision".to_string(), |s| s.len().to_string());
            let expected = signed_factorial(m).to_string();
            let ok = observed == expected;
            strict(format!("bijections/sym-triplets/size={size}"), "occupied corners of T^Sym_{2n+1} <-> (T', i, rho)", expected, observed, ok)
        });
    }
    r.run(|| {
        let mut bad = 0usize;
        for p in corner_bounded_paths(12) {
            let below = paths_below(&p);
            let pc = p.corners();
            let mut image = Vec::new();
            for q in &below {
                for c in q.corners().into_iter().filter(|c| pc.contains(c)) {
                    let Ok(img) = shift_map(&p, q, c) else {
                        bad += 1;
                        continue;
                    };
                    if shift_inverse(&p, &img).ok() != Some((q.clone(), c)) {
                        bad += 1;
                    }
                    image.push(img);
                }
            }
            image.sort();
            if image != below {
                bad += 1;
            }
        }
        equal("bijections/shift/steps<=12".into(), "shift map is a bijection onto the paths below P", 0, bad)
    });
}

fn conjectures(r: &mut Runner, n_max: usize) {
    for n in 2..=n_max {
        r.run(|| {
            let c = corners_total(n);
            flagged(format!("conjectures/corners/n={n}"), "c(T_n) = n!(n+4)/6", c.conjectured, c.enumerated, c.matches)
        });
    }
    for size in (3..=n_max).step_by(2) {
        r.run(|| {
            let c = corners_total_symmetric(size).expect("odd size");
            flagged(format!("conjectures/sym-corners/size={size}"), "c(T^Sym_{2n+1}) = 2^n n (4n+13)/12", c.conjectured, c.enumerated, c.matches)
        });
        r.run(|| {
            let c = corners_total_symmetric_factorial(size).expect("odd size");
            flagged(format!("conjectures/sym-corners-factorial/size={size}"), "c(T^Sym_{2n+1}) = 2^n n! (4n+13)/12", c.conjectured, c.enumerated, c.matches)
        });
    }
    for n in 1..=n_max.min(8) {
        r.run(|| {
            let zero = p_recurrence(n).expect("integral recurrence").coeff(0);
            let brute = BigInt::from(perms_without_consecutive_cycles(n));
            let ok = zero == brute;
            flagged(format!("conjectures/zero-oc/n={n}"), "P_n(0) counts permutations without cycles (i,i+1,...,i+j-1)", brute, zero, ok)
        });
    }
}

fn pasep(r: &mut Runner, n_max: usize, seed: u64) {
    let uniform = PasepParams::uniform();
    for n in 1..=n_max.min(7) {
        r.run(|| {
            let tab = tableau_distribution(n);
            let ok = stationary_distribution(n, &uniform).map(|d| d == tab).unwrap_or(false);
            strict(format!("pasep/stationary/n={n}"), "stationary law at alpha = beta = q = 1 is the tableau projection", "equal", if ok { "equal" } else { "different" }, ok)
        });
    }
    for n in 1..n_max {
        r.run(|| {
            let bad = generate_all(n + 1).filter(|g| g.tableau.corner_count() != g.tableau.project_state().corners()).count();
            equal(format!("pasep/corners-of-state/n={n}"), "c(T) depends only on the projected state", 0, bad)
        });
        r.run(|| {
            let e = expected_x(n);
            let claimed = BigRational::new(BigInt::from(n + 2), BigInt::from(3));
            let routes_agree = tableau_distribution(n).expected_x() == e;
            let ok = e == claimed && routes_agree;
            flagged(format!("pasep/expected-x/n={n}"), "E(X) = (n+2)/3", claimed, e, ok)
        });
    }
    r.run(|| {
        let steps = 1_000_000;
        let sample = mc_sample(5, &uniform, steps, seed).expect("valid parameters");
        let exact = stationary_distribution(5, &uniform).expect("irreducible");
        let tv = sample.total_variation(&exact).to_f64().unwrap_or(f64::INFINITY);
        strict(format!("pasep/monte-carlo/n=5/seed={seed}"), "sampled law is close to the exact stationary law", "tv < 0.02", format!("tv = {tv:.5}"), tv < 0.02)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infeasible() {
        assert_eq!(run_suite(Suite::All, SuiteOptions::new(0)).unwrap_err(), VerifyError::InfeasibleN { n: 0, max: MAX_N });
        assert!(run_suite(Suite::All, SuiteOptions::new(10)).is_err());
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn theorems_small() {
        let rep = run_suite(Suite::Theorems, SuiteOptions::new(5)).unwrap();
        let failing: Vec<&str> = rep.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.as_str()).collect();
        // the stated symmetric variance is off by a factor of two except where it is undefined
        assert!(failing.iter().all(|id| id.starts_with("theorems/sym-variance/")), "{failing:?}");
        assert_eq!(failing.len(), 4);
        assert!(rep.checks.iter().all(|c| c.millis.is_none()));
    }

    #[test]
    fn deterministic_output() {
        let a = run_suite(Suite::Bijections, SuiteOptions::new(4)).unwrap();
        let b = run_suite(Suite::Bijections, SuiteOptions::new(4)).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert!(!a.failed());
        assert!(a.table().contains("bijections/phi-example"));
    }

    #[test]
    fn conjecture_flags() {
        let rep = run_suite(Suite::Conjectures, SuiteOptions::new(7)).unwrap();
        assert!(!rep.failed());
        let status = |id: &str| rep.checks.iter().find(|c| c.id == id).unwrap().status;
        assert_eq!(status("conjectures/corners/n=7"), Status::FlaggedMatch);
        assert_eq!(status("conjectures/sym-corners/size=5"), Status::FlaggedMatch);
        assert_eq!(status("conjectures/sym-corners/size=7"), Status::FlaggedMismatch);
        assert_eq!(status("conjectures/sym-corners-factorial/size=7"), Status::FlaggedMatch);
    }
}
