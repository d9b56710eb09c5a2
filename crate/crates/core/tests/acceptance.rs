//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines are always printed; exits nonzero when a non-flagged criterion fails.

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use tlt_core::classes::{canonical_representative, cc, class_path, corner_bounded_paths, member_path, partition_classes, paths_below, shift_inverse, shift_map};
use tlt_core::insertion::{all_codes, decode, encode, generate_all, par_fold_all, Generated, InsertionCode};
use tlt_core::pasep::{expected_x, mc_sample, stationary_distribution, tableau_distribution, PasepParams};
use tlt_core::perm::{corner_indices_geom, corner_indices_perm, count_pk_in_corner, phi, phi_inverse, Permutation};
use tlt_core::poly::IntPolynomial;
use tlt_core::stats::{a_recurrence_check, corners_total, factorial, oc_total, p_enum, p_recurrence, perms_without_consecutive_cycles, stat_report, variance_oc};
use tlt_core::symmetric::{
    corners_total_symmetric, corners_total_symmetric_factorial, generate_symmetric, generate_symmetric_paired, oc_total_symmetric, q_enum, q_recurrence,
    signed_factorial, variance_oc_symmetric,
};
use tlt_core::Tableau;

#[derive(PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    FlaggedMatch,
    FlaggedMismatch,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn strict(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail: detail.into() }
}

fn flagged(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { verdict: if ok { Verdict::FlaggedMatch } else { Verdict::FlaggedMismatch }, detail: detail.into() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cardinality() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=9 {
        let mut seen = HashSet::new();
        for g in generate_all(n) {
            let valid = Tableau::validate(g.tableau.rows().to_vec(), g.tableau.points().to_vec()).is_ok();
            if !valid || g.tableau.size() != n || !seen.insert(g.tableau) {
                bad.push(n);
                break;
            }
        }
        if BigUint::from(seen.len()) != factorial(n) {
            bad.push(n);
        }
    }
    let start = Instant::now();
    let count = generate_all(9).count();
    let secs = start.elapsed().as_secs_f64();
    strict(bad.is_empty() && count == 362_880 && secs < 60.0, format!("n!=|T_n| distinct and valid for n<=9 (bad: {bad:?}); n=9 single-threaded in {secs:.2}s"))
}

fn oc_totals() -> Outcome {
    let bad: Vec<usize> = (1..=9).filter(|&n| oc_total(n) != factorial(n)).collect();
    strict(bad.is_empty(), format!("oc(T_n) = n! for n<=9 (bad: {bad:?})"))
}

fn p_polynomials() -> Outcome {
    let bad: Vec<usize> = (1..=9).filter(|&n| p_recurrence(n).ok() != Some(p_enum(n))).collect();
    let printed = IntPolynomial::from_i64(&[1193760, 1475280, 748800, 188640, 21600, 720]);
    let p10 = p_recurrence(10).ok();
    let ok10 = p10.as_ref() == Some(&printed);
    strict(bad.is_empty() && ok10, format!("P_rec = P_enum for n<=9 (bad: {bad:?}); P_10 = {}", p10.map_or("error".into(), |p| p.to_string())))
}

fn a_recurrence() -> Outcome {
    let bad: Vec<usize> = (2..=9).filter(|&n| !a_recurrence_check(n)).collect();
    strict(bad.is_empty(), format!("coefficient recurrence between enumerated histograms, n=2..9 (bad: {bad:?})"))
}

fn variances() -> Outcome {
    let bad: Vec<usize> = (2..=9)
        .filter(|&n| {
            let claim = rat(n as i64 - 2, n as i64);
            variance_oc(n).ok() != Some(claim.clone()) || stat_report(n).variance != claim
        })
        .collect();
    let sym: Vec<String> = (1..=4)
        .map(|n| {
            let v = variance_oc_symmetric(n).expect("integral recurrence");
            let claim = rat(n as i64 - 1, n as i64);
            format!("n={n}: {v} vs {claim}{}", if v == claim { "" } else { " (differs)" })
        })
        .collect();
    let sym_ok = (1..=4).all(|n| variance_oc_symmetric(n).ok() == Some(rat(n as i64 - 1, n as i64)));
    strict(
        bad.is_empty() && sym_ok,
        format!("(n-2)/n for n=2..9 (bad: {bad:?}); symmetric (n-1)/n: {}", sym.join(", ")),
    )
}

fn pk_corners() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=8 {
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
        for (k, &count) in counts.iter().enumerate().take(n + 1).skip(2) {
            if count_pk_in_corner(n, k).ok() != Some(BigUint::from(count)) {
                bad.push((n, k));
            }
        }
    }
    let sums: Vec<usize> = (2..=12)
        .filter(|&n| (2..=n).map(|k| count_pk_in_corner(n, k).expect("k in range")).sum::<BigUint>() != factorial(n))
        .collect();
    strict(bad.is_empty() && sums.is_empty(), format!("formula = enumeration for 2<=k<=n<=8 (bad: {bad:?}); sum = n! for n<=12 (bad: {sums:?})"))
}

fn phi_bijection() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=8 {
        let tab_ok = generate_all(n).all(|g| {
            let code = encode(&g.tableau).ok();
            code.as_ref() == Some(&g.code) && decode(&g.code).0 == g.tableau && phi_inverse(&phi(&g.code)) == g.code
        });
        let perm_ok = Permutation::all(n).all(|s| phi(&phi_inverse(&s)) == s);
        let images: HashSet<Permutation> = all_codes(n).map(|c| phi(&c)).collect();
        if !tab_ok || !perm_ok || BigUint::from(images.len()) != factorial(n) {
            bad.push(n);
        }
    }
    let code = InsertionCode::from_full(&[1, 1, 3, 2, 2, 1, 4]).expect("valid code");
    let example = phi(&code).to_string();
    strict(bad.is_empty() && example == "6275314", format!("roundtrips on T_n and S_n for n<=8 (bad: {bad:?}); (1,1,3,2,2,1,4) -> {example}"))
}

fn corner_characterisation() -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for n in 1..=8 {
        let (c, b) = par_fold_all(
            n,
            || (0u64, 0u64),
            |(c, b), g: Generated| {
                let ok = corner_indices_geom(&g.tableau, &g.trace) == corner_indices_perm(&phi(&g.code));
                (c + 1, b + u64::from(!ok))
            },
            |x, y| (x.0 + y.0, x.1 + y.1),
        );
        checked += c;
        bad += b;
    }
    strict(bad == 0, format!("geometric and permutation corner sets agree on {checked} tableaux, {bad} mismatches"))
}

fn symmetric() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 0..=4 {
        let size = 2 * m + 1;
        let filtered = generate_symmetric(size).expect("odd size");
        let oc: usize = filtered.iter().map(Tableau::occupied_corner_count).sum();
        let paired = generate_symmetric_paired(size).expect("odd size");
        let good = BigUint::from(filtered.len()) == signed_factorial(m) && BigUint::from(oc) == signed_factorial(m) && paired == filtered;
        ok &= good;
        if !good {
            notes.push(format!("size {size} wrong"));
        }
    }
    let eleven = generate_symmetric_paired(11).expect("odd size");
    let eleven_ok = eleven.len() == 3840 && oc_total_symmetric(11).ok() == Some(BigUint::from(3840u32));
    let q_ok = (1..=4).all(|n| q_recurrence(n).ok() == Some(q_enum(n)));
    let printed = IntPolynomial::from_i64(&[109405056, 0, 61380480, 0, 13566720, 0, 1386240, 0, 55680, 0, 384]);
    let q9_ok = q_recurrence(9).ok() == Some(printed);
    ok &= eleven_ok && q_ok && q9_ok;
    strict(
        ok,
        format!(
            "2^n n! tableaux and occupied corners, generators set-equal for sizes<=9 {}; size 11: {} tableaux; Q_rec = Q_enum n<=4: {q_ok}; Q_9 printed: {q9_ok}",
            if notes.is_empty() { "ok".to_string() } else { notes.join(", ") },
            eleven.len()
        ),
    )
}

fn classes_and_paths() -> Outcome {
    let mut class_bad = 0usize;
    let mut classes_seen = 0usize;
    for n in 1..=8 {
        for members in partition_classes(n).values() {
            classes_seen += 1;
            let Ok(canon) = canonical_representative(members) else {
                class_bad += 1;
                continue;
            };
            let oc: usize = members.iter().map(Tableau::occupied_corner_count).sum();
            let p = class_path(canon);
            let mut paths: Vec<_> = members.iter().map(|m| member_path(m, canon)).collect();
            paths.sort();
            if oc != members.len() || paths != paths_below(&p) {
                class_bad += 1;
            }
        }
    }
    let mut path_bad = 0usize;
    let mut shift_bad = 0usize;
    let mut paths_seen = 0usize;
    for p in corner_bounded_paths(12) {
        paths_seen += 1;
        let below = paths_below(&p);
        if below.iter().map(|q| cc(&p, q).expect("below")).sum::<usize>() != below.len() {
            path_bad += 1;
        }
        let pc = p.corners();
        let mut image = Vec::new();
        for q in &below {
            for c in q.corners().into_iter().filter(|c| pc.contains(c)) {
                match shift_map(&p, q, c) {
                    Ok(r) if shift_inverse(&p, &r).ok() == Some((q.clone(), c)) => image.push(r),
                    _ => shift_bad += 1,
                }
            }
        }
        image.sort();
        if image != below {
            shift_bad += 1;
        }
    }
    strict(
        class_bad == 0 && path_bad == 0 && shift_bad == 0,
        format!("{classes_seen} classes (n<=8), {class_bad} bad; {paths_seen} paths (<=12 steps): theorem {path_bad} bad, shift {shift_bad} bad"),
    )
}

fn pasep() -> Outcome {
    let uniform = PasepParams::uniform();
    let stat_bad: Vec<usize> = (1..=7).filter(|&n| stationary_distribution(n, &uniform).ok() != Some(tableau_distribution(n))).collect();
    let ex_bad: Vec<usize> = (1..=8).filter(|&n| expected_x(n) != rat(n as i64 + 2, 3)).collect();
    strict(stat_bad.is_empty() && ex_bad.is_empty(), format!("exact stationary = projection for n<=7 (bad: {stat_bad:?}); E(X) = (n+2)/3 for n<=8 (bad: {ex_bad:?})"))
}

fn conjecture_corners() -> Outcome {
    let c1: Vec<usize> = (2..=9).filter(|&n| !corners_total(n).matches).collect();
    let mut c2 = Vec::new();
    for size in [3, 5, 7, 9] {
        let r = corners_total_symmetric(size).expect("odd size");
        let label = format!("size {size}: {} vs {}", r.enumerated, r.conjectured);
        if !r.integral {
            c2.push(label + " (non-integral, skipped)");
        } else if r.matches {
            c2.push(label);
        } else {
            c2.push(label + " (mismatch)");
        }
    }
    let c2_ok = [3, 5, 7, 9].iter().all(|&s| {
        let r = corners_total_symmetric(s).expect("odd size");
        !r.integral || r.matches
    });
    let with_factorial: Vec<usize> = [5, 7, 9].into_iter().filter(|&s| corners_total_symmetric_factorial(s).expect("odd size").matches).collect();
    flagged(
        c1.is_empty() && c2_ok,
        format!(
            "n!(n+4)/6 for n=2..9 (mismatches: {c1:?}); 2^n n(4n+13)/12: {}; with n! in place of n it holds at sizes {with_factorial:?}",
            c2.join(", ")
        ),
    )
}

fn zero_oc() -> Outcome {
    let bad: Vec<usize> = (1..=8).filter(|&n| BigInt::from(perms_without_consecutive_cycles(n)) != p_enum(n).coeff(0)).collect();
    flagged(bad.is_empty(), format!("P_n(0) = brute-force count for n<=8 (mismatches: {bad:?})"))
}

fn monte_carlo() -> Outcome {
    let uniform = PasepParams::uniform();
    let exact = stationary_distribution(5, &uniform).expect("irreducible");
    let a = mc_sample(5, &uniform, 10_000_000, 2024).expect("valid parameters");
    let b = mc_sample(5, &uniform, 10_000_000, 2024).expect("valid parameters");
    let tv = a.total_variation(&exact).to_f64().unwrap_or(f64::INFINITY);
    strict(tv < 0.02 && a == b, format!("n=5, 10^7 steps, seed 2024: tv = {tv:.5} (< 0.02), repeat identical: {}", a == b))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("cardinality", cardinality),
        ("occupied corners total", oc_totals),
        ("P_n polynomials", p_polynomials),
        ("a-recurrence", a_recurrence),
        ("variance", variances),
        ("p_k in a corner", pk_corners),
        ("phi bijection", phi_bijection),
        ("corner characterisation", corner_characterisation),
        ("symmetric tableaux", symmetric),
        ("classes and paths", classes_and_paths),
        ("PASEP", pasep),
        ("corner conjectures (flagged)", conjecture_corners),
        ("zero occupied corners (flagged)", zero_oc),
        ("Monte-Carlo", monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| strict(false, "panicked"));
        let tag = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                failed += 1;
                "FAIL"
            }
            Verdict::FlaggedMatch => "PASS (flagged)",
            Verdict::FlaggedMismatch => "FAIL (flagged, not asserted)",
        };
        println!("criterion {:>2} {tag}: {name}: {} [{:.1}s]", i + 1, outcome.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} strict criteria failed", failed, criteria.len() - 2);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
