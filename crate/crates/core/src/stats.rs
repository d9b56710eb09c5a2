//! Occupied-corner and corner statistics over all tableaux of a given size,
//! the generating polynomials `P_n(x) = sum x^{oc(T)}`, and related checks.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::insertion::{insert_line, par_fold_all, Generated};
use crate::perm::Permutation;
use crate::poly::IntPolynomial;
use crate::ser;
use crate::tableau::{Cell, Corner, Edge, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("corner at {0} is not occupied")]
    NotOccupied(Cell),
    #[error("corner at {0} is not a corner of this tableau")]
    NotACorner(Cell),
    #[error("the size-1 tableau has no removable corner")]
    TooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("non-integer coefficient of x^{k} at n = {n}")]
    NonIntegerCoefficient { n: usize, k: usize },
    #[error("odd power x^{k} present at n = {n}")]
    OddPowerPresent { n: usize, k: usize },
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Aggregates over all tableaux of one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatReport {
    pub n: usize,
    #[serde(serialize_with = "ser::display")]
    pub total_tableaux: BigUint,
    #[serde(serialize_with = "ser::display")]
    pub total_oc: BigUint,
    #[serde(serialize_with = "ser::display")]
    pub total_corners: BigUint,
    /// `oc_histogram[k]` tableaux have exactly `k` occupied corners.
    #[serde(serialize_with = "ser::display_seq")]
    pub oc_histogram: Vec<BigUint>,
    #[serde(serialize_with = "ser::display")]
    pub variance: BigRational,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    oc_hist: Vec<u64>,
    corners: u64,
}

impl Tally {
    fn add(mut self, t: &Tableau) -> Self {
        let corners = t.corners();
        let oc = corners.iter().filter(|c| c.occupied).count();
        if self.oc_hist.len() <= oc {
            self.oc_hist.resize(oc + 1, 0);
        }
        self.oc_hist[oc] += 1;
        self.corners += corners.len() as u64;
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        if self.oc_hist.len() < other.oc_hist.len() {
            self.oc_hist.resize(other.oc_hist.len(), 0);
        }
        for (a, b) in self.oc_hist.iter_mut().zip(other.oc_hist) {
            *a += b;
        }
        self.corners += other.corners;
        self
    }
}

fn tally(n: usize) -> Tally {
    par_fold_all(n, Tally::default, |acc, g: Generated| acc.add(&g.tableau), Tally::merge)
}

/// One enumeration pass over all tableaux of size `n`.
pub fn stat_report(n: usize) -> StatReport {
    let t = tally(n);
    let oc_histogram: Vec<BigUint> = t.oc_hist.iter().map(|&c| BigUint::from(c)).collect();
    let total_tableaux = oc_histogram.iter().sum();
    let total_oc = oc_histogram.iter().enumerate().map(|(k, c)| c * BigUint::from(k)).sum();
    let variance = IntPolynomial::from_histogram(&oc_histogram).exponent_variance();
    StatReport { n, total_tableaux, total_oc, total_corners: BigUint::from(t.corners), oc_histogram, variance }
}

/// Sum of `oc(T)` over all tableaux of size `n`, by enumeration.
pub fn oc_total(n: usize) -> BigUint {
    stat_report(n).total_oc
}

/// Generating polynomial of `oc` over all tableaux of size `n`, by enumeration.
pub fn p_enum(n: usize) -> IntPolynomial {
    IntPolynomial::from_histogram(&tally(n).oc_hist)
}

/// Integrates `derivative` termwise and fixes the constant so the result takes
/// the value `at_one` at `x = 1`.
pub(crate) fn integrate_to_value(
    n: usize,
    derivative: &IntPolynomial,
    at_one: BigInt,
) -> Result<IntPolynomial, RecurrenceError> {
    let mut coeffs = vec![BigInt::zero()];
    for (j, c) in derivative.coeffs().iter().enumerate() {
        let (q, r) = c.div_rem(&BigInt::from(j + 1));
        if !r.is_zero() {
            return Err(RecurrenceError::NonIntegerCoefficient { n, k: j + 1 });
        }
        coeffs.push(q);
    }
    let rest: BigInt = coeffs.iter().sum();
    coeffs[0] = at_one - rest;
    Ok(IntPolynomial::new(coeffs))
}

/// `P_0 = 1` and `P_n' = n P_{n-1} + 2(1 - x) P_{n-1}'` with `P_n(1) = n!`.
pub fn p_recurrence(n: usize) -> Result<IntPolynomial, RecurrenceError> {
    let two_one_minus_x = IntPolynomial::from_i64(&[2, -2]);
    let mut p = IntPolynomial::one();
    for m in 1..=n {
        let rhs = &p.scale(&BigInt::from(m)) + &(&two_one_minus_x * &p.derivative());
        p = integrate_to_value(m, &rhs, factorial(m).into())?;
    }
    Ok(p)
}

/// Checks `k a_{n,k} = 2k a_{n-1,k} + (n - 2(k-1)) a_{n-1,k-1}` for every `k >= 1`,
/// where `a_{m,k}` is the coefficient of `x^k` in the given polynomials.
pub fn a_recurrence_holds(n: usize, prev: &IntPolynomial, cur: &IntPolynomial) -> bool {
    let top = cur.coeffs().len().max(prev.coeffs().len()) + 1;
    (1..=top).all(|k| {
        let kk = BigInt::from(k);
        let lhs = &kk * cur.coeff(k);
        let rhs = BigInt::from(2 * k) * prev.coeff(k) + (BigInt::from(n) - BigInt::from(2 * (k - 1))) * prev.coeff(k - 1);
        lhs == rhs
    })
}

/// The coefficient recurrence between the enumerated histograms of sizes `n - 1` and `n`.
pub fn a_recurrence_check(n: usize) -> bool {
    assert!(n >= 2, "the recurrence relates sizes n-1 >= 1 and n");
    a_recurrence_holds(n, &p_enum(n - 1), &p_enum(n))
}

/// Variance of `oc` over all tableaux of size `n`, from the exact derivatives of `P_n`.
pub fn variance_oc(n: usize) -> Result<BigRational, RecurrenceError> {
    Ok(p_recurrence(n)?.exponent_variance())
}

/// Corner count of `T_n` against `n! (n + 4) / 6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerConjecture {
    pub n: usize,
    #[serde(serialize_with = "ser::display")]
    pub enumerated: BigUint,
    #[serde(serialize_with = "ser::display")]
    pub conjectured: BigRational,
    pub integral: bool,
    pub matches: bool,
}

impl CornerConjecture {
    pub fn new(n: usize, enumerated: BigUint, conjectured: BigRational) -> Self {
        let integral = conjectured.is_integer();
        let matches = conjectured == BigRational::from_integer(BigInt::from(enumerated.clone()));
        CornerConjecture { n, enumerated, conjectured, integral, matches }
    }
}

/// `n! (n + 4) / 6` as an exact rational.
pub fn conjectured_corners(n: usize) -> BigRational {
    BigRational::new(BigInt::from(factorial(n)) * BigInt::from(n + 4), BigInt::from(6))
}

/// Total number of corners over all tableaux of size `n`, reported against the
/// conjectured closed form.
pub fn corners_total(n: usize) -> CornerConjecture {
    CornerConjecture::new(n, BigUint::from(tally(n).corners), conjectured_corners(n))
}

/// Removes the line of an occupied corner that holds no other point.
///
/// Returns the smaller tableau and the index `i` of the corner's bottom edge;
/// inserting a line (without ribbon) at `e_i` of the result gives back `t`.
pub fn removal_bijection(t: &Tableau, corner: &Corner) -> Result<(Tableau, usize), StatsError> {
    if !t.corners().contains(corner) {
        return Err(StatsError::NotACorner(corner.cell));
    }
    if !corner.occupied {
        return Err(StatsError::NotOccupied(corner.cell));
    }
    if t.size() == 1 {
        return Err(StatsError::TooSmall);
    }
    let cell = corner.cell;
    let point_above = t.points().iter().any(|p| p.col == cell.col && p.row < cell.row);
    let (rows, points): (Vec<usize>, Vec<Cell>) = if point_above {
        // the row holds only this point
        let mut rows = t.rows().to_vec();
        rows.remove(cell.row);
        let pts = t
            .points()
            .iter()
            .filter(|&&p| p != cell)
            .map(|&p| if p.row > cell.row { Cell::new(p.row - 1, p.col) } else { p })
            .collect();
        (rows, pts)
    } else {
        // the column holds only this point
        let rows = t.rows().iter().map(|&len| if len > cell.col { len - 1 } else { len }).collect();
        let pts = t
            .points()
            .iter()
            .filter(|&&p| p != cell)
            .map(|&p| if p.col > cell.col { Cell::new(p.row, p.col - 1) } else { p })
            .collect();
        (rows, pts)
    };
    let smaller = Tableau::from_parts_unchecked(rows, points);
    debug_assert_eq!(
        smaller.border_word().edge(corner.bottom_edge_index),
        if point_above { Edge::Horizontal } else { Edge::Vertical }
    );
    Ok((smaller, corner.bottom_edge_index))
}

/// Inverse of [`removal_bijection`]: the tableau and the corner created by
/// inserting a line at `e_i` of `t`.
pub fn removal_inverse(t: &Tableau, i: usize) -> (Tableau, Corner) {
    let ins = insert_line(t, i).expect("index in 1..=size+1");
    let corner = Corner { cell: ins.new_point, bottom_edge_index: i, occupied: true };
    (ins.tableau, corner)
}

/// Whether the cycle through `start` is `(i, i+1, ..., i+j-1)` with `i = start`.
fn is_consecutive_cycle(sigma: &Permutation, start: usize) -> bool {
    let mut x = start;
    loop {
        let y = sigma.at(x);
        if y == start {
            return true;
        }
        if y != x + 1 {
            return false;
        }
        x = y;
    }
}

/// Permutations of `1..=n` with no cycle of the form `(i, i+1, ..., i+j-1)`,
/// `j >= 1`, counted by brute force.
pub fn perms_without_consecutive_cycles(n: usize) -> BigUint {
    let count = Permutation::all(n)
        .filter(|sigma| {
            let mut seen = vec![false; n + 1];
            for start in 1..=n {
                if seen[start] {
                    continue;
                }
                // `start` is the minimum of its cycle
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = sigma.at(x);
                }
                if is_consecutive_cycle(sigma, start) {
                    return false;
                }
            }
            true
        })
        .count();
    BigUint::from(count)
}
