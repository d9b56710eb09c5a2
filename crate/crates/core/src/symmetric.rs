//! Tableaux invariant under transposition (odd sizes `2n + 1`), their
//! occupied-corner polynomials `Q_n(x)`, and a paired insertion that grows them
//! two points at a time.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::insertion::{insert_line, par_fold_all, Generated, InsertionError};
use crate::poly::IntPolynomial;
use crate::stats::{factorial, integrate_to_value, removal_bijection, CornerConjecture, RecurrenceError};
use crate::tableau::{rows_from_letters, Cell, Corner, Edge, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetricError {
    #[error("symmetric tableaux have odd size, got {0}")]
    EvenSize(usize),
    #[error("tableau is not symmetric")]
    NotSymmetric,
    #[error("edge index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("no ribbon fits between edges {from} and {to}")]
    RibbonMismatch { from: usize, to: usize },
    #[error("corner at {0} is not an occupied corner")]
    NotOccupiedCorner(Cell),
}

impl From<InsertionError> for SymmetricError {
    fn from(e: InsertionError) -> Self {
        match e {
            InsertionError::IndexOutOfRange { index, max } => SymmetricError::IndexOutOfRange { index, max },
            other => unreachable!("line insertion only fails on the index: {other}"),
        }
    }
}

/// Which of the two mirrored corners a triplet points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    /// Above the diagonal.
    A,
    /// Below the diagonal.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymTriplet {
    pub base: Tableau,
    pub i: usize,
    pub rho: Rho,
}

fn half(size: usize) -> Result<usize, SymmetricError> {
    if size.is_multiple_of(2) {
        return Err(SymmetricError::EvenSize(size));
    }
    Ok(size / 2)
}

/// Points on the main diagonal.
pub fn diagonal_points(t: &Tableau) -> Vec<Cell> {
    t.points().iter().copied().filter(|p| p.row == p.col).collect()
}

/// All symmetric tableaux of an odd size, by filtering the full enumeration.
/// Sorted, so the order does not depend on scheduling.
pub fn generate_symmetric(size: usize) -> Result<Vec<Tableau>, SymmetricError> {
    half(size)?;
    let mut out = par_fold_all(
        size,
        Vec::new,
        |mut acc, g: Generated| {
            if g.tableau.is_symmetric() {
                acc.push(g.tableau);
            }
            acc
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    out.sort();
    Ok(out)
}

fn check_base(base: &Tableau, i: usize) -> Result<(usize, usize), SymmetricError> {
    if !base.is_symmetric() {
        return Err(SymmetricError::NotSymmetric);
    }
    let n = base.size().div_ceil(2);
    if i < 1 || i > n {
        return Err(SymmetricError::IndexOutOfRange { index: i, max: n });
    }
    // the border of `base` has 2n edges; e_i and e_{2n+1-i} are mirror images
    Ok((i, 2 * n + 1 - i))
}

/// Inserts a line at `e_i` of a symmetric tableau of size `2n - 1` together with
/// the mirror line at `e_{2n+1-i}`, each ending in a new point. No ribbon.
///
/// The two new points are mirror-image occupied corners of the result.
pub fn paired_insert(base: &Tableau, i: usize) -> Result<Tableau, SymmetricError> {
    let (lo, hi) = check_base(base, i)?;
    let upper = insert_line(base, hi)?.tableau;
    Ok(insert_line(&upper, lo)?.tableau)
}

/// The symmetric tableau and occupied corner named by a triplet.
pub fn triplet_to_corner(tr: &SymTriplet) -> Result<(Tableau, Cell), SymmetricError> {
    let (lo, hi) = check_base(&tr.base, tr.i)?;
    let upper = insert_line(&tr.base, hi)?;
    let lower = insert_line(&upper.tableau, lo)?;
    let a = lower.new_point;
    let b = lower.shift.apply(upper.new_point);
    let above = if a.col > a.row { a } else { b };
    let corner = match tr.rho {
        Rho::A => above,
        Rho::B => above.transpose(),
    };
    Ok((lower.tableau, corner))
}

/// Removes an occupied corner and its mirror image, giving the triplet that
/// [`triplet_to_corner`] sends back to `(t, corner)`.
pub fn corner_to_triplet(t: &Tableau, corner: Cell) -> Result<SymTriplet, SymmetricError> {
    if !t.is_symmetric() {
        return Err(SymmetricError::NotSymmetric);
    }
    let find = |t: &Tableau, cell: Cell| -> Result<Corner, SymmetricError> {
        t.corners()
            .into_iter()
            .find(|c| c.cell == cell && c.occupied)
            .ok_or(SymmetricError::NotOccupiedCorner(cell))
    };
    let first = find(t, corner)?;
    if corner.row == corner.col {
        return Err(SymmetricError::NotOccupiedCorner(corner));
    }
    let (t1, i1) = removal_bijection(t, &first).map_err(|_| SymmetricError::NotOccupiedCorner(corner))?;
    // the removed line was a row or a column through `corner`; move the mirror accordingly
    let m = corner.transpose();
    let row_removed = t1.height() < t.height();
    let m = match (row_removed, m.row > corner.row, m.col > corner.col) {
        (true, true, _) => Cell::new(m.row - 1, m.col),
        (false, _, true) => Cell::new(m.row, m.col - 1),
        _ => m,
    };
    let second = find(&t1, m)?;
    let (base, i2) = removal_bijection(&t1, &second).map_err(|_| SymmetricError::NotOccupiedCorner(m))?;
    let rho = if corner.col > corner.row { Rho::A } else { Rho::B };
    Ok(SymTriplet { base, i: i1.min(i2), rho })
}

/// Index of the horizontal edge under the rightmost point that sits at the
/// bottom of its column on or below the diagonal; 0 when there is none.
fn lower_special_index(t: &Tableau) -> usize {
    let h = t.height();
    (0..t.width())
        .rev()
        .map(|c| Cell::new(t.column_len(c) - 1, c))
        .find(|&c| c.row >= c.col && t.is_pointed(c))
        .map_or(0, |c| c.col + h - c.row)
}

/// Lays a ribbon by exchanging the vertical edge `v` with the later horizontal edge `h`.
fn swap_edges(word: &mut [Edge], v: usize, h: usize) -> Result<(), SymmetricError> {
    if v < h && word[v - 1] == Edge::Vertical && word[h - 1] == Edge::Horizontal {
        word.swap(v - 1, h - 1);
        Ok(())
    } else {
        Err(SymmetricError::RibbonMismatch { from: v, to: h })
    }
}

/// One step of the paired insertion with ribbons: from a symmetric tableau of
/// size `2n - 1`, an index `i` in `1..=n` and a tag, builds a symmetric tableau
/// of size `2n + 1`. Every symmetric tableau arises from exactly one triple.
///
/// With tag `a`, a ribbon joins the two new lines. With tag `b`, when `i` lies
/// before the lower special edge `s`, two mirrored ribbons run from the lower
/// new line to `s` and from the mirror of `s` to the upper new line.
pub fn grow_symmetric(base: &Tableau, i: usize, rho: Rho) -> Result<Tableau, SymmetricError> {
    let (lo, hi) = check_base(base, i)?;
    let len = base.size() + 1;
    let s = lower_special_index(base);
    let lines = paired_insert(base, i)?;
    let shift = |p: usize| p + usize::from(lo < p) + usize::from(hi < p);
    let mut word = lines.border_word().letters();
    match rho {
        Rho::A => swap_edges(&mut word, lo + 1, hi + 1)?,
        Rho::B if lo < s => {
            swap_edges(&mut word, lo + 1, shift(s))?;
            swap_edges(&mut word, shift(len + 1 - s), hi + 1)?;
        }
        Rho::B => {}
    }
    Ok(Tableau::from_parts_unchecked(rows_from_letters(&word), lines.points().to_vec()))
}

/// All symmetric tableaux of an odd size via [`grow_symmetric`], sorted.
pub fn generate_symmetric_paired(size: usize) -> Result<Vec<Tableau>, SymmetricError> {
    let k = half(size)?;
    let mut level = vec![Tableau::single()];
    for n in 1..=k {
        let mut next = Vec::with_capacity(level.len() * 2 * n);
        for base in &level {
            for i in 1..=n {
                for rho in [Rho::A, Rho::B] {
                    next.push(grow_symmetric(base, i, rho)?);
                }
            }
        }
        level = next;
    }
    level.sort();
    Ok(level)
}

/// Symmetric tableaux of size `2n + 1`, by filtering for `2n + 1 <= 9` and by
/// paired insertion above that.
fn symmetric_of_half(n: usize) -> Vec<Tableau> {
    let size = 2 * n + 1;
    let out = if size <= 9 { generate_symmetric(size) } else { generate_symmetric_paired(size) };
    out.expect("odd size")
}

/// Sum of `oc(T)` over symmetric tableaux of an odd size.
pub fn oc_total_symmetric(size: usize) -> Result<BigUint, SymmetricError> {
    let n = half(size)?;
    Ok(symmetric_of_half(n).iter().map(|t| BigUint::from(t.occupied_corner_count())).sum())
}

/// `Q_n(x) = sum x^{oc(T)}` over symmetric tableaux of size `2n + 1`, by enumeration.
pub fn q_enum(n: usize) -> IntPolynomial {
    let mut hist: Vec<u64> = Vec::new();
    for t in symmetric_of_half(n) {
        let oc = t.occupied_corner_count();
        if hist.len() <= oc {
            hist.resize(oc + 1, 0);
        }
        hist[oc] += 1;
    }
    IntPolynomial::from_histogram(&hist)
}

/// `2^n n!`
pub fn signed_factorial(n: usize) -> BigUint {
    (BigUint::one() << n) * factorial(n)
}

/// `Q_0 = 1` and `Q_n' = 2n x Q_{n-1} + 2(1 - x^2) Q_{n-1}'` with `Q_n(1) = 2^n n!`.
pub fn q_recurrence(n: usize) -> Result<IntPolynomial, RecurrenceError> {
    let two_one_minus_x2 = IntPolynomial::from_i64(&[2, 0, -2]);
    let mut q = IntPolynomial::one();
    for m in 1..=n {
        let rhs = &q.shift(1).scale(&BigInt::from(2 * m)) + &(&two_one_minus_x2 * &q.derivative());
        q = integrate_to_value(m, &rhs, signed_factorial(m).into())?;
        if let Some(k) = q.coeffs().iter().enumerate().skip(1).step_by(2).find(|(_, c)| !c.is_zero()).map(|(k, _)| k) {
            return Err(RecurrenceError::OddPowerPresent { n: m, k });
        }
    }
    Ok(q)
}

/// Checks `2k b_{n,k} = 2 (2k b_{n-1,k} + (n - 2(k-1)) b_{n-1,k-1})` for every
/// `k >= 1`, where `b_{m,k}` is the coefficient of `x^{2k}`.
pub fn b_recurrence_holds(n: usize, prev: &IntPolynomial, cur: &IntPolynomial) -> bool {
    let top = cur.coeffs().len().max(prev.coeffs().len()) / 2 + 1;
    (1..=top).all(|k| {
        let lhs = BigInt::from(2 * k) * cur.coeff(2 * k);
        let inner = BigInt::from(2 * k) * prev.coeff(2 * k)
            + (BigInt::from(n) - BigInt::from(2 * (k - 1))) * prev.coeff(2 * k - 2);
        lhs == inner * 2
    })
}

/// Variance of `oc` over symmetric tableaux of size `2n + 1`, from `Q_n`.
pub fn variance_oc_symmetric(n: usize) -> Result<BigRational, RecurrenceError> {
    Ok(q_recurrence(n)?.exponent_variance())
}

/// `2^n n (4n + 13) / 12` as an exact rational.
pub fn conjectured_corners_symmetric(n: usize) -> BigRational {
    let num = (BigInt::one() << n) * BigInt::from(n) * BigInt::from(4 * n + 13);
    BigRational::new(num, BigInt::from(12))
}

/// `2^n n! (4n + 13) / 12`, the same form with `n!` in place of `n`.
pub fn conjectured_corners_symmetric_factorial(n: usize) -> BigRational {
    let num = BigInt::from(signed_factorial(n)) * BigInt::from(4 * n + 13);
    BigRational::new(num, BigInt::from(12))
}

fn corners_of_half(n: usize) -> BigUint {
    symmetric_of_half(n).iter().map(|t| BigUint::from(t.corner_count())).sum()
}

/// Total number of corners over symmetric tableaux of an odd size, reported
/// against `2^n n (4n + 13) / 12`.
pub fn corners_total_symmetric(size: usize) -> Result<CornerConjecture, SymmetricError> {
    let n = half(size)?;
    Ok(CornerConjecture::new(n, corners_of_half(n), conjectured_corners_symmetric(n)))
}

/// As [`corners_total_symmetric`], against `2^n n! (4n + 13) / 12`.
pub fn corners_total_symmetric_factorial(size: usize) -> Result<CornerConjecture, SymmetricError> {
    let n = half(size)?;
    Ok(CornerConjecture::new(n, corners_of_half(n), conjectured_corners_symmetric_factorial(n)))
}

/// Every `(symmetric tableau, occupied corner)` pair of size `2n + 1` mapped to
/// its triplet; `None` if two pairs collide or a triplet is malformed.
pub fn triplet_image(n: usize) -> Option<BTreeSet<SymTriplet>> {
    let mut seen = BTreeSet::new();
    for t in symmetric_of_half(n) {
        for c in t.corners().into_iter().filter(|c| c.occupied) {
            let tr = corner_to_triplet(&t, c.cell).ok()?;
            if tr.i < 1 || tr.i > n || !tr.base.is_symmetric() || !seen.insert(tr) {
                return None;
            }
        }
    }
    Some(seen)
}

#[cfg(test)]
mod tests {

    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_sizes() {
        assert_eq!(generate_symmetric(1).unwrap(), vec![Tableau::single()]);
        let three = generate_symmetric(3).unwrap();
        let mut ocs: Vec<usize> = three.iter().map(Tableau::occupied_corner_count).collect();
        ocs.sort_unstable();
        assert_eq!(ocs, vec![0, 2]);
        assert_eq!(generate_symmetric(4).unwrap_err(), SymmetricError::EvenSize(4));
    }

    #[test]
    fn counts_up_to_nine() {
        for n in 0..=4 {
            assert_eq!(BigUint::from(generate_symmetric(2 * n + 1).unwrap().len()), signed_factorial(n));
        }
    }

    #[test]
    fn paired_generator_agrees_with_filter() {
        for size in [1, 3, 5, 7, 9] {
            assert_eq!(generate_symmetric_paired(size).unwrap(), generate_symmetric(size).unwrap(), "size {size}");
        }
    }

    #[test]
    fn size_eleven() {
        let all = generate_symmetric_paired(11).unwrap();
        assert_eq!(all.len(), 3840);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(Tableau::is_symmetric));
        assert_eq!(oc_total_symmetric(11).unwrap(), big(3840));
    }

    #[test]
    fn paired_insert_from_root() {
        let t = paired_insert(&Tableau::single(), 1).unwrap();
        assert!(t.is_symmetric());
        assert_eq!(t.occupied_corner_count(), 2);
        assert_eq!(t.rows(), &[2, 1]);
        assert_eq!(
            paired_insert(&Tableau::single(), 2).unwrap_err(),
            SymmetricError::IndexOutOfRange { index: 2, max: 1 }
        );
        let row = Tableau::validate(vec![2], vec![Cell::new(0, 0), Cell::new(0, 1)]).unwrap();
        assert_eq!(paired_insert(&row, 1).unwrap_err(), SymmetricError::NotSymmetric);
    }

    #[test]
    fn triplets_biject_with_occupied_corners() {
        for n in 1..=4 {
            let image = triplet_image(n).expect("injective");
            assert_eq!(BigUint::from(image.len()), signed_factorial(n));
            let bases = symmetric_of_half(n - 1).len();
            assert_eq!(image.len(), bases * n * 2);
            for tr in image.iter().take(50) {
                let (t, c) = triplet_to_corner(tr).unwrap();
                assert_eq!(&corner_to_triplet(&t, c).unwrap(), tr);
            }
        }
    }

    #[test]
    fn root_is_only_diagonal_point() {
        for size in [1, 3, 5, 7, 9] {
            for t in generate_symmetric(size).unwrap() {
                assert_eq!(diagonal_points(&t), vec![Cell::ROOT]);
            }
        }
    }

    #[test]
    fn printed_q() {
        assert_eq!(q_recurrence(1).unwrap(), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(q_recurrence(2).unwrap(), IntPolynomial::from_i64(&[4, 0, 4]));
        assert_eq!(q_recurrence(3).unwrap(), IntPolynomial::from_i64(&[26, 0, 20, 0, 2]));
        assert_eq!(
            q_recurrence(9).unwrap(),
            IntPolynomial::from_i64(&[109405056, 0, 61380480, 0, 13566720, 0, 1386240, 0, 55680, 0, 384])
        );
    }

    #[test]
    fn q_enum_matches_recurrence() {
        // the lone root is an occupied corner, while the recurrence starts from Q_0 = 1
        assert_eq!(q_enum(0), IntPolynomial::monomial(1));
        for n in 1..=5 {
            assert_eq!(q_enum(n), q_recurrence(n).unwrap(), "n = {n}");
        }
        for n in 2..=5 {
            assert!(b_recurrence_holds(n, &q_enum(n - 1), &q_enum(n)), "n = {n}");
        }
        assert!(!b_recurrence_holds(2, &q_enum(1), &IntPolynomial::from_i64(&[4, 0, 5])));
    }

    #[test]
    fn q_at_one() {
        let one = BigInt::one();
        for n in 0..=15 {
            let q = q_recurrence(n).unwrap();
            assert!(q.is_even());
            assert_eq!(q.eval(&one), BigInt::from(signed_factorial(n)));
        }
    }

    #[test]
    fn symmetric_variance_from_derivatives() {
        // oc is even on symmetric tableaux, so the spread is twice the ordinary one
        assert_eq!(variance_oc_symmetric(1).unwrap(), BigRational::one());
        for n in 2..=10 {
            let expect = BigRational::new(BigInt::from(2 * (n - 1)), BigInt::from(n));
            assert_eq!(variance_oc_symmetric(n).unwrap(), expect, "n = {n}");
        }
    }

    #[test]
    fn symmetric_corner_report() {
        let r = corners_total_symmetric(3).unwrap();
        assert_eq!(r.enumerated, big(3));
        assert_eq!(r.conjectured, BigRational::new(17.into(), 6.into()));
        assert!(!r.integral);
        assert_eq!(conjectured_corners_symmetric(3), BigRational::from_integer(50.into()));
        let totals = [14u64, 100, 928, 10560];
        for (n, total) in (2..=5).zip(totals) {
            let printed = corners_total_symmetric(2 * n + 1).unwrap();
            assert_eq!(printed.enumerated, big(total));
            assert_eq!(printed.matches, n == 2);
            assert!(corners_total_symmetric_factorial(2 * n + 1).unwrap().matches, "n = {n}");
        }
        assert!(!corners_total_symmetric_factorial(3).unwrap().matches);
    }
}
