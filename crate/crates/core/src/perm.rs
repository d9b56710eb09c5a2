//! The bijection between tableaux and permutations through non-inversion tables,
//! and the characterisation of which inserted points end up in corners.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::insertion::{InsertionCode, PointTrace};
use crate::tableau::Tableau;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("k = {k} outside 2..={n}")]
    Domain { n: usize, k: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// One-line notation `sigma(1) ... sigma(n)`, values 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self, PermError> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { word: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `sigma(i)` for `i` in `1..=n`.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `t_j = #{ i < j : sigma(i) < sigma(j) }`.
    pub fn non_inversion_table(&self) -> NonInversionTable {
        let entries = (0..self.word.len())
            .map(|j| self.word[..j].iter().filter(|&&x| x < self.word[j]).count())
            .collect();
        NonInversionTable { entries }
    }

    /// Every permutation of `1..=n`, lexicographically.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut cur = Some((1..=n).collect::<Vec<usize>>());
        std::iter::from_fn(move || {
            let out = cur.take()?;
            let mut next = out.clone();
            if next_lexicographic(&mut next) {
                cur = Some(next);
            }
            Some(Permutation { word: out })
        })
    }
}

fn next_lexicographic(w: &mut [usize]) -> bool {
    let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
        return false;
    };
    let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).expect("pivot has a successor");
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.word.len() >= 10 { " " } else { "" };
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `6275314`, `6 2 7 5 3 1 4` or `6,2,7,5,3,1,4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let word: Option<Vec<usize>> = if s.contains([',', ' ']) {
            s.split([',', ' ']).filter(|p| !p.is_empty()).map(|p| p.parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        Permutation::new(word.ok_or_else(|| PermError::Parse(s.to_string()))?)
    }
}

/// `(t_1, ..., t_n)` with `0 <= t_i <= i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonInversionTable {
    entries: Vec<usize>,
}

impl NonInversionTable {
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// The insertion code with `m_i = t_i + 1`.
    pub fn to_code(&self) -> InsertionCode {
        InsertionCode::new(self.entries.iter().skip(1).map(|t| t + 1).collect())
            .expect("non-inversion table entries are bounded by their position")
    }
}

/// Removal construction: from `1 2 ... n`, remove the `m_n`-th remaining
/// letter, then the `m_{n-1}`-th, and so on; the first letter removed is
/// `sigma(n)`.
pub fn phi(code: &InsertionCode) -> Permutation {
    let n = code.size();
    let mut remaining: Vec<usize> = (1..=n).collect();
    let mut word = vec![0; n];
    for k in (1..=n).rev() {
        word[k - 1] = remaining.remove(code.m(k) - 1);
    }
    Permutation { word }
}

/// `m_i = 1 + #{ j < i : sigma(j) < sigma(i) }`, dropping the leading `m_1 = 1`.
pub fn phi_inverse(sigma: &Permutation) -> InsertionCode {
    sigma.non_inversion_table().to_code()
}

/// The `k` in `2..=n` with `sigma(k-1) = sigma(k) + 1` or `sigma(k-1) < sigma(k)`,
/// and `sigma(j) > sigma(k) + 1` for every `j > k`.
pub fn corner_indices_perm(sigma: &Permutation) -> BTreeSet<usize> {
    let n = sigma.len();
    (2..=n)
        .filter(|&k| {
            let (prev, cur) = (sigma.at(k - 1), sigma.at(k));
            let first = prev == cur + 1 || prev < cur;
            let second = (k + 1..=n).all(|j| sigma.at(j) > cur + 1);
            first && second
        })
        .collect()
}

/// The `k >= 2` whose point `p_k` sits in a corner of `t`.
pub fn corner_indices_geom(t: &Tableau, trace: &PointTrace) -> BTreeSet<usize> {
    t.corners()
        .iter()
        .filter(|c| c.occupied)
        .filter_map(|c| trace.label(c.cell))
        .filter(|&k| k >= 2)
        .collect()
}

/// The same set read off the code: `m_k >= m_{k-1}` and `m_j > m_k + 1` for all `j > k`.
pub fn corner_indices_code(code: &InsertionCode) -> BTreeSet<usize> {
    let n = code.size();
    (2..=n)
        .filter(|&k| code.m(k) >= code.m(k - 1) && (k + 1..=n).all(|j| code.m(j) > code.m(k) + 1))
        .collect()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of tableaux of size `n` whose point `p_k` lies in a corner:
/// `n! / ((n-k+2)(n-k+1))`, plus `(n-1)!` when `k = n`.
pub fn count_pk_in_corner(n: usize, k: usize) -> Result<BigUint, PermError> {
    if k < 2 || k > n {
        return Err(PermError::Domain { n, k });
    }
    let denom = BigUint::from((n - k + 2) * (n - k + 1));
    let (q, r) = factorial(n).div_rem(&denom);
    debug_assert!(r.is_zero());
    let extra = if k == n { factorial(n - 1) } else { BigUint::zero() };
    Ok(q + extra)
}
