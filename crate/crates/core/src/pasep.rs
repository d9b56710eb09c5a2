//! The PASEP with no particles entering on the right or leaving on the left,
//! its link with tableaux through border words, and exact and sampled
//! stationary distributions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::insertion::{par_fold_all, Generated};
use crate::stats::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PasepError {
    #[error("rate {name} = {value} is outside [0, 1]")]
    InvalidParams { name: &'static str, value: String },
    #[error("the chain has no unique stationary distribution")]
    NotIrreducible,
    #[error("the chain needs at least one site")]
    NoSites,
    #[error("cannot parse {0}")]
    Parse(String),
}

/// Occupancy of `n` sites, left to right; `true` is a particle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PasepState {
    sites: Vec<bool>,
}

impl PasepState {
    pub fn new(sites: Vec<bool>) -> Self {
        PasepState { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[bool] {
        &self.sites
    }

    /// The `2^n` states in binary order, site 1 most significant.
    pub fn all(n: usize) -> impl Iterator<Item = PasepState> {
        (0..1usize << n).map(move |idx| Self::from_index(n, idx))
    }

    pub fn from_index(n: usize, idx: usize) -> Self {
        PasepState { sites: (0..n).map(|k| idx >> (n - 1 - k) & 1 == 1).collect() }
    }

    /// Position in [`PasepState::all`].
    pub fn index(&self) -> usize {
        self.sites.iter().fold(0, |acc, &b| acc << 1 | usize::from(b))
    }

    /// `1` for a particle, `0` for an empty site.
    pub fn to_bits(&self) -> String {
        self.sites.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Corners of the path `E w N`, where particles read as `E` and holes as `N`.
    pub fn corners(&self) -> usize {
        let mut word = Vec::with_capacity(self.len() + 2);
        word.push(true);
        word.extend(&self.sites);
        word.push(false);
        word.windows(2).filter(|w| w[0] && !w[1]).count()
    }
}

impl fmt::Display for PasepState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.sites {
            f.write_str(if b { "•" } else { "∘" })?;
        }
        Ok(())
    }
}

impl FromStr for PasepState {
    type Err = PasepError;

    /// Accepts `1001` or `•∘∘•`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sites: Option<Vec<bool>> = s
            .trim()
            .chars()
            .map(|c| match c {
                '1' | '•' => Some(true),
                '0' | '∘' => Some(false),
                _ => None,
            })
            .collect();
        sites.map(PasepState::new).ok_or_else(|| PasepError::Parse(s.to_string()))
    }
}

/// Number of places in `s` where a particle can hop: `2 c(s) - 1`.
pub fn x_of_state(s: &PasepState) -> usize {
    2 * s.corners() - 1
}

/// Entry rate on the left, exit rate on the right and left-hop rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PasepParams {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub q: BigRational,
}

impl PasepParams {
    pub fn new(alpha: BigRational, beta: BigRational, q: BigRational) -> Result<Self, PasepError> {
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("q", &q)] {
            if v.is_negative() || v > &BigRational::one() {
                return Err(PasepError::InvalidParams { name, value: v.to_string() });
            }
        }
        Ok(PasepParams { alpha, beta, q })
    }

    pub fn uniform() -> Self {
        PasepParams { alpha: BigRational::one(), beta: BigRational::one(), q: BigRational::one() }
    }
}

/// Parses `3`, `1/2` or `0.25` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, PasepError> {
    let err = || PasepError::Parse(s.to_string());
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| err())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    s.parse::<BigRational>().map_err(|_| err())
}

/// Probabilities over the states of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDistribution {
    n: usize,
    probs: Vec<BigRational>,
}

impl StateDistribution {
    /// `probs[k]` belongs to `PasepState::from_index(n, k)`.
    pub fn new(n: usize, probs: Vec<BigRational>) -> Self {
        assert_eq!(probs.len(), 1 << n, "one probability per state");
        StateDistribution { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: &PasepState) -> &BigRational {
        &self.probs[s.index()]
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (PasepState, &BigRational)> + '_ {
        self.probs.iter().enumerate().map(|(k, p)| (PasepState::from_index(self.n, k), p))
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().sum()
    }

    /// `sum_s P(s) X(s)`.
    pub fn expected_x(&self) -> BigRational {
        self.iter().map(|(s, p)| p * BigRational::from_integer(x_of_state(&s).into())).sum()
    }

    /// Half the L1 distance.
    pub fn total_variation(&self, other: &StateDistribution) -> BigRational {
        assert_eq!(self.n, other.n, "distributions over different lengths");
        let sum: BigRational = self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum();
        sum / BigRational::from_integer(2.into())
    }

    /// `{"1001": "p/q", ...}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution serialization cannot fail")
    }
}

impl Serialize for StateDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.probs.len()))?;
        for (s, p) in self.iter() {
            map.serialize_entry(&s.to_bits(), &p.to_string())?;
        }
        map.end()
    }
}

/// `P(s) = |{T of size n+1 projecting to s}| / (n+1)!`.
pub fn tableau_distribution(n: usize) -> StateDistribution {
    let counts = par_fold_all(
        n + 1,
        || vec![0u64; 1 << n],
        |mut acc, g: Generated| {
            acc[g.tableau.project_state().index()] += 1;
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let z = BigInt::from(factorial(n + 1));
    StateDistribution::new(n, counts.into_iter().map(|c| BigRational::new(c.into(), z.clone())).collect())
}

/// `(1/(n+1)!) sum (2 c(T) - 1)` over tableaux of size `n + 1`.
pub fn expected_x(n: usize) -> BigRational {
    let corners = par_fold_all(n + 1, || 0u64, |acc, g: Generated| acc + g.tableau.corner_count() as u64, |a, b| a + b);
    let z = factorial(n + 1);
    let sum = BigInt::from(2 * corners) - BigInt::from(z.clone());
    BigRational::new(sum, z.into())
}

/// What a chosen location does to a state.
enum Move {
    Enter,
    Exit,
    Right(usize),
    Left(usize),
    Stay,
}

/// Location 0 is the left boundary, `n` the right boundary and `k` in between
/// the gap after site `k`.
fn possible_move(s: &[bool], loc: usize) -> Move {
    let n = s.len();
    if loc == 0 {
        if s[0] { Move::Stay } else { Move::Enter }
    } else if loc == n {
        if s[n - 1] { Move::Exit } else { Move::Stay }
    } else {
        match (s[loc - 1], s[loc]) {
            (true, false) => Move::Right(loc),
            (false, true) => Move::Left(loc),
            _ => Move::Stay,
        }
    }
}

fn apply(s: &mut [bool], m: &Move) {
    match *m {
        Move::Enter => s[0] = true,
        Move::Exit => *s.last_mut().expect("nonempty") = false,
        Move::Right(k) | Move::Left(k) => s.swap(k - 1, k),
        Move::Stay => {}
    }
}

/// Row-stochastic matrix over [`PasepState::all`]: a location is chosen with
/// probability `1/(n+1)`, then a particle enters with probability alpha, leaves
/// with probability beta, hops right always or hops left with probability q.
pub fn transition_matrix(n: usize, params: &PasepParams) -> Result<Vec<Vec<BigRational>>, PasepError> {
    if n == 0 {
        return Err(PasepError::NoSites);
    }
    let params = PasepParams::new(params.alpha.clone(), params.beta.clone(), params.q.clone())?;
    let size = 1 << n;
    let pick = BigRational::new(BigInt::one(), BigInt::from(n + 1));
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for (from, row) in m.iter_mut().enumerate() {
        let s = PasepState::from_index(n, from);
        let mut stay = BigRational::one();
        for loc in 0..=n {
            let mv = possible_move(s.sites(), loc);
            let rate = match mv {
                Move::Enter => params.alpha.clone(),
                Move::Exit => params.beta.clone(),
                Move::Right(_) => BigRational::one(),
                Move::Left(_) => params.q.clone(),
                Move::Stay => continue,
            };
            let mut t = s.sites().to_vec();
            apply(&mut t, &mv);
            let p = &pick * rate;
            stay -= &p;
            row[PasepState::new(t).index()] += p;
        }
        row[from] += stay;
    }
    Ok(m)
}

/// The probability vector `pi` with `pi M = pi`, by exact elimination.
pub fn stationary(m: &[Vec<BigRational>]) -> Result<Vec<BigRational>, PasepError> {
    let size = m.len();
    // rows of (M^T - I), with the last equation replaced by sum(pi) = 1
    let mut a: Vec<Vec<BigRational>> = (0..size)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..size).map(|j| m[j][i].clone()).collect();
            row[i] -= BigRational::one();
            row.push(BigRational::zero());
            row
        })
        .collect();
    if let Some(last) = a.last_mut() {
        last.iter_mut().for_each(|x| *x = BigRational::one());
    }
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero()).ok_or(PasepError::NotIrreducible)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in &mut a[col][col..] {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[size].clone()).collect())
}

/// Exact stationary distribution of the chain on `n` sites.
pub fn stationary_distribution(n: usize, params: &PasepParams) -> Result<StateDistribution, PasepError> {
    let m = transition_matrix(n, params)?;
    Ok(StateDistribution::new(n, stationary(&m)?))
}

/// Runs the chain from the empty state with a seeded generator, discards the
/// first `steps / 10` steps and returns the visit frequencies of the next `steps`.
pub fn mc_sample(n: usize, params: &PasepParams, steps: u64, seed: u64) -> Result<StateDistribution, PasepError> {
    if n == 0 {
        return Err(PasepError::NoSites);
    }
    let params = PasepParams::new(params.alpha.clone(), params.beta.clone(), params.q.clone())?;
    let to_f = |r: &BigRational| r.to_f64().expect("rate in [0, 1]");
    let (alpha, beta, q) = (to_f(&params.alpha), to_f(&params.beta), to_f(&params.q));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![false; n];
    let mut counts = vec![0u64; 1 << n];
    let burn_in = steps / 10;
    for step in 0..burn_in + steps {
        let mv = possible_move(&s, rng.gen_range(0..=n));
        let rate = match mv {
            Move::Enter => alpha,
            Move::Exit => beta,
            Move::Right(_) => 1.0,
            Move::Left(_) => q,
            Move::Stay => 0.0,
        };
        if rate > 0.0 && rng.gen::<f64>() < rate {
            apply(&mut s, &mv);
        }
        if step >= burn_in {
            counts[s.iter().fold(0, |acc, &b| acc << 1 | usize::from(b))] += 1;
        }
    }
    let total = BigInt::from(steps.max(1));
    Ok(StateDistribution::new(n, counts.into_iter().map(|c| BigRational::new(c.into(), total.clone())).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn st(s: &str) -> PasepState {
        s.parse().unwrap()
    }

    #[test]
    fn state_text() {
        assert_eq!(st("1001").to_string(), "•∘∘•");
        assert_eq!(st("•∘∘•").to_bits(), "1001");
        assert_eq!(st("1001").index(), 9);
        assert_eq!(PasepState::from_index(4, 9), st("1001"));
        assert!("10x".parse::<PasepState>().is_err());
    }

    #[test]
    fn x_values() {
        assert_eq!(st("10").corners(), 1);
        assert_eq!(x_of_state(&st("10")), 1);
        assert_eq!(x_of_state(&st("0")), 1);
        assert_eq!(x_of_state(&st("1111")), 1);
        assert_eq!(x_of_state(&st("0101")), 5);
        for n in 1..=8 {
            for s in PasepState::all(n) {
                let pairs = s.sites().windows(2).filter(|w| w[0] && !w[1]).count();
                let c = pairs + usize::from(!s.sites()[0]) + usize::from(s.sites()[n - 1]);
                assert_eq!(s.corners(), c);
            }
        }
    }

    #[test]
    fn corners_depend_only_on_state() {
        for size in 1..=7 {
            for g in crate::insertion::generate_all(size) {
                assert_eq!(g.tableau.corner_count(), g.tableau.project_state().corners());
            }
        }
    }

    #[test]
    fn small_distributions() {
        let d0 = tableau_distribution(0);
        assert_eq!(d0.probs(), &[BigRational::one()]);
        let d1 = tableau_distribution(1);
        assert_eq!(d1.probs(), &[r(1, 2), r(1, 2)]);
        for n in 1..=6 {
            assert_eq!(tableau_distribution(n).total(), BigRational::one());
        }
        assert_eq!(d1.to_json(), r#"{"0":"1/2","1":"1/2"}"#);
    }

    #[test]
    fn two_state_chain() {
        let m = transition_matrix(1, &PasepParams::uniform()).unwrap();
        assert_eq!(m, vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]);
        assert_eq!(stationary(&m).unwrap(), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn rows_are_stochastic() {
        let p = PasepParams::new(r(1, 3), r(2, 5), r(1, 7)).unwrap();
        for n in 1..=4 {
            for row in transition_matrix(n, &p).unwrap() {
                assert_eq!(row.iter().sum::<BigRational>(), BigRational::one());
                assert!(row.iter().all(|x| !x.is_negative()));
            }
        }
    }

    #[test]
    fn identity_is_not_irreducible() {
        let id: Vec<Vec<BigRational>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
        assert_eq!(stationary(&id).unwrap_err(), PasepError::NotIrreducible);
    }

    #[test]
    fn invalid_rates() {
        assert!(matches!(PasepParams::new(r(3, 2), r(1, 1), r(1, 1)), Err(PasepError::InvalidParams { name: "alpha", .. })));
        assert!(PasepParams::new(r(1, 1), r(-1, 2), r(1, 1)).is_err());
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("2/6").unwrap(), r(1, 3));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn chain_matches_tableaux() {
        for n in 1..=5 {
            let exact = stationary_distribution(n, &PasepParams::uniform()).unwrap();
            assert_eq!(exact, tableau_distribution(n), "n = {n}");
        }
    }

    #[test]
    fn expected_x_two_routes() {
        assert_eq!(expected_x(1), BigRational::one());
        assert_eq!(expected_x(2), r(4, 3));
        for n in 1..=6 {
            assert_eq!(expected_x(n), tableau_distribution(n).expected_x());
            assert_eq!(expected_x(n), r(n as i64 + 2, 3));
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let p = PasepParams::uniform();
        let a = mc_sample(3, &p, 20_000, 7).unwrap();
        assert_eq!(a, mc_sample(3, &p, 20_000, 7).unwrap());
        assert_ne!(a, mc_sample(3, &p, 20_000, 8).unwrap());
        let one = mc_sample(1, &p, 1_000_000, 1).unwrap();
        for x in one.probs() {
            assert!((x.to_f64().unwrap() - 0.5).abs() < 0.01);
        }
    }
}
