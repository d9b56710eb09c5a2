//! Classes of tableaux sharing the same point set, and the lattice-path view of
//! them: members of a class correspond to the paths weakly below the border of
//! the one member whose corners are all occupied.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::insertion::{par_fold_all, Generated};
use crate::tableau::{Cell, Edge, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("class has no member with every corner occupied")]
    NoCanonical,
    #[error("class has {0} members with every corner occupied")]
    MultipleCanonical(usize),
    #[error("path is not weakly below the reference path")]
    NotBelow,
    #[error("{0} is not a corner of both paths")]
    NotCommonCorner(PathCorner),
    #[error("cannot parse lattice path: {0}")]
    Parse(String),
}

/// The point set shared by every member of a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub point_set: Vec<Cell>,
}

impl ClassKey {
    pub fn of(t: &Tableau) -> Self {
        ClassKey { point_set: t.points().to_vec() }
    }
}

/// Groups every tableau of size `n` by point set. Members are sorted.
pub fn partition_classes(n: usize) -> BTreeMap<ClassKey, Vec<Tableau>> {
    let mut classes = par_fold_all(
        n,
        BTreeMap::new,
        |mut acc: BTreeMap<ClassKey, Vec<Tableau>>, g: Generated| {
            acc.entry(ClassKey::of(&g.tableau)).or_default().push(g.tableau);
            acc
        },
        |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_default().extend(v);
            }
            a
        },
    );
    for members in classes.values_mut() {
        members.sort();
    }
    classes
}

fn all_corners_occupied(t: &Tableau) -> bool {
    t.corners().iter().all(|c| c.occupied)
}

/// The unique member whose corners are all occupied.
pub fn canonical_representative(class: &[Tableau]) -> Result<&Tableau, ClassError> {
    let mut found = class.iter().filter(|t| all_corners_occupied(t));
    let first = found.next().ok_or(ClassError::NoCanonical)?;
    match found.count() {
        0 => Ok(first),
        more => Err(ClassError::MultipleCanonical(more + 1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    East,
    North,
}

impl Step {
    fn letter(self) -> char {
        match self {
            Step::East => 'E',
            Step::North => 'N',
        }
    }
}

/// A corner of a path: the vertex where an East step is followed by a North step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathCorner {
    pub x: usize,
    pub y: usize,
}

impl fmt::Display for PathCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A path from the origin with East and North unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        LatticePath { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn east_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::East).count()
    }

    pub fn north_count(&self) -> usize {
        self.len() - self.east_count()
    }

    /// Corners from Southwest to Northeast.
    pub fn corners(&self) -> Vec<PathCorner> {
        let (mut x, mut y) = (0, 0);
        let mut out = Vec::new();
        for (k, &s) in self.steps.iter().enumerate() {
            match s {
                Step::East => {
                    x += 1;
                    if self.steps.get(k + 1) == Some(&Step::North) {
                        out.push(PathCorner { x, y });
                    }
                }
                Step::North => y += 1,
            }
        }
        out
    }

    /// Starts with `EN` and ends with `EN`.
    pub fn is_corner_bounded(&self) -> bool {
        self.steps.starts_with(&[Step::East, Step::North]) && self.steps.ends_with(&[Step::East, Step::North])
    }

    /// Same endpoints and, after every prefix, no more North steps than `other`.
    pub fn is_weakly_below(&self, other: &LatticePath) -> bool {
        if self.len() != other.len() || self.east_count() != other.east_count() {
            return false;
        }
        let mut diff: isize = 0;
        for (a, b) in self.steps.iter().zip(&other.steps) {
            diff += isize::from(*b == Step::North) - isize::from(*a == Step::North);
            if diff < 0 {
                return false;
            }
        }
        true
    }

    /// The East/North reading of a border word, horizontal edges as East.
    pub fn from_edges(edges: &[Edge]) -> Self {
        let steps = edges
            .iter()
            .map(|e| match e {
                Edge::Horizontal => Step::East,
                Edge::Vertical => Step::North,
            })
            .collect();
        LatticePath { steps }
    }

    /// Indices of the East steps, with the vertex each one starts from.
    fn east_steps(&self) -> Vec<(usize, (usize, usize))> {
        let (mut x, mut y) = (0, 0);
        let mut out = Vec::new();
        for (k, &s) in self.steps.iter().enumerate() {
            match s {
                Step::East => {
                    out.push((k, (x, y)));
                    x += 1;
                }
                Step::North => y += 1,
            }
        }
        out
    }

    /// Index of the East step that ends at `c` when it is followed by North.
    fn corner_index(&self, c: PathCorner) -> Option<usize> {
        self.east_steps()
            .into_iter()
            .find(|&(k, (x, y))| x + 1 == c.x && y == c.y && self.steps.get(k + 1) == Some(&Step::North))
            .map(|(k, _)| k)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.steps.iter().try_for_each(|s| write!(f, "{}", s.letter()))
    }
}

impl FromStr for LatticePath {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps: Option<Vec<Step>> = s
            .trim()
            .chars()
            .map(|c| match c {
                'E' | 'e' => Some(Step::East),
                'N' | 'n' => Some(Step::North),
                _ => None,
            })
            .collect();
        steps.map(LatticePath::new).ok_or_else(|| ClassError::Parse(s.to_string()))
    }
}

/// Every path with the endpoints of `p` that stays weakly below it, in
/// lexicographic order with East before North.
pub fn paths_below(p: &LatticePath) -> Vec<LatticePath> {
    fn walk(p: &[Step], cur: &mut Vec<Step>, east_left: usize, slack: usize, out: &mut Vec<LatticePath>) {
        let k = cur.len();
        if k == p.len() {
            out.push(LatticePath::new(cur.clone()));
            return;
        }
        let north_left = p.len() - k - east_left;
        let p_north = usize::from(p[k] == Step::North);
        if east_left > 0 {
            // slack = North(p prefix) - North(cur prefix)
            cur.push(Step::East);
            walk(p, cur, east_left - 1, slack + p_north, out);
            cur.pop();
        }
        if north_left > 0 && slack + p_north >= 1 {
            cur.push(Step::North);
            walk(p, cur, east_left, slack + p_north - 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(&p.steps, &mut Vec::with_capacity(p.len()), p.east_count(), 0, &mut out);
    out
}

/// Number of corners `q` shares with `p`.
pub fn cc(p: &LatticePath, q: &LatticePath) -> Result<usize, ClassError> {
    if !q.is_weakly_below(p) {
        return Err(ClassError::NotBelow);
    }
    let pc = p.corners();
    Ok(q.corners().iter().filter(|c| pc.contains(c)).count())
}

/// For a corner `c` shared by `p` and `q`, the path obtained from `q` by moving
/// the part after `c` one step South; `q` itself when `c` is the last corner of `p`.
pub fn shift_map(p: &LatticePath, q: &LatticePath, c: PathCorner) -> Result<LatticePath, ClassError> {
    if !q.is_weakly_below(p) {
        return Err(ClassError::NotBelow);
    }
    let (Some(_), Some(k)) = (p.corner_index(c), q.corner_index(c)) else {
        return Err(ClassError::NotCommonCorner(c));
    };
    if p.corners().last() == Some(&c) {
        return Ok(q.clone());
    }
    let mut steps = q.steps.clone();
    steps.remove(k + 1);
    steps.push(Step::North);
    Ok(LatticePath::new(steps))
}

/// Inverse of [`shift_map`] for a fixed `p`: recovers the path and common corner.
pub fn shift_inverse(p: &LatticePath, q: &LatticePath) -> Result<(LatticePath, PathCorner), ClassError> {
    if !q.is_weakly_below(p) {
        return Err(ClassError::NotBelow);
    }
    let p_east = p.east_steps();
    let q_east = q.east_steps();
    // both paths have the same number of East steps; the j-th ones coincide when they start at the same vertex
    let j = (0..q_east.len()).rev().find(|&j| q_east[j].1 == p_east[j].1).ok_or(ClassError::NotBelow)?;
    if j + 1 == p_east.len() {
        let last = *q.corners().last().ok_or(ClassError::NotBelow)?;
        return Ok((q.clone(), last));
    }
    let (k, (x, y)) = q_east[j];
    let mut steps = q.steps.clone();
    if steps.pop() != Some(Step::North) {
        return Err(ClassError::NotBelow);
    }
    steps.insert(k + 1, Step::North);
    Ok((LatticePath::new(steps), PathCorner { x: x + 1, y }))
}

/// Position of the first letter of the border subword running from the
/// Southwest-most corner to the Northeast-most corner, and its length.
fn corner_span(edges: &[Edge]) -> (usize, usize) {
    let is_corner = |k: &usize| edges[*k] == Edge::Horizontal && edges[*k + 1] == Edge::Vertical;
    let first = (0..edges.len() - 1).find(is_corner).expect("every tableau has a corner");
    let last = (0..edges.len() - 1).rev().find(is_corner).expect("every tableau has a corner");
    (first, last + 2 - first)
}

/// The border of the canonical representative between its extreme corners.
pub fn class_path(canonical: &Tableau) -> LatticePath {
    let edges = canonical.border_word().letters();
    let (start, len) = corner_span(&edges);
    LatticePath::from_edges(&edges[start..start + len])
}

/// The part of a member's border that sits over the canonical path.
pub fn member_path(member: &Tableau, canonical: &Tableau) -> LatticePath {
    let (start, len) = corner_span(&canonical.border_word().letters());
    let edges = member.border_word().letters();
    LatticePath::from_edges(&edges[start..start + len])
}

/// Every path with at most `max_len` steps that starts and ends with a corner.
pub fn corner_bounded_paths(max_len: usize) -> impl Iterator<Item = LatticePath> {
    (2..=max_len).flat_map(|len| {
        (0u32..1 << len).filter_map(move |bits| {
            let steps: Vec<Step> =
                (0..len).map(|k| if bits >> (len - 1 - k) & 1 == 0 { Step::East } else { Step::North }).collect();
            let p = LatticePath::new(steps);
            p.is_corner_bounded().then_some(p)
        })
    })
}
