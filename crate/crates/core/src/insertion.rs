//! The insertion algorithm, insertion codes and exhaustive generation.
//!
//! Every tableau of size `n` is obtained from the size-1 tableau by a unique
//! sequence of `n - 1` insertions. The edge indices chosen along the way form
//! its [`InsertionCode`] `(m_2, ..., m_n)` with `1 <= m_k <= k`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tableau::{rows_from_letters, Cell, Edge, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsertionError {
    #[error("edge index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("code entry m_{k} = {value} out of range 1..={k}")]
    CodeOutOfRange { k: usize, value: usize },
    #[error("a full code must start with m_1 = 1")]
    MissingLeadingOne,
    #[error("tableau is not reachable by insertions")]
    NotReachable,
}

/// The sequence `(m_2, ..., m_n)`; `m_1 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InsertionCode {
    code: Vec<usize>,
}

impl InsertionCode {
    pub fn new(entries: Vec<usize>) -> Result<Self, InsertionError> {
        for (j, &m) in entries.iter().enumerate() {
            let k = j + 2;
            if m < 1 || m > k {
                return Err(InsertionError::CodeOutOfRange { k, value: m });
            }
        }
        Ok(InsertionCode { code: entries })
    }

    /// Accepts `(m_1, m_2, ..., m_n)` with the conventional leading `m_1 = 1`.
    pub fn from_full(full: &[usize]) -> Result<Self, InsertionError> {
        match full.split_first() {
            Some((1, rest)) => Self::new(rest.to_vec()),
            Some((&value, _)) => Err(InsertionError::CodeOutOfRange { k: 1, value }),
            None => Err(InsertionError::MissingLeadingOne),
        }
    }

    pub fn empty() -> Self {
        InsertionCode { code: Vec::new() }
    }

    /// `(m_2, ..., m_n)`.
    pub fn entries(&self) -> &[usize] {
        &self.code
    }

    /// `(m_1, ..., m_n)` including the leading 1.
    pub fn full(&self) -> Vec<usize> {
        std::iter::once(1).chain(self.code.iter().copied()).collect()
    }

    /// `m_k` for `k` in `1..=n`.
    pub fn m(&self, k: usize) -> usize {
        if k == 1 {
            1
        } else {
            self.code[k - 2]
        }
    }

    /// Size of the tableau this code describes.
    pub fn size(&self) -> usize {
        self.code.len() + 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code serialization cannot fail")
    }
}

impl fmt::Display for InsertionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.code.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Cell of each point `p_k`, indexed by insertion order (`p_1` is the root).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointTrace {
    cells: Vec<Cell>,
}

impl PointTrace {
    pub fn root() -> Self {
        PointTrace { cells: vec![Cell::ROOT] }
    }

    /// Cell of `p_k`, `k` in `1..=n`.
    pub fn point(&self, k: usize) -> Cell {
        self.cells[k - 1]
    }

    /// Insertion index of the point at `cell`, if any.
    pub fn label(&self, cell: Cell) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell).map(|i| i + 1)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn shifted(&self, shift: LineShift, new_point: Cell) -> Self {
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| shift.apply(c)).collect();
        cells.push(new_point);
        PointTrace { cells }
    }
}

/// Coordinate change caused by inserting a row or column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineShift {
    /// A row was inserted at index `at`; rows from `at` on move down.
    Row { at: usize },
    /// A column was inserted at index `at` spanning rows `0..height`.
    Column { at: usize, height: usize },
}

impl LineShift {
    pub fn apply(self, c: Cell) -> Cell {
        match self {
            LineShift::Row { at } if c.row >= at => Cell::new(c.row + 1, c.col),
            LineShift::Column { at, height } if c.row < height && c.col >= at => Cell::new(c.row, c.col + 1),
            _ => c,
        }
    }
}

/// Everything an insertion did, for callers that need more than the result.
#[derive(Debug, Clone)]
pub struct Insertion {
    pub tableau: Tableau,
    pub new_point: Cell,
    pub shift: LineShift,
    /// Empty cells added along the border; empty when no ribbon was needed.
    pub ribbon: Vec<Cell>,
}

fn check_index(t: &Tableau, i: usize) -> Result<(), InsertionError> {
    let max = t.size() + 1;
    if i < 1 || i > max {
        return Err(InsertionError::IndexOutOfRange { index: i, max });
    }
    Ok(())
}

/// Inserts a row (below a horizontal edge) or a column (right of a vertical
/// edge) ending at border edge `i`, with a point in its last cell. No ribbon.
pub fn insert_line(t: &Tableau, i: usize) -> Result<Insertion, InsertionError> {
    check_index(t, i)?;
    let word = t.border_word();
    let anchor = word.cell(i);
    let mut rows = t.rows().to_vec();
    let (shift, new_point) = match word.edge(i) {
        Edge::Horizontal => {
            rows.insert(anchor.row + 1, anchor.col + 1);
            (LineShift::Row { at: anchor.row + 1 }, Cell::new(anchor.row + 1, anchor.col))
        }
        Edge::Vertical => {
            for len in &mut rows[..=anchor.row] {
                *len += 1;
            }
            (LineShift::Column { at: anchor.col + 1, height: anchor.row + 1 }, Cell::new(anchor.row, anchor.col + 1))
        }
    };
    let mut points: Vec<Cell> = t.points().iter().map(|&p| shift.apply(p)).collect();
    points.push(new_point);
    Ok(Insertion {
        tableau: Tableau::from_parts_unchecked(rows, points),
        new_point,
        shift,
        ribbon: Vec::new(),
    })
}

/// The insertion algorithm with full bookkeeping.
///
/// After the new line is in place, if `i < sp(t)` a ribbon of empty cells is
/// laid along the border from the cell right of the new point to the cell below
/// the old special point. On the border word this swaps the vertical edge right
/// of the new point with the horizontal edge under the old special point.
pub fn insert_point_detailed(t: &Tableau, i: usize) -> Result<Insertion, InsertionError> {
    let sp = t.sp();
    let mut ins = insert_line(t, i)?;
    if i < sp {
        let mut letters = ins.tableau.border_word().letters();
        // 0-based: edge i+1 is right of the new point, edge sp+1 is under the old special point
        debug_assert_eq!(letters[i], Edge::Vertical);
        debug_assert_eq!(letters[sp], Edge::Horizontal);
        letters.swap(i, sp);
        let rows = rows_from_letters(&letters);
        let before = ins.tableau.rows();
        ins.ribbon = rows
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (before[r]..len).map(move |c| Cell::new(r, c)))
            .collect();
        ins.tableau = Tableau::from_parts_unchecked(rows, ins.tableau.points().to_vec());
    }
    Ok(ins)
}

pub fn insert_point(t: &Tableau, i: usize) -> Result<Tableau, InsertionError> {
    insert_point_detailed(t, i).map(|ins| ins.tableau)
}

/// Left fold of [`insert_point`] over the code, starting from the size-1 tableau.
pub fn decode(code: &InsertionCode) -> (Tableau, PointTrace) {
    let mut t = Tableau::single();
    let mut trace = PointTrace::root();
    for &m in code.entries() {
        let ins = insert_point_detailed(&t, m).expect("code bounds guarantee a legal edge index");
        trace = trace.shifted(ins.shift, ins.new_point);
        t = ins.tableau;
    }
    (t, trace)
}

fn remove_row(rows: &[usize], points: &[Cell], r: usize) -> (Vec<usize>, Vec<Cell>) {
    let mut rows = rows.to_vec();
    rows.remove(r);
    let points = points
        .iter()
        .filter(|p| p.row != r)
        .map(|&p| if p.row > r { Cell::new(p.row - 1, p.col) } else { p })
        .collect();
    (rows, points)
}

fn remove_column(rows: &[usize], points: &[Cell], c: usize) -> (Vec<usize>, Vec<Cell>) {
    let rows = rows.iter().map(|&len| if len > c { len - 1 } else { len }).collect();
    let points = points
        .iter()
        .filter(|p| p.col != c)
        .map(|&p| if p.col > c { Cell::new(p.row, p.col - 1) } else { p })
        .collect();
    (rows, points)
}

/// Undoes the last insertion: returns the predecessor and the edge index used.
///
/// The last index is always `sp(t)`. Candidate predecessors are built by
/// removing a possible ribbon (any vertical edge Northeast of the new point may
/// have been the old special point's) and then the special point's line; the
/// one that reproduces `t` under re-insertion is kept.
pub fn undo_last(t: &Tableau) -> Result<(Tableau, usize), InsertionError> {
    if t.size() == 1 {
        return Err(InsertionError::NotReachable);
    }
    let (special, i) = t.special_point();
    let letters = t.border_word().letters();
    let mut candidates = Vec::new();
    if letters[i] == Edge::Vertical {
        candidates.push(letters.clone());
    } else {
        for j in i + 1..letters.len() {
            if letters[j] == Edge::Vertical {
                let mut l = letters.clone();
                l.swap(i, j);
                candidates.push(l);
            }
        }
    }
    let above = t.points().iter().any(|p| p.col == special.col && p.row < special.row);
    for cand in candidates {
        let rows = rows_from_letters(&cand);
        if !t.points().iter().all(|p| p.row < rows.len() && p.col < rows[p.row]) {
            continue;
        }
        let (rows, points) = if above {
            remove_row(&rows, t.points(), special.row)
        } else {
            remove_column(&rows, t.points(), special.col)
        };
        let Ok(prev) = Tableau::validate(rows, points) else {
            continue;
        };
        if insert_point(&prev, i).as_ref() == Ok(t) {
            return Ok((prev, i));
        }
    }
    Err(InsertionError::NotReachable)
}

/// The unique code whose decoding is `t`.
pub fn encode(t: &Tableau) -> Result<InsertionCode, InsertionError> {
    let mut entries = Vec::with_capacity(t.size().saturating_sub(1));
    let mut cur = t.clone();
    while cur.size() > 1 {
        let (prev, i) = undo_last(&cur)?;
        entries.push(i);
        cur = prev;
    }
    entries.reverse();
    InsertionCode::new(entries)
}

/// A tableau with the code and trace it was generated from.
#[derive(Debug, Clone)]
pub struct Generated {
    pub tableau: Tableau,
    pub code: InsertionCode,
    pub trace: PointTrace,
}

struct Frame {
    tableau: Tableau,
    trace: PointTrace,
    code: Vec<usize>,
    next: usize,
}

/// Depth-first stream of all tableaux of size `n` in lexicographic code order.
pub struct TableauGenerator {
    n: usize,
    stack: Vec<Frame>,
}

impl TableauGenerator {
    pub fn new(n: usize) -> Self {
        Self::from_prefix(&InsertionCode::empty(), n)
    }

    /// All tableaux of size `n` whose code starts with `prefix`.
    pub fn from_prefix(prefix: &InsertionCode, n: usize) -> Self {
        assert!(n >= 1, "tableaux have at least one point");
        let stack = if prefix.size() <= n {
            let (tableau, trace) = decode(prefix);
            vec![Frame { tableau, trace, code: prefix.entries().to_vec(), next: 1 }]
        } else {
            Vec::new()
        };
        TableauGenerator { n, stack }
    }
}

impl Iterator for TableauGenerator {
    type Item = Generated;

    fn next(&mut self) -> Option<Generated> {
        while let Some(top) = self.stack.last_mut() {
            let size = top.tableau.size();
            if size == self.n {
                let f = self.stack.pop().expect("non-empty stack");
                return Some(Generated { tableau: f.tableau, code: InsertionCode { code: f.code }, trace: f.trace });
            }
            if top.next > size + 1 {
                self.stack.pop();
                continue;
            }
            let i = top.next;
            top.next += 1;
            let ins = insert_point_detailed(&top.tableau, i).expect("index within 1..=size+1");
            let trace = top.trace.shifted(ins.shift, ins.new_point);
            let mut code = top.code.clone();
            code.push(i);
            self.stack.push(Frame { tableau: ins.tableau, trace, code, next: 1 });
        }
        None
    }
}

/// All tableaux of size `n`, in lexicographic code order.
pub fn generate_all(n: usize) -> TableauGenerator {
    TableauGenerator::new(n)
}

/// All codes of size `n` in lexicographic order.
pub fn all_codes(n: usize) -> impl Iterator<Item = InsertionCode> {
    let len = n.saturating_sub(1);
    let mut cur: Option<Vec<usize>> = Some(vec![1; len]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut j = len;
        loop {
            if j == 0 {
                cur = None;
                break;
            }
            j -= 1;
            if next[j] < j + 2 {
                next[j] += 1;
                cur = Some(next);
                break;
            }
            next[j] = 1;
        }
        Some(InsertionCode { code: out })
    })
}

/// Parallel fold over every tableau of size `n`.
///
/// The code tree is split into disjoint prefixes; partial results are merged in
/// prefix order, so the result is deterministic for associative `reduce`.
pub fn par_fold_all<A, ID, F, R>(n: usize, identity: ID, fold: F, reduce: R) -> A
where
    A: Send,
    ID: Fn() -> A + Sync + Send,
    F: Fn(A, Generated) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let depth = n.min(5);
    let prefixes: Vec<InsertionCode> = all_codes(depth).collect();
    prefixes
        .into_par_iter()
        .map(|p| TableauGenerator::from_prefix(&p, n).fold(identity(), &fold))
        .reduce(&identity, &reduce)
}


#[cfg(test)]
mod proptests {
    use proptest::prelude::*;
    use proptest::sample::Index;

    use super::*;
    use crate::perm::{corner_indices_code, corner_indices_geom, corner_indices_perm, phi, phi_inverse};

    fn code_strategy(max_len: usize) -> impl Strategy<Value = InsertionCode> {
        prop::collection::vec(any::<Index>(), 0..max_len)
            .prop_map(|idx| InsertionCode::new(idx.iter().enumerate().map(|(j, i)| i.index(j + 2) + 1).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn decode_then_encode(code in code_strategy(40)) {
            let (t, trace) = decode(&code);
            prop_assert_eq!(t.size(), code.size());
            prop_assert_eq!(trace.len(), code.size());
            prop_assert!(Tableau::validate(t.rows().to_vec(), t.points().to_vec()).is_ok());
            prop_assert_eq!(encode(&t).unwrap(), code);
        }

        #[test]
        fn phi_roundtrip_large(code in code_strategy(60)) {
            let sigma = phi(&code);
            prop_assert_eq!(phi_inverse(&sigma), code);
        }

        #[test]
        fn corner_sets_agree(code in code_strategy(30)) {
            let (t, trace) = decode(&code);
            let geom = corner_indices_geom(&t, &trace);
            prop_assert_eq!(&geom, &corner_indices_perm(&phi(&code)));
            prop_assert_eq!(&geom, &corner_indices_code(&code));
        }

        #[test]
        fn transpose_is_an_involution(code in code_strategy(40)) {
            let (t, _) = decode(&code);
            let tt = t.transpose();
            prop_assert!(Tableau::validate(tt.rows().to_vec(), tt.points().to_vec()).is_ok());
            prop_assert_eq!(tt.transpose(), t.clone());
            prop_assert_eq!(tt.corner_count(), t.corner_count());
            prop_assert_eq!(tt.occupied_corner_count(), t.occupied_corner_count());
        }

        #[test]
        fn dropping_a_point_never_panics(code in code_strategy(20), pick in any::<Index>()) {
            let (t, _) = decode(&code);
            let mut points = t.points().to_vec();
            if points.len() > 1 {
                points.remove(1 + pick.index(points.len() - 1));
                // the remaining set is either valid or rejected with an error
                let _ = Tableau::validate(t.rows().to_vec(), points);
            }
        }

        #[test]
        fn corners_and_inner_corners(code in code_strategy(40)) {
            let (t, _) = decode(&code);
            prop_assert_eq!(t.inner_corner_count() + 1, t.corner_count());
            prop_assert_eq!(t.project_state().corners(), t.corner_count());
        }
    }
}
