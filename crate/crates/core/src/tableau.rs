//! Tree-like tableaux and their Southeast border.
//!
//! A tableau is a Young diagram (stored as row lengths, top to bottom) together
//! with a set of pointed cells. Cells are addressed `(row, col)`, 0-indexed from
//! the top-left corner. The Southeast border is read from its Southwest end to
//! its Northeast end; border edges are numbered from 1.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pasep::PasepState;

/// A cell of a Young diagram, `(row, col)` from the top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const ROOT: Cell = Cell { row: 0, col: 0 };

    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub const fn transpose(self) -> Self {
        Cell { row: self.col, col: self.row }
    }
}

impl From<(usize, usize)> for Cell {
    fn from((row, col): (usize, usize)) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for (usize, usize) {
    fn from(c: Cell) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// One unit edge of the Southeast border.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    /// Bottom edge of a cell; an East step of the border path.
    Horizontal,
    /// Right edge of a cell; a North step of the border path.
    Vertical,
}

impl Edge {
    pub fn letter(self) -> char {
        match self {
            Edge::Horizontal => 'H',
            Edge::Vertical => 'V',
        }
    }
}

/// The Southeast border of a Young diagram, Southwest to Northeast.
///
/// Each edge is stored with the unique diagram cell it bounds (the cell above a
/// horizontal edge, the cell left of a vertical one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderWord {
    edges: Vec<(Edge, Cell)>,
}

impl BorderWord {
    pub fn from_rows(rows: &[usize]) -> Self {
        let mut edges = Vec::with_capacity(rows.len() + rows.first().copied().unwrap_or(0));
        let mut x = 0;
        for (r, &len) in rows.iter().enumerate().rev() {
            for c in x..len {
                edges.push((Edge::Horizontal, Cell::new(r, c)));
            }
            x = len;
            edges.push((Edge::Vertical, Cell::new(r, len - 1)));
        }
        BorderWord { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge `i`, 1-indexed.
    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i - 1].0
    }

    /// The cell bounded by edge `i`, 1-indexed.
    pub fn cell(&self, i: usize) -> Cell {
        self.edges[i - 1].1
    }

    pub fn letters(&self) -> Vec<Edge> {
        self.edges.iter().map(|&(e, _)| e).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Cell)> + '_ {
        self.edges.iter().copied()
    }
}

impl fmt::Display for BorderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(e, _) in &self.edges {
            write!(f, "{}", e.letter())?;
        }
        Ok(())
    }
}

/// Rebuilds row lengths (top to bottom) from a border word.
///
/// Every vertical letter closes a row whose length is the number of horizontal
/// letters read so far.
pub fn rows_from_letters(letters: &[Edge]) -> Vec<usize> {
    let mut rows = Vec::new();
    let mut width = 0;
    for &e in letters {
        match e {
            Edge::Horizontal => width += 1,
            Edge::Vertical => rows.push(width),
        }
    }
    rows.reverse();
    rows
}

/// A cell whose bottom and right edges are both border edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Corner {
    pub cell: Cell,
    /// Index of the corner's bottom (horizontal) edge; its right edge is `bottom_edge_index + 1`.
    pub bottom_edge_index: usize,
    pub occupied: bool,
}

/// Which of the three defining rules failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// The top-left cell carries a point.
    Root = 1,
    /// Every other point has a point above it or to its left, but not both.
    AboveXorLeft = 2,
    /// No row or column is empty.
    NoEmptyLine = 3,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("shape must be a non-empty, weakly decreasing sequence of positive row lengths")]
    InvalidShape,
    #[error("point {0} lies outside the shape")]
    PointOutsideShape(Cell),
    #[error("duplicate point {0}")]
    DuplicatePoint(Cell),
    #[error("rule {} violated at {witness}", *rule as u8)]
    RuleViolation { rule: Rule, witness: Cell },
}

/// A tree-like tableau. Immutable once validated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTableau", into = "RawTableau")]
pub struct Tableau {
    rows: Vec<usize>,
    points: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct RawTableau {
    rows: Vec<usize>,
    points: Vec<Cell>,
}

impl TryFrom<RawTableau> for Tableau {
    type Error = TableauError;

    fn try_from(raw: RawTableau) -> Result<Self, Self::Error> {
        Tableau::validate(raw.rows, raw.points)
    }
}

impl From<Tableau> for RawTableau {
    fn from(t: Tableau) -> Self {
        RawTableau { rows: t.rows, points: t.points }
    }
}

fn check_shape(rows: &[usize]) -> Result<(), TableauError> {
    if rows.is_empty() || rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
        return Err(TableauError::InvalidShape);
    }
    Ok(())
}

impl Tableau {
    /// The unique tableau of size 1.
    pub fn single() -> Self {
        Tableau { rows: vec![1], points: vec![Cell::ROOT] }
    }

    /// Checks the shape and the three defining rules.
    ///
    /// Rule 1 is checked first, then rule 2 over the points in row-major order,
    /// then rule 3 over rows (top to bottom) and columns (left to right). An empty
    /// row is witnessed by its first cell, an empty column by its top cell.
    pub fn validate(rows: Vec<usize>, mut points: Vec<Cell>) -> Result<Self, TableauError> {
        check_shape(&rows)?;
        points.sort_unstable();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(TableauError::DuplicatePoint(w[0]));
            }
        }
        for &p in &points {
            if p.row >= rows.len() || p.col >= rows[p.row] {
                return Err(TableauError::PointOutsideShape(p));
            }
        }
        let t = Tableau { rows, points };
        t.check_rules()?;
        Ok(t)
    }

    fn check_rules(&self) -> Result<(), TableauError> {
        let grid = self.grid();
        if !grid[0][0] {
            return Err(TableauError::RuleViolation { rule: Rule::Root, witness: Cell::ROOT });
        }
        for &p in &self.points {
            if p == Cell::ROOT {
                continue;
            }
            let above = (0..p.row).any(|r| grid[r][p.col]);
            let left = grid[p.row][..p.col].iter().any(|&b| b);
            if above == left {
                return Err(TableauError::RuleViolation { rule: Rule::AboveXorLeft, witness: p });
            }
        }
        for (r, line) in grid.iter().enumerate() {
            if !line.iter().any(|&b| b) {
                return Err(TableauError::RuleViolation { rule: Rule::NoEmptyLine, witness: Cell::new(r, 0) });
            }
        }
        for c in 0..self.width() {
            if !grid.iter().take(self.column_len(c)).any(|line| line[c]) {
                return Err(TableauError::RuleViolation { rule: Rule::NoEmptyLine, witness: Cell::new(0, c) });
            }
        }
        Ok(())
    }

    /// Builds a tableau without checking the rules. Callers must guarantee validity.
    pub(crate) fn from_parts_unchecked(rows: Vec<usize>, mut points: Vec<Cell>) -> Self {
        points.sort_unstable();
        let t = Tableau { rows, points };
        debug_assert!(check_shape(&t.rows).is_ok() && t.check_rules().is_ok(), "invalid tableau {t:?}");
        t
    }

    fn grid(&self) -> Vec<Vec<bool>> {
        let mut grid: Vec<Vec<bool>> = self.rows.iter().map(|&len| vec![false; len]).collect();
        for p in &self.points {
            grid[p.row][p.col] = true;
        }
        grid
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Points in lexicographic `(row, col)` order.
    pub fn points(&self) -> &[Cell] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows[0]
    }

    pub fn column_len(&self, col: usize) -> usize {
        self.rows.iter().take_while(|&&len| len > col).count()
    }

    /// Column lengths, left to right.
    pub fn columns(&self) -> Vec<usize> {
        (0..self.width()).map(|c| self.column_len(c)).collect()
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        cell.row < self.rows.len() && cell.col < self.rows[cell.row]
    }

    pub fn is_pointed(&self, cell: Cell) -> bool {
        self.points.binary_search(&cell).is_ok()
    }

    pub fn border_word(&self) -> BorderWord {
        BorderWord::from_rows(&self.rows)
    }

    /// Corners in Southwest to Northeast order.
    pub fn corners(&self) -> Vec<Corner> {
        let word = self.border_word();
        (1..word.len())
            .filter(|&i| word.edge(i) == Edge::Horizontal && word.edge(i + 1) == Edge::Vertical)
            .map(|i| {
                let cell = word.cell(i);
                Corner { cell, bottom_edge_index: i, occupied: self.is_pointed(cell) }
            })
            .collect()
    }

    pub fn corner_count(&self) -> usize {
        let letters = self.border_word().letters();
        letters.windows(2).filter(|w| w[0] == Edge::Horizontal && w[1] == Edge::Vertical).count()
    }

    pub fn occupied_corner_count(&self) -> usize {
        self.corners().iter().filter(|c| c.occupied).count()
    }

    /// Number of vertical-then-horizontal factors of the border word.
    pub fn inner_corner_count(&self) -> usize {
        let letters = self.border_word().letters();
        letters.windows(2).filter(|w| w[0] == Edge::Vertical && w[1] == Edge::Horizontal).count()
    }

    /// The right-most point sitting in the bottom cell of its column, with the
    /// index of the horizontal border edge under it.
    pub fn special_point(&self) -> (Cell, usize) {
        let h = self.height();
        let cell = (0..self.width())
            .rev()
            .map(|c| Cell::new(self.column_len(c) - 1, c))
            .find(|&cell| self.is_pointed(cell))
            .expect("the last inserted point always sits at the bottom of its column");
        (cell, cell.col + h - cell.row)
    }

    pub fn sp(&self) -> usize {
        self.special_point().1
    }

    /// Mirror image through the main diagonal.
    pub fn transpose(&self) -> Tableau {
        let mut points: Vec<Cell> = self.points.iter().map(|p| p.transpose()).collect();
        points.sort_unstable();
        Tableau { rows: self.columns(), points }
    }

    pub fn is_symmetric(&self) -> bool {
        self.columns() == self.rows && self.points.iter().all(|p| self.is_pointed(p.transpose()))
    }

    /// Reads the border without its first and last edge; East is a particle.
    pub fn project_state(&self) -> PasepState {
        let letters = self.border_word().letters();
        let inner = &letters[1..letters.len() - 1];
        PasepState::new(inner.iter().map(|&e| e == Edge::Horizontal).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tableau serialization cannot fail")
    }

    /// Multi-line rendering, `*` for points and `.` for empty cells.
    pub fn to_ascii(&self) -> String {
        let grid = self.grid();
        let mut out = String::new();
        for line in grid {
            out.extend(line.iter().map(|&b| if b { '*' } else { '.' }));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
