//! Partially filled integer arrays.
//!
//! Indices are 1-based throughout. Cyclic index arithmetic reduces row
//! indices modulo the row count and column indices modulo the column count,
//! with residues taken in `[1, m]` and `[1, n]`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Reduces `i` into `[1, modulus]`.
pub fn wrap(i: i64, modulus: usize) -> usize {
    let m = modulus as i64;
    ((i - 1).rem_euclid(m) + 1) as usize
}

/// An `m x n` partially filled array.
///
/// An empty cell is distinct from a cell holding `0`. Zero can only be
/// stored through [`Grid::set_zero`], which signed magic arrays with an odd
/// cell count and magic rectangles need.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<Option<i64>>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            cells: vec![None; rows * cols],
        }
    }

    /// Builds a grid from dense rows, treating `0` as an empty cell.
    ///
    /// Convenient for writing down fully or partially filled blocks.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut g = Grid::new(m, n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    g.set(i + 1, j + 1, v)?;
                }
            }
        }
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn index(&self, r: usize, c: usize) -> Result<usize> {
        if r == 0 || c == 0 || r > self.rows || c > self.cols {
            return Err(Error::OutOfRange {
                row: r,
                col: c,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((r - 1) * self.cols + (c - 1))
    }

    pub fn get(&self, r: usize, c: usize) -> Option<i64> {
        self.index(r, c).ok().and_then(|i| self.cells[i])
    }

    pub fn is_filled(&self, r: usize, c: usize) -> bool {
        self.get(r, c).is_some()
    }

    /// Stores a nonzero entry, overwriting whatever was there.
    pub fn set(&mut self, r: usize, c: usize, v: i64) -> Result<()> {
        if v == 0 {
            return Err(Error::ZeroEntry { row: r, col: c });
        }
        let i = self.index(r, c)?;
        self.cells[i] = Some(v);
        Ok(())
    }

    /// Stores an explicit zero.
    pub fn set_zero(&mut self, r: usize, c: usize) -> Result<()> {
        let i = self.index(r, c)?;
        self.cells[i] = Some(0);
        Ok(())
    }

    /// Stores any value, zero included. Used by transforms that map a
    /// valid grid onto another valid grid.
    pub(crate) fn set_any(&mut self, r: usize, c: usize, v: i64) -> Result<()> {
        if v == 0 {
            self.set_zero(r, c)
        } else {
            self.set(r, c, v)
        }
    }

    pub fn clear(&mut self, r: usize, c: usize) -> Result<()> {
        let i = self.index(r, c)?;
        self.cells[i] = None;
        Ok(())
    }

    /// Iterates filled cells in row-major order as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let n = self.cols;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|v| (i / n + 1, i % n + 1, v)))
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn row(&self, r: usize) -> Result<Vec<i64>> {
        if r == 0 || r > self.rows {
            return Err(Error::OutOfRange {
                row: r,
                col: 1,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((1..=self.cols).filter_map(|c| self.get(r, c)).collect())
    }

    pub fn col(&self, c: usize) -> Result<Vec<i64>> {
        if c == 0 || c > self.cols {
            return Err(Error::OutOfRange {
                row: 1,
                col: c,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((1..=self.rows).filter_map(|r| self.get(r, c)).collect())
    }

    pub fn row_sum(&self, r: usize) -> Result<i64> {
        Ok(self.row(r)?.iter().sum())
    }

    pub fn col_sum(&self, c: usize) -> Result<i64> {
        Ok(self.col(c)?.iter().sum())
    }

    /// Column sums from left to right.
    pub fn col_sums(&self) -> Vec<i64> {
        (1..=self.cols).map(|c| self.col_sum(c).unwrap_or(0)).collect()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (1..=self.rows).map(|r| self.row_sum(r).unwrap_or(0)).collect()
    }

    /// True iff every row and column holds as many positive as negative
    /// entries.
    pub fn is_shiftable(&self) -> bool {
        let mut rows = vec![0i64; self.rows];
        let mut cols = vec![0i64; self.cols];
        for (r, c, v) in self.iter() {
            let d = v.signum();
            if d == 0 {
                return false;
            }
            rows[r - 1] += d;
            cols[c - 1] += d;
        }
        rows.iter().chain(cols.iter()).all(|&x| x == 0)
    }

    /// Adds `x` to every positive entry and `-x` to every negative one.
    pub fn shift(&self, x: i64) -> Result<Grid> {
        if !self.is_shiftable() {
            return Err(Error::NotShiftable);
        }
        Ok(self.shift_unchecked(x))
    }

    pub(crate) fn shift_unchecked(&self, x: i64) -> Grid {
        let cells = self
            .cells
            .iter()
            .map(|c| c.map(|v| if v > 0 { v + x } else { v - x }))
            .collect();
        Grid {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    pub fn transpose(&self) -> Grid {
        let mut t = Grid::new(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            t.cells[(c - 1) * self.rows + (r - 1)] = Some(v);
        }
        t
    }

    /// All entries, sorted ascending.
    pub fn entry_list(&self) -> Vec<i64> {
        let mut e: Vec<i64> = self.iter().map(|(_, _, v)| v).collect();
        e.sort_unstable();
        e
    }

    /// The set of absolute values of the entries.
    pub fn support(&self) -> BTreeSet<i64> {
        self.iter().map(|(_, _, v)| v.abs()).collect()
    }

    /// Horizontal concatenation of grids with equal heights.
    pub fn juxtapose(blocks: &[Grid]) -> Result<Grid> {
        let Some(first) = blocks.first() else {
            return Ok(Grid::new(0, 0));
        };
        let h = first.rows;
        let mut width = 0;
        for b in blocks {
            if b.rows != h {
                return Err(Error::HeightMismatch {
                    expected: h,
                    found: b.rows,
                });
            }
            width += b.cols;
        }
        let mut g = Grid::new(h, width);
        let mut off = 0;
        for b in blocks {
            for (r, c, v) in b.iter() {
                g.cells[(r - 1) * width + off + c - 1] = Some(v);
            }
            off += b.cols;
        }
        Ok(g)
    }

    /// Vertical concatenation of grids with equal widths.
    pub fn stack(parts: &[Grid]) -> Result<Grid> {
        let Some(first) = parts.first() else {
            return Ok(Grid::new(0, 0));
        };
        let w = first.cols;
        let mut cells = Vec::new();
        let mut height = 0;
        for p in parts {
            if p.cols != w {
                return Err(Error::WidthMismatch {
                    expected: w,
                    found: p.cols,
                });
            }
            cells.extend_from_slice(&p.cells);
            height += p.rows;
        }
        Ok(Grid {
            rows: height,
            cols: w,
            cells,
        })
    }

    /// Applies `f` to every filled entry.
    pub fn map_entries(&self, mut f: impl FnMut(i64) -> i64) -> Grid {
        Grid {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|c| c.map(&mut f)).collect(),
        }
    }
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Grid {}x{}", self.rows, self.cols)?;
        for r in 1..=self.rows {
            for c in 1..=self.cols {
                match self.get(r, c) {
                    Some(v) => write!(f, "{v:>5}")?,
                    None => write!(f, "{:>5}", ".")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Cells of the wrapped diagonal starting at column `i` of an `m x n` array:
/// row `r` paired with column `i + r - 1` reduced modulo `n`.
pub fn diagonal_cells(m: usize, n: usize, i: i64) -> Vec<(usize, usize)> {
    (1..=m).map(|r| (r, wrap(i + r as i64 - 1, n))).collect()
}
