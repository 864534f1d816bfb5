//! Small blocks and block sequences used as building material.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A small array with its column sums recorded at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub grid: Grid,
    pub signature: Vec<i64>,
    /// Common number of appearances, up to sign, of every support element;
    /// `None` when the counts are uneven.
    pub mu: Option<usize>,
}

impl Block {
    pub fn new(grid: Grid) -> Self {
        let signature = grid.col_sums();
        let mu = multiplicity(&grid);
        Block { grid, signature, mu }
    }

    /// Dense rows, `0` meaning empty.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Ok(Block::new(Grid::from_rows(rows)?))
    }

    pub fn width(&self) -> usize {
        self.grid.cols()
    }

    pub fn height(&self) -> usize {
        self.grid.rows()
    }

    /// `B ± x`; the signature is unchanged.
    pub fn shift(&self, x: i64) -> Result<Block> {
        Ok(Block {
            grid: self.grid.shift(x)?,
            signature: self.signature.clone(),
            mu: self.mu,
        })
    }

    /// Columns `from..=to` (1-based) as a new block.
    pub fn columns(&self, from: usize, to: usize) -> Result<Block> {
        if from == 0 || to > self.width() || from > to {
            return Err(Error::InvalidParams(format!(
                "column range {from}..={to} outside width {}",
                self.width()
            )));
        }
        let mut g = Grid::new(self.height(), to - from + 1);
        for (r, c, v) in self.grid.iter() {
            if c >= from && c <= to {
                g.set_any(r, c - from + 1, v)?;
            }
        }
        Ok(Block::new(g))
    }

    /// Swaps two columns (1-based).
    pub fn swap_columns(&self, a: usize, b: usize) -> Result<Block> {
        let mut g = Grid::new(self.height(), self.width());
        for (r, c, v) in self.grid.iter() {
            let c2 = if c == a {
                b
            } else if c == b {
                a
            } else {
                c
            };
            g.set_any(r, c2, v)?;
        }
        Ok(Block::new(g))
    }

    pub fn support(&self) -> Vec<i64> {
        self.grid.support().into_iter().collect()
    }
}

fn multiplicity(g: &Grid) -> Option<usize> {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for (_, _, v) in g.iter() {
        *counts.entry(v.abs()).or_default() += 1;
    }
    let mut it = counts.values();
    let first = *it.next()?;
    it.all(|&c| c == first).then_some(first)
}

/// Horizontal concatenation of blocks.
pub fn juxtapose(blocks: &[Block]) -> Result<Block> {
    let grids: Vec<Grid> = blocks.iter().map(|b| b.grid.clone()).collect();
    Ok(Block::new(Grid::juxtapose(&grids)?))
}

/// `n * S`: `n` copies of `seq` one after the other.
pub fn repeat(n: usize, seq: &[Block]) -> Vec<Block> {
    let mut out = Vec::with_capacity(n * seq.len());
    for _ in 0..n {
        out.extend_from_slice(seq);
    }
    out
}

pub fn concat(seqs: &[Vec<Block>]) -> Vec<Block> {
    seqs.iter().flatten().cloned().collect()
}

/// Shifts every block of a sequence by `x`.
pub fn shift_all(seq: &[Block], x: i64) -> Result<Vec<Block>> {
    seq.iter().map(|b| b.shift(x)).collect()
}

/// Union of block supports, ascending.
pub fn sequence_support(seq: &[Block]) -> Vec<i64> {
    let mut all: Vec<i64> = seq.iter().flat_map(|b| b.support()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// The `3 x 2` block with a blank middle row:
///
/// ```text
///    1     -(a+1)
///    .       .
/// -(b+1)   a+b+1
/// ```
///
/// Row sums are `(-a, a)` and column sums `(-b, b)`.
pub fn b_ab(a: i64, b: i64) -> Block {
    Block::from_rows(&[[1, -(a + 1)], [0, 0], [-(b + 1), a + b + 1]])
        .expect("constant block is well formed")
}

/// Block families, one per construction that needs hand-made blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Multiplicity `s/2`: `A, F, E, G, E', G'` for odd `ell`, `H, L` for
    /// even `ell`.
    HalfWidth { ell: i64 },
    /// Multiplicity `2 mod 4`, at least 6: `A, E` for odd `ell`, `F, G` for
    /// even `ell`.
    TwoModFour { ell: i64 },
    /// Multiplicity 2 with `t` dividing `ms/(2 lambda1)`:
    /// `U3, U5, V1, V3, V5, V7, Z, Z'`.
    TwoFold,
    /// Multiplicity 2, stride `ell`: `W4, W6`.
    PrimeStride { ell: i64 },
    /// Multiplicity 2 with `ell = p*y + 1`: `W4, W6, W6'`.
    PrimeSplit { p: i64, y: i64 },
    /// Multiplicity divisible by 4: `Q` of width `lambda2/2`, plus the
    /// `2 x 2` unit `Q1`.
    Unit { lambda2: i64 },
}

type Blocks = BTreeMap<&'static str, Block>;

fn put(map: &mut Blocks, name: &'static str, rows: [&[i64]; 2]) {
    map.insert(name, Block::from_rows(&rows).expect("block rows have equal width"));
}

/// The named blocks of a family, instantiated for concrete parameters.
pub fn family_blocks(family: Family) -> Result<Blocks> {
    let mut m = Blocks::new();
    match family {
        Family::HalfWidth { ell } => {
            if ell < 2 {
                return Err(Error::InvalidParams(format!("ell={ell} must be at least 2")));
            }
            if ell % 2 == 1 {
                put(&mut m, "A", [&[1, -2, -3, 4], &[-1, 2, 3, -4]]);
                put(&mut m, "F", [&[1, -2, -4, 5], &[-1, 2, 4, -5]]);
                put(&mut m, "E", [&[1, -1, 3, -4, -3, 4], &[-2, 2, -1, 2, 3, -4]]);
                put(&mut m, "G", [&[4, 2, -2, 2, -1, -5], &[-5, -1, 4, -4, 1, 5]]);
                put(&mut m, "E'", [&[1, 3, -1, -4, -3, 4], &[-2, -1, 2, 2, 3, -4]]);
                put(&mut m, "G'", [&[4, -2, 2, 2, -1, -5], &[-5, 4, -1, -4, 1, 5]]);
            } else {
                let (a, b, c) = (ell + 1, 2 * ell + 1, 3 * ell + 1);
                put(&mut m, "H", [&[1, -a, -b, c], &[-1, a, b, -c]]);
                put(&mut m, "L", [&[1, c, -a, a, -1, -c], &[-a, -b, b, -b, 1, c]]);
            }
        }
        Family::TwoModFour { ell } => {
            if ell < 2 {
                return Err(Error::InvalidParams(format!("ell={ell} must be at least 2")));
            }
            if ell % 2 == 1 {
                put(&mut m, "A", [&[1, -1, 2, -2], &[-1, 1, -2, 2]]);
                put(&mut m, "E", [&[1, 2, -1, 1, -1, -2], &[-2, -1, 2, -2, 1, 2]]);
            } else {
                let a = ell + 1;
                put(&mut m, "F", [&[1, -1, a, -a], &[-1, 1, -a, a]]);
                put(&mut m, "G", [&[1, a, -1, 1, -1, -a], &[-a, -1, a, -a, 1, a]]);
            }
        }
        Family::TwoFold => {
            put(&mut m, "U3", [&[1, -2, -4, 5], &[-1, 2, 4, -5]]);
            put(&mut m, "U5", [&[1, -2, -3, 4], &[-1, 2, 3, -4]]);
            put(&mut m, "V1", [&[2, -2, -5, -6, 4, 7], &[-3, 3, 6, 5, -4, -7]]);
            put(&mut m, "V3", [&[1, -1, -5, -6, 4, 7], &[-2, 2, 6, 5, -4, -7]]);
            put(&mut m, "V5", [&[6, -6, -2, -3, 1, 4], &[-7, 7, 3, 2, -1, -4]]);
            put(&mut m, "V7", [&[1, -1, -4, -5, 3, 6], &[-2, 2, 5, 4, -3, -6]]);
            put(&mut m, "Z", [&[1, -1, 4, -5, -7, 8], &[-2, 2, -4, 5, 7, -8]]);
            put(&mut m, "Z'", [&[1, 4, -1, -5, -7, 8], &[-2, -4, 2, 5, 7, -8]]);
        }
        Family::PrimeStride { ell } => {
            if ell < 2 {
                return Err(Error::InvalidParams(format!("ell={ell} must be at least 2")));
            }
            let w = |j: i64| j * ell + 1;
            put(&mut m, "W4", [&[1, -w(1), -w(2), w(3)], &[-1, w(1), w(2), -w(3)]]);
            put(
                &mut m,
                "W6",
                [&[1, -1, -w(3), -w(4), w(2), w(5)], &[-w(1), w(1), w(4), w(3), -w(2), -w(5)]],
            );
        }
        Family::PrimeSplit { p, y } => {
            if p < 3 || p % 2 == 0 || y < 1 {
                return Err(Error::InvalidParams(format!(
                    "need an odd p >= 3 and y >= 1, got p={p}, y={y}"
                )));
            }
            let (a, b) = (y + 1, 2 * y + 1);
            let (c, d) = ((p + 1) * y + 2, (p + 2) * y + 2);
            let e = p * y + 2;
            put(&mut m, "W4", [&[a, -b, -c, d], &[-a, b, c, -d]]);
            put(&mut m, "W6", [&[b, -b, 1, -a, -c, d], &[-e, e, -1, a, c, -d]]);
            put(&mut m, "W6'", [&[b, 1, -b, -a, -c, d], &[-e, -1, e, a, c, -d]]);
        }
        Family::Unit { lambda2 } => {
            if lambda2 < 4 || lambda2 % 4 != 0 {
                return Err(Error::InvalidParams(format!(
                    "lambda2={lambda2} must be a positive multiple of 4"
                )));
            }
            put(&mut m, "Q1", [&[1, -1], &[-1, 1]]);
            let unit = m["Q1"].clone();
            m.insert("Q", juxtapose(&vec![unit; (lambda2 / 4) as usize])?);
        }
    }
    Ok(m)
}

/// `(V7, V7 ± 6, ..., V7 ± 6(b-1))`; empty for `b = 0`.
pub fn h_seq(b: usize) -> Vec<Block> {
    let v7 = family_blocks(Family::TwoFold).expect("fixed family")["V7"].clone();
    (0..b)
        .map(|i| v7.shift(6 * i as i64).expect("V7 is shiftable"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_blocchi, verify_blocchi_old};

    fn entries(b: &Block) -> Vec<i64> {
        b.grid.iter().map(|(_, _, v)| v).collect()
    }

    #[test]
    fn b_ab_examples() {
        assert_eq!(entries(&b_ab(2, 5)), vec![1, -3, -6, 8]);
        assert_eq!(entries(&b_ab(1, 2)), vec![1, -2, -3, 4]);
        let b = b_ab(0, 0);
        assert_eq!(entries(&b), vec![1, -1, -1, 1]);
        assert_eq!(b.grid.row_sums(), vec![0, 0, 0]);
        assert_eq!(b.signature, vec![0, 0]);
        assert!(b.grid.is_shiftable());
        assert_eq!(b_ab(3, 4).grid.row_sums(), vec![-3, 0, 3]);
        assert_eq!(b_ab(3, 4).signature, vec![-4, 4]);
        assert_eq!(b.mu, Some(4));
    }

    #[test]
    fn printed_blocks() {
        let two = family_blocks(Family::TwoFold).unwrap();
        assert_eq!(
            two["V5"],
            Block::from_rows(&[[6, -6, -2, -3, 1, 4], [-7, 7, 3, 2, -1, -4]]).unwrap()
        );
        let w = family_blocks(Family::PrimeStride { ell: 4 }).unwrap();
        assert_eq!(entries(&w["W4"]), vec![1, -5, -9, 13, -1, 5, 9, -13]);
        let q = family_blocks(Family::Unit { lambda2: 4 }).unwrap();
        assert_eq!(q["Q"].width(), 2);
        assert_eq!(q["Q"].mu, Some(4));
        assert!(family_blocks(Family::Unit { lambda2: 6 }).is_err());
        assert!(family_blocks(Family::PrimeSplit { p: 4, y: 1 }).is_err());
    }

    #[test]
    fn h_seq_supports() {
        assert!(h_seq(0).is_empty());
        let one = h_seq(1);
        assert_eq!(sequence_support(&one), (1..=6).collect::<Vec<_>>());
        let two = h_seq(2);
        assert_eq!(two[1].support().last(), Some(&12));
        assert_eq!(sequence_support(&h_seq(5)), (1..=30).collect::<Vec<_>>());
    }

    #[test]
    fn sequence_algebra() {
        let x = vec![b_ab(0, 0), b_ab(1, 0)];
        assert_eq!(repeat(2, &x).len(), 4);
        assert_eq!(concat(&[vec![], x.clone()]), x);
        assert_eq!(shift_all(&x, 3).unwrap()[1].support(), vec![4, 5]);
    }

    fn satisfies(b: &Block) -> (bool, bool) {
        let s = [b.grid.clone()];
        (
            verify_blocchi(&s).unwrap().ok,
            verify_blocchi_old(&s).unwrap().ok,
        )
    }

    // Which of the two block conditions each printed block meets.
    #[test]
    fn expectation_table() {
        for ell in 2..=40 {
            let half = family_blocks(Family::HalfWidth { ell }).unwrap();
            let expect: &[(&str, (bool, bool))] = if ell % 2 == 1 {
                &[
                    ("A", (true, true)),
                    ("F", (true, true)),
                    ("E", (true, false)),
                    ("G", (true, false)),
                    ("E'", (false, true)),
                    ("G'", (false, true)),
                ]
            } else {
                &[("H", (true, true)), ("L", (true, true))]
            };
            for (name, want) in expect {
                assert_eq!(satisfies(&half[name]), *want, "{name} ell={ell}");
                // The six-column blocks repeat each of four magnitudes three times.
                let mu = if half[name].width() == 6 { 3 } else { 2 };
                assert_eq!(half[name].mu, Some(mu), "{name}");
            }
            for b in family_blocks(Family::TwoModFour { ell }).unwrap().values() {
                assert_eq!(satisfies(b), (true, true));
            }
            let w = family_blocks(Family::PrimeStride { ell }).unwrap();
            assert_eq!(satisfies(&w["W4"]), (true, true));
            assert_eq!(satisfies(&w["W6"]), (true, true));
            assert_eq!(w["W4"].signature, vec![0, 0, 0, 0]);
            assert_eq!(w["W6"].signature, vec![-ell, ell, ell, -ell, 0, 0]);
            let want: Vec<i64> = (0..4).map(|j| j * ell + 1).collect();
            assert_eq!(w["W4"].support(), want);
        }
        for p in [3, 5, 7] {
            for y in 1..=8 {
                let w = family_blocks(Family::PrimeSplit { p, y }).unwrap();
                assert_eq!(satisfies(&w["W4"]), (true, true));
                assert!(satisfies(&w["W6"]).0);
                assert!(satisfies(&w["W6'"]).1);
                assert_eq!(w["W6"].support(), w["W6'"].support());
            }
        }
        let two = family_blocks(Family::TwoFold).unwrap();
        for name in ["U3", "U5", "V1", "V3", "V5", "V7"] {
            assert_eq!(satisfies(&two[name]), (true, true), "{name}");
        }
        assert_eq!(satisfies(&two["Z"]), (true, false));
        assert_eq!(satisfies(&two["Z'"]), (false, true));
        for (name, skip) in [("V1", 1), ("V3", 3), ("V5", 5), ("V7", 7)] {
            let want: Vec<i64> = (1..=7).filter(|&x| x != skip).collect();
            assert_eq!(two[name].support(), want);
        }
    }
}
