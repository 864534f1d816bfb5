//! Arrays for `s = 2 (mod 4)` assembled from nice pairs of `2 x s` blocks.

use num_integer::Integer;

use crate::blocks::{repeat, Block};
use crate::error::{Error, Result};
use crate::grid::{wrap, Grid};
use crate::nice_pairs::{nice_pair_with_budget, NicePair};
use crate::oracle::SearchBudget;
use crate::params::HeffterParams;
use crate::verify::verify_blocchi2;

/// `d` blocks of size `2 x 2b`, `2b <= d`, whose column sums come in pairs
/// `(sigma_i, -sigma_i)` shared by every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSequence {
    blocks: Vec<Block>,
}

impl PSequence {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let d = blocks.len();
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidParams("empty block sequence".into()));
        };
        let w = first.width();
        if w % 2 != 0 || w > d {
            return Err(Error::InvalidParams(format!(
                "block width {w} must be even and at most the sequence length {d}"
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.height() != 2) {
            return Err(Error::HeightMismatch {
                expected: 2,
                found: b.height(),
            });
        }
        let grids: Vec<Grid> = blocks.iter().map(|b| b.grid.clone()).collect();
        let cert = verify_blocchi2(&grids)?;
        if !cert.ok {
            return Err(Error::InvalidParams(format!(
                "blocks do not share paired column sums ({})",
                cert.first_clause().unwrap_or("?")
            )));
        }
        Ok(PSequence { blocks })
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    /// Half the block width.
    pub fn b(&self) -> usize {
        self.blocks[0].width() / 2
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

/// The `2d x d` array holding block `i`'s top row on row `i` and its bottom
/// row on row `d + i`, both starting at column `i` and wrapping.
///
/// Every column meets each `sigma_i` once with each sign, so all column sums
/// vanish; row sums are the block row sums.
pub fn assemble_p(ps: &PSequence) -> Grid {
    let d = ps.d();
    let mut g = Grid::new(2 * d, d);
    for (i, block) in ps.blocks.iter().enumerate() {
        for (r, c, v) in block.grid.iter() {
            let row = (r - 1) * d + i + 1;
            let col = wrap((i + c) as i64, d);
            g.set_any(row, col, v).expect("cell inside the P array");
        }
    }
    g
}

/// Tiles an `m x n` array with P arrays cut from `seq` (length `m/2`,
/// blocks `2 x s`).
///
/// With `d = gcd(m/2, n)` and `a = sd/n`, tile `(i, j)` is built from the
/// `j`-th width-`a` column slice of blocks `i d + 1, ..., (i+1) d`.
pub fn tile(m: usize, n: usize, s: usize, seq: &[Block]) -> Result<Grid> {
    if !m.is_multiple_of(2) || seq.len() != m / 2 {
        return Err(Error::Internal(format!(
            "tiling an {m}x{n} array needs {} blocks, got {}",
            m / 2,
            seq.len()
        )));
    }
    let d = (m / 2).gcd(&n);
    let a = s * d / n;
    if !a.is_multiple_of(2) || a * n != s * d {
        return Err(Error::Internal(format!("slice width {a} is not an even integer")));
    }
    let (mbar, nbar) = (m / (2 * d), n / d);
    let mut g = Grid::new(m, n);
    for i in 0..mbar {
        for j in 0..nbar {
            let slices = seq[i * d..(i + 1) * d]
                .iter()
                .map(|b| b.columns(a * j + 1, a * (j + 1)))
                .collect::<Result<Vec<_>>>()?;
            let p = assemble_p(&PSequence::new(slices)?);
            for (r, c, v) in p.iter() {
                g.set_any(i * 2 * d + r, j * d + c, v)?;
            }
        }
    }
    Ok(g)
}

/// The nice pair for `p` stretched to length `m/2`.
fn full_length_pair(p: &HeffterParams, budget: &SearchBudget) -> Result<NicePair> {
    let (pair, f) = nice_pair_with_budget(p, budget)?;
    if p.lambda_divides_ms() {
        Ok(NicePair {
            first: repeat(f.lambda1, &pair.first),
            second: repeat(f.lambda1, &pair.second),
        })
    } else {
        Ok(pair)
    }
}

/// A shiftable integer Heffter array for `s = 2`, `k = 0 (mod 4)`.
pub fn construct_s2k0(p: &HeffterParams, budget: &SearchBudget) -> Result<Grid> {
    if p.s % 4 != 2 || !p.k.is_multiple_of(4) {
        return Err(Error::InvalidParams(format!(
            "need s = 2 and k = 0 (mod 4), got s={}, k={}",
            p.s, p.k
        )));
    }
    let pair = full_length_pair(p, budget)?;
    tile(p.m, p.n, p.s, &pair.first)
}

/// `s = 0`, `k = 2 (mod 4)`: the transpose of the swapped construction.
pub fn construct_k2s0(p: &HeffterParams, budget: &SearchBudget) -> Result<Grid> {
    Ok(construct_s2k0(&p.transposed(), budget)?.transpose())
}

/// Places `n/2` blocks of width `s` in an `n x n` array, block `r` on rows
/// `2r - 1, 2r` starting at column `2r - 1`.
pub fn square_from_blocks(n: usize, seq: &[Block]) -> Result<Grid> {
    if seq.len() * 2 != n {
        return Err(Error::Internal(format!("{n}x{n} square needs {} blocks, got {}", n / 2, seq.len())));
    }
    let mut g = Grid::new(n, n);
    for (i, block) in seq.iter().enumerate() {
        for (r, c, v) in block.grid.iter() {
            let col = wrap((2 * i + c) as i64, n);
            g.set_any(2 * i + r, col, v)?;
        }
    }
    Ok(g)
}

/// A shiftable integer Heffter array for `s, k = 2 (mod 4)` with `m` even.
///
/// For `m >= n` the first `n/2` blocks of the second sequence form an
/// `n x n` square and the last `(m - n)/2` blocks of the first sequence are
/// tiled underneath; otherwise the transpose is built.
pub fn construct_sk2_even(p: &HeffterParams, budget: &SearchBudget) -> Result<Grid> {
    if p.s % 4 != 2 || p.k % 4 != 2 || p.s < 6 || p.k < 6 {
        return Err(Error::InvalidParams(format!(
            "need s, k = 2 (mod 4) and at least 6, got s={}, k={}",
            p.s, p.k
        )));
    }
    if !p.m.is_multiple_of(2) || !p.n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("{p}: s, k = 2 (mod 4) needs m and n even")));
    }
    if p.m < p.n {
        return Ok(construct_sk2_even(&p.transposed(), budget)?.transpose());
    }
    let (m, n) = (p.m, p.n);
    let pair = full_length_pair(p, budget)?;
    let square = square_from_blocks(n, &pair.second[..n / 2])?;
    if m == n {
        return Ok(square);
    }
    let below = tile(m - n, n, p.s, &pair.first[n / 2..])?;
    Grid::stack(&[square, below])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::all_params;
    use crate::verify::verify_integer_heffter;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn block(top: &[i64], bottom: &[i64]) -> Block {
        Block::from_rows(&[top, bottom]).unwrap()
    }

    #[test]
    fn p_array_fill_pattern() {
        // Six blocks of width 4 with column sums (1, -1, 2, -2).
        let blocks: Vec<Block> = (0..6)
            .map(|i| {
                let x = 10 * i;
                block(&[x + 3, -(x + 3), x + 5, -(x + 5)], &[-(x + 2), x + 2, -(x + 3), x + 3])
            })
            .collect();
        let ps = PSequence::new(blocks).unwrap();
        assert_eq!((ps.d(), ps.b()), (6, 2));
        let g = assemble_p(&ps);
        assert_eq!((g.rows(), g.cols()), (12, 6));
        let filled = |r: usize| -> Vec<usize> { (1..=6).filter(|&c| g.is_filled(r, c)).collect() };
        assert_eq!(filled(1), vec![1, 2, 3, 4]);
        assert_eq!(filled(4), vec![1, 4, 5, 6]);
        assert_eq!(filled(12), vec![1, 2, 3, 6]);
        assert_eq!(g.get(4, 1), Some(-35));
        assert_eq!(g.get(10, 1), Some(33));
        assert!(g.col_sums().iter().all(|&x| x == 0));
        assert!(g.row_sums().iter().all(|&x| x == 0));
    }

    #[test]
    fn square_p_array_is_full() {
        let blocks = vec![block(&[1, -1], &[-2, 2]), block(&[3, -3], &[-4, 4])];
        let g = assemble_p(&PSequence::new(blocks).unwrap());
        assert_eq!(g.filled_count(), 8);
    }

    #[test]
    fn p_sequence_rejects_unpaired_sums() {
        let blocks = vec![block(&[1, -1], &[-2, 3]), block(&[3, -3], &[-4, 4])];
        assert!(PSequence::new(blocks).is_err());
        let wide = vec![block(&[1, -1, 2, -2], &[-1, 1, -2, 2])];
        assert!(PSequence::new(wide).is_err());
    }

    #[test]
    fn figure_tuples_verify() {
        for (m, n, s, k, l, t) in [
            (18, 15, 10, 12, 6, 20),
            (16, 20, 10, 8, 8, 5),
            (16, 16, 14, 14, 28, 4),
            (20, 12, 6, 10, 10, 3),
        ] {
            let p = HeffterParams::new(m, n, s, k, l, t).unwrap();
            let g = if k % 4 == 0 {
                construct_s2k0(&p, &budget())
            } else {
                construct_sk2_even(&p, &budget())
            }
            .unwrap();
            assert!(g.is_shiftable(), "{p}");
            let cert = verify_integer_heffter(&g, &p);
            assert!(cert.ok, "{p}: {:?}", cert.first_clause());
        }
    }

    #[test]
    fn transposed_case_verifies() {
        let p = HeffterParams::new(20, 16, 8, 10, 8, 5).unwrap();
        let g = construct_k2s0(&p, &budget()).unwrap();
        assert!(verify_integer_heffter(&g, &p).ok);
    }

    #[test]
    fn small_sweep() {
        for p in all_params(12) {
            let g = match (p.s % 4, p.k % 4) {
                (2, 0) => construct_s2k0(&p, &budget()),
                (0, 2) => construct_k2s0(&p, &budget()),
                (2, 2) if p.m % 2 == 0 => construct_sk2_even(&p, &budget()),
                _ => continue,
            }
            .unwrap_or_else(|e| panic!("{p}: {e}"));
            assert!(g.is_shiftable(), "{p}");
            let cert = verify_integer_heffter(&g, &p);
            assert!(cert.ok, "{p}: {:?}", cert.first_clause());
        }
    }

    #[test]
    fn odd_sides_are_unsupported() {
        let p = HeffterParams::new(9, 9, 6, 6, 2, 1).unwrap();
        assert!(matches!(construct_sk2_even(&p, &budget()), Err(Error::Unsupported(_))));
    }
}
