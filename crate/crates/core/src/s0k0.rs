//! Heffter arrays with `s, k = 0 (mod 4)`, built from shifted copies of one
//! `3 x 2` block laid along wrapped diagonals.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::blocks::{b_ab, Block};
use crate::error::{Error, Result};
use crate::grid::{wrap, Grid};
use crate::params::HeffterParams;

/// Shift amounts `y_0, y_1, ...`, one per placed block.
///
/// Block `j` is anchored so that its top-left entry `1 + y_j` lands on cell
/// `(j + 1, 4 q_j + j + 1)` with `q_j = floor(j / lcm(m, n))`, indices
/// reduced cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementPlan {
    pub offsets: Vec<i64>,
}

impl PlacementPlan {
    pub fn new(offsets: Vec<i64>) -> Self {
        PlacementPlan { offsets }
    }

    /// Top-left cell of block `j` in an `m x n` array.
    pub fn anchor(j: usize, m: usize, n: usize) -> (usize, usize) {
        let q = j / m.lcm(&n);
        let r = wrap(j as i64 + 1, m);
        let c = wrap((4 * q + j + 1) as i64, n);
        (r, c)
    }
}

/// Which block and offset recipe a parameter tuple uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    /// `lambda = 0 (mod 4)`: `B_{0,0}` over every support element.
    QuadrupleFold,
    /// `lambda = 2 (mod 4)`, `ell` odd: `B_{1,0}` with step-2 runs.
    DoubleFoldOddEll,
    /// `lambda = 2 (mod 4)`, `ell` even: `B_{ell,0}` with unit-step runs.
    DoubleFoldEvenEll,
    /// `lambda` odd, `t = 0 (mod 8)`: `B_{ell,2 ell}`.
    OddEightT,
    /// `lambda` odd, `t = 4 (mod 8)`: `B_{1,ell}`.
    OddFourT,
    /// `lambda` odd, `4` not dividing `t`: `B_{1,2}` with step-4 runs.
    OddOtherT,
    /// `lambda` does not divide `ms`: `B_{0,0}` plus the half element.
    NotDividing,
}

/// A template block and the offsets it is placed at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S0k0Plan {
    pub recipe: Recipe,
    pub template: Block,
    /// The distinct offsets before the copies are taken.
    pub base: Vec<i64>,
    pub plan: PlacementPlan,
}

/// Places `template ± y_j` for every offset of `plan` into an `m x n` array.
///
/// Fails with [`Error::Collision`] if two blocks claim one cell and with
/// [`Error::Internal`] if a row or column sum is nonzero afterwards.
pub fn place_blocks(m: usize, n: usize, template: &Block, plan: &PlacementPlan) -> Result<Grid> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams("empty array".into()));
    }
    let cells: Vec<(usize, usize, i64)> = template.grid.iter().collect();
    let mut g = Grid::new(m, n);
    let mut owner: Vec<Option<i64>> = vec![None; m * n];
    for (j, &y) in plan.offsets.iter().enumerate() {
        let (r0, c0) = PlacementPlan::anchor(j, m, n);
        for &(dr, dc, v) in &cells {
            let r = wrap((r0 + dr - 1) as i64, m);
            let c = wrap((c0 + dc - 1) as i64, n);
            let slot = &mut owner[(r - 1) * n + c - 1];
            if let Some(first) = *slot {
                return Err(Error::Collision {
                    row: r,
                    col: c,
                    first,
                    second: y,
                });
            }
            *slot = Some(y);
            g.set(r, c, if v > 0 { v + y } else { v - y })?;
        }
    }
    if g.row_sums().iter().chain(g.col_sums().iter()).any(|&x| x != 0) {
        return Err(Error::Internal("placed blocks leave a nonzero line sum".into()));
    }
    Ok(g)
}

/// `n * X`: the whole list repeated `n` times.
fn copies(n: usize, xs: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(n * xs.len());
    for _ in 0..n {
        out.extend_from_slice(xs);
    }
    out
}

/// `start, start + step, ...` up to and including `last`.
fn run(start: i64, last: i64, step: i64) -> impl Iterator<Item = i64> {
    (start..=last).step_by(step as usize)
}

/// Chooses the block and offset sequence for `p`.
pub fn build_plan(p: &HeffterParams) -> Result<S0k0Plan> {
    if !p.s.is_multiple_of(4) || !p.k.is_multiple_of(4) {
        return Err(Error::InvalidParams(format!("need s, k = 0 (mod 4), got s={}, k={}", p.s, p.k)));
    }
    let lambda = p.lambda;
    let t = p.t as i64;
    let ell = p.ell() as i64;
    let phi = p.support();
    let minus_one = |xs: &[i64]| -> Vec<i64> { xs.iter().map(|x| x - 1).collect() };

    let (recipe, template, base, offsets) = if !p.lambda_divides_ms() {
        let b = b_ab(0, 0);
        match phi.half_element {
            Some(half) => {
                let rest: Vec<i64> = phi.elements().into_iter().filter(|&x| x != half).collect();
                let base = minus_one(&rest);
                let mut y = copies(lambda / 4, &base);
                y.extend(std::iter::repeat_n(half - 1, lambda / 8));
                let mut all = base.clone();
                all.push(half - 1);
                (Recipe::NotDividing, b, all, y)
            }
            None => {
                let base = minus_one(&phi.elements());
                let y = copies(lambda / 4, &base);
                (Recipe::NotDividing, b, base, y)
            }
        }
    } else if lambda.is_multiple_of(4) {
        let base = minus_one(&phi.elements());
        let y = copies(lambda / 4, &base);
        (Recipe::QuadrupleFold, b_ab(0, 0), base, y)
    } else if lambda % 4 == 2 {
        if ell % 2 == 1 {
            let mut base: Vec<i64> = Vec::new();
            let full_runs = if t % 2 == 0 { t / 2 } else { (t - 1) / 2 };
            for i in 0..full_runs {
                base.extend(run(i * ell, (i + 1) * ell - 3, 2));
            }
            if t % 2 == 1 {
                let z0 = (t - 1) / 2 * ell;
                base.extend(run(z0, z0 + 2 * ((ell - 5) / 4), 2));
            }
            let y = copies(lambda / 2, &base);
            (Recipe::DoubleFoldOddEll, b_ab(1, 0), base, y)
        } else {
            let base: Vec<i64> = (0..t / 4)
                .flat_map(|i| run(2 * i * ell, (2 * i + 1) * ell - 2, 1))
                .collect();
            let y = copies(lambda / 2, &base);
            (Recipe::DoubleFoldEvenEll, b_ab(ell, 0), base, y)
        }
    } else if t % 8 == 0 {
        let base: Vec<i64> = (0..t / 8)
            .flat_map(|i| run(4 * i * ell, (4 * i + 1) * ell - 2, 1))
            .collect();
        let y = copies(lambda, &base);
        (Recipe::OddEightT, b_ab(ell, 2 * ell), base, y)
    } else if t % 4 == 0 {
        let base: Vec<i64> = (0..t / 4)
            .flat_map(|i| run(2 * i * ell, (2 * i + 1) * ell - 3, 2))
            .collect();
        let y = copies(lambda, &base);
        (Recipe::OddFourT, b_ab(1, ell), base, y)
    } else {
        let mut base: Vec<i64> = Vec::new();
        let full_runs = if t % 2 == 0 { t / 2 } else { (t - 1) / 2 };
        for i in 0..full_runs {
            base.extend(run(i * ell, (i + 1) * ell - 5, 4));
        }
        if t % 2 == 1 {
            let z0 = (t - 1) / 2 * ell;
            base.extend(run(z0, z0 + 4 * ((ell - 9) / 8), 4));
        }
        let y = copies(lambda, &base);
        (Recipe::OddOtherT, b_ab(1, 2), base, y)
    };

    check_tiling(&template, &base, &phi.elements())?;
    if offsets.len() != p.ms() / 4 {
        return Err(Error::Internal(format!(
            "{recipe:?} produced {} offsets for {p}, expected {}",
            offsets.len(),
            p.ms() / 4
        )));
    }
    Ok(S0k0Plan {
        recipe,
        template,
        base,
        plan: PlacementPlan::new(offsets),
    })
}

/// The shifted template supports must be pairwise disjoint and cover `phi`.
fn check_tiling(template: &Block, base: &[i64], phi: &[i64]) -> Result<()> {
    let tsupp = template.support();
    let mut seen = BTreeSet::new();
    for &x in base {
        for &e in &tsupp {
            if !seen.insert(e + x) {
                return Err(Error::Internal(format!("offset {x} overlaps an earlier block at {}", e + x)));
            }
        }
    }
    let want: BTreeSet<i64> = phi.iter().copied().collect();
    if seen != want {
        return Err(Error::Internal("shifted block supports do not tile the support set".into()));
    }
    Ok(())
}

/// A shiftable integer Heffter array for `s, k = 0 (mod 4)`.
pub fn construct_s0k0(p: &HeffterParams) -> Result<Grid> {
    let plan = build_plan(p)?;
    place_blocks(p.m, p.n, &plan.template, &plan.plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::all_params;
    use crate::verify::verify_integer_heffter;

    fn params(m: usize, n: usize, s: usize, k: usize, l: usize, t: usize) -> HeffterParams {
        HeffterParams::new(m, n, s, k, l, t).unwrap()
    }

    #[test]
    fn single_block_cells() {
        let g = place_blocks(4, 4, &b_ab(0, 0), &PlacementPlan::new(vec![0])).unwrap();
        let filled: Vec<(usize, usize)> = g.iter().map(|(r, c, _)| (r, c)).collect();
        assert_eq!(filled, vec![(1, 1), (1, 2), (3, 1), (3, 2)]);
        // B_{1,0} alone leaves its rows unbalanced.
        let err = place_blocks(4, 4, &b_ab(1, 0), &PlacementPlan::new(vec![0]));
        assert!(matches!(err, Err(Error::Internal(_))));
    }

    #[test]
    fn sixty_element_example() {
        let offsets = vec![0, 1, 10, 11, 20, 21, 30, 31, 40, 41, 50, 51];
        let g = place_blocks(6, 12, &b_ab(2, 5), &PlacementPlan::new(offsets)).unwrap();
        assert_eq!(g.row(1).unwrap(), vec![1, -3, -26, 28, 31, -33, -56, 58]);
        assert_eq!(g.row(6).unwrap(), vec![-54, -17, 19, 22, -24, -47, 49, 52]);
        let want: Vec<i64> = (1..=60).filter(|x| x % 5 != 0).collect();
        assert_eq!(g.support().into_iter().collect::<Vec<_>>(), want);
        assert!(verify_integer_heffter(&g, &params(6, 12, 8, 4, 1, 24)).ok);
    }

    #[test]
    fn collisions_are_reported() {
        // 13 blocks on a 6 x 12 array: the 13th lands on the first block.
        let offsets = vec![0; 13];
        let err = place_blocks(6, 12, &b_ab(0, 0), &PlacementPlan::new(offsets));
        assert!(matches!(err, Err(Error::Collision { .. })), "{err:?}");
    }

    #[test]
    fn offset_sequences_match_worked_examples() {
        let plan = build_plan(&params(5, 10, 8, 4, 8, 5)).unwrap();
        assert_eq!(plan.recipe, Recipe::QuadrupleFold);
        assert_eq!(plan.plan.offsets, copies(2, &[0, 1, 3, 4, 6]));

        let plan = build_plan(&params(9, 9, 8, 8, 3, 3)).unwrap();
        assert_eq!(plan.recipe, Recipe::OddOtherT);
        assert_eq!(plan.plan.offsets, copies(3, &[0, 4, 8, 12, 17, 21]));

        let plan = build_plan(&params(10, 10, 4, 4, 16, 5)).unwrap();
        assert_eq!(plan.recipe, Recipe::NotDividing);
        assert_eq!(plan.plan.offsets, vec![0, 2, 0, 2, 0, 2, 0, 2, 4, 4]);

        let plan = build_plan(&params(5, 10, 8, 4, 5, 4)).unwrap();
        assert_eq!(plan.recipe, Recipe::OddFourT);
        assert_eq!(plan.plan.offsets, copies(5, &[0, 2]));
        assert_eq!(plan.template, b_ab(1, 5));
    }

    #[test]
    fn every_recipe_is_reached() {
        let cases = [
            ((8, 8, 4, 4, 4, 2), Recipe::QuadrupleFold),
            ((8, 8, 4, 4, 2, 4), Recipe::DoubleFoldOddEll),
            ((8, 8, 4, 4, 2, 1), Recipe::DoubleFoldOddEll),
            ((8, 8, 4, 4, 2, 32), Recipe::DoubleFoldEvenEll),
            ((8, 8, 4, 4, 1, 8), Recipe::OddEightT),
            ((8, 8, 4, 4, 1, 4), Recipe::OddFourT),
            ((8, 8, 4, 4, 1, 2), Recipe::OddOtherT),
            ((8, 8, 4, 4, 1, 1), Recipe::OddOtherT),
            ((8, 8, 4, 4, 64, 1), Recipe::NotDividing),
        ];
        for ((m, n, s, k, l, t), want) in cases {
            let p = params(m, n, s, k, l, t);
            let plan = build_plan(&p).unwrap();
            assert_eq!(plan.recipe, want, "{p}");
            let g = place_blocks(m, n, &plan.template, &plan.plan).unwrap();
            assert!(verify_integer_heffter(&g, &p).ok, "{p}");
        }
    }

    #[test]
    fn small_sweep() {
        for p in all_params(12).into_iter().filter(|p| p.s % 4 == 0 && p.k % 4 == 0) {
            let g = construct_s0k0(&p).unwrap_or_else(|e| panic!("{p}: {e}"));
            assert!(g.is_shiftable(), "{p}");
            let cert = verify_integer_heffter(&g, &p);
            assert!(cert.ok, "{p}: {:?}", cert.first_clause());
        }
    }

    #[test]
    fn rejects_other_residues() {
        assert!(build_plan(&params(6, 6, 6, 6, 1, 1)).is_err());
    }
}
