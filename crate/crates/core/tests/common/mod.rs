//! Fixture table and an independent checker written straight from the
//! definitions, sharing no code with the library verifiers.

#![allow(dead_code)]

use std::path::PathBuf;

use heffter::{Grid, HeffterParams};

pub enum Kind {
    Heffter(HeffterParams),
    Sma { s: usize, k: usize },
    Mr { s: usize, k: usize },
}

pub struct Fixture {
    pub file: &'static str,
    pub kind: Kind,
}

fn hp(m: usize, n: usize, s: usize, k: usize, lambda: usize, t: usize) -> Kind {
    Kind::Heffter(HeffterParams::new(m, n, s, k, lambda, t).unwrap())
}

pub fn fixtures() -> Vec<Fixture> {
    let f = |file, kind| Fixture { file, kind };
    vec![
        f("h1_t24_6x12.json", hp(6, 12, 8, 4, 1, 24)),
        f("h5_t4_5x10.json", hp(5, 10, 8, 4, 5, 4)),
        f("h8_t5_5x10.json", hp(5, 10, 8, 4, 8, 5)),
        f("h3_t3_9x9.json", hp(9, 9, 8, 8, 3, 3)),
        f("h16_t5_10x10.json", hp(10, 10, 4, 4, 16, 5)),
        f("h6_t20_18x15.json", hp(18, 15, 10, 12, 6, 20)),
        f("h8_t5_16x20.json", hp(16, 20, 10, 8, 8, 5)),
        f("h28_t4_16x16.json", hp(16, 16, 14, 14, 28, 4)),
        f("h10_t3_20x12.json", hp(20, 12, 6, 10, 10, 3)),
        f("sma_5x10.json", Kind::Sma { s: 8, k: 4 }),
        f("mr_5x10.json", Kind::Mr { s: 8, k: 4 }),
    ]
}

pub fn load(file: &str) -> Grid {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", file].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    heffter::io::from_json(&text).unwrap()
}

fn filled_per_line(g: &Grid, s: usize, k: usize) -> bool {
    let rows_ok = (1..=g.rows()).all(|r| (1..=g.cols()).filter(|&c| g.get(r, c).is_some()).count() == s);
    let cols_ok = (1..=g.cols()).all(|c| (1..=g.rows()).filter(|&r| g.get(r, c).is_some()).count() == k);
    rows_ok && cols_ok
}

fn line_sums(g: &Grid) -> (Vec<i64>, Vec<i64>) {
    let rows = (1..=g.rows())
        .map(|r| (1..=g.cols()).filter_map(|c| g.get(r, c)).sum())
        .collect();
    let cols = (1..=g.cols())
        .map(|c| (1..=g.rows()).filter_map(|r| g.get(r, c)).sum())
        .collect();
    (rows, cols)
}

/// Residue form of the Heffter condition: with `v = 2ms/lambda + t` and `H`
/// the order-`t` subgroup of `Z_v`, the entries and their negatives cover
/// every residue outside `H` exactly `lambda` times, every entry lies in
/// `[-v/2, v/2]`, and all line sums vanish over the integers.
pub fn independent_heffter(g: &Grid, p: &HeffterParams) -> bool {
    let (m, s, lambda, t) = (p.m, p.s, p.lambda, p.t);
    if g.rows() != p.m || g.cols() != p.n || (2 * m * s) % lambda != 0 {
        return false;
    }
    let v = 2 * m * s / lambda + t;
    let ell = v / t;
    let mut hits = vec![0usize; v];
    for r in 1..=g.rows() {
        for c in 1..=g.cols() {
            if let Some(e) = g.get(r, c) {
                if e.unsigned_abs() as usize > v / 2 {
                    return false;
                }
                hits[e.rem_euclid(v as i64) as usize] += 1;
                hits[(-e).rem_euclid(v as i64) as usize] += 1;
            }
        }
    }
    let cover = hits
        .iter()
        .enumerate()
        .all(|(x, &h)| h == if x % ell == 0 { 0 } else { lambda });
    let (rows, cols) = line_sums(g);
    cover && filled_per_line(g, p.s, p.k) && rows.iter().chain(&cols).all(|&x| x == 0)
}

/// Sorted entries equal the symmetric value set, all line sums vanish.
pub fn independent_sma(g: &Grid, s: usize, k: usize) -> bool {
    let ms = (g.rows() * s) as i64;
    let mut entries: Vec<i64> = g.iter().map(|(_, _, v)| v).collect();
    entries.sort_unstable();
    let want: Vec<i64> = (-ms / 2..=ms / 2).filter(|&x| x != 0 || ms % 2 == 1).collect();
    let (rows, cols) = line_sums(g);
    entries == want && filled_per_line(g, s, k) && rows.iter().chain(&cols).all(|&x| x == 0)
}

/// Sorted entries equal `0..ms`, every row and column sum is equal.
pub fn independent_mr(g: &Grid, s: usize, k: usize) -> bool {
    let ms = (g.rows() * s) as i64;
    let mut entries: Vec<i64> = g.iter().map(|(_, _, v)| v).collect();
    entries.sort_unstable();
    let (rows, cols) = line_sums(g);
    entries == (0..ms).collect::<Vec<_>>()
        && filled_per_line(g, s, k)
        && rows.iter().all(|&x| 2 * x == s as i64 * (ms - 1))
        && cols.iter().all(|&x| 2 * x == k as i64 * (ms - 1))
}
