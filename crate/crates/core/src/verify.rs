//! Exact verifiers. Content failures are reported in a [`Certificate`],
//! never raised.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nice_pairs::NicePair;
use crate::params::HeffterParams;

/// How many violations a certificate keeps.
pub const MAX_VIOLATIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Cell { row: usize, col: usize },
    Row(usize),
    Col(usize),
    Value(i64),
    Block(usize),
    Grid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
    pub witness: Witness,
}

/// Outcome of a verification: `ok` iff no violation was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Total violations found, including those beyond the stored cap.
    pub total: usize,
}

impl Certificate {
    fn new() -> Self {
        Certificate {
            ok: true,
            violations: Vec::new(),
            total: 0,
        }
    }

    fn fail(&mut self, clause: &str, detail: String, witness: Witness) {
        self.ok = false;
        self.total += 1;
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(Violation {
                clause: clause.to_string(),
                detail,
                witness,
            });
        }
    }

    fn absorb(&mut self, other: Certificate, prefix: &str) {
        let dropped = other.total - other.violations.len();
        for v in other.violations {
            self.fail(&format!("{prefix}{}", v.clause), v.detail, v.witness);
        }
        self.total += dropped;
        if dropped > 0 {
            self.ok = false;
        }
    }

    /// Clause id of the first violation, if any.
    pub fn first_clause(&self) -> Option<&str> {
        self.violations.first().map(|v| v.clause.as_str())
    }

    pub fn has_clause(&self, clause: &str) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

fn check_fill(g: &Grid, s: usize, k: usize, cert: &mut Certificate) {
    for r in 1..=g.rows() {
        let got = g.row(r).map(|v| v.len()).unwrap_or(0);
        if got != s {
            cert.fail("fill.row", format!("row {r} has {got} filled cells, want {s}"), Witness::Row(r));
        }
    }
    for c in 1..=g.cols() {
        let got = g.col(c).map(|v| v.len()).unwrap_or(0);
        if got != k {
            cert.fail("fill.col", format!("column {c} has {got} filled cells, want {k}"), Witness::Col(c));
        }
    }
}

fn check_sums(g: &Grid, row_target: i64, col_target: i64, modulus: Option<i64>, cert: &mut Certificate) {
    let norm = |x: i64| modulus.map_or(x, |v| x.rem_euclid(v));
    for (i, sum) in g.row_sums().into_iter().enumerate() {
        if norm(sum) != norm(row_target) {
            cert.fail("sum.row", format!("row {} sums to {sum}, want {row_target}", i + 1), Witness::Row(i + 1));
        }
    }
    for (j, sum) in g.col_sums().into_iter().enumerate() {
        if norm(sum) != norm(col_target) {
            cert.fail("sum.col", format!("column {} sums to {sum}, want {col_target}", j + 1), Witness::Col(j + 1));
        }
    }
}

fn cell_of(g: &Grid, pred: impl Fn(i64) -> bool) -> Witness {
    g.iter()
        .find(|&(_, _, v)| pred(v))
        .map_or(Witness::Grid, |(row, col, _)| Witness::Cell { row, col })
}

/// Checks the signed magic array conditions: `s` cells per row, `k` per
/// column, each element of the symmetric value set exactly once, all line
/// sums zero.
pub fn verify_sma(g: &Grid, s: usize, k: usize) -> Certificate {
    let mut cert = Certificate::new();
    check_fill(g, s, k, &mut cert);
    let ms = (g.rows() * s) as i64;
    let half = ms / 2;
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, _, v) in g.iter() {
        *counts.entry(v).or_default() += 1;
    }
    let expected: Vec<i64> = if ms % 2 == 1 {
        (-half..=half).collect()
    } else {
        (-half..=half).filter(|&x| x != 0).collect()
    };
    for &x in &expected {
        match counts.get(&x).copied().unwrap_or(0) {
            1 => {}
            0 => cert.fail("entries", format!("value {x} is missing"), Witness::Value(x)),
            c => cert.fail("entries", format!("value {x} appears {c} times"), cell_of(g, |v| v == x)),
        }
    }
    for &x in counts.keys() {
        if x.abs() > half || (x == 0 && ms % 2 == 0) {
            cert.fail("entries", format!("value {x} is outside the value set"), cell_of(g, |v| v == x));
        }
    }
    check_sums(g, 0, 0, None, &mut cert);
    cert
}

fn check_shape(g: &Grid, p: &HeffterParams, cert: &mut Certificate) -> bool {
    if g.rows() != p.m || g.cols() != p.n {
        cert.fail(
            "shape",
            format!("grid is {}x{}, want {}x{}", g.rows(), g.cols(), p.m, p.n),
            Witness::Grid,
        );
        return false;
    }
    true
}

/// Checks an integer relative Heffter array against its parameters.
pub fn verify_integer_heffter(g: &Grid, p: &HeffterParams) -> Certificate {
    let mut cert = Certificate::new();
    if !check_shape(g, p, &mut cert) {
        return cert;
    }
    check_fill(g, p.s, p.k, &mut cert);
    let phi = p.support();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, _, v) in g.iter() {
        *counts.entry(v.abs()).or_default() += 1;
    }
    for x in phi.elements() {
        let want = phi.multiplicity(x);
        let got = counts.get(&x).copied().unwrap_or(0);
        if got != want {
            cert.fail(
                "multiplicity",
                format!("{x} appears {got} times up to sign, want {want}"),
                Witness::Value(x),
            );
        }
    }
    for &x in counts.keys() {
        if !phi.contains(x) {
            cert.fail(
                "support",
                format!("{x} is outside the support set"),
                cell_of(g, |v| v.abs() == x),
            );
        }
    }
    check_sums(g, 0, 0, None, &mut cert);
    cert
}

/// The subgroup of order `t` inside the cyclic group of order `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicContext {
    pub v: i64,
    pub t: i64,
    pub ell: i64,
    /// The unique involution `v/2`, when `v` is even.
    pub involution: Option<i64>,
}

impl CyclicContext {
    pub fn new(p: &HeffterParams) -> Self {
        let v = p.v() as i64;
        CyclicContext {
            v,
            t: p.t as i64,
            ell: p.ell() as i64,
            involution: (v % 2 == 0).then_some(v / 2),
        }
    }

    pub fn in_subgroup(&self, x: i64) -> bool {
        x.rem_euclid(self.v) % self.ell == 0
    }

    pub fn subgroup(&self) -> Vec<i64> {
        (0..self.t).map(|j| j * self.ell).collect()
    }
}

/// Checks the cyclic-group definition after reducing entries modulo `v`.
pub fn verify_cyclic_heffter(g: &Grid, p: &HeffterParams) -> Certificate {
    let mut cert = Certificate::new();
    if !check_shape(g, p, &mut cert) {
        return cert;
    }
    check_fill(g, p.s, p.k, &mut cert);
    let ctx = CyclicContext::new(p);
    let v = ctx.v;
    // Count entries per class {x, -x}, keyed by the smaller representative.
    let mut classes: HashMap<i64, usize> = HashMap::new();
    for (row, col, e) in g.iter() {
        let x = e.rem_euclid(v);
        if ctx.in_subgroup(x) {
            cert.fail(
                "subgroup",
                format!("entry {e} lies in the subgroup of order {}", ctx.t),
                Witness::Cell { row, col },
            );
            continue;
        }
        *classes.entry(x.min(v - x)).or_default() += 1;
    }
    let lambda = p.lambda;
    for x in 1..=v / 2 {
        if ctx.in_subgroup(x) {
            continue;
        }
        let got = classes.get(&x).copied().unwrap_or(0);
        let want = if Some(x) == ctx.involution { lambda / 2 } else { lambda };
        if got != want {
            cert.fail(
                "multiplicity",
                format!("class of {x} mod {v} appears {got} times up to sign, want {want}"),
                Witness::Value(x),
            );
        }
    }
    check_sums(g, 0, 0, Some(v), &mut cert);
    cert
}

/// Checks a magic rectangle: values `0..ms` once each, constant row sum
/// `s(ms-1)/2` and column sum `k(ms-1)/2`.
pub fn verify_mr(g: &Grid, s: usize, k: usize) -> Certificate {
    let mut cert = Certificate::new();
    check_fill(g, s, k, &mut cert);
    let ms = (g.rows() * s) as i64;
    let mut seen: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, _, v) in g.iter() {
        *seen.entry(v).or_default() += 1;
    }
    for x in 0..ms {
        match seen.get(&x).copied().unwrap_or(0) {
            1 => {}
            0 => cert.fail("entries", format!("value {x} is missing"), Witness::Value(x)),
            c => cert.fail("entries", format!("value {x} appears {c} times"), cell_of(g, |v| v == x)),
        }
    }
    for &x in seen.keys() {
        if x < 0 || x >= ms {
            cert.fail("entries", format!("value {x} is outside [0, {}]", ms - 1), cell_of(g, |v| v == x));
        }
    }
    let c1 = s as i64 * (ms - 1) / 2;
    let c2 = k as i64 * (ms - 1) / 2;
    if (s as i64 * (ms - 1)) % 2 != 0 || (k as i64 * (ms - 1)) % 2 != 0 {
        cert.fail("constants", "magic constants are not integers".into(), Witness::Grid);
    }
    let mut sums = Certificate::new();
    check_sums(g, c1, c2, None, &mut sums);
    cert.absorb(sums, "mr.");
    cert
}

fn uniform_width(seq: &[Grid]) -> Result<usize> {
    let Some(first) = seq.first() else {
        return Ok(0);
    };
    for b in seq {
        if b.cols() != first.cols() {
            return Err(Error::WidthMismatch {
                expected: first.cols(),
                found: b.cols(),
            });
        }
        if b.rows() != 2 {
            return Err(Error::HeightMismatch {
                expected: 2,
                found: b.rows(),
            });
        }
    }
    if first.cols() % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "block width {} is odd",
            first.cols()
        )));
    }
    Ok(first.cols())
}

fn check_block_basics(i: usize, b: &Grid, cert: &mut Certificate) {
    if !b.is_shiftable() {
        cert.fail("shiftable", format!("block {} is not shiftable", i + 1), Witness::Block(i + 1));
    }
    let sums = b.row_sums();
    if sums.iter().any(|&x| x != 0) {
        cert.fail(
            "sum.row",
            format!("block {} has row sums {sums:?}", i + 1),
            Witness::Block(i + 1),
        );
    }
}

fn check_paired_columns(seq: &[Grid], cert: &mut Certificate) {
    let Some(first) = seq.first() else { return };
    let sigma: Vec<i64> = first.col_sums().iter().step_by(2).copied().collect();
    for (i, b) in seq.iter().enumerate() {
        let g = b.col_sums();
        for (j, pair) in g.chunks(2).enumerate() {
            if pair[0] != -pair[1] {
                cert.fail(
                    "columns.paired",
                    format!("block {}: columns {} and {} sum to {} and {}", i + 1, 2 * j + 1, 2 * j + 2, pair[0], pair[1]),
                    Witness::Block(i + 1),
                );
            } else if pair[0] != sigma[j] {
                cert.fail(
                    "columns.common",
                    format!("block {}: sigma_{} is {}, first block has {}", i + 1, j + 1, pair[0], sigma[j]),
                    Witness::Block(i + 1),
                );
            }
        }
    }
}

/// Shiftable `2 x 2b` blocks with zero row sums whose column sums come in
/// pairs `(sigma_i, -sigma_i)` shared by every block.
pub fn verify_blocchi(seq: &[Grid]) -> Result<Certificate> {
    uniform_width(seq)?;
    let mut cert = Certificate::new();
    for (i, b) in seq.iter().enumerate() {
        check_block_basics(i, b, &mut cert);
    }
    check_paired_columns(seq, &mut cert);
    Ok(cert)
}

/// Shiftable `2 x 2b` blocks with zero row sums sharing one column sum
/// vector whose odd-position and even-position entries each sum to zero.
pub fn verify_blocchi_old(seq: &[Grid]) -> Result<Certificate> {
    uniform_width(seq)?;
    let mut cert = Certificate::new();
    let Some(first) = seq.first() else {
        return Ok(cert);
    };
    let sigma = first.col_sums();
    let odd: i64 = sigma.iter().step_by(2).sum();
    let even: i64 = sigma.iter().skip(1).step_by(2).sum();
    if odd != 0 || even != 0 {
        cert.fail(
            "columns.alternating",
            format!("odd-position sums {odd}, even-position sums {even}"),
            Witness::Block(1),
        );
    }
    for (i, b) in seq.iter().enumerate() {
        check_block_basics(i, b, &mut cert);
        if b.col_sums() != sigma {
            cert.fail(
                "columns.common",
                format!("block {} column sums {:?} differ from {:?}", i + 1, b.col_sums(), sigma),
                Witness::Block(i + 1),
            );
        }
    }
    Ok(cert)
}

/// Only the paired column pattern, shared by every block.
pub fn verify_blocchi2(seq: &[Grid]) -> Result<Certificate> {
    uniform_width(seq)?;
    let mut cert = Certificate::new();
    check_paired_columns(seq, &mut cert);
    Ok(cert)
}

pub fn verify_nice_pair(p: &NicePair) -> Certificate {
    let mut cert = Certificate::new();
    let first: Vec<Grid> = p.first.iter().map(|b| b.grid.clone()).collect();
    let second: Vec<Grid> = p.second.iter().map(|b| b.grid.clone()).collect();
    match verify_blocchi(&first) {
        Ok(c) => cert.absorb(c, "first."),
        Err(e) => cert.fail("first.shape", e.to_string(), Witness::Grid),
    }
    match verify_blocchi_old(&second) {
        Ok(c) => cert.absorb(c, "second."),
        Err(e) => cert.fail("second.shape", e.to_string(), Witness::Grid),
    }
    if first.len() != second.len() {
        cert.fail(
            "length",
            format!("sequences have lengths {} and {}", first.len(), second.len()),
            Witness::Grid,
        );
    }
    if let (Some(a), Some(b)) = (first.first(), second.first()) {
        if a.cols() != b.cols() {
            cert.fail(
                "width",
                format!("block widths {} and {}", a.cols(), b.cols()),
                Witness::Grid,
            );
        }
    }
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        if a.entry_list() != b.entry_list() {
            cert.fail(
                "entries.match",
                format!("block {} has different entry lists in the two sequences", i + 1),
                Witness::Block(i + 1),
            );
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[i64]]) -> Grid {
        Grid::from_rows(r).unwrap()
    }

    #[test]
    fn sma_with_explicit_zero() {
        // 3x3, ms = 9 odd, so the values are -4..=4 with 0 included.
        let mut g = rows(&[&[4, -1, -3], &[-2, 3, -1], &[-2, -2, 4]]);
        assert!(!verify_sma(&g, 3, 3).ok);
        g = rows(&[&[1, -4, 3], &[3, 0, -3], &[-4, 4, 0]]);
        g.set_zero(2, 2).unwrap();
        assert!(!verify_sma(&g, 3, 3).ok);
        let mut ok = rows(&[&[-1, 4, -3], &[-3, 0, 3], &[4, -4, 0]]);
        ok.set_zero(2, 2).unwrap();
        ok.set_zero(3, 3).unwrap();
        // Two zeros: fails the once-each clause.
        assert!(verify_sma(&ok, 3, 3).has_clause("entries"));
    }

    #[test]
    fn mr_degenerate() {
        let mut g = Grid::new(1, 1);
        g.set_zero(1, 1).unwrap();
        assert!(verify_mr(&g, 1, 1).ok);
    }

    #[test]
    fn cyclic_rejects_subgroup_entries() {
        let p = HeffterParams::new(4, 4, 4, 4, 2, 2).unwrap();
        // ell = 2*16/(2*2)+1 = 9, so 9 lies in the subgroup.
        let g = rows(&[&[9, -9, 1, -1], &[1, -1, 9, -9], &[-9, 9, -1, 1], &[-1, 1, -9, 9]]);
        let c = verify_cyclic_heffter(&g, &p);
        assert_eq!(c.first_clause(), Some("subgroup"));
    }

    #[test]
    fn cap_on_violations() {
        let g = Grid::new(20, 20);
        let c = verify_sma(&g, 4, 4);
        assert_eq!(c.violations.len(), MAX_VIOLATIONS);
        assert!(c.total > MAX_VIOLATIONS);
    }

    #[test]
    fn blocchi_patterns() {
        let e = rows(&[&[1, -1, 3, -4, -3, 4], &[-2, 2, -1, 2, 3, -4]]);
        assert!(verify_blocchi(std::slice::from_ref(&e)).unwrap().ok);
        assert!(!verify_blocchi_old(std::slice::from_ref(&e)).unwrap().ok);
        let e2 = rows(&[&[1, 3, -1, -4, -3, 4], &[-2, -1, 2, 2, 3, -4]]);
        assert!(verify_blocchi_old(std::slice::from_ref(&e2)).unwrap().ok);
        assert!(!verify_blocchi(&[e2]).unwrap().ok);
        let narrow = rows(&[&[1, -1], &[-1, 1]]);
        assert!(verify_blocchi(&[e, narrow]).is_err());
    }
}
