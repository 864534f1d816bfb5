//! Bounded backtracking searches.
//!
//! These serve two purposes: an independent check on small constructed
//! arrays, and a stand-in for the seeds whose constructions live outside
//! this library (square signed magic arrays and multiplicity-1 nice pairs).

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nice_pairs::NicePair;
use crate::params::HeffterParams;
use crate::verify::{verify_integer_heffter, verify_sma};

/// Caps on node expansions and wall-clock time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_cap: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            time_cap: Duration::from_secs(30),
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, time_cap: Duration) -> Self {
        SearchBudget { max_nodes, time_cap }
    }

    /// Parses `NODES` or `NODES,SECONDS`; a missing time keeps the default.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("budget {text:?} is not NODES or NODES,SECONDS"));
        let mut parts = text.split(',').map(str::trim);
        let nodes: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let secs: f64 = match parts.next() {
            Some(s) => s.parse().map_err(|_| bad())?,
            None => SearchBudget::default().time_cap.as_secs_f64(),
        };
        if parts.next().is_some() || nodes == 0 || secs.is_nan() || secs <= 0.0 {
            return Err(bad());
        }
        Ok(SearchBudget::new(nodes, Duration::from_secs_f64(secs)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The whole (symmetry-reduced) space was explored without a solution.
    NotFound,
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }
}

struct Meter {
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    out: bool,
    /// A node count after which the current sub-search gives up without
    /// ending the whole search.
    soft_limit: u64,
    soft_out: bool,
}

impl Meter {
    fn new(b: &SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: b.max_nodes,
            deadline: Instant::now() + b.time_cap,
            out: false,
            soft_limit: u64::MAX,
            soft_out: false,
        }
    }

    /// Counts one node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.out || self.soft_out {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline) {
            self.out = true;
        }
        if self.nodes > self.soft_limit {
            self.soft_out = true;
        }
        !self.out && !self.soft_out
    }

    fn stopped(&self) -> bool {
        self.out || self.soft_out
    }

    /// Lets the next sub-search use at most `nodes` more nodes.
    fn allow(&mut self, nodes: u64) {
        self.soft_limit = self.nodes.saturating_add(nodes);
        self.soft_out = false;
    }
}

// ---------------------------------------------------------------------------
// Fill patterns and value search for full arrays.

/// Row `r` filled in `s` cyclically consecutive columns starting at `(r-1)s`.
fn cyclic_pattern(m: usize, n: usize, s: usize) -> Vec<Vec<usize>> {
    (0..m)
        .map(|r| {
            let mut cols: Vec<usize> = (0..s).map(|j| (r * s + j) % n).collect();
            cols.sort_unstable();
            cols
        })
        .collect()
}

/// Calls `visit` on every 0/1 pattern with `s` cells per row and `k` per
/// column, in lexicographic order; stops when `visit` returns false.
fn for_each_pattern(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[Vec<usize>], &mut Meter) -> bool,
) {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        r: usize,
        m: usize,
        n: usize,
        s: usize,
        k: usize,
        cap: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[Vec<usize>], &mut Meter) -> bool,
    ) -> bool {
        if r == m {
            return cap.iter().all(|&c| c == 0) && visit(rows, meter);
        }
        let mut chosen = Vec::with_capacity(s);
        choose(0, r, m, n, s, k, cap, &mut chosen, rows, meter, visit)
    }
    #[allow(clippy::too_many_arguments)]
    fn choose(
        from: usize,
        r: usize,
        m: usize,
        n: usize,
        s: usize,
        k: usize,
        cap: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[Vec<usize>], &mut Meter) -> bool,
    ) -> bool {
        if !meter.tick() {
            return false;
        }
        if chosen.len() == s {
            // Every column must still be completable by the remaining rows.
            let left = m - r - 1;
            if cap.iter().any(|&c| c > left) {
                return true;
            }
            rows.push(chosen.clone());
            let go = rec(r + 1, m, n, s, k, cap, rows, meter, visit);
            rows.pop();
            return go;
        }
        for c in from..n {
            if n - c < s - chosen.len() {
                break;
            }
            if cap[c] == 0 {
                continue;
            }
            cap[c] -= 1;
            chosen.push(c);
            let go = choose(c + 1, r, m, n, s, k, cap, chosen, rows, meter, visit);
            chosen.pop();
            cap[c] += 1;
            if !go {
                return false;
            }
        }
        true
    }
    let mut cap = vec![k; n];
    let mut rows = Vec::with_capacity(m);
    rec(0, m, n, s, k, &mut cap, &mut rows, meter, visit);
}

/// Signed values still available for placement.
#[derive(Clone)]
struct Pool {
    pos: Vec<u32>,
    neg: Vec<u32>,
    /// Remaining uses of each magnitude irrespective of sign.
    mag: Vec<u32>,
    zero: u32,
}

impl Pool {
    fn sma(ms: usize) -> Self {
        let top = ms / 2;
        Pool {
            pos: vec![1; top + 1],
            neg: vec![1; top + 1],
            mag: vec![2; top + 1],
            zero: (ms % 2) as u32,
        }
    }

    fn heffter(p: &HeffterParams) -> Self {
        let phi = p.support();
        let top = phi.max as usize;
        let mut pool = Pool {
            pos: vec![0; top + 1],
            neg: vec![0; top + 1],
            mag: vec![0; top + 1],
            zero: 0,
        };
        for x in phi.elements() {
            let c = phi.multiplicity(x) as u32;
            pool.pos[x as usize] = c;
            pool.neg[x as usize] = c;
            pool.mag[x as usize] = c;
        }
        pool
    }

    fn top(&self) -> usize {
        self.mag.len() - 1
    }

    fn available(&self, v: i64) -> bool {
        if v == 0 {
            return self.zero > 0;
        }
        let x = v.unsigned_abs() as usize;
        if x > self.top() || self.mag[x] == 0 {
            return false;
        }
        if v > 0 {
            self.pos[x] > 0
        } else {
            self.neg[x] > 0
        }
    }

    fn take(&mut self, v: i64) {
        if v == 0 {
            self.zero -= 1;
            return;
        }
        let x = v.unsigned_abs() as usize;
        self.mag[x] -= 1;
        if v > 0 {
            self.pos[x] -= 1;
        } else {
            self.neg[x] -= 1;
        }
    }

    fn give(&mut self, v: i64) {
        if v == 0 {
            self.zero += 1;
            return;
        }
        let x = v.unsigned_abs() as usize;
        self.mag[x] += 1;
        if v > 0 {
            self.pos[x] += 1;
        } else {
            self.neg[x] += 1;
        }
    }

    fn max_magnitude(&self) -> i64 {
        (1..=self.top()).rev().find(|&x| self.mag[x] > 0).unwrap_or(0) as i64
    }
}

/// Row-major value assignment on a fixed pattern with zero line sums.
struct ValueSearch<'a> {
    m: usize,
    n: usize,
    cells: Vec<(usize, usize)>,
    row_left: Vec<usize>,
    col_left: Vec<usize>,
    row_sum: Vec<i64>,
    col_sum: Vec<i64>,
    values: Vec<i64>,
    pool: Pool,
    meter: &'a mut Meter,
}

impl<'a> ValueSearch<'a> {
    fn new(m: usize, n: usize, pattern: &[Vec<usize>], pool: Pool, meter: &'a mut Meter) -> Self {
        let cells: Vec<(usize, usize)> = pattern
            .iter()
            .enumerate()
            .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
            .collect();
        let mut row_left = vec![0; m];
        let mut col_left = vec![0; n];
        for &(r, c) in &cells {
            row_left[r] += 1;
            col_left[c] += 1;
        }
        ValueSearch {
            m,
            n,
            values: vec![0; cells.len()],
            cells,
            row_left,
            col_left,
            row_sum: vec![0; m],
            col_sum: vec![0; n],
            pool,
            meter,
        }
    }

    /// Some(found) when the space under this pattern was settled, None when
    /// the budget ran out.
    fn run(&mut self) -> Option<bool> {
        let found = self.place(0);
        if self.meter.out && !found {
            None
        } else {
            Some(found)
        }
    }

    fn grid(&self) -> Grid {
        let mut g = Grid::new(self.m, self.n);
        for (&(r, c), &v) in self.cells.iter().zip(&self.values) {
            g.set_any(r + 1, c + 1, v).expect("cell in range");
        }
        g
    }

    fn feasible(&self, r: usize, c: usize) -> bool {
        let big = self.pool.max_magnitude();
        let ok = |sum: i64, left: usize| {
            if left == 0 {
                sum == 0
            } else {
                sum.abs() <= left as i64 * big
            }
        };
        ok(self.row_sum[r], self.row_left[r]) && ok(self.col_sum[c], self.col_left[c])
    }

    fn place(&mut self, i: usize) -> bool {
        if i == self.cells.len() {
            return true;
        }
        if !self.meter.tick() {
            return false;
        }
        let (r, c) = self.cells[i];
        let candidates: Vec<i64> = if self.row_left[r] == 1 {
            vec![-self.row_sum[r]]
        } else if self.col_left[c] == 1 {
            vec![-self.col_sum[c]]
        } else {
            let mut v = Vec::new();
            if self.pool.zero > 0 {
                v.push(0);
            }
            for x in 1..=self.pool.top() as i64 {
                v.push(x);
                v.push(-x);
            }
            v
        };
        for v in candidates {
            // Quotient by global negation: the first cell is never negative.
            if i == 0 && v < 0 {
                continue;
            }
            if !self.pool.available(v) {
                continue;
            }
            self.pool.take(v);
            self.values[i] = v;
            self.row_sum[r] += v;
            self.col_sum[c] += v;
            self.row_left[r] -= 1;
            self.col_left[c] -= 1;
            if self.feasible(r, c) && self.place(i + 1) {
                return true;
            }
            self.row_left[r] += 1;
            self.col_left[c] += 1;
            self.row_sum[r] -= v;
            self.col_sum[c] -= v;
            self.pool.give(v);
            if self.meter.out {
                return false;
            }
        }
        false
    }
}

/// Moves per annealing run before a restart from a fresh shuffle.
const ANNEAL_RUN: u64 = 200_000;
/// Share of the node budget the annealing stage may use.
const ANNEAL_SHARE: u64 = 4;

/// Simulated annealing over value placements on a fixed pattern.
///
/// Cost is the total absolute line sum; moves swap two cells and, when
/// `signs_free`, also negate one cell. Seeded, so results are repeatable.
/// Finding nothing proves nothing: only the exhaustive search may report
/// that no array exists.
fn anneal(
    m: usize,
    n: usize,
    pattern: &[Vec<usize>],
    mut values: Vec<i64>,
    signs_free: bool,
    meter: &mut Meter,
) -> Option<Grid> {
    let cells: Vec<(usize, usize)> = pattern
        .iter()
        .enumerate()
        .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
        .collect();
    if cells.len() != values.len() || cells.len() < 2 {
        return None;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_4e55);
    let top = values.iter().map(|v| v.abs()).max().unwrap_or(1).max(1) as f64;
    while meter.tick() {
        values.shuffle(&mut rng);
        let mut rows = vec![0i64; m];
        let mut cols = vec![0i64; n];
        for (&(r, c), &v) in cells.iter().zip(&values) {
            rows[r] += v;
            cols[c] += v;
        }
        let mut cost: i64 = rows.iter().chain(&cols).map(|x| x.abs()).sum();
        for step in 0..ANNEAL_RUN {
            if cost == 0 {
                let mut g = Grid::new(m, n);
                for (&(r, c), &v) in cells.iter().zip(&values) {
                    g.set_any(r + 1, c + 1, v).ok()?;
                }
                return Some(g);
            }
            if !meter.tick() {
                return None;
            }
            let temp = top * (1.0 - step as f64 / ANNEAL_RUN as f64).powi(3) + 0.05;
            let a = rng.gen_range(0..cells.len());
            let (ra, ca) = cells[a];
            // Changes to at most two rows and two columns.
            let flip = signs_free && rng.gen_bool(0.2);
            let (b, moves): (usize, [(bool, usize, i64); 4]) = if flip {
                let d = -2 * values[a];
                (a, [(true, ra, d), (false, ca, d), (true, ra, 0), (false, ca, 0)])
            } else {
                let b = rng.gen_range(0..cells.len());
                let (rb, cb) = cells[b];
                let d = values[b] - values[a];
                (b, [(true, ra, d), (false, ca, d), (true, rb, -d), (false, cb, -d)])
            };
            let line = |rows: &[i64], cols: &[i64], is_row: bool, i: usize| if is_row { rows[i] } else { cols[i] };
            let mut delta = 0;
            let mut touched: Vec<(bool, usize, i64)> = Vec::with_capacity(4);
            for &(is_row, i, d) in &moves {
                if let Some(t) = touched.iter_mut().find(|t| t.0 == is_row && t.1 == i) {
                    t.2 += d;
                } else {
                    touched.push((is_row, i, d));
                }
            }
            for &(is_row, i, d) in &touched {
                let x = line(&rows, &cols, is_row, i);
                delta += (x + d).abs() - x.abs();
            }
            if delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temp).exp() {
                for &(is_row, i, d) in &touched {
                    if is_row {
                        rows[i] += d;
                    } else {
                        cols[i] += d;
                    }
                }
                if flip {
                    values[a] = -values[a];
                } else {
                    values.swap(a, b);
                }
                cost += delta;
            }
        }
    }
    None
}

impl Pool {
    /// One signed value per use, as a starting point for annealing.
    fn as_values(&self) -> Vec<i64> {
        let mut out = vec![0; self.zero as usize];
        for x in 1..=self.top() {
            let q = self.mag[x];
            // Magnitudes whose signs are free (pos + neg > mag) get a
            // balanced start; fixed-sign pools keep their split.
            let plus = if self.pos[x] + self.neg[x] > q { q / 2 + q % 2 } else { self.pos[x] };
            out.extend(std::iter::repeat_n(x as i64, plus as usize));
            out.extend(std::iter::repeat_n(-(x as i64), (q - plus) as usize));
        }
        out
    }

    fn signs_free(&self) -> bool {
        (1..=self.top()).any(|x| self.pos[x] + self.neg[x] > self.mag[x])
    }
}

/// Tries the cyclic pattern, then every other pattern.
fn search_patterns(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    pool: Pool,
    budget: &SearchBudget,
    accept: &dyn Fn(&Grid) -> bool,
) -> SearchOutcome<Grid> {
    if m == 0 || n == 0 || s > n || k > m || m * s != n * k {
        return SearchOutcome::NotFound;
    }
    let mut meter = Meter::new(budget);
    let cyclic = cyclic_pattern(m, n, s);
    meter.allow(budget.max_nodes / ANNEAL_SHARE);
    if let Some(g) = anneal(m, n, &cyclic, pool.as_values(), pool.signs_free(), &mut meter) {
        if accept(&g) {
            return SearchOutcome::Found(g);
        }
    }
    meter.allow(u64::MAX);
    if meter.out {
        return SearchOutcome::Exhausted;
    }
    let mut result: Option<Grid> = None;
    {
        let mut vs = ValueSearch::new(m, n, &cyclic, pool.clone(), &mut meter);
        if vs.run() == Some(true) {
            result = Some(vs.grid());
        }
    }
    if let Some(g) = result {
        return if accept(&g) {
            SearchOutcome::Found(g)
        } else {
            SearchOutcome::Exhausted
        };
    }
    if meter.out {
        return SearchOutcome::Exhausted;
    }
    let mut exhausted = false;
    for_each_pattern(m, n, s, k, &mut meter, &mut |pattern, meter| {
        if pattern == cyclic.as_slice() {
            return true;
        }
        let mut vs = ValueSearch::new(m, n, pattern, pool.clone(), meter);
        match vs.run() {
            Some(true) => {
                result = Some(vs.grid());
                false
            }
            Some(false) => true,
            None => {
                exhausted = true;
                false
            }
        }
    });
    match result {
        Some(g) if accept(&g) => SearchOutcome::Found(g),
        Some(_) => SearchOutcome::Exhausted,
        None if exhausted || meter.out => SearchOutcome::Exhausted,
        None => SearchOutcome::NotFound,
    }
}

// ---------------------------------------------------------------------------
// Signed magic arrays.

/// Searches for an SMA(m,n;s,k).
///
/// Square arrays with `s = k` even are first tried in the paired-diagonal
/// subspace: diagonals `2i-1` and `2i` carry `x` and `-x` in each row, which
/// makes every row sum vanish and reduces the column condition to finding an
/// `(s/2) x n` array on `[1, ns/2]` with constant column sums.
pub fn search_sma(m: usize, n: usize, s: usize, k: usize, budget: &SearchBudget) -> SearchOutcome<Grid> {
    if m == n && s == k && s >= 2 && s.is_multiple_of(2) && s <= n {
        if let Some(g) = paired_diagonal_sma(n, s) {
            if verify_sma(&g, s, k).ok {
                return SearchOutcome::Found(g);
            }
        }
    }
    search_patterns(m, n, s, k, Pool::sma(m * s), budget, &|g| verify_sma(g, s, k).ok)
}

/// Rows of an `h x n` array using `[1, hn]` once each with constant column
/// sums, when one exists among the forms tried.
fn constant_column_rows(h: usize, n: usize) -> Option<Vec<Vec<i64>>> {
    let n_i = n as i64;
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(h);
    let mut base = 0i64;
    if h % 2 == 1 {
        if n.is_multiple_of(2) || h < 3 {
            return None;
        }
        // Three rows: 1..n, a cyclic shift of n+1..2n, and the complement.
        let target = 3 * (3 * n_i + 1) / 2;
        let want: HashSet<i64> = (2 * n_i + 1..=3 * n_i).collect();
        let shift = (0..n_i).find(|&sh| {
            let third: HashSet<i64> = (0..n_i)
                .map(|j| target - (j + 1) - (n_i + 1 + (j + sh) % n_i))
                .collect();
            third == want
        })?;
        let a: Vec<i64> = (0..n_i).map(|j| j + 1).collect();
        let b: Vec<i64> = (0..n_i).map(|j| n_i + 1 + (j + shift) % n_i).collect();
        let c: Vec<i64> = (0..n).map(|j| target - a[j] - b[j]).collect();
        rows.extend([a, b, c]);
        base = 3 * n_i;
    }
    while rows.len() < h {
        rows.push((0..n_i).map(|j| base + j + 1).collect());
        rows.push((0..n_i).map(|j| base + 2 * n_i - j).collect());
        base += 2 * n_i;
    }
    Some(rows)
}

fn paired_diagonal_sma(n: usize, s: usize) -> Option<Grid> {
    let h = s / 2;
    let y = constant_column_rows(h, n)?;
    let mut g = Grid::new(n, n);
    for (i, row) in y.iter().enumerate() {
        for r in 0..n {
            // x_r of pair i is y_{r + 2i + 1} (0-based pair index i).
            let x = row[(r + 2 * i + 1) % n];
            let c1 = (r + 2 * i) % n;
            let c2 = (r + 2 * i + 1) % n;
            g.set(r + 1, c1 + 1, x).ok()?;
            g.set(r + 1, c2 + 1, -x).ok()?;
        }
    }
    Some(g)
}

// ---------------------------------------------------------------------------
// Integer Heffter arrays.

pub fn search_heffter(p: &HeffterParams, budget: &SearchBudget) -> SearchOutcome<Grid> {
    let q = *p;
    search_patterns(p.m, p.n, p.s, p.k, Pool::heffter(p), budget, &move |g| {
        verify_integer_heffter(g, &q).ok
    })
}

// ---------------------------------------------------------------------------
// Multiplicity-1 nice pairs.

/// A column holding `lo` and `lo + delta` with opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Domino {
    lo: i64,
    delta: i64,
}

/// One block's worth of placed dominoes: `(domino, role_a, top_is_hi)`,
/// listed unit by unit with the `a` column first. Role `a` columns hold
/// `+hi, -lo`; role `b` columns hold `-hi, +lo`.
type Layout = Vec<(Domino, bool, bool)>;

/// A block as `(top, bottom)` columns.
type Columns = Vec<(i64, i64)>;

/// Both arrangements of one block.
#[derive(Debug, Clone)]
struct BlockSolution {
    first: Columns,
    second: Columns,
}

/// Alternative second-sequence column-sum multisets offered by a block.
const SECOND_TRIES: usize = 8;
/// Largest column sum tried when rearranging a block for the second sequence.
const SECOND_GAP: i64 = 8;
/// Complete matchings examined per block before backtracking.
const LEAF_LIMIT: usize = 256;
/// Largest column sum used by the first sequence.
const PATTERN_MAX: i64 = 8;
/// Nodes granted to each pattern on the first pass.
const PATTERN_QUICK_NODES: u64 = 20_000;

/// Searches for a nice pair of `a/2` blocks of size `2 x c`, every support
/// element used once, with support `[1, ac + u/2] \ {j rho : j <= u/2}` where
/// `rho = 2ac/u + 1`.
///
/// Blocks are filled one at a time from the smallest unused support
/// elements. The first sequence pairs elements into columns whose sums
/// follow a fixed pattern `(s_1, -s_1, ..., s_h, -s_h)`. When the `s_i` can
/// be signed to sum to zero, the second sequence swaps columns inside units;
/// otherwise each block is rearranged so that all blocks share one multiset
/// of column sums splitting into two zero-sum halves.
///
/// The search is incomplete: failure is reported as an exhausted budget,
/// never as non-existence.
pub fn search_nice_pair(a: usize, c: usize, u: usize, budget: &SearchBudget) -> Result<NicePair> {
    if a < 2 || !a.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("a={a} must be a positive even integer")));
    }
    if c < 4 || !c.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "block width c={c} must be even and at least 4"
        )));
    }
    if u == 0 || !(2 * a * c).is_multiple_of(u) {
        return Err(Error::InvalidParams(format!("u={u} must divide 2ac={}", 2 * a * c)));
    }
    let rho = (2 * a * c / u) as i64 + 1;
    let top = (a * c + u / 2) as i64;
    let half = (u / 2) as i64;
    let mut present = vec![false; top as usize + 1];
    for x in (1..=top).filter(|&x| !(x % rho == 0 && x / rho <= half)) {
        present[x as usize] = true;
    }

    let mut meter = Meter::new(budget);
    // A quick pass over all patterns, then an unrestricted one.
    let passes = [PATTERN_QUICK_NODES, u64::MAX];
    for (pattern, cap) in passes.iter().flat_map(|&cap| sigma_patterns(c / 2).into_iter().map(move |p| (p, cap))) {
        meter.allow(cap);
        let mut search = BlockSearch {
            present: present.clone(),
            blocks: a / 2,
            width: c,
            signs: zero_signing(&pattern),
            pattern,
            second_sums: None,
            solved: Vec::with_capacity(a / 2),
        };
        if search.fill(&mut meter) {
            return Ok(search.into_pair());
        }
        if meter.out {
            break;
        }
    }
    Err(Error::Exhausted(format!(
        "no multiplicity-1 nice pair found for a={a}, c={c}, u={u} within the budget"
    )))
}

struct BlockSearch {
    /// Support elements not yet placed, indexed by value.
    present: Vec<bool>,
    blocks: usize,
    width: usize,
    pattern: Vec<i64>,
    signs: Option<Vec<i64>>,
    /// Sorted second-sequence column sums, fixed by the first block when the
    /// pattern cannot be signed to zero.
    second_sums: Option<Vec<i64>>,
    solved: Vec<BlockSolution>,
}

impl BlockSearch {
    fn fill(&mut self, meter: &mut Meter) -> bool {
        if self.solved.len() == self.blocks {
            return !self.present.iter().any(|&p| p);
        }
        let mut need: BTreeMap<i64, usize> = BTreeMap::new();
        for &v in &self.pattern {
            *need.entry(v).or_default() += 2;
        }
        let mut dominoes = Vec::with_capacity(self.width);
        let mut leaves = 0;
        self.grow(&mut need, &mut dominoes, &mut leaves, meter)
    }

    /// Adds dominoes to the current block, always covering the smallest
    /// unused element, then recurses into the next block.
    fn grow(
        &mut self,
        need: &mut BTreeMap<i64, usize>,
        dominoes: &mut Vec<Domino>,
        leaves: &mut usize,
        meter: &mut Meter,
    ) -> bool {
        if !meter.tick() || *leaves >= LEAF_LIMIT {
            return false;
        }
        if dominoes.len() == self.width {
            *leaves += 1;
            return self.close_block(dominoes, meter);
        }
        let Some(x) = self.present.iter().position(|&p| p) else {
            return false;
        };
        self.present[x] = false;
        let deltas: Vec<i64> = need.iter().filter(|(_, &k)| k > 0).map(|(&d, _)| d).collect();
        let mut done = false;
        for d in deltas {
            let y = x + d as usize;
            if y >= self.present.len() || !self.present[y] {
                continue;
            }
            self.present[y] = false;
            *need.get_mut(&d).unwrap() -= 1;
            dominoes.push(Domino { lo: x as i64, delta: d });
            done = self.grow(need, dominoes, leaves, meter);
            dominoes.pop();
            *need.get_mut(&d).unwrap() += 1;
            self.present[y] = true;
            if done || meter.stopped() {
                break;
            }
        }
        self.present[x] = true;
        done
    }

    fn close_block(&mut self, dominoes: &[Domino], meter: &mut Meter) -> bool {
        let Some(layout) = balance(dominoes, &self.pattern, meter) else {
            return false;
        };
        let first = layout_columns(&layout);
        if let Some(signs) = &self.signs {
            let mut second = first.clone();
            for (i, &o) in signs.iter().enumerate() {
                if o < 0 {
                    second.swap(2 * i, 2 * i + 1);
                }
            }
            return self.descend(BlockSolution { first, second }, meter);
        }
        let fixed = self.second_sums.clone();
        let mut options: Vec<(Columns, Vec<i64>)> = Vec::new();
        let limit = if fixed.is_some() { 1 } else { SECOND_TRIES };
        rearrangements(&first, fixed.as_deref(), meter, &mut |second, sums| {
            if !options.iter().any(|(_, s)| s == sums) {
                options.push((second.clone(), sums.to_vec()));
            }
            options.len() >= limit
        });
        for (second, sums) in options {
            if fixed.is_none() {
                self.second_sums = Some(sums);
            }
            let sol = BlockSolution {
                first: first.clone(),
                second,
            };
            if self.descend(sol, meter) {
                return true;
            }
            if fixed.is_none() {
                self.second_sums = None;
            }
            if meter.stopped() {
                break;
            }
        }
        false
    }

    fn descend(&mut self, sol: BlockSolution, meter: &mut Meter) -> bool {
        self.solved.push(sol);
        if self.fill(meter) {
            return true;
        }
        self.solved.pop();
        false
    }

    fn into_pair(self) -> NicePair {
        let place = |cols: &Columns| -> Block {
            let mut g = Grid::new(2, cols.len());
            for (j, &(top, bottom)) in cols.iter().enumerate() {
                g.set(1, j + 1, top).expect("nonzero entry");
                g.set(2, j + 1, bottom).expect("nonzero entry");
            }
            Block::new(g)
        };
        NicePair {
            first: self.solved.iter().map(|s| place(&s.first)).collect(),
            second: self.solved.iter().map(|s| place(&s.second)).collect(),
        }
    }
}

/// Candidate column-sum magnitudes, one per unit, in the order tried.
fn sigma_patterns(h: usize) -> Vec<Vec<i64>> {
    fn rec(h: usize, min: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == h {
            out.push(cur.clone());
            return;
        }
        for v in min..=max {
            cur.push(v);
            rec(h, v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(h, 1, PATTERN_MAX, &mut Vec::with_capacity(h), &mut out);
    out.sort_by_key(|p| (p.iter().copied().max(), p.iter().rev().copied().collect::<Vec<_>>()));
    out
}

/// Signs `o_i` with `sum o_i * sigma_i = 0`, if any.
fn zero_signing(sigma: &[i64]) -> Option<Vec<i64>> {
    fn rec(i: usize, sigma: &[i64], sum: i64, signs: &mut Vec<i64>) -> bool {
        if i == sigma.len() {
            return sum == 0;
        }
        let rest: i64 = sigma[i..].iter().sum();
        if sum.abs() > rest {
            return false;
        }
        for o in [1, -1] {
            signs.push(o);
            if rec(i + 1, sigma, sum + o * sigma[i], signs) {
                return true;
            }
            signs.pop();
        }
        false
    }
    let mut signs = Vec::with_capacity(sigma.len());
    rec(0, sigma, 0, &mut signs).then_some(signs)
}

/// A subset of `size` indices whose weights sum to `target`, as a mask.
///
/// Decided by a table of reachable sums per suffix and subset size, kept as
/// bitsets, then read back greedily.
fn subset_with_sum(weights: &[i64], size: usize, target: i64, meter: &mut Meter) -> Option<Vec<bool>> {
    let n = weights.len();
    if size > n || !meter.tick() {
        return None;
    }
    // Shift every weight to be non-negative; a subset of `size` items then
    // has its sum raised by `size * shift`.
    let shift = weights.iter().copied().min().unwrap_or(0).min(0).abs();
    let w: Vec<usize> = weights.iter().map(|&x| (x + shift) as usize).collect();
    let goal = target + size as i64 * shift;
    let span: usize = w.iter().sum::<usize>() + 1;
    if goal < 0 || goal as usize >= span {
        return None;
    }
    let goal = goal as usize;
    let words = span.div_ceil(64);
    // reach[i][k]: sums of exactly k items among i..n.
    let mut reach = vec![vec![vec![0u64; words]; size + 1]; n + 1];
    reach[n][0][0] = 1;
    for i in (0..n).rev() {
        let (head, tail) = reach.split_at_mut(i + 1);
        let next = &tail[0];
        let cur = &mut head[i];
        for k in 0..=size {
            cur[k].copy_from_slice(&next[k]);
            if k > 0 {
                or_shifted(&mut cur[k], &next[k - 1], w[i]);
            }
        }
    }
    let has = |bits: &[u64], x: usize| bits[x / 64] >> (x % 64) & 1 == 1;
    if !has(&reach[0][size], goal) {
        return None;
    }
    let mut pick = vec![false; n];
    let (mut k, mut left) = (size, goal);
    for i in 0..n {
        if k > 0 && left >= w[i] && has(&reach[i + 1][k - 1], left - w[i]) {
            pick[i] = true;
            k -= 1;
            left -= w[i];
        }
    }
    Some(pick)
}

/// `dst |= src << by` on little-endian bitsets of equal length.
fn or_shifted(dst: &mut [u64], src: &[u64], by: usize) {
    let (words, bits) = (by / 64, by % 64);
    for j in (words..dst.len()).rev() {
        let lo = src[j - words] << bits;
        let carry = if bits > 0 && j > words { src[j - words - 1] >> (64 - bits) } else { 0 };
        dst[j] |= lo | carry;
    }
}

fn layout_columns(layout: &Layout) -> Columns {
    layout
        .iter()
        .map(|&(d, role_a, top_hi)| {
            let hi = d.lo + d.delta;
            let (pos, neg) = if role_a { (hi, -d.lo) } else { (d.lo, -hi) };
            match (role_a, top_hi) {
                (true, true) | (false, false) => (pos, neg),
                _ => (neg, pos),
            }
        })
        .collect()
}

/// Chooses which dominoes put their positive entry in the first row and a
/// role for each domino. The first row sums to zero exactly when the chosen
/// half of the dominoes has `lo + hi` totalling half the run's sum; roles
/// only need to split each gap class evenly.
fn balance(dominoes: &[Domino], pattern: &[i64], meter: &mut Meter) -> Option<Layout> {
    let weights: Vec<i64> = dominoes.iter().map(|d| 2 * d.lo + d.delta).collect();
    let total: i64 = weights.iter().sum();
    if total % 2 != 0 {
        return None;
    }
    let top_pos = subset_with_sum(&weights, dominoes.len() / 2, total / 2, meter)?;
    let mut by_gap: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, d) in dominoes.iter().enumerate() {
        by_gap.entry(d.delta).or_default().push(i);
    }
    let mut layout = Layout::with_capacity(dominoes.len());
    for &v in pattern {
        let class = by_gap.get_mut(&v)?;
        let ib = class.pop()?;
        let ia = class.pop()?;
        // Role `a` has `+hi` on top when positive; role `b` has `+lo`.
        layout.push((dominoes[ia], true, top_pos[ia]));
        layout.push((dominoes[ib], false, !top_pos[ib]));
    }
    Some(layout)
}


/// Rearranges a block's signed entries into new columns, each pairing one
/// positive with one negative entry, with a balanced first row. With
/// `target` set, the sorted column sums must equal it; otherwise they must
/// split into two zero-sum halves. Visited columns are ordered so that the
/// odd and even positions each sum to zero.
fn rearrangements(
    block: &Columns,
    target: Option<&[i64]>,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&Columns, &[i64]) -> bool,
) {
    let mut pos: Vec<i64> = Vec::new();
    let mut neg: Vec<i64> = Vec::new();
    for &(x, y) in block {
        for v in [x, y] {
            if v > 0 {
                pos.push(v);
            } else {
                neg.push(-v);
            }
        }
    }
    pos.sort_unstable();
    neg.sort_unstable();
    let mut need: BTreeMap<i64, usize> = BTreeMap::new();
    if let Some(t) = target {
        for &v in t {
            *need.entry(v).or_default() += 1;
        }
    }
    let mut used = vec![false; neg.len()];
    let mut pairs: Vec<(i64, i64)> = Vec::with_capacity(pos.len());

    struct Ctx<'a> {
        pos: &'a [i64],
        neg: &'a [i64],
        fixed: bool,
        leaves: std::cell::Cell<usize>,
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        ctx: &Ctx,
        used: &mut Vec<bool>,
        need: &mut BTreeMap<i64, usize>,
        pairs: &mut Vec<(i64, i64)>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&Columns, &[i64]) -> bool,
    ) -> bool {
        if !meter.tick() {
            return true;
        }
        if i == ctx.pos.len() {
            ctx.leaves.set(ctx.leaves.get() + 1);
            return finish(pairs, meter, visit) || ctx.leaves.get() >= LEAF_LIMIT;
        }
        let p = ctx.pos[i];
        for j in 0..ctx.neg.len() {
            if used[j] || (j > 0 && ctx.neg[j] == ctx.neg[j - 1] && !used[j - 1]) {
                continue;
            }
            let q = ctx.neg[j];
            let sum = p - q;
            if ctx.fixed {
                match need.get_mut(&sum) {
                    Some(c) if *c > 0 => *c -= 1,
                    _ => continue,
                }
            } else if sum.abs() > SECOND_GAP {
                continue;
            }
            used[j] = true;
            pairs.push((p, q));
            let stop = rec(i + 1, ctx, used, need, pairs, meter, visit);
            pairs.pop();
            used[j] = false;
            if ctx.fixed {
                *need.get_mut(&sum).unwrap() += 1;
            }
            if stop {
                return true;
            }
        }
        false
    }

    fn finish(pairs: &[(i64, i64)], meter: &mut Meter, visit: &mut dyn FnMut(&Columns, &[i64]) -> bool) -> bool {
        let h = pairs.len() / 2;
        let mut sums: Vec<i64> = pairs.iter().map(|&(p, q)| p - q).collect();
        sums.sort_unstable();
        let Some(odd) = subset_with_sum(&sums, h, 0, meter) else {
            return false;
        };
        let weights: Vec<i64> = pairs.iter().map(|&(p, q)| p + q).collect();
        let total: i64 = weights.iter().sum();
        let Some(top_pos) = subset_with_sum(&weights, h, total / 2, meter) else {
            return false;
        };
        // Position of each column sum: the chosen half at odd positions.
        let odd_sums: Vec<i64> = sums.iter().zip(&odd).filter(|(_, &o)| o).map(|(&s, _)| s).collect();
        let even_sums: Vec<i64> = sums.iter().zip(&odd).filter(|(_, &o)| !o).map(|(&s, _)| s).collect();
        let mut slots: Vec<Option<(i64, i64)>> = vec![None; pairs.len()];
        let mut placed = vec![false; pairs.len()];
        for (k, &s) in odd_sums.iter().chain(&even_sums).enumerate() {
            let slot = if k < h { 2 * k } else { 2 * (k - h) + 1 };
            let j = (0..pairs.len())
                .find(|&j| !placed[j] && pairs[j].0 - pairs[j].1 == s)
                .expect("every sum has a column");
            placed[j] = true;
            let (p, q) = pairs[j];
            slots[slot] = Some(if top_pos[j] { (p, -q) } else { (-q, p) });
        }
        let columns: Columns = slots.into_iter().map(|c| c.expect("filled")).collect();
        visit(&columns, &sums)
    }

    let ctx = Ctx {
        pos: &pos,
        neg: &neg,
        fixed: target.is_some(),
        leaves: std::cell::Cell::new(0),
    };
    rec(0, &ctx, &mut used, &mut need, &mut pairs, meter, visit);
}
