//! Nice pairs of `2 x s` block sequences for the `s = 2 (mod 4)` family.
//!
//! A nice pair `(first, second)` has `first` satisfying the paired-column
//! condition, `second` the alternating-column condition, and matching entry
//! lists block by block.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::blocks::{juxtapose, family_blocks, repeat, Block, Family};
use crate::error::{Error, Result};
use crate::oracle::{search_nice_pair, SearchBudget};
use crate::params::HeffterParams;

/// `lambda = lambda1 * lambda2` with `lambda1 | m/2` and `lambda2 | 2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorization {
    pub lambda1: usize,
    pub lambda2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicePair {
    pub first: Vec<Block>,
    pub second: Vec<Block>,
}

impl NicePair {
    /// The pair `(B, B)`.
    pub fn twin(seq: Vec<Block>) -> Self {
        NicePair {
            first: seq.clone(),
            second: seq,
        }
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// Both sequences repeated `n` times.
    pub fn repeated(&self, n: usize) -> NicePair {
        NicePair {
            first: repeat(n, &self.first),
            second: repeat(n, &self.second),
        }
    }

    /// Every block replaced by `n` side-by-side copies of itself.
    pub fn widened(&self, n: usize) -> Result<NicePair> {
        let widen = |seq: &[Block]| -> Result<Vec<Block>> {
            seq.iter().map(|b| juxtapose(&vec![b.clone(); n])).collect()
        };
        Ok(NicePair {
            first: widen(&self.first)?,
            second: widen(&self.second)?,
        })
    }
}

/// All valid factorizations, in the order they are tried.
///
/// Even `lambda2` other than 2 comes first (smallest first), then
/// `lambda2 = s/2`, then `lambda2 = 2`, then the remaining odd values,
/// which need the search-backed builder.
pub fn factorizations(lambda: usize, m: usize, s: usize) -> Vec<Factorization> {
    let mut all: Vec<Factorization> = (1..=lambda)
        .filter(|l1| lambda.is_multiple_of(*l1))
        .map(|l1| Factorization {
            lambda1: l1,
            lambda2: lambda / l1,
        })
        .filter(|f| m.is_multiple_of(2) && (m / 2).is_multiple_of(f.lambda1) && (2 * s).is_multiple_of(f.lambda2))
        .collect();
    let class = |f: &Factorization| {
        let l2 = f.lambda2;
        if l2.is_multiple_of(2) && l2 != 2 {
            0
        } else if 2 * l2 == s {
            1
        } else if l2 == 2 {
            2
        } else {
            3
        }
    };
    all.sort_by_key(|f| (class(f), f.lambda2));
    all
}

pub fn choose_factorization(lambda: usize, m: usize, s: usize) -> Result<Factorization> {
    factorizations(lambda, m, s).into_iter().next().ok_or_else(|| {
        Error::Unsupported(format!(
            "no factorization of lambda={lambda} with lambda1 | {} and lambda2 | {}",
            m / 2,
            2 * s
        ))
    })
}

/// Shared arithmetic of a nice-pair request.
#[derive(Debug, Clone, Copy)]
struct Request {
    m: i64,
    s: i64,
    lambda1: i64,
    lambda2: i64,
    t: i64,
    ell: i64,
    /// Number of blocks, `m / (2 lambda1)`.
    len: usize,
}

impl Request {
    fn new(m: usize, s: usize, lambda1: usize, lambda2: usize, t: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if s < 6 || s % 4 != 2 {
            return bad(format!("row length s={s} must be 2 mod 4 and at least 6"));
        }
        if !m.is_multiple_of(2) || lambda1 == 0 || !(m / 2).is_multiple_of(lambda1) {
            return bad(format!("lambda1={lambda1} must divide m/2 with m={m} even"));
        }
        if lambda2 == 0 || !(2 * s).is_multiple_of(lambda2) {
            return bad(format!("lambda2={lambda2} must divide 2s={}", 2 * s));
        }
        let lambda = lambda1 * lambda2;
        if !(m * s).is_multiple_of(lambda) {
            return bad(format!("lambda={lambda} must divide ms={}", m * s));
        }
        let q = 2 * m * s / lambda;
        if t == 0 || !q.is_multiple_of(t) {
            return bad(format!("t={t} must divide 2ms/lambda={q}"));
        }
        Ok(Request {
            m: m as i64,
            s: s as i64,
            lambda1: lambda1 as i64,
            lambda2: lambda2 as i64,
            t: t as i64,
            ell: (q / t) as i64 + 1,
            len: m / (2 * lambda1),
        })
    }

    fn phi(&self) -> Vec<i64> {
        phi_elements(self.t * self.ell / 2, self.ell, self.t / 2)
    }

    fn hypothesis(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{what} (m={}, s={}, lambda1={}, lambda2={}, t={}, ell={})",
                self.m, self.s, self.lambda1, self.lambda2, self.t, self.ell
            )))
        }
    }

    /// Checks length, width, multiplicity and support before a pair leaves
    /// this module.
    fn check(&self, pair: &NicePair) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        for seq in [&pair.first, &pair.second] {
            if seq.len() != self.len {
                return fail(format!("pair has length {}, expected {}", seq.len(), self.len));
            }
            if let Some(b) = seq.iter().find(|b| b.width() as i64 != self.s) {
                return fail(format!("block of width {} in a width-{} pair", b.width(), self.s));
            }
            if let Some(b) = seq.iter().find(|b| b.mu != Some(self.lambda2 as usize)) {
                return fail(format!("block with multiplicity {:?}, expected {}", b.mu, self.lambda2));
            }
            let mut seen = BTreeSet::new();
            for b in seq.iter() {
                for x in b.support() {
                    if !seen.insert(x) {
                        return fail(format!("support element {x} appears in two blocks"));
                    }
                }
            }
            if seen.into_iter().collect::<Vec<_>>() != self.phi() {
                return fail("pair support differs from the required support".into());
            }
        }
        Ok(())
    }
}

/// `[1, max]` without the first `excluded` multiples of `ell`.
fn phi_elements(max: i64, ell: i64, excluded: i64) -> Vec<i64> {
    (1..=max)
        .filter(|&x| !(x % ell == 0 && x / ell <= excluded))
        .collect()
}

/// A sequence described as `(template index, shift)` pairs.
type Plan = Vec<(usize, i64)>;

fn realize(plan: &Plan, templates: &[&Block]) -> Result<Vec<Block>> {
    plan.iter().map(|&(i, x)| templates[i].shift(x)).collect()
}

fn shifted(plan: &Plan, x: i64) -> Plan {
    plan.iter().map(|&(i, y)| (i, y + x)).collect()
}

/// Groups every `q` consecutive blocks side by side.
fn group(seq: &[Block], q: usize) -> Result<Vec<Block>> {
    seq.chunks(q).map(juxtapose).collect()
}

fn padded(head: &Block, filler: &Block, copies: i64) -> Result<Block> {
    let mut parts = vec![head.clone()];
    parts.extend(std::iter::repeat_n(filler.clone(), copies.max(0) as usize));
    juxtapose(&parts)
}

/// Multiplicity `s/2`.
pub fn nice_pair_s_half(m: usize, s: usize, lambda1: usize, t: usize) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, s / 2, t)?;
    let (ell, t) = (req.ell, req.t);
    let fill = (req.s - 6) / 4;
    let blocks = family_blocks(Family::HalfWidth { ell })?;
    let pair = if ell % 2 == 0 {
        req.hypothesis(t % 8 == 0, "even ell needs t = 0 mod 8")?;
        let k = padded(&blocks["L"], &blocks["H"], fill)?;
        let run: Plan = (0..=ell - 2).map(|i| (0, i)).collect();
        let plan: Plan = (0..t / 8).flat_map(|i| shifted(&run, 4 * i * ell)).collect();
        NicePair::twin(realize(&plan, &[&k])?)
    } else {
        let b = padded(&blocks["E"], &blocks["A"], fill)?;
        let b2 = padded(&blocks["E'"], &blocks["A"], fill)?;
        let c = padded(&blocks["G"], &blocks["F"], fill)?;
        let c2 = padded(&blocks["G'"], &blocks["F"], fill)?;
        let plan: Plan = if ell % 4 == 1 {
            let run: Plan = (0..(ell - 1) / 4).map(|i| (0, 4 * i)).collect();
            if t % 2 == 0 {
                (0..t / 2).flat_map(|i| shifted(&run, i * ell)).collect()
            } else {
                req.hypothesis(ell % 8 == 1, "odd t needs ell = 1 mod 8")?;
                let tail: Plan = (0..=(ell - 9) / 8).map(|i| (0, 4 * i)).collect();
                let mut plan: Plan = (0..=(t - 3) / 2).flat_map(|i| shifted(&run, i * ell)).collect();
                plan.extend(shifted(&tail, (t - 1) / 2 * ell));
                plan
            }
        } else {
            req.hypothesis(t % 4 == 0, "ell = 3 mod 4 needs t = 0 mod 4")?;
            let mut run: Plan = (0..=(ell - 7) / 4).map(|i| (0, 4 * i)).collect();
            if ell < 7 {
                run.clear();
            }
            run.push((1, ell - 3));
            if ell >= 7 {
                run.extend((0..=(ell - 7) / 4).map(|i| (0, ell + 2 + 4 * i)));
            }
            (0..t / 4).flat_map(|i| shifted(&run, 2 * i * ell)).collect()
        };
        NicePair {
            first: realize(&plan, &[&b, &c])?,
            second: realize(&plan, &[&b2, &c2])?,
        }
    };
    req.check(&pair)?;
    Ok(pair)
}

/// Multiplicity `2 mod 4`, at least 6.
pub fn nice_pair_2mod4_ge6(
    m: usize,
    s: usize,
    lambda1: usize,
    lambda2: usize,
    t: usize,
) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, lambda2, t)?;
    req.hypothesis(lambda2 % 4 == 2 && lambda2 >= 6, "lambda2 must be 2 mod 4 and at least 6")?;
    let (ell, t) = (req.ell, req.t);
    let fill = (req.lambda2 - 6) / 4;
    let blocks = family_blocks(Family::TwoModFour { ell })?;
    let (unit, plan): (Block, Plan) = if ell % 2 == 1 {
        let c = padded(&blocks["E"], &blocks["A"], fill)?;
        let run: Plan = (0..=(ell - 3) / 2).map(|i| (0, 2 * i)).collect();
        let plan = if t % 2 == 0 {
            (0..t / 2).flat_map(|i| shifted(&run, i * ell)).collect()
        } else {
            req.hypothesis(ell % 4 == 1, "odd t needs ell = 1 mod 4")?;
            let tail: Plan = (0..=(ell - 5) / 4).map(|i| (0, 2 * i)).collect();
            let mut plan: Plan = (0..=(t - 3) / 2).flat_map(|i| shifted(&run, i * ell)).collect();
            plan.extend(shifted(&tail, (t - 1) / 2 * ell));
            plan
        };
        (c, plan)
    } else {
        req.hypothesis(t % 4 == 0, "even ell needs t = 0 mod 4")?;
        let h = padded(&blocks["G"], &blocks["F"], fill)?;
        let run: Plan = (0..=ell - 2).map(|i| (0, i)).collect();
        (h, (0..t / 4).flat_map(|i| shifted(&run, 2 * i * ell)).collect())
    };
    let narrow = realize(&plan, &[&unit])?;
    let pair = NicePair::twin(group(&narrow, s / lambda2)?);
    req.check(&pair)?;
    Ok(pair)
}

/// Multiplicity divisible by 4: `Phi` cut into contiguous runs of `2s/lambda2`.
pub fn nice_pair_mod4(
    m: usize,
    s: usize,
    lambda1: usize,
    lambda2: usize,
    t: usize,
) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, lambda2, t)?;
    req.hypothesis(lambda2.is_multiple_of(4), "lambda2 must be a multiple of 4")?;
    let q = &family_blocks(Family::Unit { lambda2: req.lambda2 })?["Q"];
    let phi = req.phi();
    let per_block = 2 * s / lambda2;
    if phi.len() != per_block * req.len {
        return Err(Error::Internal(format!(
            "|Phi|={} does not split into {} runs of {per_block}",
            phi.len(),
            req.len
        )));
    }
    let seq = phi
        .chunks(per_block)
        .map(|xs| {
            let parts = xs.iter().map(|&x| q.shift(x - 1)).collect::<Result<Vec<_>>>()?;
            juxtapose(&parts)
        })
        .collect::<Result<Vec<_>>>()?;
    let pair = NicePair::twin(seq);
    req.check(&pair)?;
    Ok(pair)
}

/// Multiplicity 2; picks the construction the divisibility of `t` allows.
pub fn nice_pair_lambda2(m: usize, s: usize, lambda1: usize, t: usize) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, 2, t)?;
    let ms = m * s;
    if (ms / (2 * lambda1)).is_multiple_of(t) {
        return nice_pair_lambda2_interval(m, s, lambda1, t);
    }
    req.hypothesis(t.is_multiple_of(4), "t must be 0 mod 4 when it does not divide ms/(2 lambda1)")?;
    let primes = odd_prime_divisors(s);
    if let Some(&p) = primes.iter().find(|&&p| (ms / (lambda1 * p)).is_multiple_of(t)) {
        return nice_pair_lambda2_prime_split(m, s, lambda1, t, p);
    }
    match primes.iter().find(|&&p| t.is_multiple_of(4 * p)) {
        Some(&p) => nice_pair_lambda2_prime_stride(m, s, lambda1, t, p),
        None => Err(Error::Internal(format!(
            "no multiplicity-2 construction applies to m={m}, s={s}, lambda1={lambda1}, t={t}"
        ))),
    }
}

fn odd_prime_divisors(n: usize) -> Vec<usize> {
    (3..=n)
        .step_by(2)
        .filter(|&p| n.is_multiple_of(p) && (3..p).step_by(2).all(|d| p % d != 0))
        .collect()
}

/// Multiplicity 2 with `t | ms/(2 lambda1)`: narrow interval blocks followed
/// by one width-6 block per row that steps over the multiples of `ell`.
pub fn nice_pair_lambda2_interval(m: usize, s: usize, lambda1: usize, t: usize) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, 2, t)?;
    req.hypothesis(((m * s) / (2 * lambda1)).is_multiple_of(t), "t must divide ms/(2 lambda1)")?;
    let ell = req.ell;
    req.hypothesis(ell % 2 == 1, "ell must be odd")?;
    let q = ((req.s - 6) / 4) as usize;
    let len = req.len;
    let blocks = family_blocks(Family::TwoFold)?;
    let v = |r: i64| -> &Block {
        match r {
            1 => &blocks["V1"],
            3 => &blocks["V3"],
            5 => &blocks["V5"],
            _ => &blocks["V7"],
        }
    };

    // Narrow part: width-4 blocks covering [1, N] minus multiples of ell.
    let (period_plan, period): (Vec<(&Block, i64)>, i64) = if ell % 4 == 1 {
        let x = (ell - 1) / 4;
        ((0..x).map(|i| (&blocks["U5"], 4 * i)).collect(), ell)
    } else {
        let x = (ell - 3) / 4;
        let mut run: Vec<(&Block, i64)> = (0..x).map(|i| (&blocks["U5"], 4 * i)).collect();
        run.push((&blocks["U3"], 4 * x));
        run.extend((0..x).map(|i| (&blocks["U5"], 4 * x + 5 + 4 * i)));
        (run, 2 * ell)
    };
    let want = len * q;
    let mut narrow = Vec::with_capacity(want);
    let mut c = 0;
    while narrow.len() < want {
        for &(b, x) in &period_plan {
            if narrow.len() == want {
                break;
            }
            narrow.push(b.shift(x + period * c)?);
        }
        c += 1;
    }
    // The narrow part covers [1, n_top] minus the `eta` multiples of ell in it;
    // n_top itself may be such a multiple.
    let eta = (2 * q as i64 * req.t) / req.s;
    let n_top = 2 * req.m * q as i64 / req.lambda1 + eta;

    // Wide part: one width-6 block per output block.
    let mut wide: Vec<Block> = Vec::with_capacity(len);
    let mut wide2: Option<Vec<Block>> = None;
    match ell {
        3 => {
            let mut alt = Vec::with_capacity(len);
            for c in 0..len as i64 {
                wide.push(blocks["Z"].shift(n_top + 9 * c)?);
                alt.push(blocks["Z'"].shift(n_top + 9 * c)?);
            }
            wide2 = Some(alt);
        }
        5 => {
            for c in 0..(len / 2) as i64 {
                wide.push(blocks["V5"].shift(n_top + 15 * c)?);
                wide.push(blocks["V3"].shift(n_top + 15 * c + 7)?);
            }
            if len % 2 == 1 {
                let x = (req.m * req.s) / (2 * req.lambda1) + (req.t - 15) / 2;
                req.hypothesis((req.t - 15) % 2 == 0, "odd length needs odd t")?;
                wide.push(blocks["V5"].shift(x)?);
            }
        }
        _ => {
            let mut r = 0;
            let mut used = 0i64;
            let mut j = 0i64;
            while wide.len() < len {
                let gap = if j == 0 {
                    (eta + 1) * ell - n_top
                } else {
                    ell - 7 + r
                };
                let (h, rj) = (gap / 6, gap % 6);
                if rj % 2 == 0 {
                    return Err(Error::Internal(format!("even remainder {rj} at step {j}")));
                }
                let base = n_top + 7 * j + 6 * used;
                for i in 0..h {
                    wide.push(blocks["V7"].shift(base + 6 * i)?);
                }
                used += h;
                wide.push(v(rj).shift(n_top + 7 * j + 6 * used)?);
                r = rj;
                j += 1;
                if j > req.t + 2 {
                    return Err(Error::Internal("wide sequence did not terminate".into()));
                }
            }
            wide.truncate(len);
        }
    }
    let assemble = |wide: &[Block]| -> Result<Vec<Block>> {
        (0..len)
            .map(|i| {
                let mut parts: Vec<Block> = narrow[i * q..(i + 1) * q].to_vec();
                parts.push(wide[i].clone());
                juxtapose(&parts)
            })
            .collect()
    };
    let first = assemble(&wide)?;
    let second = match &wide2 {
        Some(w) => assemble(w)?,
        None => first.clone(),
    };
    let pair = NicePair { first, second };
    req.check(&pair)?;
    Ok(pair)
}

/// Juxtaposes `h` blocks `V + x` per output block, `x` running through
/// `offsets` in ascending order.
fn stride_blocks(v: &Block, offsets: &[i64], h: usize) -> Result<Vec<Block>> {
    offsets
        .chunks(h)
        .map(|xs| {
            let parts = xs.iter().map(|&x| v.shift(x)).collect::<Result<Vec<_>>>()?;
            juxtapose(&parts)
        })
        .collect()
}

/// Multiplicity 2 with `t = 0 mod 4p` for an odd prime `p | s`.
pub fn nice_pair_lambda2_prime_stride(
    m: usize,
    s: usize,
    lambda1: usize,
    t: usize,
    p: usize,
) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, 2, t)?;
    req.hypothesis(s.is_multiple_of(p) && t.is_multiple_of(4 * p), "need p | s and t = 0 mod 4p")?;
    let ell = req.ell;
    let pi = p as i64;
    let w = family_blocks(Family::PrimeStride { ell })?;
    let mut parts = vec![w["W6"].clone()];
    let mut x = 6 * ell;
    while x <= (2 * pi - 4) * ell {
        parts.push(w["W4"].shift(x)?);
        x += 4 * ell;
    }
    let v = juxtapose(&parts)?;
    let offsets: Vec<i64> = (0..req.t / (4 * pi))
        .flat_map(|i| 2 * pi * i * ell..=(2 * pi * i + 1) * ell - 2)
        .collect();
    let pair = NicePair::twin(stride_blocks(&v, &offsets, s / (2 * p))?);
    req.check(&pair)?;
    Ok(pair)
}

/// Multiplicity 2 with `t = 0 mod 4` dividing `ms/(lambda1 p)`.
pub fn nice_pair_lambda2_prime_split(
    m: usize,
    s: usize,
    lambda1: usize,
    t: usize,
    p: usize,
) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, 2, t)?;
    req.hypothesis(
        s.is_multiple_of(p) && t.is_multiple_of(4) && ((m * s) / (lambda1 * p)).is_multiple_of(t),
        "need p | s, t = 0 mod 4 and t | ms/(lambda1 p)",
    )?;
    let pi = p as i64;
    let y = (req.ell - 1) / pi;
    let w = family_blocks(Family::PrimeSplit { p: pi, y })?;
    let build = |head: &str| -> Result<Block> {
        let mut parts = vec![w[head].clone()];
        let mut x = 2 * y;
        while x <= (pi - 3) * y {
            parts.push(w["W4"].shift(x)?);
            x += 2 * y;
        }
        juxtapose(&parts)
    };
    let offsets: Vec<i64> = (0..req.t / 4)
        .flat_map(|i| 2 * i * req.ell..2 * i * req.ell + y)
        .collect();
    let h = s / (2 * p);
    let pair = NicePair {
        first: stride_blocks(&build("W6")?, &offsets, h)?,
        second: stride_blocks(&build("W6'")?, &offsets, h)?,
    };
    req.check(&pair)?;
    Ok(pair)
}

/// Odd multiplicity other than `s/2`: a searched multiplicity-1 pair with
/// each block widened `lambda2` times.
pub fn nice_pair_odd(
    m: usize,
    s: usize,
    lambda1: usize,
    lambda2: usize,
    t: usize,
    budget: &SearchBudget,
) -> Result<NicePair> {
    let req = Request::new(m, s, lambda1, lambda2, t)?;
    req.hypothesis(lambda2 % 2 == 1 && 2 * lambda2 != s, "lambda2 must be odd and differ from s/2")?;
    let base = cached_search(m / lambda1, s / lambda2, t, budget)?;
    let pair = base.widened(lambda2)?;
    req.check(&pair)?;
    Ok(pair)
}

/// Searched pairs depend only on `(a, c, u)`, and the search is
/// deterministic, so successes are kept for the life of the process.
fn cached_search(a: usize, c: usize, u: usize, budget: &SearchBudget) -> Result<NicePair> {
    type Cache = Mutex<HashMap<(usize, usize, usize), NicePair>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(a, c, u)) {
        return Ok(hit.clone());
    }
    let pair = search_nice_pair(a, c, u, budget)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((a, c, u), pair.clone());
    Ok(pair)
}

/// The `lambda` not dividing `ms` case: `(B, B)` of length `m/2` built from
/// shifted `2 x 2` unit blocks.
pub fn nice_pair_not_dividing(m: usize, s: usize, lambda: usize, t: usize) -> Result<NicePair> {
    if s < 6 || s % 4 != 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("need s = 2 mod 4, s >= 6 and m even (m={m}, s={s})")));
    }
    let (ms, two_ms) = (m * s, 2 * m * s);
    if lambda == 0 || two_ms % lambda != 0 || ms % lambda == 0 || !lambda.is_multiple_of(8) {
        return Err(Error::InvalidParams(format!(
            "lambda={lambda} must divide 2ms={two_ms} but not ms"
        )));
    }
    if t == 0 || !(two_ms / lambda).is_multiple_of(t) {
        return Err(Error::InvalidParams(format!("t={t} must divide 2ms/lambda")));
    }
    let (t, ell) = (t as i64, (two_ms / lambda / t) as i64 + 1);
    let phi = phi_elements(t * ell / 2, ell, t / 2);
    let copies = lambda / 4;
    let mut offsets: Vec<i64> = Vec::with_capacity(ms / 4);
    if ell % 2 == 0 && t % 2 == 1 {
        let half = t * ell / 2;
        let rest: Vec<i64> = phi.iter().filter(|&&x| x != half).map(|x| x - 1).collect();
        for _ in 0..copies {
            offsets.extend(&rest);
        }
        offsets.extend(std::iter::repeat_n(half - 1, lambda / 8));
    } else {
        let all: Vec<i64> = phi.iter().map(|x| x - 1).collect();
        for _ in 0..copies {
            offsets.extend(&all);
        }
    }
    if offsets.len() != ms / 4 {
        return Err(Error::Internal(format!("offset list has length {}, expected {}", offsets.len(), ms / 4)));
    }
    let q = &family_blocks(Family::Unit { lambda2: 4 })?["Q1"];
    Ok(NicePair::twin(stride_blocks(q, &offsets, s / 2)?))
}

/// The nice pair for `p`: length `m / (2 lambda1)` when `lambda | ms`,
/// length `m/2` otherwise.
pub fn nice_pair(p: &HeffterParams) -> Result<NicePair> {
    nice_pair_with_budget(p, &SearchBudget::default()).map(|(pair, _)| pair)
}

/// Like [`nice_pair`], also reporting the factorization used (`lambda1 = 1`
/// stands in when `lambda` does not divide `ms`).
pub fn nice_pair_with_budget(
    p: &HeffterParams,
    budget: &SearchBudget,
) -> Result<(NicePair, Factorization)> {
    let (m, s, lambda, t) = (p.m, p.s, p.lambda, p.t);
    if !p.lambda_divides_ms() {
        let pair = nice_pair_not_dividing(m, s, lambda, t)?;
        return Ok((pair, Factorization { lambda1: 1, lambda2: lambda }));
    }
    let f = choose_factorization(lambda, m, s)?;
    let (l1, l2) = (f.lambda1, f.lambda2);
    let pair = if 2 * l2 == s {
        nice_pair_s_half(m, s, l1, t)?
    } else if l2 % 2 == 1 {
        nice_pair_odd(m, s, l1, l2, t, budget)?
    } else if l2 % 4 == 0 {
        nice_pair_mod4(m, s, l1, l2, t)?
    } else if l2 >= 6 {
        nice_pair_2mod4_ge6(m, s, l1, l2, t)?
    } else {
        nice_pair_lambda2(m, s, l1, t)?
    };
    Ok((pair, f))
}
