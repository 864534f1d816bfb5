use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(m, n, s, k, lambda, t)` of an integer relative Heffter array.
///
/// `m x n` cells, `s` filled cells per row, `k` per column, every support
/// element used `lambda` times up to sign, relative to a subgroup of order
/// `t` in the cyclic group of order `v = 2ms/lambda + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeffterParams {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub lambda: usize,
    pub t: usize,
}

impl HeffterParams {
    pub fn new(m: usize, n: usize, s: usize, k: usize, lambda: usize, t: usize) -> Result<Self> {
        let p = HeffterParams {
            m,
            n,
            s,
            k,
            lambda,
            t,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        let HeffterParams {
            m,
            n,
            s,
            k,
            lambda,
            t,
        } = *self;
        if s < 4 || s > n {
            return bad(format!("need 4 <= s <= n, got s={s}, n={n}"));
        }
        if k < 4 || k > m {
            return bad(format!("need 4 <= k <= m, got k={k}, m={m}"));
        }
        if m * s != n * k {
            return bad(format!("need ms = nk, got {} != {}", m * s, n * k));
        }
        if lambda == 0 || (2 * m * s) % lambda != 0 {
            return bad(format!("lambda={lambda} must divide 2ms={}", 2 * m * s));
        }
        if t == 0 || (2 * m * s / lambda) % t != 0 {
            return bad(format!("t={t} must divide 2ms/lambda={}", 2 * m * s / lambda));
        }
        Ok(())
    }

    /// Order of the cyclic group, `2ms/lambda + t`.
    pub fn v(&self) -> usize {
        2 * self.m * self.s / self.lambda + self.t
    }

    /// Index of the subgroup, `v / t`.
    pub fn ell(&self) -> usize {
        self.v() / self.t
    }

    pub fn ms(&self) -> usize {
        self.m * self.s
    }

    pub fn lambda_divides_ms(&self) -> bool {
        self.ms().is_multiple_of(self.lambda)
    }

    /// The same array seen through a transpose.
    pub fn transposed(&self) -> Self {
        HeffterParams {
            m: self.n,
            n: self.m,
            s: self.k,
            k: self.s,
            ..*self
        }
    }

    pub fn support(&self) -> SupportSpec {
        phi_support(self)
    }
}

impl std::fmt::Display for HeffterParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}H{}({},{};{},{})",
            self.lambda, self.t, self.m, self.n, self.s, self.k
        )
    }
}

/// The support set of an integer relative Heffter array together with the
/// number of times each element must appear up to sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSpec {
    /// Largest candidate element, `floor(t*ell/2)`.
    pub max: i64,
    pub ell: i64,
    /// Number of excluded multiples of `ell`, `floor(t/2)`.
    pub excluded_count: i64,
    /// `t*ell/2`, present when `ell` is even and `t` is odd.
    pub half_element: Option<i64>,
    pub full_multiplicity: usize,
    pub half_multiplicity: usize,
}

impl SupportSpec {
    pub fn contains(&self, x: i64) -> bool {
        x >= 1 && x <= self.max && !(x % self.ell == 0 && x / self.ell <= self.excluded_count)
    }

    /// Support elements in ascending order.
    pub fn elements(&self) -> Vec<i64> {
        (1..=self.max).filter(|&x| self.contains(x)).collect()
    }

    /// Required number of appearances of `x` up to sign; 0 off the support.
    pub fn multiplicity(&self, x: i64) -> usize {
        if !self.contains(x) {
            0
        } else if Some(x) == self.half_element {
            self.half_multiplicity
        } else {
            self.full_multiplicity
        }
    }

    /// Total number of filled cells this support accounts for.
    pub fn total_cells(&self) -> usize {
        let full = self.elements().len() * self.full_multiplicity;
        match self.half_element {
            Some(_) => full - self.full_multiplicity + self.half_multiplicity,
            None => full,
        }
    }
}

pub fn phi_support(p: &HeffterParams) -> SupportSpec {
    let ell = p.ell() as i64;
    let t = p.t as i64;
    let half = (ell % 2 == 0 && t % 2 == 1).then_some(t * ell / 2);
    SupportSpec {
        max: t * ell / 2,
        ell,
        excluded_count: t / 2,
        half_element: half,
        full_multiplicity: p.lambda,
        half_multiplicity: p.lambda / 2,
    }
}

/// Every valid parameter tuple with `m, n <= max_dim`, in lexicographic
/// order of `(m, n, s, k, lambda, t)`.
pub fn all_params(max_dim: usize) -> Vec<HeffterParams> {
    let mut out = Vec::new();
    for m in 4..=max_dim {
        for n in 4..=max_dim {
            for s in 4..=n {
                if (m * s) % n != 0 {
                    continue;
                }
                let k = m * s / n;
                if k < 4 || k > m {
                    continue;
                }
                let two_ms = 2 * m * s;
                for lambda in (1..=two_ms).filter(|l| two_ms % l == 0) {
                    let q = two_ms / lambda;
                    for t in (1..=q).filter(|t| q % t == 0) {
                        out.push(HeffterParams {
                            m,
                            n,
                            s,
                            k,
                            lambda,
                            t,
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(HeffterParams::new(6, 12, 8, 4, 1, 24).is_ok());
        assert!(HeffterParams::new(6, 12, 8, 5, 1, 24).is_err());
        assert!(HeffterParams::new(6, 12, 8, 4, 7, 1).is_err());
        assert!(HeffterParams::new(6, 12, 8, 4, 1, 7).is_err());
        assert!(HeffterParams::new(3, 3, 3, 3, 1, 1).is_err());
    }

    #[test]
    fn example_supports() {
        let p = HeffterParams::new(6, 12, 8, 4, 1, 24).unwrap();
        assert_eq!(p.ell(), 5);
        let phi = p.support();
        let want: Vec<i64> = (1..=60).filter(|x| x % 5 != 0).collect();
        assert_eq!(phi.elements(), want);
        assert_eq!(phi.half_element, None);

        let p = HeffterParams::new(10, 10, 4, 4, 16, 5).unwrap();
        let phi = p.support();
        assert_eq!(p.ell(), 2);
        assert_eq!(phi.elements(), vec![1, 3, 5]);
        assert_eq!(phi.half_element, Some(5));
        assert_eq!(phi.multiplicity(5), 8);
        assert_eq!(phi.multiplicity(3), 16);
        assert_eq!(phi.multiplicity(2), 0);

        let p = HeffterParams::new(5, 10, 8, 4, 2, 1).unwrap();
        assert_eq!(p.support().elements(), (1..=20).collect::<Vec<_>>());
    }

    #[test]
    fn cardinality_identity_over_sweep() {
        for p in all_params(12) {
            assert_eq!(p.support().total_cells(), p.ms(), "{p}");
        }
    }
}
