//! Dense univariate polynomials over the integers, used by the summation
//! kernel and the tail certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Q;

/// Coefficients, constant term first, with no trailing zeros.
const SIEVE_PRIMES: [i64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly(c)
    }

    /// Scales two rational coefficient lists by a common positive integer
    /// so both become integral.
    pub fn clear_pair(a: &[Q], b: &[Q]) -> (IntPoly, IntPoly) {
        let l = a
            .iter()
            .chain(b)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let conv = |v: &[Q]| {
            IntPoly::new(v.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect())
        };
        (conv(a), conv(b))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    /// Coefficient of `k^i`.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, k: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_i(&self, k: i64) -> BigInt {
        self.eval(&BigInt::from(k))
    }

    pub fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        IntPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `p(k + s)` as a polynomial in `k`.
    pub fn taylor_shift(&self, s: &BigInt) -> Self {
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * s;
                c[j] += t;
            }
        }
        IntPoly::new(c)
    }

    /// Whether every coefficient is `>= 0`; then `p(u) >= 0` for all `u >= 0`.
    pub fn all_nonneg(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Whether `p(u) > 0` for all `u >= 0`, by the coefficient-sign test.
    pub fn positive_on_nonneg(&self) -> bool {
        self.all_nonneg() && self.0.first().is_some_and(|c| c.is_positive())
    }

    /// Cauchy bound: every real root `r` satisfies `|r| < bound`.
    pub fn root_bound(&self) -> BigInt {
        let lc = self.lc().abs();
        if lc.is_zero() {
            return BigInt::zero();
        }
        let m = self.0.iter().map(|c| c.abs()).max().unwrap_or_default();
        m.div_ceil(&lc) + BigInt::one()
    }

    /// Integer roots in `[from, to]`, found by scanning up to the root bound.
    pub fn integer_roots(&self, from: i64, to: i64) -> Vec<i64> {
        if self.is_zero() {
            return (from..=to).collect();
        }
        let bound = self.root_bound();
        let hi = match i64::try_from(&bound) {
            Ok(b) => to.min(b),
            Err(_) => to,
        };
        let lo = match i64::try_from(-&bound) {
            Ok(b) => from.max(b),
            Err(_) => from,
        };
        if hi < lo {
            return Vec::new();
        }
        // A root mod every small prime is necessary; sieve before evaluating exactly.
        let sieves: Vec<(i64, Vec<bool>)> = SIEVE_PRIMES
            .iter()
            .map(|&m| {
                let cs: Vec<i64> = self.0.iter().map(|c| c.mod_floor(&BigInt::from(m)).to_i64().unwrap_or(0)).collect();
                let ok = (0..m)
                    .map(|r| cs.iter().rev().fold(0i64, |acc, &c| (acc * r + c) % m) == 0)
                    .collect();
                (m, ok)
            })
            .collect();
        (lo..=hi)
            .filter(|&k| sieves.iter().all(|(m, ok)| ok[k.rem_euclid(*m) as usize]))
            .filter(|&k| self.eval_i(k).is_zero())
            .collect()
    }
}
