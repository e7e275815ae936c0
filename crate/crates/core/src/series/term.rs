//! Hypergeometric term sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::upoly::IntPoly;
use crate::error::{Error, Result};
use crate::exact::{MultiPoly, RationalFunction, Q};

/// How far past the first index the constructor probes for poles.
const PROBE_WINDOW: i64 = 64;
/// How far the constructor looks for a terminating zero of the ratio.
const STOP_HORIZON: i64 = 1 << 16;

/// `t(first_index) = first_term`, `t(k+1) = t(k) * ratio(k)`.
///
/// The ratio is compiled once into integer polynomials `p/q` so that the
/// summation kernel never touches rational coefficients.
#[derive(Clone, Debug)]
pub struct HyperTerm {
    index_var: String,
    first_index: i64,
    first_term: Q,
    ratio: RationalFunction,
    p: IntPoly,
    q: IntPoly,
    /// First index `k` with `p(k) = 0`; terms past it vanish.
    stop: Option<i64>,
}

impl HyperTerm {
    pub fn new(index_var: &str, first_index: i64, first_term: Q, ratio: RationalFunction) -> Result<Self> {
        let coeffs = |m: &MultiPoly| {
            m.univariate_coeffs(index_var).ok_or_else(|| {
                Error::MalformedSeries(format!("ratio {ratio} depends on more than `{index_var}`"))
            })
        };
        let (p, q) = IntPoly::clear_pair(&coeffs(ratio.num())?, &coeffs(ratio.den())?);
        let mut t = HyperTerm {
            index_var: index_var.to_string(),
            first_index,
            first_term,
            ratio,
            p,
            q,
            stop: None,
        };
        t.stop = t.find_stop(first_index + STOP_HORIZON);
        t.check_poles(first_index + PROBE_WINDOW)?;
        Ok(t)
    }

    fn find_stop(&self, horizon: i64) -> Option<i64> {
        if self.first_term.is_zero() {
            return Some(self.first_index - 1);
        }
        self.p.integer_roots(self.first_index, horizon).first().copied()
    }

    /// Errors if a transition needed before `upto` (exclusive) divides by zero.
    pub fn check_poles(&self, upto: i64) -> Result<()> {
        let end = match self.stop {
            Some(s) => upto.min(s),
            None => upto,
        };
        if let Some(k) = self.q.integer_roots(self.first_index, end - 1).first() {
            return Err(Error::MalformedSeries(format!(
                "term ratio has a pole at {} = {k}",
                self.index_var
            )));
        }
        Ok(())
    }

    pub fn index_var(&self) -> &str {
        &self.index_var
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn first_term(&self) -> &Q {
        &self.first_term
    }

    pub fn ratio(&self) -> &RationalFunction {
        &self.ratio
    }

    pub(crate) fn p(&self) -> &IntPoly {
        &self.p
    }

    pub(crate) fn q(&self) -> &IntPoly {
        &self.q
    }

    /// Index of the last possibly nonzero term, if the series terminates.
    pub fn last_index(&self) -> Option<i64> {
        self.stop
    }

    /// Number of nonzero terms, if finite.
    pub fn finite_len(&self) -> Option<u64> {
        self.stop.map(|s| (s - self.first_index + 1).max(0) as u64)
    }

    /// `ratio(k)` as an exact rational.
    pub fn ratio_at(&self, k: i64) -> Result<Q> {
        let d = self.q.eval_i(k);
        if d.is_zero() {
            return Err(Error::MalformedSeries(format!("ratio pole at {} = {k}", self.index_var)));
        }
        Ok(Q::new(self.p.eval_i(k), d))
    }

    /// Term at index `k >= first_index`, by ratio iteration.
    pub fn term(&self, k: i64) -> Result<Q> {
        if k < self.first_index {
            return Err(Error::Domain(format!("index {k} precedes the first index {}", self.first_index)));
        }
        let mut t = self.first_term.clone();
        for i in self.first_index..k {
            if t.is_zero() {
                break;
            }
            t *= self.ratio_at(i)?;
        }
        Ok(t)
    }

    /// The first `count` terms.
    pub fn terms(&self, count: usize) -> Result<Vec<Q>> {
        let mut out = Vec::with_capacity(count);
        let mut t = self.first_term.clone();
        for j in 0..count as i64 {
            if j > 0 && !t.is_zero() {
                t *= self.ratio_at(self.first_index + j - 1)?;
            }
            out.push(t.clone());
        }
        Ok(out)
    }

    /// `lim |ratio(k)|` when it exists and is finite.
    pub fn limit_ratio(&self) -> Option<Q> {
        let (dp, dq) = (self.p.degree(), self.q.degree());
        if self.p.is_zero() || dp < dq {
            Some(Q::zero())
        } else if dp == dq {
            Some(Q::new(self.p.lc(), self.q.lc()).abs())
        } else {
            None
        }
    }

    /// Sign of the limiting ratio, `-1` for eventually alternating series.
    pub fn limit_sign(&self) -> i32 {
        if self.p.is_zero() {
            return 1;
        }
        if self.p.lc().is_negative() == self.q.lc().is_negative() {
            1
        } else {
            -1
        }
    }

    /// Rebases the sequence so that it starts at `k`.
    pub fn starting_at(&self, k: i64) -> Result<HyperTerm> {
        let t = self.term(k)?;
        HyperTerm::new(&self.index_var, k, t, self.ratio.clone())
    }

    /// Multiplies every term by `c`.
    pub fn scaled(&self, c: &Q) -> HyperTerm {
        let mut h = self.clone();
        h.first_term = &h.first_term * c;
        if h.first_term.is_zero() {
            h.stop = Some(h.first_index - 1);
        }
        h
    }
}

/// `prefactor * pFq[upper; lower; argument]`, summed from `k = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PFQSpec {
    pub upper: Vec<Q>,
    pub lower: Vec<Q>,
    pub argument: Q,
    pub prefactor: Q,
}

impl PFQSpec {
    pub fn new(upper: Vec<Q>, lower: Vec<Q>, argument: Q) -> Self {
        PFQSpec { upper, lower, argument, prefactor: Q::one() }
    }

    /// Term ratio `z * prod(a_i + k) / ((1 + k) * prod(b_j + k))`.
    pub fn ratio(&self, var: &str) -> RationalFunction {
        let k = MultiPoly::var(var);
        let lin = |c: &Q| &k + &MultiPoly::constant(c.clone());
        let num = self
            .upper
            .iter()
            .fold(MultiPoly::constant(self.argument.clone()), |acc, a| &acc * &lin(a));
        let den = self
            .lower
            .iter()
            .fold(lin(&Q::one()), |acc, b| &acc * &lin(b));
        RationalFunction::new(num, den).expect("monic denominator")
    }
}

/// Compiles a pFq specification into a term sequence starting at `k = 0`.
///
/// A lower parameter `-m` is tolerated only if the series has already
/// terminated at or before index `m`.
pub fn compile_pfq(spec: &PFQSpec) -> Result<HyperTerm> {
    let t = HyperTerm::new("k", 0, spec.prefactor.clone(), spec.ratio("k"))?;
    for b in &spec.lower {
        if b.is_integer() && !b.is_positive() {
            let m = (-b).to_integer();
            let stop = t.last_index().map(BigInt::from);
            if stop.is_none_or(|s| s > m) {
                return Err(Error::MalformedSeries(format!("lower parameter {b} is a permanent pole")));
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rf, pochhammer, q, qf};

    #[test]
    fn two_f_one_terms() {
        let s = PFQSpec::new(vec![q(1), q(1)], vec![q(2)], qf(1, 2));
        let t = compile_pfq(&s).unwrap();
        assert_eq!(t.terms(3).unwrap(), vec![q(1), qf(1, 4), qf(1, 12)]);
        // Direct Pochhammer quotient for comparison.
        for k in 0..12u64 {
            let direct = pochhammer(&q(1), k) * pochhammer(&q(1), k)
                / (pochhammer(&q(2), k) * pochhammer(&q(1), k))
                * crate::exact::rational::pow_i(&qf(1, 2), k as i64).unwrap();
            assert_eq!(t.term(k as i64).unwrap(), direct);
        }
    }

    #[test]
    fn three_f_two_theorem_form() {
        let (x, y) = (q(1), q(2));
        let s = PFQSpec::new(vec![x.clone(), &x + q(1), q(1)], vec![&x + &y, &x + &y + q(1)], q(1));
        let t = compile_pfq(&s).unwrap();
        assert_eq!(t.first_term(), &q(1));
        for k in 0..=10u64 {
            let direct = pochhammer(&x, k) * pochhammer(&(&x + q(1)), k) * pochhammer(&q(1), k)
                / (pochhammer(&(&x + &y), k) * pochhammer(&(&x + &y + q(1)), k) * pochhammer(&q(1), k));
            assert_eq!(t.term(k as i64).unwrap(), direct);
        }
    }

    #[test]
    fn terminating_upper_parameter() {
        let s = PFQSpec::new(vec![q(-3), qf(1, 2)], vec![qf(5, 2)], q(1));
        let t = compile_pfq(&s).unwrap();
        assert_eq!(t.finite_len(), Some(4));
        let terms = t.terms(6).unwrap();
        assert!(terms[..4].iter().all(|x| !x.is_zero()));
        assert!(terms[4..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn permanent_lower_pole() {
        let s = PFQSpec::new(vec![q(1)], vec![q(-2)], qf(1, 2));
        assert!(matches!(compile_pfq(&s), Err(Error::MalformedSeries(_))));
        // Terminating before the pole is fine.
        let s = PFQSpec::new(vec![q(-1)], vec![q(-2)], qf(1, 2));
        assert!(compile_pfq(&s).is_ok());
    }

    #[test]
    fn ratio_pole_is_rejected() {
        let r = parse_rf("1/(k-5)").unwrap();
        assert!(HyperTerm::new("k", 0, q(1), r).is_err());
        let r = parse_rf("k/(k+1)").unwrap();
        assert!(HyperTerm::new("k", 1, q(1), r.clone()).is_ok());
        assert!(HyperTerm::new("k", 0, q(1), parse_rf("(k+1)/(x+k)").unwrap()).is_err());
    }
}
