//! Partial sums by binary splitting.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::term::HyperTerm;
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::par::Exec;

/// Leaf ranges shorter than this are summed without forking.
const FORK_THRESHOLD: i64 = 64;

/// Products over a range `[a, b)` of transitions:
/// `P = prod p`, `Q = prod q`, and `T / Q = sum_{j in [a,b)} prod_{i=a}^{j} p_i / q_i`.
struct Pqt {
    p: BigInt,
    q: BigInt,
    t: BigInt,
}

fn split(term: &HyperTerm, a: i64, b: i64, exec: Exec) -> Result<Pqt> {
    if b - a == 1 {
        let q = term.q().eval_i(a);
        if q.is_zero() {
            return Err(Error::MalformedSeries(format!("ratio pole at {} = {a}", term.index_var())));
        }
        let p = term.p().eval_i(a);
        return Ok(Pqt { t: p.clone(), p, q });
    }
    let m = a + (b - a) / 2;
    let (l, r) = if b - a >= FORK_THRESHOLD {
        exec.join(|| split(term, a, m, exec), || split(term, m, b, exec))
    } else {
        (split(term, a, m, Exec::Sequential), split(term, m, b, Exec::Sequential))
    };
    let (l, r) = (l?, r?);
    Ok(Pqt { t: &l.t * &r.q + &l.p * &r.t, p: l.p * r.p, q: l.q * r.q })
}

/// Number of terms that actually need summing among the first `count`.
fn effective_count(term: &HyperTerm, count: u64) -> u64 {
    match term.finite_len() {
        Some(n) => n.min(count),
        None => count,
    }
}

/// Exact sum of the first `count` terms.
pub fn partial_sum_exact(term: &HyperTerm, count: u64) -> Result<Q> {
    partial_sum_exact_with(term, count, Exec::default())
}

pub fn partial_sum_exact_with(term: &HyperTerm, count: u64, exec: Exec) -> Result<Q> {
    let n = effective_count(term, count);
    if n == 0 {
        return Ok(Q::zero());
    }
    let t0 = term.first_term();
    if n == 1 {
        return Ok(t0.clone());
    }
    let a = term.first_index();
    let s = split(term, a, a + n as i64 - 1, exec)?;
    Ok(t0 * (Q::one() + Q::new(s.t, s.q)))
}

/// Sequential reference kernel, kept for benchmarking against the parallel one.
pub fn partial_sum_exact_seq(term: &HyperTerm, count: u64) -> Result<Q> {
    partial_sum_exact_with(term, count, Exec::Sequential)
}

pub fn partial_sum_exact_par(term: &HyperTerm, count: u64) -> Result<Q> {
    partial_sum_exact_with(term, count, Exec::Parallel)
}

/// Result of fixed-point summation: `|exact - center| <= radius`.
#[derive(Clone, Debug)]
pub struct FixedSum {
    pub center: Q,
    pub radius: Q,
    /// Last term summed, as a fixed-point approximation.
    pub last_term: Q,
}

/// Sums the first `count` terms in binary fixed point with `bits` fractional bits.
///
/// Each step truncates once, so the absolute error of the `k`-th term obeys
/// `e_{k+1} <= |r_k| e_k + 1` ulp. That recursion is tracked in `f64` with a
/// generous inflation and summed into the returned radius.
pub fn partial_sum_fixed(term: &HyperTerm, count: u64, bits: u32) -> Result<FixedSum> {
    let n = effective_count(term, count);
    let scale = BigInt::one() << bits;
    let as_q = |v: &BigInt| Q::new(v.clone(), scale.clone());
    if n == 0 {
        return Ok(FixedSum { center: Q::zero(), radius: Q::zero(), last_term: Q::zero() });
    }
    let t0 = term.first_term() * Q::from_integer(scale.clone());
    let mut t = t0.floor().to_integer();
    let mut acc = t.clone();
    let mut err = 1.0f64; // ulps in the current term
    let mut total = 1.0f64;
    let a = term.first_index();
    for k in a..a + n as i64 - 1 {
        let p = term.p().eval_i(k);
        let q = term.q().eval_i(k);
        if q.is_zero() {
            return Err(Error::MalformedSeries(format!("ratio pole at {} = {k}", term.index_var())));
        }
        let r = (p.to_f64().unwrap_or(f64::INFINITY) / q.to_f64().unwrap_or(f64::INFINITY)).abs();
        t = num_integer::Integer::div_floor(&(t * p), &q);
        err = err * r * (1.0 + 1e-12) + 1.0;
        total += err;
        acc += &t;
    }
    if !total.is_finite() || total > 1e300 {
        return Err(Error::MalformedSeries("fixed-point error bound overflowed".into()));
    }
    // Round the float bound up to an integer number of ulps with slack for f64 error.
    let ulps = BigInt::from((total * (1.0 + 1e-9)).ceil() as u128 + 1);
    Ok(FixedSum { center: as_q(&acc), radius: as_q(&ulps), last_term: as_q(&t) })
}

/// `|t_{k}|` for the last summed index, exact, used by tail bounds.
pub fn last_term_abs(term: &HyperTerm, count: u64) -> Result<Q> {
    Ok(term.term(term.first_index() + count as i64 - 1)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rf, q, qf};

    fn alt_basel() -> HyperTerm {
        // sum (-1)^(n-1)/n^2 from n = 1
        HyperTerm::new("n", 1, q(1), parse_rf("-n^2/(n+1)^2").unwrap()).unwrap()
    }

    #[test]
    fn small_partial_sums() {
        let t = alt_basel();
        assert_eq!(partial_sum_exact(&t, 2).unwrap(), qf(3, 4));
        assert_eq!(partial_sum_exact(&t, 0).unwrap(), q(0));
        assert_eq!(partial_sum_exact(&t, 1).unwrap(), q(1));
    }

    #[test]
    fn matches_naive_summation() {
        let t = alt_basel();
        for n in [3u64, 17, 64, 65, 200] {
            let naive: Q = t.terms(n as usize).unwrap().iter().sum();
            assert_eq!(partial_sum_exact_seq(&t, n).unwrap(), naive);
            assert_eq!(partial_sum_exact_par(&t, n).unwrap(), naive);
        }
    }

    #[test]
    fn terminating_sum_ignores_later_poles() {
        // (-2)_k / (-3)_k ... ratio (k-2)/(k-4): terminates at k = 2, pole at k = 4 unused.
        let t = HyperTerm::new("k", 0, q(1), parse_rf("(k-2)/(k-4)").unwrap()).unwrap();
        assert_eq!(partial_sum_exact(&t, 100).unwrap(), q(1) + qf(1, 2) + qf(1, 6));
    }

    #[test]
    fn fixed_point_within_radius() {
        let t = alt_basel();
        let exact = partial_sum_exact(&t, 500).unwrap();
        let f = partial_sum_fixed(&t, 500, 96).unwrap();
        assert!((&exact - &f.center).abs() <= f.radius);
    }
}
