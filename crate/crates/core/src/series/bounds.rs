//! Certified bounds on the tail `sum_{k > K} t(k)` of a term sequence.
//!
//! Every certificate reduces to a polynomial inequality `f(K + u) >= 0` for
//! all `u >= 0`, which is established by the sufficient test "all
//! coefficients of the Taylor-shifted polynomial are nonnegative".

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::term::HyperTerm;
use super::upoly::IntPoly;
use crate::exact::Q;

/// Width of the window over which `|ratio|` is sampled.
pub const WINDOW: i64 = 32;

/// Which argument certified the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRegime {
    /// The series terminated; no tail.
    Finite,
    /// `|ratio| <= rho < 1` eventually.
    Geometric,
    /// Alternating with a decreasing, convex magnitude.
    AlternatingConvex,
    /// Alternating with a decreasing magnitude.
    Alternating,
    /// Positive terms decaying like `k^{-sigma}` with `sigma > 1`.
    PowerLaw,
}

/// The tail lies in `[center - radius, center + radius]`.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub regime: TailRegime,
    pub center: Q,
    pub radius: Q,
    /// The certified ratio bound for geometric tails.
    pub rho: Option<Q>,
}

impl TailBound {
    fn zero() -> Self {
        TailBound { regime: TailRegime::Finite, center: Q::zero(), radius: Q::zero(), rho: None }
    }

    /// Largest possible magnitude of the tail.
    pub fn magnitude(&self) -> Q {
        self.center.abs() + &self.radius
    }
}

fn qi(v: BigInt) -> Q {
    Q::from_integer(v)
}

fn shifted(p: &IntPoly, k: i64) -> IntPoly {
    p.taylor_shift(&BigInt::from(k))
}

/// `p(k + 1)` as a polynomial in `k`.
fn next(p: &IntPoly) -> IntPoly {
    p.taylor_shift(&BigInt::one())
}

/// Rounds `x` up to a multiple of `2^-20`, keeping certificates small.
fn round_up(x: &Q) -> Q {
    let s: BigInt = BigInt::one() << 20;
    Q::new((x * qi(s.clone())).ceil().to_integer(), s)
}

/// Whether `|p(k)/q(k)| <= a/b` for every `k >= from`.
fn certify_ratio_bound(p: &IntPoly, q: &IntPoly, rho: &Q, from: i64) -> bool {
    let (a, b) = (rho.numer(), rho.denom());
    let lhs = q.mul(q).scale(&(a * a));
    let rhs = p.mul(p).scale(&(b * b));
    shifted(&lhs.sub(&rhs), from).all_nonneg()
}

/// Geometric certificate for the tail after index `last` (the last summed index).
pub fn geometric(term: &HyperTerm, last: i64, t_last: &Q) -> Option<TailBound> {
    let limit = term.limit_ratio()?;
    if limit >= Q::one() {
        return None;
    }
    let mut window_max = Q::zero();
    for k in last..=last + WINDOW {
        let r = term.ratio_at(k).ok()?.abs();
        if r > window_max {
            window_max = r;
        }
    }
    let base = if window_max > limit { window_max } else { limit };
    if base >= Q::one() {
        return None;
    }
    let gap = Q::one() - &base;
    for frac in [64, 8, 2] {
        let rho = round_up(&(&base + &gap / qi(BigInt::from(frac))));
        if rho >= Q::one() {
            continue;
        }
        if certify_ratio_bound(term.p(), term.q(), &rho, last) {
            let radius = t_last.abs() * &rho / (Q::one() - &rho);
            return Some(TailBound { regime: TailRegime::Geometric, center: Q::zero(), radius, rho: Some(rho) });
        }
    }
    None
}

/// Whether the ratio is negative for all `k >= from`.
fn certify_alternating(p: &IntPoly, q: &IntPoly, from: i64) -> bool {
    shifted(&p.mul(q).neg(), from).positive_on_nonneg()
}

/// Magnitude decays to zero: `|ratio| = 1 - c/k + ...` with `c > 0`.
fn raabe_exponent(term: &HyperTerm) -> Option<f64> {
    let (p, q) = (term.p(), term.q());
    let d = p.degree();
    if d != q.degree() || d == 0 {
        return None;
    }
    let f = |x: BigInt| x.to_f64();
    let a = f(p.coeff(d - 1))? / f(p.coeff(d))?;
    let b = f(q.coeff(d - 1))? / f(q.coeff(d))?;
    Some(b - a)
}

/// Leibniz-type bound for eventually alternating rate-1 tails, refined to a
/// midpoint enclosure when the magnitudes are certified convex.
pub fn alternating(term: &HyperTerm, last: i64, t_last: &Q) -> Option<TailBound> {
    let (p, q) = (term.p(), term.q());
    if raabe_exponent(term)? <= 0.0 {
        return None;
    }
    if !certify_alternating(p, q, last) || !certify_ratio_bound(p, q, &Q::one(), last) {
        return None;
    }
    let r0 = term.ratio_at(last).ok()?;
    let t1 = t_last * &r0; // first tail term
    let a0 = t1.abs();
    let sign = if t1.is_negative() { -Q::one() } else { Q::one() };
    // Convexity of a_j: 1 + 2 r(k) + r(k) r(k+1) >= 0, cleared by q(k)^2 q(k+1)^2.
    let (pn, qn) = (next(p), next(q));
    let inner = q.mul(&qn).add(&p.mul(&qn).scale(&BigInt::from(2))).add(&p.mul(&pn));
    let cleared = q.mul(&qn).mul(&inner);
    if shifted(&cleared, last + 1).all_nonneg() {
        let r1 = term.ratio_at(last + 1).ok()?.abs();
        let d0 = &a0 * (Q::one() - r1);
        let four = qi(BigInt::from(4));
        let center = sign * (&a0 / qi(BigInt::from(2)) + &d0 / &four);
        return Some(TailBound { regime: TailRegime::AlternatingConvex, center, radius: d0 / four, rho: None });
    }
    Some(TailBound { regime: TailRegime::Alternating, center: Q::zero(), radius: a0, rho: None })
}

/// Power-law bound for positive rate-1 tails: if
/// `p(k) (k+a+1)^s <= q(k) (k+a)^s` for `k >= K`, then
/// `sum_{k > K} t(k) <= t(K) (K+a) / (s-1)`.
pub fn power_law(term: &HyperTerm, last: i64, t_last: &Q) -> Option<TailBound> {
    let c = raabe_exponent(term)?;
    if c <= 1.0 || term.limit_sign() < 0 {
        return None;
    }
    let (mut p, mut q) = (term.p().clone(), term.q().clone());
    if q.lc().is_negative() {
        p = p.neg();
        q = q.neg();
    }
    if !shifted(&p, last).positive_on_nonneg() || !shifted(&q, last).positive_on_nonneg() {
        return None;
    }
    let top = c.floor().min(64.0) as u32;
    for s in (2..=top).rev() {
        for a in 0..=4i64 {
            let lin = |off: i64| IntPoly::new(vec![BigInt::from(a + off), BigInt::one()]);
            let pow = |l: IntPoly| (0..s).fold(IntPoly::new(vec![BigInt::one()]), |acc, _| acc.mul(&l));
            let diff = q.mul(&pow(lin(0))).sub(&p.mul(&pow(lin(1))));
            if shifted(&diff, last).all_nonneg() {
                let mag = t_last.abs() * Q::from_integer(BigInt::from(last + a)) / qi(BigInt::from(s - 1));
                let half = &mag / qi(BigInt::from(2));
                let center = if t_last.is_negative() { -half.clone() } else { half.clone() };
                return Some(TailBound { regime: TailRegime::PowerLaw, center, radius: half, rho: None });
            }
        }
    }
    None
}

/// Best available certificate for the tail after `count` summed terms.
///
/// Returns `None` when no argument applies at this cut-off; callers usually
/// retry further out.
pub fn tail_bound(term: &HyperTerm, count: u64, t_last: &Q) -> Option<TailBound> {
    if let Some(n) = term.finite_len() {
        if count >= n {
            return Some(TailBound::zero());
        }
    }
    if count == 0 {
        return None;
    }
    let last = term.first_index() + count as i64 - 1;
    if t_last.is_zero() {
        return Some(TailBound::zero());
    }
    let lim = term.limit_ratio()?;
    if lim < Q::one() {
        geometric(term, last, t_last)
    } else if lim == Q::one() {
        if term.limit_sign() < 0 {
            alternating(term, last, t_last)
        } else {
            power_law(term, last, t_last)
        }
    } else {
        None
    }
}
