//! Evaluation to a requested number of correct digits.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bounds::{tail_bound, TailBound, TailRegime};
use super::sum::{partial_sum_exact_with, partial_sum_fixed};
use super::term::HyperTerm;
use crate::error::{Error, Result};
use crate::exact::rational::{floor_log10, pow10, to_decimal};
use crate::exact::Q;
use crate::par::Exec;

/// An exact rational center with a rational error radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Q,
    pub radius: Q,
}

impl Ball {
    pub fn exact(center: Q) -> Self {
        Ball { center, radius: Q::zero() }
    }

    /// Whether `x` lies in the ball.
    pub fn contains(&self, x: &Q) -> bool {
        (&self.center - x).abs() <= self.radius
    }

    /// `floor(log10(|center| / radius))`, capped at `cap` for exact or
    /// near-exact balls.
    pub fn digits(&self, cap: i64) -> i64 {
        if self.center.is_zero() {
            return 0;
        }
        if self.radius.is_zero() {
            return cap;
        }
        floor_log10(&(self.center.abs() / &self.radius)).min(cap)
    }

    /// Rounds the center to `frac` decimal places, widening the radius by
    /// the rounding error.
    pub fn rounded(&self, frac: u32) -> Ball {
        let s = pow10(frac as i64);
        let c = Q::new((&self.center * &s).round().to_integer(), s.to_integer());
        let r = &self.radius + (&c - &self.center).abs();
        Ball { center: c, radius: r }
    }

    pub fn center_decimal(&self, frac: usize) -> String {
        to_decimal(&self.center, frac)
    }

    /// Radius rendered in scientific notation with a rounded-up mantissa.
    pub fn radius_sci(&self) -> String {
        sci_up(&self.radius)
    }
}

/// `x` in scientific notation, three significant digits, rounded away from zero.
pub fn sci_up(x: &Q) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let e = floor_log10(&x.abs());
    let m = (x.abs() / pow10(e - 2)).ceil().to_integer();
    let m = m.to_u64().unwrap_or(999);
    let (m, e) = if m >= 1000 { (100, e + 1) } else { (m, e) };
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{}.{:02}e{e}", m / 100, m % 100)
}

/// Digits reported for sums that terminated (no truncation error at all).
pub const EXACT_DIGITS: i64 = 1_000_000;

/// A certified enclosure of the full series value.
#[derive(Clone, Debug)]
pub struct EvalResult {
    /// Enclosure of the true sum: partial sum plus tail center, with the
    /// tail radius, rounding error and any fixed-point error folded in.
    pub value: Ball,
    pub terms_used: u64,
    /// Largest possible magnitude of the omitted tail.
    pub tail_bound: Q,
    pub digits_correct: i64,
    pub regime: TailRegime,
}

impl EvalResult {
    /// Plain-decimal rendering with `frac` fractional digits.
    pub fn value_decimal(&self, frac: usize) -> String {
        self.value.center_decimal(frac)
    }
}

/// Knobs for [`evaluate_with`].
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Give up (too slow) beyond this many terms.
    pub term_cap: u64,
    /// Switch to fixed-point accumulation beyond this many terms.
    pub fixed_threshold: u64,
    pub exec: Exec,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { term_cap: 1_000_000, fixed_threshold: 20_000, exec: Exec::default() }
    }
}

/// Sums exactly `count` terms and certifies the tail there.
///
/// Errors when no tail certificate applies at this cut-off.
pub fn evaluate_terms(term: &HyperTerm, count: u64, target_digits: u32, opts: &EvalOptions) -> Result<EvalResult> {
    let count = match term.finite_len() {
        Some(n) => count.min(n),
        None => count,
    };
    // `t_last` is the last summed term; `slack` bounds its error in fixed point.
    let (partial, t_last, slack) = if count > opts.fixed_threshold && term.finite_len().is_none() {
        // Working precision: target plus room for the ulp count of the error recursion.
        let bits = ((target_digits as f64 + 12.0) * 3.33).ceil() as u32 + 2 * (64 - count.leading_zeros());
        let f = partial_sum_fixed(term, count, bits)?;
        // Upper bound on |t_last| carrying the approximate sign.
        let mag = f.last_term.abs() + &f.radius;
        let t = if f.last_term.is_negative() { -mag } else { mag };
        (Ball { center: f.center, radius: f.radius.clone() }, t, f.radius * Q::from_integer(BigInt::from(2)))
    } else {
        let s = partial_sum_exact_with(term, count, opts.exec)?;
        let t = if count == 0 { Q::zero() } else { term.term(term.first_index() + count as i64 - 1)? };
        (Ball::exact(s), t, Q::zero())
    };
    let tail: TailBound = if term.finite_len().is_some_and(|n| count >= n) {
        TailBound { regime: TailRegime::Finite, center: Q::zero(), radius: Q::zero(), rho: None }
    } else {
        let mut b = tail_bound(term, count, &t_last)
            .ok_or_else(|| Error::TooSlow(format!("no tail certificate after {count} terms")))?;
        b.radius += slack;
        b
    };
    let raw = Ball {
        center: &partial.center + &tail.center,
        radius: &partial.radius + &tail.radius,
    };
    let value = if raw.radius.is_zero() {
        raw
    } else {
        let mag = if raw.center.is_zero() { 0 } else { floor_log10(&raw.center.abs()) };
        let frac = (target_digits as i64 + 20 - mag.min(0)).max(1) as u32;
        raw.rounded(frac)
    };
    let digits_correct = if tail.regime == TailRegime::Finite && value.radius.is_zero() {
        EXACT_DIGITS
    } else {
        value.digits(EXACT_DIGITS)
    };
    Ok(EvalResult { terms_used: count, tail_bound: tail.magnitude(), digits_correct, regime: tail.regime, value })
}

/// Evaluates until `target_digits` are certified or the term cap is hit.
///
/// Returns the best result reached even if it falls short; use
/// [`evaluate_with`] to turn a shortfall into [`Error::TooSlow`].
pub fn evaluate_capped(term: &HyperTerm, target_digits: u32, opts: &EvalOptions) -> Result<EvalResult> {
    if let Some(n) = term.finite_len() {
        return evaluate_terms(term, n, target_digits, opts);
    }
    let lim = term
        .limit_ratio()
        .ok_or_else(|| Error::TooSlow("terms grow without bound".into()))?;
    if lim > Q::one() {
        return Err(Error::TooSlow(format!("ratio tends to {lim} > 1")));
    }
    let want = target_digits as f64 + 1.0;
    let mut n: u64 = if lim < Q::one() && !lim.is_zero() {
        let l = lim.to_f64().unwrap_or(0.5).max(1e-300);
        ((want * std::f64::consts::LN_10 / -l.ln()).ceil() as u64 + 4).max(4)
    } else {
        16
    };
    let mut best: Option<EvalResult> = None;
    let mut history: Vec<(u64, i64)> = Vec::new();
    loop {
        n = n.min(opts.term_cap);
        let res = evaluate_terms(term, n, target_digits, opts);
        match res {
            Ok(r) => {
                if r.digits_correct >= target_digits as i64 || n >= opts.term_cap {
                    return Ok(better(best, r));
                }
                history.push((n, r.digits_correct));
                n = next_count(n, &history, target_digits as i64);
                best = Some(better(best, r));
            }
            Err(Error::TooSlow(_)) if n < opts.term_cap => n = n.saturating_mul(2),
            Err(e) => return best.map_or(Err(e), Ok),
        }
    }
}

fn better(best: Option<EvalResult>, r: EvalResult) -> EvalResult {
    match best {
        Some(b) if b.digits_correct > r.digits_correct => b,
        _ => r,
    }
}

/// Extrapolates the next term count from the digits reached so far,
/// assuming digits grow either linearly or logarithmically in the count.
fn next_count(n: u64, history: &[(u64, i64)], target: i64) -> u64 {
    let grow = n.saturating_mul(4);
    let [.., (n1, d1), (n2, d2)] = history else {
        return grow;
    };
    if d2 <= d1 {
        return grow;
    }
    let need = (target - d2 + 1) as f64;
    let per_term = (d2 - d1) as f64 / (n2 - n1) as f64;
    let per_log = (d2 - d1) as f64 / ((*n2 as f64) / (*n1 as f64)).log10();
    // The faster of the two models is geometric; the slower one is a power law.
    let linear = *n2 as f64 + need / per_term;
    let power = *n2 as f64 * 10f64.powf(need / per_log);
    let guess = if power < 4.0 * *n2 as f64 { linear.max(power) } else { power };
    ((guess * 1.1).ceil() as u64).clamp(n + 1, n.saturating_mul(64))
}

/// Evaluates to `target_digits`; a shortfall at the term cap is an error.
pub fn evaluate_with(term: &HyperTerm, target_digits: u32, opts: &EvalOptions) -> Result<EvalResult> {
    let r = evaluate_capped(term, target_digits, opts)?;
    if r.digits_correct < target_digits as i64 {
        return Err(Error::TooSlow(format!(
            "{} digits after {} terms (cap {}), wanted {target_digits}",
            r.digits_correct, r.terms_used, opts.term_cap
        )));
    }
    Ok(r)
}

pub fn evaluate(term: &HyperTerm, target_digits: u32) -> Result<EvalResult> {
    evaluate_with(term, target_digits, &EvalOptions::default())
}

/// Empirical convergence rate near index `n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateEstimate {
    /// `|t(n_max + 1) / t(n_max)|`.
    pub raw: Q,
    /// The raw ratio at `n_max / 4`, `n_max / 2`, `3 n_max / 4` and `n_max`,
    /// interpolated by a cubic in `1/n` and evaluated at `1/n = 0`. This
    /// removes the `1/n` drift that makes the raw ratio of series with many
    /// linear factors approach its limit slowly.
    pub extrapolated: Q,
}

impl RateEstimate {
    /// Relative deviation of the extrapolated rate from `claimed`.
    pub fn relative_error(&self, claimed: &Q) -> Q {
        if claimed.is_zero() {
            return self.extrapolated.abs();
        }
        ((&self.extrapolated - claimed) / claimed).abs()
    }
}

pub fn estimate_rate(term: &HyperTerm, n_max: i64) -> Result<RateEstimate> {
    if n_max < 10 {
        return Err(Error::Domain(format!("n_max = {n_max} must be at least 10")));
    }
    let raw_at = |n: i64| -> Result<Q> {
        if n < term.first_index() {
            return Err(Error::Domain(format!("index {n} precedes the first index")));
        }
        if term.last_index().is_some_and(|s| n > s) {
            return Err(Error::DegenerateIndex(n));
        }
        Ok(term.ratio_at(n)?.abs())
    };
    if term.last_index().is_some_and(|s| n_max > s) {
        return Err(Error::DegenerateIndex(n_max));
    }
    let nodes = [n_max / 4, n_max / 2, 3 * n_max / 4, n_max];
    let raws = nodes.iter().map(|&n| raw_at(n)).collect::<Result<Vec<_>>>()?;
    let h = |n: i64| Q::new(BigInt::one(), BigInt::from(n));
    let mut extrapolated = Q::zero();
    for (i, (&ni, ri)) in nodes.iter().zip(&raws).enumerate() {
        let mut w = Q::one();
        for (j, &nj) in nodes.iter().enumerate() {
            if j != i {
                w *= h(nj) / (h(nj) - h(ni));
            }
        }
        extrapolated += w * ri;
    }
    Ok(RateEstimate { raw: raws[3].clone(), extrapolated })
}
