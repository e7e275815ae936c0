//! Checking catalog identities against the reference store.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::identity::{IdentityCatalog, IdentityRecord, Status};
use super::reference::TRUSTED_DIGITS;
use crate::error::{Error, Result};
use crate::exact::rational::{floor_log10, pow10, to_decimal};
use crate::exact::Q;
use crate::par::Exec;
use crate::series::{estimate_rate, evaluate_capped, EvalOptions, RateEstimate};

/// Index distance from the first term at which rates are measured.
pub const RATE_INDEX: i64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The digits could not be certified within the term cap.
    TooSlow,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub status: Status,
    pub outcome: Outcome,
    pub digits_target: u32,
    /// Digits on which series and constant provably agree, capped at the
    /// trusted precision of the reference store.
    pub digits_achieved: i64,
    pub terms_used: u64,
    pub rate_claimed: String,
    /// Extrapolated `|t(n+1)/t(n)|` near index [`RATE_INDEX`].
    pub rate_measured: Option<f64>,
    /// Whether the measured rate is within 1% of the claim.
    pub rate_ok: bool,
    pub value: String,
    pub note: String,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// Measured convergence rate of a record's series.
pub fn measured_rate(record: &IdentityRecord) -> Result<RateEstimate> {
    let t = record.term()?;
    estimate_rate(&t, t.first_index() + RATE_INDEX)
}

/// `max(1, |c|)`: agreement is measured in decimal places for constants
/// below one and in significant digits above.
fn scale_of(c: &Q) -> Q {
    let a = c.abs();
    if a < Q::one() {
        Q::one()
    } else {
        a
    }
}

/// Digits `d` for which `bound <= max(1, |c|) 10^-d`, capped at the trusted
/// precision of the reference store.
fn agreement_digits(c: &Q, bound: &Q) -> i64 {
    if bound.is_zero() {
        return TRUSTED_DIGITS as i64;
    }
    floor_log10(&(scale_of(c) / bound)).min(TRUSTED_DIGITS as i64)
}

/// Evaluates the record's series and compares it with its constant: the
/// record passes at `d` digits when the certified enclosure of the series
/// lies within `max(1, |C|) 10^-d` of the constant `C`. A record's own
/// `digits` and `term_cap` lower the target and raise the cap.
pub fn verify_identity(record: &IdentityRecord, digits: u32, opts: &EvalOptions) -> Result<VerifyReport> {
    if digits > TRUSTED_DIGITS {
        return Err(Error::Domain(format!("references are trusted to {TRUSTED_DIGITS} digits")));
    }
    let target = record.digits.map_or(digits, |d| d.min(digits));
    let mut opts = opts.clone();
    if let Some(cap) = record.term_cap {
        opts.term_cap = opts.term_cap.max(cap);
    }
    let term = record.term()?;
    let c = record.constant_value()?;
    let rate_claimed = record.rate_q()?;
    let (rate_measured, rate_ok) = match measured_rate(record) {
        Ok(r) => (r.extrapolated.to_f64(), r.relative_error(&rate_claimed) < Q::new(1.into(), 100.into())),
        Err(_) => (None, false),
    };
    // Significant digits of the series that amount to `target` places.
    let shift = if c.is_zero() { 0 } else { floor_log10(&c.abs()).min(0) };
    let sig = (target as i64 + 1 + shift).max(1) as u32;
    let r = match evaluate_capped(&term, sig, &opts) {
        Ok(r) => r,
        Err(Error::TooSlow(msg)) => {
            return Ok(VerifyReport {
                id: record.id.clone(),
                status: record.status,
                outcome: Outcome::TooSlow,
                digits_target: target,
                digits_achieved: 0,
                terms_used: 0,
                rate_claimed: record.rate.clone(),
                rate_measured,
                rate_ok,
                value: String::new(),
                note: msg,
            })
        }
        Err(e) => return Err(e),
    };
    let bound = (&r.value.center - &c).abs() + &r.value.radius;
    let achieved = agreement_digits(&c, &bound);
    let outcome = if bound <= scale_of(&c) * pow10(-(target as i64)) {
        Outcome::Pass
    } else if r.digits_correct < sig as i64 && r.terms_used >= opts.term_cap {
        Outcome::TooSlow
    } else {
        Outcome::Fail
    };
    Ok(VerifyReport {
        id: record.id.clone(),
        status: record.status,
        outcome,
        digits_target: target,
        digits_achieved: achieved,
        terms_used: r.terms_used,
        rate_claimed: record.rate.clone(),
        rate_measured,
        rate_ok,
        value: to_decimal(&r.value.center, target as usize + 2),
        note: format!("tail regime {:?}, radius {}", r.regime, r.value.radius_sci()),
    })
}

/// Verifies every record, one job per identity.
pub fn verify_all(cat: &IdentityCatalog, digits: u32, opts: &EvalOptions, exec: Exec) -> Vec<Result<VerifyReport>> {
    exec.map(&cat.identities, |r| verify_identity(r, digits, opts))
}
