//! Turning a recurrence into an accelerated series.

use num_traits::{One, Zero};

use super::identity::{IdentityCatalog, IdentityRecord, VAR};
use crate::error::{Error, Result};
use crate::exact::{rf_equal, MultiPoly, Q};
use crate::recurrence::{residual, Recurrence, RecurrenceCatalog};
use crate::series::Ball;

/// The first terms of an accelerated series and what is known about it.
#[derive(Clone, Debug)]
pub struct AccelerationRun {
    pub route: String,
    pub start: Vec<Q>,
    pub steps: usize,
    /// `a_j = (prod_{i<j} r2(P_i)) r1(P_j)` for `j < steps`.
    pub terms: Vec<Q>,
    /// `lim |r2|` along the path: the convergence rate of the new series.
    pub rate: Q,
    /// `(prod_{i<steps} r2(P_i)) h(P_steps)`, when requested.
    pub remainder: Option<Ball>,
    /// Catalog identity this run reproduces.
    pub identity: Option<String>,
}

impl AccelerationRun {
    pub fn partial_sum(&self) -> Q {
        self.terms.iter().fold(Q::zero(), |a, t| a + t)
    }
}

/// Applies `route` (a recurrence id or a composition such as `F65_X+F65_Y`)
/// `steps` times from `start`.
///
/// The remainder must vanish: `|r2|` has to tend to a limit below one along
/// the path, and when `remainder_digits` is given the remaining series is
/// evaluated to that many digits.
pub fn accelerate(
    recs: &RecurrenceCatalog,
    ids: &IdentityCatalog,
    route: &str,
    start: &[Q],
    steps: usize,
    remainder_digits: Option<u32>,
) -> Result<AccelerationRun> {
    let rec = recs.route(route)?;
    if !rec.is_endo() {
        return Err(Error::AccelerationFailure(format!("{route} maps {} to {}", rec.family, rec.target)));
    }
    let rate = match rec.r2_limit(start)? {
        Some(l) if l < Q::one() => l,
        Some(l) => return Err(Error::AccelerationFailure(format!("|r2| tends to {l} along {route}"))),
        None => return Err(Error::AccelerationFailure(format!("|r2| grows without bound along {route}"))),
    };
    let terms = rec.lemma_terms(start, steps)?;
    let remainder = match remainder_digits {
        Some(d) => Some(residual(recs, &rec, start, steps, d).map_err(|e| match e {
            Error::NonVanishingRemainder(m) => Error::AccelerationFailure(m),
            e => e,
        })?),
        None => None,
    };
    Ok(AccelerationRun {
        identity: ids.by_route(route, start).map(|r| r.id.clone()),
        route: rec.id,
        start: start.to_vec(),
        steps,
        terms,
        rate,
        remainder,
    })
}

/// First index from which the record's terms follow the run.
pub fn aligned_start(record: &IdentityRecord) -> Result<i64> {
    let a = record
        .accel
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} has no acceleration route", record.id)))?;
    Ok(record.lower.max(a.offset))
}

/// Compares `summand(n)` with `scale * a_(n - offset)` for `count` indices.
/// Returns the first index that differs.
pub fn first_mismatch(record: &IdentityRecord, run: &AccelerationRun, count: usize) -> Result<Option<i64>> {
    let a = record.accel.as_ref().expect("aligned_start checks");
    let n0 = aligned_start(record)?;
    let scale = a.scale_q()?;
    let s = record.parsed_summand()?;
    for n in n0..n0 + count as i64 {
        let j = (n - a.offset) as usize;
        let emitted = run
            .terms
            .get(j)
            .ok_or_else(|| Error::Domain(format!("run has {} terms, index {j} requested", run.terms.len())))?;
        if s.value(n)? != &scale * emitted {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Runs the record's route far enough to cover `count` aligned indices.
pub fn run_for(recs: &RecurrenceCatalog, ids: &IdentityCatalog, record: &IdentityRecord, count: usize) -> Result<AccelerationRun> {
    let a = record
        .accel
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} has no acceleration route", record.id)))?;
    let steps = (aligned_start(record)? - a.offset) as usize + count;
    accelerate(recs, ids, &a.route, &a.point_q()?, steps, None)
}

/// Whether the record's summand follows the route for every index, not just
/// finitely many: its term ratio equals the ratio `a(j+1)/a(j)` of the
/// accelerated terms as a rational function, and the first aligned terms
/// agree.
pub fn ratio_matches(recs: &RecurrenceCatalog, record: &IdentityRecord, seed: u64) -> Result<bool> {
    let a = record
        .accel
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} has no acceleration route", record.id)))?;
    let rec: Recurrence = recs.route(&a.route)?;
    let point = a.point_q()?;
    let j = "j__";
    let lemma = rec.lemma_ratio(&point, j)?;
    // j = n - offset
    let line = &MultiPoly::var(VAR) - &MultiPoly::constant(Q::from_integer(a.offset.into()));
    let lemma_n = lemma.substitute(j, &line)?;
    let s = record.parsed_summand()?;
    if !rf_equal(&s.ratio()?, &lemma_n, seed) {
        return Ok(false);
    }
    let n0 = aligned_start(record)?;
    let first = rec.lemma_terms(&point, (n0 - a.offset) as usize + 1)?;
    Ok(s.value(n0)? == a.scale_q()? * first.last().expect("at least one term"))
}
