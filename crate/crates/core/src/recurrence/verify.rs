//! Exact and numeric checks of catalog recurrences.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::RecurrenceCatalog;
use super::family::fmt_point;
use super::rec::Recurrence;
use crate::error::{Error, Result};
use crate::exact::{rf_equal, MultiPoly, RationalFunction, Q};
use crate::par::Exec;
use crate::series::{evaluate, partial_sum_exact, Ball};

fn probe_point(rec: &Recurrence, n: u64, y: &Q) -> Result<Vec<Q>> {
    if rec.probe.is_empty() {
        return Err(Error::Unsupported(format!("{} has no terminating specialisation", rec.id)));
    }
    let at: HashMap<String, Q> = [("n".to_string(), Q::from_integer(n.into())), ("y".to_string(), y.clone())].into();
    rec.probe
        .iter()
        .map(|f| f.eval(&at).map_err(|e| Error::InadmissibleParameters(format!("{}: {e}", rec.id))))
        .collect()
}

/// Exact sum of a family member that must terminate.
fn finite_sum(cat: &RecurrenceCatalog, family: &str, point: &[Q]) -> Result<Q> {
    let t = cat.family(family)?.instantiate(point)?;
    let len = t.finite_len().ok_or_else(|| {
        Error::Unsupported(format!("{family} at {} does not terminate", fmt_point(point)))
    })?;
    partial_sum_exact(&t, len)
}

/// Checks the recurrence as an identity between terminating sums at the
/// specialisation `x = -n` (or the entry's own probe).
///
/// Entries with a lift are checked through the entry they embed into, after
/// confirming that the embedding reproduces their coefficients.
pub fn verify_terminating(cat: &RecurrenceCatalog, rec: &Recurrence, n: u64, y: &Q) -> Result<bool> {
    if rec.lift.is_some() {
        if !lift_consistent(cat, rec, 0)? {
            return Ok(false);
        }
        let target = cat.get(&rec.lift.as_ref().expect("checked").target)?;
        return verify_terminating(cat, target, n, y);
    }
    let p = probe_point(rec, n, y)?;
    let lhs = finite_sum(cat, &rec.family, &p)?;
    let a = rec.apply(&p)?;
    let rhs = if a.r2.is_zero() {
        // The shifted series drops out, but a pole in it still makes the
        // identity a limit rather than an equation between values.
        cat.family(&rec.target)?.instantiate(&a.shifted)?;
        a.r1
    } else {
        a.r1 + a.r2 * finite_sum(cat, &rec.target, &a.shifted)?
    };
    Ok(lhs == rhs)
}

/// For a lifted entry: its family and coefficients equal the target's
/// after substituting the lift.
pub fn lift_consistent(cat: &RecurrenceCatalog, rec: &Recurrence, seed: u64) -> Result<bool> {
    let lift = rec
        .lift
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} has no lift", rec.id)))?;
    let target = cat.get(&lift.target)?;
    let pull = |f: &RationalFunction| -> Result<RationalFunction> {
        // Rename first so that a lift such as `y = p` cannot capture itself.
        let mut g = f.clone();
        for (name, _) in &lift.at {
            g = g.substitute(name, &MultiPoly::var(&format!("{name}'")))?;
        }
        for (name, by) in &lift.at {
            g = g.substitute_rf(&format!("{name}'"), by)?;
        }
        Ok(g)
    };
    let fam = cat.family(&rec.family)?;
    let tfam = cat.family(&target.family)?;
    Ok(rf_equal(&pull(&target.r1)?, &rec.r1, seed)
        && rf_equal(&pull(&target.r2)?, &rec.r2, seed)
        && rf_equal(&pull(&tfam.ratio)?, &fam.ratio, seed)
        && rf_equal(&pull(&tfam.first)?, &fam.first, seed))
}

/// For a presentation view: `r1_c = pi(P) r1_v` and `r2_c = pi(P) r2_v / pi(P + shift)`
/// where `pi` is the prefactor and `c` the canonical entry.
pub fn view_consistent(cat: &RecurrenceCatalog, rec: &Recurrence, seed: u64) -> Result<bool> {
    let view = rec
        .view
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a view", rec.id)))?;
    let canon = cat.get(&view.of)?;
    if canon.shift != rec.shift || canon.params != rec.params {
        return Ok(false);
    }
    let pi = &view.prefactor;
    let d: Vec<(String, Q)> = rec.params.iter().cloned().zip(rec.shift.iter().cloned()).collect();
    let pi_shifted = pi.shift_all(&d);
    let r1 = pi * &rec.r1;
    let r2 = (pi * &rec.r2).checked_div(&pi_shifted)?;
    let fam = cat.family(&rec.family)?;
    let cfam = cat.family(&canon.family)?;
    // The canonical family is the view family scaled by the prefactor.
    let first = pi * &fam.first;
    Ok(rf_equal(&r1, &canon.r1, seed)
        && rf_equal(&r2, &canon.r2, seed)
        && rf_equal(&first, &cfam.first, seed)
        && rf_equal(&fam.ratio, &cfam.ratio, seed))
}

/// Outcome of a seeded sweep of terminating checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub id: String,
    pub checked: usize,
    /// `y` values that hit a pole and were replaced, as `(n, y)`.
    pub redrawn: Vec<(u64, Q)>,
    /// `(n, y)` pairs where the identity failed.
    pub failures: Vec<(u64, Q)>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Random rational with numerator in `[-20, 20]` and denominator in `[1, 6]`.
pub fn draw_y(rng: &mut ChaCha8Rng) -> Q {
    let num: i64 = rng.gen_range(-20..=20);
    let den: i64 = rng.gen_range(1..=6);
    Q::new(num.into(), den.into())
}

/// Checks `rec` for every `n <= n_max` against `per_n` seeded values of `y`,
/// redrawing values that hit a pole.
pub fn sweep_terminating(
    cat: &RecurrenceCatalog,
    rec: &Recurrence,
    n_max: u64,
    per_n: usize,
    seed: u64,
    exec: Exec,
) -> Result<SweepReport> {
    // A lifted entry is checked once for consistency, then swept through its target.
    let rec = match &rec.lift {
        Some(l) => {
            if !lift_consistent(cat, rec, seed)? {
                return Ok(SweepReport { id: rec.id.clone(), checked: 1, failures: vec![(0, Q::zero())], ..Default::default() });
            }
            let mut t = cat.get(&l.target)?.clone();
            t.id = rec.id.clone();
            t
        }
        None => rec.clone(),
    };
    let rec = &rec;
    let ns: Vec<u64> = (0..=n_max).collect();
    let rows = exec.map(&ns, |&n| -> Result<SweepReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut rep = SweepReport::default();
        let mut tries = 0;
        while rep.checked < per_n {
            tries += 1;
            if tries > 50 * per_n {
                return Err(Error::InadmissibleParameters(format!("{}: no admissible y at n = {n}", rec.id)));
            }
            let y = draw_y(&mut rng);
            match verify_terminating(cat, rec, n, &y) {
                Ok(true) => rep.checked += 1,
                Ok(false) => {
                    rep.checked += 1;
                    rep.failures.push((n, y));
                }
                Err(Error::InadmissibleParameters(_)) => rep.redrawn.push((n, y)),
                Err(e) => return Err(e),
            }
        }
        Ok(rep)
    });
    let mut out = SweepReport { id: rec.id.clone(), ..Default::default() };
    for r in rows {
        let r = r?;
        out.checked += r.checked;
        out.redrawn.extend(r.redrawn);
        out.failures.extend(r.failures);
    }
    Ok(out)
}

/// A parameter point for numeric checks from a draw `(x, y)`.
pub fn sample_point(rec: &Recurrence, x: &Q, y: &Q) -> Result<Vec<Q>> {
    let at = [("x", x.clone()), ("y", y.clone())];
    rec.sample
        .iter()
        .map(|f| f.eval_at(&at).map_err(|e| Error::InadmissibleParameters(e.to_string())))
        .collect()
}

/// Certified bound on `|h(P) - r1(P) - r2(P) h'(P + shift)|` with both series
/// evaluated to `digits` digits.
pub fn numeric_gap(cat: &RecurrenceCatalog, rec: &Recurrence, point: &[Q], digits: u32) -> Result<Q> {
    let a = rec.apply(point)?;
    let lhs = evaluate(&cat.family(&rec.family)?.instantiate(point)?, digits)?.value;
    let rhs = evaluate(&cat.family(&rec.target)?.instantiate(&a.shifted)?, digits)?.value;
    let gap = (&lhs.center - &a.r1 - &a.r2 * &rhs.center).abs();
    Ok(gap + lhs.radius + a.r2.abs() * rhs.radius)
}

/// `(prod_{i<m} r2(P_i)) * h(P_m)`: the remainder after `m` steps.
///
/// The shifted series is evaluated to `digits` digits; if it cannot be
/// evaluated (divergent or too slow) the remainder does not vanish.
pub fn residual(cat: &RecurrenceCatalog, rec: &Recurrence, point: &[Q], m: usize, digits: u32) -> Result<Ball> {
    if m > 1 && !rec.is_endo() {
        return Err(Error::Composition(format!("{} cannot be iterated: {} -> {}", rec.id, rec.family, rec.target)));
    }
    let mut p = point.to_vec();
    for _ in 0..m {
        p = rec.shifted(&p);
    }
    let prod = rec.r2_product(point, m)?;
    let fam = if m == 0 { &rec.family } else { &rec.target };
    let h = cat.family(fam)?.instantiate(&p)?;
    let v = evaluate(&h, digits).map_err(|e| match e {
        Error::TooSlow(msg) => Error::NonVanishingRemainder(format!("{} at {}: {msg}", rec.id, fmt_point(&p))),
        e => e,
    })?;
    Ok(Ball { center: &prod * &v.value.center, radius: prod.abs() * v.value.radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qf};

    fn cat() -> RecurrenceCatalog {
        RecurrenceCatalog::builtin().unwrap()
    }

    #[test]
    fn apply_examples() {
        let c = cat();
        let a = c.get("S_EQ1").unwrap().apply(&[q(1), q(2)]).unwrap();
        assert_eq!((a.r1, a.r2, a.shifted), (qf(7, 18), qf(1, 9), vec![q(1), q(3)]));
        let a = c.get("S_EQ2").unwrap().apply(&[q(1), q(2)]).unwrap();
        assert_eq!((a.r1, a.r2, a.shifted), (qf(1, 3), qf(1, 9), vec![q(2), q(2)]));
        let a = c.get("T3M1_Y2").unwrap().apply(&[qf(1, 2), q(2)]).unwrap();
        assert_eq!(a.shifted, vec![qf(1, 2), q(4)]);
        assert!(matches!(
            c.get("S_EQ1").unwrap().apply(&[q(1), qf(1, 2)]),
            Err(Error::InadmissibleParameters(_))
        ));
    }

    #[test]
    fn terminating_examples() {
        let c = cat();
        assert!(verify_terminating(&c, c.get("T31_X").unwrap(), 3, &q(5)).unwrap());
        assert!(verify_terminating(&c, c.get("F65_Y").unwrap(), 2, &qf(7, 2)).unwrap());
        assert!(verify_terminating(&c, c.get("FROM_DML").unwrap(), 4, &qf(2, 3)).unwrap());
        assert!(verify_terminating(&c, c.get("KNOPP_P").unwrap(), 5, &qf(7, 3)).unwrap());
        // n = 4, y = 3 meets (y - n)_k = 0 at k = 1 inside the support.
        assert!(matches!(
            verify_terminating(&c, c.get("T3M1_YY2").unwrap(), 4, &q(3)),
            Err(Error::InadmissibleParameters(_))
        ));
        assert!(verify_terminating(&c, c.get("T3M1_YY2").unwrap(), 4, &qf(7, 2)).unwrap());
    }

    #[test]
    fn views_and_lift() {
        let c = cat();
        assert!(view_consistent(&c, c.get("T31_Y").unwrap(), 3).unwrap());
        assert!(view_consistent(&c, c.get("T31_X").unwrap(), 3).unwrap());
        assert!(lift_consistent(&c, c.get("KNOPP_P").unwrap(), 3).unwrap());
    }

    #[test]
    fn shifting_x_in_the_2018_form_is_not_an_identity() {
        let c = cat();
        let mut bad = c.get("LN2018").unwrap().clone();
        bad.shift = vec![q(1), q(0)];
        let failures = (1..6).filter(|&n| !verify_terminating(&c, &bad, n, &qf(5, 3)).unwrap()).count();
        assert_eq!(failures, 5);
    }

    #[test]
    fn identity_composition_is_neutral() {
        let c = cat();
        let r = c.get("F65_Y").unwrap();
        let id = Recurrence::identity("f65", &r.params);
        for comp in [id.compose(r).unwrap(), r.compose(&id).unwrap()] {
            assert!(rf_equal(&comp.r1, &r.r1, 1) && rf_equal(&comp.r2, &r.r2, 1));
            assert_eq!(comp.shift, r.shift);
        }
    }

    #[test]
    fn residual_at_zero_steps_is_the_series() {
        let c = cat();
        let r = c.get("T3M1_Y2").unwrap();
        let b = residual(&c, r, &[qf(1, 2), q(2)], 0, 12).unwrap();
        let direct = evaluate(&c.family("t3f2").unwrap().instantiate(&[qf(1, 2), q(2)]).unwrap(), 12).unwrap();
        assert_eq!(b, direct.value);
    }

    #[test]
    fn r2_limit_along_path() {
        let c = cat();
        let lim = c.get("T3M1_Y2").unwrap().r2_limit(&[qf(1, 2), q(2)]).unwrap();
        assert_eq!(lim, Some(qf(1, 4)));
        let lim = c.get("F54M1_X").unwrap().r2_limit(&[qf(1, 2), qf(1, 2)]).unwrap();
        assert_eq!(lim, Some(q(1)));
    }
}
