//! Recurrences `h(P) = r1(P) + r2(P) * h'(P + shift)` and their algebra.

use num_traits::{One, Signed, Zero};

use super::family::fmt_point;
use crate::error::{Error, Result};
use crate::exact::{MultiPoly, RationalFunction, Q};

/// A presentation of another entry that differs by a prefactor:
/// `prefactor(P) * this_family(P) = canonical_family(P)`.
#[derive(Clone, Debug)]
pub struct View {
    pub of: String,
    pub prefactor: RationalFunction,
    pub prefactor_src: String,
}

/// Embedding of a recurrence into another one with more parameters.
/// `at` gives each parameter of the target as a function of ours.
#[derive(Clone, Debug)]
pub struct Lift {
    pub target: String,
    pub at: Vec<(String, RationalFunction)>,
}

#[derive(Clone, Debug)]
pub struct Recurrence {
    pub id: String,
    /// Family on the left-hand side.
    pub family: String,
    /// Family of the shifted series on the right-hand side.
    pub target: String,
    /// Parameter names shared by both families.
    pub params: Vec<String>,
    /// Shift per parameter, aligned with `params`.
    pub shift: Vec<Q>,
    pub r1: RationalFunction,
    pub r2: RationalFunction,
    pub r1_src: String,
    pub r2_src: String,
    pub anchor: String,
    pub view: Option<View>,
    pub lift: Option<Lift>,
    /// Terminating specialisation: each parameter as a function of `n`, `y`.
    pub probe: Vec<RationalFunction>,
    /// Fast-convergence sampler: each parameter as a function of `x`, `y`.
    pub sample: Vec<RationalFunction>,
}

/// Coefficient values at a point, plus where the right-hand series lives.
#[derive(Clone, Debug, PartialEq)]
pub struct Applied {
    pub r1: Q,
    pub r2: Q,
    pub shifted: Vec<Q>,
}

impl Recurrence {
    /// The recurrence `h = 0 + 1 * h` over `family`.
    pub fn identity(family: &str, params: &[String]) -> Recurrence {
        let vars: Vec<RationalFunction> = params.iter().map(|p| RationalFunction::var(p)).collect();
        Recurrence {
            id: "ID".into(),
            family: family.into(),
            target: family.into(),
            params: params.to_vec(),
            shift: vec![Q::zero(); params.len()],
            r1: RationalFunction::zero(),
            r2: RationalFunction::one(),
            r1_src: "0".into(),
            r2_src: "1".into(),
            anchor: String::new(),
            view: None,
            lift: None,
            probe: Vec::new(),
            sample: vars,
        }
    }

    fn at(&self, point: &[Q]) -> Result<Vec<(&str, Q)>> {
        if point.len() != self.params.len() {
            return Err(Error::InadmissibleParameters(format!(
                "{} takes {} parameters, got {}",
                self.id,
                self.params.len(),
                point.len()
            )));
        }
        Ok(self.params.iter().map(String::as_str).zip(point.iter().cloned()).collect())
    }

    pub fn shifted(&self, point: &[Q]) -> Vec<Q> {
        point.iter().zip(&self.shift).map(|(p, d)| p + d).collect()
    }

    /// Exact `r1`, `r2` at `point` and the shifted point.
    pub fn apply(&self, point: &[Q]) -> Result<Applied> {
        let at = self.at(point)?;
        let pole = |e: Error| Error::InadmissibleParameters(format!("{} at {}: {e}", self.id, fmt_point(point)));
        Ok(Applied {
            r1: self.r1.eval_at(&at).map_err(pole)?,
            r2: self.r2.eval_at(&at).map_err(pole)?,
            shifted: self.shifted(point),
        })
    }

    fn shift_pairs(&self) -> Vec<(String, Q)> {
        self.params
            .iter()
            .cloned()
            .zip(self.shift.iter().cloned())
            .filter(|(_, d)| !d.is_zero())
            .collect()
    }

    /// Applies `self`, then `next` to the shifted series.
    ///
    /// `r1 = r1_a + r2_a * r1_b(P + shift_a)`, `r2 = r2_a * r2_b(P + shift_a)`.
    pub fn compose(&self, next: &Recurrence) -> Result<Recurrence> {
        if self.target != next.family {
            return Err(Error::Composition(format!(
                "{} yields family {} but {} acts on {}",
                self.id, self.target, next.id, next.family
            )));
        }
        if self.params != next.params {
            return Err(Error::Composition(format!("{} and {} use different parameters", self.id, next.id)));
        }
        let d = self.shift_pairs();
        let r1b = next.r1.shift_all(&d);
        let r2b = next.r2.shift_all(&d);
        let r1 = &self.r1 + &(&self.r2 * &r1b);
        let r2 = &self.r2 * &r2b;
        Ok(Recurrence {
            id: format!("{}+{}", self.id, next.id),
            family: self.family.clone(),
            target: next.target.clone(),
            params: self.params.clone(),
            shift: self.shift.iter().zip(&next.shift).map(|(a, b)| a + b).collect(),
            r1_src: r1.to_string(),
            r2_src: r2.to_string(),
            r1,
            r2,
            anchor: String::new(),
            view: None,
            lift: None,
            probe: self.probe.clone(),
            sample: self.sample.clone(),
        })
    }

    /// Whether the recurrence maps its family onto itself, so that it can be
    /// iterated.
    pub fn is_endo(&self) -> bool {
        self.family == self.target
    }

    /// The first `m` terms `(prod_{i<j} r2(P_i)) * r1(P_j)` of the
    /// accelerated series, where `P_j = P + j * shift`.
    pub fn lemma_terms(&self, point: &[Q], m: usize) -> Result<Vec<Q>> {
        let mut out = Vec::with_capacity(m);
        let mut prod = Q::one();
        let mut p = point.to_vec();
        for _ in 0..m {
            let a = self.apply(&p)?;
            out.push(&prod * &a.r1);
            prod *= a.r2;
            p = a.shifted;
        }
        Ok(out)
    }

    /// `prod_{i<m} r2(P_i)`.
    pub fn r2_product(&self, point: &[Q], m: usize) -> Result<Q> {
        let mut prod = Q::one();
        let mut p = point.to_vec();
        for _ in 0..m {
            let a = self.apply(&p)?;
            prod *= a.r2;
            p = a.shifted;
        }
        Ok(prod)
    }

    /// `r1` along the path `P + j * shift` as a rational function of `j`.
    pub fn r1_along(&self, point: &[Q], j: &str) -> Result<RationalFunction> {
        self.along(&self.r1, point, j)
    }

    /// `r2` along the path `P + j * shift` as a rational function of `j`.
    pub fn r2_along(&self, point: &[Q], j: &str) -> Result<RationalFunction> {
        self.along(&self.r2, point, j)
    }

    fn along(&self, f: &RationalFunction, point: &[Q], j: &str) -> Result<RationalFunction> {
        self.at(point)?;
        let mut f = f.clone();
        for ((name, p), d) in self.params.iter().zip(point).zip(&self.shift) {
            let line = &MultiPoly::constant(p.clone()) + &MultiPoly::var(j).scale(d);
            f = f.substitute(name, &line)?;
        }
        Ok(f)
    }

    /// `a(j+1) / a(j)` for the accelerated terms of [`Recurrence::lemma_terms`],
    /// as a rational function of `j`.
    pub fn lemma_ratio(&self, point: &[Q], j: &str) -> Result<RationalFunction> {
        let r1 = self.r1_along(point, j)?;
        let next = r1.shift(j, &Q::one());
        (&self.r2_along(point, j)? * &next).checked_div(&r1)
    }

    /// `lim_{j -> inf} |r2(P + j * shift)|`, or `None` when it diverges.
    pub fn r2_limit(&self, point: &[Q]) -> Result<Option<Q>> {
        let f = self.r2_along(point, "j__")?;
        let (dn, dd) = (f.num().degree_in("j__"), f.den().degree_in("j__"));
        if f.is_zero() || dn < dd {
            return Ok(Some(Q::zero()));
        }
        if dn > dd {
            return Ok(None);
        }
        let lc = |m: &MultiPoly| m.univariate_coeffs("j__").and_then(|c| c.last().cloned());
        match (lc(f.num()), lc(f.den())) {
            (Some(a), Some(b)) if !b.is_zero() => Ok(Some((a / b).abs())),
            _ => Ok(None),
        }
    }
}
