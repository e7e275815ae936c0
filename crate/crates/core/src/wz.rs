//! Wilf–Zeilberger certificate checking.
//!
//! A pair is described by the two shift quotients of a hypergeometric term
//! `F(n, k)` and the certificate `R = G / F`. Dividing the WZ equation
//! `F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)` by `F(n,k)` gives
//!
//! ```text
//! ratio_n - 1 = R(n, k+1) * ratio_k - R(n, k)
//! ```
//!
//! which is checked as a rational-function identity. Any variable other than
//! `n` and `k` is a free parameter, so one check covers all its values.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{parse_rf, rf_equal, MultiPoly, RationalFunction, Q};

/// Index variables of every pair.
pub const N: &str = "n";
pub const K: &str = "k";

/// Beyond this many terms a sum over `k` is treated as non-terminating.
const SUPPORT_HORIZON: i64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// `F(n, k)` vanishes for large `k` at every integer `n >= 0`.
    Finite,
    Infinite,
}

#[derive(Clone, Debug)]
pub struct WZPair {
    /// Catalog recurrence the pair proves.
    pub target: String,
    /// `F(n+1, k) / F(n, k)`.
    pub ratio_n: RationalFunction,
    /// `F(n, k+1) / F(n, k)`.
    pub ratio_k: RationalFunction,
    /// `R = G / F`; absent for proof sums whose certificate is not shipped.
    pub certificate: Option<RationalFunction>,
    /// `F(n, 0)`, needed for sums and pointwise checks.
    pub first: Option<RationalFunction>,
    pub support: Support,
}

fn at_nk(n: i64, k: i64) -> [(String, Q); 2] {
    [(N.to_string(), Q::from_integer(n.into())), (K.to_string(), Q::from_integer(k.into()))]
}

/// Specialises `n`, `k` and the given parameters, leaving the rest symbolic.
fn specialize(f: &RationalFunction, n: i64, k: Option<i64>, params: &[(String, Q)]) -> Result<RationalFunction> {
    let [(nv, nq), (kv, kq)] = at_nk(n, k.unwrap_or(0));
    let mut g = f.specialize(&nv, &nq)?;
    if k.is_some() {
        g = g.specialize(&kv, &kq)?;
    }
    for (v, q) in params {
        g = g.specialize(v, q)?;
    }
    Ok(g)
}

/// Outcome of the pointwise WZ-equation check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointwiseReport {
    pub checked: usize,
    /// Points skipped because `R` or `F` has a pole there.
    pub skipped: usize,
    pub mismatches: Vec<(i64, i64)>,
}

impl WZPair {
    pub fn new(
        target: &str,
        ratio_n: RationalFunction,
        ratio_k: RationalFunction,
        certificate: Option<RationalFunction>,
        first: Option<RationalFunction>,
        support: Support,
    ) -> Result<Self> {
        let p = WZPair { target: target.into(), ratio_n, ratio_k, certificate, first, support };
        if !p.is_shift_compatible(0) {
            return Err(Error::MalformedPair(format!(
                "{target}: F(n+1,k)/F(n,k) and F(n,k+1)/F(n,k) do not come from one term"
            )));
        }
        Ok(p)
    }

    /// Whether `ratio_n(n,k) ratio_k(n+1,k) = ratio_k(n,k) ratio_n(n,k+1)`.
    pub fn is_shift_compatible(&self, seed: u64) -> bool {
        let one = Q::from_integer(1.into());
        let lhs = &self.ratio_n * &self.ratio_k.shift(N, &one);
        let rhs = &self.ratio_k * &self.ratio_n.shift(K, &one);
        rf_equal(&lhs, &rhs, seed)
    }

    fn cert(&self) -> Result<&RationalFunction> {
        self.certificate
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{}: no certificate supplied", self.target)))
    }

    /// The WZ equation divided through by `F`, decided by [`rf_equal`].
    /// Shift compatibility is checked once, by [`WZPair::new`].
    pub fn check_certificate(&self, seed: u64) -> Result<bool> {
        let r = self.cert()?;
        let one = RationalFunction::one();
        let lhs = &self.ratio_n - &one;
        let rhs = &(&r.shift(K, &Q::from_integer(1.into())) * &self.ratio_k) - r;
        Ok(rf_equal(&lhs, &rhs, seed))
    }

    fn first_rf(&self) -> Result<&RationalFunction> {
        self.first
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{}: F(n, 0) not supplied", self.target)))
    }

    /// `F(n, 0)`, `F(n, 1)`, ... up to the last nonzero term, symbolic in any
    /// parameter not fixed by `params`.
    pub fn row(&self, n: i64, f0: &RationalFunction, params: &[(String, Q)]) -> Result<Vec<RationalFunction>> {
        if self.support == Support::Infinite {
            return Err(Error::Unsupported(format!("{}: infinite support", self.target)));
        }
        let mut out = vec![f0.clone()];
        for k in 0..SUPPORT_HORIZON {
            let last = out.last().expect("nonempty");
            if last.is_zero() {
                out.pop();
                return Ok(out);
            }
            let r = specialize(&self.ratio_k, n, Some(k), params).map_err(|e| {
                Error::InadmissibleParameters(format!("{}: ratio_k at n = {n}, k = {k}: {e}", self.target))
            })?;
            if r.is_zero() {
                return Ok(out);
            }
            out.push(last * &r);
        }
        Err(Error::Unsupported(format!("{}: no termination in k by {SUPPORT_HORIZON} at n = {n}", self.target)))
    }

    /// `sum_k F(n, k)` for a terminating row, with `F(n, 0) = f0`.
    ///
    /// The sum is formed as `F0 (1 + r0 (1 + r1 (...)))` so that the
    /// denominators stay small when parameters are symbolic.
    pub fn row_sum(&self, n: i64, f0: &RationalFunction, params: &[(String, Q)]) -> Result<RationalFunction> {
        let row = self.row(n, f0, params)?;
        if row.is_empty() {
            return Ok(RationalFunction::zero());
        }
        let mut acc = RationalFunction::one();
        for k in (0..row.len() as i64 - 1).rev() {
            let r = specialize(&self.ratio_k, n, Some(k), params)?;
            acc = &RationalFunction::one() + &(&r * &acc);
        }
        Ok(&row[0] * &acc)
    }

    /// Whether `sum_k F(n, k)` is one and the same constant for every `n` in
    /// the range, with `F(n, 0)` given by `f0`. Free parameters stay
    /// symbolic, so the constant is established as a function identity and
    /// holds even where individual terms have poles.
    ///
    /// Returns the constant when it exists.
    pub fn check_sum_constant(
        &self,
        f0: impl Fn(i64) -> Result<RationalFunction>,
        ns: std::ops::RangeInclusive<i64>,
        params: &[(String, Q)],
        seed: u64,
    ) -> Result<Option<Q>> {
        let mut constant: Option<Q> = None;
        for n in ns {
            let s = self.row_sum(n, &f0(n)?, params)?;
            let c = match &constant {
                Some(c) => c.clone(),
                None => {
                    let c = generic_value(&s, seed)?;
                    constant = Some(c.clone());
                    c
                }
            };
            if !rf_equal(&s, &RationalFunction::constant(c), seed) {
                return Ok(None);
            }
        }
        Ok(constant)
    }

    /// `F(n, 0)` from the stored first-term expression.
    pub fn f0(&self, n: i64, params: &[(String, Q)]) -> Result<RationalFunction> {
        specialize(self.first_rf()?, n, None, params)
            .map_err(|e| Error::InadmissibleParameters(format!("{}: F({n}, 0): {e}", self.target)))
    }

    /// Numeric `F(n, k)` by iterating `ratio_k` from `F(n, 0)`.
    pub fn term(&self, n: i64, k: i64, params: &[(String, Q)]) -> Result<Q> {
        let mut t = constant_of(&self.f0(n, params)?)?;
        for j in 0..k {
            if t.is_zero() {
                break;
            }
            t *= constant_of(&specialize(&self.ratio_k, n, Some(j), params).map_err(|e| {
                Error::InadmissibleParameters(format!("{}: ratio_k at ({n}, {j}): {e}", self.target))
            })?)?;
        }
        Ok(t)
    }

    fn g(&self, n: i64, k: i64, params: &[(String, Q)]) -> Result<Q> {
        let r = constant_of(
            &specialize(self.cert()?, n, Some(k), params)
                .map_err(|e| Error::InadmissibleParameters(format!("{}: R({n}, {k}): {e}", self.target)))?,
        )?;
        Ok(r * self.term(n, k, params)?)
    }

    /// `G(n, b+1) - G(n, a)` together with `sum_{k=a}^{b} F(n+1,k) - F(n,k)`;
    /// the two agree when the certificate is valid. An empty range gives zeros.
    pub fn boundary_check(&self, n: i64, ks: std::ops::Range<i64>, params: &[(String, Q)]) -> Result<(Q, Q)> {
        if ks.is_empty() {
            return Ok((Q::zero(), Q::zero()));
        }
        let boundary = self.g(n, ks.end, params)? - self.g(n, ks.start, params)?;
        let mut summed = Q::zero();
        for k in ks {
            summed += self.term(n + 1, k, params)? - self.term(n, k, params)?;
        }
        Ok((boundary, summed))
    }

    /// Checks `F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)` at every integer point
    /// of `[0, n_max] x [0, k_max]`, skipping points where a value is a pole.
    pub fn pointwise(&self, n_max: i64, k_max: i64, params: &[(String, Q)]) -> Result<PointwiseReport> {
        let mut rep = PointwiseReport::default();
        for n in 0..=n_max {
            for k in 0..=k_max {
                let vals = (|| -> Result<(Q, Q, Q, Q)> {
                    Ok((
                        self.term(n + 1, k, params)?,
                        self.term(n, k, params)?,
                        self.g(n, k + 1, params)?,
                        self.g(n, k, params)?,
                    ))
                })();
                match vals {
                    Ok((a, b, c, d)) => {
                        rep.checked += 1;
                        if a - b != c - d {
                            rep.mismatches.push((n, k));
                        }
                    }
                    Err(Error::InadmissibleParameters(_)) => rep.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(rep)
    }

    /// Free parameters: every variable other than `n` and `k`.
    pub fn params(&self) -> Vec<String> {
        let mut vs: Vec<String> = [&self.ratio_n, &self.ratio_k]
            .into_iter()
            .chain(self.certificate.iter())
            .chain(self.first.iter())
            .flat_map(|f| f.vars())
            .filter(|v| v != N && v != K)
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// A copy whose certificate has one coefficient changed at random.
    pub fn mutated(&self, seed: u64) -> Result<WZPair> {
        let r = self.cert()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let in_num = rng.gen_bool(0.5);
        let poly = if in_num { r.num() } else { r.den() };
        let vars: Vec<String> = poly.vars().to_vec();
        let mut terms: Vec<(Vec<u32>, Q)> = poly.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        let i = rng.gen_range(0..terms.len());
        let mut delta = 0i64;
        while delta == 0 {
            delta = rng.gen_range(-5..=5);
        }
        terms[i].1 += Q::from_integer(delta.into());
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let p = MultiPoly::from_terms(&names, terms);
        let cert = if in_num {
            RationalFunction::new(p, r.den().clone())?
        } else if p.is_zero() {
            RationalFunction::new(r.num().clone(), MultiPoly::one())?
        } else {
            RationalFunction::new(r.num().clone(), p)?
        };
        Ok(WZPair { certificate: Some(cert), ..self.clone() })
    }

    /// Parses the certificate file format:
    ///
    /// ```text
    /// # comment
    /// target: T31_X
    /// ratio_n: <expression in n, k and parameters>
    /// ratio_k: <expression>
    /// certificate: <expression>
    /// first: <expression in n and parameters>   (optional)
    /// support: finite | infinite                (optional, default finite)
    /// ```
    ///
    /// Indented lines continue the previous value.
    pub fn parse(text: &str) -> Result<WZPair> {
        let mut fields: Vec<(String, String, usize)> = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let body = line.trim_end();
            if body.trim().is_empty() || body.trim_start().starts_with('#') {
                continue;
            }
            if body.starts_with(char::is_whitespace) {
                let (_, v, _) = fields
                    .last_mut()
                    .ok_or_else(|| Error::parse(start, "continuation line before any field"))?;
                v.push(' ');
                v.push_str(body.trim());
                continue;
            }
            let (key, value) = body
                .split_once(':')
                .ok_or_else(|| Error::parse(start, "expected `key: value`"))?;
            fields.push((key.trim().to_string(), value.trim().to_string(), start));
        }
        let mut map: HashMap<String, (String, usize)> = HashMap::new();
        for (k, v, pos) in fields {
            if !["target", "ratio_n", "ratio_k", "certificate", "first", "support"].contains(&k.as_str()) {
                return Err(Error::parse(pos, format!("unknown field `{k}`")));
            }
            if map.insert(k.clone(), (v, pos)).is_some() {
                return Err(Error::parse(pos, format!("duplicate field `{k}`")));
            }
        }
        let rf = |key: &str| -> Result<Option<RationalFunction>> {
            match map.get(key) {
                Some((src, pos)) => parse_rf(src).map(Some).map_err(|e| match e {
                    Error::Parse { pos: p, msg } => Error::parse(pos + p, format!("{key}: {msg}")),
                    e => e,
                }),
                None => Ok(None),
            }
        };
        let need = |key: &str| -> Result<RationalFunction> {
            rf(key)?.ok_or_else(|| Error::parse(0, format!("missing field `{key}`")))
        };
        let target = map
            .get("target")
            .map(|(t, _)| t.clone())
            .ok_or_else(|| Error::parse(0, "missing field `target`"))?;
        let support = match map.get("support").map(|(s, p)| (s.as_str(), *p)) {
            None | Some(("finite", _)) => Support::Finite,
            Some(("infinite", _)) => Support::Infinite,
            Some((other, p)) => return Err(Error::parse(p, format!("support must be finite or infinite, not `{other}`"))),
        };
        WZPair::new(&target, need("ratio_n")?, need("ratio_k")?, rf("certificate")?, rf("first")?, support)
    }
}

fn constant_of(f: &RationalFunction) -> Result<Q> {
    f.as_constant()
        .ok_or_else(|| Error::MissingVariable(f.vars().join(", ")))
}

/// Value of `f` at a seeded point that avoids its poles.
fn generic_value(f: &RationalFunction, seed: u64) -> Result<Q> {
    let vars = f.vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a09_e667);
    for _ in 0..64 {
        let at: Vec<(&str, Q)> = vars
            .iter()
            .map(|v| (v.as_str(), Q::new(rng.gen_range(1000..100_000).into(), rng.gen_range(1..1000).into())))
            .collect();
        if let Ok(v) = f.eval_at(&at) {
            return Ok(v);
        }
    }
    Err(Error::Pole("no regular point found".into()))
}

/// The pair whose certificate is printed with the x-shift 3F2(1) theorem.
pub const T31_X_CERTIFICATE: &str = include_str!("../certificates/t31_x.wz");
/// The pair whose certificate is printed with the 3F2(-1) x-shift recurrence.
pub const T3M1_X_CERTIFICATE: &str = include_str!("../certificates/t3m1_x.wz");

/// Both shipped pairs.
pub fn shipped() -> Result<Vec<WZPair>> {
    Ok(vec![WZPair::parse(T31_X_CERTIFICATE)?, WZPair::parse(T3M1_X_CERTIFICATE)?])
}
