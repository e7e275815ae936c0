//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Q;
use crate::error::{Error, Result};

/// A polynomial over the rationals.
///
/// The representation is canonical: `vars` is sorted and lists exactly the
/// variables that occur with a positive exponent, and no coefficient stored
/// in `terms` is zero. Structural equality is therefore mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Q::one());
        MultiPoly { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut map: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            *map.entry(e).or_insert_with(Q::zero) += c;
        }
        Self::canonical(vars, map)
    }

    /// Univariate polynomial from coefficients, constant term first.
    pub fn from_coeffs(var: &str, coeffs: &[Q]) -> Self {
        Self::from_terms(
            &[var],
            coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())),
        )
    }

    fn canonical(vars: Vec<String>, terms: BTreeMap<Vec<u32>, Q>) -> Self {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|e| e[i] > 0))
            .collect();
        let mut order: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let new_vars: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        if new_vars == vars {
            return MultiPoly { vars, terms };
        }
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            let ne: Vec<u32> = order.iter().map(|&i| e[i]).collect();
            *out.entry(ne).or_insert_with(Q::zero) += c;
        }
        MultiPoly { vars: new_vars, terms: out }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        if self.vars.is_empty() {
            Some(self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn aligned(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Q> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable in union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; vars.len()];
                for (j, &i) in idx.iter().enumerate() {
                    ne[i] = e[j];
                }
                (ne, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let set: BTreeSet<&String> = self.vars.iter().chain(other.vars.iter()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact value at an assignment covering every variable.
    pub fn eval(&self, at: &HashMap<String, Q>) -> Result<Q> {
        let mut p = self.clone();
        for v in self.vars.clone() {
            let val = at.get(&v).ok_or_else(|| Error::MissingVariable(v.clone()))?;
            p = p.specialize(&v, val);
        }
        Ok(p.as_constant().expect("all variables specialized"))
    }

    /// Substitutes a value for one variable, leaving the others symbolic.
    pub fn specialize(&self, var: &str, val: &Q) -> Self {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        let maxd = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(maxd + 1);
        powers.push(Q::one());
        for d in 1..=maxd {
            let next = &powers[d - 1] * val;
            powers.push(next);
        }
        let mut out: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(i) as usize;
            let term = c * &powers[d];
            let slot = out.entry(ne).or_insert_with(Q::zero);
            *slot += term;
        }
        let mut vars = self.vars.clone();
        vars.remove(i);
        Self::canonical(vars, out)
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials in the other variables.
    pub fn coeffs_in(&self, var: &str) -> Vec<MultiPoly> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return vec![self.clone()];
        };
        let maxd = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut rest_vars = self.vars.clone();
        rest_vars.remove(i);
        let mut buckets: Vec<BTreeMap<Vec<u32>, Q>> = vec![BTreeMap::new(); maxd as usize + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(i);
            buckets[d as usize].insert(ne, c.clone());
        }
        buckets.into_iter().map(|b| Self::canonical(rest_vars.clone(), b)).collect()
    }

    /// Replaces `var` by the polynomial `by`.
    pub fn substitute(&self, var: &str, by: &MultiPoly) -> Self {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        // Group terms by the exponent of `var`, then Horner in `by`.
        let maxd = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut rest_vars = self.vars.clone();
        rest_vars.remove(i);
        let mut buckets: Vec<BTreeMap<Vec<u32>, Q>> = vec![BTreeMap::new(); maxd as usize + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(i);
            buckets[d as usize].insert(ne, c.clone());
        }
        let mut acc = MultiPoly::zero();
        for b in buckets.into_iter().rev() {
            let coeff = Self::canonical(rest_vars.clone(), b);
            acc = &(&acc * by) + &coeff;
        }
        acc
    }

    /// Shorthand for substituting `var -> var + delta`.
    pub fn shift(&self, var: &str, delta: &Q) -> Self {
        if delta.is_zero() {
            return self.clone();
        }
        self.substitute(var, &(&MultiPoly::var(var) + &MultiPoly::constant(delta.clone())))
    }

    /// Coefficients in `var`, constant term first, when `var` is the only variable.
    pub fn univariate_coeffs(&self, var: &str) -> Option<Vec<Q>> {
        match self.vars.as_slice() {
            [] => Some(vec![self.as_constant().unwrap_or_else(Q::zero)]),
            [v] if v == var => {
                let d = self.degree_in(var) as usize;
                let mut out = vec![Q::zero(); d + 1];
                for (e, c) in &self.terms {
                    out[e[0] as usize] = c.clone();
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Leading coefficient under the internal (lexicographic) monomial order.
    pub fn leading_coeff(&self) -> Option<&Q> {
        self.terms.values().next_back()
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_negative())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let vars = self.union_vars(rhs);
        let mut t = self.aligned(&vars);
        for (e, c) in rhs.aligned(&vars) {
            *t.entry(e).or_insert_with(Q::zero) += c;
        }
        MultiPoly::canonical(vars, t)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let vars = self.union_vars(rhs);
        let a = self.aligned(&vars);
        let b = rhs.aligned(&vars);
        let mut t: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                match t.get_mut(&e) {
                    Some(slot) => *slot += prod,
                    None => {
                        t.insert(e, prod);
                    }
                }
            }
        }
        MultiPoly::canonical(vars, t)
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| if d == 1 { v.clone() } else { format!("{v}^{d}") })
                .collect();
            let coef = if mag.is_integer() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{coef}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
