//! Multivariate rational functions, kept unreduced.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::Q;
use crate::error::{Error, Result};
use crate::par::Exec;

/// `num / den` with a nonzero denominator polynomial.
///
/// No gcd is ever taken. Equality is decided by [`rf_equal`], never by
/// comparing the stored polynomials.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Pole("zero denominator polynomial".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // Constant denominators are folded into the numerator.
        if let Some(c) = den.as_constant() {
            return RationalFunction { num: num.scale(&c.recip()), den: MultiPoly::one() };
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction { num: MultiPoly::zero(), den: MultiPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction { num: MultiPoly::constant(c), den: MultiPoly::one() }
    }

    pub fn var(name: &str) -> Self {
        RationalFunction { num: MultiPoly::var(name), den: MultiPoly::one() }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction { num: p, den: MultiPoly::one() }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// All variables occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<String> {
        let s: BTreeSet<&String> = self.num.vars().iter().chain(self.den.vars()).collect();
        s.into_iter().cloned().collect()
    }

    /// Exact value; a vanishing denominator is a pole error.
    pub fn eval(&self, at: &HashMap<String, Q>) -> Result<Q> {
        let d = self.den.eval(at)?;
        let n = self.num.eval(at)?;
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator {} vanishes", self.den)));
        }
        Ok(n / d)
    }

    /// Convenience wrapper over [`eval`](Self::eval) with `(name, value)` pairs.
    pub fn eval_at(&self, at: &[(&str, Q)]) -> Result<Q> {
        let map: HashMap<String, Q> = at.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        self.eval(&map)
    }

    pub fn specialize(&self, var: &str, val: &Q) -> Result<Self> {
        Self::new(self.num.specialize(var, val), self.den.specialize(var, val))
    }

    /// Replaces `var` by a polynomial.
    pub fn substitute(&self, var: &str, by: &MultiPoly) -> Result<Self> {
        Self::new(self.num.substitute(var, by), self.den.substitute(var, by))
    }

    /// Replaces `var` by a rational function `by = N/D`, using
    /// `p(N/D) = sum c_i N^i D^(d-i) / D^d` for each side.
    pub fn substitute_rf(&self, var: &str, by: &RationalFunction) -> Result<Self> {
        let homog = |p: &MultiPoly| -> (MultiPoly, u32) {
            let cs = p.coeffs_in(var);
            let d = cs.len() as u32 - 1;
            let mut acc = MultiPoly::zero();
            for (i, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&(c * &by.num.pow(i as u32)) * &by.den.pow(d - i as u32));
            }
            (acc, d)
        };
        let (n, dn) = homog(&self.num);
        let (d, dd) = homog(&self.den);
        // n / D^dn  over  d / D^dd
        let (n, d) = if dn >= dd {
            (n, &d * &by.den.pow(dn - dd))
        } else {
            (&n * &by.den.pow(dd - dn), d)
        };
        Self::new(n, d)
    }

    /// Replaces `var` by `var + delta`.
    pub fn shift(&self, var: &str, delta: &Q) -> Self {
        Self::normalized(self.num.shift(var, delta), self.den.shift(var, delta))
    }

    /// Shifts several variables at once. The shifts commute because each
    /// substitution only mentions its own variable.
    pub fn shift_all(&self, deltas: &[(String, Q)]) -> Self {
        deltas.iter().fold(self.clone(), |acc, (v, d)| acc.shift(v, d))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// The value when there are no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Pole("division by the zero rational function".into()));
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // Cheap cross-cancellation when one factor's numerator equals the other's denominator.
        if self.num == rhs.den {
            return RationalFunction::normalized(rhs.num.clone(), self.den.clone());
        }
        if rhs.num == self.den {
            return RationalFunction::normalized(self.num.clone(), rhs.den.clone());
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`] otherwise.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|d| d.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Decides `f == g` as rational functions.
///
/// The cross products `num(f)·den(g)` and `num(g)·den(f)` are compared by
/// exact evaluation on a grid with `d_v + 1` integer points per variable,
/// where `d_v` bounds the degree of both products in `v`. A polynomial of
/// those per-variable degrees that vanishes on such a grid is identically
/// zero, so the answer is exact. The grid starts at `2 + seed mod 1000`.
///
/// Denominators are cleared once and the polynomials stored densely, so
/// the evaluation runs in integer arithmetic. Variables are specialized one
/// at a time; once a single variable is left the univariate cross products
/// are expanded and compared directly. The first level fans out over the
/// rayon pool when the `parallel` feature is on.
pub fn rf_equal(f: &RationalFunction, g: &RationalFunction, seed: u64) -> bool {
    let polys = [&f.num, &g.den, &g.num, &f.den];
    let vars: BTreeSet<String> = polys.iter().flat_map(|p| p.vars().iter().cloned()).collect();
    let vars: Vec<String> = vars.into_iter().collect();
    let bounds: Vec<u32> = vars
        .iter()
        .map(|v| {
            let d = |p: &MultiPoly| p.degree_in(v);
            (d(polys[0]) + d(polys[1])).max(d(polys[2]) + d(polys[3]))
        })
        .collect();
    // p_i = P_i / L_i with integer P_i, so the test is P0 P1 L2 L3 = P2 P3 L0 L1.
    let lcms = polys.map(MultiPoly::denominator_lcm);
    let scale = [&lcms[2] * &lcms[3], &lcms[0] * &lcms[1]];
    let dense = polys.map(|p| Dense::new(p, &vars));
    let base = 2 + (seed % 1000) as i64;
    if vars.len() <= 1 {
        return grid_check(&dense, &bounds, base, &scale);
    }
    Exec::Parallel.all(bounds[0] as usize + 1, |i| {
        let pt = BigInt::from(base + i as i64);
        let sp = dense.each_ref().map(|p| p.specialize_first(&pt));
        grid_check(&sp, &bounds[1..], base, &scale)
    })
}

fn grid_check(polys: &[Dense; 4], bounds: &[u32], base: i64, scale: &[BigInt; 2]) -> bool {
    // With one variable left, expanding the products is cheaper than
    // evaluating them at `d + 1` points, and decides the same question.
    if bounds.len() <= 1 {
        let lhs = convolve(&polys[0].data, &polys[1].data);
        let rhs = convolve(&polys[2].data, &polys[3].data);
        let zero = BigInt::zero();
        return (0..lhs.len().max(rhs.len()))
            .all(|t| lhs.get(t).unwrap_or(&zero) * &scale[0] == rhs.get(t).unwrap_or(&zero) * &scale[1]);
    }
    (0..=bounds[0] as i64).all(|i| {
        let pt = BigInt::from(base + i);
        let sp = polys.each_ref().map(|p| p.specialize_first(&pt));
        grid_check(&sp, &bounds[1..], base, scale)
    })
}

/// Integer polynomial as a dense row-major array, first variable outermost.
struct Dense {
    dims: Vec<usize>,
    data: Vec<BigInt>,
}

impl Dense {
    /// `L p` over `vars`, where `L` clears the denominators of `p`.
    fn new(p: &MultiPoly, vars: &[String]) -> Self {
        let lcm = p.denominator_lcm();
        let dims: Vec<usize> = vars.iter().map(|v| p.degree_in(v) as usize + 1).collect();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let pos: Vec<usize> = p
            .vars()
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable universe covers p"))
            .collect();
        let mut data = vec![BigInt::zero(); dims.iter().product()];
        for (e, c) in p.terms() {
            let idx: usize = e.iter().zip(&pos).map(|(&d, &i)| d as usize * strides[i]).sum();
            data[idx] = (c * &lcm).to_integer();
        }
        Dense { dims, data }
    }

    /// Substitutes `v` for the outermost variable by Horner's rule on slices.
    fn specialize_first(&self, v: &BigInt) -> Dense {
        let inner = self.data.len() / self.dims[0];
        let mut acc = vec![BigInt::zero(); inner];
        for row in self.data.chunks(inner).rev() {
            for (a, c) in acc.iter_mut().zip(row) {
                *a *= v;
                *a += c;
            }
        }
        Dense { dims: self.dims[1..].to_vec(), data: acc }
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::expr::parse_rf;
    use crate::exact::rational::{q, qf};

    #[test]
    fn eval_examples() {
        let f = parse_rf("(x^2-y^2)/(x-y)").unwrap();
        assert_eq!(f.eval_at(&[("x", q(3)), ("y", q(2))]).unwrap(), q(5));
        let r2 = parse_rf("y^3/(2*(2*y-1)*(x+y)^2)").unwrap();
        assert_eq!(r2.eval_at(&[("x", q(1)), ("y", q(2))]).unwrap(), qf(4, 27));
        let p = parse_rf("1/(x-1)").unwrap();
        assert!(matches!(p.eval_at(&[("x", q(1))]), Err(Error::Pole(_))));
        assert!(matches!(p.eval_at(&[]), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn equality_examples() {
        let a = parse_rf("(x^2-y^2)/(x-y)").unwrap();
        let b = parse_rf("x+y").unwrap();
        assert!(rf_equal(&a, &b, 0));
        let c = parse_rf("x/(x+1)").unwrap();
        let d = parse_rf("x/(x+2)").unwrap();
        assert!(!rf_equal(&c, &d, 0));
    }

    #[test]
    fn telescoping_identity_holds() {
        let lhs = parse_rf("(x+n)*(x+n+1)/((x+y+n)*(x+y+n+1))").unwrap();
        let rhs = parse_rf(
            "(2*n+2*x-y+1)/(2*(2*y-1)) - (2*n+2+2*x-y+1)/(2*(2*y-1))*(x+n)*(x+n+1)/((x+y+n)*(x+y+n+1)) \
             + (y-1)*y*(y+1)/(2*(2*y-1))/((x+y+n)*(x+y+n+1))",
        )
        .unwrap();
        for seed in [0, 7, 991] {
            assert!(rf_equal(&lhs, &rhs, seed));
        }
    }

    #[test]
    fn shift_commutes_with_eval() {
        let f = parse_rf("x*(2*x+3*y-1)/(2*(2*y-1)*(x+y))").unwrap();
        let g = f.shift("y", &qf(1, 2));
        let at = |x: Q, y: Q| vec![("x", x), ("y", y)];
        assert_eq!(
            g.eval_at(&at(q(1), q(2))).unwrap(),
            f.eval_at(&at(q(1), qf(5, 2))).unwrap()
        );
    }
}
