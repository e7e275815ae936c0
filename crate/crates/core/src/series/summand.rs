//! Compiles closed-form summands into term sequences.
//!
//! Beyond the rational-function grammar a summand may use, in the index
//! variable `n`:
//!
//! * `binom(a*n+b, c*n+d)` with integers `a >= c >= 0`,
//! * `poch(alpha, n+j)` with a constant rational `alpha`,
//! * `base^(s*n+t)` with a constant rational base and integers `s`, `t`,
//!
//! combined by `*`, `/` and constant integer powers. Sums and differences
//! are only allowed between purely rational subexpressions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::term::HyperTerm;
use super::upoly::IntPoly;
use crate::error::{Error, Result};
use crate::exact::rational::pow_i;
use crate::exact::{binomial, parse_expr, pochhammer, Expr, MultiPoly, RationalFunction, Q};

#[derive(Clone, Debug)]
struct Binom {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    e: i32,
}

#[derive(Clone, Debug)]
struct Poch {
    alpha: Q,
    off: i64,
    e: i32,
}

#[derive(Clone, Debug)]
struct Power {
    base: Q,
    s: i64,
    t: i64,
}

/// A summand as a product of hypergeometric building blocks.
#[derive(Clone, Debug)]
pub struct Summand {
    var: String,
    source: String,
    rational: RationalFunction,
    binoms: Vec<Binom>,
    pochs: Vec<Poch>,
    powers: Vec<Power>,
}

impl Summand {
    pub fn parse(source: &str, var: &str) -> Result<Self> {
        let e = parse_expr(source)?;
        let mut s = build(&e, var)?;
        s.source = source.to_string();
        Ok(s)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    fn is_rational(&self) -> bool {
        self.binoms.is_empty() && self.pochs.is_empty() && self.powers.is_empty()
    }

    fn mul(mut self, o: Summand) -> Summand {
        self.rational = &self.rational * &o.rational;
        self.binoms.extend(o.binoms);
        self.pochs.extend(o.pochs);
        self.powers.extend(o.powers);
        self
    }

    fn powi(mut self, e: i32) -> Result<Summand> {
        self.rational = self.rational.pow(e)?;
        for b in &mut self.binoms {
            b.e *= e;
        }
        for p in &mut self.pochs {
            p.e *= e;
        }
        for p in &mut self.powers {
            p.s *= e as i64;
            p.t *= e as i64;
        }
        Ok(self)
    }

    /// Direct value at index `n`, without ratio iteration.
    pub fn value(&self, n: i64) -> Result<Q> {
        let nq = Q::from_integer(BigInt::from(n));
        let at: HashMap<String, Q> = [(self.var.clone(), nq)].into();
        let mut v = self.rational.eval(&at)?;
        for b in &self.binoms {
            let (top, bot) = (b.a * n + b.b, b.c * n + b.d);
            if bot < 0 || top < bot {
                return Err(Error::Domain(format!("binom({top}, {bot}) outside its range")));
            }
            let c = Q::from_integer(binomial(top as u64, bot as u64)?);
            v *= pow_i(&c, b.e as i64)?;
        }
        for p in &self.pochs {
            let m = n + p.off;
            if m < 0 {
                return Err(Error::Domain(format!("pochhammer index {m} is negative")));
            }
            v *= pow_i(&pochhammer(&p.alpha, m as u64), p.e as i64)?;
        }
        for p in &self.powers {
            v *= pow_i(&p.base, p.s * n + p.t)?;
        }
        Ok(v)
    }

    /// `value(n+1) / value(n)` as a rational function of `n`.
    pub fn ratio(&self) -> Result<RationalFunction> {
        let var = self.var.as_str();
        let n = MultiPoly::var(var);
        let lin = |k: i64| RationalFunction::from_poly(&n + &MultiPoly::constant(Q::from_integer(k.into())));
        let scaled = |m: i64, k: i64| {
            RationalFunction::from_poly(
                &n.scale(&Q::from_integer(m.into())) + &MultiPoly::constant(Q::from_integer(k.into())),
            )
        };
        let one = Q::one();
        let mut r = self.rational.shift(var, &one).checked_div(&self.rational)?;
        for b in &self.binoms {
            // binom(A+a, B+c) / binom(A, B) with A = a n + b, B = c n + d.
            let mut f = RationalFunction::one();
            for i in 1..=b.a {
                f = &f * &scaled(b.a, b.b + i);
            }
            for i in 1..=b.c {
                f = f.checked_div(&scaled(b.c, b.d + i))?;
            }
            for i in 1..=(b.a - b.c) {
                f = f.checked_div(&scaled(b.a - b.c, b.b - b.d + i))?;
            }
            r = &r * &f.pow(b.e)?;
        }
        for p in &self.pochs {
            let f = &lin(p.off) + &RationalFunction::constant(p.alpha.clone());
            r = &r * &f.pow(p.e)?;
        }
        for p in &self.powers {
            r = &r * &RationalFunction::constant(pow_i(&p.base, p.s)?);
        }
        Ok(r)
    }

    /// Smallest admissible lower limit `>= requested`.
    ///
    /// The summation starts beyond every nonnegative integer at which the
    /// summand is undefined (a vanishing denominator, a binomial outside its
    /// range, a negative Pochhammer index) and beyond every pole of the term
    /// ratio; a vanishing first term is then skipped.
    pub fn auto_lower_limit(&self, requested: i64) -> Result<i64> {
        let var = self.var.as_str();
        let mut n0 = requested;
        let den = self
            .rational
            .den()
            .univariate_coeffs(var)
            .ok_or_else(|| Error::MalformedSeries(format!("summand depends on more than `{var}`")))?;
        let den = IntPoly::clear_pair(&den, &[]).0;
        let ceil_div = |x: i64, y: i64| -> i64 { (x + y - 1).div_euclid(y) };
        let horizon = requested + (1 << 16);
        if let Some(&m) = den.integer_roots(requested, horizon).last() {
            n0 = n0.max(m + 1);
        }
        for b in &self.binoms {
            if b.c > 0 {
                n0 = n0.max(ceil_div(-b.d, b.c));
            } else if b.d < 0 {
                return Err(Error::MalformedSeries("binomial with a negative constant lower argument".into()));
            }
            let (sa, sb) = (b.a - b.c, b.b - b.d);
            if sa > 0 {
                n0 = n0.max(ceil_div(-sb, sa));
            } else if sb < 0 {
                return Err(Error::MalformedSeries("binomial lower argument exceeds the upper one".into()));
            }
        }
        for p in &self.pochs {
            n0 = n0.max(-p.off);
            if p.e < 0 && p.alpha.is_integer() && !p.alpha.is_positive() {
                return Err(Error::MalformedSeries(format!("poch({}, n) in a denominator vanishes", p.alpha)));
            }
        }
        let ratio = self.ratio()?;
        let num = ratio.num().univariate_coeffs(var).unwrap_or_default();
        let rden = ratio.den().univariate_coeffs(var).unwrap_or_default();
        let (p, q) = IntPoly::clear_pair(&num, &rden);
        // A ratio pole is acceptable only behind a run of leading zero terms.
        for m in q.integer_roots(n0, horizon) {
            if (n0..=m).all(|i| self.value(i).is_ok_and(|v| v.is_zero())) {
                n0 = m + 1;
            } else {
                return Err(Error::MalformedSeries(format!(
                    "summand vanishes at the interior index {var} = {m}"
                )));
            }
        }
        // Skip vanishing leading terms.
        for _ in 0..8 {
            if !self.value(n0)?.is_zero() {
                break;
            }
            n0 += 1;
        }
        // An interior zero of the ratio would truncate a series that goes on.
        if let Some(&k) = p.integer_roots(n0, horizon).first() {
            for m in k + 2..k + 6 {
                if self.value(m).map(|v| !v.is_zero()).unwrap_or(false) {
                    return Err(Error::MalformedSeries(format!(
                        "summand vanishes at the interior index {var} = {}",
                        k + 1
                    )));
                }
            }
        }
        Ok(n0)
    }

    /// Term sequence from the admissible lower limit at or after `requested`.
    pub fn to_term(&self, requested: i64) -> Result<HyperTerm> {
        let n0 = self.auto_lower_limit(requested)?;
        HyperTerm::new(&self.var, n0, self.value(n0)?, self.ratio()?)
    }
}

fn rational_part(rf: RationalFunction, var: &str) -> Summand {
    Summand {
        var: var.to_string(),
        source: String::new(),
        rational: rf,
        binoms: Vec::new(),
        pochs: Vec::new(),
        powers: Vec::new(),
    }
}

/// `(slope, intercept)` of an integer-linear expression in `var`.
fn linear(e: &Expr, var: &str) -> Result<(i64, i64)> {
    let rf = e.to_rf()?;
    let bad = || Error::parse(0, format!("expected an integer-linear expression in `{var}`"));
    if !rf.den().as_constant().is_some_and(|d| d.is_one()) {
        return Err(bad());
    }
    let c = rf.num().univariate_coeffs(var).ok_or_else(bad)?;
    if c.len() > 2 || c.iter().any(|x| !x.is_integer()) {
        return Err(bad());
    }
    let get = |i: usize| c.get(i).map_or(Some(0), |x| x.to_integer().to_i64());
    Ok((get(1).ok_or_else(bad)?, get(0).ok_or_else(bad)?))
}

fn build(e: &Expr, var: &str) -> Result<Summand> {
    if !e.mentions(var) || !has_call_or_var_power(e, var) {
        return Ok(rational_part(e.to_rf()?, var));
    }
    match e {
        Expr::Neg(a) => {
            let mut s = build(a, var)?;
            s.rational = -&s.rational;
            Ok(s)
        }
        Expr::Mul(a, b) => Ok(build(a, var)?.mul(build(b, var)?)),
        Expr::Div(a, b) => Ok(build(a, var)?.mul(build(b, var)?.powi(-1)?)),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (l, r) = (build(a, var)?, build(b, var)?);
            if !(l.is_rational() && r.is_rational()) {
                return Err(Error::parse(0, "sums of non-rational factors are not hypergeometric"));
            }
            let rf = if matches!(e, Expr::Add(..)) { &l.rational + &r.rational } else { &l.rational - &r.rational };
            Ok(rational_part(rf, var))
        }
        Expr::Pow(base, ex) => {
            if !ex.mentions(var) {
                return build(base, var)?.powi(ex.const_int()?);
            }
            let b = base
                .to_rf()
                .ok()
                .and_then(|r| r.as_constant())
                .ok_or_else(|| Error::parse(0, "a variable exponent needs a constant base"))?;
            let (s, t) = linear(ex, var)?;
            let mut out = rational_part(RationalFunction::one(), var);
            out.powers.push(Power { base: b, s, t });
            Ok(out)
        }
        Expr::Call(name, args) => {
            let mut out = rational_part(RationalFunction::one(), var);
            match (name.as_str(), args.as_slice()) {
                ("binom", [top, bot]) => {
                    let (a, b) = linear(top, var)?;
                    let (c, d) = linear(bot, var)?;
                    if c < 0 || a < c {
                        return Err(Error::parse(0, "binom(a*n+b, c*n+d) needs a >= c >= 0"));
                    }
                    out.binoms.push(Binom { a, b, c, d, e: 1 });
                }
                ("poch", [alpha, idx]) => {
                    let alpha = alpha
                        .to_rf()?
                        .as_constant()
                        .ok_or_else(|| Error::parse(0, "poch needs a constant first argument"))?;
                    let (s, off) = linear(idx, var)?;
                    if s != 1 {
                        return Err(Error::parse(0, format!("poch index must be `{var} + j`")));
                    }
                    out.pochs.push(Poch { alpha, off, e: 1 });
                }
                _ => return Err(Error::parse(0, format!("unknown function `{name}/{}`", args.len()))),
            }
            Ok(out)
        }
        Expr::Int(_) | Expr::Var(_) => Ok(rational_part(e.to_rf()?, var)),
    }
}

/// Whether the tree needs the non-rational machinery.
fn has_call_or_var_power(e: &Expr, var: &str) -> bool {
    match e {
        Expr::Call(..) => true,
        Expr::Pow(a, b) => b.mentions(var) || has_call_or_var_power(a, var),
        Expr::Neg(a) => has_call_or_var_power(a, var),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            has_call_or_var_power(a, var) || has_call_or_var_power(b, var)
        }
        Expr::Int(_) | Expr::Var(_) => false,
    }
}

/// Parses `source` and compiles it from the admissible lower limit `>= requested`.
pub fn compile_summand(source: &str, var: &str, requested: i64) -> Result<HyperTerm> {
    Summand::parse(source, var)?.to_term(requested)
}
