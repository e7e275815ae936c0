//! Scalar helpers over `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The universal exact scalar.
pub type Q = BigRational;

/// Small-integer constructor.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` in canonical form. Panics on `d == 0`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"` into a canonical rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::Domain(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Rising factorial `a (a+1) ... (a+n-1)`, equal to 1 when `n = 0`.
pub fn pochhammer(a: &Q, n: u64) -> Q {
    let mut acc = Q::one();
    let mut f = a.clone();
    for _ in 0..n {
        if f.is_zero() {
            return Q::zero();
        }
        acc *= &f;
        f += Q::one();
    }
    acc
}

/// Exact binomial coefficient; `k > n` is a domain error.
pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) needs k <= n")));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// Integer power with a possibly negative exponent. `0^e` for `e < 0` is a pole.
pub fn pow_i(base: &Q, e: i64) -> Result<Q> {
    if e < 0 && base.is_zero() {
        return Err(Error::Pole("zero raised to a negative power".into()));
    }
    let mut r = Q::one();
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut e = e.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    Ok(r)
}

/// `floor(log10(x))` for `x > 0`.
pub fn floor_log10(x: &Q) -> i64 {
    assert!(x.is_positive(), "floor_log10 needs a positive argument");
    let (n, d) = (x.numer(), x.denom());
    // Digit-count estimate, then correct by at most one step each way.
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    let ten = BigInt::from(10);
    loop {
        let lo = pow10(e);
        if x < &lo {
            e -= 1;
            continue;
        }
        if x >= &(lo * Q::from_integer(ten.clone())) {
            e += 1;
            continue;
        }
        return e;
    }
}

/// `10^e` as an exact rational.
pub fn pow10(e: i64) -> Q {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Q::from_integer(p)
    } else {
        Q::new(BigInt::one(), p)
    }
}

/// Rounds `x` to `frac` digits after the decimal point (half away from zero)
/// and renders it in plain positional notation.
pub fn to_decimal(x: &Q, frac: usize) -> String {
    let scaled = x * pow10(frac as i64);
    let m = round_half_away(&scaled);
    let neg = m.is_negative();
    let digits = m.abs().to_string();
    let digits = if digits.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, fr) = digits.split_at(digits.len() - frac);
    let sign = if neg { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{fr}")
    }
}

/// Parses a plain decimal string such as `-3.1415` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("not a decimal number: `{s}`"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let all: String = format!("{int}{frac}");
    if !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let m: BigInt = all.parse().map_err(|_| bad())?;
    let v = Q::from_integer(m) * pow10(-(frac.len() as i64));
    Ok(if neg { -v } else { v })
}

fn round_half_away(x: &Q) -> BigInt {
    let two = BigInt::from(2);
    let n = x.numer() * &two + if x.is_negative() { -x.denom() } else { x.denom().clone() };
    let d = x.denom() * two;
    // Truncating division after shifting by half an ulp.
    let (quot, _) = n.div_rem(&d);
    quot
}

/// Smallest integer `>= x`.
pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}
