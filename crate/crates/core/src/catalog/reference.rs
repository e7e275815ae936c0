//! Stored decimal expansions of the target constants.
//!
//! The digits are checked at test time against two independent series per
//! constant (or an algebraic identity for the derived powers of pi), so a
//! transcription error cannot survive.

use crate::error::{Error, Result};
use crate::exact::rational::parse_decimal;
use crate::exact::{parse_rf, Q};

/// Number of fractional digits stored for every constant.
pub const STORED_DIGITS: usize = 125;
/// Digits the store is trusted to; comparisons never ask for more.
pub const TRUSTED_DIGITS: u32 = 110;

#[derive(Clone, Copy, Debug)]
pub struct ReferenceConstant {
    pub name: &'static str,
    pub digits: &'static str,
    pub oracle_note: &'static str,
}

pub const REFERENCES: [ReferenceConstant; 10] = [
    ReferenceConstant {
        name: "pi",
        digits: "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384",
        oracle_note: "Ramanujan 1/pi series (42n+5, rate 1/64) against the accelerated s(1,3/2) series (6n+5, rate 1/4)",
    },
    ReferenceConstant {
        name: "pi2",
        digits: "9.86960440108935861883449099987615113531369940724079062641334937622004482241920524300177340371855223182402591377402314407777234",
        oracle_note: "square of pi; the 21n-8 series (rate 1/64) and the bisection series (rate 1/16)",
    },
    ReferenceConstant {
        name: "inv_pi",
        digits: "0.31830988618379067153776752674502872406891929148091289749533468811779359526845307018022760553250617191214568545351591607378582",
        oracle_note: "reciprocal of pi; the 42n+5 series and the doubly accelerated s(1/2,3/2) series",
    },
    ReferenceConstant {
        name: "inv_pi2",
        digits: "0.10132118364233777144387946320972763890435877467224654884560903189417312096223544119120927392562183761362224442818571958168072",
        oracle_note: "reciprocal of pi2; the two Guillera series (rates 1/4 and 1/1024)",
    },
    ReferenceConstant {
        name: "pi4",
        digits: "97.40909103400243723644033268870511124972758567268542169146785938997085545682719619012186723475299255096917325172384681731256644",
        oracle_note: "square of pi2",
    },
    ReferenceConstant {
        name: "inv_pi4",
        digits: "0.01026598225468433518915278326711869414182780185363826271816803547197366267555192024907238192952904905627127843410040233128863",
        oracle_note: "square of inv_pi2",
    },
    ReferenceConstant {
        name: "catalan",
        digits: "0.91596559417721901505460351493238411077414937428167213426649811962176301977625476947935651292611510624857442261919619957903589",
        oracle_note: "two Catalan series of rates 1/4 (40n^2-24n+3) and 4/729 (580n^2-184n+15)",
    },
    ReferenceConstant {
        name: "zeta2",
        digits: "1.64493406684822643647241516664602518921894990120679843773555822937000747040320087383362890061975870530400431896233719067962872",
        oracle_note: "pi2/6, and the zeta(2) series of rate 1/64 plus 7/4",
    },
    ReferenceConstant {
        name: "zeta3",
        digits: "1.20205690315959428539973816151144999076498629234049888179227155534183820578631309018645587360933525814619915779526071941849199",
        oracle_note: "the 6F5 series for 28 zeta(3) (rate 1/4) against the Apery series 5/2 sum (-1)^(n-1)/(n^3 binom(2n,n))",
    },
    ReferenceConstant {
        name: "ln2",
        digits: "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471560586332699641868754200148102057068573368552",
        oracle_note: "sum 1/(n 2^n) against 2 atanh(1/3) = sum 2/((2n+1) 9^n 3)",
    },
];

pub fn lookup(name: &str) -> Result<&'static ReferenceConstant> {
    REFERENCES
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::unknown("reference constant", name))
}

/// The stored expansion of `name` cut to `digits` fractional digits.
pub fn reference(name: &str, digits: usize) -> Result<String> {
    let r = lookup(name)?;
    if digits > STORED_DIGITS {
        return Err(Error::Domain(format!("only {STORED_DIGITS} digits of {name} are stored")));
    }
    let dot = r.digits.find('.').expect("stored with a decimal point");
    Ok(if digits == 0 { r.digits[..dot].to_string() } else { r.digits[..dot + 1 + digits].to_string() })
}

/// The stored expansion as an exact rational.
pub fn reference_value(name: &str) -> Result<Q> {
    parse_decimal(lookup(name)?.digits)
}

/// Value of a rational expression over reference names, such as
/// `16/3*catalan - 664/135`.
pub fn constant_value(expr: &str) -> Result<Q> {
    let f = parse_rf(expr)?;
    let mut at = Vec::new();
    for v in f.vars() {
        at.push((v.clone(), reference_value(&v)?));
    }
    let at: Vec<(&str, Q)> = at.iter().map(|(v, q)| (v.as_str(), q.clone())).collect();
    f.eval_at(&at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::pow10;
    use num_traits::Signed;

    #[test]
    fn prefixes() {
        assert_eq!(reference("pi", 5).unwrap(), "3.14159");
        assert_eq!(reference("ln2", 0).unwrap(), "0");
        assert!(matches!(reference("e", 5), Err(Error::Unknown { .. })));
        assert!(reference("pi", 126).is_err());
    }

    #[test]
    fn derived_powers_are_consistent() {
        let tol = pow10(-(TRUSTED_DIGITS as i64));
        let v = |n| reference_value(n).unwrap();
        let close = |a: Q, b: Q| (a - b).abs() < tol;
        assert!(close(v("pi") * v("pi"), v("pi2")));
        assert!(close(v("pi") * v("inv_pi"), Q::from_integer(1.into())));
        assert!(close(v("pi2") * v("inv_pi2"), Q::from_integer(1.into())));
        assert!(close(v("pi2") * v("pi2"), v("pi4")));
        assert!(close(v("inv_pi2") * v("inv_pi2"), v("inv_pi4")));
        assert!(close(v("pi2") / Q::from_integer(6.into()), v("zeta2")));
    }

    #[test]
    fn expressions() {
        let c = constant_value("zeta2 - 7/4").unwrap();
        assert_eq!(c, reference_value("zeta2").unwrap() - Q::new(7.into(), 4.into()));
        assert!(constant_value("euler").is_err());
    }
}
