//! Identity records: series with a known (or conjectured) closed form.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::rational::parse_q;
use crate::exact::Q;
use crate::series::{HyperTerm, Summand};

pub const IDENTITIES_TOML: &str = include_str!("../../catalog/identities.toml");
pub const IDENTITIES_SHA256: &str = include_str!("../../catalog/identities.sha256");

/// Index variable of every summand.
pub const VAR: &str = "n";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjectured,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Conjectured => "conjectured",
        }
    }
}

/// How a record arises from an acceleration run: with `a_j` the emitted
/// terms of `route` at `point`, `summand(n) = scale * a_(n - offset)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccelSpec {
    pub route: String,
    pub point: Vec<String>,
    pub scale: String,
    pub offset: i64,
}

impl AccelSpec {
    pub fn point_q(&self) -> Result<Vec<Q>> {
        self.point.iter().map(|s| parse_q(s)).collect()
    }

    pub fn scale_q(&self) -> Result<Q> {
        parse_q(&self.scale)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRecord {
    pub id: String,
    pub summand: String,
    pub lower: i64,
    /// Rational expression over reference constant names.
    pub constant: String,
    /// Claimed convergence rate, a rational such as `1/64`.
    pub rate: String,
    pub status: Status,
    pub anchor: String,
    /// Verification target overriding the requested digits, for slow rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accel: Option<AccelSpec>,
}

impl IdentityRecord {
    pub fn parsed_summand(&self) -> Result<Summand> {
        Summand::parse(&self.summand, VAR)
    }

    /// The series as a term sequence. Leading indices may only be skipped
    /// when their terms are zero, so the sum is unchanged.
    pub fn term(&self) -> Result<HyperTerm> {
        let s = self.parsed_summand()?;
        let t = s.to_term(self.lower)?;
        for n in self.lower..t.first_index() {
            if !s.value(n).is_ok_and(|v| v == Q::from_integer(0.into())) {
                return Err(Error::Catalog(format!("{}: summand is undefined at n = {n}", self.id)));
            }
        }
        Ok(t)
    }

    pub fn rate_q(&self) -> Result<Q> {
        parse_q(&self.rate)
    }

    pub fn constant_value(&self) -> Result<Q> {
        super::reference::constant_value(&self.constant)
    }
}

/// Versioned collection of identity records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityCatalog {
    pub version: u32,
    #[serde(rename = "identity")]
    pub identities: Vec<IdentityRecord>,
}

impl IdentityCatalog {
    /// The shipped catalog, after checking its hash lock.
    pub fn builtin() -> Result<Self> {
        let got = hex::encode(Sha256::digest(IDENTITIES_TOML.as_bytes()));
        let want = IDENTITIES_SHA256.trim();
        if got != want {
            return Err(Error::Catalog(format!("identities.toml hash {got} does not match the lock {want}")));
        }
        Self::parse(IDENTITIES_TOML)
    }

    /// Parses and validates catalog text: every summand must compile, every
    /// constant must name known references, ids must be unique.
    pub fn parse(text: &str) -> Result<Self> {
        let cat: IdentityCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.identities.iter().enumerate() {
            if self.identities[..i].iter().any(|o| o.id == r.id) {
                return Err(Error::Catalog(format!("duplicate identity {}", r.id)));
            }
            let ctx = |e: Error| Error::Catalog(format!("{}: {e}", r.id));
            r.term().map_err(ctx)?;
            r.rate_q().map_err(ctx)?;
            r.constant_value().map_err(ctx)?;
            if let Some(a) = &r.accel {
                a.point_q().map_err(ctx)?;
                a.scale_q().map_err(ctx)?;
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&IdentityRecord> {
        self.identities
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::unknown("identity", id))
    }

    /// The record produced by `route` started at `point`, if any.
    pub fn by_route(&self, route: &str, point: &[Q]) -> Option<&IdentityRecord> {
        let norm = |s: &str| s.split_whitespace().collect::<String>();
        self.identities.iter().find(|r| {
            r.accel
                .as_ref()
                .is_some_and(|a| norm(&a.route) == norm(route) && a.point_q().is_ok_and(|p| p == point))
        })
    }
}
