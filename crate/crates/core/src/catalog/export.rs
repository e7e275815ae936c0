//! Machine-readable dumps of the identity catalog.

use serde::{Deserialize, Serialize};

use super::harness::{measured_rate, VerifyReport};
use super::identity::{AccelSpec, IdentityCatalog, IdentityRecord, Status};
use crate::error::{Error, Result};

/// Fixed CSV header.
pub const CSV_COLUMNS: [&str; 7] =
    ["id", "constant", "rate_claimed", "rate_measured", "status", "anchor", "digits_achieved"];

/// One identity with its measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportRow {
    pub id: String,
    pub summand: String,
    pub lower: i64,
    pub constant: String,
    pub rate_claimed: String,
    /// Extrapolated term ratio, in scientific notation.
    pub rate_measured: Option<String>,
    pub status: Status,
    pub anchor: String,
    pub digits: Option<u32>,
    pub term_cap: Option<u64>,
    pub accel: Option<AccelSpec>,
    /// Filled in when the export follows a verification run.
    pub digits_achieved: Option<i64>,
}

impl ExportRow {
    pub fn record(&self) -> IdentityRecord {
        IdentityRecord {
            id: self.id.clone(),
            summand: self.summand.clone(),
            lower: self.lower,
            constant: self.constant.clone(),
            rate: self.rate_claimed.clone(),
            status: self.status,
            anchor: self.anchor.clone(),
            digits: self.digits,
            term_cap: self.term_cap,
            accel: self.accel.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Export {
    pub version: u32,
    pub identities: Vec<ExportRow>,
}

impl Export {
    /// Rows for every record, with `digits_achieved` taken from matching
    /// reports.
    pub fn new(cat: &IdentityCatalog, reports: &[VerifyReport]) -> Result<Self> {
        let mut identities = Vec::new();
        for r in &cat.identities {
            let rate = measured_rate(r).ok().and_then(|e| num_traits::ToPrimitive::to_f64(&e.extrapolated));
            identities.push(ExportRow {
                id: r.id.clone(),
                summand: r.summand.clone(),
                lower: r.lower,
                constant: r.constant.clone(),
                rate_claimed: r.rate.clone(),
                rate_measured: rate.map(|v| format!("{v:.6e}")),
                status: r.status,
                anchor: r.anchor.clone(),
                digits: r.digits,
                term_cap: r.term_cap,
                accel: r.accel.clone(),
                digits_achieved: reports.iter().find(|p| p.id == r.id).map(|p| p.digits_achieved),
            });
        }
        Ok(Export { version: cat.version, identities })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))
    }

    /// The records, validated as a catalog.
    pub fn catalog(&self) -> Result<IdentityCatalog> {
        let cat = IdentityCatalog { version: self.version, identities: self.identities.iter().map(ExportRow::record).collect() };
        cat.validate()?;
        Ok(cat)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(CSV_COLUMNS).map_err(io)?;
        for r in &self.identities {
            w.write_record([
                r.id.as_str(),
                r.constant.as_str(),
                r.rate_claimed.as_str(),
                r.rate_measured.as_deref().unwrap_or(""),
                r.status.as_str(),
                r.anchor.as_str(),
                &r.digits_achieved.map(|d| d.to_string()).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}
