//! Loading the recurrence catalog from its text form.

use std::collections::BTreeMap;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::family::Family;
use super::rec::{Lift, Recurrence, View};
use crate::error::{Error, Result};
use crate::exact::{parse_rf, RationalFunction, Q};

/// The shipped catalog text.
pub const RECURRENCES_TOML: &str = include_str!("../../catalog/recurrences.toml");
/// SHA-256 of [`RECURRENCES_TOML`], kept next to it.
pub const RECURRENCES_SHA256: &str = include_str!("../../catalog/recurrences.sha256");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: u32,
    family: Vec<RawFamily>,
    recurrence: Vec<RawRecurrence>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: String,
    params: Vec<String>,
    first: String,
    ratio: String,
    label: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecurrence {
    id: String,
    family: String,
    target: Option<String>,
    shift: BTreeMap<String, String>,
    r1: String,
    r2: String,
    anchor: String,
    view_of: Option<String>,
    prefactor: Option<String>,
    probe: Option<BTreeMap<String, String>>,
    sample: Option<BTreeMap<String, String>>,
    lift: Option<BTreeMap<String, String>>,
}

/// All families and recurrences, in file order.
#[derive(Clone, Debug)]
pub struct RecurrenceCatalog {
    pub version: u32,
    families: Vec<Family>,
    recurrences: Vec<Recurrence>,
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn field(id: &str, what: &str, src: &str) -> Result<RationalFunction> {
    parse_rf(src).map_err(|e| Error::Catalog(format!("{id}: {what} `{src}`: {e}")))
}

fn constant(id: &str, what: &str, src: &str) -> Result<Q> {
    field(id, what, src)?
        .as_constant()
        .ok_or_else(|| Error::Catalog(format!("{id}: {what} `{src}` is not a constant")))
}

/// Expressions for each parameter, in parameter order. Missing parameters
/// default to the variable of the same name.
fn per_param(
    id: &str,
    what: &str,
    params: &[String],
    map: Option<&BTreeMap<String, String>>,
) -> Result<Vec<RationalFunction>> {
    let empty = BTreeMap::new();
    let map = map.unwrap_or(&empty);
    if let Some(k) = map.keys().find(|k| !params.contains(k)) {
        return Err(Error::Catalog(format!("{id}: {what} names unknown parameter `{k}`")));
    }
    params
        .iter()
        .map(|p| match map.get(p) {
            Some(src) => field(id, what, src),
            None => Ok(RationalFunction::var(p)),
        })
        .collect()
}

impl RecurrenceCatalog {
    /// The shipped catalog, after checking its hash lock.
    pub fn builtin() -> Result<Self> {
        let want = RECURRENCES_SHA256.split_whitespace().next().unwrap_or_default();
        let got = sha256_hex(RECURRENCES_TOML);
        if want != got {
            return Err(Error::Catalog(format!("recurrences.toml hash {got} does not match the lock {want}")));
        }
        Self::parse(RECURRENCES_TOML)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let mut families = Vec::new();
        for f in raw.family {
            families.push(Family {
                first: field(&f.name, "first", &f.first)?,
                ratio: field(&f.name, "ratio", &f.ratio)?,
                name: f.name,
                params: f.params,
                first_src: f.first,
                ratio_src: f.ratio,
                label: f.label,
            });
        }
        let mut cat = RecurrenceCatalog { version: raw.version, families, recurrences: Vec::new() };
        for r in raw.recurrence {
            let rec = cat.build(r)?;
            if cat.get(&rec.id).is_ok() {
                return Err(Error::Catalog(format!("duplicate recurrence {}", rec.id)));
            }
            cat.recurrences.push(rec);
        }
        for r in &cat.recurrences {
            if let Some(v) = &r.view {
                cat.get(&v.of)?;
            }
            if let Some(l) = &r.lift {
                cat.get(&l.target)?;
            }
        }
        Ok(cat)
    }

    fn build(&self, r: RawRecurrence) -> Result<Recurrence> {
        let id = r.id.as_str();
        let fam = self.family(&r.family)?;
        let target = r.target.clone().unwrap_or_else(|| r.family.clone());
        if self.family(&target)?.params != fam.params {
            return Err(Error::Catalog(format!("{id}: {} and {target} differ in parameters", r.family)));
        }
        let params = fam.params.clone();
        if let Some(k) = r.shift.keys().find(|k| !params.contains(k)) {
            return Err(Error::Catalog(format!("{id}: shift names unknown parameter `{k}`")));
        }
        let shift = params
            .iter()
            .map(|p| r.shift.get(p).map_or(Ok(Q::from_integer(0.into())), |s| constant(id, "shift", s)))
            .collect::<Result<Vec<_>>>()?;
        let view = match (r.view_of, r.prefactor) {
            (Some(of), Some(src)) => Some(View { of, prefactor: field(id, "prefactor", &src)?, prefactor_src: src }),
            (None, None) => None,
            _ => return Err(Error::Catalog(format!("{id}: view_of and prefactor go together"))),
        };
        let lift = match r.lift {
            Some(mut m) => {
                let target = m
                    .remove("target")
                    .ok_or_else(|| Error::Catalog(format!("{id}: lift needs a target")))?;
                let at = m
                    .into_iter()
                    .map(|(k, v)| Ok((k, field(id, "lift", &v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Some(Lift { target, at })
            }
            None => None,
        };
        let probe = match &r.probe {
            Some(m) => per_param(id, "probe", &params, Some(m))?,
            None if params == ["x", "y"] => vec![field(id, "probe", "-n")?, RationalFunction::var("y")],
            None => Vec::new(),
        };
        Ok(Recurrence {
            id: r.id.clone(),
            family: r.family,
            target,
            sample: per_param(id, "sample", &params, r.sample.as_ref())?,
            params,
            shift,
            r1: field(id, "r1", &r.r1)?,
            r2: field(id, "r2", &r.r2)?,
            r1_src: r.r1,
            r2_src: r.r2,
            anchor: r.anchor,
            view,
            lift,
            probe,
        })
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn recurrences(&self) -> &[Recurrence] {
        &self.recurrences
    }

    pub fn family(&self, name: &str) -> Result<&Family> {
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::unknown("family", name))
    }

    pub fn get(&self, id: &str) -> Result<&Recurrence> {
        self.recurrences
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::unknown("recurrence", id))
    }

    /// Resolves a route such as `F54M1_X+F54M1_Y` or `F65_X*3+F65_Y*3`:
    /// entries applied left to right, `*k` repeating an entry `k` times.
    pub fn route(&self, spec: &str) -> Result<Recurrence> {
        let mut acc: Option<Recurrence> = None;
        for part in spec.split('+') {
            let part = part.trim();
            let (id, times) = match part.split_once('*') {
                Some((id, k)) => {
                    let k: usize = k
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(0, format!("bad repeat count in `{part}`")))?;
                    (id.trim(), k)
                }
                None => (part, 1),
            };
            if times == 0 {
                return Err(Error::parse(0, format!("zero repeat count in `{part}`")));
            }
            let rec = self.get(id)?;
            for _ in 0..times {
                acc = Some(match acc {
                    None => rec.clone(),
                    Some(a) => a.compose(rec)?,
                });
            }
        }
        let mut rec = acc.ok_or_else(|| Error::parse(0, "empty route"))?;
        rec.id = spec.split_whitespace().collect();
        Ok(rec)
    }
}
