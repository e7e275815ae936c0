//! Parameterised hypergeometric families.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{RationalFunction, Q};
use crate::series::HyperTerm;

/// Name of the summation index inside family ratios.
pub const INDEX: &str = "k";

/// A term sequence in `k` whose first term and ratio depend on named
/// parameters.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub params: Vec<String>,
    pub first: RationalFunction,
    pub ratio: RationalFunction,
    pub first_src: String,
    pub ratio_src: String,
    pub label: String,
}

impl Family {
    /// Parameter assignment for a point, checking its arity.
    pub fn assignment(&self, point: &[Q]) -> Result<HashMap<String, Q>> {
        if point.len() != self.params.len() {
            return Err(Error::InadmissibleParameters(format!(
                "family {} takes {} parameters, got {}",
                self.name,
                self.params.len(),
                point.len()
            )));
        }
        Ok(self.params.iter().cloned().zip(point.iter().cloned()).collect())
    }

    /// The series at a parameter point, summed from `k = 0`.
    ///
    /// Poles of the ratio before the series terminates, and terminations
    /// that a later factor would undo (`0/0` in the ratio right at or after
    /// the last nonzero term, including a vanishing first term), make the
    /// point inadmissible.
    pub fn instantiate(&self, point: &[Q]) -> Result<HyperTerm> {
        let at = self.assignment(point)?;
        let inadmissible = |e: Error| Error::InadmissibleParameters(format!("{} at {}: {e}", self.name, fmt_point(point)));
        let first = self.first.eval(&at).map_err(inadmissible)?;
        let mut ratio = self.ratio.clone();
        for (name, v) in &at {
            ratio = ratio.specialize(name, v).map_err(inadmissible)?;
        }
        let term = HyperTerm::new(INDEX, 0, first, ratio).map_err(inadmissible)?;
        if let Some(s) = term.last_index() {
            let at_stop = s >= term.first_index() && term.q().eval_i(s).is_zero();
            if at_stop || term.q().eval_i(s + 1).is_zero() {
                return Err(inadmissible(Error::Pole(format!("ratio is 0/0 next to the terminating index {s}"))));
            }
        }
        Ok(term)
    }
}

/// `(1/2, 3)`-style rendering of a parameter point.
pub fn fmt_point(point: &[Q]) -> String {
    let parts: Vec<String> = point.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}
