//! Exact hypergeometric recurrences, accelerated series and WZ certificate
//! checking.

pub mod catalog;
pub mod error;
pub mod exact;
pub mod par;
pub mod recurrence;
pub mod series;
pub mod wz;

pub use error::{Error, Result};
