//! The identity catalog, the acceleration pipeline built on the recurrence
//! catalog, reference constants and exports.

pub mod accel;
pub mod export;
pub mod harness;
pub mod identity;
pub mod reference;

pub use accel::{accelerate, first_mismatch, ratio_matches, run_for, AccelerationRun};
pub use export::{Export, ExportRow, CSV_COLUMNS};
pub use harness::{measured_rate, verify_all, verify_identity, Outcome, VerifyReport};
pub use identity::{AccelSpec, IdentityCatalog, IdentityRecord, Status};
pub use reference::{constant_value, reference, reference_value, ReferenceConstant, REFERENCES};
