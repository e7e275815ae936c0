//! The recurrence catalog and the operations on it.

pub mod catalog;
pub mod family;
pub mod rec;
pub mod verify;

pub use catalog::RecurrenceCatalog;
pub use family::Family;
pub use rec::{Applied, Lift, Recurrence, View};
pub use verify::{
    lift_consistent, numeric_gap, residual, sample_point, sweep_terminating, verify_terminating, view_consistent,
    SweepReport,
};
