//! Hypergeometric term sequences, exact partial sums and certified evaluation.

pub mod bounds;
pub mod eval;
pub mod summand;
pub mod sum;
pub mod term;
pub mod upoly;

pub use bounds::{TailBound, TailRegime};
pub use eval::{
    estimate_rate, evaluate, evaluate_capped, evaluate_terms, evaluate_with, Ball, EvalOptions, EvalResult,
    RateEstimate,
};
pub use sum::{partial_sum_exact, partial_sum_exact_par, partial_sum_exact_seq, partial_sum_fixed};
pub use summand::{compile_summand, Summand};
pub use term::{compile_pfq, HyperTerm, PFQSpec};
