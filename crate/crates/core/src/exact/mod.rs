//! Exact scalars, polynomials and rational functions.

pub mod expr;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use expr::{parse_expr, parse_rf, Expr};
pub use poly::MultiPoly;
pub use ratfunc::{rf_equal, RationalFunction};
pub use rational::{binomial, pochhammer, q, qf, Q};

use std::collections::HashMap;

/// Evaluates `f` at an assignment; see [`RationalFunction::eval`].
pub fn rf_eval(f: &RationalFunction, at: &HashMap<String, Q>) -> crate::error::Result<Q> {
    f.eval(at)
}
