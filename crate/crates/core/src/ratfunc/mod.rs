//! Exact sparse multivariate polynomials and rational functions over `K`,
//! their evaluation and restriction to lines, and the expression parser.

mod func;
mod mpoly;
mod parse;

pub use func::{LineFunc, Point, RatFunc};
pub use mpoly::{MPoly, Monomial};
pub use parse::{parse_kelem, parse_list, parse_point, parse_ratfunc};
