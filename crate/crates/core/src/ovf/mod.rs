//! The base ordered valued field `K = Q(eps)`: exact rationals, univariate
//! polynomials, field elements with their valuation, sign and residue, and
//! the value groups `Z^r`.

mod kelem;
mod upoly;
mod value;

use std::fmt;

use num_traits::{One, Signed};

pub use kelem::KElem;
pub use upoly::{Field, Ring, UPoly};
pub use value::{Parity, ValGroupElem, Value};

/// Exact rationals, the residue field of `K`.
pub type Rat = num_rational::BigRational;

/// Writes `c1*m1 + c2*m2 - ...` with rational coefficients; `0` when empty.
pub(crate) fn write_signed_terms<I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (Rat, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let a = c.abs();
        if mono.is_empty() {
            write!(f, "{a}")?;
        } else if a.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{a}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
