//! Writing nonnegative rationals as sums of at most four rational squares.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ovf::Rat;

const SEARCH_BUDGET: u64 = 20_000_000;

fn is_square(n: u128) -> Option<u128> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Legendre: `n` is a sum of three squares unless `n = 4^k (8m + 7)`.
fn is_three_square(mut n: u128) -> bool {
    if n == 0 {
        return true;
    }
    while n.is_multiple_of(4) {
        n /= 4;
    }
    n % 8 != 7
}

fn two_squares(n: u128, steps: &mut u64) -> Result<Option<(u128, u128)>> {
    let mut c = n.sqrt();
    loop {
        *steps += 1;
        if *steps > SEARCH_BUDGET {
            return Err(Error::BudgetExceeded("four-square search".into()));
        }
        let rest = n - c * c;
        if rest > c * c {
            return Ok(None);
        }
        if let Some(d) = is_square(rest) {
            return Ok(Some((c, d)));
        }
        if c == 0 {
            return Ok(None);
        }
        c -= 1;
    }
}

/// `[a, b, c, d]` with `a^2 + b^2 + c^2 + d^2 = n`, found by descending search.
pub fn four_squares(n: u128) -> Result<[u128; 4]> {
    let mut steps = 0u64;
    let mut a = n.sqrt();
    loop {
        let r = n - a * a;
        if is_three_square(r) {
            let mut b = r.sqrt();
            loop {
                let r2 = r - b * b;
                if let Some((c, d)) = two_squares(r2, &mut steps)? {
                    return Ok([a, b, c, d]);
                }
                if b == 0 {
                    break;
                }
                b -= 1;
            }
        }
        if a == 0 {
            unreachable!("Lagrange's four-square theorem");
        }
        a -= 1;
    }
}

fn to_u128(n: &BigInt) -> Result<u128> {
    n.to_u128()
        .filter(|&v| v < (1u128 << 100))
        .ok_or_else(|| Error::BudgetExceeded(format!("{n} too large for the four-square search")))
}

/// Rationals `r_k` (at most four, all nonzero) with `sum r_k^2 = q`.
pub fn rational_as_squares(q: &Rat) -> Result<Vec<Rat>> {
    if q.is_negative() {
        return Err(Error::Structural(format!("{q} is negative, not a sum of squares")));
    }
    if q.is_zero() {
        return Ok(Vec::new());
    }
    let num = to_u128(q.numer())?;
    let den = to_u128(q.denom())?;
    if let (Some(a), Some(b)) = (is_square(num), is_square(den)) {
        return Ok(vec![Rat::new(a.into(), b.into())]);
    }
    // q = (num * den) / den^2
    let n = num
        .checked_mul(den)
        .filter(|&v| v < (1u128 << 100))
        .ok_or_else(|| Error::BudgetExceeded(format!("{q} too large for the four-square search")))?;
    Ok(four_squares(n)?
        .into_iter()
        .filter(|&k| k != 0)
        .map(|k| Rat::new(BigInt::from(k), BigInt::from(den)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(four_squares(0).unwrap(), [0, 0, 0, 0]);
        let r = four_squares(7).unwrap();
        assert_eq!(r.iter().map(|x| x * x).sum::<u128>(), 7);
        assert_eq!(
            rational_as_squares(&Rat::new(4.into(), 9.into())).unwrap(),
            vec![Rat::new(2.into(), 3.into())]
        );
        assert!(rational_as_squares(&Rat::new((-1).into(), 2.into())).is_err());
    }

    proptest! {
        #[test]
        fn decompositions_sum_back(n in 0u64..5_000_000_000) {
            let r = four_squares(n as u128).unwrap();
            prop_assert_eq!(r.iter().map(|x| x * x).sum::<u128>(), n as u128);
        }

        #[test]
        fn rational_decompositions_sum_back(a in 0i64..100_000, b in 1i64..100_000) {
            let q = Rat::new(a.into(), b.into());
            let parts = rational_as_squares(&q).unwrap();
            prop_assert!(parts.len() <= 4);
            let s = parts.iter().fold(Rat::zero(), |acc, r| acc + r * r);
            prop_assert_eq!(s, q);
        }
    }
}
