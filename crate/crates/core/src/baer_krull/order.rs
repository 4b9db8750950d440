use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ovf::Value;
use crate::ratfunc::{MPoly, Monomial, RatFunc};
use crate::valuations::{ResidueElem, ValuationHandle, ValuationKind};

use super::semisection::SemiSection;

pub const DEFAULT_CATALOG_CAP: usize = 384;

/// A field order on a residue field. `LeadingSign` orders `Q(y_1..y_n)`:
/// substitute `y_i -> sigma_i y_i`, make every variable infinitely large and
/// positive with `y_{perm[0]}` dominating `y_{perm[1]}` and so on, and read
/// off the sign of the leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueOrder {
    StandardQ,
    LeadingSign { perm: Vec<usize>, signs: Vec<i8> },
}

impl ResidueOrder {
    fn poly_sign(&self, p: &MPoly) -> i8 {
        let ResidueOrder::LeadingSign { perm, signs } = self else {
            return p.as_constant().map_or(0, |c| c.sign());
        };
        let key = |m: &Monomial| -> Vec<u32> { perm.iter().map(|&i| m.exp(i)).collect() };
        let Some((m, c)) = p.terms().max_by(|(a, _), (b, _)| key(a).cmp(&key(b))) else {
            return 0;
        };
        let flips = signs
            .iter()
            .enumerate()
            .filter(|&(i, &s)| s < 0 && m.exp(i) % 2 == 1)
            .count();
        if flips % 2 == 1 {
            -c.sign()
        } else {
            c.sign()
        }
    }

    pub fn sign(&self, r: &ResidueElem) -> Result<i8> {
        match (self, r) {
            (_, ResidueElem::Rational(q)) => Ok(if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }),
            (ResidueOrder::StandardQ, ResidueElem::Function(f)) => {
                f.as_constant().map(|c| c.sign()).ok_or(Error::ResidueOrderMismatch)
            }
            (ResidueOrder::LeadingSign { perm, .. }, ResidueElem::Function(f)) => {
                if f.nvars() > perm.len() {
                    return Err(Error::ResidueOrderMismatch);
                }
                Ok(self.poly_sign(f.num()) * self.poly_sign(f.den()))
            }
        }
    }

    pub fn cmp(&self, a: &ResidueElem, b: &ResidueElem) -> Result<Ordering> {
        let diff = a.add(&negate(b))?;
        Ok(self.sign(&diff)?.cmp(&0))
    }
}

fn negate(r: &ResidueElem) -> ResidueElem {
    match r {
        ResidueElem::Rational(q) => ResidueElem::Rational(-q),
        ResidueElem::Function(f) => ResidueElem::Function(f.neg()),
    }
}

impl fmt::Display for ResidueOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueOrder::StandardQ => write!(f, "standard order on Q"),
            ResidueOrder::LeadingSign { perm, signs } => {
                let vars: Vec<String> = perm.iter().map(|i| format!("y{}", i + 1)).collect();
                let sg: Vec<&str> = signs.iter().map(|&s| if s < 0 { "-" } else { "+" }).collect();
                write!(f, "leading sign, {} with signs ({})", vars.join(" >> "), sg.join(", "))
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// The candidate residue orders for `v`, in search order: `StandardQ` when
/// the residue field is `Q`, otherwise permutations in lexicographic order,
/// each with sign vectors in binary order (`+` before `-`), up to `cap`.
pub fn residue_order_catalog(v: &ValuationHandle, cap: usize) -> Vec<ResidueOrder> {
    let n = match v.kind() {
        ValuationKind::NearPoint { .. } => 0,
        ValuationKind::WeightedGauss { w } => w.len(),
    };
    if n == 0 {
        return vec![ResidueOrder::StandardQ];
    }
    let mut out = Vec::new();
    for perm in permutations(n) {
        for mask in 0u64..(1u64 << n.min(63)) {
            if out.len() >= cap {
                return out;
            }
            let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push(ResidueOrder::LeadingSign {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

/// The order on `L` lifted from a residue order through a semi-section:
/// `x > 0` iff `res(x / s(nu(x))) > 0`.
#[derive(Clone, Debug)]
pub struct OrderHandle {
    pub semisection: SemiSection,
    pub residue_order: ResidueOrder,
}

pub fn baer_krull_order(v: &ValuationHandle, s: SemiSection, ro: ResidueOrder) -> Result<OrderHandle> {
    if s.valuation() != v {
        return Err(Error::HypothesisViolated(
            "semi-section belongs to a different valuation".into(),
        ));
    }
    Ok(OrderHandle {
        semisection: s,
        residue_order: ro,
    })
}

impl OrderHandle {
    pub fn valuation(&self) -> &ValuationHandle {
        self.semisection.valuation()
    }

    pub fn sign(&self, f: &RatFunc) -> Result<i8> {
        let gamma = match self.valuation().val_of(f)? {
            Value::Infinity => return Ok(0),
            Value::Finite(g) => g,
        };
        let unit = f.div(&self.semisection.section(&gamma))?;
        self.residue_order.sign(&self.valuation().residue(&unit)?)
    }

    pub fn cmp(&self, f: &RatFunc, g: &RatFunc) -> Result<Ordering> {
        Ok(self.sign(&f.sub(g))?.cmp(&0))
    }
}

impl fmt::Display for OrderHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; residue order: {}", self.valuation(), self.residue_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baer_krull::{build_semisection, build_semisection_with_base};
    use crate::ovf::{KElem, ValGroupElem};
    use crate::ratfunc::{parse_ratfunc, Point};

    fn f(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn eps_adic_examples() {
        let v = ValuationHandle::weighted_gauss(vec![]);
        let s = build_semisection(&v, vec![]).unwrap();
        let o = baer_krull_order(&v, s, ResidueOrder::StandardQ).unwrap();
        assert_eq!(o.sign(&f("-3*eps + eps^2")).unwrap(), -1);
        assert_eq!(o.sign(&f("eps")).unwrap(), 1);
        let s = build_semisection_with_base(&v, vec![], vec![f("-eps")]).unwrap();
        let o = baer_krull_order(&v, s, ResidueOrder::StandardQ).unwrap();
        assert_eq!(o.sign(&f("eps")).unwrap(), -1);
        assert_eq!(o.sign(&f("eps^2")).unwrap(), 1);
    }

    #[test]
    fn near_point_forced_sign() {
        let v = ValuationHandle::near_point(Point::new(vec![KElem::zero()]), Point::new(vec![KElem::one()])).unwrap();
        let s = build_semisection(&v, vec![(ValGroupElem::new(vec![1, 0]), f("x1"))]).unwrap();
        let o = baer_krull_order(&v, s, ResidueOrder::StandardQ).unwrap();
        assert_eq!(o.sign(&f("x1")).unwrap(), 1);
        assert_eq!(o.sign(&f("-x1 + x1^2")).unwrap(), -1);
        assert_eq!(o.sign(&f("-x1 + eps")).unwrap(), 1);
    }

    #[test]
    fn leading_sign_orders() {
        let ro = ResidueOrder::LeadingSign {
            perm: vec![1, 0],
            signs: vec![1, -1],
        };
        let r = |s: &str| ResidueElem::Function(f(s));
        // y2 dominates y1; y2 -> -y2
        assert_eq!(ro.sign(&r("x1^5 - x2")).unwrap(), 1);
        assert_eq!(ro.sign(&r("x2^2 - x1^9")).unwrap(), 1);
        assert_eq!(ro.sign(&r("1/(x2 + x1)")).unwrap(), -1);
        assert_eq!(
            ro.sign(&ResidueElem::Rational(crate::ovf::Rat::from_integer((-2).into())))
                .unwrap(),
            -1
        );
        assert_eq!(ResidueOrder::StandardQ.sign(&r("x1")), Err(Error::ResidueOrderMismatch));
    }

    #[test]
    fn catalog_shape() {
        assert_eq!(
            residue_order_catalog(&ValuationHandle::weighted_gauss(vec![]), 384),
            vec![ResidueOrder::StandardQ]
        );
        let c = residue_order_catalog(&ValuationHandle::weighted_gauss(vec![1, 0]), 384);
        assert_eq!(c.len(), 8);
        assert_eq!(
            c[0],
            ResidueOrder::LeadingSign {
                perm: vec![0, 1],
                signs: vec![1, 1]
            }
        );
        assert_eq!(
            residue_order_catalog(&ValuationHandle::weighted_gauss(vec![0; 4]), 384).len(),
            384
        );
        assert_eq!(
            residue_order_catalog(&ValuationHandle::weighted_gauss(vec![0; 5]), 384).len(),
            384
        );
        assert_eq!(permutations(3).len(), 6);
    }
}
