//! Elements of `K = Q(eps)`, with `eps` a positive infinitesimal.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::upoly::{Field, Ring, UPoly};
use super::value::{ValGroupElem, Value};
use super::{write_signed_terms, Rat};
use crate::error::{Error, Result};

/// `num(eps) / den(eps)` in lowest terms with a monic denominator, so that
/// structural equality coincides with field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElem {
    num: UPoly<Rat>,
    den: UPoly<Rat>,
}

impl KElem {
    /// Builds `num / den` and normalizes it.
    pub fn from_parts(num: UPoly<Rat>, den: UPoly<Rat>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UPoly<Rat>, den: UPoly<Rat>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.ord().unwrap().min(den.ord().unwrap());
        let (num, den) = if k > 0 {
            (num.shift_down(k), den.shift_down(k))
        } else {
            (num, den)
        };
        // after the shift one side has a nonzero constant term, so a monomial
        // denominator is already coprime to the numerator
        if den.ord() == den.degree() {
            let inv = den.leading_coeff().unwrap().recip();
            return KElem {
                num: num.scale(&inv),
                den: UPoly::monomial(Rat::one(), den.degree().unwrap()),
            };
        }
        if den.degree() == Some(0) {
            let inv = den.coeffs()[0].recip();
            return KElem {
                num: num.scale(&inv),
                den: UPoly::one(),
            };
        }
        let g = num.gcd_q(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        let inv = den.leading_coeff().unwrap().recip();
        KElem {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        KElem {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        KElem {
            num: UPoly::constant(q),
            den: UPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_rat(Rat::new(n.into(), d.into())))
    }

    /// The infinitesimal `eps`.
    pub fn eps() -> Self {
        KElem {
            num: UPoly::monomial(Rat::one(), 1),
            den: UPoly::one(),
        }
    }

    /// `eps^k` for any integer `k`.
    pub fn eps_pow(k: i64) -> Self {
        let m = UPoly::monomial(Rat::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            KElem {
                num: m,
                den: UPoly::one(),
            }
        } else {
            KElem {
                num: UPoly::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &UPoly<Rat> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<Rat> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.den.is_one() && self.num.degree().is_none_or(|d| d == 0) {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `eps`-adic valuation as an integer; `None` for zero.
    pub fn ord(&self) -> Option<i64> {
        let n = self.num.ord()? as i64;
        let d = self.den.ord().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// `nu_K`, with `nu_K(0) = inf`.
    pub fn val(&self) -> Value {
        match self.ord() {
            Some(k) => Value::Finite(ValGroupElem::scalar(k)),
            None => Value::Infinity,
        }
    }

    /// Angular component: the ratio of the lowest-order coefficients, i.e.
    /// the residue of `self / eps^ord(self)`. Zero for zero.
    pub fn angular(&self) -> Rat {
        match (self.num.lowest_coeff(), self.den.lowest_coeff()) {
            (Some(n), Some(d)) => n / d,
            _ => Rat::zero(),
        }
    }

    /// Sign in the order where `eps` is positive and smaller than every positive rational.
    pub fn sign(&self) -> i8 {
        let a = self.angular();
        if a.is_positive() {
            1
        } else if a.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Residue in `Q`; defined on the valuation ring.
    pub fn res(&self) -> Result<Rat> {
        match self.ord() {
            None => Ok(Rat::zero()),
            Some(k) if k < 0 => Err(Error::NegativeValuation),
            Some(0) => Ok(self.angular()),
            Some(_) => Ok(Rat::zero()),
        }
    }

    pub fn abs(&self) -> KElem {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // already coprime: only the leading coefficient needs fixing
        let inv = self.num.leading_coeff().unwrap().recip();
        Ok(KElem {
            num: self.den.scale(&inv),
            den: self.num.scale(&inv),
        })
    }

    pub fn checked_div(&self, other: &KElem) -> Result<KElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> KElem {
        KElem {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Compares in the field order.
    pub fn cmp_order(&self, other: &KElem) -> std::cmp::Ordering {
        (self - other).sign().cmp(&0)
    }

    fn add_impl(&self, other: &KElem) -> KElem {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // adding a polynomial cannot create a common factor
        if other.den.is_one() {
            let num = self.num.add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero();
            }
            return KElem {
                num,
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return other.add_impl(self);
        }
        let g = self.den.gcd_q(&other.den);
        if g.is_one() {
            return KElem {
                num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                den: self.den.mul(&other.den),
            };
        }
        let d1 = self.den.div_rem(&g).unwrap().0;
        let d2 = other.den.div_rem(&g).unwrap().0;
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = num.gcd_q(&g);
        let den = d1.mul(&other.den);
        if h.is_one() {
            return KElem { num, den };
        }
        KElem {
            num: num.div_rem(&h).unwrap().0,
            den: den.div_rem(&h).unwrap().0,
        }
    }

    fn mul_impl(&self, other: &KElem) -> KElem {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return KElem {
                num: self.num.mul(&other.num),
                den: UPoly::one(),
            };
        }
        // cross cancellation suffices since both factors are reduced
        let cancel = |n: &UPoly<Rat>, d: &UPoly<Rat>| {
            let g = n.gcd_q(d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_rem(&g).unwrap().0, d.div_rem(&g).unwrap().0)
            }
        };
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        KElem {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }
}

impl Zero for KElem {
    fn zero() -> Self {
        KElem::zero()
    }
    fn is_zero(&self) -> bool {
        KElem::is_zero(self)
    }
}

impl One for KElem {
    fn one() -> Self {
        KElem::one()
    }
}

impl Ring for KElem {
    fn plus(&self, other: &Self) -> Self {
        self.add_impl(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.add_impl(&-other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Field for KElem {
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
}

impl Add for &KElem {
    type Output = KElem;
    fn add(self, rhs: &KElem) -> KElem {
        self.add_impl(rhs)
    }
}

impl Sub for &KElem {
    type Output = KElem;
    fn sub(self, rhs: &KElem) -> KElem {
        self.add_impl(&-rhs)
    }
}

impl Mul for &KElem {
    type Output = KElem;
    fn mul(self, rhs: &KElem) -> KElem {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`KElem::checked_div`] for a `Result`.
impl Div for &KElem {
    type Output = KElem;
    fn div(self, rhs: &KElem) -> KElem {
        self.checked_div(rhs).expect("division by zero in K")
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for KElem {
            type Output = KElem;
            fn $m(self, rhs: KElem) -> KElem {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        -&self
    }
}

impl From<i64> for KElem {
    fn from(n: i64) -> Self {
        KElem::from_int(n)
    }
}

impl From<Rat> for KElem {
    fn from(q: Rat) -> Self {
        KElem::from_rat(q)
    }
}

fn eps_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "eps".to_string(),
        _ => format!("eps^{k}"),
    }
}

fn write_eps_poly(f: &mut fmt::Formatter<'_>, p: &UPoly<Rat>) -> fmt::Result {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !Zero::is_zero(*c))
        .map(|(k, c)| (c.clone(), eps_power(k)));
    write_signed_terms(f, terms)
}

/// Prints in the expression grammar, lowest `eps` power first.
impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write_eps_poly(f, &self.num);
        }
        write!(f, "(")?;
        write_eps_poly(f, &self.num)?;
        write!(f, ")/(")?;
        write_eps_poly(f, &self.den)?;
        write!(f, ")")
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KElem({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> KElem {
        KElem::from_int(n)
    }

    fn eps() -> KElem {
        KElem::eps()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&eps() * &eps(), KElem::eps_pow(2));
        let q = k(1).checked_div(&(&k(2) + &eps())).unwrap();
        assert_eq!(&q * &(&k(2) + &eps()), k(1));
        assert_eq!(q.to_string(), "(1)/(2 + eps)");
        let s = &k(1).checked_div(&eps()).unwrap() + &eps();
        assert_eq!(s, (&k(1) + &KElem::eps_pow(2)).checked_div(&eps()).unwrap());
        assert_eq!(k(1).checked_div(&KElem::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn valuation_examples() {
        let a = KElem::eps_pow(2).checked_div(&(&k(2) + &eps())).unwrap();
        assert_eq!(a.ord(), Some(2));
        assert_eq!(KElem::zero().val(), Value::Infinity);
        let b = (&k(3) + &eps()).checked_div(&eps()).unwrap();
        assert_eq!(b.ord(), Some(-1));
    }

    #[test]
    fn sign_examples() {
        assert_eq!((&k(1) - &(&k(1000) * &eps())).sign(), 1);
        assert_eq!((&(&k(-3) * &eps()) + &KElem::eps_pow(2)).sign(), -1);
        assert_eq!(KElem::zero().sign(), 0);
    }

    #[test]
    fn residue_examples() {
        let a = (&k(3) + &eps()).checked_div(&(&k(1) - &eps())).unwrap();
        assert_eq!(a.res().unwrap(), Rat::from_integer(3.into()));
        assert_eq!(eps().res().unwrap(), Rat::zero());
        let b = (&(&k(2) * &eps()) + &KElem::eps_pow(2)).checked_div(&eps()).unwrap();
        assert_eq!(b.res().unwrap(), Rat::from_integer(2.into()));
        assert_eq!(KElem::eps_pow(-1).res(), Err(Error::NegativeValuation));
    }

    #[test]
    fn normal_form_is_canonical() {
        // (eps^2 - 1)/(eps - 1) == eps + 1
        let a = KElem::from_parts(
            UPoly::new(vec![Rat::from_integer((-1).into()), Rat::zero(), Rat::one()]),
            UPoly::new(vec![Rat::from_integer((-1).into()), Rat::one()]),
        )
        .unwrap();
        assert_eq!(a, &eps() + &k(1));
        assert_eq!(a.den(), &UPoly::one());
    }

    #[test]
    fn eps_is_positive_infinitesimal() {
        assert_eq!(eps().sign(), 1);
        for (n, d) in [(1, 1), (1, 1000), (7, 3), (1, 1_000_000)] {
            let q = KElem::from_ratio(n, d).unwrap();
            assert_eq!((&q - &eps()).sign(), 1);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn upoly() -> impl Strategy<Value = UPoly<Rat>> {
            prop::collection::vec(-4i64..=4, 1..4)
                .prop_map(|cs| UPoly::new(cs.into_iter().map(|c| Rat::from_integer(c.into())).collect()))
        }

        fn nonzero() -> impl Strategy<Value = UPoly<Rat>> {
            upoly().prop_filter("nonzero", |p| !p.is_zero())
        }

        /// Elements whose numerator and denominator share a random factor before reduction.
        fn elem() -> impl Strategy<Value = KElem> {
            (upoly(), nonzero(), nonzero()).prop_map(|(n, d, c)| KElem::from_parts(n.mul(&c), d.mul(&c)).unwrap())
        }

        /// Reduction by the plain Euclidean gcd.
        fn reference(num: UPoly<Rat>, den: UPoly<Rat>) -> (UPoly<Rat>, UPoly<Rat>) {
            if num.is_zero() {
                return (UPoly::zero(), UPoly::one());
            }
            let g = num.gcd(&den);
            let (n, d) = (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0);
            let inv = d.leading_coeff().unwrap().recip();
            (n.scale(&inv), d.scale(&inv))
        }

        fn parts(x: &KElem) -> (UPoly<Rat>, UPoly<Rat>) {
            (x.num().clone(), x.den().clone())
        }

        proptest! {
            #[test]
            fn arithmetic_is_reduced(a in elem(), b in elem()) {
                prop_assert_eq!(parts(&a), reference(a.num().clone(), a.den().clone()));
                let sum = &a + &b;
                prop_assert_eq!(parts(&sum), reference(a.num().mul(b.den()).add(&b.num().mul(a.den())), a.den().mul(b.den())));
                let prod = &a * &b;
                prop_assert_eq!(parts(&prod), reference(a.num().mul(b.num()), a.den().mul(b.den())));
                if !a.is_zero() {
                    prop_assert_eq!(parts(&a.inv().unwrap()), reference(a.den().clone(), a.num().clone()));
                }
            }

            #[test]
            fn gcd_q_matches_euclid(a in upoly(), b in upoly(), c in nonzero()) {
                let (a, b) = (a.mul(&c), b.mul(&c));
                prop_assert_eq!(a.gcd_q(&b), a.gcd(&b));
            }
        }
    }
}
