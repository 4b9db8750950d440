use std::fmt;

use crate::error::{Error, Result};
use crate::ovf::{KElem, Ring, UPoly};

use super::mpoly::MPoly;

/// `num / den` in `L = K(x1, ..., xn)`.
///
/// There is no multivariate gcd: equality is decided by cross-multiplication.
/// Normalization only strips common monomial factors, makes the leading
/// coefficient of the denominator one, and recognizes `num = +-den`.
#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if num == den {
            return Self::one();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g), den.div_monomial(&g))
        };
        let lc = den.leading_term().expect("nonzero denominator").1.clone();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.inv().expect("nonzero coefficient");
            (num.scale(&inv), den.scale(&inv))
        };
        if num == den {
            return Self::one();
        }
        if num.neg() == den {
            return Self::constant(KElem::from_int(-1));
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(KElem::one())
    }

    pub fn constant(c: KElem) -> Self {
        RatFunc {
            num: MPoly::constant(c),
            den: MPoly::one(),
        }
    }

    pub fn eps() -> Self {
        Self::constant(KElem::eps())
    }

    /// The variable `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        Self::from_poly(MPoly::var(i))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    /// The constant value if this function lies in `K`.
    pub fn as_constant(&self) -> Option<KElem> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.checked_div(&d).ok()
    }

    /// The polynomial this function equals, if its denominator is a constant.
    pub fn as_poly(&self) -> Option<MPoly> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.inv().ok()?))
    }

    pub fn to_poly(&self) -> Result<MPoly> {
        self.as_poly().ok_or(Error::NotAPolynomial)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den == other.num {
            return Self::normalized(self.num.clone(), other.den.clone());
        }
        if self.num == other.den {
            return Self::normalized(other.num.clone(), self.den.clone());
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &KElem) -> RatFunc {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        if e == 0 {
            return Self::one();
        }
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<RatFunc> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Value at `b`. Reports `Indeterminate` when both parts vanish, since
    /// this representation does not decide definedness there.
    pub fn eval(&self, b: &[KElem]) -> Result<KElem> {
        let d = self.den.eval(b)?;
        let n = self.num.eval(b)?;
        if d.is_zero() {
            return Err(if n.is_zero() {
                Error::Indeterminate
            } else {
                Error::NotDefinedAt
            });
        }
        n.checked_div(&d)
    }

    /// `f(b + t d)` as an element of `K(t)`.
    pub fn subst_line(&self, b: &[KElem], d: &[KElem]) -> Result<LineFunc> {
        let n = self.nvars();
        for v in [b, d] {
            if v.len() < n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let den = self.den.subst_line(b, d)?;
        if den.is_zero() {
            return Err(Error::LineInDenominatorLocus);
        }
        Ok(LineFunc {
            num: self.num.subst_line(b, d)?,
            den,
        })
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl num_traits::Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl num_traits::One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        RatFunc::add(&self, &rhs)
    }
}

impl std::ops::Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        RatFunc::mul(&self, &rhs)
    }
}

impl Ring for RatFunc {
    fn plus(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn minus(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn negated(&self) -> Self {
        RatFunc::neg(self)
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<KElem> for RatFunc {
    fn from(c: KElem) -> Self {
        RatFunc::constant(c)
    }
}

/// Prints in the expression grammar; re-parsing gives an equal function.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

/// An element `num(t) / den(t)` of `K(t)`, the restriction of a rational
/// function to a line `b + t d`.
#[derive(Clone, Debug)]
pub struct LineFunc {
    num: UPoly<KElem>,
    den: UPoly<KElem>,
}

impl LineFunc {
    pub fn new(num: UPoly<KElem>, den: UPoly<KElem>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::LineInDenominatorLocus);
        }
        Ok(LineFunc { num, den })
    }

    pub fn num(&self) -> &UPoly<KElem> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<KElem> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `t`-adic order; `None` for zero.
    pub fn ord_t(&self) -> Option<i64> {
        Some(self.num.ord()? as i64 - self.den.ord().expect("nonzero denominator") as i64)
    }

    /// Coefficient of the lowest power of `t` in the Laurent expansion.
    pub fn initial_coeff(&self) -> Option<KElem> {
        let n = self.num.lowest_coeff()?;
        let d = self.den.lowest_coeff().expect("nonzero denominator");
        Some(n / d)
    }

    pub fn mul(&self, other: &LineFunc) -> LineFunc {
        LineFunc {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn add(&self, other: &LineFunc) -> LineFunc {
        LineFunc {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }
}

impl PartialEq for LineFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

/// A point of `K^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(pub Vec<KElem>);

impl Point {
    pub fn new(coords: Vec<KElem>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[KElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(KElem::is_zero)
    }

    /// Comma-separated coordinates, the CLI `--b`/`--d` syntax.
    pub fn to_arg(&self) -> String {
        self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RatFunc {
        RatFunc::var(i)
    }

    fn k(n: i64) -> RatFunc {
        RatFunc::constant(KElem::from_int(n))
    }

    #[test]
    fn arithmetic_examples() {
        assert!(x(0).div(&x(0)).unwrap().is_one());
        let a = x(0).pow(2).sub(&k(1)).div(&x(0).sub(&k(1))).unwrap();
        assert_eq!(a, x(0).add(&k(1)));
        assert!(x(0).add(&x(0).neg()).is_zero());
        assert_eq!(x(0).div(&RatFunc::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn eval_examples() {
        let f = x(0).mul(&k(1).sub(&x(0)));
        let half = KElem::from_ratio(1, 2).unwrap();
        assert_eq!(f.eval(&[half]).unwrap(), KElem::from_ratio(1, 4).unwrap());
        let g = k(1).div(&x(0)).unwrap();
        assert_eq!(g.eval(&[KElem::zero()]), Err(Error::NotDefinedAt));
        // x1/x1 normalizes to 1, so build the unreduced quotient directly
        let h = RatFunc {
            num: MPoly::var(0),
            den: MPoly::var(0),
        };
        assert_eq!(h.eval(&[KElem::zero()]), Err(Error::Indeterminate));
    }

    #[test]
    fn line_examples() {
        let zero = [KElem::zero()];
        let one = [KElem::one()];
        let f = x(0).pow(2).add(&RatFunc::eps());
        let l = f.subst_line(&zero, &one).unwrap();
        assert_eq!(l.ord_t(), Some(0));
        assert_eq!(l.initial_coeff(), Some(KElem::eps()));
        let g = k(1).div(&x(0)).unwrap().subst_line(&zero, &one).unwrap();
        assert_eq!(g.ord_t(), Some(-1));
        let h = k(1).div(&x(0).sub(&x(1))).unwrap();
        let b = [KElem::zero(), KElem::zero()];
        let d = [KElem::one(), KElem::one()];
        assert_eq!(h.subst_line(&b, &d).unwrap_err(), Error::LineInDenominatorLocus);
    }

    #[test]
    fn display_is_grammar() {
        let f = x(0).div(&k(1).add(&x(0).pow(2))).unwrap();
        assert_eq!(f.to_string(), "(x1)/(x1^2 + 1)");
        assert_eq!(
            Point::new(vec![KElem::eps(), KElem::from_ratio(-1, 2).unwrap()]).to_string(),
            "(eps, -1/2)"
        );
    }
}
