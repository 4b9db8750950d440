//! Dense univariate polynomials over an exact field.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Exact commutative ring operations by reference.
pub trait Ring: Clone + PartialEq + fmt::Debug + Zero + One {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

/// Minimal exact-field interface shared by `Rat` and `KElem`, so that the same
/// univariate polynomial code serves both `Q[eps]` and `K[t]`.
pub trait Field: Ring {
    fn inverse(&self) -> Result<Self>;
}

impl Ring for Rat {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Field for Rat {
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

/// Polynomial `c[0] + c[1] t + ...` with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Ring> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// `c * t^k`
    pub fn monomial(c: F, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == F::one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order of vanishing at 0, `None` for the zero polynomial.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lowest_coeff(&self) -> Option<&F> {
        self.ord().map(|k| &self.coeffs[k])
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Divides by `t^k`; the caller guarantees `k <= ord`.
    pub fn shift_down(&self, k: usize) -> Self {
        UPoly {
            coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(F::negated).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }
}

impl<F: Field> UPoly<F> {
    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dlead = divisor.leading_coeff().ok_or(Error::DivisionByZero)?;
        let dinv = dlead.inverse()?;
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = rem[k + ddeg].times(&dinv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(d));
            }
            quot[k] = c;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }
}

impl UPoly<Rat> {
    /// Divides out the rational content, leaving an integral primitive
    /// polynomial with positive leading coefficient. Returns the content.
    pub fn make_primitive(&self) -> (Rat, Self) {
        use num_integer::Integer;
        if self.is_zero() {
            return (Rat::one(), Self::zero());
        }
        let mut lcm_den = num_bigint::BigInt::one();
        let mut gcd_num = num_bigint::BigInt::zero();
        for c in &self.coeffs {
            lcm_den = lcm_den.lcm(c.denom());
            gcd_num = gcd_num.gcd(c.numer());
        }
        let mut content = Rat::new(gcd_num, lcm_den);
        if self.leading_coeff().unwrap().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Monic gcd by primitive pseudo-remainders over `Z`, which keeps
    /// coefficients small where plain Euclid over `Q` blows up.
    pub fn gcd_q(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = integral(&self.make_primitive().1);
        let mut b = integral(&other.make_primitive().1);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.len() == 1 || coprime_mod_p(&a, &b) {
            return Self::one();
        }
        while !b.is_empty() {
            if b.len() == 1 {
                return Self::one();
            }
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive(r);
        }
        UPoly::new(a.into_iter().map(Rat::from_integer).collect()).monic()
    }
}

use num_bigint::BigInt;

fn integral(p: &UPoly<Rat>) -> Vec<BigInt> {
    p.coeffs.iter().map(|c| c.to_integer()).collect()
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    let v = trim(v);
    let Some(last) = v.last() else { return v };
    let mut g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if last.is_negative() {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// `lc(b)^(deg a - deg b + 1) a mod b`, computed without fractions.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().unwrap();
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r = trim(r);
    }
    r
}

/// Sufficient test for coprimality: the images modulo a large prime have a
/// constant gcd and the prime divides neither leading coefficient.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    const P: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
    let red = |v: &[BigInt]| -> Vec<u64> {
        let m = BigInt::from(P);
        v.iter()
            .map(|c| {
                let r = c % &m;
                let r = if r.is_negative() { r + &m } else { r };
                u64::try_from(r).expect("reduced")
            })
            .collect()
    };
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % P as u128) as u64;
    let inv = |x: u64| {
        let (mut base, mut e, mut acc) = (x, P - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let trim_p = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut x, mut y) = (red(a), red(b));
    if x.last() == Some(&0) || y.last() == Some(&0) {
        return false;
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return true;
        }
        let li = inv(*y.last().unwrap());
        let dy = y.len() - 1;
        while x.len() > dy {
            let c = mul(*x.last().unwrap(), li);
            let shift = x.len() - 1 - dy;
            for (j, &yj) in y.iter().enumerate() {
                let t = mul(c, yj);
                x[shift + j] = (x[shift + j] + P - t) % P;
            }
            x = trim_p(x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    false
}

impl<F: Ring> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs)
    }
}
