use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ovf::{KElem, Ring, UPoly};

/// Exponent vector with trailing zeros trimmed, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `x_i` with `i` zero-based.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of variables actually mentioned.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        Some(Monomial::new(out))
    }

    /// Coordinatewise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::new((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    /// Sum of `exponent * weight`.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * weights.get(i).copied().unwrap_or(0))
            .sum()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{var}{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // trimmed vectors compare like their zero-padded versions under Vec's lex order
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "x")
    }
}

/// Sparse polynomial in `x1, x2, ...` with coefficients in `K`. Zero
/// coefficients are never stored; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, KElem>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(KElem::one())
    }

    pub fn constant(c: KElem) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: KElem, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        Self::term(KElem::one(), Monomial::var(i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, KElem)>>(terms: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: KElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &KElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> KElem {
        self.terms.get(m).cloned().unwrap_or_else(KElem::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<KElem> {
        match self.terms.len() {
            0 => Some(KElem::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Largest term under graded-lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &KElem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// One more than the largest variable index mentioned.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let (mut acc, src) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &src.terms {
            acc.add_term(m.clone(), c.clone());
        }
        acc
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut acc = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.mul(mb), ca * cb);
            }
        }
        acc
    }

    pub fn scale(&self, c: &KElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect(),
        }
    }

    /// Divides every term by `mono`; the caller guarantees divisibility.
    pub fn div_monomial(&self, mono: &Monomial) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.div(mono).expect("monomial divides every term"), a.clone()))
                .collect(),
        }
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
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

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_terms<F: FnMut(&Monomial, &KElem) -> KElem>(&self, mut f: F) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))))
    }

    /// Evaluates with `point[i]` substituted for `x_{i+1}`, for any field
    /// receiving `K` through `embed`.
    pub fn eval_in<F: Ring>(&self, point: &[F], embed: impl Fn(&KElem) -> F) -> Result<F> {
        let nv = self.nvars();
        if point.len() < nv {
            return Err(Error::DimensionMismatch {
                expected: nv,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<F>> = point.iter().take(nv).map(|x| vec![F::one(), x.clone()]).collect();
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().times(&pw[1]);
                    pw.push(next);
                }
                t = t.times(&pw[e as usize]);
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[KElem]) -> Result<KElem> {
        self.eval_in(point, KElem::clone)
    }

    /// `p(b + t d)` as a polynomial in `t` over `K`.
    pub fn subst_line(&self, b: &[KElem], d: &[KElem]) -> Result<UPoly<KElem>> {
        let n = b.len().min(d.len());
        let line: Vec<UPoly<KElem>> = (0..n).map(|i| UPoly::new(vec![b[i].clone(), d[i].clone()])).collect();
        self.eval_in(&line, |c| UPoly::constant(c.clone()))
    }
}

impl Ring for UPoly<KElem> {
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

impl num_traits::Zero for UPoly<KElem> {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
}

impl num_traits::One for UPoly<KElem> {
    fn one() -> Self {
        UPoly::one()
    }
}

impl std::ops::Add for UPoly<KElem> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        UPoly::add(&self, &rhs)
    }
}

impl std::ops::Mul for UPoly<KElem> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        UPoly::mul(&self, &rhs)
    }
}

/// Prints highest graded-lex term first, in the expression grammar.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = m.to_string();
            match c.as_rational() {
                Some(q) => {
                    use num_traits::{One, Signed};
                    let neg = q.is_negative();
                    if idx == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    let a = q.abs();
                    if mono.is_empty() {
                        write!(f, "{a}")?;
                    } else if a.is_one() {
                        write!(f, "{mono}")?;
                    } else {
                        write!(f, "{a}*{mono}")?;
                    }
                }
                None => {
                    if idx > 0 {
                        write!(f, " + ")?;
                    }
                    if c.den().is_one() {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                    if !mono.is_empty() {
                        write!(f, "*{mono}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MPoly {
        MPoly::var(i)
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(KElem::from_int(n))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![0, 2]);
        let b = Monomial::new(vec![1, 0, 0]);
        let d = Monomial::new(vec![2]);
        assert!(b < a);
        assert!(a < d);
        assert_eq!(b, Monomial::var(0));
    }

    #[test]
    fn arithmetic_cancels() {
        let p = x(0).add(&x(0).neg());
        assert!(p.is_zero());
        let q = x(0).add(&c(1)).mul(&x(0).sub(&c(1)));
        assert_eq!(q, x(0).pow(2).sub(&c(1)));
        assert_eq!(q.to_string(), "x1^2 - 1");
    }

    #[test]
    fn printing_mixed_coefficients() {
        let p = x(1)
            .scale(&(&KElem::one() + &KElem::eps()))
            .add(&x(0).pow(2).scale(&KElem::from_ratio(-3, 4).unwrap()));
        assert_eq!(p.to_string(), "-3/4*x1^2 + (1 + eps)*x2");
    }

    #[test]
    fn evaluation_and_line() {
        let p = x(0).mul(&c(1).sub(&x(0)));
        let half = KElem::from_ratio(1, 2).unwrap();
        assert_eq!(p.eval(&[half]).unwrap(), KElem::from_ratio(1, 4).unwrap());
        assert!(matches!(p.eval(&[]), Err(Error::DimensionMismatch { .. })));
        let q = x(0).pow(2).add(&MPoly::constant(KElem::eps()));
        let l = q.subst_line(&[KElem::zero()], &[KElem::one()]).unwrap();
        assert_eq!(l, UPoly::new(vec![KElem::eps(), KElem::zero(), KElem::one()]));
    }

    #[test]
    fn monomial_content() {
        let p = x(0).pow(2).mul(&x(1)).add(&x(0).pow(3));
        assert_eq!(p.monomial_content(), Monomial::new(vec![2]));
    }
}
