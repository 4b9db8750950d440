//! Value groups `Z^r` under the lexicographic order, the adjoined top element
//! for the valuation of zero, and parity vectors in `F2^r`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of `Z^r`, ordered lexicographically with the first coordinate
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValGroupElem(Vec<i64>);

impl ValGroupElem {
    pub fn new(coords: Vec<i64>) -> Self {
        ValGroupElem(coords)
    }

    pub fn zero(rank: usize) -> Self {
        ValGroupElem(vec![0; rank])
    }

    /// The `k`-th standard basis vector.
    pub fn unit(rank: usize, k: usize) -> Self {
        let mut v = vec![0; rank];
        v[k] = 1;
        ValGroupElem(v)
    }

    pub fn scalar(n: i64) -> Self {
        ValGroupElem(vec![n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        ValGroupElem(self.0.iter().map(|c| c * k).collect())
    }

    pub fn parity(&self) -> Parity {
        Parity(self.0.iter().map(|c| c.rem_euclid(2) == 1).collect())
    }

    /// `self / 2`, defined only on `2 Z^r`.
    pub fn half(&self) -> Option<Self> {
        if self.0.iter().all(|c| c % 2 == 0) {
            Some(ValGroupElem(self.0.iter().map(|c| c / 2).collect()))
        } else {
            None
        }
    }
}

impl Add for &ValGroupElem {
    type Output = ValGroupElem;
    fn add(self, rhs: &ValGroupElem) -> ValGroupElem {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        ValGroupElem(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ValGroupElem {
    type Output = ValGroupElem;
    fn sub(self, rhs: &ValGroupElem) -> ValGroupElem {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        ValGroupElem(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ValGroupElem {
    type Output = ValGroupElem;
    fn neg(self) -> ValGroupElem {
        ValGroupElem(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ValGroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
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

/// A valuation value: a group element, or the top element `inf` taken by zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(ValGroupElem),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&ValGroupElem> {
        match self {
            Value::Finite(g) => Some(g),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    /// Sum in the monoid `Gamma + {inf}`.
    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(g) => write!(f, "{g}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

/// A vector over `F2`, the image of a group element in `Gamma / 2 Gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Parity(pub Vec<bool>);

impl Parity {
    pub fn zero(rank: usize) -> Self {
        Parity(vec![false; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn xor(&self, other: &Parity) -> Parity {
        assert_eq!(self.0.len(), other.0.len(), "rank mismatch");
        Parity(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    /// Position of the first set bit.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", u8::from(*b))?;
        }
        Ok(())
    }
}
