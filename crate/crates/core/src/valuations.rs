//! Computable valuations on `L = K(x1, ..., xn)` extending the `eps`-adic
//! valuation of `K`.
//!
//! Two families are provided:
//!
//! * `NearPoint(b, d)`: restrict `f` to the line `b + t d`, where `t` is a
//!   positive infinitesimal below every element of `K`, and read off
//!   `(ord_t, nu_K(initial coefficient))` in `Z^2` ordered lexicographically.
//!   Every function vanishing at `b` gets first coordinate at least one, so
//!   its value exceeds the embedded copy `(0, gamma)` of every `gamma` in `Z`.
//! * `WeightedGauss(w)`: the monomial valuation `min(nu_K(c_e) + e.w)` of rank
//!   one, whose residue field is `Q(y1, ..., yn)` via `x_i = eps^{w_i} y_i`.
//!
//! The line restriction is a ring map `K[x] -> K[t]` that is not injective
//! when `n > 1`; a function whose numerator or denominator vanishes on the
//! whole line is reported as `DegenerateDirection` and the caller picks
//! another direction (see [`DirectionSequence`]).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ovf::{KElem, Rat, ValGroupElem, Value};
use crate::ratfunc::{LineFunc, MPoly, Point, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuationKind {
    NearPoint { b: Point, d: Point },
    WeightedGauss { w: Vec<i64> },
}

/// A valuation on `L` extending `nu_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationHandle {
    kind: ValuationKind,
}

impl ValuationHandle {
    pub fn near_point(b: Point, d: Point) -> Result<Self> {
        if b.len() != d.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len(),
                got: d.len(),
            });
        }
        if d.is_zero() {
            return Err(Error::DegenerateDirection);
        }
        Ok(ValuationHandle {
            kind: ValuationKind::NearPoint { b, d },
        })
    }

    pub fn weighted_gauss(w: Vec<i64>) -> Self {
        ValuationHandle {
            kind: ValuationKind::WeightedGauss { w },
        }
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn nvars(&self) -> usize {
        match &self.kind {
            ValuationKind::NearPoint { b, .. } => b.len(),
            ValuationKind::WeightedGauss { w } => w.len(),
        }
    }

    /// Rank of the value group `Z^r`.
    pub fn rank(&self) -> usize {
        match self.kind {
            ValuationKind::NearPoint { .. } => 2,
            ValuationKind::WeightedGauss { .. } => 1,
        }
    }

    /// Image of `nu_K(a) = gamma` in this value group.
    pub fn embed(&self, gamma: i64) -> ValGroupElem {
        match self.kind {
            ValuationKind::NearPoint { .. } => ValGroupElem::new(vec![0, gamma]),
            ValuationKind::WeightedGauss { .. } => ValGroupElem::scalar(gamma),
        }
    }

    fn line(&self, f: &RatFunc) -> Result<LineFunc> {
        let ValuationKind::NearPoint { b, d } = &self.kind else {
            unreachable!("line restriction only exists for near-point valuations")
        };
        let l = f.subst_line(b.coords(), d.coords()).map_err(|e| match e {
            Error::LineInDenominatorLocus => Error::DegenerateDirection,
            e => e,
        })?;
        if l.is_zero() {
            return Err(Error::DegenerateDirection);
        }
        Ok(l)
    }

    fn poly_val(p: &MPoly, w: &[i64]) -> Option<i64> {
        p.terms()
            .map(|(m, c)| c.ord().expect("stored coefficients are nonzero") + m.weighted_degree(w))
            .min()
    }

    /// Sum of the terms attaining the minimum, with `eps` set to zero after
    /// substituting `x_i = eps^{w_i} y_i`.
    fn initial_form(p: &MPoly, w: &[i64]) -> MPoly {
        let Some(m) = Self::poly_val(p, w) else {
            return MPoly::zero();
        };
        MPoly::from_terms(
            p.terms()
                .filter(|&(mono, c)| c.ord().unwrap() + mono.weighted_degree(w) == m)
                .map(|(mono, c)| (mono.clone(), KElem::from_rat(c.angular()))),
        )
    }

    /// The valuation of `f`, `Infinity` for zero.
    pub fn val_of(&self, f: &RatFunc) -> Result<Value> {
        if f.is_zero() {
            return Ok(Value::Infinity);
        }
        match &self.kind {
            ValuationKind::NearPoint { .. } => {
                let l = self.line(f)?;
                let ord_t = l.ord_t().expect("nonzero");
                let lead = l.initial_coeff().expect("nonzero");
                Ok(Value::Finite(ValGroupElem::new(vec![
                    ord_t,
                    lead.ord().expect("nonzero"),
                ])))
            }
            ValuationKind::WeightedGauss { w } => {
                let n = Self::poly_val(f.num(), w).expect("nonzero");
                let d = Self::poly_val(f.den(), w).expect("nonzero");
                Ok(Value::Finite(ValGroupElem::scalar(n - d)))
            }
        }
    }

    /// Image of `f` in the residue field; requires value zero.
    pub fn residue(&self, f: &RatFunc) -> Result<ResidueElem> {
        if self.val_of(f)? != Value::Finite(ValGroupElem::zero(self.rank())) {
            return Err(Error::NonzeroValuation);
        }
        match &self.kind {
            ValuationKind::NearPoint { .. } => {
                let lead = self.line(f)?.initial_coeff().expect("nonzero");
                Ok(ResidueElem::Rational(lead.res()?))
            }
            ValuationKind::WeightedGauss { w } => {
                let n = Self::initial_form(f.num(), w);
                let d = Self::initial_form(f.den(), w);
                Ok(ResidueElem::Function(RatFunc::new(n, d)?))
            }
        }
    }

    /// Elements `u_k` with `val(u_k)` the `k`-th unit vector of `Z^r`: the
    /// line parameter and `eps` for near-point valuations, `eps` for the
    /// weighted Gauss family.
    pub fn uniformizers(&self) -> Vec<RatFunc> {
        match &self.kind {
            ValuationKind::NearPoint { b, d } => {
                // pi = sum d_i (x_i - b_i) / sum d_i^2 restricts to exactly t
                let mut lin = MPoly::zero();
                let mut norm = KElem::zero();
                for (i, (bi, di)) in b.coords().iter().zip(d.coords()).enumerate() {
                    lin = lin.add(&MPoly::var(i).sub(&MPoly::constant(bi.clone())).scale(di));
                    norm = &norm + &(di * di);
                }
                let pi = RatFunc::from_poly(lin).scale(&norm.inv().expect("d is nonzero"));
                vec![pi, RatFunc::eps()]
            }
            ValuationKind::WeightedGauss { .. } => vec![RatFunc::eps()],
        }
    }

    /// `prod u_k^{gamma_k}`, a homomorphic section of the valuation.
    pub fn monomial_section(&self, gamma: &ValGroupElem) -> RatFunc {
        assert_eq!(gamma.rank(), self.rank(), "rank mismatch");
        self.uniformizers()
            .iter()
            .zip(gamma.coords())
            .fold(RatFunc::one(), |acc, (u, &k)| {
                acc.mul(&u.powi(k).expect("uniformizers are nonzero"))
            })
    }

    /// `true` iff `f(b) = 0` implies `val(f)` lies above every embedded
    /// `gamma`; vacuously true when `f(b)` is nonzero or undefined.
    pub fn check_near_property(&self, f: &RatFunc) -> Result<bool> {
        let ValuationKind::NearPoint { b, .. } = &self.kind else {
            return Err(Error::ValuationMismatch(
                "near property needs a near-point valuation".into(),
            ));
        };
        match f.eval(b.coords()) {
            Ok(v) if v.is_zero() => match self.val_of(f)? {
                Value::Infinity => Ok(true),
                Value::Finite(g) => Ok(g.coords()[0] >= 1),
            },
            _ => Ok(true),
        }
    }
}

impl fmt::Display for ValuationHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ValuationKind::NearPoint { b, d } => write!(f, "near-point b={b} d={d}"),
            ValuationKind::WeightedGauss { w } => {
                let ws: Vec<String> = w.iter().map(i64::to_string).collect();
                write!(f, "weighted-gauss w=({})", ws.join(", "))
            }
        }
    }
}

/// Sign of the initial `t`-coefficient of `f(b + t d)`: the order on `L`
/// pulled back from `K(t)` with `t` a positive infinitesimal.
pub fn substitution_order_sign(b: &Point, d: &Point, f: &RatFunc) -> Result<i8> {
    if f.is_zero() {
        return Ok(0);
    }
    let v = ValuationHandle::near_point(b.clone(), d.clone())?;
    Ok(v.line(f)?.initial_coeff().expect("nonzero").sign())
}

/// An element of a residue field: `Q` for near-point valuations, `Q(y)` for
/// the weighted Gauss family (represented with `x_i` standing for `y_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueElem {
    Rational(Rat),
    Function(RatFunc),
}

impl ResidueElem {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueElem::Rational(q) => num_traits::Zero::is_zero(q),
            ResidueElem::Function(f) => f.is_zero(),
        }
    }

    pub fn mul(&self, other: &ResidueElem) -> Result<ResidueElem> {
        match (self, other) {
            (ResidueElem::Rational(a), ResidueElem::Rational(b)) => Ok(ResidueElem::Rational(a * b)),
            (ResidueElem::Function(a), ResidueElem::Function(b)) => Ok(ResidueElem::Function(a.mul(b))),
            _ => Err(Error::ResidueOrderMismatch),
        }
    }

    pub fn add(&self, other: &ResidueElem) -> Result<ResidueElem> {
        match (self, other) {
            (ResidueElem::Rational(a), ResidueElem::Rational(b)) => Ok(ResidueElem::Rational(a + b)),
            (ResidueElem::Function(a), ResidueElem::Function(b)) => Ok(ResidueElem::Function(a.add(b))),
            _ => Err(Error::ResidueOrderMismatch),
        }
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElem::Rational(q) => write!(f, "{q}"),
            ResidueElem::Function(r) => write!(f, "{}", r.to_string().replace('x', "y")),
        }
    }
}

/// Deterministic direction retry order for near-point valuations:
/// `(1, ..., 1)`, then the unit vectors, then seeded pseudorandom integer
/// vectors with entries in `[-5, 5]`.
pub struct DirectionSequence {
    n: usize,
    step: usize,
    rng: ChaCha8Rng,
}

impl DirectionSequence {
    pub fn new(n: usize, seed: u64) -> Self {
        DirectionSequence {
            n,
            step: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Iterator for DirectionSequence {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let k = self.step;
        self.step += 1;
        let coords: Vec<i64> = if k == 0 {
            vec![1; self.n]
        } else if k <= self.n {
            (0..self.n).map(|i| i64::from(i + 1 == k)).collect()
        } else {
            loop {
                let v: Vec<i64> = (0..self.n).map(|_| self.rng.gen_range(-5..=5)).collect();
                if v.iter().any(|&c| c != 0) {
                    break v;
                }
            }
        };
        Some(Point::new(coords.into_iter().map(KElem::from_int).collect()))
    }
}

/// Near-point valuation of `f` at `b`, retrying directions from
/// [`DirectionSequence`] until one is not degenerate.
pub fn near_val_with_retry(b: &Point, f: &RatFunc, seed: u64, max_tries: usize) -> Result<(Point, Value)> {
    for d in DirectionSequence::new(b.len(), seed).take(max_tries) {
        let v = ValuationHandle::near_point(b.clone(), d.clone())?;
        match v.val_of(f) {
            Ok(val) => return Ok((d, val)),
            Err(Error::DegenerateDirection) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateDirection)
}
