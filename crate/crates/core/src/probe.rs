//! Sampling-based refutation: points of `S` with coordinates in `K` (mixing in
//! powers of `eps`), and pointwise checks of `nu(h(b)) >= 0` or
//! `nu(h(b)) >= nu(a)`. A violation is an exact disproof; the absence of one
//! proves nothing.

use std::fmt;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificates::SetDescription;
use crate::error::{Error, Result};
use crate::ovf::{KElem, Rat};
use crate::ratfunc::{Point, RatFunc};

pub const MAX_POINTS: usize = 50_000;
pub const DEFAULT_EPS_ORDERS: [i64; 3] = [1, -1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Grid { step: Rat, radius: Rat },
    Pseudorandom { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleStrategy {
    pub kind: SampleKind,
    pub epsilon_orders: Vec<i64>,
}

impl SampleStrategy {
    pub fn grid(step: Rat, radius: Rat, epsilon_orders: Vec<i64>) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::HypothesisViolated(format!("grid step {step} must be positive")));
        }
        if radius.is_negative() {
            return Err(Error::HypothesisViolated(format!(
                "grid radius {radius} must be nonnegative"
            )));
        }
        Ok(SampleStrategy {
            kind: SampleKind::Grid { step, radius },
            epsilon_orders,
        })
    }

    pub fn pseudorandom(seed: u64, count: usize, epsilon_orders: Vec<i64>) -> Self {
        SampleStrategy {
            kind: SampleKind::Pseudorandom { seed, count },
            epsilon_orders,
        }
    }
}

impl fmt::Display for SampleStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.epsilon_orders.iter().map(ToString::to_string).collect();
        match &self.kind {
            SampleKind::Grid { step, radius } => write!(f, "grid step={step} radius={radius}")?,
            SampleKind::Pseudorandom { seed, count } => write!(f, "pseudorandom seed={seed} count={count}")?,
        }
        write!(f, " eps-orders=[{}]", orders.join(","))
    }
}

/// Points of `S` found by a strategy. `candidates` counts every generated
/// point, in or out of the set.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub points: Vec<Point>,
    pub candidates: usize,
    pub truncated: bool,
}

impl Sample {
    /// Nothing was found, so nothing is known about whether `S` is empty.
    pub fn nonemptiness_unknown(&self) -> bool {
        self.points.is_empty()
    }
}

fn grid_coordinates(step: &Rat, radius: &Rat, orders: &[i64]) -> Vec<KElem> {
    let mut out = Vec::new();
    let mut q = -radius.clone();
    while &q <= radius && out.len() < MAX_POINTS {
        let base = KElem::from_rat(q.clone());
        out.push(base.clone());
        for &k in orders {
            let e = KElem::eps_pow(k);
            out.push(&base + &e);
            out.push(&base - &e);
        }
        q += step;
    }
    out
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rat {
    const DENS: [i64; 6] = [1, 2, 3, 4, 5, 8];
    let d = DENS[rng.gen_range(0..DENS.len())];
    let n = rng.gen_range(-4 * d..=4 * d);
    Rat::new(n.into(), d.into())
}

fn random_coordinate(rng: &mut ChaCha8Rng, orders: &[i64]) -> KElem {
    let shape = if orders.is_empty() { 0 } else { rng.gen_range(0..3) };
    if shape == 0 {
        return KElem::from_rat(random_rational(rng));
    }
    let k = orders[rng.gen_range(0..orders.len())];
    let c = Rat::new(rng.gen_range(1i64..=5).into(), rng.gen_range(1i64..=3).into());
    let c = if rng.gen_bool(0.5) { -c } else { c };
    let term = &KElem::from_rat(c) * &KElem::eps_pow(k);
    if shape == 1 {
        term
    } else {
        &KElem::from_rat(random_rational(rng)) + &term
    }
}

pub fn sample_set(s: &SetDescription, strat: &SampleStrategy) -> Result<Sample> {
    let n = s.nvars;
    let mut points = Vec::new();
    let mut candidates = 0;
    let mut truncated = false;
    match &strat.kind {
        SampleKind::Grid { step, radius } => {
            let coords = grid_coordinates(step, radius, &strat.epsilon_orders);
            let mut idx = vec![0usize; n];
            'outer: loop {
                if candidates >= MAX_POINTS {
                    truncated = true;
                    break;
                }
                candidates += 1;
                let b: Vec<KElem> = idx.iter().map(|&i| coords[i].clone()).collect();
                if s.contains(&b)? {
                    points.push(Point::new(b));
                }
                // odometer, last coordinate fastest
                for pos in (0..n).rev() {
                    idx[pos] += 1;
                    if idx[pos] < coords.len() {
                        continue 'outer;
                    }
                    idx[pos] = 0;
                }
                break;
            }
        }
        SampleKind::Pseudorandom { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            if *count > MAX_POINTS {
                truncated = true;
            }
            for _ in 0..(*count).min(MAX_POINTS) {
                candidates += 1;
                let b: Vec<KElem> = (0..n)
                    .map(|_| random_coordinate(&mut rng, &strat.epsilon_orders))
                    .collect();
                if s.contains(&b)? {
                    points.push(Point::new(b));
                }
            }
        }
    }
    Ok(Sample {
        points,
        candidates,
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    NoViolationFound,
    /// `h(witness) = value` with `nu(value) = val` below the bound.
    Violation {
        witness: Point,
        value: KElem,
        val: i64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub verdict: Verdict,
    /// Points of `S` at which `h` was evaluated.
    pub tested: usize,
    pub skipped_undefined: usize,
    /// Set when no point of `S` was found at all.
    pub nonemptiness_unknown: bool,
    pub candidates: usize,
    pub truncated: bool,
}

impl ProbeReport {
    pub fn is_violation(&self) -> bool {
        matches!(self.verdict, Verdict::Violation { .. })
    }
}

fn probe(h: &RatFunc, s: &SetDescription, strat: &SampleStrategy, bound: i64) -> Result<ProbeReport> {
    let s = SetDescription::new(h.nvars().max(s.nvars), s.p.clone(), s.g.clone());
    let sample = sample_set(&s, strat)?;
    let mut report = ProbeReport {
        verdict: Verdict::NoViolationFound,
        tested: 0,
        skipped_undefined: 0,
        nonemptiness_unknown: sample.nonemptiness_unknown(),
        candidates: sample.candidates,
        truncated: sample.truncated,
    };
    for b in sample.points {
        let value = match h.eval(b.coords()) {
            Ok(v) => v,
            Err(Error::NotDefinedAt | Error::Indeterminate) => {
                report.skipped_undefined += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.tested += 1;
        if let Some(k) = value.ord() {
            if k < bound {
                report.verdict = Verdict::Violation {
                    witness: b,
                    value,
                    val: k,
                };
                break;
            }
        }
    }
    Ok(report)
}

/// Looks for a point of `S` with `nu(h(b)) < 0`.
pub fn integrality_probe(h: &RatFunc, s: &SetDescription, strat: &SampleStrategy) -> Result<ProbeReport> {
    probe(h, s, strat, 0)
}

/// Looks for a point of `S` with `nu(h(b)) < nu(a)`.
pub fn boundedness_probe(h: &RatFunc, a: &KElem, s: &SetDescription, strat: &SampleStrategy) -> Result<ProbeReport> {
    let bound = a.ord().ok_or(Error::DivisionByZero)?;
    probe(h, s, strat, bound)
}

/// In `K = Q(eps)` the convex hull of `Z` is the valuation ring.
pub fn convex_hull_z_check(value: &KElem) -> bool {
    value.is_zero() || value.ord().is_none_or(|k| k >= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_ratfunc;

    fn set(text: &str) -> SetDescription {
        SetDescription::parse(text, 1).unwrap()
    }

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn grid(orders: Vec<i64>) -> SampleStrategy {
        SampleStrategy::grid(q(1, 4), q(2, 1), orders).unwrap()
    }

    #[test]
    fn grid_filtering() {
        let sample = sample_set(&set("p: x1; 1 - x1"), &grid(vec![])).unwrap();
        let got: Vec<KElem> = sample.points.iter().map(|p| p.coords()[0].clone()).collect();
        let want: Vec<KElem> = [1, 2, 3].iter().map(|&n| KElem::from_ratio(n, 4).unwrap()).collect();
        assert_eq!(got, want);
        assert_eq!(sample.candidates, 17);
        let empty = sample_set(&set("p: -1 - x1^2"), &grid(vec![1, -1])).unwrap();
        assert!(empty.nonemptiness_unknown());
        let eps = sample_set(&set("p: x1"), &grid(vec![1])).unwrap();
        assert!(eps.points.contains(&Point::new(vec![KElem::eps()])));
    }

    #[test]
    fn integrality_examples() {
        let strat = SampleStrategy::pseudorandom(7, 200, DEFAULT_EPS_ORDERS.to_vec());
        let r = integrality_probe(&parse_ratfunc("1/x1").unwrap(), &set("p: x1"), &strat).unwrap();
        let Verdict::Violation { witness, value, val } = &r.verdict else {
            panic!("{r:?}")
        };
        assert!(*val < 0);
        assert_eq!(parse_ratfunc("1/x1").unwrap().eval(witness.coords()).unwrap(), *value);
        let r = integrality_probe(&parse_ratfunc("1/(1+x1)").unwrap(), &set("p: x1"), &strat).unwrap();
        assert_eq!(r.verdict, Verdict::NoViolationFound);
        assert!(r.tested > 0);
        let r = integrality_probe(
            &parse_ratfunc("1/(1+x1*(1-x1))").unwrap(),
            &set("p: x1; 1 - x1"),
            &grid(vec![1, -1, 2]),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::NoViolationFound);
        // undefined points are skipped
        let r = integrality_probe(
            &parse_ratfunc("1/(x1 - 1/2)").unwrap(),
            &set("p: x1; 1 - x1"),
            &grid(vec![]),
        )
        .unwrap();
        assert_eq!(r.skipped_undefined, 1);
        assert_eq!(r.tested, 2);
    }

    #[test]
    fn boundedness_examples() {
        let strat = grid(vec![1, -1]);
        let r = boundedness_probe(&parse_ratfunc("x1").unwrap(), &KElem::one(), &set("p: x1"), &strat).unwrap();
        assert!(r.is_violation());
        let r = boundedness_probe(&parse_ratfunc("5").unwrap(), &KElem::one(), &set("p: x1"), &strat).unwrap();
        assert!(!r.is_violation());
        let s = set("p: x1 - eps");
        let r = boundedness_probe(&parse_ratfunc("1/x1").unwrap(), &KElem::eps_pow(-1), &s, &strat).unwrap();
        assert!(!r.is_violation());
    }

    #[test]
    fn convex_hull() {
        assert!(!convex_hull_z_check(&KElem::eps_pow(-1)));
        assert!(convex_hull_z_check(&KElem::from_int(1_000_000)));
        let v = &(&KElem::one() + &KElem::eps()) * &KElem::eps_pow(-2);
        assert!(!convex_hull_z_check(&v));
    }

    #[test]
    fn deterministic() {
        let strat = SampleStrategy::pseudorandom(11, 300, vec![1, -1]);
        let s = SetDescription::parse("p: x1; x2 - x1", 2).unwrap();
        assert_eq!(sample_set(&s, &strat).unwrap(), sample_set(&s, &strat).unwrap());
    }
}
