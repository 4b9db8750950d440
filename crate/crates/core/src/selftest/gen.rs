//! Seeded random objects for the property checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::certificates::{AlgebraElem, ConeCert, LocalizedElem, RadicalCert, SetDescription};
use crate::ovf::{KElem, Rat, UPoly};
use crate::ratfunc::{MPoly, Monomial, Point, RatFunc};

pub fn rational(rng: &mut ChaCha8Rng, max: i64) -> Rat {
    let d = rng.gen_range(1..=6i64);
    Rat::new(rng.gen_range(-max * d..=max * d).into(), d.into())
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng, max: i64) -> Rat {
    loop {
        let q = rational(rng, max);
        if q != Rat::from_integer(0.into()) {
            return q;
        }
    }
}

fn eps_poly(rng: &mut ChaCha8Rng) -> UPoly<Rat> {
    loop {
        let deg = rng.gen_range(0..=2);
        let p = UPoly::new(
            (0..=deg)
                .map(|_| Rat::from_integer(rng.gen_range(-5i64..=5).into()))
                .collect(),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// A general nonzero element: a ratio of small `eps`-polynomials times `eps^k`.
pub fn kelem(rng: &mut ChaCha8Rng) -> KElem {
    let k = rng.gen_range(-3..=3);
    let q = KElem::from_parts(eps_poly(rng), eps_poly(rng)).expect("nonzero denominator");
    &q * &KElem::eps_pow(k)
}

/// `c eps^k` or `c + c' eps^k` with small rationals, `k` in `lo..=hi`.
pub fn simple_kelem(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> KElem {
    let c = KElem::from_rat(rational(rng, 3));
    match rng.gen_range(0..3) {
        0 => c,
        1 => &KElem::from_rat(nonzero_rational(rng, 3)) * &KElem::eps_pow(rng.gen_range(lo..=hi)),
        _ => &c + &(&KElem::from_rat(nonzero_rational(rng, 3)) * &KElem::eps_pow(rng.gen_range(lo..=hi))),
    }
}

pub fn nonzero_simple_kelem(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> KElem {
    loop {
        let c = simple_kelem(rng, lo, hi);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn point(rng: &mut ChaCha8Rng, n: usize) -> Point {
    Point::new((0..n).map(|_| simple_kelem(rng, -2, 2)).collect())
}

pub fn direction(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let d = Point::new((0..n).map(|_| simple_kelem(rng, -1, 2)).collect());
        if !d.is_zero() {
            return d;
        }
    }
}

fn monomial(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Monomial {
    let mut left = rng.gen_range(0..=max_deg);
    let mut exps = vec![0u32; n];
    if n > 0 {
        while left > 0 {
            exps[rng.gen_range(0..n)] += 1;
            left -= 1;
        }
    }
    Monomial::new(exps)
}

/// A nonzero polynomial with up to `max_terms` terms and `O_K`-or-not coefficients.
pub fn mpoly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize) -> MPoly {
    loop {
        let t = rng.gen_range(1..=max_terms);
        let p = MPoly::from_terms((0..t).map(|_| (monomial(rng, n, max_deg), nonzero_simple_kelem(rng, -1, 2))));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfunc(rng: &mut ChaCha8Rng, n: usize) -> RatFunc {
    let num = mpoly(rng, n, 2, 3);
    let den = if rng.gen_bool(0.5) {
        MPoly::one()
    } else {
        mpoly(rng, n, 2, 2)
    };
    RatFunc::new(num, den).expect("nonzero denominator")
}

pub fn cone_cert(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ConeCert {
    let mut cert = ConeCert::new();
    for _ in 0..rng.gen_range(1..=3) {
        let subset: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
        let parts = (0..rng.gen_range(1..=2)).map(|_| ratfunc(rng, n)).collect();
        cert.push(subset, parts);
    }
    cert
}

/// A polynomial in `nsymbols` generator symbols with coefficients in `O_K`.
pub fn algebra_elem(rng: &mut ChaCha8Rng, nsymbols: usize) -> AlgebraElem {
    if rng.gen_bool(0.2) {
        return AlgebraElem::zero();
    }
    let t = rng.gen_range(1..=3);
    AlgebraElem::new(MPoly::from_terms(
        (0..t).map(|_| (monomial(rng, nsymbols, 2), nonzero_simple_kelem(rng, 0, 2))),
    ))
}

pub fn set(rng: &mut ChaCha8Rng, n: usize) -> SetDescription {
    let p = (0..rng.gen_range(0..=2)).map(|_| mpoly(rng, n, 2, 3)).collect();
    let g = (0..rng.gen_range(0..=1)).map(|_| ratfunc(rng, n)).collect();
    SetDescription::new(n, p, g)
}

/// Structurally valid (coefficients in `O_K`, `nu(t_m) > 0`) but otherwise arbitrary.
pub fn radical_cert(rng: &mut ChaCha8Rng, s: &SetDescription) -> RadicalCert {
    let generators: Vec<ConeCert> = (0..rng.gen_range(0..=2))
        .map(|_| cone_cert(rng, s.p.len(), s.nvars))
        .collect();
    let nsymbols = generators.len() + s.g.len();
    let coeffs = (0..rng.gen_range(1..=3))
        .map(|_| {
            let a = algebra_elem(rng, nsymbols);
            if rng.gen_bool(0.5) {
                LocalizedElem::unlocalized(a)
            } else {
                let t_m = &KElem::from_rat(nonzero_rational(rng, 3)) * &KElem::eps_pow(rng.gen_range(1..=3));
                LocalizedElem {
                    a,
                    t_m,
                    t_a: algebra_elem(rng, nsymbols),
                }
            }
        })
        .collect();
    RadicalCert {
        h: ratfunc(rng, s.nvars),
        generators,
        coeffs,
    }
}
