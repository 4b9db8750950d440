//! Bounded-degree search for `target = sum_a lambda_a prod_i p_i^{a_i}` with
//! rational `lambda_a >= 0`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::foursq::rational_as_squares;
use super::lp::{feasible_nonneg, LpOutcome};
use super::{cone_value, ConeCert, SetDescription};
use crate::error::{Error, Result};
use crate::ovf::{Rat, UPoly};
use crate::ratfunc::{MPoly, Monomial, RatFunc};

#[derive(Clone, Debug, PartialEq)]
pub enum HandelmanOutcome {
    Found(ConeCert),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HandelmanBudget {
    pub max_degree: u32,
    pub max_products: usize,
    pub max_rows: usize,
    pub max_pivots: usize,
}

impl Default for HandelmanBudget {
    fn default() -> Self {
        HandelmanBudget {
            max_degree: 24,
            max_products: 2_000,
            max_rows: 4_000,
            max_pivots: 50_000,
        }
    }
}

/// Exponent vectors `a` with `sum a_i deg(p_i) <= bound`; constant `p_i` get
/// exponent at most 1 and zero `p_i` are never used.
fn exponent_vectors(s: &SetDescription, bound: u32, cap: usize) -> Result<Vec<Vec<u32>>> {
    let degs: Vec<Option<u32>> = s.p.iter().map(MPoly::total_degree).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u32; degs.len()];
    fn rec(
        i: usize,
        left: u32,
        degs: &[Option<u32>],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        cap: usize,
    ) -> Result<()> {
        if i == degs.len() {
            if out.len() >= cap {
                return Err(Error::BudgetExceeded(format!("more than {cap} candidate products")));
            }
            out.push(cur.clone());
            return Ok(());
        }
        let max = match degs[i] {
            None => 0,
            Some(0) => 1,
            Some(d) => left / d,
        };
        for a in 0..=max {
            cur[i] = a;
            rec(i + 1, left - a * degs[i].unwrap_or(0), degs, cur, out, cap)?;
        }
        cur[i] = 0;
        Ok(())
    }
    rec(0, bound, &degs, &mut cur, &mut out, cap)?;
    out.sort_by_key(|a| (a.iter().sum::<u32>(), a.clone()));
    Ok(out)
}

fn lcm(a: &UPoly<Rat>, b: &UPoly<Rat>) -> UPoly<Rat> {
    let g = a.gcd(b);
    a.mul(b).div_rem(&g).expect("gcd is nonzero").0.monic()
}

/// Splits `p * D(eps)` into rational coefficients keyed by monomial and eps degree.
fn rational_rows(p: &MPoly, lcd: &UPoly<Rat>) -> BTreeMap<(Monomial, usize), Rat> {
    let mut out = BTreeMap::new();
    for (m, c) in p.terms() {
        let cofactor = lcd.div_rem(c.den()).expect("denominator is nonzero").0;
        let scaled = c.num().mul(&cofactor);
        for (k, q) in scaled.coeffs().iter().enumerate() {
            if !q.is_zero() {
                out.insert((m.clone(), k), q.clone());
            }
        }
    }
    out
}

/// Searches with the default budget.
pub fn handelman_search(s: &SetDescription, target: &MPoly, degree_bound: u32) -> Result<HandelmanOutcome> {
    handelman_search_with(s, target, degree_bound, &HandelmanBudget::default())
}

pub fn handelman_search_with(
    s: &SetDescription,
    target: &MPoly,
    degree_bound: u32,
    budget: &HandelmanBudget,
) -> Result<HandelmanOutcome> {
    if degree_bound > budget.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "degree bound {degree_bound} exceeds {}",
            budget.max_degree
        )));
    }
    let exps = exponent_vectors(s, degree_bound, budget.max_products)?;
    let mut powers: Vec<Vec<MPoly>> = s.p.iter().map(|p| vec![MPoly::one(), p.clone()]).collect();
    let mut products = Vec::with_capacity(exps.len());
    for a in &exps {
        let mut prod = MPoly::one();
        for (i, &e) in a.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().expect("nonempty").mul(&s.p[i]);
                powers[i].push(next);
            }
            if e > 0 {
                prod = prod.mul(&powers[i][e as usize]);
            }
        }
        products.push(prod);
    }

    let mut lcd = UPoly::one();
    for p in products.iter().chain(std::iter::once(target)) {
        for (_, c) in p.terms() {
            if !c.den().is_one() {
                lcd = lcm(&lcd, c.den());
            }
        }
    }

    let cols: Vec<BTreeMap<(Monomial, usize), Rat>> = products.iter().map(|p| rational_rows(p, &lcd)).collect();
    let rhs = rational_rows(target, &lcd);
    let mut keys: BTreeMap<(Monomial, usize), usize> = BTreeMap::new();
    for key in cols.iter().flat_map(BTreeMap::keys).chain(rhs.keys()) {
        let n = keys.len();
        keys.entry(key.clone()).or_insert(n);
    }
    if keys.len() > budget.max_rows {
        return Err(Error::BudgetExceeded(format!(
            "{} equations exceed {}",
            keys.len(),
            budget.max_rows
        )));
    }
    let mut a = vec![vec![Rat::zero(); cols.len()]; keys.len()];
    let mut b = vec![Rat::zero(); keys.len()];
    for (j, col) in cols.iter().enumerate() {
        for (key, q) in col {
            a[keys[key]][j] = q.clone();
        }
    }
    for (key, q) in &rhs {
        b[keys[key]] = q.clone();
    }

    let lambda = match feasible_nonneg(&a, &b, budget.max_pivots)? {
        LpOutcome::Infeasible => return Ok(HandelmanOutcome::Unknown),
        LpOutcome::Feasible(x) => x,
    };

    let mut cert = ConeCert::new();
    for (e, lam) in exps.iter().zip(&lambda) {
        if !lam.is_positive() {
            continue;
        }
        let subset: Vec<usize> = (0..e.len()).filter(|&i| e[i] % 2 == 1).collect();
        let half = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k >= 2)
            .fold(MPoly::one(), |acc, (i, &k)| acc.mul(&powers[i][(k / 2) as usize]));
        let half = RatFunc::from_poly(half);
        let parts = rational_as_squares(lam)?
            .into_iter()
            .map(|r| half.scale(&crate::ovf::KElem::from_rat(r)))
            .collect();
        cert.push(subset, parts);
    }
    if cone_value(&cert, s)? != RatFunc::from_poly(target.clone()) {
        return Err(Error::Structural("Handelman certificate failed re-verification".into()));
    }
    Ok(HandelmanOutcome::Found(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_ratfunc;

    fn poly(s: &str) -> MPoly {
        parse_ratfunc(s).unwrap().to_poly().unwrap()
    }

    fn set(ps: &[&str]) -> SetDescription {
        SetDescription::new(1, ps.iter().map(|p| poly(p)).collect(), vec![])
    }

    #[test]
    fn finds_product_certificate() {
        let s = set(&["x1", "1 - x1"]);
        let target = poly("x1 - x1^2");
        let HandelmanOutcome::Found(cert) = handelman_search(&s, &target, 2).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(cert.terms.len(), 1);
        assert_eq!(cert.terms[&vec![0, 1]].value(), RatFunc::one());
        assert_eq!(cone_value(&cert, &s).unwrap(), RatFunc::from_poly(target));
    }

    #[test]
    fn unknown_cases() {
        assert_eq!(
            handelman_search(&set(&[]), &poly("x1^2 + 1"), 2).unwrap(),
            HandelmanOutcome::Unknown
        );
        for bound in 1..5 {
            assert_eq!(
                handelman_search(&set(&["x1"]), &poly("-x1"), bound).unwrap(),
                HandelmanOutcome::Unknown
            );
        }
    }

    #[test]
    fn eps_coefficients_and_nonsquare_weights() {
        let s = set(&["x1", "1 - x1"]);
        let target = poly("3*x1 + 2*x1^2 + 5/7");
        let HandelmanOutcome::Found(cert) = handelman_search(&s, &target, 2).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(cone_value(&cert, &s).unwrap(), RatFunc::from_poly(target));
        let se = set(&["x1", "eps/(1 + eps) - x1"]);
        let target = poly("eps/(1 + eps)*x1 - x1^2 + 3");
        let HandelmanOutcome::Found(cert) = handelman_search(&se, &target, 2).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(cone_value(&cert, &se).unwrap(), RatFunc::from_poly(target));
        // a coefficient with negative sign in eps is out of reach
        let bad = poly("x1 - eps");
        assert_eq!(handelman_search(&s, &bad, 3).unwrap(), HandelmanOutcome::Unknown);
    }

    #[test]
    fn budget_is_enforced() {
        let s = set(&["x1", "1 - x1"]);
        assert!(matches!(
            handelman_search(&s, &poly("x1"), 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
