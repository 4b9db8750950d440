//! Certificates for integrality on open semi-algebraic sets.
//!
//! A set `S = { b : p_i(b) > 0, nu(g_j(b)) >= 0 }` is described by a
//! [`SetDescription`]. Elements of the positive cone of the `p_i` are
//! [`ConeCert`]s, each one giving a generator `1/(1+f)` of the algebra
//! `A`. A [`RadicalCert`] is a monic polynomial over the localization `A_T`,
//! `T = {1 + m a : nu(m) > 0, a in A}`, that vanishes at `h`; it witnesses
//! that `h` lies in the integral closure of `A_T`.
//!
//! Certificates are checked, never trusted: structural conditions (indices,
//! coefficients in `O_K`, `nu(t_m) > 0`) are verified before the exact
//! expansion, and the two kinds of failure are reported differently.

mod format;
mod foursq;
mod handelman;
mod lp;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ovf::KElem;
use crate::ratfunc::{parse_list, parse_ratfunc, MPoly, Point, RatFunc};

pub use format::{Certificate, CERT_VERSION};
pub use foursq::{four_squares, rational_as_squares};
pub use handelman::{handelman_search, handelman_search_with, HandelmanBudget, HandelmanOutcome};
pub use lp::{feasible_nonneg, LpOutcome};

/// The set `S_{p,g}`: strict positivity of polynomials `p` and valuation
/// constraints `nu(g) >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SetDescription {
    pub nvars: usize,
    pub p: Vec<MPoly>,
    pub g: Vec<RatFunc>,
}

impl SetDescription {
    pub fn new(nvars: usize, p: Vec<MPoly>, g: Vec<RatFunc>) -> Self {
        let nvars = p
            .iter()
            .map(MPoly::nvars)
            .chain(g.iter().map(RatFunc::nvars))
            .fold(nvars, usize::max);
        SetDescription { nvars, p, g }
    }

    /// Parses the CLI syntax `"p: expr; expr | g: expr; ..."`. Either part
    /// may be omitted.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let mut p = Vec::new();
        let mut g = Vec::new();
        for section in parse_list(text, '|') {
            let (label, body) = section.split_once(':').ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: format!("expected `p:` or `g:` in `{section}`"),
            })?;
            match label.trim() {
                "p" => {
                    for e in parse_list(body, ';') {
                        p.push(parse_ratfunc(e)?.to_poly()?);
                    }
                }
                "g" => {
                    for e in parse_list(body, ';') {
                        g.push(parse_ratfunc(e)?);
                    }
                }
                other => {
                    return Err(Error::Syntax {
                        pos: 0,
                        msg: format!("unknown set section `{other}`"),
                    })
                }
            }
        }
        Ok(Self::new(nvars, p, g))
    }

    /// Exact membership test; a point where some `g_j` is undefined is not in the set.
    pub fn contains(&self, b: &[KElem]) -> Result<bool> {
        for p in &self.p {
            if p.eval(b)?.sign() <= 0 {
                return Ok(false);
            }
        }
        for g in &self.g {
            match g.eval(b) {
                Ok(v) => {
                    if v.ord().is_some_and(|k| k < 0) {
                        return Ok(false);
                    }
                }
                Err(Error::NotDefinedAt | Error::Indeterminate) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        Ok(true)
    }
}

impl fmt::Display for SetDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.p.iter().map(ToString::to_string).collect();
        write!(f, "p: {}", ps.join("; "))?;
        if !self.g.is_empty() {
            let gs: Vec<String> = self.g.iter().map(ToString::to_string).collect();
            write!(f, " | g: {}", gs.join("; "))?;
        }
        Ok(())
    }
}

/// A sum of squares `q_1^2 + ... + q_k^2` of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct Sos {
    pub parts: Vec<RatFunc>,
}

impl Sos {
    pub fn new(parts: Vec<RatFunc>) -> Self {
        Sos { parts }
    }

    pub fn value(&self) -> RatFunc {
        self.parts.iter().fold(RatFunc::zero(), |acc, q| acc.add(&q.mul(q)))
    }
}

/// `sum_J r_J prod_{i in J} p_i` with each `r_J` a sum of squares. Subsets
/// hold zero-based indices into the set's `p`, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConeCert {
    pub terms: BTreeMap<Vec<usize>, Sos>,
}

impl ConeCert {
    pub fn new() -> Self {
        ConeCert::default()
    }

    /// Adds `sum parts^2 * prod_{i in subset} p_i`, merging with an existing
    /// block for the same subset.
    pub fn push(&mut self, subset: Vec<usize>, parts: Vec<RatFunc>) {
        let mut subset = subset;
        subset.sort_unstable();
        subset.dedup();
        self.terms
            .entry(subset)
            .or_insert_with(|| Sos::new(Vec::new()))
            .parts
            .extend(parts);
    }

    pub fn with(mut self, subset: Vec<usize>, parts: Vec<RatFunc>) -> Self {
        self.push(subset, parts);
        self
    }

    fn check_indices(&self, s: &SetDescription) -> Result<()> {
        for subset in self.terms.keys() {
            if let Some(&i) = subset.iter().find(|&&i| i >= s.p.len()) {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: s.p.len(),
                });
            }
        }
        Ok(())
    }
}

fn subset_product(subset: &[usize], s: &SetDescription) -> MPoly {
    subset.iter().fold(MPoly::one(), |acc, &i| acc.mul(&s.p[i]))
}

/// Exact expansion of the cone element.
pub fn cone_value(cert: &ConeCert, s: &SetDescription) -> Result<RatFunc> {
    cert.check_indices(s)?;
    Ok(cert.terms.iter().fold(RatFunc::zero(), |acc, (subset, sos)| {
        acc.add(&sos.value().mul(&RatFunc::from_poly(subset_product(subset, s))))
    }))
}

/// Evaluates every block of the certificate at a point of `S` and checks
/// that each is nonnegative.
pub fn verify_cone_pointwise(cert: &ConeCert, s: &SetDescription, b: &Point) -> Result<bool> {
    cert.check_indices(s)?;
    let pvals: Vec<KElem> = s.p.iter().map(|p| p.eval(b.coords())).collect::<Result<_>>()?;
    if pvals.iter().any(|v| v.sign() <= 0) {
        return Err(Error::HypothesisViolated(format!("{b} is not in the set")));
    }
    let mut total = KElem::zero();
    for (subset, sos) in &cert.terms {
        let mut block = KElem::zero();
        for q in &sos.parts {
            let v = q.eval(b.coords()).map_err(|e| match e {
                Error::Indeterminate => Error::NotDefinedAt,
                e => e,
            })?;
            block = &block + &(&v * &v);
        }
        let term = subset.iter().fold(block, |acc, &i| &acc * &pvals[i]);
        if term.sign() < 0 {
            return Ok(false);
        }
        total = &total + &term;
    }
    Ok(total.sign() >= 0)
}

/// `f(b)` computed block by block, without expanding `f`.
pub fn cone_value_at(cert: &ConeCert, s: &SetDescription, b: &Point) -> Result<KElem> {
    cert.check_indices(s)?;
    let pvals: Vec<KElem> = s.p.iter().map(|p| p.eval(b.coords())).collect::<Result<_>>()?;
    let mut total = KElem::zero();
    for (subset, sos) in &cert.terms {
        let mut block = KElem::zero();
        for q in &sos.parts {
            let v = q.eval(b.coords())?;
            block = &block + &(&v * &v);
        }
        total = &total + &subset.iter().fold(block, |acc, &i| &acc * &pvals[i]);
    }
    Ok(total)
}

/// The generator `1 / (1 + f)` of the algebra attached to a cone element.
pub fn generator_value(cert: &ConeCert, s: &SetDescription) -> Result<RatFunc> {
    let denom = RatFunc::one().add(&cone_value(cert, s)?);
    denom.inv().map_err(|_| Error::IdenticallyMinusOne)
}

/// A polynomial with coefficients in `O_K` in the generator symbols: symbol
/// `k < #cone generators` is `1/(1 + f_k)`, the following symbols are the
/// set's extra generators `g_j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AlgebraElem {
    pub poly: MPoly,
}

impl AlgebraElem {
    pub fn new(poly: MPoly) -> Self {
        AlgebraElem { poly }
    }

    pub fn zero() -> Self {
        AlgebraElem { poly: MPoly::zero() }
    }

    pub fn constant(c: KElem) -> Self {
        AlgebraElem {
            poly: MPoly::constant(c),
        }
    }

    /// The single generator symbol `k`.
    pub fn generator(k: usize) -> Self {
        AlgebraElem { poly: MPoly::var(k) }
    }

    fn check(&self, nsymbols: usize) -> Result<()> {
        if self.poly.nvars() > nsymbols {
            return Err(Error::Structural(format!(
                "generator symbol {} used but only {nsymbols} generators exist",
                self.poly.nvars()
            )));
        }
        for (m, c) in self.poly.terms() {
            if c.ord().is_some_and(|k| k < 0) {
                return Err(Error::Structural(format!(
                    "coefficient {c} of monomial [{m}] is not in O_K"
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, gens: &[RatFunc]) -> Result<RatFunc> {
        self.poly.eval_in(gens, |c| RatFunc::constant(c.clone()))
    }
}

/// `a / (1 + t_m t_a)` with `nu(t_m) > 0`: an element of the localization `A_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedElem {
    pub a: AlgebraElem,
    pub t_m: KElem,
    pub t_a: AlgebraElem,
}

impl LocalizedElem {
    /// An element of `A` itself (trivial denominator).
    pub fn unlocalized(a: AlgebraElem) -> Self {
        LocalizedElem {
            a,
            t_m: KElem::zero(),
            t_a: AlgebraElem::zero(),
        }
    }

    fn check(&self, nsymbols: usize) -> Result<()> {
        self.a.check(nsymbols)?;
        self.t_a.check(nsymbols)?;
        if self.t_m.ord().is_some_and(|k| k <= 0) {
            return Err(Error::Structural(format!(
                "t_m = {} is not in the maximal ideal",
                self.t_m
            )));
        }
        Ok(())
    }

    pub fn value(&self, gens: &[RatFunc]) -> Result<RatFunc> {
        let den = RatFunc::one().add(&self.t_a.value(gens)?.scale(&self.t_m));
        if den.is_zero() {
            return Err(Error::Structural("localization denominator is identically zero".into()));
        }
        self.a.value(gens)?.div(&den)
    }
}

/// A monic polynomial `Y^n + c_{n-1} Y^{n-1} + ... + c_0` over `A_T`,
/// claimed to vanish at `h`. `coeffs[i]` is `c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalCert {
    pub h: RatFunc,
    pub generators: Vec<ConeCert>,
    pub coeffs: Vec<LocalizedElem>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalVerdict {
    Valid,
    Invalid { residual: RatFunc },
}

impl RadicalVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, RadicalVerdict::Valid)
    }
}

impl RadicalCert {
    /// Values of all generator symbols: the cone generators, then the set's `g`.
    pub fn generator_values(&self, s: &SetDescription) -> Result<Vec<RatFunc>> {
        let mut gens = Vec::with_capacity(self.generators.len() + s.g.len());
        for (k, cert) in self.generators.iter().enumerate() {
            gens.push(generator_value(cert, s).map_err(|e| match e {
                Error::IdenticallyMinusOne => Error::Structural(format!("generator {k} has cone value identically -1")),
                e => e,
            })?);
        }
        gens.extend(s.g.iter().cloned());
        Ok(gens)
    }

    fn check_structure(&self, s: &SetDescription) -> Result<()> {
        if self.coeffs.is_empty() {
            return Err(Error::Structural("monic polynomial must have degree at least 1".into()));
        }
        for cert in &self.generators {
            cert.check_indices(s).map_err(|e| Error::Structural(e.to_string()))?;
        }
        let nsymbols = self.generators.len() + s.g.len();
        self.coeffs.iter().try_for_each(|c| c.check(nsymbols))
    }
}

/// Checks the structure, then expands `P(h)` exactly.
pub fn verify_radical_cert(cert: &RadicalCert, s: &SetDescription) -> Result<RadicalVerdict> {
    cert.check_structure(s)?;
    let gens = cert.generator_values(s)?;
    let mut acc = RatFunc::one();
    for c in cert.coeffs.iter().rev() {
        acc = acc.mul(&cert.h).add(&c.value(&gens)?);
    }
    if acc.is_zero() {
        Ok(RadicalVerdict::Valid)
    } else {
        Ok(RadicalVerdict::Invalid { residual: acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_ratfunc;

    fn f(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    fn set(ps: &[&str]) -> SetDescription {
        SetDescription::new(1, ps.iter().map(|p| f(p).to_poly().unwrap()).collect(), vec![])
    }

    fn half() -> Point {
        Point::new(vec![KElem::from_ratio(1, 2).unwrap()])
    }

    #[test]
    fn cone_value_examples() {
        let s = set(&["x1", "1 - x1"]);
        let c = ConeCert::new().with(vec![0, 1], vec![RatFunc::one()]);
        assert_eq!(cone_value(&c, &s).unwrap(), f("x1*(1 - x1)"));
        assert!(cone_value(&ConeCert::new(), &s).unwrap().is_zero());
        let c = ConeCert::new().with(vec![], vec![f("x1")]);
        assert_eq!(cone_value(&c, &set(&[])).unwrap(), f("x1^2"));
        let bad = ConeCert::new().with(vec![2], vec![RatFunc::one()]);
        assert_eq!(
            cone_value(&bad, &s).unwrap_err(),
            Error::IndexOutOfRange { index: 2, len: 2 }
        );
    }

    #[test]
    fn pointwise_examples() {
        let s = set(&["x1", "1 - x1"]);
        let c = ConeCert::new().with(vec![0, 1], vec![RatFunc::one()]);
        assert!(verify_cone_pointwise(&c, &s, &half()).unwrap());
        let sq = ConeCert::new().with(vec![], vec![f("x1")]);
        assert!(verify_cone_pointwise(&sq, &set(&[]), &Point::new(vec![KElem::from_int(-3)])).unwrap());
        let inv = ConeCert::new().with(vec![], vec![f("1/x1")]);
        assert_eq!(
            verify_cone_pointwise(&inv, &set(&[]), &Point::new(vec![KElem::zero()])).unwrap_err(),
            Error::NotDefinedAt
        );
    }

    #[test]
    fn generator_examples() {
        let s = set(&["x1", "1 - x1"]);
        let c = ConeCert::new().with(vec![0, 1], vec![RatFunc::one()]);
        let g = generator_value(&c, &s).unwrap();
        assert_eq!(g, f("1/(1 + x1 - x1^2)"));
        let at = g.eval(half().coords()).unwrap();
        assert_eq!(at, KElem::from_ratio(4, 5).unwrap());
        assert_eq!(at.ord(), Some(0));
        assert!(generator_value(&ConeCert::new(), &s).unwrap().is_one());
        let sq = ConeCert::new().with(vec![], vec![f("x1")]);
        assert_eq!(generator_value(&sq, &set(&[])).unwrap(), f("1/(1 + x1^2)"));
        let minus_one = ConeCert::new().with(vec![0], vec![RatFunc::one()]);
        assert_eq!(
            generator_value(&minus_one, &set(&["-1"])).unwrap_err(),
            Error::IdenticallyMinusOne
        );
    }

    fn xsq_generator() -> ConeCert {
        ConeCert::new().with(vec![], vec![f("x1")])
    }

    #[test]
    fn radical_examples() {
        let empty = set(&[]);
        // h = g itself: Y - g
        let cert = RadicalCert {
            h: f("1/(1 + x1^2)"),
            generators: vec![xsq_generator()],
            coeffs: vec![LocalizedElem::unlocalized(AlgebraElem::new(
                f("-x1").to_poly().unwrap(),
            ))],
        };
        assert_eq!(verify_radical_cert(&cert, &empty).unwrap(), RadicalVerdict::Valid);

        // h = x/(1+x^2): Y^2 - (g - g^2)
        let cert = RadicalCert {
            h: f("x1/(1 + x1^2)"),
            generators: vec![xsq_generator()],
            coeffs: vec![
                LocalizedElem::unlocalized(AlgebraElem::new(f("x1^2 - x1").to_poly().unwrap())),
                LocalizedElem::unlocalized(AlgebraElem::zero()),
            ],
        };
        assert_eq!(verify_radical_cert(&cert, &empty).unwrap(), RadicalVerdict::Valid);

        // h = x1 on {x1 > 0} with Y - 1/(1+x1)
        let s = set(&["x1"]);
        let cert = RadicalCert {
            h: f("x1"),
            generators: vec![ConeCert::new().with(vec![0], vec![RatFunc::one()])],
            coeffs: vec![LocalizedElem::unlocalized(AlgebraElem::new(
                f("-x1").to_poly().unwrap(),
            ))],
        };
        match verify_radical_cert(&cert, &s).unwrap() {
            RadicalVerdict::Invalid { residual } => assert_eq!(residual, f("x1 - 1/(1 + x1)")),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn structural_errors_are_distinct() {
        let empty = set(&[]);
        let mut cert = RadicalCert {
            h: f("1/(1 + x1^2)"),
            generators: vec![xsq_generator()],
            coeffs: vec![LocalizedElem::unlocalized(AlgebraElem::new(
                f("-x1/eps").to_poly().unwrap(),
            ))],
        };
        assert!(matches!(verify_radical_cert(&cert, &empty), Err(Error::Structural(_))));
        cert.coeffs[0] = LocalizedElem {
            a: AlgebraElem::new(f("-x1").to_poly().unwrap()),
            t_m: KElem::one(),
            t_a: AlgebraElem::generator(0),
        };
        assert!(matches!(verify_radical_cert(&cert, &empty), Err(Error::Structural(_))));
        cert.coeffs[0].t_m = KElem::eps();
        cert.coeffs[0].a = AlgebraElem::generator(3);
        assert!(matches!(verify_radical_cert(&cert, &empty), Err(Error::Structural(_))));
        cert.coeffs.clear();
        assert!(matches!(verify_radical_cert(&cert, &empty), Err(Error::Structural(_))));
    }

    #[test]
    fn localized_coefficients_verify() {
        // h = g/(1 + eps*g) satisfies Y - a/(1 + eps*a) with a = g
        let empty = set(&[]);
        let g = f("1/(1 + x1^2)");
        let h = g.div(&RatFunc::one().add(&g.scale(&KElem::eps()))).unwrap();
        let cert = RadicalCert {
            h,
            generators: vec![xsq_generator()],
            coeffs: vec![LocalizedElem {
                a: AlgebraElem::new(f("-x1").to_poly().unwrap()),
                t_m: KElem::eps(),
                t_a: AlgebraElem::generator(0),
            }],
        };
        assert!(verify_radical_cert(&cert, &empty).unwrap().is_valid());
    }

    #[test]
    fn set_parsing_and_membership() {
        let s = SetDescription::parse("p: x1; 1 - x1 | g: x2/eps", 2).unwrap();
        assert_eq!(s.p.len(), 2);
        assert_eq!(s.g.len(), 1);
        let inside = [KElem::from_ratio(1, 2).unwrap(), KElem::eps()];
        let outside = [KElem::from_ratio(1, 2).unwrap(), KElem::one()];
        assert!(s.contains(&inside).unwrap());
        assert!(!s.contains(&outside).unwrap());
        assert!(SetDescription::parse("p: 1/x1", 1).is_err());
        assert!(SetDescription::parse("q: x1", 1).is_err());
        assert_eq!(s.to_string(), "p: x1; -x1 + 1 | g: (1)/(eps)*x2");
    }
}
