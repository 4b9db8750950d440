use crate::error::{Error, Result};
use crate::ovf::{ValGroupElem, Value};
use crate::ratfunc::RatFunc;
use crate::valuations::ValuationHandle;

use super::parity::{f2_max_independent, ParityBasis};

/// A semi-section `s: Gamma -> L^x` with `nu(s(g)) = g`, multiplicative up to
/// squares, and sending each forced `gamma_i` to the prescribed `p_i`.
///
/// `s(delta) = prod_{j in E} u_j * s0((delta - sum_{j in E} gamma_j) / 2)^2`
/// where `(gamma_j, u_j)` runs over the forced pairs followed by the
/// extension representatives, `E` is the unique subset matching the parity
/// of `delta`, and `s0` is the monomial section in the base uniformizers.
#[derive(Clone, Debug)]
pub struct SemiSection {
    valuation: ValuationHandle,
    base: Vec<RatFunc>,
    basis: Vec<(ValGroupElem, RatFunc)>,
    nforced: usize,
    parity: ParityBasis,
}

pub fn build_semisection(v: &ValuationHandle, forced: Vec<(ValGroupElem, RatFunc)>) -> Result<SemiSection> {
    build_semisection_with_base(v, forced, v.uniformizers())
}

/// Like [`build_semisection`] with explicit base uniformizers; `base[k]`
/// must have valuation the `k`-th unit vector.
pub fn build_semisection_with_base(
    v: &ValuationHandle,
    forced: Vec<(ValGroupElem, RatFunc)>,
    base: Vec<RatFunc>,
) -> Result<SemiSection> {
    let r = v.rank();
    if base.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: base.len(),
        });
    }
    for (k, u) in base.iter().enumerate() {
        if v.val_of(u)? != Value::Finite(ValGroupElem::unit(r, k)) {
            return Err(Error::ValuationMismatch(format!(
                "base uniformizer {u} does not have valuation e{}",
                k + 1
            )));
        }
    }
    if let Some((gamma, _)) = forced.iter().find(|(g, _)| g.rank() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: gamma.rank(),
        });
    }
    let pre = f2_max_independent(&forced.iter().map(|(g, _)| g.parity()).collect::<Vec<_>>());
    if pre.chosen.len() < forced.len() {
        let i = (0..forced.len())
            .find(|&i| !pre.is_chosen(i))
            .expect("some index was dropped");
        let mut combination = pre.combinations[i].clone();
        combination.push(i);
        combination.sort_unstable();
        return Err(Error::DependentParities { combination });
    }

    for (gamma, p) in &forced {
        let actual = v.val_of(p)?;
        if actual != Value::Finite(gamma.clone()) {
            return Err(Error::ValuationMismatch(format!(
                "nu({p}) = {actual}, expected {gamma}"
            )));
        }
    }
    let nforced = forced.len();
    let mut basis = forced;
    for (k, u) in base.iter().enumerate().take(r) {
        let e = ValGroupElem::unit(r, k);
        let span = f2_max_independent(&basis.iter().map(|(g, _)| g.parity()).collect::<Vec<_>>());
        if span.express(&e.parity()).is_none() {
            basis.push((e, u.clone()));
        }
    }
    let parity = f2_max_independent(&basis.iter().map(|(g, _)| g.parity()).collect::<Vec<_>>());
    debug_assert_eq!(parity.chosen.len(), basis.len());
    Ok(SemiSection {
        valuation: v.clone(),
        base,
        basis,
        nforced,
        parity,
    })
}

impl SemiSection {
    pub fn valuation(&self) -> &ValuationHandle {
        &self.valuation
    }

    pub fn forced(&self) -> &[(ValGroupElem, RatFunc)] {
        &self.basis[..self.nforced]
    }

    /// The representatives `(gamma, u)` added to complete the forced parities to a basis.
    pub fn extension(&self) -> &[(ValGroupElem, RatFunc)] {
        &self.basis[self.nforced..]
    }

    pub fn base(&self) -> &[RatFunc] {
        &self.base
    }

    /// `s0(gamma) = prod base_k^{gamma_k}`, a homomorphism.
    pub fn base_section(&self, gamma: &ValGroupElem) -> RatFunc {
        self.base
            .iter()
            .zip(gamma.coords())
            .fold(RatFunc::one(), |acc, (u, &k)| {
                acc.mul(&u.powi(k).expect("uniformizers are nonzero"))
            })
    }

    /// Basis indices `E` and the half `(delta - sum_E gamma_j) / 2`.
    fn decompose(&self, delta: &ValGroupElem) -> (Vec<usize>, ValGroupElem) {
        assert_eq!(delta.rank(), self.valuation.rank(), "rank mismatch");
        let e = self
            .parity
            .express(&delta.parity())
            .expect("the basis spans Gamma / 2 Gamma");
        let rest = e.iter().fold(delta.clone(), |acc, &j| &acc - &self.basis[j].0);
        (e, rest.half().expect("parity was matched"))
    }

    pub fn section(&self, delta: &ValGroupElem) -> RatFunc {
        let (e, half) = self.decompose(delta);
        let sq = self.base_section(&half);
        e.iter().fold(sq.mul(&sq), |acc, &j| acc.mul(&self.basis[j].1))
    }

    /// `w` with `w^2 = s(g1 + g2) / (s(g1) s(g2))`.
    pub fn law_witness(&self, g1: &ValGroupElem, g2: &ValGroupElem) -> RatFunc {
        let (e1, h1) = self.decompose(g1);
        let (e2, h2) = self.decompose(g2);
        let (_, h3) = self.decompose(&(g1 + g2));
        let w = self.base_section(&(&(&h3 - &h1) - &h2));
        e1.iter().filter(|j| e2.contains(j)).fold(w, |acc, &j| {
            acc.div(&self.basis[j].1).expect("basis elements are nonzero")
        })
    }

    /// `w` with `w^2 = s(gamma_i) / p_i` for the forced pair `i`.
    pub fn forcing_witness(&self, i: usize) -> RatFunc {
        assert!(i < self.nforced, "not a forced index");
        RatFunc::one()
    }

    /// Exact check of `nu(s(g)) = g` for both arguments and of the square law.
    pub fn check_law(&self, g1: &ValGroupElem, g2: &ValGroupElem) -> Result<bool> {
        let s1 = self.section(g1);
        let s2 = self.section(g2);
        let s3 = self.section(&(g1 + g2));
        for (s, g) in [(&s1, g1), (&s2, g2)] {
            if self.valuation.val_of(s)? != Value::Finite(g.clone()) {
                return Ok(false);
            }
        }
        let w = self.law_witness(g1, g2);
        Ok(w.mul(&w) == s3.div(&s1.mul(&s2))?)
    }

    pub fn check_forcing(&self, i: usize) -> Result<bool> {
        let (gamma, p) = &self.basis[i];
        let w = self.forcing_witness(i);
        Ok(w.mul(&w) == self.section(gamma).div(p)?)
    }
}
