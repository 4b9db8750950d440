use crate::certificates::{generator_value, ConeCert, SetDescription};
use crate::error::{Error, Result};
use crate::ovf::{ValGroupElem, Value};
use crate::ratfunc::RatFunc;
use crate::valuations::{ResidueElem, ValuationHandle};

use super::order::{baer_krull_order, residue_order_catalog, OrderHandle, ResidueOrder, DEFAULT_CATALOG_CAP};
use super::parity::{f2_max_independent, ParityBasis};
use super::semisection::build_semisection;

#[derive(Clone, Debug, PartialEq)]
pub enum OrderSearch {
    Found(ResidueOrder),
    /// No catalog order makes every listed residue positive. Pairs are
    /// `(index of p_i, residue of its normalized even product)`.
    NotFound {
        residues: Vec<(usize, ResidueElem)>,
    },
}

/// Valuations of the `p_i`, all of which must be finite.
pub fn constraint_values(v: &ValuationHandle, s: &SetDescription) -> Result<Vec<ValGroupElem>> {
    s.p.iter()
        .enumerate()
        .map(|(i, p)| match v.val_of(&RatFunc::from_poly(p.clone()))? {
            Value::Finite(g) => Ok(g),
            Value::Infinity => Err(Error::HypothesisViolated(format!("p{} is identically zero", i + 1))),
        })
        .collect()
}

/// For each non-chosen `i`: `q = p_i prod_{j in comb(i)} p_j` has even value;
/// with `c = s0(nu(q) / 2)` the residue of `q / c^2`.
pub fn even_residues(
    v: &ValuationHandle,
    s: &SetDescription,
    basis: &ParityBasis,
) -> Result<Vec<(usize, ResidueElem)>> {
    let values = constraint_values(v, s)?;
    let mut out = Vec::new();
    for i in (0..s.p.len()).filter(|&i| !basis.is_chosen(i)) {
        let mut q = s.p[i].clone();
        let mut gamma = values[i].clone();
        for &j in &basis.combinations[i] {
            q = q.mul(&s.p[j]);
            gamma = &gamma + &values[j];
        }
        let half = gamma
            .half()
            .ok_or_else(|| Error::HypothesisViolated(format!("product for p{} has odd value {gamma}", i + 1)))?;
        let c = v.monomial_section(&half);
        let unit = RatFunc::from_poly(q).div(&c.mul(&c))?;
        out.push((i, v.residue(&unit)?));
    }
    Ok(out)
}

pub fn even_case_order_search(v: &ValuationHandle, s: &SetDescription, basis: &ParityBasis) -> Result<OrderSearch> {
    even_case_order_search_capped(v, s, basis, DEFAULT_CATALOG_CAP)
}

pub fn even_case_order_search_capped(
    v: &ValuationHandle,
    s: &SetDescription,
    basis: &ParityBasis,
    cap: usize,
) -> Result<OrderSearch> {
    let residues = even_residues(v, s, basis)?;
    'orders: for ro in residue_order_catalog(v, cap) {
        for (_, r) in &residues {
            if ro.sign(r)? <= 0 {
                continue 'orders;
            }
        }
        return Ok(OrderSearch::Found(ro));
    }
    Ok(OrderSearch::NotFound { residues })
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub order: OrderHandle,
    pub values: Vec<ValGroupElem>,
    pub basis: ParityBasis,
    pub residues: Vec<(usize, ResidueElem)>,
    /// Number of generators `1/(1+f)` and `g_j` whose valuation was checked to be `>= 0`.
    pub checked_generators: usize,
}

#[derive(Clone, Debug)]
pub enum PipelineOutcome {
    Order(Box<PipelineReport>),
    NotFound { residues: Vec<(usize, ResidueElem)> },
}

/// Parity basis, residue-order search, semi-section forcing the chosen
/// `p_i`, and the lifted order; then checks `sign(p_i) = +1` for every `i`.
/// The hypothesis that the algebra lies in the valuation ring is checked on
/// the set's `g_j` and on the supplied cone generators only.
pub fn sufficiency_pipeline(
    v: &ValuationHandle,
    s: &SetDescription,
    generators: &[ConeCert],
) -> Result<PipelineOutcome> {
    let zero = Value::Finite(ValGroupElem::zero(v.rank()));
    let mut checked = 0;
    for (k, f) in generators.iter().enumerate() {
        let g = generator_value(f, s)?;
        if v.val_of(&g)? < zero {
            return Err(Error::HypothesisViolated(format!(
                "generator {} = {g} has negative value",
                k + 1
            )));
        }
        checked += 1;
    }
    for (j, g) in s.g.iter().enumerate() {
        if v.val_of(g)? < zero {
            return Err(Error::HypothesisViolated(format!(
                "g{} = {g} has negative value",
                j + 1
            )));
        }
        checked += 1;
    }

    let values = constraint_values(v, s)?;
    let basis = f2_max_independent(&values.iter().map(ValGroupElem::parity).collect::<Vec<_>>());
    let ro = match even_case_order_search(v, s, &basis)? {
        OrderSearch::Found(ro) => ro,
        OrderSearch::NotFound { residues } => return Ok(PipelineOutcome::NotFound { residues }),
    };
    let residues = even_residues(v, s, &basis)?;
    let forced = basis
        .chosen
        .iter()
        .map(|&i| (values[i].clone(), RatFunc::from_poly(s.p[i].clone())))
        .collect();
    let semisection = build_semisection(v, forced)?;
    let order = baer_krull_order(v, semisection, ro)?;
    for (i, p) in s.p.iter().enumerate() {
        if order.sign(&RatFunc::from_poly(p.clone()))? != 1 {
            return Err(Error::Structural(format!(
                "constructed order makes p{} nonpositive",
                i + 1
            )));
        }
    }
    Ok(PipelineOutcome::Order(Box::new(PipelineReport {
        order,
        values,
        basis,
        residues,
        checked_generators: checked,
    })))
}
