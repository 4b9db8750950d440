//! Exact feasibility for `A x = b, x >= 0` over the rationals: phase one of
//! the tableau simplex method with Bland's rule, so it always terminates.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ovf::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<Rat>),
    Infeasible,
}

pub fn feasible_nonneg(a: &[Vec<Rat>], b: &[Rat], max_pivots: usize) -> Result<LpOutcome> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = n + m;

    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = bi.is_negative();
        let mut r = vec![Rat::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v } else { v.clone() };
        }
        r[n + i] = Rat::from_integer(1.into());
        r[rhs] = if flip { -bi } else { bi.clone() };
        tab.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![Rat::zero(); width];
    for r in &tab {
        for j in 0..n {
            cost[j] -= &r[j];
        }
        cost[rhs] -= &r[rhs];
    }

    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for (i, r) in tab.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[rhs] / &r[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            // phase one is bounded below by zero, so this cannot happen
            unreachable!("unbounded phase-one objective");
        };
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::BudgetExceeded(format!("more than {max_pivots} simplex pivots")));
        }
        pivot(&mut tab, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[rhs].is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = tab[i][rhs].clone();
        }
    }
    Ok(LpOutcome::Feasible(x))
}

fn pivot(tab: &mut [Vec<Rat>], cost: &mut [Rat], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let prow = tab[row].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    let eliminate = |r: &mut Vec<Rat>| {
        let f = r[col].clone();
        if f.is_zero() {
            return;
        }
        for &j in &nz {
            let d = &f * &prow[j];
            r[j] -= d;
        }
    };
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    let mut c = cost.to_vec();
    eliminate(&mut c);
    cost.clone_from_slice(&c);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn finds_nonnegative_solution() {
        let a = rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![q(2), q(3)];
        let LpOutcome::Feasible(x) = feasible_nonneg(&a, &b, 100).unwrap() else {
            panic!("expected feasible");
        };
        assert!(x.iter().all(|v| !v.is_negative()));
        assert_eq!(&x[0] + &x[1], q(2));
        assert_eq!(&x[1] + &x[2], q(3));
    }

    #[test]
    fn detects_infeasibility() {
        // x1 = -1 with x1 >= 0
        assert_eq!(
            feasible_nonneg(&rows(&[&[1]]), &[q(-1)], 100).unwrap(),
            LpOutcome::Infeasible
        );
        // 0 = 1
        assert_eq!(
            feasible_nonneg(&rows(&[&[0, 0]]), &[q(1)], 100).unwrap(),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn handles_redundant_rows() {
        let a = rows(&[&[1, 2], &[2, 4], &[0, 0]]);
        let b = vec![q(4), q(8), q(0)];
        let LpOutcome::Feasible(x) = feasible_nonneg(&a, &b, 100).unwrap() else {
            panic!("expected feasible");
        };
        assert_eq!(&x[0] + &(&x[1] * &q(2)), q(4));
    }
}
