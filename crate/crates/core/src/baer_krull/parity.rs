use std::collections::BTreeSet;

use crate::ovf::Parity;

/// A maximal independent subset of a list of parity vectors, found by
/// left-to-right elimination (earliest index wins), together with the
/// combination of chosen indices reproducing every input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityBasis {
    pub chosen: Vec<usize>,
    /// `combinations[i]`: chosen indices (sorted) whose XOR is parity `i`.
    pub combinations: Vec<Vec<usize>>,
    rows: Vec<(Parity, BTreeSet<usize>)>,
}

impl ParityBasis {
    fn reduce(&self, v: &Parity) -> (Parity, BTreeSet<usize>) {
        let mut w = v.clone();
        let mut comb = BTreeSet::new();
        for (row, c) in &self.rows {
            let p = row.pivot().expect("stored rows are nonzero");
            if w.0[p] {
                w = w.xor(row);
                comb = comb.symmetric_difference(c).copied().collect();
            }
        }
        (w, comb)
    }

    /// Chosen indices whose parities XOR to `target`, if it lies in their span.
    pub fn express(&self, target: &Parity) -> Option<Vec<usize>> {
        let (w, comb) = self.reduce(target);
        w.is_zero().then(|| comb.into_iter().collect())
    }

    pub fn is_chosen(&self, i: usize) -> bool {
        self.chosen.binary_search(&i).is_ok()
    }
}

pub fn f2_max_independent(parities: &[Parity]) -> ParityBasis {
    let mut basis = ParityBasis {
        chosen: Vec::new(),
        combinations: Vec::with_capacity(parities.len()),
        rows: Vec::new(),
    };
    for (i, v) in parities.iter().enumerate() {
        let (w, mut comb) = basis.reduce(v);
        if w.is_zero() {
            basis.combinations.push(comb.into_iter().collect());
        } else {
            comb.insert(i);
            basis.rows.push((w, comb));
            basis.chosen.push(i);
            basis.combinations.push(vec![i]);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(bits: &[u8]) -> Parity {
        Parity(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn examples() {
        let b = f2_max_independent(&[p(&[1, 0]), p(&[1, 0]), p(&[0, 1])]);
        assert_eq!(b.chosen, vec![0, 2]);
        assert_eq!(b.combinations[1], vec![0]);
        assert!(f2_max_independent(&[]).chosen.is_empty());
        let b = f2_max_independent(&[p(&[1, 1]), p(&[1, 0]), p(&[0, 1])]);
        assert_eq!(b.chosen, vec![0, 1]);
        assert_eq!(b.combinations[2], vec![0, 1]);
        assert_eq!(f2_max_independent(&[p(&[0, 0])]).combinations[0], Vec::<usize>::new());
    }

    proptest! {
        #[test]
        fn combinations_reproduce_inputs(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 0..8)) {
            let ps: Vec<Parity> = rows.into_iter().map(Parity).collect();
            let b = f2_max_independent(&ps);
            prop_assert!(b.chosen.len() <= 3);
            for (i, v) in ps.iter().enumerate() {
                let x = b.combinations[i].iter().fold(Parity::zero(3), |acc, &j| acc.xor(&ps[j]));
                prop_assert_eq!(&x, v);
                prop_assert!(b.combinations[i].iter().all(|&j| b.is_chosen(j)));
            }
            // the chosen parities are independent: no nonempty subset XORs to zero
            let k = b.chosen.len();
            for mask in 1u32..(1 << k) {
                let x = (0..k).filter(|t| mask >> t & 1 == 1).fold(Parity::zero(3), |acc, t| acc.xor(&ps[b.chosen[t]]));
                prop_assert!(!x.is_zero());
            }
        }
    }
}
