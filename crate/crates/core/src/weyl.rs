//! Finite Weyl groups as matrices on X*, enumerated breadth-first.

use std::collections::HashMap;

use crate::lattice::{self, IMat};
use crate::rootdata::RootDatum;
use crate::{Error, Result};

const MAX_ORDER: usize = 100_000;

#[derive(Clone, Debug)]
pub struct WeylGroup {
    /// reduced words, in breadth-first (hence length-nondecreasing) order
    pub words: Vec<Vec<usize>>,
    pub matrices: Vec<IMat>,
    /// `left[i][w]` is the index of `sᵢ w`
    pub left: Vec<Vec<usize>>,
    /// `right[i][w]` is the index of `w sᵢ`
    pub right: Vec<Vec<usize>>,
    index: HashMap<IMat, usize>,
}

impl WeylGroup {
    pub fn new(rd: &RootDatum) -> Result<Self> {
        let n = rd.n_simple();
        let refl: Vec<IMat> = (0..n).map(|i| rd.reflection_matrix(i)).collect();
        let id = lattice::identity(rd.rank);
        let mut words = vec![vec![]];
        let mut matrices = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut k = 0;
        while k < matrices.len() {
            for (i, s) in refl.iter().enumerate() {
                let m = lattice::mat_mul(&matrices[k], s);
                if !index.contains_key(&m) {
                    let mut w = words[k].clone();
                    w.push(i);
                    index.insert(m.clone(), matrices.len());
                    words.push(w);
                    matrices.push(m);
                    if matrices.len() > MAX_ORDER {
                        return Err(Error::Domain("Weyl group is too large or infinite".into()));
                    }
                }
            }
            k += 1;
        }
        let mul_table = |f: &dyn Fn(&IMat, &IMat) -> IMat| -> Vec<Vec<usize>> {
            refl.iter().map(|s| matrices.iter().map(|w| index[&f(w, s)]).collect()).collect()
        };
        let left = mul_table(&|w, s| lattice::mat_mul(s, w));
        let right = mul_table(&|w, s| lattice::mat_mul(w, s));
        Ok(WeylGroup { words, matrices, left, right, index })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn length(&self, w: usize) -> usize {
        self.words[w].len()
    }

    pub fn find(&self, m: &IMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn inverse(&self, w: usize) -> usize {
        let mut x = 0;
        for &i in self.words[w].iter().rev() {
            x = self.right[i][x];
        }
        x
    }

    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&w| self.length(w)).unwrap_or(0)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut x = a;
        for &i in &self.words[b] {
            x = self.right[i][x];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (n, o) in [("SL2", 2), ("SL3", 6), ("Sp4", 8), ("SL2xSL2", 4), ("SL4", 24)] {
            let w = WeylGroup::new(&RootDatum::builtin(n).unwrap()).unwrap();
            assert_eq!(w.len(), o, "{n}");
            let w0 = w.longest();
            assert_eq!(w.length(w0), RootDatum::builtin(n).unwrap().positive_roots().len());
            for x in 0..w.len() {
                assert_eq!(w.mul(x, w.inverse(x)), 0);
            }
        }
    }
}
