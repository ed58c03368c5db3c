//! Independent R-matrix solver: every `R_{γ',γ}` is an unknown polynomial in `u`
//! of degree at most `ℓ_I(γ) − ℓ_I(γ')`, and every commutation equation is
//! expanded coefficientwise into one sparse linear system over Q.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::block::Block;
use crate::duality::RMatrix;
use crate::hecke::{Column, HeckeOps, MixedOps};
use crate::poly::SignedULaurent;
use crate::{Error, Result};

/// Unknown `x = (row, col, k)`: coefficient of `u^k` in `R_{row,col}`.
struct Unknowns {
    list: Vec<(usize, usize, i64)>,
    by_col: Vec<Vec<usize>>,
}

/// Linear form: coefficients per unknown, plus a constant.
#[derive(Default, Clone)]
struct Form {
    coeffs: BTreeMap<usize, BigInt>,
    constant: BigInt,
}

/// Equation key: (source column, root, row, half-exponent).
type Key = (usize, usize, usize, i64);

fn add_term(eqs: &mut HashMap<Key, Form>, key: Key, var: Option<usize>, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let f = eqs.entry(key).or_default();
    match var {
        Some(x) => *f.coeffs.entry(x).or_insert_with(BigInt::zero) += c,
        None => f.constant += c,
    }
}

/// Solve for the R-matrix from the commutation relations alone.
pub fn compute_duality_oracle(block: &Block) -> Result<RMatrix> {
    let ops = HeckeOps::new(block)?;
    let mops = MixedOps::new(block, &ops)?;
    let n = block.len();
    let li2: Vec<i64> = (0..n).map(|g| block.lengths(g).li2).collect();
    let mut unknowns = Unknowns { list: vec![], by_col: vec![vec![]; n] };
    for g in 0..n {
        for &r in block.below(g) {
            let d2 = li2[g] - li2[r];
            for k in 0..=d2.div_euclid(2) {
                unknowns.by_col[g].push(unknowns.list.len());
                unknowns.list.push((r, g, k));
            }
        }
    }
    // each D(B_γ) as (unknown or constant, row, half-exponent)
    let parts = |g: usize| -> Vec<(Option<usize>, usize, i64)> {
        let mut v = vec![(None, g, -li2[g])];
        for &x in &unknowns.by_col[g] {
            let (r, _, k) = unknowns.list[x];
            v.push((Some(x), r, 2 * k - li2[g]));
        }
        v
    };
    let mut eqs: HashMap<Key, Form> = HashMap::new();
    for src in 0..n {
        for i in 0..block.n_simple() {
            // Σ_η dual(τ_{η,src}) D(B_η)
            for (&eta, t) in &mops.cols[i][src] {
                let td = t.dual();
                for (var, row, h) in parts(eta) {
                    for (&(e, _), c) in td.terms() {
                        add_term(&mut eqs, (src, i, row, h + e), var, c);
                    }
                }
            }
            // − u^{-1}(T + (u−1)) D(B_src), or − u^{-1} T D(B_src)
            let integral = mops.integral[i][src];
            for (var, row, h) in parts(src) {
                let single: Column<SignedULaurent> = BTreeMap::from([(row, SignedULaurent::u_half(h))]);
                for (r2, c) in mops.dual_side(i, integral, &single) {
                    for (&(e, _), a) in c.terms() {
                        add_term(&mut eqs, (src, i, r2, e), var, &-a);
                    }
                }
            }
        }
    }
    let mut keys: Vec<Key> = eqs.keys().copied().collect();
    keys.sort_unstable();
    let rows = keys.into_iter().filter_map(|k| {
        let f = eqs.remove(&k)?;
        let coeffs: BTreeMap<usize, BigRational> =
            f.coeffs.into_iter().filter(|(_, c)| !c.is_zero()).map(|(x, c)| (x, BigRational::from_integer(c))).collect();
        Some((coeffs, BigRational::from_integer(-f.constant)))
    });
    let sol = solve_rational(rows, unknowns.list.len())?;
    let mut cols: Vec<Column<SignedULaurent>> = (0..n).map(|g| BTreeMap::from([(g, SignedULaurent::one())])).collect();
    for (x, &(r, g, k)) in unknowns.list.iter().enumerate() {
        if !sol[x].is_integer() {
            return Err(Error::Invariant(format!(
                "oracle: coefficient of u^{k} in R[{},{}] is {} (not an integer)",
                block.params[r].id, block.params[g].id, sol[x]
            )));
        }
        let c = sol[x].to_integer();
        if !c.is_zero() {
            let e = cols[g].entry(r).or_default();
            *e = &*e + &SignedULaurent::monomial(2 * k, false, c);
        }
    }
    for col in &mut cols {
        col.retain(|_, c| !c.is_zero());
    }
    Ok(RMatrix { cols, li2 })
}

/// Incremental sparse Gaussian elimination; errors unless the solution is unique.
fn solve_rational(
    rows: impl Iterator<Item = (BTreeMap<usize, BigRational>, BigRational)>,
    nvars: usize,
) -> Result<Vec<BigRational>> {
    let mut pivots: HashMap<usize, (BTreeMap<usize, BigRational>, BigRational)> = HashMap::new();
    let mut order = Vec::new();
    for (mut a, mut b) in rows {
        // reduce against existing pivots until no pivot variable remains
        while let Some(x) = a.keys().copied().find(|x| pivots.contains_key(x)) {
            let c = a.remove(&x).expect("present");
            let (pa, pb) = &pivots[&x];
            for (&y, v) in pa {
                if y == x {
                    continue;
                }
                let e = a.entry(y).or_insert_with(BigRational::zero);
                *e -= &c * v;
                if e.is_zero() {
                    a.remove(&y);
                }
            }
            b -= &c * pb;
        }
        let Some((&x, lead)) = a.iter().next() else {
            if !b.is_zero() {
                return Err(Error::Invariant("oracle: commutation equations are infeasible".into()));
            }
            continue;
        };
        let inv = BigRational::one() / lead.clone();
        for v in a.values_mut() {
            *v *= &inv;
        }
        b *= &inv;
        pivots.insert(x, (a, b));
        order.push(x);
    }
    if pivots.len() != nvars {
        return Err(Error::Invariant(format!(
            "oracle: solution is not unique ({} of {nvars} unknowns determined)",
            pivots.len()
        )));
    }
    let mut sol = vec![BigRational::zero(); nvars];
    for &x in order.iter().rev() {
        let (a, b) = &pivots[&x];
        let mut v = b.clone();
        for (&y, c) in a {
            if y != x {
                v -= c * &sol[y];
            }
        }
        sol[x] = v;
    }
    Ok(sol)
}
