//! Self-dual basis `C_γ` and the multiplicity polynomials `LVM_{γ',γ}` with
//! `B_γ = Σ LVM_{γ',γ} C_{γ'}` and `D(C_γ) = u^{−ℓ_I(γ)} C_γ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::block::Block;
use crate::duality::RMatrix;
use crate::hecke::{sadd, Column};
use crate::poly::SignedULaurent;
use crate::{Error, Result};

/// Unitriangular matrix stored by columns: `cols[γ][γ'] = M_{γ',γ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lvm {
    pub cols: Vec<Column<SignedULaurent>>,
}

impl Lvm {
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> SignedULaurent {
        self.cols[col].get(&row).cloned().unwrap_or_default()
    }

    pub fn identity(n: usize) -> Self {
        Lvm { cols: (0..n).map(|g| BTreeMap::from([(g, SignedULaurent::one())])).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![BTreeMap::new(); self.len()];
        for (g, col) in self.cols.iter().enumerate() {
            for (&h, c) in col {
                cols[h].insert(g, c.clone());
            }
        }
        Lvm { cols }
    }
}

/// Evaluation order: increasing length, ties by parameter id.
pub fn evaluation_order(block: &Block) -> Vec<usize> {
    let mut v: Vec<usize> = (0..block.len()).collect();
    v.sort_by(|&a, &b| (block.lengths(a).l2, &block.params[a].id).cmp(&(block.lengths(b).l2, &block.params[b].id)));
    v
}

/// Solve `u^d·dual(P) − P = K` column by column, keeping the terms of `K` below
/// `u^{(d−1)/2}` for `−P`.
pub fn compute_lvm(block: &Block, r: &RMatrix) -> Result<Lvm> {
    let n = block.len();
    let li2 = &r.li2;
    let mut cols: Vec<Column<SignedULaurent>> = vec![BTreeMap::new(); n];
    for g in evaluation_order(block) {
        let mut col = BTreeMap::from([(g, SignedULaurent::one())]);
        for &h in block.below(g) {
            // K = Σ_{ε≠γ} R_{ε,γ} LVM_{γ',ε}
            let mut k = SignedULaurent::zero();
            for (&eps, rc) in &r.cols[g] {
                if eps != g {
                    if let Some(l) = cols[eps].get(&h) {
                        k = &k + &(rc * l);
                    }
                }
            }
            let d2 = li2[g] - li2[h];
            let p = -SignedULaurent::from_terms(
                k.terms().filter(|(e, _)| 2 * e.0 <= d2 - 2).map(|(e, c)| (*e, c.clone())),
            );
            let check = &p.dual().shift(d2) - &p;
            let bad_exp = p.terms().any(|(e, _)| e.0 < 0 || e.0 % 2 != 0 || e.1);
            if check != k || bad_exp {
                return Err(Error::Invariant(format!(
                    "LVM split fails at ({}, {}): K = {k}",
                    block.params[h].id, block.params[g].id
                )));
            }
            if !p.is_zero() {
                col.insert(h, p);
            }
        }
        cols[g] = col;
    }
    Ok(Lvm { cols })
}

/// Inverse of a unitriangular matrix whose support is graded by `l2`.
pub fn inverse_unitriangular(block: &Block, m: &Lvm) -> Lvm {
    let n = m.len();
    let mut rows_by_len: Vec<usize> = (0..n).collect();
    rows_by_len.sort_by_key(|&g| std::cmp::Reverse(block.lengths(g).l2));
    let mut cols = vec![BTreeMap::new(); n];
    for g in 0..n {
        let mut col: Column<SignedULaurent> = BTreeMap::from([(g, SignedULaurent::one())]);
        for &rho in &rows_by_len {
            if rho == g || !block.is_below(rho, g) {
                continue;
            }
            let mut acc = SignedULaurent::zero();
            for (&eps, c) in &col {
                if let Some(l) = m.cols[eps].get(&rho) {
                    acc = &acc - &(l * c);
                }
            }
            if !acc.is_zero() {
                col.insert(rho, acc);
            }
        }
        cols[g] = col;
    }
    Lvm { cols }
}

/// Problems found when checking a multiplicity matrix.
#[derive(Clone, Debug, Serialize)]
pub struct LvmFailure {
    pub check: String,
    pub witness: String,
}

/// Unitriangularity, the degree bound `(ℓ_I(γ)−ℓ_I(γ')−1)/2`, `Z[u]` entries,
/// the round trip `B = LVM·C`, and `D(C_γ) = u^{−ℓ_I(γ)}C_γ`.
pub fn verify_selfdual(block: &Block, r: &RMatrix, lvm: &Lvm) -> Vec<LvmFailure> {
    let id = |g: usize| block.params[g].id.clone();
    let mut out = Vec::new();
    for g in 0..lvm.len() {
        if lvm.get(g, g) != SignedULaurent::one() {
            out.push(LvmFailure { check: "unit diagonal".into(), witness: id(g) });
        }
        for (&h, c) in &lvm.cols[g] {
            if h == g {
                continue;
            }
            if !block.is_below(h, g) {
                out.push(LvmFailure { check: "triangularity".into(), witness: format!("LVM[{},{}] = {c}", id(h), id(g)) });
            }
            let d2 = r.li2[g] - r.li2[h];
            if c.terms().any(|(e, _)| e.1 || e.0 < 0 || e.0 % 2 != 0 || 2 * e.0 > d2 - 2) {
                out.push(LvmFailure { check: "degree bound".into(), witness: format!("LVM[{},{}] = {c}", id(h), id(g)) });
            }
        }
    }
    let inv = inverse_unitriangular(block, lvm);
    for g in 0..lvm.len() {
        // C_γ in the B basis, then B_γ = Σ LVM_{γ',γ} C_{γ'}
        let mut b = BTreeMap::new();
        for (&h, c) in &lvm.cols[g] {
            for (&k, x) in &inv.cols[h] {
                sadd(&mut b, k, c * x);
            }
        }
        if b != BTreeMap::from([(g, SignedULaurent::one())]) {
            out.push(LvmFailure { check: "round trip".into(), witness: id(g) });
        }
        let dc = r.apply(&inv.cols[g]);
        let want: Column<SignedULaurent> = inv.cols[g].iter().map(|(&k, x)| (k, x.shift(-r.li2[g]))).collect();
        if dc != want {
            out.push(LvmFailure { check: "self-duality".into(), witness: format!("D(C_{}) ≠ u^(-ℓ_I) C_{}", id(g), id(g)) });
        }
    }
    out
}

/// Classical Kazhdan–Lusztig polynomials of a finite Weyl group.
pub mod classical {
    use crate::poly::SignedULaurent;
    use crate::rootdata::RootDatum;
    use crate::weyl::WeylGroup;
    use crate::Result;

    pub struct KlTable {
        pub weyl: WeylGroup,
        /// `bruhat[x][w]` iff `x ≤ w`
        pub bruhat: Vec<Vec<bool>>,
        /// `p[x][w] = P_{x,w}(u)`
        pub p: Vec<Vec<SignedULaurent>>,
    }

    fn coeff_u(p: &SignedULaurent, k: i64) -> num_bigint::BigInt {
        p.coeff(2 * k, false)
    }

    pub fn compute(rd: &RootDatum) -> Result<KlTable> {
        let weyl = WeylGroup::new(rd)?;
        let n = weyl.len();
        let ell = |w: usize| weyl.length(w) as i64;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| weyl.length(w));
        let descent = |w: usize| (0..rd.n_simple()).find(|&s| weyl.length(weyl.left[s][w]) < weyl.length(w));
        // x ≤ w iff min(x, sx) ≤ sw for a left descent s of w
        let mut bruhat = vec![vec![false; n]; n];
        for &w in &order {
            match descent(w) {
                None => bruhat[w][w] = true,
                Some(s) => {
                    let v = weyl.left[s][w];
                    for x in 0..n {
                        let sx = weyl.left[s][x];
                        let m = if weyl.length(sx) < weyl.length(x) { sx } else { x };
                        bruhat[x][w] = bruhat[m][v];
                    }
                }
            }
        }
        let mut p = vec![vec![SignedULaurent::zero(); n]; n];
        for &w in &order {
            let Some(s) = descent(w) else {
                p[w][w] = SignedULaurent::one();
                continue;
            };
            let v = weyl.left[s][w];
            for x in 0..n {
                if !bruhat[x][w] {
                    continue;
                }
                let sx = weyl.left[s][x];
                let c = if ell(sx) < ell(x) { 1 } else { 0 };
                let mut val = &p[sx][v].shift(2 * (1 - c)) + &p[x][v].shift(2 * c);
                for z in 0..n {
                    if !bruhat[z][v] || z == v || ell(weyl.left[s][z]) > ell(z) || !bruhat[x][z] {
                        continue;
                    }
                    let dl = ell(v) - ell(z);
                    if dl % 2 == 0 {
                        continue;
                    }
                    let mu = coeff_u(&p[z][v], (dl - 1) / 2);
                    if mu != num_bigint::BigInt::from(0) {
                        val = &val - &p[x][z].shift(ell(w) - ell(z)).scale(&mu);
                    }
                }
                p[x][w] = val;
            }
        }
        Ok(KlTable { weyl, bruhat, p })
    }

    /// Inverse of the matrix `((−1)^{ℓ(w)−ℓ(y)} P_{y,w}(u))`, by columns.
    pub fn inverse_signed(t: &KlTable) -> Vec<Vec<SignedULaurent>> {
        let n = t.weyl.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| std::cmp::Reverse(t.weyl.length(w)));
        let signed = |y: usize, w: usize| {
            let p = &t.p[y][w];
            if (t.weyl.length(w) + t.weyl.length(y)) % 2 == 1 {
                -p
            } else {
                p.clone()
            }
        };
        // q[w][y] = Q_{y,w}; solve Σ_z S_{y,z} Q_{z,w} = δ_{y,w} from the top row down
        let mut q = vec![vec![SignedULaurent::zero(); n]; n];
        for w in 0..n {
            for &y in &order {
                if !t.bruhat[y][w] {
                    continue;
                }
                if y == w {
                    q[w][y] = SignedULaurent::one();
                    continue;
                }
                let mut acc = SignedULaurent::zero();
                for z in 0..n {
                    if z != y && t.bruhat[y][z] && t.bruhat[z][w] {
                        acc = &acc - &(&signed(y, z) * &q[w][z]);
                    }
                }
                q[w][y] = acc;
            }
        }
        q
    }

    /// Expected LVM for a complex-group block (`G×G` with the swap involution):
    /// the orbit of `θ_w` corresponds to `w`.
    pub fn complex_group_lvm(block: &crate::block::Block) -> Result<super::Lvm> {
        let big = &block.root_datum;
        let (r, n) = (big.rank / 2, big.n_simple() / 2);
        let rd = RootDatum::new(
            None,
            r,
            big.simple_roots[..n].iter().map(|v| v[..r].to_vec()).collect(),
            big.simple_coroots[..n].iter().map(|v| v[..r].to_vec()).collect(),
        )?;
        let t = compute(&rd)?;
        let q = inverse_signed(&t);
        let w_of = (0..block.len())
            .map(|g| {
                let m = crate::builders::complex_orbit_matrix(&block.orbits[block.params[g].orbit].theta);
                t.weyl.find(&m).ok_or_else(|| crate::Error::Domain("orbit is not of the form θ_w".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cols = vec![std::collections::BTreeMap::new(); block.len()];
        for (g, col) in cols.iter_mut().enumerate() {
            for h in 0..block.len() {
                let x = &q[w_of[g]][w_of[h]];
                if !x.is_zero() {
                    col.insert(h, x.clone());
                }
            }
        }
        Ok(super::Lvm { cols })
    }
}
