//! The duality map `D` on the rescaled basis, through its R-matrix:
//! `D(B_γ) = u^{−ℓ_I(γ)} Σ_{γ'} R_{γ',γ} B_{γ'}`.
//!
//! `D` is antilinear (`u ↦ u^{-1}`) and satisfies
//! `D(T m) = u^{-1}(T + (u−1))D(m)` for integral roots and `u^{-1}T D(m)` otherwise.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::block::Block;
use crate::hecke::{sadd, Column, HeckeOps, MixedOps};
use crate::poly::SignedULaurent;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    /// `cols[γ][γ'] = R_{γ',γ}`
    pub cols: Vec<Column<SignedULaurent>>,
    /// `2ℓ_I` per parameter
    pub li2: Vec<i64>,
}

impl RMatrix {
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> SignedULaurent {
        self.cols[col].get(&row).cloned().unwrap_or_default()
    }

    /// `D(B_γ)` as a column.
    pub fn d_column(&self, g: usize) -> Column<SignedULaurent> {
        self.cols[g].iter().map(|(&k, c)| (k, c.shift(-self.li2[g]))).collect()
    }

    fn from_d_columns(v: Vec<Column<SignedULaurent>>, li2: Vec<i64>) -> Self {
        let cols = v.into_iter().zip(&li2).map(|(c, &l)| c.into_iter().map(|(k, x)| (k, x.shift(l))).collect()).collect();
        RMatrix { cols, li2 }
    }

    /// `D(Σ c_γ B_γ) = Σ dual(c_γ) D(B_γ)`.
    pub fn apply(&self, x: &Column<SignedULaurent>) -> Column<SignedULaurent> {
        let mut out = BTreeMap::new();
        for (&g, c) in x {
            let dc = c.dual();
            for (k, v) in self.d_column(g) {
                sadd(&mut out, k, &dc * &v);
            }
        }
        out
    }
}

fn unit_inverse_dual(c: &SignedULaurent) -> Option<SignedULaurent> {
    // dual(±u^{h/2})^{-1} = ±u^{h/2}
    c.as_unit_monomial().map(|(h, s)| SignedULaurent::monomial(h, false, s))
}

fn scale_col(c: &SignedULaurent, x: &Column<SignedULaurent>) -> Column<SignedULaurent> {
    x.iter().map(|(&k, v)| (k, c * v)).filter(|(_, v)| !v.is_zero()).collect()
}

fn sub_into(out: &mut Column<SignedULaurent>, x: &Column<SignedULaurent>) {
    for (&k, v) in x {
        sadd(out, k, -v);
    }
}

struct Ctx<'a> {
    block: &'a Block,
    ops: MixedOps,
    li2: Vec<i64>,
    v: Vec<Option<Column<SignedULaurent>>>,
}

impl Ctx<'_> {
    /// `D(B_γ)` from a known `δ` with `T_{s_i}B_δ = a B_γ + Σ c_η B_η`, all `η` known and `a` a unit.
    fn solve_from(&self, g: usize, delta: usize, i: usize) -> Option<Column<SignedULaurent>> {
        let vd = self.v[delta].as_ref()?;
        let col = &self.ops.cols[i][delta];
        let inv = unit_inverse_dual(col.get(&g)?)?;
        let mut acc = self.ops.dual_side(i, self.ops.integral[i][delta], vd);
        for (&eta, c) in col {
            if eta != g {
                let ve = self.v[eta].as_ref()?;
                sub_into(&mut acc, &scale_col(&c.dual(), ve));
            }
        }
        Some(scale_col(&inv, &acc))
    }

    fn try_direct(&self, g: usize) -> Option<Column<SignedULaurent>> {
        let b = self.block;
        if b.below(g).is_empty() {
            return Some(BTreeMap::from([(g, SignedULaurent::u_half(-self.li2[g]))]));
        }
        use crate::block::CaseLabel::*;
        for i in 0..b.n_simple() {
            let e = &b.edges[g][i];
            let cands: &[usize] = match e.case {
                // complex descent: B_γ is T applied to the lower cross partner
                CMinus => &e.targets[1..2],
                CMinusNonint => &e.targets[0..1],
                // real type I: use the nci-I formula at either Cayley source
                RI => &e.targets[1..3],
                // non-integral real: transfer from the partner once it is known
                RNonint => &e.targets[0..1],
                _ => &[],
            };
            for &d in cands {
                if let Some(col) = self.solve_from(g, d, i) {
                    return Some(col);
                }
            }
        }
        None
    }
}

/// Compute the R-matrix by induction on length.
pub fn compute_duality(block: &Block) -> Result<RMatrix> {
    let ops = HeckeOps::new(block)?;
    let mops = MixedOps::new(block, &ops)?;
    let li2: Vec<i64> = (0..block.len()).map(|g| block.lengths(g).li2).collect();
    let mut ctx = Ctx { block, ops: mops, li2: li2.clone(), v: vec![None; block.len()] };
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for g in 0..block.len() {
        levels.entry(block.lengths(g).l2).or_default().push(g);
    }
    for (_, level) in levels {
        let mut pending = level;
        loop {
            let mut progress = false;
            let mut rest = Vec::new();
            for g in pending {
                match ctx.try_direct(g) {
                    Some(col) => {
                        ctx.v[g] = Some(col);
                        progress = true;
                    }
                    None => rest.push(g),
                }
            }
            pending = rest;
            if !progress || pending.is_empty() {
                break;
            }
        }
        if !pending.is_empty() {
            level_solve(&mut ctx, &pending)?;
        }
    }
    let v = ctx.v.into_iter().map(|c| c.expect("every column solved")).collect();
    let r = RMatrix::from_d_columns(v, li2);
    for g in 0..r.len() {
        if r.get(g, g) != SignedULaurent::one() {
            return Err(Error::Invariant(format!("R diagonal at {} is {}", block.params[g].id, r.get(g, g))));
        }
    }
    Ok(r)
}

/// Affine column: constant part plus variable-weighted parts.
#[derive(Clone, Default)]
struct Affine {
    constant: Column<SignedULaurent>,
    vars: BTreeMap<usize, Column<SignedULaurent>>,
}

impl Affine {
    fn add_scaled(&mut self, c: &SignedULaurent, other: &Affine) {
        for (&k, v) in &other.constant {
            sadd(&mut self.constant, k, c * v);
        }
        for (&x, col) in &other.vars {
            let e = self.vars.entry(x).or_default();
            for (&k, v) in col {
                sadd(e, k, c * v);
            }
        }
    }
}

type Row = (BTreeMap<usize, SignedULaurent>, SignedULaurent);

fn content_reduce(row: &mut Row) {
    let mut g = BigInt::zero();
    for c in row.0.values().chain(std::iter::once(&row.1)) {
        for (_, x) in c.terms() {
            g = g.gcd(x);
        }
    }
    if g > BigInt::one() {
        for c in row.0.values_mut().chain(std::iter::once(&mut row.1)) {
            *c = SignedULaurent::from_terms(c.terms().map(|(k, x)| (*k, x / &g)));
        }
    }
}

fn size(c: &SignedULaurent) -> usize {
    c.terms().map(|(_, x)| x.bits() as usize + 1).sum()
}

/// Solve for the columns in `pending` (one length level) jointly, from every
/// commutation equation whose terms are all known or pending.
fn level_solve(ctx: &mut Ctx<'_>, pending: &[usize]) -> Result<()> {
    let b = ctx.block;
    let pend: BTreeSet<usize> = pending.iter().copied().collect();
    let mut var_of = BTreeMap::new();
    let mut vars = Vec::new();
    let mut aff: BTreeMap<usize, Affine> = BTreeMap::new();
    for &z in pending {
        let mut a = Affine::default();
        a.constant.insert(z, SignedULaurent::u_half(-ctx.li2[z]));
        for &r in b.below(z) {
            var_of.insert((r, z), vars.len());
            a.vars.insert(vars.len(), BTreeMap::from([(r, SignedULaurent::u_half(-ctx.li2[z]))]));
            vars.push((r, z));
        }
        aff.insert(z, a);
    }
    let known = |g: usize| ctx.v[g].is_some() || pend.contains(&g);
    let affine_of = |g: usize| -> Affine {
        match &ctx.v[g] {
            Some(c) => Affine { constant: c.clone(), vars: BTreeMap::new() },
            None => aff[&g].clone(),
        }
    };
    let mut rows: Vec<Row> = Vec::new();
    for src in 0..b.len() {
        if !known(src) {
            continue;
        }
        for i in 0..b.n_simple() {
            let col = &ctx.ops.cols[i][src];
            if !col.keys().all(|&e| known(e)) || !(pend.contains(&src) || col.keys().any(|e| pend.contains(e))) {
                continue;
            }
            // Σ dual(τ) v_η − dual_side(v_src) = 0
            let mut eq = Affine::default();
            for (&eta, t) in col {
                eq.add_scaled(&t.dual(), &affine_of(eta));
            }
            let s = affine_of(src);
            let integral = ctx.ops.integral[i][src];
            let rhs = Affine {
                constant: ctx.ops.dual_side(i, integral, &s.constant),
                vars: s.vars.iter().map(|(&x, c)| (x, ctx.ops.dual_side(i, integral, c))).collect(),
            };
            eq.add_scaled(&-SignedULaurent::one(), &rhs);
            let mut by_row: BTreeMap<usize, Row> = BTreeMap::new();
            for (&k, c) in &eq.constant {
                by_row.entry(k).or_default().1 = -c;
            }
            for (&x, colx) in &eq.vars {
                for (&k, c) in colx {
                    by_row.entry(k).or_default().0.insert(x, c.clone());
                }
            }
            rows.extend(by_row.into_values().filter(|r| !r.0.is_empty() || !r.1.is_zero()));
        }
    }
    let sol = solve_ring(rows, vars.len()).map_err(|m| {
        let ids: Vec<&str> = pending.iter().map(|&g| b.params[g].id.as_str()).collect();
        Error::Invariant(format!("duality level solve for {ids:?}: {m}"))
    })?;
    for &z in pending {
        let mut a = aff[&z].constant.clone();
        for &r in b.below(z) {
            let x = &sol[var_of[&(r, z)]];
            sadd(&mut a, r, x.shift(-ctx.li2[z]));
        }
        ctx.v[z] = Some(a);
    }
    Ok(())
}

/// Fraction-free elimination over `Z[u^{±1/2}]` with exact back substitution.
fn solve_ring(mut rows: Vec<Row>, nvars: usize) -> std::result::Result<Vec<SignedULaurent>, String> {
    let mut pivots: Vec<(usize, Row)> = Vec::new();
    for x in 0..nvars {
        let best = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0.contains_key(&x))
            .min_by_key(|(_, r)| (size(&r.0[&x]), r.0.len()))
            .map(|(k, _)| k);
        let Some(p) = best else { return Err(format!("unknown #{x} is undetermined")) };
        let prow = rows.swap_remove(p);
        let pa = prow.0[&x].clone();
        for r in rows.iter_mut() {
            let Some(ra) = r.0.remove(&x) else { continue };
            for c in r.0.values_mut() {
                *c = &pa * c;
            }
            r.1 = &pa * &r.1;
            for (&y, c) in &prow.0 {
                if y == x {
                    continue;
                }
                let e = r.0.entry(y).or_default();
                *e = &*e - &(&ra * c);
            }
            r.0.retain(|_, c| !c.is_zero());
            r.1 = &r.1 - &(&ra * &prow.1);
            content_reduce(r);
        }
        rows.retain(|r| !r.0.is_empty() || !r.1.is_zero());
        pivots.push((x, prow));
    }
    if let Some(r) = rows.iter().find(|r| r.0.is_empty()) {
        return Err(format!("inconsistent equation 0 = {}", r.1));
    }
    let mut sol = vec![SignedULaurent::zero(); nvars];
    for (x, (a, rhs)) in pivots.iter().rev() {
        let mut acc = rhs.clone();
        for (&y, c) in a {
            if y != *x {
                acc = &acc - &(c * &sol[y]);
            }
        }
        sol[*x] = acc.div_exact(&a[x]).ok_or_else(|| format!("{acc} is not divisible by {}", a[x]))?;
    }
    // every remaining row must hold
    for (a, rhs) in &rows {
        let mut acc = SignedULaurent::zero();
        for (&y, c) in a {
            acc = &acc + &(c * &sol[y]);
        }
        if acc != *rhs {
            return Err("overdetermined system is inconsistent".into());
        }
    }
    Ok(sol)
}

/// One failed duality check.
#[derive(Clone, Debug, Serialize)]
pub struct DualityFailure {
    pub check: String,
    pub witness: String,
}

/// `D∘D = id`, commutation with every `T_{s_α}`, unit diagonal, triangular support
/// and the degree bound `deg R_{γ',γ} ≤ ℓ_I(γ) − ℓ_I(γ')`.
pub fn check_duality(block: &Block, r: &RMatrix) -> Result<Vec<DualityFailure>> {
    let ops = HeckeOps::new(block)?;
    let mops = MixedOps::new(block, &ops)?;
    let id = |g: usize| block.params[g].id.clone();
    let mut out = Vec::new();
    for g in 0..block.len() {
        let vg = r.d_column(g);
        let dd = r.apply(&vg);
        if dd != BTreeMap::from([(g, SignedULaurent::one())]) {
            out.push(DualityFailure { check: "involution".into(), witness: format!("D(D(B_{})) ≠ B_{}", id(g), id(g)) });
        }
        for i in 0..block.n_simple() {
            let lhs = r.apply(&mops.cols[i][g]);
            let rhs = mops.dual_side(i, mops.integral[i][g], &vg);
            if lhs != rhs {
                out.push(DualityFailure { check: "commutation".into(), witness: format!("root {i}, column {}", id(g)) });
            }
        }
        if r.get(g, g) != SignedULaurent::one() {
            out.push(DualityFailure { check: "unit diagonal".into(), witness: id(g) });
        }
        for (&h, c) in &r.cols[g] {
            if h == g {
                continue;
            }
            if !block.is_below(h, g) {
                out.push(DualityFailure { check: "triangularity".into(), witness: format!("R[{},{}] = {c}", id(h), id(g)) });
            }
            let (lo, hi) = c.half_range().unwrap_or((0, 0));
            if c.has_zeta() || lo < 0 || hi > r.li2[g] - r.li2[h] || c.terms().any(|(k, _)| k.0 % 2 != 0) {
                out.push(DualityFailure { check: "degree bound".into(), witness: format!("R[{},{}] = {c}", id(h), id(g)) });
            }
        }
    }
    Ok(out)
}

/// Serializable R-matrix entries, rows `γ'` and columns `γ`.
pub fn nonzero_entries(r: &RMatrix) -> Vec<(usize, usize, SignedULaurent)> {
    let mut out = Vec::new();
    for (g, col) in r.cols.iter().enumerate() {
        for (&h, c) in col {
            out.push((h, g, c.clone()));
        }
    }
    out.sort_by_key(|e| (e.0, e.1));
    out
}
