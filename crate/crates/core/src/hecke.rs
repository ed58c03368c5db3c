//! Hecke operators `T_{s_α}` on the standard basis `[j_!γ]` and on the rescaled
//! basis `B_γ = u^{(ℓ_I−ℓ)/2}[j_!γ]`.
//!
//! These are the operators of the mixed Hodge module setting. They differ from
//! the classical Lusztig–Vogan operators by a cohomological shift, so formulas
//! from the two normalizations should not be mixed.
//!
//! Translation `t_{s_αλ−λ}` acts as the identity on parameter labels because
//! parameters are indexed by twist classes modulo X*.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::block::{Block, CaseLabel};
use crate::poly::{QuarterLaurent, SignedULaurent};
use crate::{Error, Result};

/// Sparse column: row parameter → coefficient.
pub type Column<R> = BTreeMap<usize, R>;

/// An element of the K-group in the `[j_!γ]` basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElement {
    pub twist: usize,
    pub coeffs: Column<QuarterLaurent>,
}

impl HeckeElement {
    pub fn basis(block: &Block, g: usize) -> Self {
        HeckeElement { twist: block.params[g].twist, coeffs: BTreeMap::from([(g, QuarterLaurent::one())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn add_to<R: Clone>(col: &mut Column<R>, k: usize, c: R, add: impl Fn(&R, &R) -> R, zero: impl Fn(&R) -> bool) {
    let v = match col.get(&k) {
        Some(old) => add(old, &c),
        None => c,
    };
    if zero(&v) {
        col.remove(&k);
    } else {
        col.insert(k, v);
    }
}

fn qadd(col: &mut Column<QuarterLaurent>, k: usize, c: QuarterLaurent) {
    add_to(col, k, c, |a, b| a + b, QuarterLaurent::is_zero);
}

pub(crate) fn sadd(col: &mut Column<SignedULaurent>, k: usize, c: SignedULaurent) {
    add_to(col, k, c, |a, b| a + b, SignedULaurent::is_zero);
}

/// Image `T_{s_i}[j_!γ]` from the edge record of `(γ, i)`.
pub fn t_column(block: &Block, g: usize, i: usize) -> Result<Column<QuarterLaurent>> {
    let e = block
        .edges
        .get(g)
        .and_then(|es| es.get(i))
        .ok_or_else(|| Error::Invariant(format!("missing edge record for ({}, {i})", block.params[g].id)))?;
    let tg = &e.targets;
    let one = QuarterLaurent::one;
    let u = QuarterLaurent::u;
    let c = QuarterLaurent::constant;
    let mut col = BTreeMap::new();
    match e.case {
        CaseLabel::Ci | CaseLabel::RNonparity => qadd(&mut col, g, -u()),
        CaseLabel::CPlus | CaseLabel::CPlusNonint => qadd(&mut col, tg[0], one()),
        CaseLabel::CMinus => {
            qadd(&mut col, g, one() - u());
            qadd(&mut col, tg[1], u());
        }
        CaseLabel::CMinusNonint => qadd(&mut col, tg[0], u()),
        CaseLabel::RI => {
            qadd(&mut col, g, c(2) - u());
            qadd(&mut col, tg[1], u() - one());
            qadd(&mut col, tg[2], u() - one());
        }
        CaseLabel::RII => {
            qadd(&mut col, g, one() - u());
            qadd(&mut col, tg[1], one());
            qadd(&mut col, tg[2], u() - one());
        }
        CaseLabel::NciI => {
            qadd(&mut col, tg[0], one());
            qadd(&mut col, tg[1], -one());
        }
        CaseLabel::NciII => {
            qadd(&mut col, tg[0], one());
            qadd(&mut col, tg[1], one());
            qadd(&mut col, tg[2], -one());
        }
        CaseLabel::RNonint => {
            let t = if block.hodge_sign_positive(g, i) { QuarterLaurent::t1() } else { QuarterLaurent::t2() };
            qadd(&mut col, tg[0], t);
        }
    }
    Ok(col)
}

/// All operator columns, `cols[i][γ] = T_{s_i}[j_!γ]`.
#[derive(Clone, Debug)]
pub struct HeckeOps {
    pub cols: Vec<Vec<Column<QuarterLaurent>>>,
    pub integral: Vec<Vec<bool>>,
}

impl HeckeOps {
    pub fn new(block: &Block) -> Result<Self> {
        let n = block.n_simple();
        let cols = (0..n)
            .map(|i| (0..block.len()).map(|g| t_column(block, g, i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let integral = (0..n).map(|i| (0..block.len()).map(|g| block.edges[g][i].case.is_integral()).collect()).collect();
        Ok(HeckeOps { cols, integral })
    }

    pub fn n_simple(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, i: usize, x: &Column<QuarterLaurent>) -> Column<QuarterLaurent> {
        let mut out = BTreeMap::new();
        for (&g, c) in x {
            for (&h, a) in &self.cols[i][g] {
                qadd(&mut out, h, c * a);
            }
        }
        out
    }

    /// Apply `T_{s_{w_k}} ⋯ T_{s_{w_1}}` (the word read right to left).
    pub fn apply_word(&self, word: &[usize], x: &Column<QuarterLaurent>) -> Column<QuarterLaurent> {
        word.iter().rev().fold(x.clone(), |acc, &i| self.apply(i, &acc))
    }
}

/// `T_{s_i}` applied to an element; checks the twist and linearity bookkeeping.
pub fn apply_t(block: &Block, i: usize, x: &HeckeElement) -> Result<HeckeElement> {
    if i >= block.n_simple() {
        return Err(Error::Domain(format!("{i} is not a simple root index")));
    }
    let twist = block.reflected_twist(x.twist, i)?;
    let mut out = BTreeMap::new();
    for (&g, c) in &x.coeffs {
        if block.params[g].twist != x.twist {
            return Err(Error::Invariant(format!("{} is not at twist {}", block.params[g].id, x.twist)));
        }
        for (h, a) in t_column(block, g, i)? {
            qadd(&mut out, h, c * &a);
        }
    }
    Ok(HeckeElement { twist, coeffs: out })
}

/// One failed relation check.
#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub param: String,
    pub difference: String,
}

fn col_diff(a: &Column<QuarterLaurent>, b: &Column<QuarterLaurent>) -> Column<QuarterLaurent> {
    let mut out = a.clone();
    for (&k, c) in b {
        qadd(&mut out, k, -c);
    }
    out
}

fn render(block: &Block, col: &Column<QuarterLaurent>) -> String {
    col.iter().map(|(&k, c)| format!("({c})[{}]", block.params[k].id)).collect::<Vec<_>>().join(" + ")
}

/// Quadratic relations: `T² = u + (1−u)T` for integral roots, `T² = u` otherwise.
pub fn check_quadratic(block: &Block, ops: &HeckeOps) -> Vec<RelationFailure> {
    let mut out = Vec::new();
    for i in 0..ops.n_simple() {
        for g in 0..block.len() {
            let x = BTreeMap::from([(g, QuarterLaurent::one())]);
            let tx = ops.apply(i, &x);
            let ttx = ops.apply(i, &tx);
            let mut want = BTreeMap::from([(g, QuarterLaurent::u())]);
            if ops.integral[i][g] {
                for (&k, c) in &tx {
                    qadd(&mut want, k, &(QuarterLaurent::one() - QuarterLaurent::u()) * c);
                }
            }
            let d = col_diff(&ttx, &want);
            if !d.is_empty() {
                out.push(RelationFailure {
                    relation: format!("quadratic s{i}"),
                    param: block.params[g].id.clone(),
                    difference: render(block, &d),
                });
            }
        }
    }
    out
}

/// Braid relations `T_iT_jT_i⋯ = T_jT_iT_j⋯` (m factors each side).
pub fn check_braid(block: &Block, ops: &HeckeOps) -> Result<Vec<RelationFailure>> {
    let mut out = Vec::new();
    let n = ops.n_simple();
    for i in 0..n {
        for j in i + 1..n {
            let m = block.root_datum.braid_order(i, j)?;
            let w1: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
            let w2: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
            for g in 0..block.len() {
                let x = BTreeMap::from([(g, QuarterLaurent::one())]);
                let d = col_diff(&ops.apply_word(&w1, &x), &ops.apply_word(&w2, &x));
                if !d.is_empty() {
                    out.push(RelationFailure {
                        relation: format!("braid s{i},s{j}"),
                        param: block.params[g].id.clone(),
                        difference: render(block, &d),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Quadratic plus braid checks.
pub fn check_relations(block: &Block) -> Result<Vec<RelationFailure>> {
    let ops = HeckeOps::new(block)?;
    let mut out = check_quadratic(block, &ops);
    out.extend(check_braid(block, &ops)?);
    Ok(out)
}

/// Operators in the rescaled basis `B_γ`, over `Z[u^{±1/2}]`.
#[derive(Clone, Debug)]
pub struct MixedOps {
    /// `cols[i][γ] = T_{s_i} B_γ`
    pub cols: Vec<Vec<Column<SignedULaurent>>>,
    pub integral: Vec<Vec<bool>>,
}

/// `e(γ) = ℓ_I(γ) − ℓ(γ)` in half-units.
pub fn normalization(block: &Block, g: usize) -> i64 {
    let l = block.lengths(g);
    l.li2 - l.l2
}

impl MixedOps {
    pub fn new(block: &Block, ops: &HeckeOps) -> Result<Self> {
        let mut cols = Vec::new();
        for i in 0..ops.n_simple() {
            let mut ci = Vec::new();
            for g in 0..block.len() {
                let mut col = BTreeMap::new();
                for (&h, a) in &ops.cols[i][g] {
                    let d = normalization(block, g) - normalization(block, h);
                    if d % 2 != 0 {
                        return Err(Error::Parity(format!(
                            "rescaling between {} and {} needs a quarter power of u",
                            block.params[g].id, block.params[h].id
                        )));
                    }
                    sadd(&mut col, h, a.try_to_mixed()?.shift(d / 2));
                }
                ci.push(col);
            }
            cols.push(ci);
        }
        Ok(MixedOps { cols, integral: ops.integral.clone() })
    }

    pub fn n_simple(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, i: usize, x: &Column<SignedULaurent>) -> Column<SignedULaurent> {
        let mut out = BTreeMap::new();
        for (&g, c) in x {
            for (&h, a) in &self.cols[i][g] {
                sadd(&mut out, h, c * a);
            }
        }
        out
    }

    /// `u^{-1}(T + (u−1))x` for integral `i`, `u^{-1}T x` otherwise; `integral` is
    /// the root's integrality at the twist of `x`.
    pub fn dual_side(&self, i: usize, integral: bool, x: &Column<SignedULaurent>) -> Column<SignedULaurent> {
        let mut out = self.apply(i, x);
        if integral {
            let c = &SignedULaurent::u() - &SignedULaurent::one();
            for (&k, v) in x {
                sadd(&mut out, k, &c * v);
            }
        }
        out.into_iter().map(|(k, v)| (k, v.shift(-2))).filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Whether every conjugated Hecke entry `(t1/t2)^{(ℓ_H(γ)−ℓ_H(η))/2} a_{η,γ}` lies in `Z[u^{±1/2}]`.
pub fn hodge_rescaling_failures(block: &Block, ops: &HeckeOps) -> Vec<RelationFailure> {
    let mut out = Vec::new();
    for i in 0..ops.n_simple() {
        for g in 0..block.len() {
            for (&h, a) in &ops.cols[i][g] {
                let e = block.lengths(g).lh2 - block.lengths(h).lh2;
                let c = &QuarterLaurent::ratio_quarter(e) * a;
                if !c.is_in_u_half() {
                    out.push(RelationFailure {
                        relation: format!("hodge rescaling s{i}"),
                        param: block.params[g].id.clone(),
                        difference: format!("entry at {} is {c}", block.params[h].id),
                    });
                }
            }
        }
    }
    out
}

/// Serializable operator dump: one sparse matrix per simple root.
#[derive(Serialize)]
pub struct HeckeDump {
    pub params: Vec<String>,
    pub operators: Vec<RootOperator>,
}

#[derive(Serialize)]
pub struct RootOperator {
    pub root: usize,
    pub entries: Vec<DumpEntry>,
}

#[derive(Serialize)]
pub struct DumpEntry {
    pub row: String,
    pub col: String,
    pub coeff: QuarterLaurent,
}

pub fn dump(block: &Block, ops: &HeckeOps) -> HeckeDump {
    HeckeDump {
        params: block.params.iter().map(|p| p.id.clone()).collect(),
        operators: ops
            .cols
            .iter()
            .enumerate()
            .map(|(i, cols)| RootOperator {
                root: i,
                entries: cols
                    .iter()
                    .enumerate()
                    .flat_map(|(g, col)| {
                        col.iter().map(move |(&h, c)| DumpEntry {
                            row: block.params[h].id.clone(),
                            col: block.params[g].id.clone(),
                            coeff: c.clone(),
                        })
                    })
                    .collect(),
            })
            .collect(),
    }
}
