//! Closed-form conversions `LVM → LVM^m → LVM^h → LVM^c`, and the direct
//! `LVM → LVM^c` formula used as a cross-check.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::block::Block;
use crate::hecke::Column;
use crate::kl::Lvm;
use crate::poly::{QuarterLaurent, SignedULaurent};
use crate::{Error, Result};

/// Matrix over `Z[t1^{±1/4}, t2^{±1/4}]`, by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeMatrix {
    pub cols: Vec<Column<QuarterLaurent>>,
}

fn map_entries<A: Sync, B: Send>(
    cols: &[Column<A>],
    f: impl Fn(usize, usize, &A) -> Result<B> + Sync,
) -> Result<Vec<Column<B>>> {
    cols.par_iter()
        .enumerate()
        .map(|(g, col)| col.iter().map(|(&h, x)| Ok((h, f(h, g, x)?))).collect::<Result<BTreeMap<_, _>>>())
        .collect()
}

fn half_of(x: i64, what: &str, block: &Block, h: usize, g: usize) -> Result<i64> {
    if x % 2 != 0 {
        return Err(Error::Parity(format!(
            "{what} at ({}, {}) is not a multiple of 1/2",
            block.params[h].id, block.params[g].id
        )));
    }
    Ok(x / 2)
}

/// `LVM^m_{γ',γ} = u^{(ℓ_I(γ')−ℓ(γ')−(ℓ_I(γ)−ℓ(γ)))/2} LVM_{γ',γ}`.
pub fn mixed_from_lvm(block: &Block, lvm: &Lvm) -> Result<Lvm> {
    let e = |g: usize| block.lengths(g).li2 - block.lengths(g).l2;
    let cols = map_entries(&lvm.cols, |h, g, x| Ok(x.shift(half_of(e(h) - e(g), "mixed exponent", block, h, g)?)))?;
    Ok(Lvm { cols })
}

/// `LVM^h_{γ',γ}(t1,t2) = (t1/t2)^{(ℓ_H(γ')−ℓ_H(γ))/2} LVM^m_{γ',γ}(t1t2)`.
pub fn hodge_from_mixed(block: &Block, m: &Lvm) -> Result<HodgeMatrix> {
    let lh = |g: usize| block.lengths(g).lh2;
    let cols = map_entries(&m.cols, |h, g, x| {
        Ok(&QuarterLaurent::ratio_quarter(lh(h) - lh(g)) * &QuarterLaurent::from_mixed(x)?)
    })?;
    Ok(HodgeMatrix { cols })
}

/// `LVM^c_{γ',γ}(u,ζ) = u^{(ℓ(γ')−ℓ_I(γ')−(ℓ(γ)−ℓ_I(γ)))/2} LVM^h_{γ',γ}(u^{1/2}, ζu^{1/2})`.
pub fn signature_from_hodge(block: &Block, hm: &HodgeMatrix) -> Result<Lvm> {
    let f = |g: usize| block.lengths(g).l2 - block.lengths(g).li2;
    let cols = map_entries(&hm.cols, |h, g, x| {
        let s = x.to_signed().map_err(|e| {
            Error::Parity(format!("({}, {}): {e}", block.params[h].id, block.params[g].id))
        })?;
        Ok(s.shift(half_of(f(h) - f(g), "signature exponent", block, h, g)?))
    })?;
    Ok(Lvm { cols })
}

/// `LVM^c_{γ',γ}(u,ζ) = ζ^{(ℓ_o(γ)−ℓ_o(γ'))/2} LVM_{γ',γ}(ζu)`.
pub fn signature_direct(block: &Block, lvm: &Lvm) -> Result<Lvm> {
    let lo = |g: usize| block.lengths(g).lo2;
    let cols = map_entries(&lvm.cols, |h, g, x| {
        let d = lo(g) - lo(h);
        if d % 4 != 0 {
            return Err(Error::Parity(format!(
                "ζ exponent (ℓ_o({g}) − ℓ_o({h}))/2 = {d}/4 at ({}, {}) is not an integer",
                block.params[h].id,
                block.params[g].id,
                g = block.params[g].id,
                h = block.params[h].id
            )));
        }
        let twisted = x.twist_by_zeta()?;
        Ok(if (d / 4).rem_euclid(2) == 1 { &twisted * &SignedULaurent::zeta() } else { twisted })
    })?;
    Ok(Lvm { cols })
}

/// The full chain `LVM → LVM^m → LVM^h → LVM^c`.
pub fn signature_chain(block: &Block, lvm: &Lvm) -> Result<Lvm> {
    let m = mixed_from_lvm(block, lvm)?;
    let h = hodge_from_mixed(block, &m)?;
    signature_from_hodge(block, &h)
}

#[derive(Clone, Debug, Serialize)]
pub struct SignatureMismatch {
    pub row: String,
    pub col: String,
    pub chain: String,
    pub direct: String,
}

/// Entries where the chain and the direct formula disagree.
pub fn compare_signature(block: &Block, lvm: &Lvm) -> Result<Vec<SignatureMismatch>> {
    let a = signature_chain(block, lvm)?;
    let b = signature_direct(block, lvm)?;
    let mut out = Vec::new();
    for g in 0..block.len() {
        for h in 0..block.len() {
            let (x, y) = (a.get(h, g), b.get(h, g));
            if x != y {
                out.push(SignatureMismatch {
                    row: block.params[h].id.clone(),
                    col: block.params[g].id.clone(),
                    chain: x.to_string(),
                    direct: y.to_string(),
                });
            }
        }
    }
    Ok(out)
}

/// ζ-parity of each entry of a signature matrix: `Some(k)` if the entry is `ζ^k`
/// times a ζ-free polynomial.
pub fn zeta_parity(x: &SignedULaurent) -> Option<bool> {
    let mut it = x.terms().map(|(k, _)| k.1);
    let first = it.next()?;
    it.all(|z| z == first).then_some(first)
}
