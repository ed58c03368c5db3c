//! The F₂ sign-character model of twisted local systems.
//!
//! A parameter on an orbit with involution θ at twist λ is `(λ, mu2)` with
//! `mu2 ∈ X*⊗F₂`. On `ν(−1)` for `ν ≡ f + a (mod 2)`, `f ∈ X_*^θ`, `a ∈ X_*^{−θ}`,
//! the character takes the value `(−1)^{⟨λ,f⟩ + ⟨mu2,a⟩}`.

use num_traits::Zero;

use crate::lattice::{self, F2Span, IMat};
use crate::rootdata::Weight;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ThetaData {
    pub theta: IMat,
    /// basis of X_*^θ
    pub fixed: Vec<Vec<i64>>,
    /// basis of X_*^{−θ}
    pub anti: Vec<Vec<i64>>,
    span: F2Span,
    anti_bits: Vec<u64>,
    rank: usize,
}

impl ThetaData {
    pub fn new(theta: &IMat) -> Self {
        let fixed = lattice::eigenlattice(theta, 1);
        let anti = lattice::eigenlattice(theta, -1);
        let gens: Vec<u64> = fixed.iter().chain(&anti).map(|v| lattice::to_bits(v)).collect();
        let anti_bits = anti.iter().map(|v| lattice::to_bits(v)).collect();
        ThetaData { theta: theta.clone(), span: F2Span::new(&gens), fixed, anti, anti_bits, rank: theta.len() }
    }

    /// θ acting on a cocharacter.
    pub fn act_co(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|j| (0..self.rank).map(|i| self.theta[i][j] * v[i]).sum()).collect()
    }

    /// Twisted local systems exist at λ iff λ is integral on X_*^θ.
    pub fn admits(&self, lambda: &Weight) -> bool {
        self.fixed.iter().all(|f| lambda.pair(f).is_integer())
    }

    /// Well-definedness: `⟨mu2, (1−θ)eᵢ⟩ ≡ ⟨λ, (1+θ)eᵢ⟩ (mod 2)` for every basis vector.
    pub fn consistent(&self, lambda: &Weight, mu2: u64) -> bool {
        (0..self.rank).all(|i| {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            let te = self.act_co(&e);
            let minus = lattice::sub(&e, &te);
            let plus = lattice::add(&e, &te);
            let l = lambda.pair(&plus);
            if !l.is_integer() {
                return false;
            }
            let lp = l.to_integer() % 2u32 != Zero::zero();
            lattice::parity(mu2 & lattice::to_bits(&minus)) == lp
        })
    }

    /// Smallest representative of `mu2` modulo the annihilator of `X_*^{−θ} ⊗ F₂`.
    pub fn canonical(&self, mu2: u64) -> u64 {
        (0..1u64 << self.rank)
            .find(|&m| self.anti_bits.iter().all(|&a| !lattice::parity((m ^ mu2) & a)))
            .unwrap_or(mu2)
    }

    /// All sign characters at λ, as canonical representatives in increasing order.
    pub fn characters(&self, lambda: &Weight) -> Vec<u64> {
        if !self.admits(lambda) {
            return vec![];
        }
        let mut out: Vec<u64> = (0..1u64 << self.rank)
            .filter(|&m| self.consistent(lambda, m))
            .map(|m| self.canonical(m))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Value of the character on `ν(−1)`: `true` means −1. Errors if `ν(−1) ∉ H^θ`.
    pub fn eval(&self, lambda: &Weight, mu2: u64, nu: &[i64]) -> Result<bool> {
        let combo = self
            .span
            .solve(lattice::to_bits(nu))
            .ok_or_else(|| Error::Invariant(format!("{nu:?}(−1) is not fixed by θ")))?;
        let nf = self.fixed.len();
        let mut f = vec![0i64; self.rank];
        let mut a = vec![0i64; self.rank];
        for (k, g) in self.fixed.iter().chain(&self.anti).enumerate() {
            if (combo >> k) & 1 == 1 {
                let tgt = if k < nf { &mut f } else { &mut a };
                *tgt = lattice::add(tgt, g);
            }
        }
        let lf = lambda.pair(&f);
        if !lf.is_integer() {
            return Err(Error::Invariant(format!("λ is not integral on {f:?}")));
        }
        let lp = lf.to_integer() % 2u32 != Zero::zero();
        Ok(lp ^ lattice::parity(mu2 & lattice::to_bits(&a)))
    }

    /// Λ(m_α) = (−1)^{⟨mu2, α̌⟩} for a real root; `true` means −1.
    pub fn sign_real(mu2: u64, coroot: &[i64]) -> bool {
        lattice::parity(mu2 & lattice::to_bits(coroot))
    }
}

/// Generators of `{a ∈ X_*^{−θx} : ⟨α,a⟩ α̌ ∈ 2X_*}`, where the characters on the
/// real side and the imaginary side of a Cayley transform are compared.
pub fn cayley_lattice(x: &ThetaData, root: &[i64], coroot: &[i64]) -> Vec<Vec<i64>> {
    if lattice::to_bits(coroot) == 0 {
        return x.anti.clone();
    }
    let (even, odd): (Vec<_>, Vec<_>) = x.anti.iter().cloned().partition(|a| lattice::dot(root, a) % 2 == 0);
    let mut gens = even;
    if let Some((o, rest)) = odd.split_first() {
        gens.extend(rest.iter().map(|b| lattice::add(b, o)));
        gens.push(lattice::scale(2, o));
    }
    gens
}

/// Do `(λx, mu2x)` on x and `(λy, mu2y)` on y agree on the Cayley lattice?
pub fn cayley_compatible(
    x: &ThetaData,
    lx: &Weight,
    mx: u64,
    y: &ThetaData,
    ly: &Weight,
    my: u64,
    root: &[i64],
    coroot: &[i64],
) -> Result<bool> {
    for a in cayley_lattice(x, root, coroot) {
        if x.eval(lx, mx, &a)? != y.eval(ly, my, &a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn w(v: &[(i64, i64)]) -> Weight {
        Weight(v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    #[test]
    fn sl2_open_orbit_has_two_characters() {
        let t = ThetaData::new(&vec![vec![-1]]);
        assert_eq!(t.characters(&w(&[(0, 1)])), vec![0, 1]);
        assert_eq!(t.characters(&w(&[(1, 2)])), vec![0, 1]);
    }

    #[test]
    fn sl2_closed_orbit_needs_integral_twist() {
        let t = ThetaData::new(&vec![vec![1]]);
        assert_eq!(t.characters(&w(&[(0, 1)])), vec![0]);
        assert!(t.characters(&w(&[(1, 2)])).is_empty());
    }

    #[test]
    fn gl2_split_torus_has_four_characters() {
        let t = ThetaData::new(&vec![vec![-1, 0], vec![0, -1]]);
        assert_eq!(t.characters(&w(&[(0, 1), (0, 1)])).len(), 4);
    }

    #[test]
    fn swap_involution_has_one_character() {
        let t = ThetaData::new(&vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(t.characters(&w(&[(0, 1), (0, 1)])), vec![0]);
    }

    #[test]
    fn parity_compatibility_sl2() {
        let x = ThetaData::new(&vec![vec![-1]]);
        let y = ThetaData::new(&vec![vec![1]]);
        let z = w(&[(0, 1)]);
        assert!(cayley_compatible(&x, &z, 0, &y, &z, 0, &[2], &[1]).unwrap());
        assert!(!cayley_compatible(&x, &z, 1, &y, &z, 0, &[2], &[1]).unwrap());
        let one = w(&[(1, 1)]);
        let m1 = w(&[(-1, 1)]);
        assert!(cayley_compatible(&x, &one, 1, &y, &m1, 0, &[2], &[1]).unwrap());
    }
}
