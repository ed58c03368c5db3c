//! Based root data, rational weights, pairings and simple reflections.
//!
//! Characters live in `Z^rank` (coordinates in a fixed basis of X*), cocharacters in
//! the dual basis, so the pairing is the dot product.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::lattice::{self, IMat};
use crate::{Error, Result};

const MAX_ROOTS: usize = 4096;

/// Exact rational vector in X*(H) ⊗ Q.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<BigRational>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![BigRational::zero(); rank])
    }

    pub fn from_lattice(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Parse a comma- or space-separated list such as `1/2,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
        if parts.is_empty() {
            return Err(Error::Schema(format!("empty weight '{s}'")));
        }
        parts.into_iter().map(parse_rational).collect::<Result<Vec<_>>>().map(Weight)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_lattice(&self, v: &[i64]) -> Weight {
        Weight(self.0.iter().zip(v).map(|(a, &b)| a + BigRational::from_integer(b.into())).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Some(v)` if every coordinate is an integer.
    pub fn as_lattice(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer().try_into().ok()).flatten())
            .collect()
    }

    /// ⟨λ, ν⟩ for a cocharacter ν.
    pub fn pair(&self, coroot: &[i64]) -> BigRational {
        self.0
            .iter()
            .zip(coroot)
            .fold(BigRational::zero(), |acc, (a, &b)| acc + a * BigRational::from_integer(b.into()))
    }
}

pub fn parse_rational(p: &str) -> Result<BigRational> {
    let bad = || Error::Schema(format!("bad rational '{p}'"));
    if let Some((n, d)) = p.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(p.trim().parse().map_err(|_| bad())?))
    }
}

pub fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Floor toward −∞.
pub fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{self}")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(fmt_rational).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.into_iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_rational(&s).map_err(D::Error::custom),
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|i| BigRational::from_integer(i.into()))
                    .ok_or_else(|| D::Error::custom("weight entries must be integers or \"p/q\" strings")),
                _ => Err(D::Error::custom("weight entries must be integers or \"p/q\" strings")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Weight)
    }
}

/// A positive root with its coroot and its expansion in simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub coeffs: Vec<i64>,
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

#[derive(Serialize, Deserialize)]
struct RawDatum {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub name: Option<String>,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨αᵢ, α̌ⱼ⟩`
    pub cartan: IMat,
    positive: Vec<Root>,
}

impl PartialEq for RootDatum {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.rank == o.rank
            && self.simple_roots == o.simple_roots
            && self.simple_coroots == o.simple_coroots
    }
}

impl RootDatum {
    pub fn new(
        name: Option<String>,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if simple_roots.len() != simple_coroots.len() {
            return Err(Error::Schema("simple_roots and simple_coroots differ in length".into()));
        }
        if rank > 63 {
            return Err(Error::Schema("rank above 63 is not supported".into()));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(Error::Schema(format!("vector {v:?} does not have length {rank}")));
            }
        }
        let cartan: IMat = simple_roots
            .iter()
            .map(|a| simple_coroots.iter().map(|c| lattice::dot(a, c)).collect())
            .collect();
        for (i, row) in cartan.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::Schema(format!("⟨α{i}, α̌{i}⟩ = {} is not 2", row[i])));
            }
            for (j, &x) in row.iter().enumerate() {
                if i != j && (x > 0 || (x == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::Schema(format!("not a generalized Cartan matrix at ({i},{j})")));
                }
            }
        }
        let mut rd = RootDatum { name, rank, simple_roots, simple_coroots, cartan, positive: vec![] };
        rd.positive = rd.generate_positive()?;
        Ok(rd)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (roots, rank): (Vec<Vec<i64>>, usize) = match name {
            "SL2" => (vec![vec![2]], 1),
            "SL3" => (vec![vec![2, -1], vec![-1, 2]], 2),
            "Sp4" => (vec![vec![2, -1], vec![-2, 2]], 2),
            "SL2xSL2" => (vec![vec![2, 0], vec![0, 2]], 2),
            "SL4" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], 3),
            _ => return Err(Error::Schema(format!("unknown root datum '{name}'"))),
        };
        let coroots = lattice::identity(rank);
        RootDatum::new(Some(name.to_string()), rank, roots, coroots)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["SL2", "SL3", "Sp4", "SL2xSL2", "SL4"]
    }

    /// Direct sum of two root data.
    pub fn product(a: &RootDatum, b: &RootDatum, name: Option<String>) -> Result<Self> {
        let pad = |v: &Vec<i64>, left: usize, right: usize| {
            let mut out = vec![0; left];
            out.extend(v);
            out.extend(std::iter::repeat_n(0, right));
            out
        };
        let roots = a
            .simple_roots
            .iter()
            .map(|v| pad(v, 0, b.rank))
            .chain(b.simple_roots.iter().map(|v| pad(v, a.rank, 0)))
            .collect();
        let coroots = a
            .simple_coroots
            .iter()
            .map(|v| pad(v, 0, b.rank))
            .chain(b.simple_coroots.iter().map(|v| pad(v, a.rank, 0)))
            .collect();
        RootDatum::new(name, a.rank + b.rank, roots, coroots)
    }

    pub fn n_simple(&self) -> usize {
        self.simple_roots.len()
    }

    fn generate_positive(&self) -> Result<Vec<Root>> {
        let n = self.n_simple();
        let mut out: Vec<Root> = (0..n)
            .map(|i| Root {
                coeffs: (0..n).map(|j| (i == j) as i64).collect(),
                root: self.simple_roots[i].clone(),
                coroot: self.simple_coroots[i].clone(),
            })
            .collect();
        let mut k = 0;
        while k < out.len() {
            for j in 0..n {
                let r = &out[k];
                let c = lattice::dot(&r.root, &self.simple_coroots[j]);
                let coeffs: Vec<i64> = r
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if i == j { x - c } else { x })
                    .collect();
                if coeffs.iter().any(|&x| x < 0) || coeffs.iter().all(|&x| x == 0) {
                    continue;
                }
                if out.iter().any(|o| o.coeffs == coeffs) {
                    continue;
                }
                let root = lattice::sub(&r.root, &lattice::scale(c, &self.simple_roots[j]));
                let d = lattice::dot(&self.simple_roots[j], &r.coroot);
                let coroot = lattice::sub(&r.coroot, &lattice::scale(d, &self.simple_coroots[j]));
                out.push(Root { coeffs, root, coroot });
                if out.len() > MAX_ROOTS {
                    return Err(Error::Schema("positive-root closure does not terminate".into()));
                }
            }
            k += 1;
        }
        out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs)));
        Ok(out)
    }

    /// Φ₊ in height-then-lex order.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Index of the positive root `±v` and the sign.
    pub fn find_root(&self, v: &[i64]) -> Option<(usize, i64)> {
        for (i, r) in self.positive.iter().enumerate() {
            if r.root == v {
                return Some((i, 1));
            }
            if r.root.iter().zip(v).all(|(a, b)| *a == -b) {
                return Some((i, -1));
            }
        }
        None
    }

    /// Index in Φ₊ of simple root `i`.
    pub fn simple_index(&self, i: usize) -> usize {
        self.positive.iter().position(|r| r.coeffs.iter().sum::<i64>() == 1 && r.coeffs[i] == 1).unwrap()
    }

    pub fn pair(&self, lambda: &Weight, coroot: &[i64]) -> Result<BigRational> {
        if lambda.len() != self.rank || coroot.len() != self.rank {
            return Err(Error::Domain(format!(
                "dimension mismatch: weight {} / coroot {} vs rank {}",
                lambda.len(),
                coroot.len(),
                self.rank
            )));
        }
        Ok(lambda.pair(coroot))
    }

    /// Whether the positive root `idx` is λ-integral.
    pub fn is_integral(&self, lambda: &Weight, idx: usize) -> Result<bool> {
        let r = self
            .positive
            .get(idx)
            .ok_or_else(|| Error::Domain(format!("root index {idx} out of range")))?;
        Ok(self.pair(lambda, &r.coroot)?.is_integer())
    }

    /// `s_i λ = λ − ⟨λ, α̌ᵢ⟩ αᵢ`.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Result<Weight> {
        if i >= self.n_simple() {
            return Err(Error::Domain(format!("{i} is not a simple root index")));
        }
        let c = self.pair(lambda, &self.simple_coroots[i])?;
        Ok(Weight(
            lambda
                .0
                .iter()
                .zip(&self.simple_roots[i])
                .map(|(x, &a)| x - &c * BigRational::from_integer(a.into()))
                .collect(),
        ))
    }

    pub fn reflect_lattice(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let c = lattice::dot(x, &self.simple_coroots[i]);
        lattice::sub(x, &lattice::scale(c, &self.simple_roots[i]))
    }

    pub fn reflect_colattice(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let c = lattice::dot(&self.simple_roots[i], v);
        lattice::sub(v, &lattice::scale(c, &self.simple_coroots[i]))
    }

    /// Matrix of `s_i` on X*.
    pub fn reflection_matrix(&self, i: usize) -> IMat {
        let (a, c) = (&self.simple_roots[i], &self.simple_coroots[i]);
        (0..self.rank)
            .map(|r| (0..self.rank).map(|k| (r == k) as i64 - a[r] * c[k]).collect())
            .collect()
    }

    /// Half the sum of positive roots.
    pub fn rho(&self) -> Weight {
        let two = BigRational::from_integer(2.into());
        let mut w = Weight::zero(self.rank);
        for r in &self.positive {
            w = w.add_lattice(&r.root);
        }
        Weight(w.0.into_iter().map(|x| x / &two).collect())
    }

    /// Order of `sᵢsⱼ` for `i ≠ j`.
    pub fn braid_order(&self, i: usize, j: usize) -> Result<usize> {
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => Ok(2),
            1 => Ok(3),
            2 => Ok(4),
            3 => Ok(6),
            x => Err(Error::Domain(format!("infinite order for Cartan product {x}"))),
        }
    }
}

impl Serialize for RootDatum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawDatum {
            name: self.name.clone(),
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RawDatum::deserialize(d)?;
        RootDatum::new(r.name, r.rank, r.simple_roots, r.simple_coroots).map_err(D::Error::custom)
    }
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), 2.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pairing_examples() {
        let sl2 = RootDatum::builtin("SL2").unwrap();
        let a = Weight::from_lattice(&sl2.simple_roots[0]);
        assert_eq!(sl2.pair(&a, &sl2.simple_coroots[0]).unwrap(), q(2, 1));
        let l = Weight(vec![q(2, 5)]);
        assert_eq!(sl2.pair(&l, &[1]).unwrap(), q(2, 5));
        let sl3 = RootDatum::builtin("SL3").unwrap();
        assert_eq!(sl3.pair(&sl3.rho(), &sl3.simple_coroots[0]).unwrap(), q(1, 1));
        assert!(sl3.pair(&sl3.rho(), &[1]).is_err());
    }

    #[test]
    fn integrality_examples() {
        let sl2 = RootDatum::builtin("SL2").unwrap();
        assert!(!sl2.is_integral(&Weight(vec![q(1, 2)]), 0).unwrap());
        let sl3 = RootDatum::builtin("SL3").unwrap();
        let l = Weight(vec![q(1, 2), q(0, 1)]);
        let a2 = sl3.simple_index(1);
        assert!(sl3.is_integral(&l, a2).unwrap());
        for i in 0..3 {
            assert!(sl3.is_integral(&Weight::zero(2), i).unwrap());
        }
    }

    #[test]
    fn reflect_examples() {
        for name in RootDatum::builtin_names() {
            let rd = RootDatum::builtin(name).unwrap();
            for i in 0..rd.n_simple() {
                let rho = rd.rho();
                let expect = rho.sub(&Weight::from_lattice(&rd.simple_roots[i]));
                assert_eq!(rd.reflect(i, &rho).unwrap(), expect);
                let z = Weight::zero(rd.rank);
                assert_eq!(rd.reflect(i, &z).unwrap(), z);
            }
        }
    }

    #[test]
    fn root_counts() {
        let counts = [("SL2", 1), ("SL3", 3), ("Sp4", 4), ("SL2xSL2", 2), ("SL4", 6)];
        for (n, c) in counts {
            assert_eq!(RootDatum::builtin(n).unwrap().positive_roots().len(), c, "{n}");
        }
        let sl3 = RootDatum::builtin("SL3").unwrap();
        let heights: Vec<i64> = sl3.positive_roots().iter().map(Root::height).collect();
        assert_eq!(heights, vec![1, 1, 2]);
    }

    #[test]
    fn coroots_are_dual() {
        for name in RootDatum::builtin_names() {
            let rd = RootDatum::builtin(name).unwrap();
            for r in rd.positive_roots() {
                assert_eq!(lattice::dot(&r.root, &r.coroot), 2);
            }
        }
    }

    #[test]
    fn reflection_permutes_other_positive_roots() {
        for name in RootDatum::builtin_names() {
            let rd = RootDatum::builtin(name).unwrap();
            for i in 0..rd.n_simple() {
                let si = rd.simple_index(i);
                for (k, r) in rd.positive_roots().iter().enumerate() {
                    let (j, s) = rd.find_root(&rd.reflect_lattice(i, &r.root)).unwrap();
                    if k == si {
                        assert_eq!((j, s), (si, -1));
                    } else {
                        assert_eq!(s, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn floor_is_toward_minus_infinity() {
        assert_eq!(floor(&q(-1, 2)), BigInt::from(-1));
        assert_eq!(floor(&q(3, 2)), BigInt::from(1));
    }

    #[test]
    fn rejects_bad_cartan() {
        assert!(RootDatum::new(None, 1, vec![vec![3]], vec![vec![1]]).is_err());
    }
}
