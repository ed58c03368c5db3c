//! Sparse Laurent polynomials with exact integer coefficients.
//!
//! [`QuarterLaurent`] lives in `Z[t1^{±1/4}, t2^{±1/4}]`, exponents stored in
//! quarter units. [`SignedULaurent`] lives in `Z[u^{±1/2}, ζ]/(ζ²-1)`, exponents
//! stored in half units; with no ζ terms it doubles as `Z[u^{±1/2}]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

fn insert_term<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    *map.entry(key).or_insert_with(BigInt::zero) += c;
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, BigInt>) {
    map.retain(|_, c| !c.is_zero());
}

/// Format `num/den` for an exponent given in `den`-units.
fn fmt_exp(num: i64, den: i64) -> String {
    let g = num_integer::gcd(num.abs(), den).max(1);
    let (n, d) = (num / g, den / g);
    if d == 1 {
        format!("{n}")
    } else {
        format!("({n}/{d})")
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: Vec<(String, &BigInt)>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (mono, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// QuarterLaurent
// ---------------------------------------------------------------------------

/// Element of `Z[t1^{±1/4}, t2^{±1/4}]`. Keys are `(p4, q4)` for `t1^{p4/4} t2^{q4/4}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuarterLaurent {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl QuarterLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    /// `c * t1^{p4/4} t2^{q4/4}`.
    pub fn monomial(p4: i64, q4: i64, c: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, (p4, q4), c.into());
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), BigInt)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            insert_term(&mut terms, k, c);
        }
        prune(&mut terms);
        Self { terms }
    }

    pub fn t1() -> Self {
        Self::monomial(4, 0, 1)
    }

    pub fn t2() -> Self {
        Self::monomial(0, 4, 1)
    }

    /// `u = t1 t2`.
    pub fn u() -> Self {
        Self::monomial(4, 4, 1)
    }

    /// `u^{h/2}`.
    pub fn u_half(h: i64) -> Self {
        Self::monomial(2 * h, 2 * h, 1)
    }

    /// `(t1 t2^{-1})^{e/4}`.
    pub fn ratio_quarter(e: i64) -> Self {
        Self::monomial(e, -e, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p4: i64, q4: i64) -> BigInt {
        self.terms.get(&(p4, q4)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Image under `t1 -> t2^{-1}`, `t2 -> t1^{-1}`.
    pub fn dual(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(p, q), c)| ((-q, -p), c.clone())))
    }

    /// Image under `t1, t2 -> u^{1/2}`.
    pub fn to_mixed(&self) -> SignedULaurent {
        // t1^{p/4} t2^{q/4} -> u^{(p+q)/8}; half-units of u are (p+q)/4
        let mut out = BTreeMap::new();
        for (&(p, q), c) in &self.terms {
            let s = p + q;
            assert!(s % 4 == 0, "to_mixed: exponent {s}/8 of u is not a half-integer");
            insert_term(&mut out, (s / 4, false), c.clone());
        }
        prune(&mut out);
        SignedULaurent { terms: out }
    }

    /// Checked variant of [`to_mixed`](Self::to_mixed).
    pub fn try_to_mixed(&self) -> Result<SignedULaurent, Error> {
        for &(p, q) in self.terms.keys() {
            if (p + q) % 4 != 0 {
                return Err(Error::Parity(format!(
                    "t1^({p}/4) t2^({q}/4) does not land in Z[u^(±1/2)]"
                )));
            }
        }
        Ok(self.to_mixed())
    }

    /// `log2` of the max norm with `|t1| = |t2| = 2`, i.e. `max (p4+q4)/4`.
    pub fn norm_degree(&self) -> Result<BigRational, Error> {
        let m = self
            .terms
            .keys()
            .map(|&(p, q)| p + q)
            .max()
            .ok_or_else(|| Error::Domain("norm_degree of the zero polynomial".into()))?;
        Ok(BigRational::new(m.into(), 4.into()))
    }

    /// True iff every term is a power of `u^{1/2}` (equal `t1`, `t2` exponents, even quarters).
    pub fn is_in_u_half(&self) -> bool {
        self.terms.keys().all(|&(p, q)| p == q && p % 2 == 0)
    }

    /// Substitute `u = t1 t2` into an element of `Z[u^{±1/2}]`.
    pub fn from_mixed(m: &SignedULaurent) -> Result<Self, Error> {
        let mut out = BTreeMap::new();
        for (&(h, z), c) in &m.terms {
            if z {
                return Err(Error::Domain("from_mixed: ζ term in a ζ-free context".into()));
            }
            insert_term(&mut out, (2 * h, 2 * h), c.clone());
        }
        prune(&mut out);
        Ok(Self { terms: out })
    }

    /// Substitute `t1 -> u^{1/2}`, `t2 -> ζ u^{1/2}`. Fails if a `t2` exponent is not integral
    /// or a `u` exponent is not a half-integer.
    pub fn to_signed(&self) -> Result<SignedULaurent, Error> {
        let mut out = BTreeMap::new();
        for (&(p, q), c) in &self.terms {
            if q % 4 != 0 {
                return Err(Error::Parity(format!(
                    "ζ exponent {} is not an integer",
                    fmt_exp(q, 4)
                )));
            }
            if (p + q) % 4 != 0 {
                return Err(Error::Parity(format!(
                    "u exponent {} is not a half-integer",
                    fmt_exp(p + q, 8)
                )));
            }
            insert_term(&mut out, ((p + q) / 4, (q / 4).rem_euclid(2) == 1), c.clone());
        }
        prune(&mut out);
        Ok(SignedULaurent { terms: out })
    }
}

impl Add for &QuarterLaurent {
    type Output = QuarterLaurent;
    fn add(self, rhs: &QuarterLaurent) -> QuarterLaurent {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            insert_term(&mut terms, *k, c.clone());
        }
        prune(&mut terms);
        QuarterLaurent { terms }
    }
}

impl Sub for &QuarterLaurent {
    type Output = QuarterLaurent;
    fn sub(self, rhs: &QuarterLaurent) -> QuarterLaurent {
        self + &(-rhs)
    }
}

impl Neg for &QuarterLaurent {
    type Output = QuarterLaurent;
    fn neg(self) -> QuarterLaurent {
        QuarterLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QuarterLaurent {
    type Output = QuarterLaurent;
    fn mul(self, rhs: &QuarterLaurent) -> QuarterLaurent {
        let mut terms = BTreeMap::new();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &rhs.terms {
                insert_term(&mut terms, (p1 + p2, q1 + q2), c1 * c2);
            }
        }
        prune(&mut terms);
        QuarterLaurent { terms }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(QuarterLaurent, Add, add);
forward_owned!(QuarterLaurent, Sub, sub);
forward_owned!(QuarterLaurent, Mul, mul);

impl Neg for QuarterLaurent {
    type Output = QuarterLaurent;
    fn neg(self) -> QuarterLaurent {
        -&self
    }
}

impl fmt::Display for QuarterLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(&(p, q), c)| {
                let mut parts = Vec::new();
                if p != 0 {
                    parts.push(if p == 4 { "t1".to_string() } else { format!("t1^{}", fmt_exp(p, 4)) });
                }
                if q != 0 {
                    parts.push(if q == 4 { "t2".to_string() } else { format!("t2^{}", fmt_exp(q, 4)) });
                }
                (parts.join("*"), c)
            })
            .collect();
        fmt_terms(f, terms)
    }
}

impl fmt::Debug for QuarterLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuarterLaurent({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct QTerm {
    p4: i64,
    q4: i64,
    coeff: Coeff,
}

/// Integer coefficient serialized as a JSON number when it fits in `i64`, else a string.
#[derive(Clone, Debug)]
pub(crate) struct Coeff(pub BigInt);

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|x| Coeff(BigInt::from(x)))
                .ok_or_else(|| D::Error::custom("coefficient must be an integer")),
            serde_json::Value::String(s) => s
                .parse::<BigInt>()
                .map(Coeff)
                .map_err(|_| D::Error::custom("bad integer string")),
            _ => Err(D::Error::custom("coefficient must be an integer or string")),
        }
    }
}

impl Serialize for QuarterLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<QTerm> = self
            .terms
            .iter()
            .map(|(&(p4, q4), c)| QTerm { p4, q4, coeff: Coeff(c.clone()) })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuarterLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<QTerm>::deserialize(d)?;
        Ok(Self::from_terms(v.into_iter().map(|t| ((t.p4, t.q4), t.coeff.0))))
    }
}

// ---------------------------------------------------------------------------
// SignedULaurent
// ---------------------------------------------------------------------------

/// Element of `Z[u^{±1/2}, ζ]/(ζ²-1)`. Keys are `(h, z)` for `u^{h/2} ζ^z`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedULaurent {
    terms: BTreeMap<(i64, bool), BigInt>,
}

impl SignedULaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, false, 1)
    }

    /// `c * u^{h/2} ζ^z`.
    pub fn monomial(h: i64, z: bool, c: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, (h, z), c.into());
        Self { terms }
    }

    /// `u^{h/2}`.
    pub fn u_half(h: i64) -> Self {
        Self::monomial(h, false, 1)
    }

    pub fn u() -> Self {
        Self::u_half(2)
    }

    pub fn zeta() -> Self {
        Self::monomial(0, true, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, false, c)
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, bool), BigInt)>>(it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            insert_term(&mut terms, k, c);
        }
        prune(&mut terms);
        Self { terms }
    }

    /// Polynomial in `u` with integer exponents from a coefficient list starting at `u^0`.
    pub fn from_u_coeffs(cs: &[BigInt]) -> Self {
        Self::from_terms(cs.iter().enumerate().map(|(i, c)| ((2 * i as i64, false), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, bool), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, h: i64, z: bool) -> BigInt {
        self.terms.get(&(h, z)).cloned().unwrap_or_default()
    }

    pub fn has_zeta(&self) -> bool {
        self.terms.keys().any(|&(_, z)| z)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Multiply by `u^{h/2}`.
    pub fn shift(&self, h: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(e, z), c)| ((e + h, z), c.clone())).collect(),
        }
    }

    /// `u -> u^{-1}`, `ζ` fixed.
    pub fn dual(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(h, z), c)| ((-h, z), c.clone())))
    }

    /// `ζ -> 1`.
    pub fn at_zeta_one(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(h, _), c)| ((h, false), c.clone())))
    }

    /// `u -> ζ u` for integer powers of `u`; fails on odd half-exponents.
    pub fn twist_by_zeta(&self) -> Result<Self, Error> {
        let mut out = BTreeMap::new();
        for (&(h, z), c) in &self.terms {
            if h % 2 != 0 {
                return Err(Error::Parity(format!("u^{} cannot absorb ζ", fmt_exp(h, 2))));
            }
            let k = (h / 2).rem_euclid(2) == 1;
            insert_term(&mut out, (h, z ^ k), c.clone());
        }
        prune(&mut out);
        Ok(Self { terms: out })
    }

    /// Smallest and largest half-exponent present.
    pub fn half_range(&self) -> Option<(i64, i64)> {
        let min = self.terms.keys().map(|k| k.0).min()?;
        let max = self.terms.keys().map(|k| k.0).max()?;
        Some((min, max))
    }

    /// If this is `c u^{h/2}` with `c = ±1`, return `(h, c)`.
    pub fn as_unit_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(h, z), c) = self.terms.iter().next()?;
        if z {
            return None;
        }
        let c = c.to_i64()?;
        (c == 1 || c == -1).then_some((h, c))
    }

    /// Exact division in `Z[u^{±1/2}]` (ζ-free operands). Returns `None` when the
    /// quotient does not exist with integer coefficients.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || self.has_zeta() || d.has_zeta() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dmin, dmax) = d.half_range()?;
        let lead = d.coeff(dmax, false);
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((rmin, rmax)) = rem.half_range() {
            if rmax - rmin < dmax - dmin {
                return None;
            }
            let c = rem.coeff(rmax, false);
            if !(&c % &lead).is_zero() {
                return None;
            }
            let q = &c / &lead;
            let sh = rmax - dmax;
            insert_term(&mut quot, (sh, false), q.clone());
            rem = &rem - &d.shift(sh).scale(&q);
        }
        prune(&mut quot);
        Some(Self { terms: quot })
    }
}

impl Add for &SignedULaurent {
    type Output = SignedULaurent;
    fn add(self, rhs: &SignedULaurent) -> SignedULaurent {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            insert_term(&mut terms, *k, c.clone());
        }
        prune(&mut terms);
        SignedULaurent { terms }
    }
}

impl Sub for &SignedULaurent {
    type Output = SignedULaurent;
    fn sub(self, rhs: &SignedULaurent) -> SignedULaurent {
        self + &(-rhs)
    }
}

impl Neg for &SignedULaurent {
    type Output = SignedULaurent;
    fn neg(self) -> SignedULaurent {
        SignedULaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &SignedULaurent {
    type Output = SignedULaurent;
    fn mul(self, rhs: &SignedULaurent) -> SignedULaurent {
        let mut terms = BTreeMap::new();
        for (&(h1, z1), c1) in &self.terms {
            for (&(h2, z2), c2) in &rhs.terms {
                insert_term(&mut terms, (h1 + h2, z1 ^ z2), c1 * c2);
            }
        }
        prune(&mut terms);
        SignedULaurent { terms }
    }
}

forward_owned!(SignedULaurent, Add, add);
forward_owned!(SignedULaurent, Sub, sub);
forward_owned!(SignedULaurent, Mul, mul);

impl Neg for SignedULaurent {
    type Output = SignedULaurent;
    fn neg(self) -> SignedULaurent {
        -&self
    }
}

impl fmt::Display for SignedULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(&(h, z), c)| {
                let mut parts = Vec::new();
                if h != 0 {
                    parts.push(if h == 2 { "u".to_string() } else { format!("u^{}", fmt_exp(h, 2)) });
                }
                if z {
                    parts.push("z".to_string());
                }
                (parts.join("*"), c)
            })
            .collect();
        fmt_terms(f, terms)
    }
}

impl fmt::Debug for SignedULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedULaurent({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct STerm {
    u2: i64,
    zeta: u8,
    coeff: Coeff,
}

impl Serialize for SignedULaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<STerm> = self
            .terms
            .iter()
            .map(|(&(u2, z), c)| STerm { u2, zeta: z as u8, coeff: Coeff(c.clone()) })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedULaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<STerm>::deserialize(d)?;
        Ok(Self::from_terms(v.into_iter().map(|t| ((t.u2, t.zeta != 0), t.coeff.0))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_examples() {
        let t1 = QuarterLaurent::t1();
        assert!((&t1 + &(-&t1)).is_zero());
        let s = &QuarterLaurent::monomial(2, 0, 1) + &QuarterLaurent::monomial(0, 2, 1);
        assert_eq!(s.len(), 2);
        let u = QuarterLaurent::u();
        assert_eq!(&u.scale(&2.into()) + &u.scale(&3.into()), u.scale(&5.into()));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&QuarterLaurent::t1() * &QuarterLaurent::t2(), QuarterLaurent::u());
        let r = &QuarterLaurent::ratio_quarter(2) * &QuarterLaurent::ratio_quarter(-2);
        assert_eq!(r, QuarterLaurent::one());
        let one = QuarterLaurent::one();
        let u = QuarterLaurent::u();
        let lhs = &(&one - &u) * &(&one + &u);
        assert_eq!(lhs, &one - &(&u * &u));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(QuarterLaurent::t1().dual(), QuarterLaurent::monomial(0, -4, 1));
        assert_eq!(QuarterLaurent::u().dual(), QuarterLaurent::monomial(-4, -4, 1));
        let r = QuarterLaurent::ratio_quarter(2);
        assert_eq!(r.dual(), r);
    }

    #[test]
    fn to_mixed_examples() {
        assert_eq!(QuarterLaurent::t1().to_mixed(), SignedULaurent::u_half(1));
        assert_eq!(QuarterLaurent::ratio_quarter(4).to_mixed(), SignedULaurent::one());
        let s = &QuarterLaurent::t1() + &QuarterLaurent::t2();
        assert_eq!(s.to_mixed(), SignedULaurent::monomial(1, false, 2));
    }

    #[test]
    fn norm_degree_examples() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(QuarterLaurent::u().norm_degree().unwrap(), two);
        assert_eq!(
            QuarterLaurent::monomial(2, 0, 1).norm_degree().unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let p = &QuarterLaurent::one() + &QuarterLaurent::monomial(-4, -4, 1);
        assert!(p.norm_degree().unwrap().is_zero());
        assert!(QuarterLaurent::zero().norm_degree().is_err());
    }

    #[test]
    fn zeta_reduces() {
        let z = SignedULaurent::zeta();
        assert_eq!(&z * &z, SignedULaurent::one());
    }

    #[test]
    fn exact_division() {
        let one = SignedULaurent::one();
        let u = SignedULaurent::u();
        let a = &(&one + &u) * &(&u - &one);
        assert_eq!(a.div_exact(&(&one + &u)).unwrap(), &u - &one);
        assert!(u.div_exact(&(&one + &u)).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let p = &QuarterLaurent::t1() - &QuarterLaurent::monomial(1, -3, 7);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[{"p4":1,"q4":-3,"coeff":-7},{"p4":4,"q4":0,"coeff":1}]"#);
        let back: QuarterLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display() {
        let p = &QuarterLaurent::one() - &QuarterLaurent::u();
        assert_eq!(p.to_string(), "1 - t1*t2");
        assert_eq!(SignedULaurent::monomial(1, true, -2).to_string(), "-2*u^(1/2)*z");
    }
}
