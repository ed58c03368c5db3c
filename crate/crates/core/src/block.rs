//! Blocks of twisted local systems: orbits, parameters, per-root edge records,
//! lengths, closure order and the versioned JSON file format.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::lattice::{self, IMat};
use crate::model::{self, ThetaData};
use crate::rootdata::{floor, RootDatum, Weight};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "ci")]
    Ci,
    #[serde(rename = "C+")]
    CPlus,
    #[serde(rename = "C-")]
    CMinus,
    #[serde(rename = "r-I")]
    RI,
    #[serde(rename = "r-II")]
    RII,
    #[serde(rename = "r-nonparity")]
    RNonparity,
    #[serde(rename = "nci-I")]
    NciI,
    #[serde(rename = "nci-II")]
    NciII,
    #[serde(rename = "r-nonint")]
    RNonint,
    #[serde(rename = "C+-nonint")]
    CPlusNonint,
    #[serde(rename = "C--nonint")]
    CMinusNonint,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 11] = [
        CaseLabel::Ci,
        CaseLabel::CPlus,
        CaseLabel::CMinus,
        CaseLabel::RI,
        CaseLabel::RII,
        CaseLabel::RNonparity,
        CaseLabel::NciI,
        CaseLabel::NciII,
        CaseLabel::RNonint,
        CaseLabel::CPlusNonint,
        CaseLabel::CMinusNonint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Ci => "ci",
            CaseLabel::CPlus => "C+",
            CaseLabel::CMinus => "C-",
            CaseLabel::RI => "r-I",
            CaseLabel::RII => "r-II",
            CaseLabel::RNonparity => "r-nonparity",
            CaseLabel::NciI => "nci-I",
            CaseLabel::NciII => "nci-II",
            CaseLabel::RNonint => "r-nonint",
            CaseLabel::CPlusNonint => "C+-nonint",
            CaseLabel::CMinusNonint => "C--nonint",
        }
    }

    /// Number of targets in an edge record with this label.
    pub fn arity(self) -> usize {
        match self {
            CaseLabel::Ci | CaseLabel::CPlus | CaseLabel::RNonparity => 1,
            CaseLabel::RNonint | CaseLabel::CPlusNonint | CaseLabel::CMinusNonint => 1,
            CaseLabel::CMinus | CaseLabel::NciI => 2,
            CaseLabel::RI | CaseLabel::RII | CaseLabel::NciII => 3,
        }
    }

    pub fn is_integral(self) -> bool {
        !matches!(self, CaseLabel::RNonint | CaseLabel::CPlusNonint | CaseLabel::CMinusNonint)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootType {
    Real,
    Compact,
    Noncompact,
    /// complex with θα ∈ Φ₊
    ComplexPos,
    /// complex with θα ∈ Φ₋
    ComplexNeg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub id: String,
    pub theta: IMat,
    /// imaginary positive root index → noncompact?
    pub noncompact: BTreeMap<usize, bool>,
    /// per simple root: cross partner, Cayley image, or Cayley sources
    pub links: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub id: String,
    pub orbit: usize,
    pub twist: usize,
    pub mu2: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub case: CaseLabel,
    pub targets: Vec<usize>,
}

/// `(ℓ, ℓ_I, ℓ_o, ℓ_H)` stored in half-units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
pub struct Lengths {
    pub l2: i64,
    pub li2: i64,
    pub lo2: i64,
    pub lh2: i64,
}

fn half_units(x: i64) -> BigRational {
    BigRational::new(x.into(), 2.into())
}

pub fn fmt_half(x: i64) -> String {
    if x % 2 == 0 {
        format!("{}", x / 2)
    } else {
        format!("{x}/2")
    }
}

fn parse_half(s: &str) -> Result<i64> {
    let r = crate::rootdata::parse_rational(s)?;
    let d = r * BigRational::from_integer(2.into());
    if !d.is_integer() {
        return Err(Error::Schema(format!("'{s}' is not a half-integer")));
    }
    d.to_integer().try_into().map_err(|_| Error::Schema(format!("'{s}' is out of range")))
}

impl Lengths {
    pub fn ell(&self) -> BigRational {
        half_units(self.l2)
    }
    pub fn ell_i(&self) -> BigRational {
        half_units(self.li2)
    }
    pub fn ell_o(&self) -> BigRational {
        half_units(self.lo2)
    }
    pub fn ell_h(&self) -> BigRational {
        half_units(self.lh2)
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub root_datum: RootDatum,
    pub base_lambda: Weight,
    pub dim_h: usize,
    pub twists: Vec<Weight>,
    pub orbits: Vec<Orbit>,
    pub params: Vec<Parameter>,
    /// `edges[γ][i]` for simple root `i`
    pub edges: Vec<Vec<Edge>>,
    theta_data: Vec<ThetaData>,
    root_types: Vec<Vec<RootType>>,
    lengths: Vec<Lengths>,
    stored_lengths: Vec<Option<Lengths>>,
    orbit_closure: Vec<BTreeSet<usize>>,
    below: Vec<BTreeSet<usize>>,
    by_orbit_twist: HashMap<(usize, usize), Vec<usize>>,
    index: HashMap<(usize, usize, u64), usize>,
}

impl PartialEq for Block {
    fn eq(&self, o: &Self) -> bool {
        self.root_datum == o.root_datum
            && self.base_lambda == o.base_lambda
            && self.dim_h == o.dim_h
            && self.twists == o.twists
            && self.orbits == o.orbits
            && self.params == o.params
            && self.edges == o.edges
    }
}

fn root_types_for(rd: &RootDatum, orbit: &Orbit) -> Result<Vec<RootType>> {
    let mut out = Vec::new();
    for (i, r) in rd.positive_roots().iter().enumerate() {
        let img = lattice::mat_vec(&orbit.theta, &r.root);
        let (j, s) = rd.find_root(&img).ok_or_else(|| {
            Error::Validation(vec![format!("orbit {}: θ does not map root {:?} to a root", orbit.id, r.coeffs)])
        })?;
        let t = if j == i {
            if s < 0 {
                RootType::Real
            } else {
                match orbit.noncompact.get(&i) {
                    Some(true) => RootType::Noncompact,
                    Some(false) => RootType::Compact,
                    None => {
                        return Err(Error::Validation(vec![format!(
                            "orbit {}: grading missing for imaginary root {:?}",
                            orbit.id, r.coeffs
                        )]))
                    }
                }
            }
        } else if s > 0 {
            RootType::ComplexPos
        } else {
            RootType::ComplexNeg
        };
        out.push(t);
    }
    Ok(out)
}

impl Block {
    /// Build caches around raw block data. Fails only when derived data cannot be computed.
    pub fn assemble(
        root_datum: RootDatum,
        base_lambda: Weight,
        dim_h: usize,
        twists: Vec<Weight>,
        orbits: Vec<Orbit>,
        params: Vec<Parameter>,
        edges: Vec<Vec<Edge>>,
    ) -> Result<Block> {
        let rank = root_datum.rank;
        let n = root_datum.n_simple();
        if base_lambda.len() != rank || twists.iter().any(|t| t.len() != rank) {
            return Err(Error::Schema(format!("weights must have {rank} coordinates")));
        }
        for o in &orbits {
            if o.theta.len() != rank || o.theta.iter().any(|r| r.len() != rank) {
                return Err(Error::Schema(format!("orbit {}: theta must be {rank}×{rank}", o.id)));
            }
            if o.links.len() != n || o.links.iter().flatten().any(|&l| l >= orbits.len()) {
                return Err(Error::Schema(format!("orbit {}: links must list {n} entries of orbit ids", o.id)));
            }
        }
        for p in &params {
            if p.orbit >= orbits.len() || p.twist >= twists.len() || p.mu2 >> rank != 0 {
                return Err(Error::Schema(format!("parameter {}: bad orbit, twist or mu2", p.id)));
            }
        }
        let theta_data = orbits.iter().map(|o| ThetaData::new(&o.theta)).collect();
        let root_types = orbits.iter().map(|o| root_types_for(&root_datum, o)).collect::<Result<Vec<_>>>()?;
        let mut index = HashMap::new();
        let mut by_orbit_twist: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, p) in params.iter().enumerate() {
            if index.insert((p.orbit, p.twist, p.mu2), k).is_some() {
                return Err(Error::Schema(format!("duplicate parameter {}", p.id)));
            }
            by_orbit_twist.entry((p.orbit, p.twist)).or_default().push(k);
        }
        let np = params.len();
        let mut b = Block {
            root_datum,
            base_lambda,
            dim_h,
            twists,
            orbits,
            params,
            edges,
            theta_data,
            root_types,
            lengths: vec![],
            stored_lengths: vec![None; np],
            orbit_closure: vec![],
            below: vec![],
            by_orbit_twist,
            index,
        };
        b.lengths = (0..np).map(|p| b.compute_lengths(p)).collect::<Result<Vec<_>>>()?;
        b.orbit_closure = b.compute_orbit_closure()?;
        b.below = (0..np)
            .map(|g| {
                let p = &b.params[g];
                b.orbit_closure[p.orbit]
                    .iter()
                    .filter(|&&o| o != p.orbit)
                    .flat_map(|&o| b.by_orbit_twist.get(&(o, p.twist)).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        Ok(b)
    }

    /// Build a block from an orbit table by enumerating twists, sign characters and edges.
    pub fn generate(root_datum: RootDatum, base_lambda: Weight, orbits: Vec<Orbit>) -> Result<Block> {
        let twists = weyl_twists(&root_datum, &base_lambda)?;
        let dim_h = root_datum.rank;
        let mut params = Vec::new();
        for (k, t) in twists.iter().enumerate() {
            for (o, orbit) in orbits.iter().enumerate() {
                for m in ThetaData::new(&orbit.theta).characters(t) {
                    let id = format!("{}@{}/{}", orbit.id, k, m);
                    params.push(Parameter { id, orbit: o, twist: k, mu2: m });
                }
            }
        }
        let mut b = Block::assemble(root_datum, base_lambda, dim_h, twists, orbits, params, vec![])?;
        let n = b.root_datum.n_simple();
        b.edges = (0..b.params.len())
            .map(|g| (0..n).map(|i| b.derive_edge(g, i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        b.stored_lengths = b.lengths.iter().copied().map(Some).collect();
        Ok(b)
    }

    // -- queries -----------------------------------------------------------

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn n_simple(&self) -> usize {
        self.root_datum.n_simple()
    }

    pub fn lengths(&self, g: usize) -> Lengths {
        self.lengths[g]
    }

    pub fn all_lengths(&self) -> &[Lengths] {
        &self.lengths
    }

    pub fn root_type(&self, orbit: usize, root: usize) -> RootType {
        self.root_types[orbit][root]
    }

    pub fn simple_root_type(&self, orbit: usize, i: usize) -> RootType {
        self.root_types[orbit][self.root_datum.simple_index(i)]
    }

    pub fn theta_data(&self, orbit: usize) -> &ThetaData {
        &self.theta_data[orbit]
    }

    pub fn lambda(&self, g: usize) -> &Weight {
        &self.twists[self.params[g].twist]
    }

    /// Strict lower set of γ in the closure order.
    pub fn below(&self, g: usize) -> &BTreeSet<usize> {
        &self.below[g]
    }

    pub fn is_below(&self, lower: usize, upper: usize) -> bool {
        self.below[upper].contains(&lower)
    }

    pub fn orbit_closure(&self, o: usize) -> &BTreeSet<usize> {
        &self.orbit_closure[o]
    }

    pub fn param_by_id(&self, id: &str) -> Option<usize> {
        self.params.iter().position(|p| p.id == id)
    }

    pub fn params_at(&self, orbit: usize, twist: usize) -> &[usize] {
        self.by_orbit_twist.get(&(orbit, twist)).map_or(&[], |v| v.as_slice())
    }

    /// Parameters sorted by `(ℓ, index)`.
    pub fn by_length(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&g| (self.lengths[g].l2, g));
        v
    }

    /// Twist index of `s_i λ_k`.
    pub fn reflected_twist(&self, k: usize, i: usize) -> Result<usize> {
        let w = self.root_datum.reflect(i, &self.twists[k])?;
        Ok(self.class_of(&w).ok_or_else(|| Error::Invariant(format!("twist {w} missing from block")))?.0)
    }

    /// `(k, ν)` with `w = λ_k + ν`, `ν ∈ X*`.
    pub fn class_of(&self, w: &Weight) -> Option<(usize, Vec<i64>)> {
        self.twists.iter().enumerate().find_map(|(k, t)| w.sub(t).as_lattice().map(|nu| (k, nu)))
    }

    /// Whether the simple root `i` is integral at γ's twist.
    pub fn integral(&self, g: usize, i: usize) -> bool {
        self.lambda(g).pair(&self.root_datum.simple_coroots[i]).is_integer()
    }

    /// `(−1)^{⌊⟨λ,α̌ᵢ⟩⌋} Λ(m_αᵢ) = 1` for a real simple root.
    pub fn hodge_sign_positive(&self, g: usize, i: usize) -> bool {
        let p = &self.params[g];
        let c = &self.root_datum.simple_coroots[i];
        let fl = floor(&self.lambda(g).pair(c));
        fl.is_odd() == ThetaData::sign_real(p.mu2, c)
    }

    // -- lengths -------------------------------------------------------------

    fn compute_lengths(&self, g: usize) -> Result<Lengths> {
        let p = &self.params[g];
        let rd = &self.root_datum;
        let lambda = &self.twists[p.twist];
        let types = &self.root_types[p.orbit];
        let roots = rd.positive_roots();
        let mut rho_r = Weight::zero(rd.rank);
        for (r, t) in roots.iter().zip(types) {
            if *t == RootType::Real {
                rho_r = rho_r.add_lattice(&r.root);
            }
        }
        let half = crate::rootdata::half();
        let shifted = Weight(lambda.0.iter().zip(&rho_r.0).map(|(l, r)| l + r * &half).collect());
        let n = roots.len() as i64;
        let mut l = Lengths { l2: 2 * n, ..Default::default() };
        for (r, t) in roots.iter().zip(types) {
            let integral = lambda.pair(&r.coroot).is_integer();
            if integral {
                l.li2 += 2;
            }
            match t {
                RootType::Noncompact => {
                    l.l2 -= 2;
                    l.li2 -= 2;
                }
                RootType::ComplexPos => {
                    l.l2 -= 1;
                    if integral {
                        l.li2 -= 1;
                    }
                }
                RootType::ComplexNeg if !integral => l.lo2 += 1,
                RootType::Real if !integral => {
                    let fl: BigInt = floor(&shifted.pair(&r.coroot));
                    let agree = fl.is_odd() == ThetaData::sign_real(p.mu2, &r.coroot);
                    if agree {
                        l.lo2 += 2;
                        l.lh2 += 1;
                    } else {
                        l.lh2 -= 1;
                    }
                }
                _ => {}
            }
        }
        Ok(l)
    }

    /// Number of λ-non-integral positive roots at twist `k`.
    pub fn nonintegral_count(&self, k: usize) -> i64 {
        let lambda = &self.twists[k];
        self.root_datum.positive_roots().iter().filter(|r| !lambda.pair(&r.coroot).is_integer()).count() as i64
    }

    /// `ℓ_H = ℓ_o + ℓ_I − ℓ + ½#{non-integral positive roots}`.
    pub fn hodge_identity_holds(&self, g: usize) -> bool {
        let l = self.lengths[g];
        l.lh2 == l.lo2 + l.li2 - l.l2 + self.nonintegral_count(self.params[g].twist)
    }

    /// Length ℓ(γ); errors on a half-integer value.
    pub fn length(&self, g: usize) -> Result<i64> {
        let l = self.lengths[g].l2;
        if l % 2 != 0 {
            return Err(Error::Invariant(format!("parameter {} has half-integral length", self.params[g].id)));
        }
        Ok(l / 2)
    }

    // -- closure order -------------------------------------------------------

    fn orbit_l2(&self, o: usize) -> i64 {
        let types = &self.root_types[o];
        2 * types.len() as i64
            - 2 * types.iter().filter(|t| **t == RootType::Noncompact).count() as i64
            - types.iter().filter(|t| **t == RootType::ComplexPos).count() as i64
    }

    fn compute_orbit_closure(&self) -> Result<Vec<BTreeSet<usize>>> {
        let no = self.orbits.len();
        let mut order: Vec<usize> = (0..no).collect();
        order.sort_by_key(|&o| (self.orbit_l2(o), o));
        let mut closure: Vec<Option<BTreeSet<usize>>> = vec![None; no];
        for &q in &order {
            let descent = (0..self.n_simple()).find(|&i| {
                matches!(self.simple_root_type(q, i), RootType::ComplexNeg | RootType::Real)
                    && !self.orbits[q].links[i].is_empty()
            });
            let mut set = BTreeSet::from([q]);
            if let Some(i) = descent {
                let q1 = self.orbits[q].links[i][0];
                let lower = closure[q1].as_ref().ok_or_else(|| {
                    Error::Validation(vec![format!(
                        "closure order: orbit {} descends to {} which is not lower",
                        self.orbits[q].id, self.orbits[q1].id
                    )])
                })?;
                // P_α-saturation of the lower closure
                for &q2 in lower {
                    set.insert(q2);
                    for &z in &self.orbits[q2].links[i] {
                        set.insert(z);
                        set.extend(self.orbits[z].links[i].iter().copied());
                    }
                }
            }
            closure[q] = Some(set);
        }
        Ok(closure.into_iter().map(|c| c.unwrap_or_default()).collect())
    }

    // -- model-derived moves ---------------------------------------------------

    /// Parameter at orbit `o`, actual weight `w`, sign `mu2` (relative to `w`).
    pub fn lookup(&self, o: usize, w: &Weight, mu2: u64) -> Option<usize> {
        let (k, nu) = self.class_of(w)?;
        let m = self.theta_data[o].canonical(mu2 ^ lattice::to_bits(&nu));
        self.index.get(&(o, k, m)).copied()
    }

    /// γ's sign vector expressed relative to the weight `w` in its twist class.
    pub fn mu2_at(&self, g: usize, w: &Weight) -> Result<u64> {
        let p = &self.params[g];
        let nu = w
            .sub(&self.twists[p.twist])
            .as_lattice()
            .ok_or_else(|| Error::Invariant(format!("{w} is not in the twist class of {}", p.id)))?;
        Ok(p.mu2 ^ lattice::to_bits(&nu))
    }

    fn reflect_mu2(&self, i: usize, mu2: u64) -> u64 {
        let v = lattice::from_bits(mu2, self.root_datum.rank);
        lattice::to_bits(&self.root_datum.reflect_lattice(i, &v))
    }

    /// Parameters on orbit `o` in the class of `w` compatible across the Cayley
    /// transform through `i` with `(wg, mg)` on orbit `og`.
    fn cayley_matches(&self, real_side: bool, og: usize, wg: &Weight, mg: u64, o: usize, w: &Weight, i: usize) -> Result<Vec<usize>> {
        let Some((k, _)) = self.class_of(w) else { return Ok(vec![]) };
        let (root, coroot) = (&self.root_datum.simple_roots[i], &self.root_datum.simple_coroots[i]);
        let mut out = Vec::new();
        for &h in self.params_at(o, k) {
            let mh = self.mu2_at(h, w)?;
            let ok = if real_side {
                model::cayley_compatible(&self.theta_data[og], wg, mg, &self.theta_data[o], w, mh, root, coroot)?
            } else {
                model::cayley_compatible(&self.theta_data[o], w, mh, &self.theta_data[og], wg, mg, root, coroot)?
            };
            if ok {
                out.push(h);
            }
        }
        Ok(out)
    }

    /// Edge record for `(γ, i)` derived from the orbit table and the sign-character model.
    pub fn derive_edge(&self, g: usize, i: usize) -> Result<Edge> {
        let p = &self.params[g];
        let o = p.orbit;
        let lambda = &self.twists[p.twist];
        let rd = &self.root_datum;
        let w = rd.reflect(i, lambda)?;
        let integral = self.integral(g, i);
        let links = &self.orbits[o].links[i];
        let miss = |what: &str| Error::Invariant(format!("parameter {} root {i}: {what}", p.id));
        let edge = |case, targets| Ok(Edge { case, targets });
        match self.simple_root_type(o, i) {
            RootType::Compact => {
                if !integral {
                    return Err(miss("compact imaginary root is non-integral"));
                }
                edge(CaseLabel::Ci, vec![g])
            }
            RootType::ComplexPos | RootType::ComplexNeg => {
                let &[q] = links.as_slice() else { return Err(miss("complex root needs one cross partner")) };
                let m = self.reflect_mu2(i, self.mu2_at(g, lambda)?);
                let t = self.lookup(q, &w, m).ok_or_else(|| miss("cross action target missing"))?;
                let up = self.simple_root_type(o, i) == RootType::ComplexPos;
                match (integral, up) {
                    (true, true) => edge(CaseLabel::CPlus, vec![t]),
                    (true, false) => edge(CaseLabel::CMinus, vec![g, t]),
                    (false, true) => edge(CaseLabel::CPlusNonint, vec![t]),
                    (false, false) => edge(CaseLabel::CMinusNonint, vec![t]),
                }
            }
            RootType::Real if !integral => {
                let m = self.reflect_mu2(i, p.mu2) ^ lattice::to_bits(&rd.simple_roots[i]);
                let t = self.lookup(o, &w, m).ok_or_else(|| miss("r-nonint target missing"))?;
                edge(CaseLabel::RNonint, vec![t])
            }
            RootType::Real => {
                let c = &rd.simple_coroots[i];
                let parity = ThetaData::sign_real(p.mu2, c) == lambda.pair(c).to_integer().is_odd();
                if !parity {
                    return edge(CaseLabel::RNonparity, vec![g]);
                }
                let mut sources = links.clone();
                sources.dedup();
                match sources.as_slice() {
                    [yp, ym] => {
                        let a = self.cayley_matches(true, o, lambda, p.mu2, *yp, &w, i)?;
                        let b = self.cayley_matches(true, o, lambda, p.mu2, *ym, &w, i)?;
                        match (a.as_slice(), b.as_slice()) {
                            ([a], [b]) => edge(CaseLabel::RI, vec![g, *a, *b]),
                            _ => Err(miss("type I Cayley transform is not single-valued")),
                        }
                    }
                    [y] => {
                        let a = self.cayley_matches(true, o, lambda, p.mu2, *y, &w, i)?;
                        let &[yg] = a.as_slice() else { return Err(miss("type II Cayley image is not unique")) };
                        let wy = &w;
                        let my = self.mu2_at(yg, wy)?;
                        let back = self.cayley_matches(false, *y, wy, my, o, lambda, i)?;
                        let others: Vec<usize> = back.into_iter().filter(|&h| h != g).collect();
                        let &[partner] = others.as_slice() else { return Err(miss("type II pair not found")) };
                        edge(CaseLabel::RII, vec![g, partner, yg])
                    }
                    _ => Err(miss("real root needs one or two Cayley sources")),
                }
            }
            RootType::Noncompact => {
                if !integral {
                    return Err(miss("noncompact imaginary root is non-integral"));
                }
                let &[x] = links.as_slice() else { return Err(miss("noncompact root needs one Cayley image")) };
                let mut sources = self.orbits[x].links[i].clone();
                sources.dedup();
                let xs = self.cayley_matches(false, o, lambda, p.mu2, x, &w, i)?;
                match sources.as_slice() {
                    [a, b] => {
                        let &[xg] = xs.as_slice() else { return Err(miss("type I Cayley image is not unique")) };
                        let other = if *a == o { *b } else { *a };
                        let mx = self.mu2_at(xg, &w)?;
                        let ys = self.cayley_matches(true, x, &w, mx, other, lambda, i)?;
                        let &[yo] = ys.as_slice() else { return Err(miss("type I partner not found")) };
                        edge(CaseLabel::NciI, vec![xg, yo])
                    }
                    [_] => {
                        let &[xp, xm] = xs.as_slice() else { return Err(miss("type II needs two Cayley images")) };
                        edge(CaseLabel::NciII, vec![xp, xm, g])
                    }
                    _ => Err(miss("Cayley image has no sources")),
                }
            }
        }
    }

    // -- validation ----------------------------------------------------------

    /// Every violated invariant, with the offending orbit/parameter/root.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let rd = &self.root_datum;
        let n = self.n_simple();
        let id = |g: usize| self.params[g].id.as_str();

        // orbits
        for (o, orbit) in self.orbits.iter().enumerate() {
            if lattice::mat_mul(&orbit.theta, &orbit.theta) != lattice::identity(rd.rank) {
                v.push(format!("orbit {}: θ² ≠ 1", orbit.id));
            }
            for &r in orbit.noncompact.keys() {
                if r >= rd.positive_roots().len()
                    || !matches!(self.root_types[o][r], RootType::Compact | RootType::Noncompact)
                {
                    v.push(format!("orbit {}: grading given for a non-imaginary root #{r}", orbit.id));
                }
            }
            for i in 0..n {
                let links = &orbit.links[i];
                let s = rd.reflection_matrix(i);
                match self.simple_root_type(o, i) {
                    RootType::Compact => {
                        if !links.is_empty() {
                            v.push(format!("orbit {} root {i}: compact root must have no links", orbit.id));
                        }
                    }
                    RootType::ComplexPos | RootType::ComplexNeg => {
                        if let [q] = links.as_slice() {
                            let conj = lattice::mat_mul(&lattice::mat_mul(&s, &orbit.theta), &s);
                            if self.orbits[*q].theta != conj {
                                v.push(format!("orbit {} root {i}: partner θ is not s θ s", orbit.id));
                            }
                            if self.orbits[*q].links[i] != vec![o] {
                                v.push(format!("orbit {} root {i}: cross partner does not link back", orbit.id));
                            }
                        } else {
                            v.push(format!("orbit {} root {i}: complex root needs one partner", orbit.id));
                        }
                    }
                    RootType::Noncompact => {
                        if let [x] = links.as_slice() {
                            if self.orbits[*x].theta != lattice::mat_mul(&orbit.theta, &s) {
                                v.push(format!("orbit {} root {i}: Cayley image θ is not θ s", orbit.id));
                            }
                            if !self.orbits[*x].links[i].contains(&o) {
                                v.push(format!("orbit {} root {i}: Cayley image does not list it as a source", orbit.id));
                            }
                        } else {
                            v.push(format!("orbit {} root {i}: noncompact root needs one Cayley image", orbit.id));
                        }
                    }
                    RootType::Real => {
                        if links.is_empty() || links.len() > 2 {
                            v.push(format!("orbit {} root {i}: real root needs one or two sources", orbit.id));
                        }
                        for &y in links {
                            if self.simple_root_type(y, i) != RootType::Noncompact || self.orbits[y].links[i] != vec![o] {
                                v.push(format!("orbit {} root {i}: source {} is not a noncompact Cayley source", orbit.id, self.orbits[y].id));
                            }
                        }
                        let anti = &self.theta_data[o].anti;
                        let type_ii = lattice::to_bits(&rd.simple_coroots[i]) != 0
                            && anti.iter().any(|a| lattice::dot(&rd.simple_roots[i], a) % 2 != 0);
                        if !links.is_empty() && type_ii != (links.len() == 1) {
                            v.push(format!("orbit {} root {i}: link count disagrees with the Cayley type", orbit.id));
                        }
                    }
                }
            }
        }

        // twists
        if self.twists.is_empty() || self.base_lambda.sub(&self.twists[0]).as_lattice().is_none() {
            v.push("first twist must lie in the class of base_lambda".into());
        }
        for (k, t) in self.twists.iter().enumerate() {
            if self.class_of(t).map(|c| c.0) != Some(k) {
                v.push(format!("twist {k} repeats an earlier class"));
            }
            for i in 0..n {
                if let Ok(w) = rd.reflect(i, t) {
                    if self.class_of(&w).is_none() {
                        v.push(format!("twist {k}: s_{i} of it is not in the block"));
                    }
                }
            }
        }

        // parameters
        for (k, t) in self.twists.iter().enumerate() {
            for (o, orbit) in self.orbits.iter().enumerate() {
                let want = self.theta_data[o].characters(t);
                let mut have: Vec<u64> = self.params_at(o, k).iter().map(|&g| self.params[g].mu2).collect();
                have.sort_unstable();
                if want != have {
                    v.push(format!("orbit {} twist {k}: parameters {:?} but expected sign vectors {:?}", orbit.id, have, want));
                }
            }
        }
        for g in 0..self.len() {
            let p = &self.params[g];
            for (r, t) in rd.positive_roots().iter().zip(&self.root_types[p.orbit]) {
                if matches!(t, RootType::Compact | RootType::Noncompact) && !self.lambda(g).pair(&r.coroot).is_integer() {
                    v.push(format!("parameter {}: imaginary root {:?} is non-integral", p.id, r.coeffs));
                }
            }
            if let Some(s) = self.stored_lengths[g] {
                if s != self.lengths[g] {
                    v.push(format!("parameter {}: stored lengths differ from recomputation", p.id));
                }
            }
            if self.lengths[g].l2 % 2 != 0 || self.lengths[g].li2 % 2 != 0 {
                v.push(format!("parameter {}: ℓ or ℓ_I is not an integer", p.id));
            }
            if !self.hodge_identity_holds(g) {
                v.push(format!("parameter {}: ℓ_H ≠ ℓ_o + ℓ_I − ℓ + ½#non-integral", p.id));
            }
            for &h in self.below(g) {
                if self.lengths[h].l2 >= self.lengths[g].l2 {
                    v.push(format!("closure order: {} < {} without a length drop", id(h), p.id));
                }
            }
        }

        // edges
        if self.edges.len() != self.len() || self.edges.iter().any(|e| e.len() != n) {
            v.push("every (parameter, simple root) pair needs exactly one edge record".into());
            return v;
        }
        for g in 0..self.len() {
            for i in 0..n {
                let e = &self.edges[g][i];
                let tag = format!("edge ({}, {i}) {}", id(g), e.case);
                if e.targets.len() != e.case.arity() || e.targets.iter().any(|&t| t >= self.len()) {
                    v.push(format!("{tag}: wrong number of targets"));
                    continue;
                }
                match self.derive_edge(g, i) {
                    Ok(d) if d == *e => {}
                    Ok(d) => v.push(format!("{tag}: expected {} → {:?}", d.case, d.targets.iter().map(|&t| id(t)).collect::<Vec<_>>())),
                    Err(err) => v.push(format!("{tag}: {err}")),
                }
                if let Ok(k) = self.reflected_twist(self.params[g].twist, i) {
                    if e.targets.iter().any(|&t| self.params[t].twist != k) {
                        v.push(format!("{tag}: target outside the twist s_αλ"));
                    }
                }
                v.extend(self.check_reciprocity(g, i).into_iter().map(|m| format!("{tag}: {m}")));
            }
        }
        v
    }

    fn check_reciprocity(&self, g: usize, i: usize) -> Vec<String> {
        let e = &self.edges[g][i];
        let other = |t: usize| &self.edges[t][i];
        let dl = |t: usize| self.lengths[t].l2 - self.lengths[g].l2;
        let mut v = Vec::new();
        match e.case {
            CaseLabel::CPlus | CaseLabel::CPlusNonint => {
                let t = e.targets[0];
                let ok = match other(t).case {
                    CaseLabel::CMinus => other(t).targets == vec![t, g],
                    CaseLabel::CMinusNonint => other(t).targets == vec![g],
                    _ => false,
                };
                if !ok || dl(t) != 2 {
                    v.push("cross partner is not a matching descent one length up".into());
                }
            }
            CaseLabel::RI => {
                for (a, b) in [(1, 2), (2, 1)] {
                    let y = e.targets[a];
                    if other(y).case != CaseLabel::NciI || other(y).targets != vec![g, e.targets[b]] || dl(y) != -2 {
                        v.push("Cayley source does not point back as nci-I".into());
                    }
                }
            }
            CaseLabel::RII => {
                let y = e.targets[2];
                let mut pair = vec![g, e.targets[1]];
                pair.sort_unstable();
                if other(y).case != CaseLabel::NciII || other(y).targets[..2] != pair[..] || dl(y) != -2 {
                    v.push("Cayley image does not point back as nci-II".into());
                }
            }
            CaseLabel::RNonint => {
                let t = e.targets[0];
                if other(t).case != CaseLabel::RNonint || other(t).targets != vec![g] || dl(t) != 0 {
                    v.push("r-nonint partner does not point back".into());
                }
            }
            _ => {}
        }
        v
    }

    // -- serialization -------------------------------------------------------

    pub fn to_json(&self) -> String {
        let file = BlockFile {
            version: FORMAT_VERSION,
            root_datum: self.root_datum.clone(),
            base_lambda: self.base_lambda.clone(),
            dim_h: self.dim_h,
            twists: self.twists.clone(),
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitRecord {
                    id: o.id.clone(),
                    theta: o.theta.clone(),
                    grading: o
                        .noncompact
                        .iter()
                        .map(|(&r, &nc)| GradingRecord {
                            root: self.root_datum.positive_roots()[r].coeffs.clone(),
                            kind: if nc { Grading::Noncompact } else { Grading::Compact },
                        })
                        .collect(),
                    links: o.links.iter().map(|l| l.iter().map(|&q| self.orbits[q].id.clone()).collect()).collect(),
                })
                .collect(),
            parameters: self
                .params
                .iter()
                .enumerate()
                .map(|(g, p)| {
                    let l = self.lengths[g];
                    ParamRecord {
                        id: p.id.clone(),
                        orbit: self.orbits[p.orbit].id.clone(),
                        twist: p.twist,
                        mu2: lattice::from_bits(p.mu2, self.root_datum.rank),
                        lengths: LengthRecord {
                            ell: fmt_half(l.l2),
                            ell_i: fmt_half(l.li2),
                            ell_o: fmt_half(l.lo2),
                            ell_h: fmt_half(l.lh2),
                        },
                    }
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .flat_map(|(g, es)| {
                    es.iter().enumerate().map(move |(i, e)| EdgeRecord {
                        param: self.params[g].id.clone(),
                        root: i,
                        case: e.case,
                        targets: e.targets.iter().map(|&t| self.params[t].id.clone()).collect(),
                    })
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("block serialization");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Block> {
        let f: BlockFile = serde_json::from_str(s)?;
        if f.version != FORMAT_VERSION {
            return Err(Error::Schema(format!("unsupported block version {}", f.version)));
        }
        let rd = f.root_datum;
        let orbit_ids: HashMap<&str, usize> = f.orbits.iter().enumerate().map(|(k, o)| (o.id.as_str(), k)).collect();
        if orbit_ids.len() != f.orbits.len() {
            return Err(Error::Schema("duplicate orbit id".into()));
        }
        let oid = |s: &str| orbit_ids.get(s).copied().ok_or_else(|| Error::Schema(format!("unknown orbit '{s}'")));
        let mut orbits = Vec::new();
        for o in &f.orbits {
            let mut noncompact = BTreeMap::new();
            for gr in &o.grading {
                let r = rd
                    .positive_roots()
                    .iter()
                    .position(|x| x.coeffs == gr.root)
                    .ok_or_else(|| Error::Schema(format!("orbit {}: {:?} is not a positive root", o.id, gr.root)))?;
                noncompact.insert(r, gr.kind == Grading::Noncompact);
            }
            let links = o
                .links
                .iter()
                .map(|l| l.iter().map(|s| oid(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            orbits.push(Orbit { id: o.id.clone(), theta: o.theta.clone(), noncompact, links });
        }
        let mut params = Vec::new();
        let mut stored = Vec::new();
        for p in &f.parameters {
            if p.mu2.len() != rd.rank || p.mu2.iter().any(|&x| x != 0 && x != 1) {
                return Err(Error::Schema(format!("parameter {}: mu2 must be {} bits", p.id, rd.rank)));
            }
            params.push(Parameter {
                id: p.id.clone(),
                orbit: oid(&p.orbit)?,
                twist: p.twist,
                mu2: lattice::to_bits(&p.mu2),
            });
            stored.push(Lengths {
                l2: parse_half(&p.lengths.ell)?,
                li2: parse_half(&p.lengths.ell_i)?,
                lo2: parse_half(&p.lengths.ell_o)?,
                lh2: parse_half(&p.lengths.ell_h)?,
            });
        }
        let pid: HashMap<&str, usize> = params.iter().enumerate().map(|(k, p)| (p.id.as_str(), k)).collect();
        if pid.len() != params.len() {
            return Err(Error::Schema("duplicate parameter id".into()));
        }
        let n = rd.n_simple();
        let mut edges: Vec<Vec<Option<Edge>>> = vec![vec![None; n]; params.len()];
        for e in &f.edges {
            let g = *pid.get(e.param.as_str()).ok_or_else(|| Error::Schema(format!("unknown parameter '{}'", e.param)))?;
            if e.root >= n {
                return Err(Error::Schema(format!("edge root {} out of range", e.root)));
            }
            let targets = e
                .targets
                .iter()
                .map(|t| pid.get(t.as_str()).copied().ok_or_else(|| Error::Schema(format!("unknown parameter '{t}'"))))
                .collect::<Result<Vec<_>>>()?;
            if edges[g][e.root].replace(Edge { case: e.case, targets }).is_some() {
                return Err(Error::Schema(format!("duplicate edge ({}, {})", e.param, e.root)));
            }
        }
        let complete = edges.iter().flatten().all(Option::is_some);
        let edges: Vec<Vec<Edge>> = if complete {
            edges.into_iter().map(|es| es.into_iter().map(Option::unwrap).collect()).collect()
        } else {
            // leaves the gap for validate to report
            vec![]
        };
        let mut b = Block::assemble(rd, f.base_lambda, f.dim_h, f.twists, orbits, params, edges)?;
        b.stored_lengths = stored.into_iter().map(Some).collect();
        Ok(b)
    }

    pub fn load(path: &std::path::Path) -> Result<Block> {
        Block::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Representatives of `W·λ` modulo X*, breadth-first from λ.
pub fn weyl_twists(rd: &RootDatum, lambda: &Weight) -> Result<Vec<Weight>> {
    if lambda.len() != rd.rank {
        return Err(Error::Domain(format!("λ has {} coordinates, rank is {}", lambda.len(), rd.rank)));
    }
    let mut reps = vec![lambda.clone()];
    let mut k = 0;
    while k < reps.len() {
        for i in 0..rd.n_simple() {
            let w = rd.reflect(i, &reps[k])?;
            if !reps.iter().any(|r| w.sub(r).as_lattice().is_some()) {
                reps.push(w);
            }
        }
        k += 1;
    }
    Ok(reps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Grading {
    Compact,
    Noncompact,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GradingRecord {
    root: Vec<i64>,
    kind: Grading,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitRecord {
    id: String,
    theta: IMat,
    grading: Vec<GradingRecord>,
    links: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthRecord {
    ell: String,
    #[serde(rename = "ell_I")]
    ell_i: String,
    ell_o: String,
    #[serde(rename = "ell_H")]
    ell_h: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamRecord {
    id: String,
    orbit: String,
    twist: usize,
    mu2: Vec<i64>,
    lengths: LengthRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    param: String,
    root: usize,
    case: CaseLabel,
    targets: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile {
    version: u32,
    root_datum: RootDatum,
    base_lambda: Weight,
    #[serde(rename = "dimH")]
    dim_h: usize,
    twists: Vec<Weight>,
    orbits: Vec<OrbitRecord>,
    parameters: Vec<ParamRecord>,
    edges: Vec<EdgeRecord>,
}
