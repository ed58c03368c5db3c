//! Built-in blocks. Real forms use hand-coded orbit tables; complex groups are
//! generated from the diagonal orbit by cross actions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::block::{Block, Orbit};
use crate::lattice::{self, IMat};
use crate::rootdata::{Root, RootDatum, Weight};
use crate::weyl::WeylGroup;
use crate::{Error, Result};

/// Orbit table: root datum plus orbits with links resolved to indices.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub root_datum: RootDatum,
    pub orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub fn build(self, lambda: &Weight) -> Result<Block> {
        Block::generate(self.root_datum, lambda.clone(), self.orbits)
    }
}

/// Grading on the imaginary positive roots of θ given by `nc`.
fn grading(rd: &RootDatum, theta: &IMat, nc: impl Fn(&Root) -> bool) -> BTreeMap<usize, bool> {
    rd.positive_roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| lattice::mat_vec(theta, &r.root) == r.root)
        .map(|(k, r)| (k, nc(r)))
        .collect()
}

/// Grading of θ = 1 determined multiplicatively by the simple roots.
fn split_grading(rd: &RootDatum, simple_nc: &[bool]) -> BTreeMap<usize, bool> {
    let id = lattice::identity(rd.rank);
    grading(rd, &id, |r| r.coeffs.iter().zip(simple_nc).filter(|(_, &nc)| nc).map(|(c, _)| c).sum::<i64>() % 2 != 0)
}

fn table(rd: RootDatum, rows: Vec<(&str, IMat, BTreeMap<usize, bool>, Vec<Vec<&str>>)>) -> OrbitTable {
    let ids: HashMap<&str, usize> = rows.iter().enumerate().map(|(k, s)| (s.0, k)).collect();
    let orbits = rows
        .iter()
        .map(|(id, theta, g, links)| Orbit {
            id: id.to_string(),
            theta: theta.clone(),
            noncompact: g.clone(),
            links: links.iter().map(|l| l.iter().map(|s| ids[s]).collect()).collect(),
        })
        .collect();
    OrbitTable { root_datum: rd, orbits }
}

/// SL(2,R): two closed points and the open orbit.
pub fn sl2r() -> OrbitTable {
    let rd = RootDatum::builtin("SL2").expect("SL2");
    let g = split_grading(&rd, &[true]);
    table(
        rd,
        vec![
            ("0", vec![vec![1]], g.clone(), vec![vec!["open"]]),
            ("inf", vec![vec![1]], g, vec![vec!["open"]]),
            ("open", vec![vec![-1]], BTreeMap::new(), vec![vec!["0", "inf"]]),
        ],
    )
}

/// SU(2): a single compact orbit.
pub fn su2() -> OrbitTable {
    let rd = RootDatum::builtin("SL2").expect("SL2");
    let g = split_grading(&rd, &[false]);
    table(rd, vec![("pt", vec![vec![1]], g, vec![vec![]])])
}

/// GL(2,R) with H^θ connected on the closed orbit: its real root is of type II.
pub fn gl2r() -> OrbitTable {
    let rd = RootDatum::new(Some("GL2".into()), 2, vec![vec![1, -1]], vec![vec![1, -1]]).expect("GL2");
    let swap = vec![vec![0, -1], vec![-1, 0]];
    let g = grading(&rd, &swap, |_| true);
    table(
        rd,
        vec![
            ("closed", swap, g, vec![vec!["open"]]),
            ("open", vec![vec![-1, 0], vec![0, -1]], BTreeMap::new(), vec![vec!["closed"]]),
        ],
    )
}

/// SU(2,1) on the SL(3) root datum: three closed orbits, two of dimension 2, the open orbit.
pub fn su21() -> OrbitTable {
    let rd = RootDatum::builtin("SL3").expect("SL3");
    let id = lattice::identity(2);
    let s1 = rd.reflection_matrix(0);
    let s2 = rd.reflection_matrix(1);
    let sb = lattice::mat_mul(&lattice::mat_mul(&s1, &s2), &s1);
    let none = BTreeMap::new();
    table(
        rd.clone(),
        vec![
            ("c_a", id.clone(), split_grading(&rd, &[true, true]), vec![vec!["O1"], vec!["O2"]]),
            ("c_b", id.clone(), split_grading(&rd, &[false, true]), vec![vec![], vec!["O2"]]),
            ("c_c", id, split_grading(&rd, &[true, false]), vec![vec!["O1"], vec![]]),
            ("O1", s1, none.clone(), vec![vec!["c_a", "c_c"], vec!["open"]]),
            ("O2", s2, none.clone(), vec![vec!["open"], vec!["c_a", "c_b"]]),
            ("open", sb, none, vec![vec!["O2"], vec!["O1"]]),
        ],
    )
}

fn weyl_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

/// The complex group G viewed as a real group: `G×G` with the swap involution.
/// Orbits are indexed by W; generated from the diagonal by cross actions.
pub fn complex_group(rd: &RootDatum) -> Result<OrbitTable> {
    let name = rd.name.clone().unwrap_or_else(|| "G".into());
    let big = RootDatum::product(rd, rd, Some(format!("{name}x{name}")))?;
    let (r, n) = (rd.rank, rd.n_simple());
    let weyl = WeylGroup::new(rd)?;
    let theta_of = |w: usize| -> IMat {
        let m = &weyl.matrices[w];
        let minv = &weyl.matrices[weyl.inverse(w)];
        let mut t = vec![vec![0; 2 * r]; 2 * r];
        for i in 0..r {
            for j in 0..r {
                t[i][r + j] = m[i][j];
                t[r + i][j] = minv[i][j];
            }
        }
        t
    };
    // breadth-first from the diagonal orbit
    let mut order = vec![0usize];
    let mut seen = HashMap::from([(0usize, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(w) = queue.pop_front() {
        for i in 0..n {
            for next in [weyl.left[i][w], weyl.right[i][w]] {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(next) {
                    e.insert(order.len());
                    order.push(next);
                    queue.push_back(next);
                }
            }
        }
    }
    let orbits = order
        .iter()
        .map(|&w| {
            let theta = theta_of(w);
            let mut links = vec![vec![]; 2 * n];
            for i in 0..n {
                links[i] = vec![seen[&weyl.left[i][w]]];
                links[n + i] = vec![seen[&weyl.right[i][w]]];
            }
            let noncompact = grading(&big, &theta, |_| false);
            Orbit { id: weyl_label(&weyl.words[w]), theta, noncompact, links }
        })
        .collect();
    Ok(OrbitTable { root_datum: big, orbits })
}

/// Weyl element of a complex-group orbit, read off from θ's upper-right block.
pub fn complex_orbit_matrix(theta: &IMat) -> IMat {
    let r = theta.len() / 2;
    (0..r).map(|i| (0..r).map(|j| theta[i][r + j]).collect()).collect()
}

/// Direct product of two orbit tables.
pub fn product(a: &OrbitTable, b: &OrbitTable) -> Result<OrbitTable> {
    let (ra, rb) = (a.root_datum.rank, b.root_datum.rank);
    let na = a.root_datum.n_simple();
    let name = |rd: &RootDatum| rd.name.clone().unwrap_or_else(|| "G".into());
    let rd = RootDatum::product(&a.root_datum, &b.root_datum, Some(format!("{}x{}", name(&a.root_datum), name(&b.root_datum))))?;
    let nb = b.orbits.len();
    let mut orbits = Vec::new();
    for (ia, oa) in a.orbits.iter().enumerate() {
        for (ib, ob) in b.orbits.iter().enumerate() {
            let mut theta = vec![vec![0; ra + rb]; ra + rb];
            for i in 0..ra {
                theta[i][..ra].copy_from_slice(&oa.theta[i]);
            }
            for i in 0..rb {
                theta[ra + i][ra..].copy_from_slice(&ob.theta[i]);
            }
            // match positive roots of the product to a factor by coefficient support
            let mut noncompact = BTreeMap::new();
            for (k, r) in rd.positive_roots().iter().enumerate() {
                let (ca, cb) = r.coeffs.split_at(na);
                let hit = if cb.iter().all(|&c| c == 0) {
                    a.root_datum.positive_roots().iter().position(|x| x.coeffs == ca).and_then(|j| oa.noncompact.get(&j))
                } else {
                    b.root_datum.positive_roots().iter().position(|x| x.coeffs == cb).and_then(|j| ob.noncompact.get(&j))
                };
                if let Some(&nc) = hit {
                    noncompact.insert(k, nc);
                }
            }
            let links = oa
                .links
                .iter()
                .map(|l| l.iter().map(|&x| x * nb + ib).collect())
                .chain(ob.links.iter().map(|l| l.iter().map(|&y| ia * nb + y).collect()))
                .collect();
            orbits.push(Orbit { id: format!("{}*{}", oa.id, ob.id), theta, noncompact, links });
        }
    }
    Ok(OrbitTable { root_datum: rd, orbits })
}

/// Group names accepted by [`parse_group`].
pub const GROUP_NAMES: &[&str] = &["sl2r", "sl2c", "su2", "su21", "gl2r", "complex:<root datum>", "A*B"];

fn parse_factor(s: &str) -> Result<OrbitTable> {
    match s {
        "sl2r" => Ok(sl2r()),
        "su2" => Ok(su2()),
        "su21" => Ok(su21()),
        "gl2r" => Ok(gl2r()),
        "sl2c" => complex_group(&RootDatum::builtin("SL2")?),
        _ => match s.strip_prefix("complex:") {
            Some(rd) => complex_group(&RootDatum::builtin(rd)?),
            None => Err(Error::Domain(format!("unknown group '{s}'; expected one of {}", GROUP_NAMES.join(", ")))),
        },
    }
}

/// Parse `sl2r`, `complex:SL3`, `sl2r*sl2r`, ... into an orbit table.
pub fn parse_group(s: &str) -> Result<OrbitTable> {
    let mut parts = s.split('*');
    let first = parse_factor(parts.next().unwrap_or_default().trim())?;
    parts.try_fold(first, |acc, p| product(&acc, &parse_factor(p.trim())?))
}

/// Build a block for a named group at twist `lambda`.
pub fn build(group: &str, lambda: &Weight) -> Result<Block> {
    parse_group(group)?.build(lambda)
}

/// The built-in blocks exercised by the acceptance suite, as `(group, λ)`.
pub fn builtin_blocks() -> Vec<(&'static str, &'static str)> {
    vec![
        ("su2", "0"),
        ("sl2r", "0"),
        ("sl2r", "1"),
        ("sl2r", "1/2"),
        ("sl2r", "3/2"),
        ("sl2r", "-1/2"),
        ("sl2r", "1/3"),
        ("sl2c", "0,0"),
        ("sl2c", "1/2,1/2"),
        ("gl2r", "0,0"),
        ("gl2r", "1/2,1/2"),
        ("su21", "0,0"),
        ("su21", "1/2,1/2"),
        ("su21", "1/2,0"),
        ("complex:SL3", "0,0,0,0"),
        ("complex:Sp4", "0,0,0,0"),
        ("complex:SL4", "0,0,0,0,0,0"),
        ("sl2r*sl2r", "0,1/2"),
        ("sl2r*sl2r", "1/2,1/2"),
        ("sl2r*sl2r", "0,0"),
    ]
}

pub fn build_builtin(group: &str, lambda: &str) -> Result<Block> {
    build(group, &Weight::parse(lambda)?)
}
