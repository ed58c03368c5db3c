//! Small integer-lattice and F₂ helpers. Matrices are row-major `Vec<Vec<i64>>`.

pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| dot(r, v)).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

/// Basis of the saturated lattice `{v ∈ Zⁿ : A v = 0}`, by unimodular column reduction.
pub fn kernel_basis(a: &IMat, n: usize) -> Vec<Vec<i64>> {
    let mut m: IMat = a.clone();
    let mut u = identity(n);
    let mut piv = 0;
    for r in 0..m.len() {
        if piv >= n {
            break;
        }
        loop {
            // smallest nonzero |entry| in row r among columns piv..n
            let best = (piv..n).filter(|&c| m[r][c] != 0).min_by_key(|&c| m[r][c].abs());
            let Some(b) = best else { break };
            swap_cols(&mut m, &mut u, piv, b);
            let mut done = true;
            for c in piv + 1..n {
                if m[r][c] != 0 {
                    let q = m[r][c].div_euclid(m[r][piv]);
                    col_axpy(&mut m, &mut u, c, piv, -q);
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    (piv..n).map(|c| u.iter().map(|row| row[c]).collect()).collect()
}

fn swap_cols(m: &mut IMat, u: &mut IMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut().chain(u.iter_mut()) {
        row.swap(a, b);
    }
}

/// column `dst += k * column src`
fn col_axpy(m: &mut IMat, u: &mut IMat, dst: usize, src: usize, k: i64) {
    for row in m.iter_mut().chain(u.iter_mut()) {
        row[dst] += k * row[src];
    }
}

/// `{ν : Θᵀν = s ν}` for `s = ±1`, where `Θ` acts on X* and its transpose on X_*.
pub fn eigenlattice(theta: &IMat, s: i64) -> Vec<Vec<i64>> {
    let n = theta.len();
    let mut a = transpose(theta);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= s;
    }
    kernel_basis(&a, n)
}

// ---------------------------------------------------------------------------
// F₂ vectors as bitmasks (bit i = coordinate i)
// ---------------------------------------------------------------------------

pub fn to_bits(v: &[i64]) -> u64 {
    v.iter().enumerate().fold(0, |acc, (i, x)| acc | ((x.rem_euclid(2) as u64) << i))
}

pub fn from_bits(b: u64, n: usize) -> Vec<i64> {
    (0..n).map(|i| ((b >> i) & 1) as i64).collect()
}

pub fn parity(b: u64) -> bool {
    b.count_ones() % 2 == 1
}

/// Row-reduced basis of an F₂ span together with, for each basis vector, the
/// combination of inputs that produced it.
#[derive(Clone, Debug)]
pub struct F2Span {
    // (vector, generator combination, pivot bit)
    rows: Vec<(u64, u64, u64)>,
}

impl F2Span {
    pub fn new(gens: &[u64]) -> Self {
        let mut rows: Vec<(u64, u64, u64)> = Vec::new();
        for (i, &g) in gens.iter().enumerate() {
            let (mut v, mut c) = (g, 1u64 << i);
            for &(rv, rc, p) in &rows {
                if v & p != 0 {
                    v ^= rv;
                    c ^= rc;
                }
            }
            if v != 0 {
                let p = v & v.wrapping_neg();
                for r in rows.iter_mut() {
                    if r.0 & p != 0 {
                        r.0 ^= v;
                        r.1 ^= c;
                    }
                }
                rows.push((v, c, p));
            }
        }
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Express `v` as a sum of generators; returns the generator mask or `None`.
    pub fn solve(&self, v: u64) -> Option<u64> {
        let (mut v, mut c) = (v, 0u64);
        for &(rv, rc, p) in &self.rows {
            if v & p != 0 {
                v ^= rv;
                c ^= rc;
            }
        }
        (v == 0).then_some(c)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.solve(v).is_some()
    }
}
