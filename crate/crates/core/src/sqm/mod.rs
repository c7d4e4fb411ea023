//! The determinantal description of `Y` and of its small modification `Y'`.
//!
//! `M` is `(d+1) x (d+1)`: column `j` (1-based, `j <= d`) has `x1` in row `j`
//! and `-x0` in row `j+1`, and the last column is `(f_0, ..., f_d)`, so that
//! `det M = sum_i x0^{d-i} x1^i f_i`. A kernel vector `(z_1, ..., z_d, 1)`
//! satisfies `f_0 + x1 z_1 = 0`, `f_i - x0 z_i + x1 z_{i+1} = 0` and
//! `f_d - x0 z_d = 0`. `N` is `(d+1) x 3` with rows `(0, z_1, f_0)`,
//! `(-z_i, z_{i+1}, f_i)` and `(-z_d, 0, f_d)`; `(x0, x1, 1)` lies in its
//! kernel exactly when the same equations hold. `Y'` is cut out by the
//! maximal (3 x 3) minors of `N`.

mod eval;
pub mod toric;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{self, Poly};
use crate::wps::WeightVector;

pub use eval::{
    eval_m, eval_n, flipped_equivalent, minors_vanish, points_equivalent, sqm_backward, sqm_forward,
    weighted_equivalent, FlippedPoint,
};

/// One entry of a symbolic matrix. Serializes in the grammar
/// `0`, `x0`, `-x1`, `z2`, `-z1`, `f3`, `y2^3`, `t`, `u0_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    X { i: usize, neg: bool },
    Z { i: usize, neg: bool },
    F(usize),
    YPow { j: usize, exp: u64 },
    U { a: usize, i: usize },
    T,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |neg: bool| if neg { "-" } else { "" };
        match *self {
            Entry::Zero => write!(f, "0"),
            Entry::X { i, neg } => write!(f, "{}x{i}", sign(neg)),
            Entry::Z { i, neg } => write!(f, "{}z{i}", sign(neg)),
            Entry::F(i) => write!(f, "f{i}"),
            Entry::YPow { j, exp: 1 } => write!(f, "y{j}"),
            Entry::YPow { j, exp } => write!(f, "y{j}^{exp}"),
            Entry::U { a, i } => write!(f, "u{a}_{i}"),
            Entry::T => write!(f, "t"),
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SymbolicMatrix(pub Vec<Vec<Entry>>);

impl SymbolicMatrix {
    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn cols(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }

    pub fn get(&self, r: usize, c: usize) -> Entry {
        self.0[r][c]
    }

    /// Row index sets of the maximal minors (all columns, `cols` rows).
    pub fn maximal_minor_rows(&self) -> Vec<Vec<usize>> {
        subsets(self.rows(), self.cols())
    }

    /// Every `k x k` minor written out as a polynomial string.
    pub fn minors(&self, k: usize) -> Vec<String> {
        let mut out = Vec::new();
        for rows in subsets(self.rows(), k) {
            for cols in subsets(self.cols(), k) {
                out.push(self.minor_string(&rows, &cols));
            }
        }
        out
    }

    fn minor_string(&self, rows: &[usize], cols: &[usize]) -> String {
        let mut terms = Vec::new();
        for perm in permutations(cols.len()) {
            let sign = permutation_sign(&perm);
            let factors: Vec<Entry> = rows
                .iter()
                .zip(&perm)
                .map(|(&r, &pi)| self.get(r, cols[pi]))
                .collect();
            if factors.contains(&Entry::Zero) {
                continue;
            }
            let mut neg = sign < 0;
            let mut names = Vec::new();
            for e in factors {
                let (n, s) = strip_sign(e);
                neg ^= s;
                names.push(n.to_string());
            }
            terms.push((neg, names.join("*")));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (neg, body)) in terms.iter().enumerate() {
            if *neg {
                s.push('-');
            } else if i > 0 {
                s.push('+');
            }
            s.push_str(body);
        }
        s
    }
}

fn strip_sign(e: Entry) -> (Entry, bool) {
    match e {
        Entry::X { i, neg } => (Entry::X { i, neg: false }, neg),
        Entry::Z { i, neg } => (Entry::Z { i, neg: false }, neg),
        other => (other, false),
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The matrix whose first degeneracy locus is `Y`.
pub fn build_m(d: usize) -> SymbolicMatrix {
    assert!(d >= 1, "build_m needs d >= 1");
    let mut m = vec![vec![Entry::Zero; d + 1]; d + 1];
    for j in 0..d {
        m[j][j] = Entry::X { i: 1, neg: false };
        m[j + 1][j] = Entry::X { i: 0, neg: true };
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[d] = Entry::F(i);
    }
    SymbolicMatrix(m)
}

fn n_shape(d: usize, last: impl Fn(usize) -> Entry) -> Result<SymbolicMatrix> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    if d == 1 {
        return Err(Error::DivisorialContraction);
    }
    let mut n = vec![vec![Entry::Zero; 3]; d + 1];
    for (r, row) in n.iter_mut().enumerate() {
        if r >= 1 {
            row[0] = Entry::Z { i: r, neg: true };
        }
        if r < d {
            row[1] = Entry::Z { i: r + 1, neg: false };
        }
        row[2] = last(r);
    }
    Ok(SymbolicMatrix(n))
}

/// The matrix whose maximal minors cut out `Y'`. For `d = 1` there is no
/// flipped model; the map is a divisorial contraction.
pub fn build_n(d: usize) -> Result<SymbolicMatrix> {
    n_shape(d, Entry::F)
}

/// `N` with `f_i = y_i^{e / w_i}`; needs `d <= m` and `a(w) | e`.
pub fn build_n_pure_powers(d: usize, w: &WeightVector, e: i64) -> Result<SymbolicMatrix> {
    if d > w.dim() {
        return Err(Error::InvalidInput(format!("d = {d} exceeds dim {w} = {}", w.dim())));
    }
    if e <= 0 || !w.is_cartier_degree(e) {
        return Err(Error::InvalidInput(format!("a(w) = {} does not divide e = {e}", w.lcm())));
    }
    let ws = w.weights().to_vec();
    n_shape(d, |r| Entry::YPow {
        j: r,
        exp: e as u64 / ws[r],
    })
}

/// Determinant of a small square matrix of polynomials, by expansion along
/// rows with memoisation over the set of used columns.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix");
    assert!(n <= 20, "matrix too large for subset expansion");
    let nvars = m[0][0].nvars();
    let p = m[0][0].prime();
    // memo[mask] = det of rows (n - popcount(mask))..n restricted to the
    // columns not in mask
    let mut memo: Vec<Option<Poly>> = vec![None; 1 << n];
    memo[(1 << n) - 1] = Some(Poly::constant(1, nvars, p));
    for mask in (0..(1usize << n) - 1).rev() {
        let row = mask.count_ones() as usize;
        let mut acc = Poly::zero(nvars, p);
        let mut sign_pos = 0;
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let sub = memo[mask | (1 << c)].as_ref().expect("computed");
                let t = entry.mul(sub);
                acc = if sign_pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            sign_pos += 1;
        }
        memo[mask] = Some(acc);
    }
    memo[0].take().expect("computed")
}

/// `M` with polynomial entries in variables `x0, x1` (indices 0 and 1) and
/// the given forms for the last column.
pub fn m_polys(forms: &[Poly]) -> Vec<Vec<Poly>> {
    let d = forms.len() - 1;
    let nvars = forms[0].nvars();
    let p = forms[0].prime();
    let sym = build_m(d);
    (0..=d)
        .map(|r| {
            (0..=d)
                .map(|c| match sym.get(r, c) {
                    Entry::Zero => Poly::zero(nvars, p),
                    Entry::X { i, neg } => {
                        let v = Poly::var(i, nvars, p);
                        if neg {
                            v.scale(p - 1)
                        } else {
                            v
                        }
                    }
                    Entry::F(i) => forms[i].clone(),
                    other => unreachable!("unexpected entry {other} in M"),
                })
                .collect()
        })
        .collect()
}

/// `sum_i x0^{d-i} x1^i f_i`.
pub fn expected_determinant(forms: &[Poly]) -> Poly {
    let d = forms.len() - 1;
    let nvars = forms[0].nvars();
    let p = forms[0].prime();
    let x0 = Poly::var(0, nvars, p);
    let x1 = Poly::var(1, nvars, p);
    forms.iter().enumerate().fold(Poly::zero(nvars, p), |acc, (i, f)| {
        acc.add(&x0.pow((d - i) as u32).mul(&x1.pow(i as u32)).mul(f))
    })
}

/// `f_*` in the bases `(H1, H2)` and `(H1', H2')`: columns are the images
/// of `H1` and `H2`, so `H1 -> e H2' - H1'` and `e H2 -> e H2'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pushforward {
    pub h1: [i64; 2],
    pub e_h2: [i64; 2],
    pub matrix: [[i64; 2]; 2],
}

pub fn pushforward_classes(d: usize, e: i64) -> Result<Pushforward> {
    if d == 1 {
        return Err(Error::DivisorialContraction);
    }
    if d == 0 || e <= 0 {
        return Err(Error::InvalidInput(format!("need d >= 2 and e > 0, got d = {d}, e = {e}")));
    }
    Ok(Pushforward {
        h1: [-1, e],
        e_h2: [0, e],
        matrix: [[-1, 0], [e, 1]],
    })
}

impl Pushforward {
    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        let m = &self.matrix;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

/// Matrices whose `2 x 2` minors, with the Veronese ideal, cut out `Z` and
/// `Z+`: `Z` is `2 x (d+1)` with rows `(x0, u0_1..u0_d)` and
/// `(x1, u1_1..u1_d)`; `Z+` is `3 x d` with rows `(z_1..z_d)`,
/// `(u0_1..u0_d)`, `(u1_1..u1_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZMatrices {
    pub matrix_z: SymbolicMatrix,
    pub matrix_zplus: SymbolicMatrix,
    pub minors_z: Vec<String>,
    pub minors_zplus: Vec<String>,
}

pub fn z_matrices(d: usize) -> Result<ZMatrices> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    let mut z = vec![vec![Entry::X { i: 0, neg: false }], vec![Entry::X { i: 1, neg: false }]];
    for a in 0..2 {
        for i in 1..=d {
            z[a].push(Entry::U { a, i });
        }
    }
    let zp = vec![
        (1..=d).map(|i| Entry::Z { i, neg: false }).collect(),
        (1..=d).map(|i| Entry::U { a: 0, i }).collect(),
        (1..=d).map(|i| Entry::U { a: 1, i }).collect(),
    ];
    let matrix_z = SymbolicMatrix(z);
    let matrix_zplus = SymbolicMatrix(zp);
    Ok(ZMatrices {
        minors_z: matrix_z.minors(2),
        minors_zplus: matrix_zplus.minors(2),
        matrix_z,
        matrix_zplus,
    })
}

/// Numeric value of an entry over `F_p`.
pub(crate) fn entry_value(e: Entry, x: &[u64], z: &[u64], f: &[u64], y: &[u64], p: u64) -> u64 {
    let signed = |v: u64, neg: bool| if neg { ff::neg(v, p) } else { v };
    match e {
        Entry::Zero => 0,
        Entry::X { i, neg } => signed(x[i], neg),
        Entry::Z { i, neg } => signed(z[i - 1], neg),
        Entry::F(i) => f[i],
        Entry::YPow { j, exp } => ff::pow(y[j], exp, p),
        Entry::U { .. } | Entry::T => panic!("entry {e} has no value in this context"),
    }
}
