//! Weighted projective spaces and their products.
//!
//! A factor `P(w_0, ..., w_n)` is stored as its weight vector. Products are
//! ordered lists of factors; multidegrees carry one integer per factor.
//! The textual grammar is `P(1,1,2)` for an explicit weight vector and `Pn`
//! for the unweighted `P(1, ..., 1)` of dimension `n`; products are
//! comma-separated factor lists such as `P1,P(1,1,2)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WeightVector(Vec<u64>);

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("weight vector must be nonempty".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "weights must be positive, got {weights:?}"
            )));
        }
        Ok(Self(weights))
    }

    /// Unweighted projective space of dimension `n`.
    pub fn projective(n: usize) -> Self {
        Self(vec![1; n + 1])
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.0.iter().all(|&w| w == 1)
    }

    /// `P^1` with weights `(1, 1)`; the only well-formed curve.
    pub fn is_p1(&self) -> bool {
        self.0 == [1, 1]
    }

    /// The least common multiple `a(w)` of the weights.
    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &w| acc.lcm(&w))
    }

    /// gcd of all weights is 1 and every subset of `dim` weights has gcd 1.
    pub fn is_well_formed(&self) -> bool {
        let all = self.0.iter().fold(0u64, |g, &w| g.gcd(&w));
        if all != 1 {
            return false;
        }
        // Subsets of cardinality n = len - 1 are the complements of single
        // entries.
        (0..self.0.len()).all(|skip| {
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u64, |g, (_, &w)| g.gcd(&w))
                == 1
        })
    }

    /// `O(m)` is invertible iff `a(w) | m`; `-K = O(sum w)`.
    pub fn is_gorenstein(&self) -> bool {
        self.sum().is_multiple_of(self.lcm())
    }

    pub fn is_cartier_degree(&self, e: i64) -> bool {
        e.rem_euclid(self.lcm() as i64) == 0
    }

    /// Toric terminality of the fan over the simplex of primitive ray
    /// generators. See [`terminal_witness`] for the point that breaks it.
    pub fn is_terminal(&self) -> bool {
        terminal_witness(self).is_none()
    }
}

impl TryFrom<Vec<u64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<u64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unweighted() {
            return write!(f, "P{}", self.dim());
        }
        write!(f, "P(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = s
            .strip_prefix('P')
            .ok_or_else(|| Error::Parse(format!("factor must start with 'P': {s:?}")))?;
        if let Some(inner) = rest.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {s:?}")))?;
            let weights = inner
                .split(',')
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad weight {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if weights.len() < 2 {
                return Err(Error::Parse(format!("{s:?} needs at least two weights")));
            }
            Self::new(weights).map_err(|e| Error::Parse(e.to_string()))
        } else {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("expected Pn or P(w0,...,wn), got {s:?}")))?;
            if n == 0 {
                return Err(Error::Parse("P0 is not a valid factor".into()));
            }
            Ok(Self::projective(n))
        }
    }
}

/// An ordered product of well-formed weighted projective spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeightVector>", into = "Vec<WeightVector>")]
pub struct ProductSpace(Vec<WeightVector>);

impl ProductSpace {
    pub fn new(factors: Vec<WeightVector>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("product needs at least one factor".into()));
        }
        if let Some(bad) = factors.iter().find(|w| !w.is_well_formed()) {
            return Err(Error::InvalidInput(format!("factor {bad} is not well-formed")));
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[WeightVector] {
        &self.0
    }

    /// Picard rank of the product (= number of factors).
    pub fn rho(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(WeightVector::dim).sum()
    }

    pub fn is_gorenstein(&self) -> bool {
        self.0.iter().all(WeightVector::is_gorenstein)
    }

    pub fn is_terminal(&self) -> bool {
        self.0.iter().all(WeightVector::is_terminal)
    }

    pub fn is_cartier(&self, degree: &Multidegree) -> bool {
        degree.len() == self.rho()
            && self
                .0
                .iter()
                .zip(degree.as_slice())
                .all(|(w, &e)| w.is_cartier_degree(e))
    }

    /// Component `i` is the weight sum of factor `i`.
    pub fn anticanonical_multidegree(&self) -> Result<Multidegree> {
        if !self.is_gorenstein() {
            return Err(Error::NotGorenstein);
        }
        Ok(Multidegree(self.0.iter().map(|w| w.sum() as i64).collect()))
    }

    pub fn p1_indices(&self) -> Vec<usize> {
        (0..self.rho()).filter(|&i| self.0[i].is_p1()).collect()
    }
}

impl TryFrom<Vec<WeightVector>> for ProductSpace {
    type Error = Error;
    fn try_from(v: Vec<WeightVector>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProductSpace> for Vec<WeightVector> {
    fn from(p: ProductSpace) -> Self {
        p.0
    }
}

impl fmt::Display for ProductSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for ProductSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::Parse(format!("unbalanced ')' in {s:?}")));
                    }
                }
                ',' if depth == 0 => {
                    factors.push(s[start..i].parse::<WeightVector>()?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced '(' in {s:?}")));
        }
        factors.push(s[start..].parse::<WeightVector>()?);
        Self::new(factors).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Multidegree {
    type Err = Error;

    /// Comma-separated integers, e.g. `2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad degree component {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(v))
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `h^0(P(w), O(e))`: the number of monomials of weighted degree `e`.
/// 0 for `e < 0`.
pub fn section_count(w: &WeightVector, e: i64) -> BigUint {
    if e < 0 {
        return BigUint::zero();
    }
    let e = e as usize;
    match coin_change::<u128>(w.weights(), e, u128::checked_add) {
        Some(v) => BigUint::from(v[e]),
        None => section_counts_upto(w, e).swap_remove(e),
    }
}

/// `h^0(P(w), O(e))` for `e = 0..=emax`, by coin-change dynamic
/// programming over the weights. Runs in `u128` and redoes the table in
/// big integers only on overflow.
pub fn section_counts_upto(w: &WeightVector, emax: usize) -> Vec<BigUint> {
    if let Some(small) = coin_change::<u128>(w.weights(), emax, u128::checked_add) {
        return small.into_iter().map(BigUint::from).collect();
    }
    coin_change::<BigUint>(w.weights(), emax, |a, b| Some(a + b)).expect("big integers do not overflow")
}

fn coin_change<T>(weights: &[u64], emax: usize, add: impl Fn(T, T) -> Option<T>) -> Option<Vec<T>>
where
    T: Clone + Zero + One,
{
    let mut counts = vec![T::zero(); emax + 1];
    counts[0] = T::one();
    for &wi in weights {
        let wi = wi as usize;
        for s in wi..=emax {
            counts[s] = add(counts[s].clone(), counts[s - wi].clone())?;
        }
    }
    Some(counts)
}

/// Künneth: the product of the per-factor section counts.
pub fn product_section_count(x: &ProductSpace, degree: &Multidegree) -> Result<BigUint> {
    if degree.len() != x.rho() {
        return Err(Error::DimensionMismatch {
            expected: x.rho(),
            got: degree.len(),
        });
    }
    Ok(x
        .factors()
        .iter()
        .zip(degree.as_slice())
        .map(|(w, &e)| section_count(w, e))
        .product())
}

/// Exponent vectors of all monomials of weighted degree `e`, in
/// lexicographically decreasing order of exponents.
pub fn monomials_of_degree(w: &WeightVector, e: i64) -> Vec<Vec<u32>> {
    fn rec(w: &[u64], idx: usize, rem: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == w.len() - 1 {
            if rem.is_multiple_of(w[idx]) {
                cur.push((rem / w[idx]) as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let max = rem / w[idx];
        for a in (0..=max).rev() {
            cur.push(a as u32);
            rec(w, idx + 1, rem - a * w[idx], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if e >= 0 {
        rec(w.weights(), 0, e as u64, &mut Vec::new(), &mut out);
    }
    out
}

/// Primitive ray generators `v_0..v_n` of the fan of `P(w)` in `Z^n`, with
/// `sum w_i v_i = 0`.
///
/// Built from a unimodular `U` with `U w = e_0`: the last `n` rows of `U`
/// realise `Z^{n+1} / Z w`.
pub fn ray_generators(w: &WeightVector) -> Vec<Vec<i64>> {
    let len = w.weights().len();
    let n = len - 1;
    if let Some(j) = w.weights().iter().position(|&x| x == 1) {
        // v_i = e_i for i != j, v_j = -sum_{i != j} w_i e_i.
        let others: Vec<usize> = (0..len).filter(|&i| i != j).collect();
        let mut rays = vec![vec![0i64; n]; len];
        for (k, &i) in others.iter().enumerate() {
            rays[i][k] = 1;
            rays[j][k] = -(w.weights()[i] as i64);
        }
        return rays;
    }
    let mut v: Vec<i64> = w.weights().iter().map(|&x| x as i64).collect();
    let mut u: Vec<Vec<i64>> = (0..len)
        .map(|i| (0..len).map(|k| i64::from(i == k)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..len).filter(|&i| v[i] != 0).collect();
        if nonzero.len() == 1 {
            let p = nonzero[0];
            v.swap(0, p);
            u.swap(0, p);
            if v[0] < 0 {
                v[0] = -v[0];
                for x in u[0].iter_mut() {
                    *x = -*x;
                }
            }
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&i| v[i].abs()).unwrap();
        for &i in &nonzero {
            if i != piv {
                let q = v[i].div_euclid(v[piv]);
                v[i] -= q * v[piv];
                let row = u[piv].clone();
                for (x, r) in u[i].iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
    }
    debug_assert_eq!(v[0], 1);
    (0..len).map(|i| (1..len).map(|r| u[r][i]).collect()).collect()
}

type Q = Ratio<i128>;

/// A lattice point other than the vertices and the origin inside the
/// simplex spanned by the ray generators, if one exists.
///
/// Enumerates the bounding box of the simplex and tests membership by exact
/// barycentric coordinates.
pub fn terminal_witness(w: &WeightVector) -> Option<Vec<i64>> {
    let rays = ray_generators(w);
    let n = w.dim();
    if n == 0 {
        return None;
    }
    // A = [v_0 .. v_n ; 1 .. 1], (n+1) x (n+1), invertible.
    let size = n + 1;
    let mut a: Vec<Vec<Q>> = vec![vec![Q::zero(); size]; size];
    for (j, ray) in rays.iter().enumerate() {
        for i in 0..n {
            a[i][j] = Q::from_integer(ray[i] as i128);
        }
        a[n][j] = Q::one();
    }
    let inv = invert(a).expect("ray simplex is full-dimensional");
    let lo: Vec<i64> = (0..n).map(|i| rays.iter().map(|r| r[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|i| rays.iter().map(|r| r[i]).max().unwrap()).collect();
    let mut x = lo.clone();
    loop {
        if x.iter().any(|&c| c != 0) && !rays.contains(&x) {
            let inside = inv.iter().all(|row| {
                let mut s = row[n];
                for i in 0..n {
                    s += row[i] * Q::from_integer(x[i] as i128);
                }
                s >= Q::zero()
            });
            if inside {
                return Some(x);
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

fn invert(mut a: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}
