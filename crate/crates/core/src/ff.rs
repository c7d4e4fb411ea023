//! Arithmetic over prime fields: scalars, dense matrices, and sparse
//! multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) && p < (1 << 31) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not a supported prime")))
    }
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero element.
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Reduces a signed integer into `[0, p)`.
pub fn from_i64(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// Row echelon form in place; returns pivot columns.
pub fn row_reduce(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let iv = inv(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul(*x, iv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let t = mul(f, m[r][j], p);
                    m[i][j] = sub(m[i][j], t, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
    let mut m = m.to_vec();
    row_reduce(&mut m, p).len()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = m.to_vec();
    let pivots = row_reduce(&mut m, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = neg(m[r][f], p);
            }
            v
        })
        .collect()
}

/// Determinant by elimination.
pub fn det(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(c, piv);
            d = neg(d, p);
        }
        d = mul(d, a[c][c], p);
        let iv = inv(a[c][c], p);
        for i in c + 1..n {
            if a[i][c] != 0 {
                let f = mul(a[i][c], iv, p);
                for j in c..n {
                    let t = mul(f, a[c][j], p);
                    a[i][j] = sub(a[i][j], t, p);
                }
            }
        }
    }
    d
}

/// Sparse polynomial over `F_p` in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl Poly {
    pub fn zero(nvars: usize, p: u64) -> Self {
        Self {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: u64, nvars: usize, p: u64) -> Self {
        Self::monomial(c, vec![0; nvars], p)
    }

    pub fn var(i: usize, nvars: usize, p: u64) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(1, e, p)
    }

    pub fn monomial(c: u64, exps: Vec<u32>, p: u64) -> Self {
        let mut out = Self::zero(exps.len(), p);
        out.add_term(exps, c % p);
        out
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: u64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = add(*o.get(), c, self.p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, c: u64) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), mul(v, c % self.p, self.p));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, mul(ca, cb, self.p));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(1, self.nvars, self.p);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| mul(m, pow(x, k as u64, p), p));
            add(acc, m, p)
        })
    }

    /// Substitutes `x_i -> x_i^{k_i}` (a ring map into the same variables).
    pub fn substitute_powers(&self, ks: &[u32]) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (e, &c) in &self.terms {
            out.add_term(e.iter().zip(ks).map(|(a, k)| a * k).collect(), c);
        }
        out
    }

    /// Weighted degrees of the terms under a linear grading
    /// (`grading[i]` is the degree vector of variable `i`).
    pub fn term_degrees(&self, grading: &[Vec<i64>]) -> Vec<Vec<i64>> {
        self.terms
            .keys()
            .map(|e| monomial_degree(e, grading))
            .collect()
    }
}

pub fn monomial_degree(exps: &[u32], grading: &[Vec<i64>]) -> Vec<i64> {
    let dim = grading.first().map_or(0, Vec::len);
    let mut d = vec![0i64; dim];
    for (&a, g) in exps.iter().zip(grading) {
        for (di, gi) in d.iter_mut().zip(g) {
            *di += a as i64 * gi;
        }
    }
    d
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*{e:?}"))
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.p)
    }
}
