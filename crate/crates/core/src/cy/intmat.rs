//! Integer matrices: products, powers, characteristic polynomials and an
//! exact finite-order test via cyclotomic factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<IntMatrix> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = 0i64;
            for k in 0..inner {
                s = a[i][k]
                    .checked_mul(b[k][j])
                    .and_then(|t| s.checked_add(t))
                    .ok_or(Error::Overflow("integer matrix product"))?;
            }
            out[i][j] = s;
        }
    }
    Ok(out)
}

pub fn apply(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

type BigMatrix = Vec<Vec<BigInt>>;

fn to_big(a: &[Vec<i64>]) -> BigMatrix {
    a.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn big_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn big_pow(a: &BigMatrix, mut e: u64) -> BigMatrix {
    let n = a.len();
    let mut result: BigMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = big_mul(&result, &base);
        }
        base = big_mul(&base, &base);
        e >>= 1;
    }
    result
}

fn is_identity(a: &BigMatrix) -> bool {
    a.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, x)| *x == BigInt::from(i64::from(i == j)))
    })
}

/// `A^e` with overflow detection.
pub fn pow(a: &[Vec<i64>], e: u64) -> Result<IntMatrix> {
    big_pow(&to_big(a), e)
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow("matrix power")))
                .collect()
        })
        .collect()
}

/// Coefficients of `det(T I - A)`, lowest degree first (Faddeev-LeVerrier).
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a = to_big(a);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m: BigMatrix = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = big_mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = big_mul(&a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    coeffs
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Division by a monic polynomial; `None` if the remainder is nonzero.
fn div_exact(p: &[BigInt], q: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(q.last().is_some_and(One::is_one));
    if p.len() < q.len() {
        return None;
    }
    let mut r = p.to_vec();
    let dq = q.len() - 1;
    let mut quo = vec![BigInt::zero(); p.len() - dq];
    for i in (0..quo.len()).rev() {
        let c = r[i + dq].clone();
        if c.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            r[i + j] -= &c * qj;
        }
        quo[i] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(quo)
    } else {
        None
    }
}

/// The cyclotomic polynomial `Phi_k`, lowest degree first.
pub fn cyclotomic(k: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); k as usize + 1];
    p[0] = -BigInt::one();
    p[k as usize] = BigInt::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = div_exact(&p, &cyclotomic(d)).expect("x^k - 1 is divisible by Phi_d");
        }
    }
    p
}

/// `Some(order)` if `A` has finite order, `None` otherwise.
///
/// Finite iff the characteristic polynomial is a product of cyclotomic
/// factors `Phi_k` and `A^M = I` for `M` the lcm of those `k`.
pub fn matrix_order(a: &[Vec<i64>]) -> Result<Option<u64>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    let mut p = char_poly(a);
    let det = if n.is_multiple_of(2) { p[0].clone() } else { -p[0].clone() };
    if det.abs() != BigInt::one() {
        return Err(Error::InvalidInput(format!(
            "matrix is not invertible over the integers (det = {det})"
        )));
    }
    // phi(k) <= n forces k <= 2 n^2.
    let bound = (2 * n * n).max(2) as u64;
    let mut lcm = 1u64;
    for k in 1..=bound {
        let phi = cyclotomic(k);
        while let Some(q) = div_exact(&p, &phi) {
            p = q;
            trim(&mut p);
            lcm = lcm.lcm(&k);
        }
        if p.len() == 1 {
            break;
        }
    }
    if p.len() != 1 {
        return Ok(None);
    }
    let big = to_big(a);
    if !is_identity(&big_pow(&big, lcm)) {
        return Ok(None);
    }
    // The exact order divides lcm.
    let order = (1..=lcm)
        .filter(|d| lcm.is_multiple_of(*d))
        .find(|&d| is_identity(&big_pow(&big, d)))
        .unwrap_or(lcm);
    Ok(Some(order))
}

pub fn is_infinite_order(a: &[Vec<i64>]) -> Result<bool> {
    Ok(matrix_order(a)?.is_none())
}
