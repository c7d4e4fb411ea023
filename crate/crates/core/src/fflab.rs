//! Finite-field experiments on hypersurfaces
//! `x0^d f_0 + x0^{d-1} x1 f_1 + ... + x1^d f_d = 0` in `P^1 x P(w)`.
//!
//! Every random choice comes from a ChaCha stream seeded by the caller;
//! per-trial work uses its own stream so batches are reproducible in both
//! sequential and parallel mode.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff;
use crate::par::{self, Exec};
use crate::sqm;
use crate::wps::{monomials_of_degree, WeightVector};

/// A point of `P^1 x P(w)` given by coordinate representatives over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FFPoint {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FFHypersurface {
    pub p: u64,
    pub d: usize,
    pub e: i64,
    pub weights: WeightVector,
    /// Exponent vectors of the weighted monomials of degree `e`.
    pub monomials: Vec<Vec<u32>>,
    /// `coeffs[i][k]` is the coefficient of `monomials[k]` in `f_i`.
    pub coeffs: Vec<Vec<u64>>,
    pub seed: u64,
}

fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn validate(p: u64, d: usize, e: i64, w: &WeightVector) -> Result<()> {
    ff::check_prime(p)?;
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    if e <= 0 || !w.is_cartier_degree(e) {
        return Err(Error::InvalidInput(format!(
            "e = {e} must be a positive multiple of a(w) = {}",
            w.lcm()
        )));
    }
    let bound = w
        .weights()
        .iter()
        .copied()
        .max()
        .unwrap_or(1)
        .max(d as u64)
        .max(e as u64);
    if p <= bound {
        return Err(Error::InvalidInput(format!(
            "prime {p} must exceed max(weights, d, e) = {bound}"
        )));
    }
    Ok(())
}

impl FFHypersurface {
    /// Uses explicit coefficient tables, one row per form.
    pub fn from_coeffs(p: u64, d: usize, e: i64, w: WeightVector, coeffs: Vec<Vec<u64>>, seed: u64) -> Result<Self> {
        validate(p, d, e, &w)?;
        let monomials = monomials_of_degree(&w, e);
        if coeffs.len() != d + 1 || coeffs.iter().any(|c| c.len() != monomials.len()) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficient rows of length {}",
                d + 1,
                monomials.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|r| r.into_iter().map(|c| c % p).collect()).collect();
        Ok(Self {
            p,
            d,
            e,
            weights: w,
            monomials,
            coeffs,
            seed,
        })
    }

    pub fn m(&self) -> usize {
        self.weights.dim()
    }

    /// `f_0(y), ..., f_d(y)`.
    pub fn forms_at(&self, y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mvals: Vec<u64> = self
            .monomials
            .iter()
            .map(|m| {
                m.iter()
                    .zip(y)
                    .fold(1, |acc, (&a, &v)| ff::mul(acc, ff::pow(v, a as u64, p), p))
            })
            .collect();
        self.coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&mvals)
                    .fold(0, |acc, (&c, &v)| ff::add(acc, ff::mul(c, v, p), p))
            })
            .collect()
    }

    /// The defining equation at `(x0, x1, y)`.
    pub fn equation_at(&self, x0: u64, x1: u64, y: &[u64]) -> u64 {
        binary_form(&self.forms_at(y), x0, x1, self.p)
    }
}

/// `sum_i f_i x0^{d-i} x1^i`.
pub fn binary_form(f: &[u64], x0: u64, x1: u64, p: u64) -> u64 {
    let d = f.len() - 1;
    f.iter().enumerate().fold(0, |acc, (i, &fi)| {
        let t = ff::mul(
            fi,
            ff::mul(ff::pow(x0, (d - i) as u64, p), ff::pow(x1, i as u64, p), p),
            p,
        );
        ff::add(acc, t, p)
    })
}

/// Uniform coefficients for `f_0..f_d` from a generator seeded with `seed`.
pub fn sample_hypersurface(p: u64, d: usize, e: i64, w: &WeightVector, seed: u64) -> Result<FFHypersurface> {
    validate(p, d, e, w)?;
    let monomials = monomials_of_degree(w, e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=d)
        .map(|_| (0..monomials.len()).map(|_| rng.gen_range(0..p)).collect())
        .collect();
    Ok(FFHypersurface {
        p,
        d,
        e,
        weights: w.clone(),
        monomials,
        coeffs,
        seed,
    })
}

fn random_nonzero(rng: &mut ChaCha8Rng, len: usize, p: u64) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..len).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// Roots of the binary form in `P^1(F_p)`, as `(1, t)` and possibly `(0, 1)`.
pub fn binary_roots(f: &[u64], p: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = (0..p)
        .filter(|&t| {
            // Horner in t on f_0 + f_1 t + ... + f_d t^d
            f.iter().rev().fold(0, |acc, &c| ff::add(ff::mul(acc, t, p), c, p)) == 0
        })
        .map(|t| (1, t))
        .collect();
    if f.last() == Some(&0) {
        out.push((0, 1));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSample {
    pub p: u64,
    pub seed: u64,
    pub trials: usize,
    pub points: Vec<FFPoint>,
}

impl PointSample {
    pub fn yield_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.points.len() as f64 / self.trials as f64
        }
    }
}

fn attempt(h: &FFHypersurface, seed: u64, stream: u64) -> Option<FFPoint> {
    let mut rng = substream(seed, stream);
    let y = random_nonzero(&mut rng, h.weights.weights().len(), h.p);
    let f = h.forms_at(&y);
    let roots = if f.iter().all(|&c| c == 0) {
        vec![(1, rng.gen_range(0..h.p))]
    } else {
        binary_roots(&f, h.p)
    };
    if roots.is_empty() {
        return None;
    }
    let (x0, x1) = roots[rng.gen_range(0..roots.len())];
    Some(FFPoint { x: vec![x0, x1], y })
}

/// One attempt per trial: a random `y`, then a uniformly chosen root of
/// the binary form in `(x0 : x1)` if there is one. Trial `t` draws from
/// stream `t` of the seed.
pub fn sample_point_on_y(h: &FFHypersurface, trials: usize, seed: u64, exec: Exec) -> PointSample {
    let found = par::map_indexed(trials, exec, |t| attempt(h, seed, t as u64));
    PointSample {
        p: h.p,
        seed,
        trials,
        points: found.into_iter().flatten().collect(),
    }
}

/// The first `target` points over consecutive trial streams, giving up
/// after `64 * target` trials.
pub fn sample_points(h: &FFHypersurface, target: usize, seed: u64, exec: Exec) -> Vec<FFPoint> {
    let batch = (2 * target).max(32);
    let limit = 64 * target.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while out.len() < target && start < limit {
        let found = par::map_indexed(batch, exec, |t| attempt(h, seed, (start + t) as u64));
        out.extend(found.into_iter().flatten());
        start += batch;
    }
    out.truncate(target);
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RankStatistics {
    pub drop0: usize,
    pub drop1: usize,
    pub drop_more: usize,
    /// Points where every `f_i` vanishes, listed by their `y`.
    pub flagged: Vec<Vec<u64>>,
    /// Points whose drop exceeds 1 away from the common zeros.
    pub violations: usize,
}

/// Exact rank of `M` at each point; the drop is `d + 1 - rank`.
pub fn rank_statistics(h: &FFHypersurface, points: &[FFPoint], exec: Exec) -> RankStatistics {
    let per = par::map_slice(points, exec, |pt| {
        let f = h.forms_at(&pt.y);
        let m = sqm::eval_m(pt.x[0], pt.x[1], &f, h.p);
        let drop = h.d + 1 - ff::rank(&m, h.p);
        (drop, f.iter().all(|&c| c == 0), pt.y.clone())
    });
    let mut s = RankStatistics::default();
    for (drop, common, y) in per {
        match drop {
            0 => s.drop0 += 1,
            1 => s.drop1 += 1,
            _ => s.drop_more += 1,
        }
        if common {
            s.flagged.push(y);
        } else if drop > 1 {
            s.violations += 1;
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub p: u64,
    pub seed: u64,
    pub trials: usize,
    pub hits: usize,
    /// `trials * p^{-(d+1)}`: the heuristic count for a locus of
    /// codimension `d + 1`.
    pub expected: f64,
}

/// Monte Carlo count of affine `y != 0` where all `f_i` vanish.
pub fn common_zero_probe(h: &FFHypersurface, trials: usize, seed: u64, exec: Exec) -> ProbeReport {
    let hits = par::map_indexed(trials, exec, |t| {
        let mut rng = substream(seed, t as u64);
        let y = random_nonzero(&mut rng, h.weights.weights().len(), h.p);
        h.forms_at(&y).iter().all(|&c| c == 0)
    })
    .into_iter()
    .filter(|&b| b)
    .count();
    ProbeReport {
        p: h.p,
        seed,
        trials,
        hits,
        expected: trials as f64 * (h.p as f64).powi(-(h.d as i32 + 1)),
    }
}

/// Integer polynomial, lowest degree first.
pub type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// `((T-1)^{d+1} - 1) / (T - 2)`, with the exactness of the division
/// checked.
pub fn p_poly(d: usize) -> IntPoly {
    assert!(d >= 1, "p_poly needs d >= 1");
    // (T-1)^{d+1}
    let mut num: IntPoly = vec![BigInt::one()];
    for _ in 0..=d {
        let mut next = vec![BigInt::zero(); num.len() + 1];
        for (i, c) in num.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c;
        }
        num = next;
    }
    num[0] -= BigInt::one();
    // synthetic division by T - 2
    let n = num.len() - 1;
    let mut quo = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..=n).rev() {
        let c: BigInt = &num[i] + &carry * 2u32;
        if i == 0 {
            assert!(c.is_zero(), "T - 2 divides (T-1)^(d+1) - 1");
        } else {
            quo[i - 1] = c.clone();
        }
        carry = c;
    }
    trim(&mut quo);
    quo
}

pub fn derivative(p: &[BigInt]) -> IntPoly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn mod_poly(p: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    let mut v: Vec<u64> = p
        .iter()
        .map(|c| {
            let r = ((c % &qb) + &qb) % &qb;
            u64::try_from(r).expect("residue fits")
        })
        .collect();
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Monic gcd over `F_q`; lowest degree first.
pub fn gcd_mod(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let norm = |mut v: Vec<u64>| {
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (norm(a.to_vec()), norm(b.to_vec()));
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        let lead_inv = ff::inv(*b.last().unwrap(), q);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let c = ff::mul(*a.last().unwrap(), lead_inv, q);
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = ff::sub(a[shift + i], ff::mul(c, bi, q), q);
            }
            a = norm(a);
            if a.len() < b.len() || (a.len() == 1 && a[0] == 0) {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = ff::inv(*a.last().unwrap(), q);
    a.iter().map(|&c| ff::mul(c, inv, q)).collect()
}

/// Squarefree over `F_q`: `deg p` survives reduction and
/// `gcd(p, p') = 1`.
pub fn is_squarefree_mod(p: &[BigInt], q: u64) -> bool {
    let pm = mod_poly(p, q);
    if pm.len() != p.len() {
        return false;
    }
    let dm = mod_poly(&derivative(p), q);
    if dm.len() == 1 && dm[0] == 0 {
        return false;
    }
    gcd_mod(&pm, &dm, q).len() == 1
}

/// Degree of `gcd(p, p')` over the rationals by exact Euclid.
pub fn rational_gcd_degree(p: &[BigInt], q: &[BigInt]) -> usize {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> {
        v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let norm = |mut v: Vec<BigRational>| {
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    };
    let is_zero = |v: &[BigRational]| v.len() == 1 && v[0].is_zero();
    let (mut a, mut b) = (norm(to_q(p)), norm(to_q(q)));
    while !is_zero(&b) {
        while a.len() >= b.len() && !is_zero(&a) {
            let shift = a.len() - b.len();
            let c = a.last().unwrap() / b.last().unwrap();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = &a[shift + i] - &c * bi;
            }
            a = norm(a);
            if a.len() < b.len() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

/// Squarefree over the rationals.
///
/// `p` is monic, so a square factor over `Q` survives reduction modulo any
/// prime; a single prime `q > deg p` with `gcd(p, p') = 1` over `F_q`
/// certifies squarefreeness. Falls back to exact rational Euclid.
pub fn is_squarefree_q(p: &[BigInt]) -> bool {
    let n = p.len() as u64;
    let monic = p.last().is_some_and(|c| c.abs().is_one());
    if monic {
        let mut q = n.max(2) + 1;
        let mut tried = 0;
        while tried < 8 {
            if ff::is_prime(q) {
                if is_squarefree_mod(p, q) {
                    return true;
                }
                tried += 1;
            }
            q += 1;
        }
    }
    rational_gcd_degree(p, &derivative(p)) == 0
}

/// The polynomial cut out on the fibre over `y = (1, ..., 1)` in the chart
/// `z_1 = 1`: with `x1 = -1` and `x0 = T`, the kernel equations give
/// `z_{i+1} = 1 - T z_i`, and the fibre is `z_{d+1} = 0`.
pub fn fibre_polynomial(d: usize) -> IntPoly {
    let mut z: IntPoly = vec![BigInt::one()];
    for _ in 0..d {
        // 1 - T z
        let mut next = vec![BigInt::zero(); z.len() + 1];
        next[0] = BigInt::one();
        for (i, c) in z.iter().enumerate() {
            next[i + 1] -= c;
        }
        z = next;
    }
    trim(&mut z);
    z
}
