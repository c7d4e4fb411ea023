//! Pointwise evaluation of the two degeneracy loci and the maps between them.

use serde::{Deserialize, Serialize};

use super::{build_m, n_shape, entry_value, subsets, Entry};
use crate::error::{Error, Result};
use crate::ff;
use crate::fflab::{FFHypersurface, FFPoint};

/// A point of `Y'`: the base coordinates `y` and the fibre coordinates `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlippedPoint {
    pub y: Vec<u64>,
    pub z: Vec<u64>,
}

pub fn eval_m(x0: u64, x1: u64, f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let sym = build_m(f.len() - 1);
    let x = [x0 % p, x1 % p];
    sym.0
        .iter()
        .map(|row| row.iter().map(|&e| entry_value(e, &x, &[], f, &[], p)).collect())
        .collect()
}

pub fn eval_n(z: &[u64], f: &[u64], p: u64) -> Result<Vec<Vec<u64>>> {
    if z.len() + 1 != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len() - 1,
            got: z.len(),
        });
    }
    let sym = n_shape(z.len(), Entry::F)?;
    Ok(sym
        .0
        .iter()
        .map(|row| row.iter().map(|&e| entry_value(e, &[], z, f, &[], p)).collect())
        .collect())
}

/// True when every maximal minor of `N(z, f)` vanishes.
pub fn minors_vanish(z: &[u64], f: &[u64], p: u64) -> Result<bool> {
    let n = eval_n(z, f, p)?;
    Ok(subsets(n.len(), 3).iter().all(|rows| {
        let sub: Vec<Vec<u64>> = rows.iter().map(|&r| n[r].clone()).collect();
        ff::det(&sub, p) == 0
    }))
}

fn all_zero(v: &[u64]) -> bool {
    v.iter().all(|&a| a == 0)
}

/// `Y -> Y'`: solves `M (z, 1) = 0`.
pub fn sqm_forward(h: &FFHypersurface, pt: &FFPoint) -> Result<FlippedPoint> {
    let p = h.p;
    if pt.x.len() != 2 || pt.y.len() != h.m() + 1 {
        return Err(Error::DimensionMismatch {
            expected: h.m() + 1,
            got: pt.y.len(),
        });
    }
    if all_zero(&pt.x) || all_zero(&pt.y) {
        return Err(Error::NotOnVariety("a coordinate block vanishes".into()));
    }
    if h.equation_at(pt.x[0], pt.x[1], &pt.y) != 0 {
        return Err(Error::NotOnVariety(format!("{:?} is not on Y", pt)));
    }
    let f = h.forms_at(&pt.y);
    if all_zero(&f) {
        return Err(Error::Indeterminacy(format!("all forms vanish at y = {:?}", pt.y)));
    }
    let m = eval_m(pt.x[0], pt.x[1], &f, p);
    let ker = ff::kernel(&m, h.d + 1, p);
    if ker.len() != 1 {
        return Err(Error::NotOnVariety(format!("kernel of M has dimension {}", ker.len())));
    }
    let v = &ker[0];
    let t = v[h.d];
    debug_assert!(t != 0, "kernel vector with vanishing last entry");
    let it = ff::inv(t, p);
    let z = v[..h.d].iter().map(|&a| ff::mul(a, it, p)).collect();
    Ok(FlippedPoint { y: pt.y.clone(), z })
}

/// `Y' -> Y`: solves `N (x0, x1, 1) = 0`.
pub fn sqm_backward(h: &FFHypersurface, q: &FlippedPoint) -> Result<FFPoint> {
    let p = h.p;
    if h.d == 1 {
        return Err(Error::DivisorialContraction);
    }
    if q.z.len() != h.d || q.y.len() != h.m() + 1 {
        return Err(Error::DimensionMismatch {
            expected: h.d,
            got: q.z.len(),
        });
    }
    if all_zero(&q.y) {
        return Err(Error::NotOnVariety("y vanishes".into()));
    }
    if all_zero(&q.z) {
        return Err(Error::Indeterminacy("z = 0".into()));
    }
    let f = h.forms_at(&q.y);
    if !minors_vanish(&q.z, &f, p)? {
        return Err(Error::NotOnVariety("some maximal minor of N is nonzero".into()));
    }
    let n = eval_n(&q.z, &f, p)?;
    let ker = ff::kernel(&n, 3, p);
    if ker.len() != 1 {
        return Err(Error::NotOnVariety(format!("kernel of N has dimension {}", ker.len())));
    }
    let v = &ker[0];
    // the first two columns of N are independent once z != 0
    let it = ff::inv(v[2], p);
    let x = vec![ff::mul(v[0], it, p), ff::mul(v[1], it, p)];
    if all_zero(&x) {
        return Err(Error::Indeterminacy(format!("all forms vanish at y = {:?}", q.y)));
    }
    Ok(FFPoint { x, y: q.y.clone() })
}

/// Whether `b = lambda^w a` for some `lambda` in `F_p^*`.
pub fn weighted_equivalent(a: &[u64], b: &[u64], w: &[u64], p: u64) -> bool {
    if a.len() != b.len() || a.len() != w.len() {
        return false;
    }
    (1..p).any(|l| {
        a.iter()
            .zip(b)
            .zip(w)
            .all(|((&ai, &bi), &wi)| ff::mul(ff::pow(l, wi, p), ai, p) == bi % p)
    })
}

/// Equality of points of `Y` up to the torus.
pub fn points_equivalent(a: &FFPoint, b: &FFPoint, w: &[u64], p: u64) -> bool {
    weighted_equivalent(&a.x, &b.x, &[1, 1], p) && weighted_equivalent(&a.y, &b.y, w, p)
}

/// Equality of points of `Y'` up to the torus: `y` is weighted, and `z` may
/// be rescaled independently.
pub fn flipped_equivalent(a: &FlippedPoint, b: &FlippedPoint, w: &[u64], p: u64) -> bool {
    weighted_equivalent(&a.y, &b.y, w, p) && weighted_equivalent(&a.z, &b.z, &vec![1; a.z.len()], p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fflab::{sample_hypersurface, sample_points};
    use crate::par::Exec;
    use crate::wps::WeightVector;

    #[test]
    fn m_evaluates_to_expected_determinant() {
        let p = 97;
        let f = [3, 5, 7, 11];
        let m = eval_m(2, 9, &f, p);
        let expect = f.iter().enumerate().fold(0, |acc, (i, &fi)| {
            let t = ff::mul(ff::mul(ff::pow(2, (3 - i) as u64, p), ff::pow(9, i as u64, p), p), fi, p);
            ff::add(acc, t, p)
        });
        assert_eq!(ff::det(&m, p), expect);
    }

    #[test]
    fn roundtrip_on_sampled_points() {
        let w = WeightVector::new(vec![1, 1, 1, 1]).unwrap();
        let h = sample_hypersurface(101, 3, 2, &w, 7).unwrap();
        let pts = sample_points(&h, 30, 11, Exec::Sequential);
        assert!(!pts.is_empty());
        for pt in &pts {
            let q = sqm_forward(&h, pt).unwrap();
            assert!(minors_vanish(&q.z, &h.forms_at(&q.y), h.p).unwrap());
            let back = sqm_backward(&h, &q).unwrap();
            assert!(points_equivalent(&back, pt, h.weights.weights(), h.p));
        }
    }

    #[test]
    fn d_one_has_no_inverse() {
        let w = WeightVector::new(vec![1, 1, 1]).unwrap();
        let h = sample_hypersurface(31, 1, 1, &w, 3).unwrap();
        let pt = &sample_points(&h, 1, 5, Exec::Sequential)[0];
        let q = sqm_forward(&h, pt).unwrap();
        assert_eq!(q.z.len(), 1);
        assert_eq!(sqm_backward(&h, &q), Err(Error::DivisorialContraction));
    }

    #[test]
    fn weighted_equivalence() {
        let p = 11;
        // lambda = 2 with weights (1, 2)
        assert!(weighted_equivalent(&[1, 1], &[2, 4], &[1, 2], p));
        assert!(!weighted_equivalent(&[1, 1], &[2, 3], &[1, 2], p));
    }
}
