//! Divisor classes and rational polyhedral cones in the class lattice `Z^rho`.
//!
//! Cones are kept in a canonical form: primitive integer generators, zero
//! vectors dropped, sorted and deduplicated. All membership and
//! disjointness questions are answered exactly, by facet enumeration for
//! small full-dimensional cones and by [`fm::feasible`] otherwise.

pub mod fm;
pub mod qmat;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use fm::{Constraint, Rel};

/// Coordinates with respect to the restricted hyperplane classes
/// `H_1, ..., H_rho`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    /// The basis class `H_i` (0-based).
    pub fn basis(rho: usize, i: usize) -> Self {
        let mut v = vec![0; rho];
        v[i] = 1;
        Self(v)
    }

    pub fn rho(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finitely generated cone `sum R>=0 g_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct RationalCone {
    rho: usize,
    generators: Vec<Vec<i64>>,
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

impl RationalCone {
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let rho = generators
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("cone needs at least one generator".into()))?;
        Self::with_rho(rho, generators)
    }

    /// Like [`RationalCone::new`] but with an explicit ambient rank, so the
    /// dimension check also covers the first generator.
    pub fn with_rho(rho: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.len() != rho) {
            return Err(Error::DimensionMismatch {
                expected: rho,
                got: bad.len(),
            });
        }
        let mut gens: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .map(|g| primitive(g))
            .collect();
        gens.sort();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::InvalidInput("cone has only zero generators".into()));
        }
        Ok(Self {
            rho,
            generators: gens,
        })
    }

    pub fn from_classes(classes: &[DivisorClass]) -> Result<Self> {
        Self::new(classes.iter().map(|c| c.0.clone()).collect())
    }

    /// The nonnegative orthant spanned by `H_1, ..., H_rho`.
    pub fn orthant(rho: usize) -> Self {
        Self::new((0..rho).map(|i| DivisorClass::basis(rho, i).0).collect())
            .expect("orthant is nonempty")
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Applies an integer matrix (acting on columns) to every generator.
    pub fn transform(&self, m: &[Vec<i64>]) -> Self {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                (0..self.rho)
                    .map(|i| (0..self.rho).map(|j| m[i][j] * g[j]).sum())
                    .collect()
            })
            .collect();
        Self::with_rho(self.rho, gens).expect("invertible image of a nonzero cone")
    }

    /// Drops generators lying in the cone spanned by the others.
    pub fn minimize(&self) -> Self {
        if let Some(normals) = facets(self.rho, &self.generators) {
            if qmat::rank(&qmat::from_ints(&normals)) == self.rho {
                // pointed: keep the generators on rho - 1 independent facets
                let generators = self
                    .generators
                    .iter()
                    .filter(|g| {
                        let tight: Vec<Vec<i64>> = normals.iter().filter(|n| dot(n, g) == 0).cloned().collect();
                        !tight.is_empty() && qmat::rank(&qmat::from_ints(&tight)) + 1 == self.rho
                    })
                    .cloned()
                    .collect();
                return Self {
                    rho: self.rho,
                    generators,
                };
            }
        }
        let mut gens = self.generators.clone();
        let mut i = 0;
        while i < gens.len() {
            if gens.len() > 1 {
                let others: Vec<Vec<i64>> = gens
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                if contains_vec(self.rho, &others, &gens[i]) {
                    gens.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        Self {
            rho: self.rho,
            generators: gens,
        }
    }

    /// Cone generated by the union of both generator sets.
    pub fn hull(&self, other: &Self) -> Result<Self> {
        check_dims(self.rho, other.rho)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Self::with_rho(self.rho, gens)?.minimize())
    }

    /// `rho` linearly independent generators.
    pub fn is_simplicial_full(&self) -> bool {
        self.generators.len() == self.rho
            && qmat::rank(&qmat::from_ints(&self.generators)) == self.rho
    }
}

impl TryFrom<Vec<Vec<i64>>> for RationalCone {
    type Error = Error;
    fn try_from(v: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RationalCone> for Vec<Vec<i64>> {
    fn from(c: RationalCone) -> Self {
        c.generators
    }
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| DivisorClass(g.clone()).to_string())
            .collect();
        write!(f, "cone({})", parts.join(", "))
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        })
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

const FACET_BUDGET: u128 = 20_000;

/// Inward facet normals of a full-dimensional cone, found by running over
/// hyperplanes spanned by `rho - 1` generators. `None` when the generators
/// do not span, `rho < 2`, or there are too many subsets to try.
fn facets(rho: usize, gens: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let k = gens.len();
    if rho < 2 || k < rho {
        return None;
    }
    let mut count: u128 = 1;
    for i in 0..(rho - 1) as u128 {
        count = count * (k as u128 - i) / (i + 1);
        if count > FACET_BUDGET {
            return None;
        }
    }
    if qmat::rank(&qmat::from_ints(gens)) < rho {
        return None;
    }
    let mut out = std::collections::BTreeSet::new();
    let mut idx: Vec<usize> = (0..rho - 1).collect();
    loop {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| gens[i].clone()).collect();
        let ker = qmat::integer_kernel(&qmat::from_ints(&rows), rho);
        if ker.len() == 1 {
            let n: Option<Vec<i64>> = ker[0].iter().map(num_traits::ToPrimitive::to_i64).collect();
            let n = n?;
            let signs: Vec<i128> = gens.iter().map(|g| dot(&n, g).signum()).collect();
            if signs.iter().all(|&s| s >= 0) {
                out.insert(n);
            } else if signs.iter().all(|&s| s <= 0) {
                out.insert(n.iter().map(|x| -x).collect());
            }
        }
        // next (rho - 1)-subset in lexicographic order
        let m = idx.len();
        let mut p = m;
        while p > 0 && idx[p - 1] == k - m + p - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..m {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Some(out.into_iter().collect())
}

fn contains_vec_fm(rho: usize, gens: &[Vec<i64>], d: &[i64]) -> bool {
    let k = gens.len();
    let mut cs = Vec::with_capacity(rho + k);
    for r in 0..rho {
        let row: Vec<i64> = gens.iter().map(|g| g[r]).collect();
        cs.push(Constraint::from_ints(&row, Rel::Eq, d[r]));
    }
    for i in 0..k {
        let mut row = vec![0; k];
        row[i] = -1;
        cs.push(Constraint::from_ints(&row, Rel::Le, 0));
    }
    fm::feasible(k, &cs)
}

fn contains_vec(rho: usize, gens: &[Vec<i64>], d: &[i64]) -> bool {
    match facets(rho, gens) {
        Some(normals) => normals.iter().all(|n| dot(n, d) >= 0),
        None => contains_vec_fm(rho, gens, d),
    }
}

fn contains_all(rho: usize, gens: &[Vec<i64>], ds: &[Vec<i64>]) -> bool {
    match facets(rho, gens) {
        Some(normals) => ds.iter().all(|d| normals.iter().all(|n| dot(n, d) >= 0)),
        None => ds.iter().all(|d| contains_vec_fm(rho, gens, d)),
    }
}

/// `D` is a nonnegative rational combination of the generators of `C`.
pub fn cone_contains(c: &RationalCone, d: &DivisorClass) -> Result<bool> {
    check_dims(c.rho, d.rho())?;
    Ok(contains_vec(c.rho, &c.generators, &d.0))
}

/// Mutual containment of generators.
pub fn cones_equal(a: &RationalCone, b: &RationalCone) -> Result<bool> {
    check_dims(a.rho, b.rho)?;
    let inside = |x: &RationalCone, y: &RationalCone| contains_all(y.rho, &y.generators, &x.generators);
    Ok(inside(a, b) && inside(b, a))
}

/// `C1 ⊆ C2`.
pub fn cone_subset(a: &RationalCone, b: &RationalCone) -> Result<bool> {
    check_dims(a.rho, b.rho)?;
    Ok(contains_all(b.rho, &b.generators, &a.generators))
}

/// The open cones of two full-dimensional simplicial cones do not meet.
///
/// Decides strict feasibility of `G1 l = G2 m`, `l > 0`, `m > 0`.
pub fn interiors_disjoint(a: &RationalCone, b: &RationalCone) -> Result<bool> {
    check_dims(a.rho, b.rho)?;
    for c in [a, b] {
        if !c.is_simplicial_full() {
            return Err(Error::NotSimplicial(c.to_string()));
        }
    }
    let rho = a.rho;
    let n = 2 * rho;
    let mut cs = Vec::new();
    for r in 0..rho {
        let mut row: Vec<i64> = a.generators.iter().map(|g| g[r]).collect();
        row.extend(b.generators.iter().map(|g| -g[r]));
        cs.push(Constraint::from_ints(&row, Rel::Eq, 0));
    }
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = -1;
        cs.push(Constraint::from_ints(&row, Rel::Lt, 0));
    }
    Ok(!fm::feasible(n, &cs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(g: &[&[i64]]) -> RationalCone {
        RationalCone::new(g.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn dc(v: &[i64]) -> DivisorClass {
        DivisorClass(v.to_vec())
    }

    #[test]
    fn containment_examples() {
        let c = cone(&[&[1, 0], &[0, 1]]);
        assert!(cone_contains(&c, &dc(&[1, 0])).unwrap());
        for e in 0..5 {
            assert!(!cone_contains(&c, &dc(&[-1, e])).unwrap());
        }
        let c2 = cone(&[&[2, 1], &[1, 2]]);
        assert!(cone_contains(&c2, &dc(&[1, 1])).unwrap());
        assert!(!cone_contains(&c2, &dc(&[1, 0])).unwrap());
        assert!(cone_contains(&c, &dc(&[1])).is_err());
    }

    #[test]
    fn equality_examples() {
        let a = cone(&[&[1, 0], &[0, 1]]);
        assert!(cones_equal(&a, &cone(&[&[0, 1], &[1, 0]])).unwrap());
        assert!(cones_equal(&a, &cone(&[&[2, 0], &[0, 3]])).unwrap());
        assert_eq!(a, cone(&[&[0, 3], &[2, 0]]));
        for e in 1..5 {
            assert!(!cones_equal(&a, &cone(&[&[1, 0], &[-1, e]])).unwrap());
        }
    }

    #[test]
    fn disjointness_examples() {
        let a = cone(&[&[1, 0], &[0, 1]]);
        assert!(!interiors_disjoint(&a, &a).unwrap());
        assert!(interiors_disjoint(&a, &cone(&[&[-1, 0], &[0, 1]])).unwrap());
        assert!(interiors_disjoint(&cone(&[&[1, 0], &[1, 1]]), &cone(&[&[1, 1], &[0, 1]])).unwrap());
        let bad = cone(&[&[1, 0], &[2, 0]]);
        assert!(interiors_disjoint(&a, &bad).is_err());
    }

    #[test]
    fn minimize_and_hull() {
        let c = cone(&[&[1, 0], &[1, 1], &[0, 1]]).minimize();
        assert_eq!(c, cone(&[&[1, 0], &[0, 1]]));
        let h = cone(&[&[1, 0], &[0, 1]])
            .hull(&cone(&[&[1, 0], &[-1, 4]]))
            .unwrap();
        assert_eq!(h, cone(&[&[1, 0], &[-1, 4]]));
    }

    #[test]
    fn json_is_integer_arrays() {
        let c = cone(&[&[0, 2], &[3, 0]]);
        assert_eq!(serde_json::to_string(&c).unwrap(), "[[0,1],[1,0]]");
        let back: RationalCone = serde_json::from_str("[[1,0],[0,1]]").unwrap();
        assert_eq!(back, c);
    }

    proptest::proptest! {
        #[test]
        fn facet_path_agrees_with_elimination(
            gens in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 3..=7),
            d in proptest::collection::vec(-4i64..=4, 3),
        ) {
            proptest::prop_assume!(facets(3, &gens).is_some());
            let normals = facets(3, &gens).unwrap();
            proptest::prop_assert_eq!(normals.iter().all(|n| dot(n, &d) >= 0), contains_vec_fm(3, &gens, &d));
        }
    }
}
