//! Toric data around the flip: the Cox ring of the projective bundle
//! `P(E)` over `P^1 x P(w)`, the ideal of `Y` inside it, quadratic
//! generators of Veronese ideals, and the section count on `Z+`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::classify::cox::{CoxPresentation, CoxVariable, Form, Relation, Term};
use crate::error::{Error, Result};
use crate::lattice::{qmat, DivisorClass};
use crate::wps::{monomials_of_degree, product_section_count, section_count, Multidegree, ProductSpace, WeightVector};

/// Variables `x0, x1` of degree `(1,0,0)`, `y_j` of degree `(0,w_j,0)`,
/// `z_i` of degree `(-1,0,1)` and `t` of degree `(0,-e,1)`; the last
/// coordinate is the tautological class. Forms `f_i` of degree `(0,e,0)`
/// in the `y`s are listed for use by the ideal of `Y`.
pub fn cox_of_pe(d: usize, e: i64, w: &WeightVector) -> Result<CoxPresentation> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    if e <= 0 || !w.is_cartier_degree(e) {
        return Err(Error::InvalidInput(format!("a(w) = {} does not divide e = {e}", w.lcm())));
    }
    let var = |name: String, deg: [i64; 3]| CoxVariable {
        name,
        degree: DivisorClass(deg.to_vec()),
    };
    let mut variables = vec![var("x0".into(), [1, 0, 0]), var("x1".into(), [1, 0, 0])];
    for (j, &wj) in w.weights().iter().enumerate() {
        variables.push(var(format!("y{j}"), [0, wj as i64, 0]));
    }
    for i in 1..=d {
        variables.push(var(format!("z{i}"), [-1, 0, 1]));
    }
    variables.push(var("t".into(), [0, -e, 1]));
    let ys: Vec<usize> = (2..w.dim() + 3).collect();
    let forms = (0..=d)
        .map(|i| Form {
            name: format!("f{i}"),
            degree: DivisorClass(vec![0, e, 0]),
            support: ys.clone(),
        })
        .collect();
    Ok(CoxPresentation {
        variables,
        forms,
        relations: Vec::new(),
    })
}

/// `f_0 t + x1 z1`, `f_i t - x0 z_i + x1 z_{i+1}`, `f_d t - x0 z_d`, and `t`.
/// Each `f_i` carries a factor `t` so that the relations are homogeneous in
/// the grading of [`cox_of_pe`].
pub fn ideal_of_y_in_pe(d: usize) -> Vec<Relation> {
    let mut rels: Vec<Relation> = crate::classify::cox::z_relations(d)
        .into_iter()
        .map(|mut r| {
            r.terms[0].factors.push(("t".into(), 1));
            r
        })
        .collect();
    rels.push(Relation {
        terms: vec![Term::new(1, &["t"])],
    });
    rels
}

/// Sets `t = 1` and drops the relation `t`, giving the relations with
/// auxiliary variables on `Y` itself.
pub fn dehomogenize(rels: &[Relation]) -> Vec<Relation> {
    rels.iter()
        .filter_map(|r| {
            let terms: Vec<Term> = r
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff,
                    factors: t.factors.iter().filter(|(n, _)| n != "t").cloned().collect(),
                })
                .collect();
            let trivial = terms.len() == 1 && terms[0].factors.is_empty();
            (!trivial).then_some(Relation { terms })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VeroneseQuadrics {
    /// `u_k` is the monomial with exponent vector `monomials[k]`.
    pub monomials: Vec<Vec<u32>>,
    pub quadrics: Vec<String>,
}

/// The degree-2 part of the ideal of the weighted Veronese image of
/// `P(w)` under `|O(e)|`.
pub fn veronese_quadrics(w: &WeightVector, e: i64, cap: usize) -> Result<VeroneseQuadrics> {
    if e <= 0 || !w.is_cartier_degree(e) {
        return Err(Error::InvalidInput(format!("a(w) = {} does not divide e = {e}", w.lcm())));
    }
    let count = section_count(w, e);
    let n = count.to_usize().filter(|&n| n <= cap).ok_or_else(|| Error::CapExceeded {
        cap,
        needed: count.to_usize().unwrap_or(usize::MAX),
    })?;
    let monomials = monomials_of_degree(w, e);
    debug_assert_eq!(monomials.len(), n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let targets = monomials_of_degree(w, 2 * e);
    let column = |&(a, b): &(usize, usize)| -> usize {
        let prod: Vec<u32> = monomials[a].iter().zip(&monomials[b]).map(|(x, y)| x + y).collect();
        targets.binary_search_by(|t| prod.cmp(t)).expect("product has degree 2e")
    };
    let mut mat = vec![vec![0i64; pairs.len()]; targets.len()];
    for (c, pair) in pairs.iter().enumerate() {
        mat[column(pair)][c] = 1;
    }
    let kernel = qmat::integer_kernel(&qmat::from_ints(&mat), pairs.len());
    let quadrics = kernel.iter().map(|v| quadric_string(v, &pairs)).collect();
    Ok(VeroneseQuadrics { monomials, quadrics })
}

fn quadric_string(v: &[BigInt], pairs: &[(usize, usize)]) -> String {
    let flip = v.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
    let mut s = String::new();
    for (c, &(a, b)) in v.iter().zip(pairs) {
        if c.is_zero() {
            continue;
        }
        let c = if flip { -c } else { c.clone() };
        if c.is_negative() {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let mag = c.abs();
        if mag != BigInt::from(1) {
            s.push_str(&format!("{mag}*"));
        }
        if a == b {
            s.push_str(&format!("u{a}^2"));
        } else {
            s.push_str(&format!("u{a}*u{b}"));
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipSections {
    pub total: u64,
    /// Per summand `O(0,0), O(0,0), O(-1,e)`.
    pub breakdown: Vec<u64>,
}

/// `h^0` of `O(0,0)^2 + O(-1,e)` on `P^{d-1} x P(w)`.
pub fn flip_section_check(d: usize, e: i64, w: &WeightVector) -> Result<FlipSections> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("need d >= 2, got {d}")));
    }
    if e <= 0 || !w.is_cartier_degree(e) {
        return Err(Error::InvalidInput(format!("a(w) = {} does not divide e = {e}", w.lcm())));
    }
    let base = ProductSpace::new(vec![WeightVector::projective(d - 1), w.clone()])?;
    let breakdown = [[0, 0], [0, 0], [-1, e]]
        .iter()
        .map(|deg| {
            let c = product_section_count(&base, &Multidegree(deg.to_vec()))?;
            c.to_u64().ok_or(Error::Overflow("section count"))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(FlipSections {
        total: breakdown.iter().sum(),
        breakdown,
    })
}
