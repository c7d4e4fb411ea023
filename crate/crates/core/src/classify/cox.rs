//! Graded Cox ring presentations and their finite-field instantiation.
//!
//! A presentation lists graded variables, named coefficient forms (general
//! polynomials of a fixed degree in a subset of the variables) and
//! relations built from both. Instantiating it draws the coefficients of
//! every form from a seeded generator.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{self, Poly};
use crate::lattice::DivisorClass;
use crate::wps::WeightVector;

/// Default bound on the number of monomials in any graded piece.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxVariable {
    pub name: String,
    pub degree: DivisorClass,
}

/// A general form of the given degree in the variables `support`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Form {
    pub name: String,
    pub degree: DivisorClass,
    #[serde(skip)]
    pub support: Vec<usize>,
}

/// `coeff * prod name^exp`, where names refer to variables or forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub factors: Vec<(String, u32)>,
}

impl Term {
    pub fn new(coeff: i64, factors: &[&str]) -> Self {
        Self {
            coeff,
            factors: factors.iter().map(|f| (f.to_string(), 1)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0 { "-" } else if i > 0 { "+" } else { "" };
            write!(f, "{sign}")?;
            let c = t.coeff.abs();
            let body: Vec<String> = t
                .factors
                .iter()
                .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            match (c, body.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", body.join("*"))?,
                _ => write!(f, "{c}*{}", body.join("*"))?,
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxPresentation {
    pub variables: Vec<CoxVariable>,
    pub forms: Vec<Form>,
    pub relations: Vec<Relation>,
}

impl CoxPresentation {
    pub fn rho(&self) -> usize {
        self.variables.first().map_or(0, |v| v.degree.rho())
    }

    pub fn grading(&self) -> Vec<Vec<i64>> {
        self.variables.iter().map(|v| v.degree.0.clone()).collect()
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    fn form_index(&self, name: &str) -> Option<usize> {
        self.forms.iter().position(|f| f.name == name)
    }

    pub fn degree_of(&self, name: &str) -> Result<DivisorClass> {
        if let Some(i) = self.var_index(name) {
            return Ok(self.variables[i].degree.clone());
        }
        if let Some(i) = self.form_index(name) {
            return Ok(self.forms[i].degree.clone());
        }
        Err(Error::InvalidInput(format!("unknown symbol {name:?}")))
    }

    pub fn term_degree(&self, t: &Term) -> Result<DivisorClass> {
        let mut d = DivisorClass(vec![0; self.rho()]);
        for (name, e) in &t.factors {
            d = d.add(&self.degree_of(name)?.scale(*e as i64));
        }
        Ok(d)
    }

    /// Common degree of all terms, or an error naming the offending relation.
    pub fn relation_degree(&self, r: &Relation) -> Result<DivisorClass> {
        let degs = r
            .terms
            .iter()
            .map(|t| self.term_degree(t))
            .collect::<Result<Vec<_>>>()?;
        match degs.split_first() {
            None => Err(Error::InvalidInput("empty relation".into())),
            Some((first, rest)) if rest.iter().all(|d| d == first) => Ok(first.clone()),
            Some(_) => Err(Error::InvalidInput(format!("relation {r} is not homogeneous"))),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(|r| self.relation_degree(r).is_ok())
    }

    /// Draws every form's coefficients uniformly from `F_p`.
    pub fn instantiate(&self, p: u64, seed: u64) -> Result<Instance> {
        ff::check_prime(p)?;
        let grading = self.grading();
        let nvars = self.variables.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut forms = Vec::with_capacity(self.forms.len());
        for f in &self.forms {
            let mons = monomials(&grading, &f.support, &f.degree.0, DEFAULT_CAP)?;
            let mut poly = Poly::zero(nvars, p);
            for m in mons {
                poly.add_term(m, rng.gen_range(0..p));
            }
            forms.push(poly);
        }
        let mut relations = Vec::with_capacity(self.relations.len());
        for r in &self.relations {
            let deg = self.relation_degree(r)?;
            let mut poly = Poly::zero(nvars, p);
            for t in &r.terms {
                let mut tp = Poly::constant(ff::from_i64(t.coeff, p), nvars, p);
                for (name, e) in &t.factors {
                    let base = match self.var_index(name) {
                        Some(i) => Poly::var(i, nvars, p),
                        None => forms[self.form_index(name).expect("checked by relation_degree")].clone(),
                    };
                    tp = tp.mul(&base.pow(*e));
                }
                poly = poly.add(&tp);
            }
            relations.push((poly, deg));
        }
        Ok(Instance {
            p,
            grading,
            forms,
            relations,
        })
    }
}

/// A presentation with concrete coefficients over `F_p`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub p: u64,
    pub grading: Vec<Vec<i64>>,
    pub forms: Vec<Poly>,
    pub relations: Vec<(Poly, DivisorClass)>,
}

/// Small positive integer functional `c` with `c . deg(v) > 0` for every
/// listed variable.
fn positive_functional(grading: &[Vec<i64>], vars: &[usize]) -> Option<Vec<i64>> {
    let rho = grading.first()?.len();
    let bound = 8i64;
    let mut c = vec![1i64; rho];
    loop {
        if vars
            .iter()
            .all(|&v| grading[v].iter().zip(&c).map(|(a, b)| a * b).sum::<i64>() > 0)
        {
            return Some(c);
        }
        let mut k = 0;
        loop {
            if k == rho {
                return None;
            }
            if c[k] < bound {
                c[k] += 1;
                break;
            }
            c[k] = 1;
            k += 1;
        }
    }
}

/// Exponent vectors (over all variables) supported on `vars` with degree
/// exactly `target`.
pub fn monomials(grading: &[Vec<i64>], vars: &[usize], target: &[i64], cap: usize) -> Result<Vec<Vec<u32>>> {
    let nvars = grading.len();
    if vars.is_empty() {
        return Ok(if target.iter().all(|&t| t == 0) {
            vec![vec![0; nvars]]
        } else {
            Vec::new()
        });
    }
    let c = positive_functional(grading, vars)
        .ok_or_else(|| Error::InvalidInput("grading has no positive functional".into()))?;
    let weight = |v: usize| -> i64 { grading[v].iter().zip(&c).map(|(a, b)| a * b).sum() };
    let total: i64 = target.iter().zip(&c).map(|(a, b)| a * b).sum();
    let mut out = Vec::new();
    if total < 0 {
        return Ok(out);
    }
    let mut visited = 0usize;
    let mut cur = vec![0u32; nvars];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        rem: i64,
        vars: &[usize],
        weight: &dyn Fn(usize) -> i64,
        grading: &[Vec<i64>],
        target: &[i64],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        visited: &mut usize,
        cap: usize,
    ) -> Result<()> {
        *visited += 1;
        if *visited > cap.saturating_mul(64) {
            return Err(Error::CapExceeded {
                cap,
                needed: *visited / 64,
            });
        }
        let v = vars[idx];
        let wv = weight(v);
        if idx + 1 == vars.len() {
            if rem % wv == 0 {
                cur[v] = (rem / wv) as u32;
                if ff::monomial_degree(cur, grading) == target {
                    if out.len() == cap {
                        return Err(Error::CapExceeded { cap, needed: cap + 1 });
                    }
                    out.push(cur.clone());
                }
                cur[v] = 0;
            }
            return Ok(());
        }
        for a in 0..=(rem / wv) {
            cur[v] = a as u32;
            rec(idx + 1, rem - a * wv, vars, weight, grading, target, cur, out, visited, cap)?;
        }
        cur[v] = 0;
        Ok(())
    }
    rec(0, total, vars, &weight, grading, target, &mut cur, &mut out, &mut visited, cap)?;
    Ok(out)
}

/// Dimension over `F_p` of the degree-`D` piece of the quotient ring.
///
/// The ideal slice is spanned by `m * r` for relations `r` and monomials `m`
/// of complementary degree; the answer is the number of degree-`D`
/// monomials minus the rank of that slice.
pub fn graded_dimension(c: &CoxPresentation, d: &DivisorClass, p: u64, seed: u64, cap: usize) -> Result<usize> {
    if d.rho() != c.rho() {
        return Err(Error::DimensionMismatch {
            expected: c.rho(),
            got: d.rho(),
        });
    }
    let inst = c.instantiate(p, seed)?;
    let all: Vec<usize> = (0..c.variables.len()).collect();
    let basis = monomials(&inst.grading, &all, &d.0, cap)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let index: std::collections::HashMap<&[u32], usize> =
        basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (rel, rdeg) in &inst.relations {
        let comp: Vec<i64> = d.0.iter().zip(&rdeg.0).map(|(a, b)| a - b).collect();
        for m in monomials(&inst.grading, &all, &comp, cap)? {
            let mut row = vec![0u64; basis.len()];
            for (e, &coef) in rel.terms() {
                let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                let col = index[prod.as_slice()];
                row[col] = ff::add(row[col], coef, p);
            }
            rows.push(row);
            if rows.len() > cap {
                return Err(Error::CapExceeded {
                    cap,
                    needed: rows.len(),
                });
            }
        }
    }
    Ok(basis.len() - ff::rank(&rows, p))
}

/// The presentation with auxiliary variables `z_1..z_d` for
/// `P^1 x P(w)` in degree `(d, e)`: the kernel equations of the matrix with
/// columns `x1 e_j - x0 e_{j+1}` and last column `(f_0..f_d)`.
pub fn z_presentation(d: usize, w: &WeightVector, e: i64) -> CoxPresentation {
    let m = w.dim();
    let mut variables = vec![
        CoxVariable { name: "x0".into(), degree: DivisorClass(vec![1, 0]) },
        CoxVariable { name: "x1".into(), degree: DivisorClass(vec![1, 0]) },
    ];
    for (j, &wj) in w.weights().iter().enumerate() {
        variables.push(CoxVariable {
            name: format!("y{j}"),
            degree: DivisorClass(vec![0, wj as i64]),
        });
    }
    for i in 1..=d {
        variables.push(CoxVariable {
            name: format!("z{i}"),
            degree: DivisorClass(vec![-1, e]),
        });
    }
    let ys: Vec<usize> = (2..m + 3).collect();
    let forms = (0..=d)
        .map(|i| Form {
            name: format!("f{i}"),
            degree: DivisorClass(vec![0, e]),
            support: ys.clone(),
        })
        .collect();
    CoxPresentation {
        variables,
        forms,
        relations: z_relations(d),
    }
}

/// `f_0 + x1 z1`, `f_i - x0 z_i + x1 z_{i+1}`, `f_d - x0 z_d`.
pub fn z_relations(d: usize) -> Vec<Relation> {
    (0..=d)
        .map(|i| {
            let f = format!("f{i}");
            let mut terms = vec![Term::new(1, &[&f])];
            if i >= 1 {
                terms.push(Term::new(-1, &["x0", &format!("z{i}")]));
            }
            if i < d {
                terms.push(Term::new(1, &["x1", &format!("z{}", i + 1)]));
            }
            Relation { terms }
        })
        .collect()
}

/// `K[x_0..x_n, y_0..y_m]/(f)` with `x_i` of degree `(v_i, 0)` and `y_j` of
/// degree `(0, w_j)`.
pub fn hypersurface_presentation(v: &WeightVector, w: &WeightVector, d: i64, e: i64) -> CoxPresentation {
    let mut variables = Vec::new();
    for (i, &vi) in v.weights().iter().enumerate() {
        variables.push(CoxVariable {
            name: format!("x{i}"),
            degree: DivisorClass(vec![vi as i64, 0]),
        });
    }
    for (j, &wj) in w.weights().iter().enumerate() {
        variables.push(CoxVariable {
            name: format!("y{j}"),
            degree: DivisorClass(vec![0, wj as i64]),
        });
    }
    let support = (0..variables.len()).collect();
    CoxPresentation {
        variables,
        forms: vec![Form {
            name: "f".into(),
            degree: DivisorClass(vec![d, e]),
            support,
        }],
        relations: vec![Relation {
            terms: vec![Term::new(1, &["f"])],
        }],
    }
}

/// Pulls an instance of `K[x,y]/(f)` back along `x_i -> x_i^{v_i}`,
/// `y_j -> y_j^{w_j}`. The result must be bihomogeneous of the same degree
/// in the unweighted grading and agree with `f` composed with the power map
/// at random points. Returns the number of points checked.
pub fn pullback_check(c: &CoxPresentation, p: u64, seed: u64, points: usize) -> Result<usize> {
    let inst = c.instantiate(p, seed)?;
    let (f, fdeg) = inst
        .relations
        .first()
        .ok_or_else(|| Error::InvalidInput("presentation has no relation".into()))?;
    // x_i has degree (v_i, 0), y_j has (0, w_j): the exponent is the
    // nonzero entry.
    let ks: Vec<u32> = inst
        .grading
        .iter()
        .map(|g| g.iter().copied().find(|&x| x != 0).unwrap_or(1) as u32)
        .collect();
    let pulled = f.substitute_powers(&ks);
    let unweighted: Vec<Vec<i64>> = inst
        .grading
        .iter()
        .map(|g| g.iter().map(|&x| i64::from(x != 0)).collect())
        .collect();
    if pulled.term_degrees(&unweighted).iter().any(|t| t != &fdeg.0) {
        return Err(Error::InvalidInput("pullback is not homogeneous of the same degree".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..points {
        let pt: Vec<u64> = (0..ks.len()).map(|_| rng.gen_range(0..p)).collect();
        let pushed: Vec<u64> = pt.iter().zip(&ks).map(|(&x, &k)| ff::pow(x, k as u64, p)).collect();
        if pulled.eval(&pt) != f.eval(&pushed) {
            return Err(Error::InvalidInput("pullback disagrees with substitution".into()));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(v: &[u64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn relation_strings() {
        let rels: Vec<String> = z_relations(3).iter().map(ToString::to_string).collect();
        assert_eq!(rels, ["f0+x1*z1", "f1-x0*z1+x1*z2", "f2-x0*z2+x1*z3", "f3-x0*z3"]);
        let rels: Vec<String> = z_relations(1).iter().map(ToString::to_string).collect();
        assert_eq!(rels, ["f0+x1*z1", "f1-x0*z1"]);
    }

    #[test]
    fn homogeneity() {
        let c = z_presentation(3, &wv(&[1, 1, 1, 1]), 3);
        assert!(c.is_homogeneous());
        assert_eq!(c.relation_degree(&c.relations[0]).unwrap(), DivisorClass(vec![0, 3]));
        let mut bad = c.clone();
        bad.relations[1].terms.push(Term::new(1, &["x0"]));
        assert!(!bad.is_homogeneous());
    }

    #[test]
    fn small_graded_pieces() {
        let c = z_presentation(3, &wv(&[1, 1, 1, 1]), 3);
        let dim = |d: Vec<i64>| graded_dimension(&c, &DivisorClass(d), 101, 1, DEFAULT_CAP).unwrap();
        assert_eq!(dim(vec![0, 0]), 1);
        assert_eq!(dim(vec![1, 0]), 2);
        assert_eq!(dim(vec![-1, 3]), 3);
        assert_eq!(dim(vec![-2, 0]), 0);
    }

    #[test]
    fn hypersurface_pullback() {
        let c = hypersurface_presentation(&wv(&[1, 1, 2]), &wv(&[1, 1, 1]), 2, 1);
        assert_eq!(c.variables.len(), 6);
        assert!(c.is_homogeneous());
        assert_eq!(pullback_check(&c, 101, 3, 20).unwrap(), 20);
        // f has degree (2,1): x2 counts once in degree 2
        let dim = graded_dimension(&c, &DivisorClass(vec![2, 0]), 101, 3, DEFAULT_CAP).unwrap();
        assert_eq!(dim, 4);
    }
}
