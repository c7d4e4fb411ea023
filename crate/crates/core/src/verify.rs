//! Self-check suites. Each returns a JSON report with sorted keys and no
//! timings, so identical configurations give byte-identical output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::cox::{self, DEFAULT_CAP};
use crate::cy::{self, intmat, CySetup};
use crate::error::{Error, Result};
use crate::ff::Poly;
use crate::fflab::{self, FFHypersurface};
use crate::lattice::{cone_subset, cones_equal, interiors_disjoint, DivisorClass, RationalCone};
use crate::par::{self, Exec};
use crate::sqm::{self, toric};
use crate::wps::{section_count, section_counts_upto, ProductSpace, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Det,
    Sqm,
    Graded,
    Sections,
    Gorenstein,
    Ptpoly,
    Cy,
    Rank,
    Flip,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Det,
        Suite::Sqm,
        Suite::Graded,
        Suite::Sections,
        Suite::Gorenstein,
        Suite::Ptpoly,
        Suite::Cy,
        Suite::Rank,
        Suite::Flip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Det => "det",
            Suite::Sqm => "sqm",
            Suite::Graded => "graded",
            Suite::Sections => "sections",
            Suite::Gorenstein => "gorenstein",
            Suite::Ptpoly => "ptpoly",
            Suite::Cy => "cy",
            Suite::Rank => "rank",
            Suite::Flip => "flip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone)]
#[derive(Default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the suite's primes with a single one.
    pub prime: Option<u64>,
    pub dmax: Option<usize>,
    pub points: Option<usize>,
    pub exec: Exec,
}


#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub details: Value,
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    let (passed, details) = match suite {
        Suite::Det => det(cfg)?,
        Suite::Sqm => sqm_roundtrip(cfg)?,
        Suite::Graded => graded(cfg)?,
        Suite::Sections => sections(cfg),
        Suite::Gorenstein => gorenstein(),
        Suite::Ptpoly => ptpoly(cfg),
        Suite::Cy => cy_suite(cfg)?,
        Suite::Rank => rank(cfg)?,
        Suite::Flip => flip()?,
    };
    Ok(Report {
        suite,
        passed,
        details,
    })
}

fn wv(w: &[u64]) -> WeightVector {
    WeightVector::new(w.to_vec()).expect("static weights")
}

fn primes(cfg: &VerifyConfig, default: &[u64]) -> Vec<u64> {
    cfg.prime.map_or_else(|| default.to_vec(), |p| vec![p])
}

/// The forms of `h` as polynomials in `x0, x1, y_0..y_m`.
pub fn forms_as_polys(h: &FFHypersurface) -> Vec<Poly> {
    let nv = 2 + h.weights.weights().len();
    h.coeffs
        .iter()
        .map(|row| {
            let mut f = Poly::zero(nv, h.p);
            for (c, mon) in row.iter().zip(&h.monomials) {
                let mut e = vec![0, 0];
                e.extend_from_slice(mon);
                f.add_term(e, *c);
            }
            f
        })
        .collect()
}

fn det(cfg: &VerifyConfig) -> Result<(bool, Value)> {
    let dmax = cfg.dmax.unwrap_or(6);
    let instances = cfg.points.unwrap_or(100);
    let w = wv(&[1, 1, 1]);
    let mut rows = Vec::new();
    let mut ok = true;
    for p in primes(cfg, &[101, 997]) {
        for d in 1..=dmax {
            let results = par::map_indexed(instances, cfg.exec, |i| -> Result<bool> {
                let h = fflab::sample_hypersurface(p, d, 2, &w, cfg.seed.wrapping_add(i as u64))?;
                let forms = forms_as_polys(&h);
                Ok(sqm::poly_det(&sqm::m_polys(&forms)) == sqm::expected_determinant(&forms))
            });
            let mismatches = results.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|b| !**b).count();
            ok &= mismatches == 0;
            rows.push(json!({"p": p, "d": d, "instances": instances, "mismatches": mismatches}));
        }
    }
    Ok((ok, json!({ "seed": cfg.seed, "checks": rows })))
}

/// `(d, w, e)` for the roundtrip and rank suites.
pub const SQM_CONFIGS: [(usize, &[u64], i64); 3] = [(2, &[1, 1, 1, 2], 2), (3, &[1, 1, 1, 1], 1), (2, &[1, 1, 2, 3], 6)];

fn sqm_roundtrip(cfg: &VerifyConfig) -> Result<(bool, Value)> {
    let target = cfg.points.unwrap_or(200);
    let mut rows = Vec::new();
    let mut ok = true;
    for p in primes(cfg, &[101]) {
        for (d, w, e) in SQM_CONFIGS {
            let w = wv(w);
            let h = fflab::sample_hypersurface(p, d, e, &w, cfg.seed)?;
            let pts = fflab::sample_points(&h, target, cfg.seed.wrapping_add(1), cfg.exec);
            let outcomes = par::map_slice(&pts, cfg.exec, |pt| roundtrip_outcome(&h, pt));
            let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count();
            let failures = count(Outcome::Failed);
            let minor_failures = count(Outcome::MinorNonzero);
            ok &= failures == 0 && minor_failures == 0 && pts.len() == target;
            rows.push(json!({
                "p": p, "d": d, "w": w.weights(), "e": e,
                "sampled": pts.len(),
                "roundtrip_ok": count(Outcome::Ok),
                "flagged": count(Outcome::Flagged),
                "failures": failures,
                "minor_failures": minor_failures,
            }));
        }
    }
    Ok((ok, json!({ "seed": cfg.seed, "configs": rows })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Flagged,
    MinorNonzero,
    Failed,
}

fn roundtrip_outcome(h: &FFHypersurface, pt: &fflab::FFPoint) -> Outcome {
    let q = match sqm::sqm_forward(h, pt) {
        Ok(q) => q,
        Err(Error::Indeterminacy(_)) => return Outcome::Flagged,
        Err(_) => return Outcome::Failed,
    };
    match sqm::minors_vanish(&q.z, &h.forms_at(&q.y), h.p) {
        Ok(true) => {}
        Ok(false) => return Outcome::MinorNonzero,
        Err(_) => return Outcome::Failed,
    }
    match sqm::sqm_backward(h, &q) {
        Ok(back) if sqm::points_equivalent(&back, pt, h.weights.weights(), h.p) => Outcome::Ok,
        Err(Error::Indeterminacy(_)) => Outcome::Flagged,
        _ => Outcome::Failed,
    }
}

/// `(d, w, e)` with a presentation by auxiliary variables.
pub const GRADED_CONFIGS: [(usize, &[u64], i64); 11] = [
    (1, &[1, 1, 1, 1], 2),
    (2, &[1, 1, 1, 1], 2),
    (3, &[1, 1, 1, 1], 1),
    (3, &[1, 1, 1, 1], 2),
    (4, &[1, 1, 1, 1, 1], 1),
    (4, &[1, 1, 1, 1, 1], 2),
    (3, &[1, 1, 1, 2], 2),
    (4, &[1, 1, 1, 1, 2], 2),
    (2, &[1, 1, 2], 2),
    (2, &[1, 1, 2], 4),
    (2, &[1, 2, 3], 6),
];

fn graded(cfg: &VerifyConfig) -> Result<(bool, Value)> {
    let seeds = cfg.points.unwrap_or(20) as u64;
    let mut rows = Vec::new();
    let mut ok = true;
    for (d, w, e) in GRADED_CONFIGS {
        let w = wv(w);
        let pres = cox::z_presentation(d, &w, e);
        let n_plus_1 = section_count(&w, e);
        let mut jobs = Vec::new();
        for p in primes(cfg, &[101, 997]) {
            for s in 0..seeds {
                jobs.push((p, cfg.seed.wrapping_add(s)));
            }
        }
        let got = par::map_slice(&jobs, cfg.exec, |&(p, seed)| -> Result<(usize, usize)> {
            let neg = cox::graded_dimension(&pres, &DivisorClass(vec![-1, e]), p, seed, DEFAULT_CAP)?;
            let zero = cox::graded_dimension(&pres, &DivisorClass(vec![0, e]), p, seed, DEFAULT_CAP)?;
            Ok((neg, zero))
        });
        let got = got.into_iter().collect::<Result<Vec<_>>>()?;
        let expect_zero = &n_plus_1 - BigUint::one() + BigUint::from(d);
        let failures = got
            .iter()
            .filter(|&&(neg, zero)| neg != d || BigUint::from(zero) != expect_zero)
            .count();
        ok &= failures == 0;
        rows.push(json!({
            "d": d, "w": w.weights(), "e": e,
            "checks": got.len(), "failures": failures,
            "dim_minus_h1": d, "dim_e_h2": expect_zero.to_string(),
        }));
    }
    Ok((ok, json!({ "seed": cfg.seed, "configs": rows })))
}

/// Truncated product of `1 / (1 - t^{w_i})`.
fn series_counts(w: &[u64], emax: usize) -> Vec<BigUint> {
    let mut acc = vec![BigUint::zero(); emax + 1];
    acc[0] = BigUint::one();
    for &wi in w {
        let mut next = vec![BigUint::zero(); emax + 1];
        for (s, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut t = s;
            while t <= emax {
                next[t] += a;
                t += wi as usize;
            }
        }
        acc = next;
    }
    acc
}

fn all_tuples(max_entry: u64, max_len: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|t| {
                (1..=max_entry).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn sections(cfg: &VerifyConfig) -> (bool, Value) {
    let emax = 50;
    let tuples = all_tuples(6, 5);
    let bad = par::map_slice(&tuples, cfg.exec, |t| section_counts_upto(&wv(t), emax) != series_counts(t, emax))
        .into_iter()
        .filter(|&b| b)
        .count();
    (bad == 0, json!({ "tuples": tuples.len(), "emax": emax, "mismatches": bad }))
}

fn gorenstein() -> (bool, Value) {
    let mut found = Vec::new();
    let mut scanned = 0usize;
    for a in 1..=50u64 {
        for b in a..=50 {
            for c in b..=50 {
                let w = wv(&[a, b, c]);
                if !w.is_well_formed() || w.is_unweighted() {
                    continue;
                }
                scanned += 1;
                if w.is_gorenstein() {
                    found.push(vec![a, b, c]);
                }
            }
        }
    }
    let ok = found == [vec![1, 1, 2], vec![1, 2, 3]];
    (ok, json!({ "scanned": scanned, "gorenstein": found }))
}

fn ptpoly(cfg: &VerifyConfig) -> (bool, Value) {
    let dmax = cfg.dmax.unwrap_or(100);
    let ds: Vec<usize> = (1..=dmax).collect();
    let res = par::map_slice(&ds, cfg.exec, |&d| {
        let p = fflab::p_poly(d);
        (p.len() == d + 1, fflab::is_squarefree_q(&p))
    });
    let wrong_degree: Vec<usize> = ds.iter().zip(&res).filter(|(_, r)| !r.0).map(|(d, _)| *d).collect();
    let not_squarefree: Vec<usize> = ds.iter().zip(&res).filter(|(_, r)| !r.1).map(|(d, _)| *d).collect();
    let fibre_max = dmax.min(12);
    let fibre_failures: Vec<usize> = (1..=fibre_max)
        .filter(|&d| !fibre_matches(d))
        .collect();
    let ok = wrong_degree.is_empty() && not_squarefree.is_empty() && fibre_failures.is_empty();
    (
        ok,
        json!({
            "dmax": dmax,
            "wrong_degree": wrong_degree,
            "not_squarefree": not_squarefree,
            "fibre_checked": fibre_max,
            "fibre_failures": fibre_failures,
        }),
    )
}

/// The fibre polynomial equals `+-p(1 - T)`.
fn fibre_matches(d: usize) -> bool {
    use num_bigint::BigInt;
    let p = fflab::p_poly(d);
    // p(1 - T) by Horner in the shifted variable
    let mut q: Vec<BigInt> = vec![BigInt::zero()];
    for c in p.iter().rev() {
        let mut next = vec![BigInt::zero(); q.len() + 1];
        for (i, a) in q.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a;
        }
        next[0] += c;
        q = next;
    }
    while q.len() > 1 && q.last().is_some_and(Zero::is_zero) {
        q.pop();
    }
    let f = fflab::fibre_polynomial(d);
    let neg: Vec<BigInt> = q.iter().map(|c| -c).collect();
    f == q || f == neg
}

/// Gorenstein products with at least one `P1`, at most five factors, and
/// weighted factors drawn from a small pool.
pub fn cy_setups() -> Vec<CySetup> {
    let pool: [&[u64]; 4] = [&[1, 1, 1], &[1, 1, 1, 1], &[1, 1, 2], &[1, 2, 3]];
    let mut out = Vec::new();
    for n in 1..=5usize {
        let mut picks: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..(5 - n) {
            let more: Vec<Vec<usize>> = picks
                .iter()
                .filter(|p| p.len() + n < 5)
                .flat_map(|p| {
                    let start = p.last().copied().unwrap_or(0);
                    (start..pool.len()).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect();
            picks.extend(more);
            picks.sort();
            picks.dedup();
        }
        for pick in picks {
            let mut factors = vec![WeightVector::projective(1); n];
            factors.extend(pick.iter().map(|&i| wv(pool[i])));
            let Ok(space) = ProductSpace::new(factors) else { continue };
            if let Ok(s) = CySetup::new(space) {
                out.push(s);
            }
        }
    }
    out
}

fn cy_suite(cfg: &VerifyConfig) -> Result<(bool, Value)> {
    let setups = cy_setups();
    let mut involution_failures = Vec::new();
    for s in &setups {
        for l in s.involution_indices() {
            let m = cy::involution_matrix(s, l)?.matrix;
            let square_ok = intmat::mul(&m, &m)? == intmat::identity(s.rho());
            let fixes = (1..=s.rho())
                .filter(|&i| i != l)
                .all(|i| intmat::apply(&m, DivisorClass::basis(s.rho(), i - 1).coords()) == DivisorClass::basis(s.rho(), i - 1).0);
            if !(square_ok && fixes) {
                involution_failures.push(format!("{} l={l}", s.space()));
            }
        }
    }

    let mut movable = Vec::new();
    for (space, c) in [("P1,P(1,1,2)", 4), ("P1,P(1,2,3)", 6)] {
        let s = CySetup::new(space.parse()?)?;
        let mov = cy::movable_cone_n1(&s)?;
        let expect = RationalCone::new(vec![vec![1, 0], vec![-1, c]])?;
        let ok = cones_equal(&mov, &expect)? && cone_subset(&s.nef(), &mov)? && !cone_subset(&mov, &s.nef())?;
        movable.push(json!({ "space": space, "cone": mov, "ok": ok }));
    }

    let mut infinite = Vec::new();
    for space in ["P1,P1,P2", "P1,P1,P1,P1"] {
        let s = CySetup::new(space.parse()?)?;
        let m = cy::word_matrix(&s, &[1, 2])?;
        infinite.push(json!({ "space": space, "infinite": intmat::is_infinite_order(&m)? }));
    }

    let s = CySetup::new("P1,P1,P2".parse()?)?;
    let chambers = cy::orbit_chambers(&s, 4, cfg.exec)?;
    let pairs: Vec<(usize, usize)> = (0..chambers.len())
        .flat_map(|i| (i + 1..chambers.len()).map(move |j| (i, j)))
        .collect();
    let overlaps = par::map_slice(&pairs, cfg.exec, |&(i, j)| {
        interiors_disjoint(&chambers[i].generators, &chambers[j].generators)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?
    .iter()
    .filter(|b| !**b)
    .count();

    let ok = involution_failures.is_empty()
        && movable.iter().all(|m| m["ok"] == true)
        && infinite.iter().all(|m| m["infinite"] == true)
        && chambers.len() == 9
        && overlaps == 0;
    Ok((
        ok,
        json!({
            "setups": setups.len(),
            "involution_failures": involution_failures,
            "movable": movable,
            "infinite_order": infinite,
            "chambers": chambers.len(),
            "overlapping_pairs": overlaps,
        }),
    ))
}

fn rank(cfg: &VerifyConfig) -> Result<(bool, Value)> {
    let target = cfg.points.unwrap_or(200);
    let mut rows = Vec::new();
    let mut ok = true;
    for p in primes(cfg, &[101, 997]) {
        for (d, w, e) in SQM_CONFIGS {
            let w = wv(w);
            let h = fflab::sample_hypersurface(p, d, e, &w, cfg.seed)?;
            let pts = fflab::sample_points(&h, target, cfg.seed.wrapping_add(1), cfg.exec);
            let stats = fflab::rank_statistics(&h, &pts, cfg.exec);
            let probe = fflab::common_zero_probe(&h, 2000, cfg.seed.wrapping_add(2), cfg.exec);
            ok &= stats.violations == 0 && stats.drop0 == 0;
            rows.push(json!({
                "p": p, "d": d, "w": w.weights(), "e": e,
                "sampled": pts.len(),
                "counts": stats,
                "probe": { "trials": probe.trials, "hits": probe.hits },
            }));
        }
    }
    Ok((ok, json!({ "seed": cfg.seed, "configs": rows })))
}

/// `(d, e, w)` for the section count on `Z+`.
pub const FLIP_CONFIGS: [(usize, i64, &[u64]); 10] = [
    (2, 1, &[1, 1, 1]),
    (2, 2, &[1, 1, 1]),
    (3, 1, &[1, 1, 1, 1]),
    (2, 2, &[1, 1, 2]),
    (2, 4, &[1, 1, 2]),
    (2, 6, &[1, 2, 3]),
    (3, 2, &[1, 1, 1, 2]),
    (3, 6, &[1, 1, 2, 3]),
    (4, 3, &[1, 1, 1, 1, 3]),
    (5, 1, &[1, 1, 1, 1, 1, 1]),
];

fn flip() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for (d, e, w) in FLIP_CONFIGS {
        let s = toric::flip_section_check(d, e, &wv(w))?;
        ok &= s.total == 2;
        rows.push(json!({ "d": d, "e": e, "w": w, "sections": s }));
    }
    Ok((ok, json!({ "configs": rows })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            seed: 5,
            prime: Some(101),
            dmax: Some(3),
            points: Some(10),
            exec: Exec::Sequential,
        }
    }

    #[test]
    fn suites_pass_at_small_scale() {
        for s in [Suite::Det, Suite::Sqm, Suite::Graded, Suite::Ptpoly, Suite::Rank, Suite::Flip, Suite::Gorenstein] {
            let r = run(s, &quick()).unwrap();
            assert!(r.passed, "{s}: {}", r.details);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run(Suite::Sqm, &quick()).unwrap()).unwrap();
        let mut cfg = quick();
        cfg.exec = Exec::Parallel;
        let b = serde_json::to_string(&run(Suite::Sqm, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn series_oracle_small() {
        let s = series_counts(&[1, 2], 6);
        let got: Vec<u64> = s.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 2, 3, 3, 4]);
        assert_eq!("ptpoly".parse::<Suite>().unwrap(), Suite::Ptpoly);
    }

    #[test]
    fn setups_pool() {
        let s = cy_setups();
        assert!(s.iter().all(|x| x.rho() <= 5 && x.n() >= 1));
        assert!(s.len() > 10);
    }
}
