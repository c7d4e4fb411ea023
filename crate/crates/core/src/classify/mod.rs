//! Mori dream space verdicts for Cartier hypersurfaces in products of
//! weighted projective spaces.
//!
//! [`classify`] is a pure case analysis over the space, the multidegree and
//! the requested generality. Each verdict names the clause that produced it
//! and, where known, carries the effective, movable and nef cones in the
//! basis `H_1..H_rho` and a Cox ring presentation.

pub mod cox;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::cy::{self, CySetup};
use crate::error::{Error, Result};
use crate::lattice::{cone_subset, DivisorClass, RationalCone};
use crate::wps::{Multidegree, ProductSpace, WeightVector};
pub use cox::{graded_dimension, CoxPresentation, CoxVariable, Form, Relation, Term};

/// Which member of the linear system a question is about.
///
/// A very general member is also general, so `VeryGeneral` admits every
/// clause about general members as well.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generality {
    General,
    #[default]
    VeryGeneral,
    Special,
}

impl FromStr for Generality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "general" => Ok(Self::General),
            "very_general" => Ok(Self::VeryGeneral),
            "special" => Ok(Self::Special),
            other => Err(Error::Parse(format!(
                "unknown generality {other:?} (general, very_general, special)"
            ))),
        }
    }
}

impl fmt::Display for Generality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::General => "general",
            Self::VeryGeneral => "very_general",
            Self::Special => "special",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypersurfaceProblem {
    pub space: ProductSpace,
    pub degree: Multidegree,
    pub generality: Generality,
}

impl HypersurfaceProblem {
    pub fn new(space: ProductSpace, degree: Multidegree, generality: Generality) -> Self {
        Self {
            space,
            degree,
            generality,
        }
    }

    pub fn parse(space: &str, degree: &str, generality: Generality) -> Result<Self> {
        Ok(Self::new(space.parse()?, degree.parse()?, generality))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "MDS_general")]
    MdsGeneral,
    #[serde(rename = "MDS_special")]
    MdsSpecial,
    #[serde(rename = "NotMDS_very_general")]
    NotMdsVeryGeneral,
    Open,
    OutOfScope,
}

impl Status {
    pub fn is_mds(self) -> bool {
        matches!(self, Self::MdsGeneral | Self::MdsSpecial)
    }
}

/// Birational features of the hypersurface. Targets are spaces in the
/// usual grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Feature {
    Sqm,
    Fibration(String),
    RationalFibration(String),
    DivisorialContraction(String),
    Flop,
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sqm => write!(f, "SQM"),
            Self::Fibration(t) => write!(f, "fibration:{t}"),
            Self::RationalFibration(t) => write!(f, "rational_fibration:{t}"),
            Self::DivisorialContraction(t) => write!(f, "divisorial_contraction:{t}"),
            Self::Flop => write!(f, "flop"),
        }
    }
}

impl Serialize for Feature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Cones {
    pub eff: Option<RationalCone>,
    pub mov: Option<RationalCone>,
    pub nef: Option<RationalCone>,
}

impl Cones {
    fn all(eff: RationalCone, mov: RationalCone, nef: RationalCone) -> Self {
        Self {
            eff: Some(eff),
            mov: Some(mov),
            nef: Some(nef),
        }
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let p = |c: &Option<RationalCone>| c.as_ref().map(|c| permute_cone(c, perm));
        Self {
            eff: p(&self.eff),
            mov: p(&self.mov),
            nef: p(&self.nef),
        }
    }

    /// `Nef ⊆ Mov ⊆ Eff` on whichever cones are present.
    pub fn chain_holds(&self) -> bool {
        let sub = |a: &Option<RationalCone>, b: &Option<RationalCone>| match (a, b) {
            (Some(a), Some(b)) => cone_subset(a, b).unwrap_or(false),
            _ => true,
        };
        sub(&self.nef, &self.mov) && sub(&self.mov, &self.eff) && sub(&self.nef, &self.eff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub citation: String,
    pub cones: Cones,
    pub features: Vec<Feature>,
    pub cox: Option<CoxPresentation>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(status: Status, citation: &str) -> Self {
        Self {
            status,
            citation: citation.into(),
            cones: Cones::default(),
            features: Vec::new(),
            cox: None,
            notes: Vec::new(),
        }
    }

    fn out_of_scope(note: impl Into<String>) -> Self {
        Self::new(Status::OutOfScope, "none").note(note)
    }

    fn open(citation: &str, note: impl Into<String>) -> Self {
        Self::new(Status::Open, citation).note(note)
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    fn permuted(mut self, perm: &[usize]) -> Self {
        self.cones = self.cones.permuted(perm);
        if let Some(c) = self.cox.as_mut() {
            for v in c.variables.iter_mut() {
                v.degree = permute_class(&v.degree, perm);
            }
            for f in c.forms.iter_mut() {
                f.degree = permute_class(&f.degree, perm);
            }
        }
        self
    }
}

/// Coordinate `i` of the result is coordinate `perm[i]` of the input.
fn permute_class(d: &DivisorClass, perm: &[usize]) -> DivisorClass {
    DivisorClass(perm.iter().map(|&i| d.0[i]).collect())
}

fn permute_cone(c: &RationalCone, perm: &[usize]) -> RationalCone {
    RationalCone::with_rho(
        c.rho(),
        c.generators()
            .iter()
            .map(|g| perm.iter().map(|&i| g[i]).collect())
            .collect(),
    )
    .expect("permutation preserves nonzero generators")
}

fn cone2(a: [i64; 2], b: [i64; 2]) -> RationalCone {
    RationalCone::new(vec![a.to_vec(), b.to_vec()]).expect("nonzero generators")
}

/// Total case analysis; never fails.
pub fn classify(p: &HypersurfaceProblem) -> Verdict {
    let x = &p.space;
    let deg = p.degree.as_slice();
    if deg.len() != x.rho() {
        return Verdict::out_of_scope(format!(
            "degree has {} components but the space has {} factors",
            deg.len(),
            x.rho()
        ));
    }
    if !x.is_cartier(&p.degree) {
        return Verdict::out_of_scope(format!("degree {} is not Cartier on {x}", p.degree));
    }
    if deg.iter().any(|&c| c <= 0) {
        return Verdict::out_of_scope(format!("degree {} has a nonpositive component", p.degree));
    }
    let f = x.factors();
    if x.rho() == 2 {
        if f[0].dim() >= 2 && f[1].dim() >= 2 {
            return two_big_factors(p);
        }
        let p1_slot = match (f[0].is_p1(), f[1].is_p1()) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        };
        if let Some(i) = p1_slot {
            let w = &f[1 - i];
            let (d, e) = (deg[i], deg[1 - i]);
            let v = match w.dim() {
                2 => surface_case(w, d, e, p.generality),
                _ => p1_times_weighted(w, d, e, p.generality),
            };
            // Computed with the P1 factor first.
            return if i == 0 { v } else { v.permuted(&[1, 0]) };
        }
    }
    if let Some(v) = calabi_yau(p) {
        return v;
    }
    Verdict::out_of_scope(format!("no classification clause covers {x} in degree {}", p.degree))
}

fn two_big_factors(p: &HypersurfaceProblem) -> Verdict {
    const CITE: &str = "Theorem A(1)";
    if p.generality == Generality::Special {
        return Verdict::open(CITE, "only the general member is decided");
    }
    let f = p.space.factors();
    let deg = p.degree.as_slice();
    let mut v = Verdict::new(Status::MdsGeneral, CITE);
    v.cox = Some(cox::hypersurface_presentation(&f[0], &f[1], deg[0], deg[1]));
    v.notes.push("Cox ring is K[x,y]/(f) for an equation f of the hypersurface".into());
    v
}

/// `P^1 x P^m(w)` with `m >= 3`; `d` on the `P^1`, `e` on `P(w)`.
fn p1_times_weighted(w: &WeightVector, d: i64, e: i64, g: Generality) -> Verdict {
    let m = w.dim() as i64;
    let k = e / w.lcm() as i64;
    if d <= m {
        const CITE: &str = "Theorem A(2)";
        if g == Generality::Special {
            return Verdict::open(CITE, "only the general member is decided");
        }
        let h1 = [1, 0];
        let x = [-1, e];
        let mut v = Verdict::new(Status::MdsGeneral, CITE);
        let target = WeightVector::projective((d - 1).max(1) as usize).to_string();
        if d == 1 {
            v.cones = Cones::all(cone2(h1, x), RationalCone::orthant(2), RationalCone::orthant(2));
            v.features = vec![
                Feature::DivisorialContraction(w.to_string()),
                Feature::Fibration("P1".into()),
            ];
        } else if d < m {
            v.cones = Cones::all(cone2(h1, x), cone2(h1, x), RationalCone::orthant(2));
            v.features = vec![
                Feature::Sqm,
                Feature::Fibration("P1".into()),
                Feature::RationalFibration(target),
            ];
        } else {
            v.cones = Cones::all(cone2(h1, x), cone2(h1, x), cone2(h1, x));
            v.features = vec![Feature::Fibration(target), Feature::Fibration("P1".into())];
        }
        if d == m || k >= 2 {
            v.cox = Some(cox::z_presentation(d as usize, w, e));
        }
        return v;
    }
    if k >= 2 {
        const CITE: &str = "Theorem A(3)";
        return match g {
            Generality::VeryGeneral => Verdict::new(Status::NotMdsVeryGeneral, CITE)
                .note("effective cone is not closed"),
            _ => Verdict::open(CITE, "only the very general member is decided"),
        };
    }
    const CITE: &str = "Theorem A(4)";
    match g {
        Generality::Special => Verdict::new(Status::MdsSpecial, CITE)
            .note("a special member pulled back from a projective bundle over P1"),
        _ => Verdict::open(CITE, "only a special member is decided for k = 1"),
    }
}

/// `P^1 x P^2(w)`: only the two Gorenstein weight vectors are decided.
fn surface_case(w: &WeightVector, d: i64, e: i64, g: Generality) -> Verdict {
    let mut sorted = w.weights().to_vec();
    sorted.sort_unstable();
    let cite = match sorted.as_slice() {
        [1, 1, 2] => "Theorem B(1)",
        [1, 2, 3] => "Theorem B(2)",
        _ if sorted == [1, 1, 1] => {
            return Verdict::out_of_scope("P1 x P2 surfaces are not treated here");
        }
        _ if !w.is_gorenstein() => {
            return Verdict::out_of_scope(format!("{w} is not Gorenstein"));
        }
        _ => return Verdict::out_of_scope(format!("{w} is not a treated surface factor")),
    };
    let small = sorted == [1, 1, 2];
    if g == Generality::Special {
        return Verdict::open(cite, "no statement about special members");
    }
    if d >= 3 {
        return match g {
            Generality::VeryGeneral => Verdict::new(Status::NotMdsVeryGeneral, cite)
                .note("effective cone is not closed"),
            _ => Verdict::open(cite, "only the very general member is decided"),
        };
    }
    // (1,2) and (2,2) are decided for general members as well.
    let general_ok = small && e == 2;
    if g == Generality::General && !general_ok {
        return Verdict::open(cite, "only the very general member is decided");
    }
    let h1 = [1, 0];
    let x = [-1, e];
    if d == 2 {
        let mut v = Verdict::new(Status::MdsGeneral, cite);
        v.cones = Cones::all(cone2(h1, x), cone2(h1, x), cone2(h1, x));
        v.features = vec![Feature::Fibration("P1".into()), Feature::Fibration("P1".into())];
        v.cox = Some(cox::z_presentation(2, w, e));
        return v;
    }
    if small && e == 2 {
        let mut v = Verdict::new(Status::MdsGeneral, cite);
        v.cones = Cones::all(cone2(h1, x), RationalCone::orthant(2), RationalCone::orthant(2));
        v.features = vec![
            Feature::DivisorialContraction(w.to_string()),
            Feature::Fibration("P1".into()),
        ];
        return v;
    }
    Verdict::open(cite, format!("degree (1,{e}) is an open case"))
}

/// Anticanonical hypersurfaces in Gorenstein products of dimension at least
/// four whose factors are `P^1` or have dimension at least two.
fn calabi_yau(p: &HypersurfaceProblem) -> Option<Verdict> {
    let x = &p.space;
    if x.rho() < 2 || x.dim() < 4 || !x.is_gorenstein() {
        return None;
    }
    if x.anticanonical_multidegree().ok()? != p.degree {
        return None;
    }
    let s = CySetup::new(x.clone()).ok()?;
    let n = s.n();
    let cite = match n {
        0 => "CY anticanonical, n = 0",
        1 => "CY anticanonical, n = 1",
        _ => "CY anticanonical, n > 1",
    };
    if p.generality == Generality::Special {
        return Some(Verdict::open(cite, "only the general member is decided"));
    }
    let nef = s.nef();
    let v = match n {
        0 => {
            let mut v = Verdict::new(Status::MdsGeneral, cite);
            v.cones = Cones::all(nef.clone(), nef.clone(), nef);
            v
        }
        1 => {
            let mov = cy::movable_cone_n1(&s).ok()?;
            let mut v = Verdict::new(Status::MdsGeneral, cite);
            v.cones = Cones {
                eff: (s.k() == 1).then(|| mov.clone()),
                mov: Some(mov),
                nef: Some(nef),
            };
            v.features = vec![Feature::Flop];
            if s.k() > 1 {
                v.notes.push("effective cone of Y is strictly smaller than that of X".into());
            }
            v
        }
        _ => {
            let mut v = Verdict::new(Status::NotMdsVeryGeneral, cite).note("Bir(Y) infinite");
            v.cones.nef = Some(nef);
            v.features = vec![Feature::Flop];
            v.notes.push("decided for the general member".into());
            v
        }
    };
    Some(v)
}

/// The cones of an MDS verdict.
pub fn cones_for(p: &HypersurfaceProblem) -> Result<Cones> {
    let v = classify(p);
    if !v.status.is_mds() {
        return Err(Error::Refused(format!(
            "{:?} verdict has no closed cone description",
            v.status
        )));
    }
    if v.cones.nef.is_none() && v.cones.mov.is_none() && v.cones.eff.is_none() {
        return Err(Error::Refused(format!("no cones are known for {}", v.citation)));
    }
    Ok(v.cones)
}

pub fn cox_presentation(p: &HypersurfaceProblem) -> Result<CoxPresentation> {
    let v = classify(p);
    v.cox.ok_or_else(|| {
        Error::Refused(format!(
            "no Cox presentation for a {:?} verdict ({})",
            v.status, v.citation
        ))
    })
}
