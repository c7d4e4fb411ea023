//! Lattice action of the birational involutions on the class group of an
//! anticanonical hypersurface in `(P^1)^n x P(w^1) x ... x P(w^k)`.
//!
//! Classes are integer columns in the basis `H_1..H_rho`. Matrices act on
//! columns; column `j` is the image of `H_j`. A word `[l1, l2, ...]` applies
//! `iota_{l1}` first, so its matrix is `... M_{l2} M_{l1}`. Factor indices
//! `l` are 1-based.

pub mod intmat;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, RationalCone};
use crate::par::{self, Exec};
use crate::wps::ProductSpace;
use intmat::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CySetup {
    space: ProductSpace,
    coeffs: Vec<i64>,
    p1: Vec<usize>,
}

impl CySetup {
    /// Requires a Gorenstein product whose factors are `P^1` or of
    /// dimension at least 2.
    pub fn new(space: ProductSpace) -> Result<Self> {
        if !space.is_gorenstein() {
            return Err(Error::NotGorenstein);
        }
        if let Some(f) = space.factors().iter().find(|w| w.dim() < 2 && !w.is_p1()) {
            return Err(Error::InvalidInput(format!("factor {f} is neither P1 nor of dimension >= 2")));
        }
        let coeffs = space.factors().iter().map(|w| w.sum() as i64).collect();
        let p1 = space.p1_indices();
        Ok(Self { space, coeffs, p1 })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn rho(&self) -> usize {
        self.space.rho()
    }

    /// Number of `P^1` factors.
    pub fn n(&self) -> usize {
        self.p1.len()
    }

    /// Number of weighted factors.
    pub fn k(&self) -> usize {
        self.rho() - self.n()
    }

    /// 1-based indices of the `P^1` factors.
    pub fn involution_indices(&self) -> Vec<usize> {
        self.p1.iter().map(|i| i + 1).collect()
    }

    pub fn is_terminal(&self) -> bool {
        self.space.is_terminal()
    }

    pub fn nef(&self) -> RationalCone {
        RationalCone::orthant(self.rho())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeInvolution {
    pub l: usize,
    pub matrix: IntMatrix,
}

/// `H_l -> sum_{i != l} c_i H_i - H_l`, all other `H_i` fixed, where `c_i`
/// is the weight sum of factor `i`.
pub fn involution_matrix(s: &CySetup, l: usize) -> Result<LatticeInvolution> {
    if l == 0 || l > s.rho() || !s.p1.contains(&(l - 1)) {
        return Err(Error::InvalidInput(format!(
            "involution index {l} does not name a P1 factor of {}",
            s.space
        )));
    }
    let li = l - 1;
    let mut m = intmat::identity(s.rho());
    for (i, row) in m.iter_mut().enumerate() {
        row[li] = if i == li { -1 } else { s.coeffs[i] };
    }
    Ok(LatticeInvolution { l, matrix: m })
}

/// Matrix of a word, applying its letters left to right.
pub fn word_matrix(s: &CySetup, word: &[usize]) -> Result<IntMatrix> {
    word.iter().try_fold(intmat::identity(s.rho()), |acc, &l| {
        intmat::mul(&involution_matrix(s, l)?.matrix, &acc)
    })
}

/// `Nef` together with its image under the single involution.
pub fn movable_cone_n1(s: &CySetup) -> Result<RationalCone> {
    if s.n() != 1 {
        return Err(Error::InvalidInput(format!(
            "movable cone formula needs exactly one P1 factor, {} has {}",
            s.space,
            s.n()
        )));
    }
    let iota = involution_matrix(s, s.p1[0] + 1)?;
    let nef = s.nef();
    nef.hull(&nef.transform(&iota.matrix))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub l: usize,
    pub class_after: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReductionResult {
    Nef { class: DivisorClass, word: Vec<usize> },
    NotReduced { class: DivisorClass },
    NotMovable { class: DivisorClass, factor: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTranscript {
    pub input: DivisorClass,
    pub steps: Vec<ReductionStep>,
    pub result: ReductionResult,
}

/// Applies `iota_l` at the smallest negative `P^1` coordinate until the
/// class is coordinatewise nonnegative.
pub fn reduce_to_nef(s: &CySetup, d: &DivisorClass, max_steps: usize) -> Result<ReductionTranscript> {
    if d.rho() != s.rho() {
        return Err(Error::DimensionMismatch {
            expected: s.rho(),
            got: d.rho(),
        });
    }
    let mut cur = d.clone();
    let mut steps = Vec::new();
    let result = loop {
        if let Some(i) = (0..s.rho()).find(|&i| cur.0[i] < 0 && !s.p1.contains(&i)) {
            break ReductionResult::NotMovable {
                class: cur,
                factor: i + 1,
            };
        }
        let Some(&li) = s.p1.iter().find(|&&i| cur.0[i] < 0) else {
            let word = steps.iter().map(|st: &ReductionStep| st.l).collect();
            break ReductionResult::Nef { class: cur, word };
        };
        if steps.len() == max_steps {
            break ReductionResult::NotReduced { class: cur };
        }
        let m = involution_matrix(s, li + 1)?;
        cur = DivisorClass(intmat::apply(&m.matrix, &cur.0));
        steps.push(ReductionStep {
            l: li + 1,
            class_after: cur.clone(),
        });
    };
    Ok(ReductionTranscript {
        input: d.clone(),
        steps,
        result,
    })
}

/// Words in the involutions with no letter repeated twice in a row, ordered
/// by length then lexicographically.
pub fn reduced_words(letters: &[usize], depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in letters {
                if w.last() != Some(&l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub word: Vec<usize>,
    pub generators: RationalCone,
}

/// Distinct images `g(Nef)` for reduced words `g` of length at most
/// `depth`, each listed with its first word.
///
/// Images of the simplicial nef cone are simplicial, so canonical
/// generator sets decide equality.
pub fn orbit_chambers(s: &CySetup, depth: usize, exec: Exec) -> Result<Vec<Chamber>> {
    if s.rho() > 6 {
        return Err(Error::InvalidInput(format!("rho = {} exceeds 6", s.rho())));
    }
    let words = reduced_words(&s.involution_indices(), depth);
    let nef = s.nef();
    let cones = par::map_slice(&words, exec, |w| {
        word_matrix(s, w).map(|m| nef.transform(&m))
    });
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (w, c) in words.into_iter().zip(cones) {
        let c = c?;
        if seen.insert(c.clone()) {
            out.push(Chamber {
                word: w,
                generators: c,
            });
        }
    }
    Ok(out)
}
