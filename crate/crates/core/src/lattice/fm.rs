//! Exact feasibility of small linear systems by Fourier-Motzkin elimination.
//!
//! Constraints are `a . x (= | <= | <) b` over the rationals. Equalities are
//! eliminated first by substitution; the remaining inequalities are projected
//! out one variable at a time, tracking strictness.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Eq,
    Le,
    Lt,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rel: Rel, rhs: BigRational) -> Self {
        Self { coeffs, rel, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rel: Rel, rhs: i64) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| q(c)).collect(),
            rel,
            rhs: q(rhs),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Holds when all coefficients vanish.
    fn trivially_holds(&self) -> bool {
        match self.rel {
            Rel::Eq => self.rhs.is_zero(),
            Rel::Le => !self.rhs.is_negative(),
            Rel::Lt => self.rhs.is_positive(),
        }
    }

    /// Positive rescaling so that the first nonzero coefficient is +-1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = lead.abs();
            for c in self.coeffs.iter_mut() {
                *c = &*c / &s;
            }
            self.rhs = &self.rhs / &s;
        }
        self
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True iff some rational `x` satisfies every constraint.
pub fn feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    let mut eqs: Vec<Constraint> = Vec::new();
    let mut ineqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity");
        if c.rel == Rel::Eq {
            eqs.push(c.clone());
        } else {
            ineqs.push(c.clone());
        }
    }

    // Gaussian substitution of equalities.
    while let Some(eq) = eqs.pop() {
        let Some(j) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
            if !eq.trivially_holds() {
                return false;
            }
            continue;
        };
        let aj = eq.coeffs[j].clone();
        let substitute = |c: &mut Constraint| {
            let cj = c.coeffs[j].clone();
            if cj.is_zero() {
                return;
            }
            let f = &cj / &aj;
            for (ck, ek) in c.coeffs.iter_mut().zip(&eq.coeffs) {
                *ck = &*ck - &f * ek;
            }
            c.rhs = &c.rhs - &f * &eq.rhs;
        };
        eqs.iter_mut().for_each(substitute);
        ineqs.iter_mut().for_each(substitute);
    }

    let mut set: BTreeSet<Constraint> = BTreeSet::new();
    for c in ineqs {
        if c.is_trivial() {
            if !c.trivially_holds() {
                return false;
            }
        } else {
            set.insert(c.normalized());
        }
    }

    for j in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for c in set {
            if c.coeffs[j].is_positive() {
                pos.push(c);
            } else if c.coeffs[j].is_negative() {
                neg.push(c);
            } else {
                rest.insert(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let sp = BigRational::one() / &p.coeffs[j];
                let sn = BigRational::one() / n.coeffs[j].abs();
                let coeffs: Vec<BigRational> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a * &sp + b * &sn)
                    .collect();
                let rhs = &p.rhs * &sp + &n.rhs * &sn;
                let rel = if p.rel == Rel::Lt || n.rel == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                let c = Constraint { coeffs, rel, rhs };
                if c.is_trivial() {
                    if !c.trivially_holds() {
                        return false;
                    }
                } else {
                    rest.insert(c.normalized());
                }
            }
        }
        set = rest;
    }
    set.iter().all(Constraint::trivially_holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_systems() {
        // x <= 1, x >= 2
        let cs = [
            Constraint::from_ints(&[1], Rel::Le, 1),
            Constraint::from_ints(&[-1], Rel::Le, -2),
        ];
        assert!(!feasible(1, &cs));
        // x <= 1, x >= 1
        let cs = [
            Constraint::from_ints(&[1], Rel::Le, 1),
            Constraint::from_ints(&[-1], Rel::Le, -1),
        ];
        assert!(feasible(1, &cs));
        // x < 1, x >= 1
        let cs = [
            Constraint::from_ints(&[1], Rel::Lt, 1),
            Constraint::from_ints(&[-1], Rel::Le, -1),
        ];
        assert!(!feasible(1, &cs));
        // x + y = 3, x - y = 1, x > 0
        let cs = [
            Constraint::from_ints(&[1, 1], Rel::Eq, 3),
            Constraint::from_ints(&[1, -1], Rel::Eq, 1),
            Constraint::from_ints(&[-1, 0], Rel::Lt, 0),
        ];
        assert!(feasible(2, &cs));
        // 2x = 1, 4x = 3
        let cs = [
            Constraint::from_ints(&[2], Rel::Eq, 1),
            Constraint::from_ints(&[4], Rel::Eq, 3),
        ];
        assert!(!feasible(1, &cs));
    }
}
