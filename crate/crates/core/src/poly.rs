//! The monoid algebra `K[Λ]` of Laurent polynomials over a semiring.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::semiring::{MonoidAlgebraUnit, Semiring, SemiringFlags};

/// A finitely supported map `Λ → K`. Exponents are stored with trailing zeros
/// removed, so elements of different ambient ranks compare by value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonoidPoly<S> {
    terms: BTreeMap<Vec<i64>, S>,
}

fn trim(mut e: Vec<i64>) -> Vec<i64> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// A single term, for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term<S> {
    pub coeff: S,
    pub exp: Vec<i64>,
}

impl<S: Semiring> MonoidPoly<S> {
    pub fn monomial(coeff: S, exp: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(trim(exp), coeff);
        }
        MonoidPoly { terms }
    }

    pub fn from_unit(u: &MonoidAlgebraUnit<S>) -> Self {
        Self::monomial(u.scalar.clone(), u.exponent.clone())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term<S>>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, t| acc.add(&Self::monomial(t.coeff, t.exp)))
    }

    /// Terms with exponents padded to length `rank`.
    pub fn terms(&self, rank: usize) -> Vec<Term<S>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut exp = e.clone();
                exp.resize(rank.max(exp.len()), 0);
                Term { coeff: c.clone(), exp }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The unit `c·χ^m` when `self` is a single monomial with unit coefficient.
    pub fn as_unit(&self, rank: usize) -> Option<MonoidAlgebraUnit<S>> {
        let mut it = self.terms.iter();
        let (e, c) = it.next()?;
        if it.next().is_some() || !c.is_unit() {
            return None;
        }
        let mut exponent = e.clone();
        exponent.resize(rank, 0);
        Some(MonoidAlgebraUnit {
            scalar: c.clone(),
            exponent,
        })
    }
}

impl<S: Semiring> Semiring for MonoidPoly<S> {
    const FLAGS: SemiringFlags = SemiringFlags {
        semifield: false,
        ..S::FLAGS
    };

    fn zero() -> Self {
        MonoidPoly { terms: BTreeMap::new() }
    }

    fn one() -> Self {
        Self::monomial(S::one(), Vec::new())
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let v = match terms.get(e) {
                Some(a) => a.add(c),
                None => c.clone(),
            };
            if v.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), v);
            }
        }
        MonoidPoly { terms }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let n = ea.len().max(eb.len());
                let e = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out = out.add(&Self::monomial(ca.mul(cb), e));
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn unit_inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        let (e, c) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        let inv = c.unit_inverse()?;
        Some(Self::monomial(inv, e.iter().map(|x| -x).collect()))
    }
}

impl<S: Semiring> fmt::Display for MonoidPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·x^{e:?}")?;
        }
        Ok(())
    }
}
