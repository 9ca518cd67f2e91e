use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lattice::{dot, IntVec};
use crate::semiring::{MonoidAlgebraUnit, Semiring};
use crate::toric::Fan;

use super::{FanAtlas, KlyachkoError, KlyachkoFamily};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleWitness {
    BadChart { chart: usize },
    MissingTransition { from: usize, to: usize },
    WrongLength { from: usize, to: usize },
    NoOverlap { from: usize, to: usize },
    NotAUnitOnOverlap { from: usize, to: usize, overlap: usize },
    NotIdentity { chart: usize },
    NotInverse { from: usize, to: usize },
    TripleFailure { first: usize, second: usize, third: usize },
}

/// Transition units `φ_στ` of a line bundle on the ordered pairs of charts.
///
/// A section over `σ` and one over `τ` are related by `s_σ = φ_στ·s_τ`, so
/// `φ_σσ = 1` and `φ_στ·φ_τυ = φ_συ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCocycle<S> {
    atlas: Arc<FanAtlas>,
    charts: Vec<usize>,
    transitions: BTreeMap<(usize, usize), MonoidAlgebraUnit<S>>,
}

#[derive(Serialize, Deserialize)]
struct TransitionJson<S> {
    from: usize,
    to: usize,
    scalar: S,
    exponent: IntVec,
}

#[derive(Serialize, Deserialize)]
struct LineCocycleJson<S> {
    fan: Fan,
    charts: Vec<usize>,
    transitions: Vec<TransitionJson<S>>,
}

impl<S: Semiring + Serialize> Serialize for LineCocycle<S> {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        LineCocycleJson {
            fan: self.atlas.fan().clone(),
            charts: self.charts.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|(&(from, to), u)| TransitionJson {
                    from,
                    to,
                    scalar: u.scalar.clone(),
                    exponent: u.exponent.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<S: Semiring> LineCocycle<S> {
    pub fn new(
        atlas: Arc<FanAtlas>,
        charts: Vec<usize>,
        transitions: BTreeMap<(usize, usize), MonoidAlgebraUnit<S>>,
    ) -> Result<Self, KlyachkoError> {
        let c = LineCocycle {
            atlas,
            charts,
            transitions,
        };
        c.check().map_err(KlyachkoError::NotACocycle)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        atlas: Arc<FanAtlas>,
        charts: Vec<usize>,
        transitions: BTreeMap<(usize, usize), MonoidAlgebraUnit<S>>,
    ) -> Self {
        LineCocycle {
            atlas,
            charts,
            transitions,
        }
    }

    /// All transitions equal to 1, on the maximal cones.
    pub fn trivial(atlas: Arc<FanAtlas>) -> Self {
        let charts = atlas.maximal().to_vec();
        let n = atlas.rank();
        let transitions = charts
            .iter()
            .flat_map(|&a| charts.iter().map(move |&b| ((a, b), MonoidAlgebraUnit::identity(n))))
            .collect();
        LineCocycle {
            atlas,
            charts,
            transitions,
        }
    }

    pub fn atlas(&self) -> &Arc<FanAtlas> {
        &self.atlas
    }

    pub fn charts(&self) -> &[usize] {
        &self.charts
    }

    pub fn transition(&self, from: usize, to: usize) -> Option<&MonoidAlgebraUnit<S>> {
        self.transitions.get(&(from, to))
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), MonoidAlgebraUnit<S>> {
        &self.transitions
    }

    pub fn is_trivial(&self) -> bool {
        self.transitions.values().all(MonoidAlgebraUnit::is_identity)
    }

    /// Checks unit-ness on overlaps, the normalization and inverse laws, and
    /// the triple identity.
    pub fn check(&self) -> Result<(), CocycleWitness> {
        let atlas = &self.atlas;
        let n = atlas.rank();
        for (i, &chart) in self.charts.iter().enumerate() {
            if chart >= atlas.num_cones() || self.charts[..i].contains(&chart) {
                return Err(CocycleWitness::BadChart { chart });
            }
        }
        for &from in &self.charts {
            for &to in &self.charts {
                let u = self
                    .transition(from, to)
                    .ok_or(CocycleWitness::MissingTransition { from, to })?;
                if u.exponent.len() != n || !u.scalar.is_unit() {
                    return Err(CocycleWitness::WrongLength { from, to });
                }
                let overlap = atlas.overlap(from, to).ok_or(CocycleWitness::NoOverlap { from, to })?;
                if !atlas.perp(overlap).contains(&u.exponent) {
                    return Err(CocycleWitness::NotAUnitOnOverlap { from, to, overlap });
                }
            }
        }
        for &a in &self.charts {
            if !self.transitions[&(a, a)].is_identity() {
                return Err(CocycleWitness::NotIdentity { chart: a });
            }
            for &b in &self.charts {
                if self.transitions[&(a, b)].mul(&self.transitions[&(b, a)]) != MonoidAlgebraUnit::identity(n) {
                    return Err(CocycleWitness::NotInverse { from: a, to: b });
                }
                for &c in &self.charts {
                    if self.transitions[&(a, b)].mul(&self.transitions[&(b, c)]) != self.transitions[&(a, c)] {
                        return Err(CocycleWitness::TripleFailure {
                            first: a,
                            second: b,
                            third: c,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(atlas: Arc<FanAtlas>, value: &serde_json::Value) -> Result<Self, KlyachkoError>
    where
        S: for<'de> Deserialize<'de>,
    {
        let charts: Vec<usize> = serde_json::from_value(value["charts"].clone())
            .map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
        let ts: Vec<TransitionJson<S>> = serde_json::from_value(value["transitions"].clone())
            .map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
        let transitions = ts
            .into_iter()
            .map(|t| {
                (
                    (t.from, t.to),
                    MonoidAlgebraUnit {
                        scalar: t.scalar,
                        exponent: t.exponent,
                    },
                )
            })
            .collect();
        Self::new(atlas, charts, transitions)
    }
}

/// `φ_στ = u_σ⁻¹·u_τ` with scalar 1, on the maximal cones.
pub fn family_to_cocycle<S: Semiring>(f: &KlyachkoFamily) -> LineCocycle<S> {
    let charts = f.atlas().maximal().to_vec();
    family_to_cocycle_on(f, &charts).expect("maximal cones are valid charts")
}

/// As [`family_to_cocycle`] with an explicit chart list.
pub fn family_to_cocycle_on<S: Semiring>(f: &KlyachkoFamily, charts: &[usize]) -> Result<LineCocycle<S>, KlyachkoError> {
    let mut transitions = BTreeMap::new();
    for &a in charts {
        for &b in charts {
            let e = f.rep(b).iter().zip(f.rep(a)).map(|(x, y)| x - y).collect();
            transitions.insert((a, b), MonoidAlgebraUnit::monomial(e));
        }
    }
    LineCocycle::new(f.atlas().clone(), charts.to_vec(), transitions)
}

/// Outcome of [`trivialize_affine`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Trivialization<S> {
    /// `f_υ` with `φ_τυ = f_τ⁻¹·f_υ` for all charts.
    Trivialized { units: BTreeMap<usize, MonoidAlgebraUnit<S>> },
    /// The character pairs nontrivially with this ray of `σ`.
    Obstructed { ray: usize, pairing: i64 },
}

/// Trivializes a line cocycle on the face fan of a single cone `σ`, which must
/// be one of the charts. With a character `x` attached, the equivariant
/// structure is trivial exactly when `x ∈ Λ ∩ σ^⊥`.
pub fn trivialize_affine<S: Semiring>(
    c: &LineCocycle<S>,
    character: Option<&[i64]>,
) -> Result<Trivialization<S>, KlyachkoError> {
    let atlas = c.atlas();
    let [sigma] = atlas.maximal() else {
        return Err(KlyachkoError::NotAffineSubfan {
            maximal: atlas.maximal().len(),
        });
    };
    let sigma = *sigma;
    if !c.charts().contains(&sigma) {
        return Err(KlyachkoError::MissingChart { cone: sigma });
    }
    if let Some(x) = character {
        if x.len() != atlas.rank() {
            return Err(KlyachkoError::WrongLength {
                cone: sigma,
                expected: atlas.rank(),
                found: x.len(),
            });
        }
        for &r in atlas.rays_of(sigma) {
            let pairing = dot(x, atlas.ray(r));
            if pairing != 0 {
                return Ok(Trivialization::Obstructed { ray: r, pairing });
            }
        }
    }
    let units: BTreeMap<usize, MonoidAlgebraUnit<S>> =
        c.charts().iter().map(|&u| (u, c.transitions[&(sigma, u)].clone())).collect();
    for &a in c.charts() {
        for &b in c.charts() {
            if units[&a].inverse().mul(&units[&b]) != c.transitions[&(a, b)] {
                return Err(KlyachkoError::NotACocycle(CocycleWitness::TripleFailure {
                    first: a,
                    second: sigma,
                    third: b,
                }));
            }
        }
    }
    Ok(Trivialization::Trivialized { units })
}
