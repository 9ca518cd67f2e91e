//! Klyachko families, line and rank-`n` cocycles, and Δ-Klyachko spaces.

mod cocycle;
mod family;
mod space;
mod split;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{IntVec, Sublattice};
use crate::linear::InvertibilityWitness;
use crate::toric::{validate_fan, Cone, Fan, FanViolation, ToricError};

pub use cocycle::{family_to_cocycle, family_to_cocycle_on, trivialize_affine, CocycleWitness, LineCocycle, Trivialization};
pub use family::{check_family, family_inv, family_mul, CompatibilityReport, FamilyViolation, KlyachkoFamily};
pub use space::{
    space_iso, space_to_matroid_bundle, space_to_tuple, tuple_to_space, ChainStep, DeltaKlyachkoSpace, MatroidBundle,
    RayChain,
};
pub use split::{split_cocycle, RankNCocycle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KlyachkoError {
    #[error("invalid fan: {0}")]
    InvalidFan(FanViolation),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("no representative given for cone {cone}")]
    MissingCone { cone: usize },
    #[error("cone {cone}: expected a vector of length {expected}, found {found}")]
    WrongLength { cone: usize, expected: usize, found: usize },
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("family is not compatible at cone {}, ray {}", .0.cone, .0.ray)]
    InvalidFamily(FamilyViolation),
    #[error("not a cocycle: {0:?}")]
    NotACocycle(CocycleWitness),
    #[error("fan has {maximal} maximal cones, expected one")]
    NotAffineSubfan { maximal: usize },
    #[error("cone {cone} is not among the charts")]
    MissingChart { cone: usize },
    #[error("charts do not cover cone {cone}")]
    NotACover { cone: usize },
    #[error("transition {from} -> {to} is not invertible: {witness}")]
    NotInvertibleTransition {
        from: usize,
        to: usize,
        witness: InvertibilityWitness,
    },
    #[error("permutation parts fail the cocycle identity on charts {0:?}")]
    InconsistentPermutationCocycle((usize, usize, usize)),
    #[error("jumps of basis vector {index} admit no character on cone {cone}")]
    NoSolution { cone: usize, index: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty tuple")]
    EmptyTuple,
}

impl KlyachkoError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::InvalidFan(_) => "InvalidFan",
            Self::Toric(e) => e.code(),
            Self::MissingCone { .. } => "MissingCone",
            Self::WrongLength { .. } => "WrongLength",
            Self::FanMismatch => "FanMismatch",
            Self::InvalidFamily(_) => "InvalidFamily",
            Self::NotACocycle(_) => "NotACocycle",
            Self::NotAffineSubfan { .. } => "NotAffineSubfan",
            Self::MissingChart { .. } => "MissingChart",
            Self::NotACover { .. } => "NotACover",
            Self::NotInvertibleTransition { .. } => "NotInvertibleTransition",
            Self::InconsistentPermutationCocycle(_) => "InconsistentPermutationCocycle",
            Self::NoSolution { .. } => "NoSolution",
            Self::ShapeMismatch(_) => "ShapeMismatch",
            Self::EmptyTuple => "EmptyTuple",
        }
    }

    pub fn witness(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Self::InvalidFan(v) => json!(v),
            Self::Toric(e) => e.witness(),
            Self::MissingCone { cone } | Self::MissingChart { cone } | Self::NotACover { cone } => json!({ "cone": cone }),
            Self::WrongLength { cone, expected, found } => {
                json!({ "cone": cone, "expected": expected, "found": found })
            }
            Self::InvalidFamily(v) => json!(v),
            Self::NotACocycle(w) => json!(w),
            Self::NotAffineSubfan { maximal } => json!({ "maximal_cones": maximal }),
            Self::NotInvertibleTransition { from, to, witness } => {
                json!({ "from": from, "to": to, "witness": witness })
            }
            Self::InconsistentPermutationCocycle((a, b, c)) => json!({ "charts": [a, b, c] }),
            Self::NoSolution { cone, index } => json!({ "cone": cone, "index": index }),
            Self::ShapeMismatch(m) => json!({ "detail": m }),
            Self::FanMismatch | Self::EmptyTuple => serde_json::Value::Null,
        }
    }
}

/// A fan together with the per-cone data every Klyachko computation needs:
/// the cones themselves and the unit lattices `Λ ∩ σ^⊥`.
#[derive(Debug, Serialize)]
pub struct FanAtlas {
    #[serde(flatten)]
    fan: Fan,
    #[serde(skip)]
    cones: Vec<Cone>,
    #[serde(skip)]
    cone_rays: Vec<Vec<usize>>,
    #[serde(skip)]
    perps: Vec<Sublattice>,
    #[serde(skip)]
    maximal: Vec<usize>,
    #[serde(skip)]
    ray_cones: Vec<Option<usize>>,
}

impl PartialEq for FanAtlas {
    fn eq(&self, other: &Self) -> bool {
        self.fan == other.fan
    }
}

impl Eq for FanAtlas {}

impl FanAtlas {
    pub fn new(fan: Fan) -> Result<Arc<Self>, KlyachkoError> {
        validate_fan(&fan).map_err(KlyachkoError::InvalidFan)?;
        Self::new_unchecked(fan)
    }

    /// Skips fan validation. Downstream results are meaningless on fans that
    /// would fail it.
    pub fn new_unchecked(fan: Fan) -> Result<Arc<Self>, KlyachkoError> {
        let mut cones = Vec::with_capacity(fan.cones.len());
        for i in 0..fan.cones.len() {
            if let Some(&index) = fan.cones[i].iter().find(|&&r| r >= fan.rays.len()) {
                return Err(KlyachkoError::InvalidFan(FanViolation::BadRayIndex { cone: i, index }));
            }
            cones.push(fan.cone(i)?);
        }
        let perps = cones.iter().map(Cone::perp_sublattice).collect();
        let cone_rays = (0..fan.cones.len()).map(|i| fan.cone_rays(i)).collect();
        let maximal = fan.maximal_cones();
        let ray_cones = (0..fan.rays.len()).map(|r| fan.ray_cone(r)).collect();
        Ok(Arc::new(FanAtlas {
            fan,
            cones,
            cone_rays,
            perps,
            maximal,
            ray_cones,
        }))
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.fan.rank
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn ray(&self, r: usize) -> &IntVec {
        &self.fan.rays[r]
    }

    /// Sorted ray indices of cone `i`.
    pub fn rays_of(&self, i: usize) -> &[usize] {
        &self.cone_rays[i]
    }

    /// `Λ ∩ σ^⊥` for cone `i`.
    pub fn perp(&self, i: usize) -> &Sublattice {
        &self.perps[i]
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    /// Index of the one-dimensional cone on ray `r`.
    pub fn ray_cone(&self, r: usize) -> Option<usize> {
        self.ray_cones[r]
    }

    pub fn is_face(&self, tau: usize, sigma: usize) -> bool {
        self.cone_rays[tau].iter().all(|r| self.cone_rays[sigma].contains(r))
    }

    /// The cone `σ ∩ τ`, which on a valid fan is spanned by the common rays.
    pub fn overlap(&self, sigma: usize, tau: usize) -> Option<usize> {
        let common: Vec<usize> = self.cone_rays[sigma]
            .iter()
            .filter(|r| self.cone_rays[tau].contains(r))
            .copied()
            .collect();
        self.fan.find_cone(&common)
    }

    /// Maximal cone whose sorted ray list is lexicographically smallest.
    pub fn first_maximal(&self) -> usize {
        *self
            .maximal
            .iter()
            .min_by(|&&a, &&b| self.cone_rays[a].cmp(&self.cone_rays[b]))
            .expect("a fan has at least one cone")
    }
}
