//! Cones, fans and the chart monoids of toric schemes.

mod cone;
pub mod corpus;
mod fan;

use thiserror::Error;

pub use cone::{
    cone_perp_lattice, cover_graph_connected, dual_cone, faces, orbit_cone_primes, primitive_ray, Cone, OrbitPrime,
    MAX_RANK,
};
pub use fan::{validate_fan, Fan, FanViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("lattice rank {0} exceeds the supported bound")]
    RankTooHigh(usize),
    #[error("expected a vector of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(FanViolation),
}

impl ToricError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::ZeroVector => "ZeroVector",
            Self::RankTooHigh(_) => "RankTooHigh",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
            Self::InvalidFan(_) => "InvalidFan",
        }
    }

    pub fn witness(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Self::ZeroVector => serde_json::Value::Null,
            Self::RankTooHigh(n) => json!({ "rank": n }),
            Self::DimensionMismatch { expected, found } => json!({ "expected": expected, "found": found }),
            Self::InvalidFan(v) => json!(v),
        }
    }
}
