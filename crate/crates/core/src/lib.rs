//! Torus-equivariant vector bundles on toric schemes over idempotent
//! semifields, reduced to exact integer and semiring computations.
//!
//! * [`semiring`]: the semifields 𝔹 and 𝕋 and the base ℕ.
//! * [`linear`]: `GL_n` over zero-sum-free semirings and the convolution group on `S_n`.
//! * [`lattice`]: Hermite and Smith normal forms, sublattices, quotients.
//! * [`toric`]: cones, fans, duality.
//! * [`klyachko`]: Klyachko families, cocycles, splitting, filtration spaces.
//! * [`picard`]: equivariant and ordinary Picard groups.

pub mod error;
pub mod klyachko;
pub mod lattice;
pub mod linear;
pub mod picard;
pub mod poly;
pub mod semiring;
pub mod toric;

pub use error::Error;
