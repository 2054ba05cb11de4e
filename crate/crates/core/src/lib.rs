//! Exact classification of algebraic semigroup structures on smooth
//! projective surfaces.
//!
//! A non-trivial semigroup law on a surface `S` is determined by a
//! fibration `π: S → C` with a section `σ` and a law on the base curve:
//! `μ(s₁, s₂) = σ(μ̃(π(s₁), π(s₂)))`. The modules below decide when such a
//! retraction exists, build it explicitly on complex tori, and describe the
//! space of sections `Mor_π(C, S)`.

pub mod classifier;
pub mod cli;
pub mod fibration_numerics;
pub mod group_actions;
pub mod lattice_tori;
pub mod rational;
pub mod ruled_numerics;
pub mod schema;
pub mod semigroup_laws;
pub mod snf;
pub mod verify;

pub use classifier::{classify, explain, ClassificationReport, SurfaceDescriptor, Verdict};
pub use lattice_tori::{CmScalar, FieldTag, TorusPoint};
