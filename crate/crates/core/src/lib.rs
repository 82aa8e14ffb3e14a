//! Incidence complexes, their automorphism groups, power complexes and twisting.

pub mod catalog;
pub mod complex;
pub mod coxeter;
pub mod error;
pub mod io;
pub mod limits;
pub mod morphism;
pub mod perm;
pub mod power;
pub mod regular;
pub mod suite;
pub mod symmetry;
pub mod twist;
pub mod validate;

pub use complex::{Face, FaceId, Flag, IncidenceComplex};
pub use error::{Error, Result};
pub use limits::Limits;
pub use perm::{Permutation, PermutationGroup};
pub use validate::{validate, AxiomReport};
