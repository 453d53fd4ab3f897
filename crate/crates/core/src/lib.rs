//! Exact computation with small integer k-polymatroids.
//!
//! A [`Polymatroid`] is stored as a dense rank table over the subset lattice of
//! its ground set. On top of that representation the crate provides minors,
//! connectivity, the standard gluing constructions ([`construct`]), removal
//! chains toward a fixed minor ([`chains`]), and a suite of executable
//! checkers for the structural results those operations satisfy ([`verify`]).

pub mod catalog;
pub mod chains;
pub mod construct;
mod element;
mod error;
pub mod format;
pub mod parallel;
mod polymatroid;
pub mod verify;

pub use element::ElementId;
pub use error::PmError;
pub use polymatroid::{
    bits, submasks, Axiom, AxiomViolation, CanonicalKey, ElementKind, Mask, Polymatroid,
    SeparationCertificate, MAX_ELEMENTS,
};
