//! Reconstruction of finite-dimensional Hilbert-space structure from
//! conceptual variables on finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: Cayley tables, actions, subgroups, cosets, permutation closure.
//! * [`variables`]: conceptual variables, contexts, permissibility and the
//!   induced group on a variable's value set.
//! * [`repr`]: unitary representations, commutants, invariant subspaces.
//! * [`coherent`]: coherent-state systems, resolution of the identity and
//!   single-variable operators.
//! * [`pairing`]: the two-variable joint construction (joined group `N`,
//!   swap operator `J`, representation `W`, joint operators).
//! * [`spectra`]: eigen-decompositions, conjugation covariance, discrete
//!   spectral properties, question/answer labels and basis changes.
//! * [`spin`]: spin-r matrices, rotations, spin coherent states and the
//!   discretised in-plane spin context.
//! * [`document`], [`verify`], [`report`]: context documents, the batch
//!   verification driver and deterministic report output.

pub mod coherent;
pub mod document;
pub mod error;
pub mod group;
pub mod linalg;
pub mod pairing;
pub mod partition;
pub mod report;
pub mod repr;
pub mod spectra;
pub mod spin;
pub mod variables;
pub mod verify;

pub use error::{Error, Result};
