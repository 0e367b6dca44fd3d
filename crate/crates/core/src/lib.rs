//! Multistationarity analysis for power-law kinetic systems.
//!
//! The crate decides, with exact rational arithmetic, whether a kinetic system with
//! reactant-determined power-law interactions can admit two distinct positive
//! stoichiometrically compatible equilibria, and builds a numerically verified witness
//! (two equilibria together with rate constants) when it can.

pub mod corpus;
pub mod error;
pub mod kinetics;
pub mod linalg;
pub mod model;
pub mod msa;
pub mod network;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{MsaError, Result};
