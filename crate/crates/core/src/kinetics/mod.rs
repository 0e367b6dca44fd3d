//! Power-law kinetics: classification, T-matrix, rate functions and CF-RM.

pub mod cfrm;
pub mod system;

pub use cfrm::{cf_rm_transform, cf_rm_transform_with, CfRmChange, CfRmRecord};
pub use system::{KineticSystem, KineticsClass, TMatrix};
