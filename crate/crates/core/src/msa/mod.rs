//! The multistationarity decision procedure.

pub mod constraints;
pub mod engine;
pub mod orientation;
pub mod partition;
pub mod patterns;
pub mod precheck;
pub mod shelving;
pub mod witness;

pub use orientation::Orientation;
pub use partition::{
    realign, Colinkage, EarlyExit, EquivalenceClass, EquivalencePartition, FundamentalClass,
    FundamentalClasses,
};
pub use patterns::{enumerate_sign_patterns, SignPattern};
pub use shelving::{check_rules, Shelf, Shelving, Shelvings};
pub use constraints::{BasisTemplates, ConstraintSystem, DegenerateSum, OrderingAtom, RhoToken, Template};
pub use witness::{construct_witness, hint_equilibria, HintEquilibria, MuSource, WitnessOptions};
pub use engine::{analyze, render_form, sign_string, Analysis, AnalysisOptions, BranchStats, InconclusiveReason, Signature, Verdict, DEFAULT_MAX_BRANCHES};
pub use precheck::{precheck_inflow_outflow, PrecheckHit};
