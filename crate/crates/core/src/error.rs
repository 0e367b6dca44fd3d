use thiserror::Error;

/// Errors raised while building or analysing a kinetic system.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MsaError {
    #[error("the network has no reactions")]
    EmptyNetwork,
    #[error("reaction `{0}` has identical reactant and product complexes")]
    SelfLoop(String),
    #[error("reaction `{id}` duplicates reaction `{existing}` (same reactant and product)")]
    DuplicateReaction { id: String, existing: String },
    #[error("reaction id `{0}` is used more than once")]
    DuplicateId(String),
    #[error("reaction `{0}` has a negative stoichiometric coefficient")]
    NegativeCoefficient(String),
    #[error("reaction `{id}` names `{reverse}` as its reverse, but {problem}")]
    BadReversePairing {
        id: String,
        reverse: String,
        problem: String,
    },
    #[error("unknown species index {0}")]
    UnknownSpecies(usize),
    #[error("kinetic order matrix has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    KineticOrderShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("rate constant of reaction `{0}` must be positive")]
    NonPositiveRate(String),
    #[error("expected {expected} rate constants, got {got}")]
    RateCount { expected: usize, got: usize },
    #[error("the kinetic system has no rate constants")]
    MissingRates,
    #[error("the kinetic system is not reactant-determined (reactant `{0}` has branching reactions with different kinetic orders)")]
    NotReactantDetermined(String),
    #[error("complex `{0}` is not a reactant complex")]
    NotAReactant(String),
    #[error("complexes {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("the zero complex is a non-factorizable reactant; reactant multiples cannot separate its kinetic orders")]
    ZeroComplexNotFactorizable,
    #[error("concentrations must be positive (entry {index} is {value})")]
    NonPositiveConcentration { index: usize, value: f64 },
    #[error("vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, MsaError>;
