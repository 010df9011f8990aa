use alloc::string::String;

use crate::tree::TreeViolation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("distribution has no symbols")]
    EmptyDistribution,
    #[error("{labels} labels but {probs} probabilities")]
    LengthMismatch { labels: usize, probs: usize },
    #[error("symbol {index} has non-positive mass {mass}")]
    NonPositiveMass { index: usize, mass: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    MassSumError { sum: f64 },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("symbol index {index} outside universe of size {len}")]
    OutOfRangeIndex { index: usize, len: usize },
    #[error("symbol {symbol} appears in more than one cell")]
    OverlappingCells { symbol: usize },
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(u32),
    #[error("coder requires arity {expected}, query set has {found}")]
    ArityMismatch { expected: u32, found: u32 },
    #[error("query {query} has no cells")]
    EmptyQuery { query: usize },
    #[error("query {query} needs {cells} cells but arity is {arity}")]
    TooManyCells {
        query: usize,
        cells: usize,
        arity: u32,
    },
    #[error("query ids must be unique and dense from 0 (expected {expected}, found {found})")]
    QueryIds { expected: usize, found: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(TreeViolation),
    #[error("no admissible query splits a candidate set of {candidates} symbols")]
    InfeasibleQuerySet { candidates: usize },
    #[error("exact partition search needs {states} states, limit is {limit}")]
    BudgetExceeded { states: u64, limit: u64 },
    #[error("search space exceeds {limit} states")]
    TooLarge { limit: u64 },
    #[error("Kraft sum {sum} exceeds 1")]
    KraftViolation { sum: f64 },
    #[error("fleet cannot be placed on the board")]
    ImpossibleFleet,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("observed answer is inconsistent with every remaining candidate")]
    ContradictoryAnswer,
    #[error("cell {0} has already been fired at")]
    CellAlreadyShot(usize),
    #[error("target is already identified")]
    Solved,
}

impl Error {
    /// Stable machine-readable name, used by the CLI diagnostics and the
    /// service error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyDistribution => "EmptyDistribution",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonPositiveMass { .. } => "NonPositiveMass",
            Error::MassSumError { .. } => "MassSumError",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::OutOfRangeIndex { .. } => "OutOfRangeIndex",
            Error::OverlappingCells { .. } => "OverlappingCells",
            Error::EmptyCandidates => "EmptyCandidates",
            Error::InvalidArity(_) => "InvalidArity",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::EmptyQuery { .. } => "EmptyQuery",
            Error::TooManyCells { .. } => "TooManyCells",
            Error::QueryIds { .. } => "QueryIds",
            Error::InvalidTree(_) => "InvalidTree",
            Error::InfeasibleQuerySet { .. } => "InfeasibleQuerySet",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::TooLarge { .. } => "TooLarge",
            Error::KraftViolation { .. } => "KraftViolation",
            Error::ImpossibleFleet => "ImpossibleFleet",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::ContradictoryAnswer => "ContradictoryAnswer",
            Error::CellAlreadyShot(_) => "CellAlreadyShot",
            Error::Solved => "Solved",
        }
    }

    /// Instances that are well-formed but cannot be solved.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleQuerySet { .. } | Error::ImpossibleFleet
        )
    }
}
