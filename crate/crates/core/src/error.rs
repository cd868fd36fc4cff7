use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation undefined on the empty digraph")]
    EmptyDigraph,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("could not connect {from:?} to {to:?}: {reason}")]
    ConnectionFailure {
        from: (usize, usize),
        to: (usize, usize),
        reason: String,
    },

    #[error("absorber family sampling failed after {attempts} attempts (worst vertex {worst_vertex} covered {worst_coverage} times, floor {floor})")]
    FamilyFailure {
        attempts: usize,
        worst_vertex: usize,
        worst_coverage: usize,
        floor: usize,
    },

    #[error("absorbing path construction failed at junction {junction}: {reason}")]
    ConstructionFailure { junction: usize, reason: String },

    #[error("no free absorber for vertex {vertex}")]
    AbsorptionFailure { vertex: usize },

    #[error("reservoir certification failed after {attempts} draws (worst vertex {worst_vertex}, margin {worst_margin:.3})")]
    ReservoirFailure {
        attempts: usize,
        worst_vertex: usize,
        worst_margin: f64,
    },

    #[error("path cover failed: {paths} paths (budget {path_budget}), {leftover} leftover (budget {leftover_budget})")]
    CoverFailure {
        paths: usize,
        path_budget: usize,
        leftover: usize,
        leftover_budget: usize,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
