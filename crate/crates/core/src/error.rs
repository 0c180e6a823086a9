use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge {{{0}, {1}}} is not in the graph")]
    UnknownEdge(u32, u32),

    #[error("vertex {0} is not in the graph")]
    UnknownVertex(u32),

    #[error("{what}: needed {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("number of extra markings must be at least 3, got {0}")]
    TooFewMarkings(usize),

    #[error("invalid marking data: {0}")]
    InvalidMarking(String),

    #[error("class expression still carries psi decorations")]
    ResidualPsi,

    #[error("expected {expected} constraints, got {got}")]
    WrongConstraintCount { expected: usize, got: usize },

    #[error("digraph has a directed cycle")]
    CyclicDigraph,

    #[error("vertex {vertex} is not a {role}")]
    NotSinkOrSource { vertex: u32, role: &'static str },

    #[error("sign vector does not describe a nonempty open region")]
    InfeasibleChamber,

    #[error("chamber is unbounded")]
    UnboundedChamber,

    #[error("point lies on hyperplane {0}")]
    OnHyperplane(usize),

    #[error("weights: {0}")]
    InvalidWeights(String),

    #[error("newton iteration did not converge in chamber {chamber} (gradient norm {grad_norm:e})")]
    NoConvergence { chamber: usize, grad_norm: f64 },

    #[error("interpolation produced an invalid polynomial: {0}")]
    Interpolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
