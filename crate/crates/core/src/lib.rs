//! Exact topological invariants of weighted resolution graphs of normal
//! surface singularities.
//!
//! The crate covers, in dependency order:
//!
//! - [`linalg`]: arbitrary-precision matrices, Bareiss solving, Sylvester's test;
//! - [`graph`]: the weighted dual graph, cycles, `K` and the multiplicities `M`;
//! - [`lipman`]: anti-nef cycles, Laufer's fundamental cycle, least divisors
//!   under intersection bounds, the multiplicity bound and box enumeration;
//! - [`blowup`]: point blowups carrying `M`, `L` and ν, and the Aux bound;
//! - [`polar`]: Milnor fiber Euler characteristics, polar multiplicity, the
//!   Laplacian formula and the 𝓟-vector search;
//! - [`document`], [`dot`], [`cli`]: JSON inputs, DOT export and the command line.
//!
//! ```
//! use resgraph::{fixtures, graph::LVector, polar};
//!
//! let g = fixtures::mm();
//! let l = LVector::unit(g.len(), 0);
//! assert_eq!(polar::polar_multiplicity(&g, &l).unwrap(), 15);
//! ```

pub mod blowup;
pub mod cli;
pub mod document;
pub mod dot;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod lipman;
pub mod polar;

use thiserror::Error;

pub use blowup::{AuxTuple, BlowupError, ResolutionState};
pub use document::{parse_constraint_document, parse_graph_document, DocumentError, GraphDocument};
pub use graph::{validate_graph, Cycle, GraphError, LVector, PVector, WeightedGraph};
pub use linalg::{ExactMatrix, RationalVector};
pub use lipman::LipmanError;
pub use polar::{ConstraintSet, ExplorationSolution, PolarError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lipman(#[from] LipmanError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Dot(#[from] dot::DotError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("no P-vector satisfies the constraints")]
    NoSolutions,
}

/// Broad failure classes, one per nonzero process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureClass {
    /// Malformed or invalid input: exit code 1.
    InvalidInput,
    /// Well-formed input with no admissible answer: exit code 2.
    Infeasible,
    /// A search cap or internal budget was hit: exit code 3.
    Resource,
}

impl FailureClass {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureClass::InvalidInput => 1,
            FailureClass::Infeasible => 2,
            FailureClass::Resource => 3,
        }
    }
}

fn graph_class(e: &GraphError) -> FailureClass {
    match e {
        GraphError::NotRealizable { .. } => FailureClass::Infeasible,
        _ => FailureClass::InvalidInput,
    }
}

fn lipman_class(e: &LipmanError) -> FailureClass {
    match e {
        LipmanError::Graph(g) => graph_class(g),
        LipmanError::NegativeBound(_) | LipmanError::InvalidBox(_) => FailureClass::InvalidInput,
        LipmanError::BoxCap { .. } | LipmanError::SearchFailed { .. } | LipmanError::Overflow => {
            FailureClass::Resource
        }
    }
}

fn polar_class(e: &PolarError) -> FailureClass {
    match e {
        PolarError::Graph(g) => graph_class(g),
        PolarError::PrefixCap { .. } => FailureClass::Resource,
        PolarError::Linalg(_) | PolarError::NotBareLeaf { .. } | PolarError::InvalidConstraint(_) => {
            FailureClass::InvalidInput
        }
    }
}

impl Error {
    pub fn class(&self) -> FailureClass {
        match self {
            Error::Document(_) | Error::Usage(_) | Error::Io { .. } | Error::Dot(_) => FailureClass::InvalidInput,
            Error::Graph(e) => graph_class(e),
            Error::Lipman(e) => lipman_class(e),
            Error::Polar(e) => polar_class(e),
            Error::Blowup(e) => match e {
                BlowupError::Graph(g) => graph_class(g),
                BlowupError::Lipman(l) => lipman_class(l),
                BlowupError::Polar(p) => polar_class(p),
                BlowupError::TooManyBranches { .. } | BlowupError::InvariantViolated { .. } => {
                    FailureClass::Infeasible
                }
                BlowupError::NonPositiveNu { .. } => FailureClass::InvalidInput,
            },
            Error::NoSolutions => FailureClass::Infeasible,
        }
    }

    /// Stable machine-readable code for JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Document(d) => d.code.as_str(),
            Error::Graph(GraphError::NotRealizable { .. }) => "not_realizable",
            Error::Graph(GraphError::Invalid(_)) => "invalid_graph",
            Error::Usage(_) => "usage",
            Error::Io { .. } => "io",
            Error::NoSolutions => "no_solutions",
            _ => match self.class() {
                FailureClass::InvalidInput => "invalid_input",
                FailureClass::Infeasible => "infeasible",
                FailureClass::Resource => "resource_cap",
            },
        }
    }
}
