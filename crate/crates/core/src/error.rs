use thiserror::Error;

use crate::meta::DerectCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("part set must contain at least one part")]
    EmptyPartSet,
    #[error("duplicate part name `{0}`")]
    DuplicatePart(String),
    #[error("unknown part name `{0}`")]
    UnknownPart(String),
    #[error("at most {max} parts are supported, got {got}", max = crate::MAX_PARTS)]
    TooManyParts { got: usize },
    #[error("matrix is not symmetric: entries ({0}, {1}) and ({1}, {0}) differ")]
    Asymmetric(usize, usize),
    #[error("matrix must be {expected}x{expected}")]
    MatrixShape { expected: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("list function has {got} lists but the graph has {expected} vertices")]
    ListCount { expected: usize, got: usize },
    #[error("list of vertex {0} is not a member of the list family")]
    ListNotInFamily(usize),

    #[error("relation domains do not match for composition")]
    DomainMismatch,
    #[error("relation is not rectangular")]
    NotRectangular,
    #[error("relation is empty")]
    EmptyRelation,
    #[error("the lists in use are not purifying for the matrix")]
    NotPurifying,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("tractability hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("edge ({0}, {1}) does not join the two sides of the bipartite graph")]
    NotBipartiteShape(usize, usize),
    #[error("k = {k} must lie in [1, {n}]")]
    InvalidK { k: usize, n: usize },

    #[error("arc-consistency recursion exceeded depth {limit}")]
    DepthExceeded { limit: usize },
    #[error("counting is #P-complete for these parameters")]
    Refused(DerectCertificate),
    #[error("classification inconclusive: search budget exhausted")]
    Inconclusive,
    #[error("brute-force budget exceeded: {needed} assignments, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
