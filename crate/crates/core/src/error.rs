use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while reading a diagram, building Weyl
/// groups, or assembling a GKM graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("vectors are linearly dependent: {0}")]
    LinearlyDependent(String),
    #[error("invalid root set: {0}")]
    InvalidRoots(String),
    #[error("gram form is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("group generation exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("generator does not preserve the gram form: {0}")]
    NotOrthogonal(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("unsupported rank {n} for root system family {family}")]
    UnsupportedRank { family: String, n: usize },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("schema error at `{path}`: {msg}")]
    Schema { path: String, msg: String },
    #[error("parameter `{0}` is referenced but not bound")]
    UnboundParameter(String),

    #[error("roots of K are not a subset of the roots of G: {0}")]
    NotSubsystem(String),
    #[error("edge would join a vertex to itself: {0}")]
    SelfEdge(String),
    #[error("the line stabiliser W' of lambda is not contained in W(K-)")]
    WprimeNotInKminus,
    #[error("wrong case: expected {expected}, diagram is {found}")]
    WrongCase { expected: String, found: String },
    #[error("W(K-)/W(H) has order {index}, expected 2")]
    QuotientNotZ2 { index: usize },
    #[error("normal edges depend on the choice of g: {0}")]
    InconsistentChoice(String),
    #[error("action is not GKM: {0}")]
    NotGkm(String),
    #[error("diagram failed validation: {0}")]
    InvalidDiagram(String),
    #[error("graph failed validation: {0}")]
    InvalidGraph(String),
    #[error("equivariant formality violated: {0}")]
    FormalityViolation(String),
}
