use thiserror::Error;

/// Everything that can go wrong in the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("residue characteristic must be an odd prime, got {0}")]
    EvenResidualChar(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("epsilon {eps} is a square modulo {p}")]
    EpsilonIsSquare { p: u64, eps: u64 },
    #[error("truncation level {0} is outside the supported range")]
    LevelOutOfRange(u32),
    #[error("element is not a unit")]
    NonUnit,
    #[error("element is not rational over the base ring")]
    NotRational,
    #[error("group order {predicted} exceeds the enumeration budget {budget}")]
    BudgetExceeded { predicted: u64, budget: u64 },
    #[error("level {have} is too low, need at least {need}")]
    LevelTooLow { have: u32, need: u32 },
    #[error("subgroup {0} is not abelian")]
    NotAbelian(String),
    #[error("true depth {true_depth} exceeds the requested level {level}")]
    TrueDepthTooBig { true_depth: u32, level: i64 },
    #[error("characters disagree on the intersection")]
    IncompatibleOnIntersection,
    #[error("{0} is not a subgroup")]
    NotSubgroup(String),
    #[error("class functions live on different groups")]
    GroupMismatch,
    #[error("basis is not orthonormal")]
    BasisNotOrthonormal,
    #[error("shift {shift} leaves no precision at level {level}")]
    PrecisionExceeded { shift: u32, level: u32 },
    #[error("valuation condition violated: {0}")]
    ValuationViolation(String),
    #[error("domain is not normal in the ambient group")]
    DomainNotNormal,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("linear system over the residue field is inconsistent")]
    SystemInconsistent,
    #[error("no element realizes the character")]
    NotRealizable,
    #[error("depth {depth} needs truncation index at least {need}")]
    DepthTooLow { depth: u32, need: u32 },
    #[error("induced character has self inner product {0}")]
    IrreducibilityFailed(f64),
    #[error("decomposition leaves a residual of norm {0}")]
    DecompositionResidual(f64),
    #[error("identification check failed: {0}")]
    IdentificationFailed(String),
    #[error("near-identity expansion mismatch: {0}")]
    ExpansionMismatch(String),
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error("element not found in {0}")]
    NotAMember(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("serialization: {0}")]
    Serialization(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
