use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size bounds ({lower}, {upper}): need 1 <= lower <= upper")]
    InvalidBounds { lower: usize, upper: usize },

    #[error("agent {agent} is out of range for a game with {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("agent {0} cannot value itself")]
    SelfValuation(usize),

    #[error("valuation table must be {n} x {n}")]
    TableShape { n: usize },

    #[error("game declared symmetric but v({a},{b}) != v({b},{a})")]
    Asymmetric { a: usize, b: usize },

    #[error("agent {0} appears in more than one coalition")]
    DuplicateAgent(usize),

    #[error("agent {0} is not covered by any coalition")]
    MissingAgent(usize),

    #[error("partition contains an empty coalition")]
    EmptyCoalition,

    #[error("partition covers {partition} agents but the game has {game}")]
    SizeMismatch { partition: usize, game: usize },

    #[error("agent {agent} is not a member of the coalition")]
    NotAMember { agent: usize },

    #[error("partition violates the size bounds ({lower}, {upper})")]
    NotFeasiblePartition { lower: usize, upper: usize },

    #[error("no ({lower}, {upper})-partition of {n} agents into {k} coalitions exists")]
    Infeasible { n: usize, k: usize, lower: usize, upper: usize },

    #[error("threshold is undefined when lower == upper")]
    EqualBounds,

    #[error("algorithm needs nonzero valuations but v({a},{b}) = 0")]
    NonzeroViolation { a: usize, b: usize },

    #[error("algorithm needs nonnegative valuations but v({a},{b}) < 0")]
    NegativeValuationViolation { a: usize, b: usize },

    #[error("{0}")]
    UnsupportedBounds(String),

    #[error("game is not symmetric")]
    NotSymmetric,

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
