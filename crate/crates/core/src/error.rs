use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid word syntax: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("automorphism invariant violated: {0}")]
    NotInverse(String),

    #[error("automorphism is not in the Torelli subgroup (degree-1 terms present)")]
    NotTorelli,

    #[error("quotient action is not regular: {0}")]
    NotRegular(String),

    #[error("word is not in the cover subgroup: path ends at vertex {end}")]
    NotInSubgroup { end: usize },

    #[error("subgroup is not invariant under the automorphism: image of basis loop {edge} leaves K")]
    NotInvariant { edge: usize },

    #[error("word length {len} exceeds guard {limit}")]
    LengthGuard { len: usize, limit: usize },

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("orbit saturation did not close within {passes} passes (rank {rank})")]
    PassLimit { passes: usize, rank: usize },

    #[error("enumeration bound {bound} exceeded ({size})")]
    EnumerationBound { size: usize, bound: usize },

    #[error("matrix is not upper unitriangular mod {0}")]
    NotUnitriangular(u64),

    #[error("push datum kind mismatch: expected {0}")]
    KindMismatch(&'static str),

    #[error("degenerate class: {0}")]
    Degenerate(String),
}
