use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("expected {expected} images, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("truncation degree mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("truncation degree must be at least 1")]
    ZeroTruncation,

    #[error("word is not in the commutator subgroup (exponent vector {0:?})")]
    NotInCommutatorSubgroup(Vec<i64>),

    #[error("automorphism is not IA: image of x{generator} differs from x{generator} in the abelianization")]
    NotIA { generator: usize },

    #[error("not a triangular automorphism: {0}")]
    NotTriangular(String),

    #[error("degree not determined within truncation {truncation}")]
    DegreeUndetermined { truncation: usize },

    #[error("the identity has no leading class")]
    IdentityInput,

    #[error("polynomial is not a Lie element (non-Lyndon leading monomial {0:?})")]
    NotLie(Vec<u16>),

    #[error("invalid generator indices: {0}")]
    InvalidIndices(String),

    #[error("word length budget {0} exceeded")]
    BudgetExceeded(usize),

    #[error("image of x{generator} is not a conjugate of x{generator}")]
    NotConjugate { generator: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}
