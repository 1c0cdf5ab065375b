use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("repetition count must be at least 1 (got `{0}`)")]
    BadCount(String),
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("replacement must contain the fresh generator exactly once")]
    BadSubstitution,
    #[error("group has no surjection onto Z (first Betti number is 0)")]
    NoCharacters,
    #[error("polynomials live in rings with {0} and {1} variables")]
    RingMismatch(usize, usize),
    #[error("zero polynomial has no normal form")]
    ZeroPolynomial,
    #[error("all polynomials are zero")]
    ZeroIdeal,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("matrix is not unimodular")]
    BadBasis,
    #[error("abelianization has no free part")]
    NoFreePart,
    #[error("presentation is not in simple form with respect to `{0}`")]
    NotSimpleForm(String),
    #[error("presentation is not in standard form with respect to `{0}`")]
    NotStandardForm(String),
    #[error("character does not vanish on a relator")]
    NotACharacter,
    #[error("bad relator: {0}")]
    BadRelator(String),
    #[error("relator has nonzero exponent sum; rank-2 analysis needs (0,0)")]
    NotRank2,
    #[error("coset enumeration exceeded {0} cosets")]
    Overflow(usize),
    #[error("character is not surjective")]
    NotPrimitive,
    #[error("coset table is incomplete")]
    Incomplete,
    #[error("no concatenation pattern found")]
    NoPattern,
    #[error("no inclusion word for generator {0}")]
    NoInclusion(usize),
    #[error("slope ({0},{1}) is not a valid filling slope")]
    BadSlope(i64, i64),
    #[error("presentation has no cusp {0}")]
    NoCusp(usize),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
