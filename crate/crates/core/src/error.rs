use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation {0:?}: not a bijection")]
    MalformedPermutation(Vec<usize>),

    #[error("permutation of length {perm} does not match {degrees} degrees")]
    LengthMismatch { perm: usize, degrees: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator index {index} out of range for a space of dimension {dim}")]
    GeneratorOutOfRange { index: usize, dim: usize },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("generator `{name}` has filtration level {level} but the space is nilpotent of order {nilpotency}")]
    FiltrationOutOfRange {
        name: String,
        level: u32,
        nilpotency: u32,
    },

    #[error("nilpotency order must be positive")]
    ZeroNilpotency,

    #[error("word arity {arity} exceeds the configured cap {cap}")]
    ArityCapExceeded { arity: usize, cap: usize },

    #[error("{context}: degree mismatch at `{generator}` (expected shifted degree {expected}, found {found})")]
    DegreeMismatch {
        context: String,
        generator: String,
        expected: i64,
        found: i64,
    },

    #[error("{context}: filtration violated on `{word}` (needs level >= {required}, found `{found}` at level {level})")]
    FiltrationViolation {
        context: String,
        word: String,
        required: u32,
        found: String,
        level: u32,
    },

    #[error("{context}: `{word}` is not a canonical nonvanishing word")]
    NonCanonicalWord { context: String, word: String },

    #[error("{context}: bracket is not graded antisymmetric on ({left}, {right})")]
    NotAntisymmetric {
        context: String,
        left: String,
        right: String,
    },

    #[error("element must be homogeneous of shifted degree 0, found `{0}`")]
    NotDegreeZero(String),

    #[error("element `{element}` has filtration weight {weight}; twisting needs weight >= 1")]
    NonProperElement { element: String, weight: u32 },

    #[error("{0} must be flat (curvature `{1}`)")]
    FlatnessRequired(String, String),

    #[error("map is not a chain map in degree {0}")]
    NotChainMap(i64),

    #[error("differential does not square to zero in degree {0}")]
    NotDifferential(i64),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("nilpotency mismatch: {0}")]
    NilpotencyMismatch(String),

    #[error("`{element}` is not a Maurer-Cartan element (residual `{residual}`)")]
    NotMaurerCartan { element: String, residual: String },

    #[error("diagram does not commute: {0}")]
    DiagramViolation(String),

    #[error("restrictions are not functorial on faces {lower:?} -> {upper:?}")]
    NonFunctorial {
        lower: Vec<String>,
        upper: Vec<String>,
    },

    #[error("cover: {0}")]
    Cover(String),

    #[error("a product needs a nonempty index set")]
    EmptyIndexSet,

    #[error("linear map is not invertible")]
    Singular,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("identity violated: {0}")]
    IdentityViolated(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
