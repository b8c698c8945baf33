use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("polynomial {poly} has degree {degree}, need at least {min}")]
    Degree {
        poly: String,
        degree: i64,
        min: usize,
    },

    #[error("modulus {0} is reducible over GF(2)")]
    Reducible(String),

    #[error("division by the zero polynomial")]
    ZeroModulus,

    #[error("field element belongs to a different field ({found} vs {expected})")]
    FieldMismatch { expected: String, found: String },

    #[error("value {value} does not fit in GF(2^{n})")]
    ElementWidth { value: String, n: usize },

    #[error("qubit {index} out of range for circuit width {width}")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("gate uses qubit {0} more than once")]
    DuplicateQubit(usize),

    #[error("state width {found} does not match circuit width {expected}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("circuit contains a Toffoli gate; its map is not linear")]
    NonlinearCircuit,

    #[error("no perfect output assignment exists: the squaring map is singular")]
    NoPerfectMatching,

    #[error("linear map is singular and cannot be synthesized in place")]
    SingularMap,

    #[error("qasm line {line}: {reason}")]
    Qasm { line: usize, reason: String },

    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
