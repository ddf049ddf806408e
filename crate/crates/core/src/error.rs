use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("keep set is empty")]
    EmptyKeep,

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("qubit count {0} out of supported range")]
    QubitCount(usize),

    #[error("normalization violated: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("hermiticity violated: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("unit trace violated: trace {trace}")]
    TraceNotOne { trace: f64 },

    #[error("positivity violated: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("unitarity violated: residual {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("trivial bipartition: one side is empty")]
    TrivialPartition,

    #[error("wrong system size: expected {expected} qubits, found {found}")]
    WrongSystemSize { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bound `{bound}` violated: value {value} exceeds {limit}; state amplitudes {state}")]
    BoundViolation {
        bound: &'static str,
        value: f64,
        limit: f64,
        state: String,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
