use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("parameter index {index} out of range for {count} parameters")]
    InvalidParameter { index: usize, count: usize },

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid noise model: {0}")]
    InvalidNoiseModel(String),

    /// gamma(Z_q) = 1 - p0 - p1 vanishes, so the readout map is not invertible.
    #[error("readout mitigation impossible for qubit {qubit}: gamma(Z) = 1 - p0 - p1 = {gamma}")]
    SingularReadout { qubit: usize, gamma: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("system too large: {num_qubits} qubits exceeds the limit of {limit}")]
    TooLarge { num_qubits: usize, limit: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
