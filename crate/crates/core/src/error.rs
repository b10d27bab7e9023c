use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("CNOT control and target must differ (both are qubit {0})")]
    SameControlTarget(usize),

    #[error("register of {requested} qubits exceeds the {limit}-qubit limit")]
    RegisterTooLarge { requested: usize, limit: usize },

    #[error("number of shots must be positive")]
    ZeroShots,

    #[error("unbiased MMD estimate needs at least 2 shots, got {0}")]
    TooFewShots(u64),

    #[error("`{key}` = {value} is outside [0, 1]")]
    ProbabilityRange { key: String, value: f64 },

    #[error("readout confusion matrix for qubit {qubit} is not row-stochastic")]
    NonStochastic { qubit: usize },

    #[error("unsupported entangler design d_C = {0} (expected 0, 2, 3 or 4)")]
    UnsupportedEntangler(usize),

    #[error("d_C = 3 needs a Chow-Liu source distribution or an explicit edge list")]
    MissingChowLiuSource,

    #[error("built-in entangler layouts need a 4-qubit register, got {0}")]
    LayoutNeedsFourQubits(usize),

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParameterLength { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("kernel bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("invalid value for `{key}`: {msg}")]
    InvalidValue { key: String, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    /// Raised by training observers that fail to persist progress.
    #[error("output: {0}")]
    Output(String),
}
