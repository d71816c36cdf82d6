use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: usize, max: usize },
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("terms of a collective rotation do not commute: {0} and {1}")]
    NonCommuting(String, String),
    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),
    #[error("n*d must be even for a d-regular graph (n={n}, d={d})")]
    DegreeParity { n: usize, d: usize },
    #[error("degree {d} must be smaller than vertex count {n}")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("pairing model failed to produce a simple graph after {attempts} attempts (n={n}, d={d}, seed={seed})")]
    PairingFailed { n: usize, d: usize, seed: u64, attempts: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFinite { value: f64, point: Vec<f64> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("optimization failed at layer {layer}: {source}")]
    Optimizer {
        layer: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed CSV at row {row}, column {column}: {message}")]
    MalformedCsv { row: usize, column: String, message: String },
    #[error("{0} run(s) failed")]
    RunsFailed(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
