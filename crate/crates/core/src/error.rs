use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    #[error("invalid Hamiltonian: anti-Hermitian part {0:.3e}")]
    InvalidHamiltonian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("positivity loss: {0}")]
    PositivityLoss(String),

    #[error("stiffness failure: step size {step:.3e} underflow at t = {t}")]
    StiffnessFailure { t: f64, step: f64 },

    #[error("trajectory lost: {lost} of {total} trajectories underflowed")]
    TrajectoryLost { lost: usize, total: usize },

    #[error("invalid temperature: beta*hbar*omega = {0}")]
    InvalidTemperature(f64),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("thermal length unresolved: lambda_th = {lambda_th:.4}, dx = {dx:.4}")]
    ThermalLengthUnresolved { lambda_th: f64, dx: f64 },

    #[error("zero momentum transfer singularity")]
    ZeroMomentumTransfer,

    #[error("off-lattice momentum transfer q = {0}")]
    OffLatticeMomentumTransfer(f64),

    #[error("region overflow: {0}")]
    RegionOverflow(String),

    #[error("frame incompleteness: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    FrameIncompleteness { defect: f64, tolerance: f64 },

    #[error("conditioning on null event: probability {0:.3e}")]
    NullEvent(f64),

    #[error("invalid PVM: {0}")]
    InvalidPvm(String),

    #[error("non-PSD decoherence field: smallest eigenvalue {0:.3e}")]
    NonPsdDecoherence(f64),

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
