use thiserror::Error;

#[derive(Debug, Error)]
pub enum MajoranaError {
    #[error("matrix is not an element of the Γ basis (closest Frobenius distance {0:.3e})")]
    NotInGamma(f64),
    #[error("generators violate the Clifford relation (max defect {0:.3e})")]
    NotClifford(f64),
    #[error("every seed matrix produced a singular intertwiner")]
    SingularIntertwiner,
    #[error("matrix is not a member of Pin(3,1): {0}")]
    NotPinMember(String),
    #[error("expansion residual {0:.3e} exceeds tolerance; S is not in Pin(3,1)")]
    LambdaResidual(f64),
    #[error("degenerate kernel: massless zero-momentum mode")]
    DegenerateKernel,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad file format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MajoranaError>;
