use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("insufficient jet order: need {required}, have {available}")]
    InsufficientOrder { required: usize, available: usize },
    #[error("multi-index of degree {degree} exceeds jet order {order}")]
    DegreeExceedsOrder { degree: usize, order: usize },
    #[error("axis {axis} out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("logarithm of non-positive constant term {re} + {im}i")]
    LogOfNonpositive { re: f64, im: f64 },
    #[error("division by a jet with zero constant term")]
    DivisionByZeroConstantTerm,

    #[error("singular matrix (|det| = {det_abs:e}, threshold {threshold:e})")]
    SingularMatrix { det_abs: f64, threshold: f64 },
    #[error("matrix is not Hermitian (asymmetry residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("potential value {value} is not negative")]
    NonNegativePotentialValue { value: f64 },
    #[error("value {value} is not positive")]
    NonpositiveValue { value: f64 },
    #[error("Fefferman functional J = {value} is not positive")]
    NonpositiveJ { value: f64 },
    #[error("J(-phi) = {value} is not positive at the evaluation point (outside U_0)")]
    JNotPositive { value: f64 },
    #[error("zero vector")]
    ZeroVector,

    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain file: {0}")]
    SpecFile(String),
    #[error("boundary projection did not converge after {steps} steps (|phi| = {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },
    #[error("degenerate gradient |grad phi| = {norm:e} at boundary point")]
    DegenerateGradient { norm: f64 },
    #[error("point is not on the boundary (|phi| = {value:e})")]
    NotOnBoundary { value: f64 },
    #[error("ray point at depth {t:e} is not interior (phi = {value:e})")]
    RayLeavesDomain { t: f64, value: f64 },

    #[error("too few points for a fit: {0}")]
    TooFewPoints(usize),
}
