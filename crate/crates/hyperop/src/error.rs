use thiserror::Error;

/// Errors raised by the numerical kernel.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("algebra tag mismatch: {0} vs {1}")]
    AlgebraMismatch(&'static str, &'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polar form of zero is undefined")]
    ZeroPolar,
    #[error("dependent input: vector {index} lies in the span of its predecessors")]
    DependentInput { index: usize },
    #[error("degenerate distance: the vector lies in the subspace")]
    DegenerateDistance,
    #[error("operator is not selfadjoint")]
    NotSelfadjoint,
    #[error("operator is not right-linear")]
    NotRightLinear,
    #[error("operator is not positive: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("point lies in the spectrum: smallest singular value {sigma_min:.3e}")]
    SpectrumPoint { sigma_min: f64 },
    #[error("Neumann series divergence risk: contraction factor {factor:.3e} >= 1")]
    ContractionViolated { factor: f64 },
    #[error("operation unsupported for this algebra")]
    UnsupportedAlgebra,
    #[error("contour node at index {node} lies on the spectrum")]
    ContourPlacement { node: usize },
    #[error("spectrum is not enclosed by the contour")]
    ContourEnclosure,
    #[error("scalar is not a unit imaginary direction")]
    NotUnitImaginary,
    #[error("norm bound exceeded: {norm:.6} > {bound:.6}")]
    NormBound { norm: f64, bound: f64 },
    #[error("algebra closure dimension {dim} exceeds cap {cap}")]
    ClosureCap { dim: usize, cap: usize },
    #[error("Gram form has a negative direction: {value:.3e}")]
    SignedGram { value: f64 },
    #[error("state does not match the representation: residual {residual:.3e}")]
    StateMismatch { residual: f64 },
    #[error("projection family is not pairwise orthogonal")]
    NonOrthogonalFamily,
    #[error("input family is not orthonormal")]
    NotOrthonormal,
    #[error("absolute continuity violated at point {point}")]
    AbsoluteContinuity { point: usize },
    #[error("function undefined at spectrum point {value}")]
    FunctionUndefined { value: f64 },
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
