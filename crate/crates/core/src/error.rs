//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the numeric routines. Numerical red flags
/// (method disagreement, ill-conditioned roots) are distinct variants so
/// callers can map them to dedicated exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("determinant imaginary residual {residual:.3e} exceeds 1e-10; input is not a symmetry-respecting point")]
    NonHermitianDeterminant { residual: f64 },

    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("polarized determinant has nonpositive real part; principal branch undefined")]
    BranchFailure,

    #[error("fiber invariant X = {0} outside [0, 1)")]
    InvalidFiberInvariant(f64),

    #[error("root residual {residual:.3e} above 1e-8: ill-conditioned root cluster")]
    IllConditionedRoots { residual: f64 },

    #[error("zero too close to the integration contour after {0} radius perturbations")]
    RootOnContour(usize),

    #[error("root-count cross-validation failed: companion filter found {filter}, winding oracle found {winding}")]
    MethodDisagreement { filter: usize, winding: usize },

    #[error("root within 1e-9 of |t| = 1: boundary-indeterminate verdict")]
    BoundaryIndeterminate,

    #[error("exponent {got} is not the special value {expected}")]
    NotSpecialExponent { got: f64, expected: f64 },

    #[error("step size underflow at X = {0}")]
    StepUnderflow(f64),

    #[error("nonpositive G' at X = {0}: wrong solution branch")]
    NonMonotoneSolution(f64),

    #[error("nonpositive G at X = {0}")]
    NonPositiveG(f64),

    #[error("X_max must lie in (0, 1 - 1e-4]: got {0}")]
    InvalidXMax(f64),

    #[error("degenerate (non-positive) metric at a sample point")]
    DegenerateMetric,

    #[error("kernel vanishes at the evaluation pair; logarithmic derivative undefined")]
    KernelZero,

    #[error("singular linear system")]
    SingularSystem,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
