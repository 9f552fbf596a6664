use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("operator is not Hermitian (max |A - A^dagger| = {defect:e}, tolerance {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error(
        "not a density operator (hermiticity defect {hermitian_defect:e}, \
         min eigenvalue {min_eigenvalue:e}, trace defect {trace_defect:e})"
    )]
    NotDensity {
        hermitian_defect: f64,
        min_eigenvalue: f64,
        trace_defect: f64,
    },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})"
    )]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("form is not antisymmetric (max |w + w^T| = {0:e})")]
    NotAntisymmetric(f64),

    #[error("form is singular (smallest/largest singular value = {0:e})")]
    SingularForm(f64),

    #[error("symplectic forms need an even dimension >= 2, got {0}")]
    OddDimension(usize),

    #[error("spanning vectors are linearly dependent (rank {rank}, {count} vectors)")]
    RankDeficient { rank: usize, count: usize },

    #[error(
        "no symplectic partner found at step {step}: max |W(u, w)| = {pairing:e} \
         (form is numerically degenerate)"
    )]
    NoPartner { step: usize, pairing: f64 },

    #[error("{label}: {reason}")]
    Observable { label: String, reason: String },

    #[error(
        "{label}: analytic gradient disagrees with finite differences (relative error {error:e})"
    )]
    GradientMismatch { label: String, error: f64 },

    #[error("separable split does not reproduce H (defect {0:e})")]
    SplitMismatch(f64),

    #[error("Stormer-Verlet requires a separable Hamiltonian H = T(p) + V(q)")]
    MissingSplit,

    #[error("non-finite state at step {0}")]
    NonFiniteState(usize),

    #[error("implicit symplectic Euler fixed point did not contract at step {step} (last update {update:e})")]
    FixedPointStalled { step: usize, update: f64 },

    #[error("trajectory has {0} states, at least 3 are needed")]
    TrajectoryTooShort(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("measure weight at point {index} must be positive and finite, got {weight}")]
    InvalidWeight { index: usize, weight: f64 },

    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown point label {0:?}")]
    UnknownPoint(String),

    #[error(
        "polygon frames need N >= 3, got N = {0}: for N = 2 the vectors |0> and |pi> coincide up to \
         sign and (2/2)(P_0 + P_pi) = 2|0><0|, which misses the identity by 1"
    )]
    PolygonTooSmall(usize),

    #[error("function family is not orthonormal in L2(X, nu) (max |G - I| = {0:e})")]
    NotOrthonormal(f64),

    #[error("frame operator {index} is not a density operator ({detail})")]
    FrameNotDensity { index: usize, detail: String },

    #[error("operation needs a density frame (positive, unit-trace operators)")]
    NotDensityFrame,

    #[error("frame does not resolve the identity (residual {residual:e} > {limit:e})")]
    ResolutionResidual { residual: f64, limit: f64 },

    #[error("operator is not Hermitian; complex spectra are not supported")]
    NonHermitianSpectrum,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("state touches the Dirichlet boundary (|psi| = {0:e} within the outer two cells)")]
    BoundaryContact(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
