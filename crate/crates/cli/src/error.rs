use qkit_core::Error as CoreError;
use thiserror::Error;

/// Everything a run can fail with. Each variant maps to a stable
/// `error.kind` string and a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Parse(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Parse(_) => "parse_error",
            Self::Schema { .. } => "schema_error",
            Self::Input(_) => "invalid_input",
            Self::Io(_) => "io_error",
            Self::Core(e) if is_numerical(e) => "numerical_failure",
            Self::Core(_) => "invalid_input",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) if is_numerical(e) => 1,
            _ => 2,
        }
    }

    /// Library error name, `snake_case`, for core failures.
    pub fn code(&self) -> Option<&'static str> {
        match self {
            Self::Core(e) => Some(core_code(e)),
            _ => None,
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Schema { path, .. } => Some(path),
            _ => None,
        }
    }
}

/// Failures of a numerical precondition or of an algorithm on valid input.
fn is_numerical(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::NoConvergence { .. }
            | CoreError::NoPartner { .. }
            | CoreError::NonFiniteState(_)
            | CoreError::FixedPointStalled { .. }
            | CoreError::ResolutionResidual { .. }
            | CoreError::NotOrthonormal(_)
            | CoreError::FrameNotDensity { .. }
            | CoreError::NotDensity { .. }
            | CoreError::NonHermitianSpectrum
            | CoreError::GradientMismatch { .. }
            | CoreError::SplitMismatch(_)
            | CoreError::SingularForm(_)
    )
}

fn core_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::DimensionMismatch { .. } => "dimension_mismatch",
        CoreError::Empty(_) => "empty",
        CoreError::NotSquare { .. } => "not_square",
        CoreError::NotHermitian { .. } => "not_hermitian",
        CoreError::NotDensity { .. } => "not_density",
        CoreError::NoConvergence { .. } => "no_convergence",
        CoreError::NotAntisymmetric(_) => "not_antisymmetric",
        CoreError::SingularForm(_) => "singular_form",
        CoreError::OddDimension(_) => "odd_dimension",
        CoreError::RankDeficient { .. } => "rank_deficient",
        CoreError::NoPartner { .. } => "no_partner",
        CoreError::Observable { .. } => "observable",
        CoreError::GradientMismatch { .. } => "gradient_mismatch",
        CoreError::SplitMismatch(_) => "split_mismatch",
        CoreError::MissingSplit => "missing_split",
        CoreError::NonFiniteState(_) => "non_finite_state",
        CoreError::FixedPointStalled { .. } => "fixed_point_stalled",
        CoreError::TrajectoryTooShort(_) => "trajectory_too_short",
        CoreError::InvalidArgument(_) => "invalid_argument",
        CoreError::InvalidWeight { .. } => "invalid_weight",
        CoreError::DuplicateLabel(_) => "duplicate_label",
        CoreError::UnknownPoint(_) => "unknown_point",
        CoreError::PolygonTooSmall(_) => "polygon_too_small",
        CoreError::NotOrthonormal(_) => "not_orthonormal",
        CoreError::FrameNotDensity { .. } => "frame_not_density",
        CoreError::NotDensityFrame => "not_density_frame",
        CoreError::ResolutionResidual { .. } => "resolution_residual",
        CoreError::NonHermitianSpectrum => "non_hermitian_spectrum",
        CoreError::InvalidGrid(_) => "invalid_grid",
        CoreError::BoundaryContact(_) => "boundary_contact",
        CoreError::NotNormalized(_) => "not_normalized",
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
