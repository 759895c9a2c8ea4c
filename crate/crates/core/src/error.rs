use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system {family}{rank}")]
    UnsupportedRootSystem { family: char, rank: usize },

    #[error("weight is not dominant: coefficient {index} is {value}")]
    NotDominant { index: usize, value: String },

    #[error("malformed weight: {0}")]
    MalformedWeight(String),

    #[error("weight must be given in the {expected} basis")]
    WrongBasis { expected: &'static str },

    #[error("label {label:?} has no calibrated bundle convention: {reason}")]
    Uncalibrated { label: Vec<i64>, reason: String },

    #[error("size guard exceeded: {what} (limit {limit})")]
    SizeGuard { what: String, limit: usize },

    #[error("form degree {k} out of range 0..={n}")]
    DegreeOutOfRange { k: usize, n: usize },

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("point too close to the boundary of the Klein ball (|x| = {radius})")]
    NearBoundary { radius: f64 },

    #[error("curve leaves the Klein chart")]
    ChartExit,

    #[error(
        "integration step too large: estimated error {estimate:e} exceeds tolerance {tolerance:e}; \
         refine the step"
    )]
    StepTooLarge { estimate: f64, tolerance: f64 },

    #[error("finite-difference stencil does not fit inside the chart: {0}")]
    StencilUnderflow(String),

    #[error("matrix is not in SO(n,1): form residual {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("degenerate hypersurface: {0}")]
    DegenerateHypersurface(String),

    #[error(
        "numerical rank is ambiguous: singular-value gap {gap:e} is below {required:e}; \
         review tolerances"
    )]
    RankAmbiguous { gap: f64, required: f64 },

    #[error("near-tangential crossing (angle {angle:e}); perturb the base point")]
    TangentialCrossing { angle: f64 },

    #[error("axis geodesic is not simple: {0}")]
    NonSimpleAxis(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by the caller's input rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::MalformedWeight(_)
                | Error::WrongBasis { .. }
                | Error::NotDominant { .. }
                | Error::UnsupportedFamily(_)
                | Error::UnsupportedRootSystem { .. }
                | Error::Uncalibrated { .. }
                | Error::DegreeOutOfRange { .. }
                | Error::DegenerateHypersurface(_)
                | Error::SizeGuard { .. }
                | Error::NearBoundary { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
