use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no classical turning points at energy {energy}")]
    NoTurningPoints { energy: f64 },

    #[error("expected {expected} turning points, found {found} at energy {energy}")]
    WrongTopology {
        expected: usize,
        found: usize,
        energy: f64,
    },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("accuracy not reached: best estimate {estimate} with error {error}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("integrand is not finite at {at}")]
    Integrand { at: f64 },

    #[error("momentum squared is negative inside the interval at {at} (classically forbidden)")]
    ClassicallyForbidden { at: f64 },

    #[error("quantization condition violated: action mismatch {mismatch}")]
    QuantizationViolated { mismatch: f64 },

    #[error("coordinate transform: {0}")]
    Transform(String),

    #[error("lambda' = {lambda} exceeds lambda'_max = {lambda_max}: no bound ground state with E < 0")]
    NoBoundGroundState { lambda: f64, lambda_max: f64 },

    #[error("(z, lambda') pair does not satisfy the quantization equation: residual {residual}")]
    InconsistentParameters { residual: f64 },

    #[error("grid too coarse: finite-difference error {estimate} exceeds 10% of signal {signal}")]
    Resolution { estimate: f64, signal: f64 },
}

impl Error {
    /// Stable snake_case identifier, used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NoTurningPoints { .. } => "no_turning_points",
            Error::WrongTopology { .. } => "wrong_topology",
            Error::NoSignChange { .. } => "no_root",
            Error::Accuracy { .. } => "accuracy",
            Error::Integrand { .. } => "integrand",
            Error::ClassicallyForbidden { .. } => "classically_forbidden",
            Error::QuantizationViolated { .. } => "quantization_violated",
            Error::Transform(_) => "transform",
            Error::NoBoundGroundState { .. } => "no_bound_ground_state",
            Error::InconsistentParameters { .. } => "inconsistent_parameters",
            Error::Resolution { .. } => "resolution",
        }
    }

    /// True for failures of numerical accuracy rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. } | Error::QuantizationViolated { .. } | Error::Resolution { .. }
        )
    }
}
