use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("invalid torus knot T({a},{b}): {reason}")]
    InvalidKnot { a: i64, b: i64, reason: &'static str },
    #[error("integrand does not decay at the truncated ends (|f| = {tail:e} vs peak {peak:e})")]
    NonDecayingIntegrand { tail: f64, peak: f64 },
    #[error("quadrature stalled at relative change {achieved:e} (target {target:e})")]
    ToleranceNotReached { achieved: f64, target: f64 },
    #[error("circle of radius {radius} meets a singularity at distance {distance}")]
    RadiusTooLarge { radius: f64, distance: f64 },
    #[error("evaluation point hits the pole k = {k} of tau")]
    PoleHit { k: i64 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("invalid xi: {0}")]
    InvalidXi(String),
    #[error("normalizing denominator vanishes")]
    DegenerateDenominator,
    #[error("discriminant (m+1/m+1)(m+1/m-3) vanishes")]
    DegenerateDiscriminant,
    #[error("expansion undefined: {0}")]
    CaseUndefined(String),
    #[error("k = {k} is divisible by a or b")]
    InvalidK { k: i64 },
    #[error("(alpha, beta) = ({alpha}, {beta}) is outside 1..a-1 x 1..b-1")]
    InvalidComponent { alpha: i64, beta: i64 },
    #[error("alpha = {alpha} and beta = {beta} have different parity")]
    ParityViolation { alpha: i64, beta: i64 },
    #[error("coordinate shift ({ds}, {dt}) is not a lattice translation")]
    NonIntegerShift { ds: f64, dt: f64 },
    #[error("bundle coordinates do not match the requested (u, v)")]
    CoordinateMismatch,
    #[error("Richardson extrapolation unstable: successive estimates differ by {spread:e}")]
    ExtrapolationUnstable { spread: f64 },
}

impl Error {
    /// Stable snake_case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPrecision(_) => "invalid_precision",
            Error::InvalidKnot { .. } => "invalid_knot",
            Error::NonDecayingIntegrand { .. } => "non_decaying_integrand",
            Error::ToleranceNotReached { .. } => "tolerance_not_reached",
            Error::RadiusTooLarge { .. } => "radius_too_large",
            Error::PoleHit { .. } => "pole_hit",
            Error::ZeroArgument => "zero_argument",
            Error::InvalidXi(_) => "invalid_xi",
            Error::DegenerateDenominator => "degenerate_denominator",
            Error::DegenerateDiscriminant => "degenerate_discriminant",
            Error::CaseUndefined(_) => "case_undefined",
            Error::InvalidK { .. } => "invalid_k",
            Error::InvalidComponent { .. } => "invalid_component",
            Error::ParityViolation { .. } => "parity_violation",
            Error::NonIntegerShift { .. } => "non_integer_shift",
            Error::CoordinateMismatch => "coordinate_mismatch",
            Error::ExtrapolationUnstable { .. } => "extrapolation_unstable",
        }
    }

    /// Errors that reject the caller's input rather than a failed computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidPrecision(_) | Error::InvalidKnot { .. } | Error::InvalidXi(_) | Error::InvalidK { .. }
        )
    }
}
