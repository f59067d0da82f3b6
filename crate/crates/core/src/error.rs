use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integration failed at s = {s}: field produced a non-finite value")]
    Integration { s: f64 },

    #[error("frame drift {drift:.3e} at s = {s} exceeds the re-orthonormalization limit; use a smaller step")]
    StepSize { s: f64, drift: f64 },

    #[error("range [{a}, {b}] outside sampled span [{lo}, {hi}]")]
    Domain { a: f64, b: f64, lo: f64, hi: f64 },

    #[error("bracket [{a}, {b}] does not straddle a root (g(a) = {ga}, g(b) = {gb})")]
    Bracket { a: f64, b: f64, ga: f64, gb: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("invalid curvature profile: {0}")]
    Profile(String),

    #[error("jump angle {0} outside [0, pi]")]
    Angle(f64),

    #[error("expected a unit vector, got norm {0}")]
    Normalization(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("projection undefined at s = {s}: <c(s), u> = {dot} is below epsilon_min = {epsilon_min}")]
    Projection { s: f64, dot: f64, epsilon_min: f64 },

    #[error("sample grids are not aligned: {0}")]
    Alignment(String),

    #[error("degenerate speed |P'| = {speed:.3e} at s = {s}")]
    DegenerateSpeed { s: f64, speed: f64 },

    #[error("degenerate triangle: chord {chord} outside [{lo}, {hi}]")]
    DegenerateTriangle { chord: f64, lo: f64, hi: f64 },

    #[error("causal type error: {0}")]
    Causal(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// Errors caused by bad inputs rather than by the numerical pipeline itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Profile(_)
                | Error::Angle(_)
                | Error::Normalization(_)
                | Error::Precondition(_)
                | Error::Alignment(_)
                | Error::Causal(_)
                | Error::Dimension(_)
                | Error::Domain { .. }
        )
    }
}
