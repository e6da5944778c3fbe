use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure while turning text into an [`Expr`](crate::Expr).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                Some(*offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// An expression or sampled function was evaluated outside its domain.
    #[error("domain error in `{subterm}` at s = {s}")]
    Domain { subterm: String, s: f64 },

    /// κ(s) ≤ 0 somewhere on the requested interval.
    #[error("Frenet condition violated: kappa = {kappa} at s = {s}{}", usable_hint(.usable))]
    FrenetViolation {
        s: f64,
        kappa: f64,
        usable: Option<(f64, f64)>,
    },

    /// H′ vanishes, so σ is undefined (locally a general helix).
    #[error("sigma is singular at s = {s} (H' = {h_prime})")]
    SingularSigma { s: f64, h_prime: f64 },

    /// τ − τ_G vanishes identically, so the conjugate mate is not a Frenet curve.
    #[error("tau - tau_G vanishes on the whole domain; the conjugate mate is not a Frenet curve")]
    NotAFrenetMate { zeros: Vec<f64> },

    #[error("harmonic curvature vanishes at s = {s}; conjugate harmonic curvature undefined")]
    ZeroHarmonicCurvature { s: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// Estimated curvature collapsed on a run of interior samples.
    #[error("estimated curvature below {threshold} on samples {first}..={last}; not a Frenet curve there")]
    DegenerateCurvature {
        first: usize,
        last: usize,
        threshold: f64,
    },

    #[error("degenerate sphere fit: {0}")]
    DegenerateFit(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn usable_hint(usable: &Option<(f64, f64)>) -> String {
    match usable {
        Some((a, b)) => format!(" (usable domain [{a}, {b}])"),
        None => String::new(),
    }
}
