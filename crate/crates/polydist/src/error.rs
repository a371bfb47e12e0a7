//! Crate-wide error type.

use num_complex::Complex64;

use crate::nonneg::NonNegativityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid interval: need finite lower < upper, got ({lower}, {upper})")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("closed-form roots cover degrees 1..=3, got degree {degree}")]
    UnsupportedDegree { degree: usize },

    #[error("root iteration did not converge after {iterations} sweeps")]
    RootsDidNotConverge {
        iterations: usize,
        best: Vec<Complex64>,
    },

    #[error("complex roots are not conjugate-paired (worst mismatch {mismatch:e})")]
    NotConjugatePaired { mismatch: f64 },

    #[error("expanded coefficients carry imaginary residue {residue:e} above tolerance")]
    NonRealCoefficients { residue: f64 },

    #[error("partial fractions need deg(numerator) < deg(denominator): {numer} >= {denom}")]
    ImproperRational { numer: usize, denom: usize },

    #[error("poles {first} and {second} coincide within tolerance")]
    RepeatedPole { first: Complex64, second: Complex64 },

    #[error("real pole at {pole} lies inside the integration interval")]
    PoleInsideSupport { pole: f64 },

    #[error("polynomial takes negative values on the support")]
    Negative { report: NonNegativityReport },

    #[error("density mass is not positive")]
    DegenerateMass,

    #[error("mass differs from one by {deviation:e}")]
    MassNotUnit { deviation: f64 },

    #[error("x = {x} lies outside the support ({lower}, {upper})")]
    OutsideSupport { x: f64, lower: f64, upper: f64 },

    #[error("supports differ: ({0}, {1}) vs ({2}, {3})", .left.0, .left.1, .right.0, .right.1)]
    SupportMismatch { left: (f64, f64), right: (f64, f64) },

    #[error("{name} = {value} is outside its domain ({expected})")]
    ArgumentDomain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("leading coefficient must be positive for root classification, got {leading}")]
    NonPositiveLeading { leading: f64 },

    #[error("design matrix is ill-conditioned (cond ~ {cond:.3e}); lower the degree or remap the support to (-1, 1)")]
    IllConditioned { cond: f64 },

    #[error("mixture weights must be non-negative and sum to one (sum = {sum})")]
    BadWeights { sum: f64 },

    #[error("duplicate abscissa x = {x}")]
    DuplicateAbscissa { x: f64 },

    #[error("smoothness order C = {order} needs degree n >= {needed}, got n = {degree}")]
    InfeasibleOrder {
        order: usize,
        degree: usize,
        needed: usize,
    },

    #[error("{what} residual {residual:e} exceeds tolerance")]
    PostconditionFailed { what: &'static str, residual: f64 },

    #[error("quadratic program infeasible after {iterations} active-set iterations ({violated} constraints violated)")]
    Infeasible { iterations: usize, violated: usize },

    #[error("control points must alternate min/max labels starting consistently")]
    LabelsNotAlternating,

    #[error("rejection envelope underestimates the target at x = {witness} (target {target:e} > envelope {envelope:e})")]
    EnvelopeViolation {
        witness: f64,
        target: f64,
        envelope: f64,
    },

    #[error("Fisher information matrix is singular or indefinite")]
    BoundUnavailable,

    #[error("estimator degenerated: {detail}")]
    DegenerateEstimate { detail: String },

    #[error("file format: {detail}")]
    Format { detail: String },
}

impl Error {
    /// Stable machine-readable discriminator, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInterval { .. } => "invalid-interval",
            Error::UnsupportedDegree { .. } => "unsupported-degree",
            Error::RootsDidNotConverge { .. } => "root-convergence",
            Error::NotConjugatePaired { .. } => "conjugate-pairing",
            Error::NonRealCoefficients { .. } => "non-real-coefficients",
            Error::ImproperRational { .. } => "improper-rational",
            Error::RepeatedPole { .. } => "repeated-pole",
            Error::PoleInsideSupport { .. } => "pole-inside-support",
            Error::Negative { .. } => "negativity",
            Error::DegenerateMass => "mass",
            Error::MassNotUnit { .. } => "mass",
            Error::OutsideSupport { .. } => "outside-support",
            Error::SupportMismatch { .. } => "support-mismatch",
            Error::ArgumentDomain { .. } => "argument-domain",
            Error::NonPositiveLeading { .. } => "non-positive-leading",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::BadWeights { .. } => "weights",
            Error::DuplicateAbscissa { .. } => "duplicate-abscissa",
            Error::InfeasibleOrder { .. } => "infeasibility",
            Error::Infeasible { .. } => "infeasibility",
            Error::PostconditionFailed { .. } => "infeasibility",
            Error::LabelsNotAlternating => "labels",
            Error::EnvelopeViolation { .. } => "envelope",
            Error::BoundUnavailable => "bound-unavailable",
            Error::DegenerateEstimate { .. } => "degenerate-estimate",
            Error::Format { .. } => "format",
        }
    }

    /// A representative x-location attached to the error, when one exists.
    pub fn witness(&self) -> Option<f64> {
        match self {
            Error::Negative { report } => report.witnesses.first().copied(),
            Error::PoleInsideSupport { pole } => Some(*pole),
            Error::OutsideSupport { x, .. } => Some(*x),
            Error::EnvelopeViolation { witness, .. } => Some(*witness),
            Error::DuplicateAbscissa { x } => Some(*x),
            _ => None,
        }
    }
}
