//! Tolerance constants used across the crate.
//!
//! Every numeric threshold lives here with its default value, so the
//! acceptance tests and the library agree on a single source of truth.

/// Trailing coefficients below `COEFF_TRIM_REL * max|a_i|` are trimmed;
/// a polynomial trimmed to nothing is the zero polynomial.
pub const COEFF_TRIM_REL: f64 = 1e-14;

/// Complex roots of a real polynomial must pair with a conjugate within
/// this tolerance on the imaginary part.
pub const CONJUGATE_PAIR_TOL: f64 = 1e-12;

/// Imaginary residue allowed (and discarded) when an algebraically real
/// quantity is assembled from complex arithmetic.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Relative residual bound for accepted numeric roots:
/// `|p(r)| <= ROOT_RESIDUAL_REL * max|a_i| * max(1,|r|)^n`.
pub const ROOT_RESIDUAL_REL: f64 = 1e-8;

/// Poles of a partial-fraction expansion must be separated by more than this.
pub const POLE_SEPARATION: f64 = 1e-12;

/// Endpoints that are roots of the queried polynomial are displaced by
/// `ENDPOINT_SHIFT_REL * (u - l)` before Sturm counting.
pub const ENDPOINT_SHIFT_REL: f64 = 1e-12;

/// A density may dip this far (relative to its coefficient scale) below
/// zero and still certify as non-negative; absorbs rounding at tangential
/// roots of squared fits and products.
pub const NONNEG_FLOOR_REL: f64 = 1e-12;

/// Unit-mass tolerance for validated densities.
pub const MASS_TOL: f64 = 1e-10;

/// Default absolute tolerance for adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-9;

/// Tolerance used when deciding the numeric I1/I2 negativity tests.
pub const NEGATIVITY_QUAD_TOL: f64 = 1e-9;

/// Quantile bisection terminates at this interval width.
pub const QUANTILE_WIDTH: f64 = 1e-12;

/// CDF residual accepted from the quantile solver.
pub const QUANTILE_CDF_TOL: f64 = 1e-10;

/// Constrained solvers must satisfy `w'a = 1` to this residual.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// KKT stationarity residual accepted from constrained least squares.
pub const KKT_TOL: f64 = 1e-8;

/// Design matrices with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Strictness margin for the piecewise quadratic programs, scaled by the
/// largest control-point ordinate.
pub const QP_MARGIN_REL: f64 = 1e-6;

/// Mass lost to truncation when integrating transformed densities over
/// semi-infinite or infinite supports.
pub const TRUNCATION_TAIL: f64 = 1e-10;

/// Safety margin added to rejection-sampling envelopes.
pub const ENVELOPE_MARGIN: f64 = 1e-9;
