//! Fitting polynomial densities to histograms and sampled known densities.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg;
use crate::nonneg::{self, Verdict};
use crate::pdf::{self, PolynomialPdf};
use crate::poly::Polynomial;
use crate::quadrature;
use crate::tol;

/// Histogram-style data: strictly increasing abscissae with non-negative
/// ordinates; the bin width is implied by the (uniform) spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    points: Vec<(f64, f64)>,
}

impl Histogram {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::ArgumentDomain {
                name: "points",
                value: points.len() as f64,
                expected: ">= 2 rows",
            });
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::DuplicateAbscissa { x: w[1].0 });
            }
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() || y < 0.0 {
                return Err(Error::ArgumentDomain {
                    name: "y",
                    value: y,
                    expected: "finite and >= 0",
                });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean bin width `Δx`.
    pub fn bin_width(&self) -> f64 {
        let n = self.points.len() - 1;
        (self.points[n].0 - self.points[0].0) / n as f64
    }

    /// Rescales the ordinates so that `Δx Σ y_i = 1`.
    pub fn normalized(&self) -> Result<Histogram> {
        let total: f64 = self.points.iter().map(|p| p.1).sum();
        let mass = total * self.bin_width();
        if mass <= 0.0 {
            return Err(Error::DegenerateMass);
        }
        Ok(Histogram {
            points: self.points.iter().map(|&(x, y)| (x, y / mass)).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// Least squares with the unit-mass equality constraint.
    ConstrainedLs,
    /// Lagrange interpolation of `√y`, squared and renormalized.
    LagrangeSqrt,
    /// Unconstrained least squares on `√y`, squared and renormalized.
    SquaredLs,
}

#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    pub degree: usize,
    pub support: Interval,
    pub method: FitMethod,
    pub repair: bool,
}

/// Default sample count for fitting a known density of the given degree.
pub fn default_sample_count(degree: usize) -> usize {
    8 * (degree + 1)
}

/// Constrained least squares: minimizes `Σ (y_i - p(x_i))^2` over degree-n
/// polynomials subject to unit mass on the support, `w' a = 1` with
/// `w_i = (u^{i+1} - l^{i+1})/(i+1)`.
///
/// The solve runs on the support remapped to (-1, 1) where the design
/// matrix is far better conditioned, and the coefficients are mapped back.
pub fn constrained_ls_fit(h: &Histogram, cfg: &FitConfig) -> Result<Polynomial> {
    let n = cfg.degree;
    let m = h.len();
    if m < n + 1 {
        return Err(Error::ArgumentDomain {
            name: "points",
            value: m as f64,
            expected: "at least degree + 1 rows",
        });
    }
    let unit = Interval::new(-1.0, 1.0).unwrap();
    let (alpha, beta) = cfg.support.affine_to(&unit);

    // density data transported to t-space: q(t) = p(x)/alpha
    let design = DMatrix::from_fn(m, n + 1, |r, c| {
        let t = alpha * h.points[r].0 + beta;
        t.powi(c as i32)
    });
    let rhs = DVector::from_iterator(m, h.points.iter().map(|p| p.1 / alpha));
    let w_t = mass_weights(n, &unit);

    let solution = linalg::constrained_least_squares(&design, &rhs, &w_t)?;

    let q = Polynomial::new(solution.coeffs.iter().copied().collect());
    let p = q.compose_affine(alpha, beta).scale(alpha);

    // exact renormalization absorbs the mapping's rounding
    let w_x = mass_weights(n, &cfg.support);
    let wa: f64 = (0..=n).map(|i| w_x[i] * p.coeff(i)).sum();
    if wa.abs() < 1e-14 {
        return Err(Error::DegenerateMass);
    }
    let p = p.scale(1.0 / wa);

    debug_assert!(solution.lambda.is_finite());
    let residual = kkt_residual_original(h, &p, &w_x).max(solution.kkt_residual);
    if residual > tol::KKT_TOL {
        return Err(Error::PostconditionFailed {
            what: "KKT stationarity",
            residual,
        });
    }
    Ok(p)
}

/// Mass weights of the constraint `∫_l^u p = w' a`.
pub fn mass_weights(degree: usize, iv: &Interval) -> DVector<f64> {
    DVector::from_iterator(
        degree + 1,
        (0..=degree).map(|i| {
            let e = i as f64 + 1.0;
            (iv.upper().powi(i as i32 + 1) - iv.lower().powi(i as i32 + 1)) / e
        }),
    )
}

/// Stationarity residual of the original-variable KKT system, with the
/// multiplier eliminated through the constraint.
fn kkt_residual_original(h: &Histogram, p: &Polynomial, w: &DVector<f64>) -> f64 {
    let n = w.len() - 1;
    let m = h.len();
    let design = DMatrix::from_fn(m, n + 1, |r, c| h.points[r].0.powi(c as i32));
    let rhs = DVector::from_iterator(m, h.points.iter().map(|q| q.1));
    let a = DVector::from_iterator(n + 1, (0..=n).map(|i| p.coeff(i)));
    let gradient = design.transpose() * (&design * &a - &rhs) * 2.0;
    let lambda = -w.dot(&gradient) / w.dot(w);
    let scale = 1.0f64.max((design.transpose() * &rhs).norm() * 2.0);
    (&gradient + w * lambda).norm() / scale
}

/// Lagrange basis polynomial `ℓ_i` over the histogram abscissae.
fn lagrange_basis(xs: &[f64], i: usize) -> Polynomial {
    let mut p = Polynomial::constant(1.0);
    for (j, &xj) in xs.iter().enumerate() {
        if j != i {
            let denom = xs[i] - xj;
            p = &p * &Polynomial::new(vec![-xj / denom, 1.0 / denom]);
        }
    }
    p
}

/// Interpolates `(x_i, √y_i)` with Lagrange polynomials, squares the
/// interpolant (degree `2(M-1)`, non-negative by construction) and
/// normalizes with the Gram integrals `s_ij = ∫ ℓ_i ℓ_j`.
pub fn lagrange_sqrt_fit(h: &Histogram, support: &Interval) -> Result<Polynomial> {
    let xs: Vec<f64> = h.points.iter().map(|p| p.0).collect();
    let sqrt_y: Vec<f64> = h.points.iter().map(|p| p.1.sqrt()).collect();

    let bases: Vec<Polynomial> = (0..xs.len()).map(|i| lagrange_basis(&xs, i)).collect();

    let mut area = 0.0;
    for (i, bi) in bases.iter().enumerate() {
        for (j, bj) in bases.iter().enumerate() {
            let s_ij = (bi * bj).definite_integral(support);
            area += sqrt_y[i] * sqrt_y[j] * s_ij;
        }
    }
    // the squared interpolant has degree 2(M-1); past a dozen points its
    // coefficients overwhelm f64 and the Gram area degenerates
    if !area.is_finite() {
        return Err(Error::IllConditioned { cond: f64::INFINITY });
    }
    if area <= 0.0 {
        return Err(Error::DegenerateMass);
    }

    let mut interpolant = Polynomial::zero();
    for (b, &s) in bases.iter().zip(&sqrt_y) {
        interpolant = &interpolant + &b.scale(s);
    }
    Ok((&interpolant * &interpolant).scale(1.0 / area))
}

/// Unconstrained least squares on `√y`, squared and renormalized to unit
/// area: a degree-2n density that is non-negative for any data.
pub fn squared_ls_fit(h: &Histogram, degree: usize, support: &Interval) -> Result<Polynomial> {
    let m = h.len();
    if m < degree + 1 {
        return Err(Error::ArgumentDomain {
            name: "points",
            value: m as f64,
            expected: "at least degree + 1 rows",
        });
    }
    let unit = Interval::new(-1.0, 1.0).unwrap();
    let (alpha, beta) = support.affine_to(&unit);
    let design = DMatrix::from_fn(m, degree + 1, |r, c| {
        let t = alpha * h.points[r].0 + beta;
        t.powi(c as i32)
    });
    let rhs = DVector::from_iterator(m, h.points.iter().map(|p| (p.1 / alpha).sqrt()));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cond = smax / svd.singular_values.min();
    if !cond.is_finite() || cond > tol::MAX_CONDITION {
        return Err(Error::IllConditioned { cond });
    }
    let sol = svd
        .solve(&rhs, smax * 1e-14)
        .map_err(|_| Error::IllConditioned { cond })?;
    let q = Polynomial::new(sol.iter().copied().collect());
    let sqrt_p = q.compose_affine(alpha, beta).scale(alpha.sqrt());
    let squared = &sqrt_p * &sqrt_p;
    let mass = squared.definite_integral(support);
    if mass <= 0.0 {
        return Err(Error::DegenerateMass);
    }
    Ok(squared.scale(1.0 / mass))
}

/// The shift-and-rescale repair `(p + d/Δx) / (1 + d M)`, which preserves
/// unit area when the support spans exactly `M` bins.
pub fn negativity_repair(p: &Polynomial, h: &Histogram, d: f64) -> Result<Polynomial> {
    if !(d > 0.0) {
        return Err(Error::ArgumentDomain {
            name: "d",
            value: d,
            expected: "> 0",
        });
    }
    let m = h.len() as f64;
    let shifted = p + &Polynomial::constant(d / h.bin_width());
    Ok(shifted.scale(1.0 / (1.0 + d * m)))
}

/// The smallest `d` for which the repaired polynomial is non-negative on the
/// support. The repair is a positive affine map of `p`, so its minimizer is
/// that of `p` and the exact answer is `d = -min(p) * Δx` when `min(p) < 0`.
pub fn minimal_repair_shift(p: &Polynomial, h: &Histogram, support: &Interval) -> f64 {
    let min_value = polynomial_min(p, support);
    if min_value >= 0.0 {
        0.0
    } else {
        -min_value * h.bin_width()
    }
}

pub(crate) fn polynomial_min(p: &Polynomial, iv: &Interval) -> f64 {
    let mut min_value = p.eval(iv.lower()).min(p.eval(iv.upper()));
    for e in pdf::extrema_of(p, iv) {
        if !e.boundary {
            min_value = min_value.min(p.eval(e.x));
        }
    }
    min_value
}

/// Outcome of approximating a known density by a fitted polynomial pdf.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub pdf: PolynomialPdf,
    /// `∫ (f - p)^2` over the support.
    pub l2_error: f64,
}

/// Samples the density on a uniform bin-center grid, runs the constrained
/// fit, optionally repairs negativity with the smallest shift, and returns
/// the validated density with its L2 error.
pub fn approx_known_pdf<F: Fn(f64) -> f64>(
    f: F,
    support: &Interval,
    degree: usize,
    sample_count: usize,
    repair: bool,
) -> Result<FitOutcome> {
    let m = sample_count.max(degree + 1);
    let dx = support.width() / m as f64;
    let mut points = Vec::with_capacity(m);
    for i in 0..m {
        let x = support.lower() + dx * (i as f64 + 0.5);
        let y = f(x);
        if !y.is_finite() || y < 0.0 {
            return Err(Error::ArgumentDomain {
                name: "f",
                value: y,
                expected: "finite and >= 0 on the support",
            });
        }
        points.push((x, y));
    }
    let h = Histogram::new(points)?;
    let cfg = FitConfig {
        degree,
        support: *support,
        method: FitMethod::ConstrainedLs,
        repair,
    };
    let mut p = constrained_ls_fit(&h, &cfg)?;

    let report = nonneg::certify_nonneg_sturm(&p, support);
    if report.verdict != Verdict::NonNegative {
        if !repair {
            return Err(Error::Negative { report });
        }
        let d = minimal_repair_shift(&p, &h, support);
        // nudge past the exact boundary so the certificate is strict
        p = negativity_repair(&p, &h, d + 1e-12 * (1.0 + d))?;
    }

    let pdf = PolynomialPdf::new(p, *support)?;
    let l2 = quadrature::integrate(
        |x| {
            let d = f(x) - pdf.poly().eval(x);
            d * d
        },
        support.lower(),
        support.upper(),
        1e-10,
    )
    .value;
    Ok(FitOutcome { pdf, l2_error: l2 })
}

/// Method dispatch used by the front ends.
pub fn fit_histogram(h: &Histogram, cfg: &FitConfig) -> Result<Polynomial> {
    let fitted = match cfg.method {
        FitMethod::ConstrainedLs => constrained_ls_fit(h, cfg),
        FitMethod::LagrangeSqrt => lagrange_sqrt_fit(h, &cfg.support),
        FitMethod::SquaredLs => squared_ls_fit(h, cfg.degree, &cfg.support),
    }?;
    if cfg.repair {
        let report = nonneg::certify_nonneg_sturm(&fitted, &cfg.support);
        if report.verdict != Verdict::NonNegative {
            let d = minimal_repair_shift(&fitted, h, &cfg.support);
            return negativity_repair(&fitted, h, d + 1e-12 * (1.0 + d));
        }
    }
    Ok(fitted)
}
