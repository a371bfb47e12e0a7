//! Validated polynomial probability densities on finite support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::nonneg::{self, Verdict};
use crate::piecewise::PiecewisePdf;
use crate::poly::Polynomial;
use crate::quadrature;
use crate::roots;
use crate::tol;

/// How the non-negativity of a density was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// Exact Sturm-based certification.
    CertifiedNonNegative,
    /// Structural: root classification or an explicit square.
    CertifiedByRoots,
    /// Only numeric evidence.
    NumericOnly,
}

impl Certificate {
    fn weakest(a: Certificate, b: Certificate) -> Certificate {
        use Certificate::*;
        match (a, b) {
            (NumericOnly, _) | (_, NumericOnly) => NumericOnly,
            (CertifiedByRoots, _) | (_, CertifiedByRoots) => CertifiedByRoots,
            _ => CertifiedNonNegative,
        }
    }
}

/// Anything that behaves as a univariate density on a finite interval.
pub trait Density {
    fn support(&self) -> Interval;
    /// Density value; zero outside the support.
    fn density(&self, x: f64) -> f64;
    /// CDF extended to the whole line: 0 below the support, 1 above.
    fn cumulative(&self, x: f64) -> f64;
}

/// A polynomial density: non-negative on its finite support with unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPdf {
    poly: Polynomial,
    support: Interval,
    certificate: Certificate,
}

impl PolynomialPdf {
    /// Certifies `p >= 0` on the interval and normalizes it to unit mass.
    pub fn new(p: Polynomial, support: Interval) -> Result<Self> {
        let report = nonneg::certify_nonneg_sturm(&p, &support);
        if report.verdict != Verdict::NonNegative {
            return Err(Error::Negative { report });
        }
        let mass = p.definite_integral(&support);
        if !(mass > tol::COEFF_TRIM_REL * p.sup_bound(&support) * support.width()) {
            return Err(Error::DegenerateMass);
        }
        Ok(Self {
            poly: p.scale(1.0 / mass),
            support,
            certificate: Certificate::CertifiedNonNegative,
        })
    }

    /// The uniform density on the interval.
    pub fn uniform(support: Interval) -> Self {
        Self {
            poly: Polynomial::constant(1.0 / support.width()),
            support,
            certificate: Certificate::CertifiedNonNegative,
        }
    }

    /// Validates an already-normalized density, e.g. read from a file:
    /// non-negativity is re-certified and the mass must be within
    /// `MASS_TOL` of one.
    pub fn from_validated_parts(p: Polynomial, support: Interval) -> Result<Self> {
        let report = nonneg::certify_nonneg_sturm(&p, &support);
        if report.verdict != Verdict::NonNegative {
            return Err(Error::Negative { report });
        }
        let mass = p.definite_integral(&support);
        let deviation = (mass - 1.0).abs();
        if deviation > tol::MASS_TOL {
            return Err(Error::MassNotUnit { deviation });
        }
        Ok(Self {
            poly: p,
            support,
            certificate: Certificate::CertifiedNonNegative,
        })
    }

    /// For constructions that preserve validity exactly (affine remaps,
    /// mixtures of validated densities).
    pub(crate) fn from_parts_unchecked(
        poly: Polynomial,
        support: Interval,
        certificate: Certificate,
    ) -> Self {
        Self { poly, support, certificate }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn mass(&self) -> f64 {
        self.poly.definite_integral(&self.support)
    }

    /// CDF at `x`; errors outside the closed support.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !self.support.contains(x) {
            return Err(Error::OutsideSupport {
                x,
                lower: self.support.lower(),
                upper: self.support.upper(),
            });
        }
        Ok(self.cdf_clamped(x))
    }

    fn cdf_clamped(&self, x: f64) -> f64 {
        let anti = self.poly.antiderivative(1);
        let v = anti.eval(x) - anti.eval(self.support.lower());
        v.clamp(0.0, 1.0)
    }

    /// Quantile: the leftmost `x` with `cdf(x) = q`, by bisection on the
    /// monotone CDF followed by one Newton polish.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ArgumentDomain {
                name: "q",
                value: q,
                expected: "0 < q < 1",
            });
        }
        let (mut lo, mut hi) = (self.support.lower(), self.support.upper());
        let width_goal = tol::QUANTILE_WIDTH * self.support.width();
        while hi - lo > width_goal {
            let mid = 0.5 * (lo + hi);
            if self.cdf_clamped(mid) >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = hi;
        let slope = self.poly.eval(x);
        if slope > 1e-12 {
            let polished = x - (self.cdf_clamped(x) - q) / slope;
            if polished >= lo && polished <= self.support.upper() {
                let better = (self.cdf_clamped(polished) - q).abs()
                    <= (self.cdf_clamped(x) - q).abs();
                if better {
                    x = polished;
                }
            }
        }
        Ok(x)
    }

    /// k-th raw moment `E[X^k]`.
    pub fn moment(&self, k: usize) -> f64 {
        self.poly.moment_integral(k, &self.support)
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.moment(1);
        self.moment(2) - m1 * m1
    }

    /// Differential entropy `-∫ p log p` by adaptive quadrature; the
    /// integrand is taken as zero wherever `p` underflows.
    pub fn entropy(&self) -> f64 {
        quadrature::integrate(
            |x| {
                let v = self.poly.eval(x);
                if v <= 1e-300 {
                    0.0
                } else {
                    -v * v.ln()
                }
            },
            self.support.lower(),
            self.support.upper(),
            1e-8,
        )
        .value
    }

    /// `KL(self ‖ other) = ∫ p log(p/q)`. Supports must agree; a root of
    /// `q` interior to the support where `p` is positive makes the
    /// divergence infinite and is reported as `f64::INFINITY`.
    pub fn kl_divergence(&self, other: &PolynomialPdf) -> Result<f64> {
        same_support(&self.support, &other.support)?;
        let p_scale = 1.0f64.max(self.poly.sup_bound(&self.support));
        if let Ok(qroots) = roots::real_roots_in(
            other.poly(),
            self.support.lower(),
            self.support.upper(),
        ) {
            for r in qroots {
                if self.poly.eval(r) > 1e-9 * p_scale {
                    return Ok(f64::INFINITY);
                }
            }
        }
        let v = quadrature::integrate(
            |x| {
                let p = self.poly.eval(x);
                if p <= 1e-300 {
                    return 0.0;
                }
                let q = other.poly.eval(x).max(1e-300);
                p * (p / q).ln()
            },
            self.support.lower(),
            self.support.upper(),
            tol::QUAD_TOL,
        )
        .value;
        Ok(v)
    }

    /// Density of the sum of two independent variables with this and the
    /// other density, both on the same `(l, u)`: two polynomial pieces on
    /// `(2l, l+u)` and `(l+u, 2u)` from the overlap-corrected limits
    /// `max(l, z-u) .. min(u, z-l)`.
    pub fn convolve(&self, other: &PolynomialPdf) -> Result<PiecewisePdf> {
        same_support(&self.support, &other.support)?;
        let (l, u) = (self.support.lower(), self.support.upper());
        let a = self.poly.coeffs();
        let b = other.poly.coeffs();
        let max_pow = a.len() + b.len();

        // cached powers of (z - l) and (z - u)
        let zl = power_table(&Polynomial::new(vec![-l, 1.0]), max_pow);
        let zu = power_table(&Polynomial::new(vec![-u, 1.0]), max_pow);

        let mut lower_piece = Polynomial::zero();
        let mut upper_piece = Polynomial::zero();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let mut binom = 1.0f64;
                for k in 0..=j {
                    if k > 0 {
                        binom *= (j - k + 1) as f64 / k as f64;
                    }
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let c = ai * bj * binom * sign / (i + k + 1) as f64;
                    let e = i + k + 1;

                    // ∫_l^{z-l} x^{i+k} dx = ((z-l)^e - l^e)/e
                    let low = &zl[e] - &Polynomial::constant(l.powi(e as i32));
                    lower_piece = &lower_piece + &(&low * &Polynomial::monomial(c, j - k));

                    // ∫_{z-u}^{u} x^{i+k} dx = (u^e - (z-u)^e)/e
                    let high = &Polynomial::constant(u.powi(e as i32)) - &zu[e];
                    upper_piece = &upper_piece + &(&high * &Polynomial::monomial(c, j - k));
                }
            }
        }

        let mid = l + u;
        PiecewisePdf::from_segments(
            vec![
                (lower_piece, Interval::new(2.0 * l, mid)?),
                (upper_piece, Interval::new(mid, 2.0 * u)?),
            ],
            0,
        )
    }

    /// Interior critical points (from the real roots of the derivative)
    /// classified by curvature, plus the two boundary points.
    pub fn extrema(&self) -> Vec<Extremum> {
        extrema_of(&self.poly, &self.support)
    }

    /// The locations of the density maxima (the modes).
    pub fn modes(&self) -> Vec<f64> {
        self.extrema()
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Max)
            .map(|e| e.x)
            .collect()
    }
}

impl Density for PolynomialPdf {
    fn support(&self) -> Interval {
        self.support
    }

    fn density(&self, x: f64) -> f64 {
        if self.support.contains(x) {
            self.poly.eval(x).max(0.0)
        } else {
            0.0
        }
    }

    fn cumulative(&self, x: f64) -> f64 {
        if x <= self.support.lower() {
            0.0
        } else if x >= self.support.upper() {
            1.0
        } else {
            self.cdf_clamped(x)
        }
    }
}

fn power_table(base: &Polynomial, up_to: usize) -> Vec<Polynomial> {
    let mut table = Vec::with_capacity(up_to + 1);
    table.push(Polynomial::constant(1.0));
    for k in 1..=up_to {
        let next = &table[k - 1] * base;
        table.push(next);
    }
    table
}

pub(crate) fn same_support(a: &Interval, b: &Interval) -> Result<()> {
    let scale = a.width().max(1.0);
    if (a.lower() - b.lower()).abs() > 1e-12 * scale
        || (a.upper() - b.upper()).abs() > 1e-12 * scale
    {
        return Err(Error::SupportMismatch {
            left: (a.lower(), a.upper()),
            right: (b.lower(), b.upper()),
        });
    }
    Ok(())
}

/// Bayesian update: pointwise product of likelihood and prior, renormalized.
pub fn posterior_product(likelihood: &PolynomialPdf, prior: &PolynomialPdf) -> Result<PolynomialPdf> {
    same_support(&likelihood.support, &prior.support)?;
    let product = &likelihood.poly * &prior.poly;
    PolynomialPdf::new(product, likelihood.support)
}

/// Convex combination of densities on a common support.
pub fn mixture(components: &[PolynomialPdf], weights: &[f64]) -> Result<PolynomialPdf> {
    if components.is_empty() || components.len() != weights.len() {
        return Err(Error::BadWeights { sum: f64::NAN });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < 0.0) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights { sum });
    }
    let support = components[0].support;
    let mut acc = Polynomial::zero();
    let mut cert = Certificate::CertifiedNonNegative;
    for (c, &w) in components.iter().zip(weights) {
        same_support(&support, &c.support)?;
        acc = &acc + &c.poly.scale(w);
        cert = Certificate::weakest(cert, c.certificate);
    }
    Ok(PolynomialPdf::from_parts_unchecked(acc, support, cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub kind: ExtremumKind,
    /// True for the support endpoints, which act as additional extrema.
    pub boundary: bool,
}

pub(crate) fn extrema_of(p: &Polynomial, iv: &Interval) -> Vec<Extremum> {
    let mut out = Vec::new();
    let d1 = p.derivative(1);

    if d1.is_zero() {
        // flat density: every point attains the maximum
        out.push(Extremum { x: iv.lower(), kind: ExtremumKind::Max, boundary: true });
        out.push(Extremum { x: iv.upper(), kind: ExtremumKind::Max, boundary: true });
        return out;
    }

    out.push(Extremum {
        x: iv.lower(),
        kind: endpoint_kind(p, iv.lower(), true),
        boundary: true,
    });

    if let Ok(crit) = roots::real_roots_in(&d1, iv.lower(), iv.upper()) {
        let d2 = p.derivative(2);
        let h = iv.width() * 1e-7;
        for x in crit {
            let curvature = d2.eval(x);
            let kind = if curvature < -CURVATURE_EPS * p.max_abs_coeff() {
                Some(ExtremumKind::Max)
            } else if curvature > CURVATURE_EPS * p.max_abs_coeff() {
                Some(ExtremumKind::Min)
            } else {
                // flat curvature: decide by the slope's sign change
                let left = d1.eval(x - h);
                let right = d1.eval(x + h);
                if left > 0.0 && right < 0.0 {
                    Some(ExtremumKind::Max)
                } else if left < 0.0 && right > 0.0 {
                    Some(ExtremumKind::Min)
                } else {
                    None // inflection, not an extremum
                }
            };
            if let Some(kind) = kind {
                out.push(Extremum { x, kind, boundary: false });
            }
        }
    }

    out.push(Extremum {
        x: iv.upper(),
        kind: endpoint_kind(p, iv.upper(), false),
        boundary: true,
    });
    out
}

const CURVATURE_EPS: f64 = 1e-10;

/// Classify an endpoint by the first non-vanishing derivative looking inward.
fn endpoint_kind(p: &Polynomial, x: f64, is_lower: bool) -> ExtremumKind {
    let scale = p.max_abs_coeff();
    let mut d = p.clone();
    for k in 1..=p.degree() {
        d = d.derivative(1);
        let v = d.eval(x);
        if v.abs() > 1e-12 * scale {
            let inward = if is_lower { v } else { v * if k % 2 == 0 { 1.0 } else { -1.0 } };
            return if inward > 0.0 { ExtremumKind::Min } else { ExtremumKind::Max };
        }
    }
    ExtremumKind::Max
}
