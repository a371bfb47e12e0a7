//! Density transformations: support remapping, semi-infinite and real-line
//! extensions, the memoryless monotone change of variables, and the
//! shift/absolute-value/clip/square density constructors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fit::polynomial_min;
use crate::interval::Interval;
use crate::pdf::{same_support, Density, PolynomialPdf};
use crate::piecewise::PiecewisePdf;
use crate::poly::Polynomial;
use crate::quadrature;
use crate::roots;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    AffineSupportMap,
    SemiInfinite,
    RealLine,
    GeneralMonotone,
}

type MapFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A density obtained from a polynomial base by an invertible memoryless
/// map `g`: the value at `x` is `p(g⁻¹(x)) |d g⁻¹/dx|`. The transformed
/// support may be semi-infinite or the whole line.
#[derive(Clone)]
pub struct TransformedDensity {
    base: PolynomialPdf,
    kind: TransformKind,
    params: Vec<(&'static str, f64)>,
    forward: MapFn,
    inverse: MapFn,
    inverse_derivative: MapFn,
    increasing: bool,
    lower: f64,
    upper: f64,
}

impl std::fmt::Debug for TransformedDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformedDensity")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("support", &(self.lower, self.upper))
            .finish()
    }
}

impl TransformedDensity {
    pub fn base(&self) -> &PolynomialPdf {
        &self.base
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    /// Transformed support bounds; may be infinite.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= self.lower || x >= self.upper {
            return 0.0;
        }
        let back = (self.inverse)(x);
        let base_support = self.base.support();
        if !base_support.contains(back) {
            return 0.0;
        }
        self.base.poly().eval(back).max(0.0) * (self.inverse_derivative)(x).abs()
    }

    /// Quantiles commute with the monotone map: `x_q = g(x_q of base)` for
    /// increasing `g`, with `q -> 1-q` for decreasing maps.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        let base_q = if self.increasing { q } else { 1.0 - q };
        Ok((self.forward)(self.base.quantile(base_q)?))
    }

    /// Total mass by quadrature, truncated where the mapped base support is
    /// exhausted: the integration window leaves out `TRUNCATION_TAIL` of
    /// base probability at each end.
    pub fn mass_quadrature(&self) -> Result<f64> {
        let ql = self.base.quantile(tol::TRUNCATION_TAIL)?;
        let qh = self.base.quantile(1.0 - tol::TRUNCATION_TAIL)?;
        let (mut a, mut b) = ((self.forward)(ql), (self.forward)(qh));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        Ok(quadrature::integrate(|x| self.density(x), a, b, 1e-8).value)
    }
}

/// A strictly monotone differentiable map descriptor.
pub trait MonotoneMap {
    fn forward(&self, x: f64) -> f64;
    fn inverse(&self, y: f64) -> f64;
    /// Derivative of the inverse map at `y` (sign allowed).
    fn inverse_derivative(&self, y: f64) -> f64;
}

/// Lemma-2 style support remap: an affine change of variables onto `target`
/// keeps the density polynomial of the same degree and preserves mass
/// exactly.
pub fn affine_remap(d: &PolynomialPdf, target: Interval) -> PolynomialPdf {
    let src = d.support();
    // x = a*y + b sends target back onto the source support
    let (a, b) = target.affine_to(&src);
    let poly = d.poly().compose_affine(a, b).scale(a);
    PolynomialPdf::from_parts_unchecked(poly, target, d.certificate())
}

fn require_unit_support(d: &PolynomialPdf) -> Result<()> {
    let unit = Interval::new(-1.0, 1.0).unwrap();
    same_support(&d.support(), &unit)
}

/// Maps a density on (-1, 1) onto (0, ∞) through `g(x) = (1+x)/(2(1-x))`;
/// the image density is `(x² + x + 1/4)⁻¹ p((2x-1)/(2x+1))`.
pub fn to_semi_infinite(d: &PolynomialPdf) -> Result<TransformedDensity> {
    require_unit_support(d)?;
    Ok(TransformedDensity {
        base: d.clone(),
        kind: TransformKind::SemiInfinite,
        params: Vec::new(),
        forward: Arc::new(|x| 0.5 * (1.0 + x) / (1.0 - x)),
        inverse: Arc::new(|y| (2.0 * y - 1.0) / (2.0 * y + 1.0)),
        inverse_derivative: Arc::new(|y| 1.0 / (y * y + y + 0.25)),
        increasing: true,
        lower: 0.0,
        upper: f64::INFINITY,
    })
}

/// Maps a density on (-1, 1) onto the whole line through `atanh`; the image
/// density is `cosh⁻²(x) p(tanh x)`.
pub fn to_real_line(d: &PolynomialPdf) -> Result<TransformedDensity> {
    require_unit_support(d)?;
    Ok(TransformedDensity {
        base: d.clone(),
        kind: TransformKind::RealLine,
        params: Vec::new(),
        forward: Arc::new(|x| x.atanh()),
        inverse: Arc::new(|y| y.tanh()),
        inverse_derivative: Arc::new(|y| {
            let c = y.cosh();
            1.0 / (c * c)
        }),
        increasing: true,
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    })
}

/// Affine memoryless transform `g(x) = b1 x + b0` of the random variable:
/// the image is again a polynomial density of the same degree.
pub fn affine_transform(d: &PolynomialPdf, b1: f64, b0: f64) -> Result<PolynomialPdf> {
    if b1 == 0.0 || !b1.is_finite() || !b0.is_finite() {
        return Err(Error::ArgumentDomain {
            name: "b1",
            value: b1,
            expected: "finite and nonzero",
        });
    }
    let src = d.support();
    let (lo, hi) = (b1 * src.lower() + b0, b1 * src.upper() + b0);
    let target = if b1 > 0.0 {
        Interval::new(lo, hi)?
    } else {
        Interval::new(hi, lo)?
    };
    // q(y) = p((y - b0)/b1) / |b1|
    let poly = d
        .poly()
        .compose_affine(1.0 / b1, -b0 / b1)
        .scale(1.0 / b1.abs());
    Ok(PolynomialPdf::from_parts_unchecked(poly, target, d.certificate()))
}

/// General monotone change of variables. The descriptor is probed on a grid
/// to confirm strict monotonicity before the density is wrapped.
pub fn monotone_transform<M>(d: &PolynomialPdf, map: &M) -> Result<TransformedDensity>
where
    M: MonotoneMap + Clone + Send + Sync + 'static,
{
    let support = d.support();
    let probes = support.grid(32);
    let values: Vec<f64> = probes.iter().map(|&x| map.forward(x)).collect();
    let increasing = values[1] > values[0];
    for w in values.windows(2) {
        let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
        if !ok || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::ArgumentDomain {
                name: "g",
                value: w[1],
                expected: "strictly monotone with finite values on the support",
            });
        }
    }
    let (mut lower, mut upper) = (map.forward(support.lower()), map.forward(support.upper()));
    if lower > upper {
        std::mem::swap(&mut lower, &mut upper);
    }
    let m1 = map.clone();
    let m2 = map.clone();
    let m3 = map.clone();
    Ok(TransformedDensity {
        base: d.clone(),
        kind: TransformKind::GeneralMonotone,
        params: Vec::new(),
        forward: Arc::new(move |x| m1.forward(x)),
        inverse: Arc::new(move |y| m2.inverse(y)),
        inverse_derivative: Arc::new(move |y| m3.inverse_derivative(y)),
        increasing,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma1Mode {
    /// `A p + B` with the smallest shift making the polynomial non-negative.
    Affine,
    /// `A |p|`, represented piecewise so moments stay closed-form.
    Abs,
    /// `A (p)₊`, negative stretches clipped to zero.
    Clip,
    /// `A p²`.
    Square,
}

/// Output of the Lemma-1 constructors: affine and square modes stay
/// polynomial, absolute-value and clip modes split at the roots.
#[derive(Debug, Clone)]
pub enum Lemma1Density {
    Poly(PolynomialPdf),
    Piecewise(PiecewisePdf),
}

impl Lemma1Density {
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Lemma1Density::Poly(p) => p.density(x),
            Lemma1Density::Piecewise(p) => p.density(x),
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            Lemma1Density::Poly(p) => p.mass(),
            Lemma1Density::Piecewise(p) => p.mass(),
        }
    }
}

/// Turns an arbitrary bounded polynomial into a density on the interval.
pub fn lemma1_constructor(p: &Polynomial, iv: &Interval, mode: Lemma1Mode) -> Result<Lemma1Density> {
    match mode {
        Lemma1Mode::Affine => {
            let shift = (-polynomial_min(p, iv)).max(0.0);
            let lifted = p + &Polynomial::constant(shift);
            Ok(Lemma1Density::Poly(PolynomialPdf::new(lifted, *iv)?))
        }
        Lemma1Mode::Square => {
            let squared = p * p;
            let pdf = PolynomialPdf::new(squared, *iv)?;
            Ok(Lemma1Density::Poly(pdf))
        }
        Lemma1Mode::Abs | Lemma1Mode::Clip => {
            let cuts = roots::real_roots_in(p, iv.lower(), iv.upper())?;
            let mut knots = vec![iv.lower()];
            knots.extend(cuts);
            knots.push(iv.upper());
            knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * iv.width());

            let mut segments = Vec::new();
            for w in knots.windows(2) {
                let cell = Interval::new(w[0], w[1])?;
                let mid = cell.midpoint();
                let seg = if p.eval(mid) >= 0.0 {
                    p.clone()
                } else if mode == Lemma1Mode::Abs {
                    -p
                } else {
                    Polynomial::zero()
                };
                segments.push((seg, cell));
            }
            let raw = PiecewisePdf::from_segments(segments, 0)?;
            let mass = raw.mass();
            if mass <= 1e-300 {
                return Err(Error::DegenerateMass);
            }
            Ok(Lemma1Density::Piecewise(raw.scaled(1.0 / mass)))
        }
    }
}
