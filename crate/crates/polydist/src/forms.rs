//! Factored (root) and partial-fraction polynomial representations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::roots;
use crate::tol;

/// A polynomial as its leading coefficient and complex root multiset:
/// `p(x) = leading * Π (x - r_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPolynomial {
    leading: f64,
    roots: Vec<Complex64>,
}

impl FactoredPolynomial {
    /// Builds the representation, checking that non-real roots occur in
    /// conjugate pairs so the expanded polynomial is real-valued.
    pub fn new(leading: f64, roots: Vec<Complex64>) -> Result<Self> {
        if leading == 0.0 || !leading.is_finite() {
            return Err(Error::ArgumentDomain {
                name: "leading",
                value: leading,
                expected: "finite and nonzero",
            });
        }
        let mismatch = conjugate_mismatch(&roots);
        if mismatch > tol::CONJUGATE_PAIR_TOL {
            return Err(Error::NotConjugatePaired { mismatch });
        }
        Ok(Self { leading, roots })
    }

    pub fn from_real_roots(leading: f64, roots: &[f64]) -> Result<Self> {
        Self::new(leading, roots.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn leading(&self) -> f64 {
        self.leading
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0)).re
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.roots.iter().fold(Complex64::new(self.leading, 0.0), |acc, &r| acc * (z - r))
    }

    /// Expansion to coefficient form by the signed elementary symmetric
    /// functions of the roots; the imaginary residue of every coefficient
    /// must stay below tolerance.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let mut coeffs = vec![Complex64::new(self.leading, 0.0)];
        for &r in &self.roots {
            // multiply the ascending coefficient list by (x - r)
            coeffs.push(Complex64::new(0.0, 0.0));
            for i in (0..coeffs.len() - 1).rev() {
                let c = coeffs[i];
                coeffs[i + 1] += c;
                coeffs[i] = -r * c;
            }
        }
        let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.re.abs()));
        let residue = coeffs.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        if residue > tol::IMAG_RESIDUE_TOL * scale {
            return Err(Error::NonRealCoefficients { residue });
        }
        Ok(Polynomial::new(coeffs.into_iter().map(|c| c.re).collect()))
    }

    /// Factors a coefficient-form polynomial: closed forms up to degree 3,
    /// Aberth iteration beyond.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let n = p.degree();
        if n == 0 {
            return Err(Error::UnsupportedDegree { degree: 0 });
        }
        let roots = if n <= 3 {
            roots::closed_form_roots(p)?
        } else {
            roots::numeric_roots(p)?
        };
        Self::new(p.leading(), roots)
    }

    /// Derivative value straight from the factored form, by the recursion
    /// `ṗ_n = (a_n/a_{n-1}) p_{n-1} + (a_n/a_{n-1}) (x - r_n) ṗ_{n-1}`
    /// (equivalently the product rule `Σ_i Π_{j≠i} (x - r_j)`).
    pub fn derivative_eval(&self, x: f64) -> f64 {
        let z = Complex64::new(x, 0.0);
        let mut value = Complex64::new(0.0, 0.0); // running derivative
        let mut product = Complex64::new(1.0, 0.0); // running product
        for &r in &self.roots {
            value = product + (z - r) * value;
            product *= z - r;
        }
        (value * self.leading).re
    }

    /// Antiderivative through the root recursion
    /// `I_n = (x - r_n) I_{n-1} - ∫ I_{n-1}`, `I_1 = x²/2 - r_1 x`,
    /// with `∫ p_n = a_n I_n` up to the constant of integration.
    ///
    /// Intermediate polynomials pick up complex coefficients from unpaired
    /// roots; the imaginary parts cancel once every conjugate has entered.
    pub fn recursive_antiderivative(&self) -> Result<Polynomial> {
        let first = self.roots[0];
        // I_1 ascending: [0, -r_1, 1/2]
        let mut integral = vec![
            Complex64::new(0.0, 0.0),
            -first,
            Complex64::new(0.5, 0.0),
        ];
        for &r in &self.roots[1..] {
            let inner = complex_antiderivative(&integral);
            let shifted = complex_mul_linear(&integral, r);
            integral = shifted
                .iter()
                .zip(inner.iter())
                .map(|(a, b)| a - b)
                .collect();
        }
        let scale = integral.iter().fold(1.0f64, |m, c| m.max(c.re.abs()));
        let residue = integral.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        if residue > tol::IMAG_RESIDUE_TOL * scale {
            return Err(Error::NonRealCoefficients { residue });
        }
        Ok(Polynomial::new(integral.iter().map(|c| c.re).collect()).scale(self.leading))
    }
}

/// `(x - r) * p` over ascending complex coefficients.
fn complex_mul_linear(p: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= r * c;
    }
    out
}

/// `∫ p` with zero constant, over ascending complex coefficients.
fn complex_antiderivative(p: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] = c / (i as f64 + 1.0);
    }
    out
}

fn conjugate_mismatch(roots: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    let mut used = vec![false; roots.len()];
    for (i, &z) in roots.iter().enumerate() {
        if used[i] || z.im.abs() <= tol::CONJUGATE_PAIR_TOL * (1.0 + z.norm()) {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (j, &w) in roots.iter().enumerate() {
            if j == i || used[j] {
                continue;
            }
            let d = (w - z.conj()).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) => {
                used[i] = true;
                used[j] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// A partial-fraction expansion `Σ c_i / (x - r_i)` with pairwise distinct
/// poles and nonzero residues.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalExpansion {
    terms: Vec<(Complex64, Complex64)>, // (residue, pole)
}

impl RationalExpansion {
    pub fn new(terms: Vec<(Complex64, Complex64)>) -> Result<Self> {
        for (i, (_, ri)) in terms.iter().enumerate() {
            for (_, rj) in terms.iter().skip(i + 1) {
                if (ri - rj).norm() <= tol::POLE_SEPARATION {
                    return Err(Error::RepeatedPole { first: *ri, second: *rj });
                }
            }
        }
        if let Some((c, _)) = terms.iter().find(|(c, _)| c.norm() == 0.0) {
            return Err(Error::ArgumentDomain {
                name: "residue",
                value: c.norm(),
                expected: "nonzero",
            });
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0)).re
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(c, r)| c / (z - r)).sum()
    }

    /// Partial fractions of `numer / denom` with simple poles: the residue at
    /// `r_i` is `numer(r_i) / denom'(r_i)`.
    pub fn from_ratio(numer: &Polynomial, denom: &FactoredPolynomial) -> Result<Self> {
        if numer.degree() >= denom.degree() && !numer.is_zero() {
            return Err(Error::ImproperRational {
                numer: numer.degree(),
                denom: denom.degree(),
            });
        }
        let poles = denom.roots();
        for (i, ri) in poles.iter().enumerate() {
            for rj in poles.iter().skip(i + 1) {
                if (ri - rj).norm() <= tol::POLE_SEPARATION {
                    return Err(Error::RepeatedPole { first: *ri, second: *rj });
                }
            }
        }
        let mut terms = Vec::with_capacity(poles.len());
        for (i, &ri) in poles.iter().enumerate() {
            let mut dq = Complex64::new(denom.leading(), 0.0);
            for (j, &rj) in poles.iter().enumerate() {
                if j != i {
                    dq *= ri - rj;
                }
            }
            let c = numer.eval_complex(ri) / dq;
            if c.norm() > 1e-14 * (1.0 + numer.max_abs_coeff()) {
                terms.push((c, ri));
            }
        }
        Self::new(terms)
    }

    fn reject_interior_poles(&self, iv: &Interval) -> Result<()> {
        for &(_, r) in &self.terms {
            let real_pole = r.im.abs() <= tol::CONJUGATE_PAIR_TOL * (1.0 + r.norm());
            if real_pole && r.re >= iv.lower() && r.re <= iv.upper() {
                return Err(Error::PoleInsideSupport { pole: r.re });
            }
        }
        Ok(())
    }

    /// `∫_l^u Σ c_i/(x - r_i) = Σ c_i [ln(u - r_i) - ln(l - r_i)]` with the
    /// principal complex logarithm; real poles inside the interval make the
    /// integral non-convergent and are rejected.
    pub fn definite_integral(&self, iv: &Interval) -> Result<f64> {
        self.reject_interior_poles(iv)?;
        let l = Complex64::new(iv.lower(), 0.0);
        let u = Complex64::new(iv.upper(), 0.0);
        let sum: Complex64 = self
            .terms
            .iter()
            .map(|&(c, r)| c * ((u - r).ln() - (l - r).ln()))
            .sum();
        discard_imag(sum)
    }

    /// k-th derivative value: `(-1)^k k! Σ c_i / (x - r_i)^{k+1}`.
    pub fn derivative_eval(&self, k: usize, x: f64) -> f64 {
        let z = Complex64::new(x, 0.0);
        let factorial: f64 = (1..=k).map(|v| v as f64).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let sum: Complex64 = self
            .terms
            .iter()
            .map(|&(c, r)| c / (z - r).powi(k as i32 + 1))
            .sum();
        (sum * sign * factorial).re
    }

    /// k-fold antiderivative value:
    /// `Σ c_i (x - r_i)^{k-1} ln(x - r_i) / (k-1)!`, defined away from the
    /// real poles.
    pub fn kfold_integral_eval(&self, k: usize, x: f64) -> Result<f64> {
        if k == 0 {
            return Ok(self.eval(x));
        }
        let z = Complex64::new(x, 0.0);
        for &(_, r) in &self.terms {
            if r.im.abs() <= tol::CONJUGATE_PAIR_TOL * (1.0 + r.norm())
                && (x - r.re).abs() <= tol::POLE_SEPARATION
            {
                return Err(Error::PoleInsideSupport { pole: r.re });
            }
        }
        let factorial: f64 = (1..k).map(|v| v as f64).product();
        let mut sum = Complex64::new(0.0, 0.0);
        for &(c, r) in &self.terms {
            if r.im.abs() <= tol::CONJUGATE_PAIR_TOL * (1.0 + r.norm()) {
                // real pole: the real-calculus antiderivative uses ln|x - r|
                let d = x - r.re;
                sum += c * d.powi(k as i32 - 1) * d.abs().ln();
            } else {
                sum += c * (z - r).powi(k as i32 - 1) * (z - r).ln();
            }
        }
        discard_imag(sum / factorial)
    }

    /// k-th moment over the interval by the exact division
    /// `x^k/(x-r) = Σ_{j<k} r^j x^{k-1-j} + r^k/(x-r)`.
    pub fn moment(&self, k: usize, iv: &Interval) -> Result<f64> {
        if k == 0 {
            return self.definite_integral(iv);
        }
        self.reject_interior_poles(iv)?;
        let l = Complex64::new(iv.lower(), 0.0);
        let u = Complex64::new(iv.upper(), 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &(c, r) in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut r_pow = Complex64::new(1.0, 0.0);
            for j in 0..k {
                let e = (k - j) as f64;
                let diff = (u.powf(e) - l.powf(e)) / e;
                acc += r_pow * diff;
                r_pow *= r;
            }
            acc += r_pow * ((u - r).ln() - (l - r).ln());
            sum += c * acc;
        }
        discard_imag(sum)
    }
}

fn discard_imag(z: Complex64) -> Result<f64> {
    if z.im.abs() > tol::IMAG_RESIDUE_TOL * (1.0 + z.re.abs()) {
        return Err(Error::NonRealCoefficients { residue: z.im.abs() });
    }
    Ok(z.re)
}
