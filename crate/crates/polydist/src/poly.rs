//! Coefficient-form polynomials and their exact calculus.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::interval::Interval;
use crate::tol;

/// A real polynomial stored by ascending powers: `coeffs[i]` multiplies `x^i`.
///
/// Trailing coefficients smaller than `COEFF_TRIM_REL * max|a_i|` are trimmed
/// at construction; the zero polynomial is the single coefficient `0.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let floor = tol::COEFF_TRIM_REL * scale;
        while self.coeffs.len() > 1 {
            let last = *self.coeffs.last().unwrap();
            if last.abs() <= floor {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
        if self.coeffs.len() == 1 && self.coeffs[0].abs() <= floor {
            self.coeffs[0] = 0.0;
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation `(..((a_n x + a_{n-1}) x + ...) x + a_0`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// k-th derivative; `k > n` gives the zero polynomial.
    pub fn derivative(&self, k: usize) -> Polynomial {
        assert!(k >= 1, "derivative order must be >= 1");
        if k > self.degree() {
            return Polynomial::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| self.coeffs[i] * falling_factorial(i, k))
            .collect();
        Polynomial::new(coeffs)
    }

    /// k-fold antiderivative with all integration constants fixed to zero:
    /// the coefficient of `x^{i+k}` is `a_i * i! / (i+k)!`.
    pub fn antiderivative(&self, k: usize) -> Polynomial {
        assert!(k >= 1, "antiderivative order must be >= 1");
        let mut coeffs = vec![0.0; self.coeffs.len() + k];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i + k] = a / rising_factorial(i, k);
        }
        Polynomial::new(coeffs)
    }

    /// `∫_l^u p  = Σ a_i (u^{i+1} - l^{i+1}) / (i+1)`.
    pub fn definite_integral(&self, iv: &Interval) -> f64 {
        let (l, u) = (iv.lower(), iv.upper());
        let mut pl = l;
        let mut pu = u;
        let mut acc = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            acc += a / (i as f64 + 1.0) * (pu - pl);
            pu *= u;
            pl *= l;
        }
        acc
    }

    /// `∫_l^u x^k p  = Σ a_i (u^{i+k+1} - l^{i+k+1}) / (i+k+1)`.
    pub fn moment_integral(&self, k: usize, iv: &Interval) -> f64 {
        let (l, u) = (iv.lower(), iv.upper());
        let mut pl = l.powi(k as i32 + 1);
        let mut pu = u.powi(k as i32 + 1);
        let mut acc = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            acc += a / ((i + k) as f64 + 1.0) * (pu - pl);
            pu *= u;
            pl *= l;
        }
        acc
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * factor).collect())
    }

    /// Composition with an affine argument: coefficients of `p(scale*x + shift)`.
    pub fn compose_affine(&self, scale: f64, shift: f64) -> Polynomial {
        let inner = Polynomial::new(vec![shift, scale]);
        let mut acc = Polynomial::constant(*self.coeffs.last().unwrap());
        for &a in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * &inner) + &Polynomial::constant(a);
        }
        acc
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Polynomial {
        let mut acc = Polynomial::constant(1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// k-th moment over the interval by repeated integration by parts,
    /// `∫ x^k p = Σ_j (-1)^j k!/(k-j)! [x^{k-j} P_{j+1}]_l^u` with `P_m` the
    /// m-fold antiderivative. An independent algebraic route to
    /// [`Polynomial::moment_integral`].
    pub fn moment_by_parts(&self, k: usize, iv: &Interval) -> f64 {
        let (l, u) = (iv.lower(), iv.upper());
        let mut acc = 0.0;
        let mut coeff = 1.0f64; // k! / (k-j)!
        for j in 0..=k {
            let anti = self.antiderivative(j + 1);
            let e = (k - j) as i32;
            let boundary = u.powi(e) * anti.eval(u) - l.powi(e) * anti.eval(l);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * coeff * boundary;
            coeff *= (k - j) as f64;
        }
        acc
    }

    /// An upper bound for `sup |p|` over the interval: `Σ |a_i| m^i` with
    /// `m = max(|l|, |u|, 1)`.
    pub fn sup_bound(&self, iv: &Interval) -> f64 {
        let m = iv.lower().abs().max(iv.upper().abs()).max(1.0);
        let mut pw = 1.0;
        let mut acc = 0.0;
        for &a in &self.coeffs {
            acc += a.abs() * pw;
            pw *= m;
        }
        acc
    }
}

fn falling_factorial(i: usize, k: usize) -> f64 {
    // i! / (i-k)!
    ((i - k + 1)..=i).map(|v| v as f64).product()
}

fn rising_factorial(i: usize, k: usize) -> f64 {
    // (i+k)! / i!
    ((i + 1)..=(i + k)).map(|v| v as f64).product()
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " {} ", if a < 0.0 { "-" } else { "+" })?;
            } else if a < 0.0 {
                write!(f, "-")?;
            }
            match i {
                0 => write!(f, "{}", a.abs())?,
                1 => write!(f, "{}*x", a.abs())?,
                _ => write!(f, "{}*x^{}", a.abs(), i)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn iv(l: f64, u: f64) -> Interval {
        Interval::new(l, u).unwrap()
    }

    #[test]
    fn horner_matches_hand_values() {
        assert_eq!(Polynomial::new(vec![1.0, 2.0]).eval(3.0), 7.0);
        assert_eq!(Polynomial::new(vec![0.0]).eval(5.0), 0.0);
        // (x-1)(x-2)(x-3) at x = 2
        assert_eq!(Polynomial::new(vec![-6.0, 11.0, -6.0, 1.0]).eval(2.0), 0.0);
    }

    #[test]
    fn derivative_examples() {
        let p = Polynomial::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(p.derivative(1).coeffs(), &[0.0, 2.0]);

        let c = Polynomial::constant(5.0);
        assert!(c.derivative(3).is_zero());

        // d^2/dx^2 x^3 = 6x, coefficient a_i * i!/(i-k)! with i=3, k=2
        let cubic = Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(cubic.derivative(2).coeffs(), &[0.0, 6.0]);
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(Polynomial::constant(1.0).antiderivative(1).coeffs(), &[0.0, 1.0]);
        assert_eq!(
            Polynomial::new(vec![0.0, 2.0]).antiderivative(1).coeffs(),
            &[0.0, 0.0, 1.0]
        );
        // double integral of 2 is x^2: a_0 * 0!/2! * 2 = 1
        assert_eq!(Polynomial::constant(2.0).antiderivative(2).coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn definite_integrals() {
        assert_abs_diff_eq!(
            Polynomial::new(vec![0.0, 0.0, 3.0]).definite_integral(&iv(0.0, 1.0)),
            1.0
        );
        assert_abs_diff_eq!(Polynomial::constant(1.0).definite_integral(&iv(-1.0, 1.0)), 2.0);
        assert_abs_diff_eq!(Polynomial::new(vec![0.0, 2.0]).definite_integral(&iv(0.0, 1.0)), 1.0);
    }

    #[test]
    fn moment_integrals() {
        let unit = iv(0.0, 1.0);
        assert_abs_diff_eq!(Polynomial::constant(1.0).moment_integral(1, &unit), 0.5);
        let p = Polynomial::new(vec![0.0, 2.0]);
        assert_abs_diff_eq!(p.moment_integral(1, &unit), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.moment_integral(2, &unit), 0.5, epsilon = 1e-15);
        // k = 0 reduces to the plain definite integral
        assert_eq!(p.moment_integral(0, &unit), p.definite_integral(&unit));
    }

    #[test]
    fn arithmetic_examples() {
        let a = Polynomial::new(vec![1.0, 1.0]);
        let b = Polynomial::new(vec![1.0, -1.0]);
        assert_eq!((&a * &b).coeffs(), &[1.0, 0.0, -1.0]);
        assert_eq!(
            (&Polynomial::constant(1.0) + &Polynomial::new(vec![0.0, 1.0])).coeffs(),
            &[1.0, 1.0]
        );
        assert_eq!(Polynomial::new(vec![0.0, 3.0]).scale(2.0).coeffs(), &[0.0, 6.0]);
    }

    #[test]
    fn trims_trailing_noise() {
        let p = Polynomial::new(vec![1.0, 2.0, 1e-300]);
        assert_eq!(p.degree(), 1);
        let z = Polynomial::new(vec![0.0, 0.0, 0.0]);
        assert!(z.is_zero());
    }

    #[test]
    fn compose_affine_shifts_support() {
        // p(x) = x^2, p(2x + 1) = 4x^2 + 4x + 1
        let p = Polynomial::monomial(1.0, 2);
        let q = p.compose_affine(2.0, 1.0);
        assert_eq!(q.coeffs(), &[1.0, 4.0, 4.0]);
    }

    #[test]
    fn moment_by_parts_matches_direct() {
        let p = Polynomial::new(vec![0.3, -1.2, 0.8, 2.0]);
        let interval = iv(-0.5, 1.75);
        for k in 0..=4 {
            let direct = p.moment_integral(k, &interval);
            let by_parts = p.moment_by_parts(k, &interval);
            assert_abs_diff_eq!(by_parts, direct, epsilon = 1e-12 * (1.0 + direct.abs()));
        }
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(
            coeffs in proptest::collection::vec(-10.0f64..10.0, 1..13),
            x in -3.0f64..3.0,
        ) {
            let p = Polynomial::new(coeffs.clone());
            let direct: f64 = coeffs.iter().enumerate().map(|(i, a)| a * x.powi(i as i32)).sum();
            let scale = 1.0 + direct.abs();
            prop_assert!((p.eval(x) - direct).abs() <= 1e-12 * scale);
        }

        #[test]
        fn derivative_undoes_antiderivative(
            coeffs in proptest::collection::vec(-10.0f64..10.0, 1..10),
        ) {
            let p = Polynomial::new(coeffs);
            let back = p.antiderivative(1).derivative(1);
            prop_assert_eq!(back.degree(), p.degree());
            for i in 0..=p.degree() {
                prop_assert!((back.coeff(i) - p.coeff(i)).abs() <= 1e-12 * (1.0 + p.coeff(i).abs()));
            }
        }

        #[test]
        fn fundamental_theorem(
            coeffs in proptest::collection::vec(-10.0f64..10.0, 1..10),
            l in -2.0f64..0.0,
            w in 0.1f64..2.0,
        ) {
            let p = Polynomial::new(coeffs);
            let interval = iv(l, l + w);
            let anti = p.antiderivative(1);
            let direct = p.definite_integral(&interval);
            let via_anti = anti.eval(interval.upper()) - anti.eval(interval.lower());
            prop_assert!((direct - via_anti).abs() <= 1e-12 * (1.0 + direct.abs()));
        }

        #[test]
        fn derivative_then_antiderivative_drops_constant(
            coeffs in proptest::collection::vec(-10.0f64..10.0, 2..10),
        ) {
            let p = Polynomial::new(coeffs);
            let round = p.derivative(1).antiderivative(1);
            // equals p minus its constant term
            prop_assert!((round.coeff(0)).abs() <= 1e-12);
            for i in 1..=p.degree() {
                prop_assert!((round.coeff(i) - p.coeff(i)).abs() <= 1e-10 * (1.0 + p.coeff(i).abs()));
            }
        }
    }
}
