//! Integrals of polynomials against exponential kernels: the characteristic
//! function `∫ p e^{itx}` and the moment generating function `∫ p e^{tx}`.
//!
//! Both use the integration-by-parts recursion that terminates at the
//! constant n-th derivative; small arguments switch to the Maclaurin series
//! in the moment integrals, where the recursion's repeated division by `t`
//! would amplify rounding.

use num_complex::Complex64;

use crate::interval::Interval;
use crate::poly::Polynomial;

/// Below `|t| * max(|l|,|u|,1)` of this size the series path is used.
const SERIES_SWITCH: f64 = 0.5;
const SERIES_MAX_TERMS: usize = 80;

/// `∫_l^u p(x) e^{i t x} dx`. At `t = 0` this is the plain definite integral.
pub fn char_function(p: &Polynomial, iv: &Interval, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(p.definite_integral(iv), 0.0);
    }
    let m = iv.lower().abs().max(iv.upper().abs()).max(1.0);
    if t.abs() * m < SERIES_SWITCH {
        return char_series(p, iv, t);
    }

    let n = p.degree();
    let it = Complex64::new(0.0, t);
    let eu = (it * iv.upper()).exp();
    let el = (it * iv.lower()).exp();

    let mut derivs = Vec::with_capacity(n + 1);
    derivs.push(p.clone());
    for k in 1..=n {
        let prev: &Polynomial = &derivs[k - 1];
        derivs.push(prev.derivative(1));
    }

    let mut acc = Complex64::new(0.0, 0.0);
    for k in (0..=n).rev() {
        let boundary = eu * derivs[k].eval(iv.upper()) - el * derivs[k].eval(iv.lower());
        acc = (boundary - acc) / it;
    }
    acc
}

fn char_series(p: &Polynomial, iv: &Interval, t: f64) -> Complex64 {
    let it = Complex64::new(0.0, t);
    let reach = iv.lower().abs().max(iv.upper().abs()).max(1.0);
    let moment_bound = p.sup_bound(iv) * iv.width();
    let mut factor = Complex64::new(1.0, 0.0);
    let mut envelope = moment_bound;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..SERIES_MAX_TERMS {
        if m > 0 {
            factor *= it / m as f64;
            envelope *= t.abs() * reach / m as f64;
        }
        acc += factor * p.moment_integral(m, iv);
        // the envelope bounds every remaining term once it decays
        if envelope <= 1e-18 * acc.norm().max(1e-30) {
            break;
        }
    }
    acc
}

/// `M(t) = ∫_l^u e^{t x} p(x) dx`. At `t = 0` this is the definite integral.
pub fn mgf(p: &Polynomial, iv: &Interval, t: f64) -> f64 {
    if t == 0.0 {
        return p.definite_integral(iv);
    }
    let m = iv.lower().abs().max(iv.upper().abs()).max(1.0);
    if t.abs() * m < SERIES_SWITCH {
        let moment_bound = p.sup_bound(iv) * iv.width();
        let mut factor = 1.0;
        let mut envelope = moment_bound;
        let mut acc = 0.0;
        for k in 0..SERIES_MAX_TERMS {
            if k > 0 {
                factor *= t / k as f64;
                envelope *= t.abs() * m / k as f64;
            }
            acc += factor * p.moment_integral(k, iv);
            if envelope <= 1e-18 * acc.abs().max(1e-30) {
                break;
            }
        }
        return acc;
    }

    let n = p.degree();
    let eu = (t * iv.upper()).exp();
    let el = (t * iv.lower()).exp();
    let mut derivs = Vec::with_capacity(n + 1);
    derivs.push(p.clone());
    for k in 1..=n {
        let prev: &Polynomial = &derivs[k - 1];
        derivs.push(prev.derivative(1));
    }
    let mut acc = 0.0;
    for k in (0..=n).rev() {
        let boundary = eu * derivs[k].eval(iv.upper()) - el * derivs[k].eval(iv.lower());
        acc = (boundary - acc) / t;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;
    use approx::assert_abs_diff_eq;

    fn iv(l: f64, u: f64) -> Interval {
        Interval::new(l, u).unwrap()
    }

    #[test]
    fn rectangle_transform() {
        // ∫_{-1}^{1} e^{itx} dx = 2 sin(t)/t
        let p = Polynomial::constant(1.0);
        for &t in &[0.3, 1.0, 7.5, 40.0] {
            let got = char_function(&p, &iv(-1.0, 1.0), t);
            assert_abs_diff_eq!(got.re, 2.0 * t.sin() / t, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_frequency_is_mass() {
        let p = Polynomial::new(vec![0.5, 1.0, -0.25]);
        let interval = iv(-0.5, 2.0);
        let got = char_function(&p, &interval, 0.0);
        assert_eq!(got.re, p.definite_integral(&interval));
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn char_matches_quadrature() {
        let p = Polynomial::new(vec![0.0, 2.0]);
        let interval = iv(0.0, 1.0);
        for &t in &[0.01, 0.2, 1.0, 13.0, 50.0] {
            let got = char_function(&p, &interval, t);
            let re = quadrature::integrate(|x| p.eval(x) * (t * x).cos(), 0.0, 1.0, 1e-12).value;
            let im = quadrature::integrate(|x| p.eval(x) * (t * x).sin(), 0.0, 1.0, 1e-12).value;
            assert_abs_diff_eq!(got.re, re, epsilon = 1e-9);
            assert_abs_diff_eq!(got.im, im, epsilon = 1e-9);
        }
    }

    #[test]
    fn mgf_examples() {
        let unit = iv(0.0, 1.0);
        assert_abs_diff_eq!(
            mgf(&Polynomial::constant(1.0), &unit, 1.0),
            std::f64::consts::E - 1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(mgf(&Polynomial::new(vec![0.0, 2.0]), &unit, 0.0), 1.0);
        // ∫_0^1 x e^{2x} = (e^2 + 1)/4
        assert_abs_diff_eq!(
            mgf(&Polynomial::new(vec![0.0, 1.0]), &unit, 2.0),
            (std::f64::consts::E.powi(2) + 1.0) / 4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mgf_matches_quadrature_small_t() {
        let p = Polynomial::new(vec![1.0, -0.3, 0.7, 0.1]);
        let interval = iv(-1.0, 1.5);
        for &t in &[1e-4, 0.05, 0.4, 3.0] {
            let got = mgf(&p, &interval, t);
            let want = quadrature::integrate(
                |x| p.eval(x) * (t * x).exp(),
                interval.lower(),
                interval.upper(),
                1e-12,
            )
            .value;
            assert_abs_diff_eq!(got, want, epsilon = 1e-9 * (1.0 + want.abs()));
        }
    }
}
