//! Non-negativity certification of polynomials over an interval.
//!
//! Three routes with different character:
//! - [`certify_nonneg_sturm`]: exact sign analysis from Sturm counts; the
//!   decision procedure behind density validation. Never indeterminate.
//! - [`classify_roots_theorem1`]: structural classification of a factored
//!   polynomial's roots; cheap but indeterminate for boundary cases.
//! - [`numeric_negativity_tests`]: the quadrature integrals `I1 = Im ∫ √p`
//!   and `I2 = ∫ (p - |p|)`, both zero iff `p` stays non-negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::FactoredPolynomial;
use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::quadrature;
use crate::sturm;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonNegative,
    HasNegative,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    SturmExact,
    Theorem1,
    NumericI1I2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonNegativityReport {
    pub verdict: Verdict,
    pub method: Method,
    /// Locations with a strictly negative value; non-empty iff the verdict
    /// is `HasNegative`.
    pub witnesses: Vec<f64>,
}

impl NonNegativityReport {
    pub fn is_nonnegative(&self) -> bool {
        self.verdict == Verdict::NonNegative
    }
}

/// Exact certification: `p` may dip at most `NONNEG_FLOOR_REL` times its
/// coefficient scale below zero (this absorbs rounding at tangential roots
/// of squared fits); anything deeper yields `HasNegative` with witnesses.
///
/// The procedure runs Sturm-guided bisection: any cell with no real roots
/// has constant sign, decided by one midpoint probe.
pub fn certify_nonneg_sturm(p: &Polynomial, iv: &Interval) -> NonNegativityReport {
    if p.is_zero() {
        return NonNegativityReport {
            verdict: Verdict::NonNegative,
            method: Method::SturmExact,
            witnesses: Vec::new(),
        };
    }

    let floor = tol::NONNEG_FLOOR_REL * p.sup_bound(iv);
    let shifted = p + &Polynomial::constant(floor);
    let chain = sturm::sturm_chain(&shifted);

    let width = iv.width();
    let min_cell = width * 1e-10;
    let mut stack = vec![(iv.lower(), iv.upper())];
    let mut witnesses = Vec::new();

    while let Some((lo, hi)) = stack.pop() {
        let count = sturm::sturm_count_with(&chain, &shifted, lo, hi);
        if count == 0 {
            let mid = 0.5 * (lo + hi);
            if shifted.eval(mid) < 0.0 {
                witnesses.push(mid);
                if witnesses.len() >= 4 {
                    break;
                }
            }
            continue;
        }
        if hi - lo < min_cell {
            // unresolved root cluster: treated as a tangential touch
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid));
        stack.push((mid, hi));
    }

    witnesses.sort_by(|a, b| a.partial_cmp(b).unwrap());
    NonNegativityReport {
        verdict: if witnesses.is_empty() {
            Verdict::NonNegative
        } else {
            Verdict::HasNegative
        },
        method: Method::SturmExact,
        witnesses,
    }
}

/// Root-condition classification of a factored polynomial with positive
/// leading coefficient: non-negative when every root has even multiplicity,
/// a conjugate partner, sits left of the interval, or belongs to an even
/// count of odd-multiplicity roots right of it. Boundary-sitting roots are
/// reported `Indeterminate`; callers fall back to the Sturm certifier.
pub fn classify_roots_theorem1(f: &FactoredPolynomial, iv: &Interval) -> Result<NonNegativityReport> {
    if f.leading() <= 0.0 {
        return Err(Error::NonPositiveLeading { leading: f.leading() });
    }

    let indeterminate = NonNegativityReport {
        verdict: Verdict::Indeterminate,
        method: Method::Theorem1,
        witnesses: Vec::new(),
    };

    // group real roots into multiplicity clusters
    let mut reals: Vec<f64> = f
        .roots()
        .iter()
        .filter(|z| z.im.abs() <= tol::CONJUGATE_PAIR_TOL * (1.0 + z.norm()))
        .map(|z| z.re)
        .collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for r in reals {
        match clusters.last_mut() {
            Some((v, m)) if (r - *v).abs() <= 1e-9 * (1.0 + v.abs()) => *m += 1,
            _ => clusters.push((r, 1)),
        }
    }

    let boundary_band = tol::ENDPOINT_SHIFT_REL * iv.width();
    let mut odd_inside = false;
    let mut odd_above_lower = 0usize;
    for &(r, mult) in &clusters {
        if mult % 2 == 0 {
            continue;
        }
        if (r - iv.lower()).abs() <= boundary_band || (r - iv.upper()).abs() <= boundary_band {
            return Ok(indeterminate);
        }
        if r > iv.lower() {
            odd_above_lower += 1;
            if r < iv.upper() {
                odd_inside = true;
            }
        }
    }

    let negative = odd_inside || odd_above_lower % 2 == 1;
    if !negative {
        return Ok(NonNegativityReport {
            verdict: Verdict::NonNegative,
            method: Method::Theorem1,
            witnesses: Vec::new(),
        });
    }

    // locate a concrete negative value between consecutive root positions
    let mut cuts: Vec<f64> = vec![iv.lower()];
    cuts.extend(
        clusters
            .iter()
            .map(|&(r, _)| r)
            .filter(|&r| r > iv.lower() && r < iv.upper()),
    );
    cuts.push(iv.upper());
    for pair in cuts.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        if f.eval(mid) < 0.0 {
            return Ok(NonNegativityReport {
                verdict: Verdict::HasNegative,
                method: Method::Theorem1,
                witnesses: vec![mid],
            });
        }
    }
    // sign bookkeeping says negative but no probe confirms: stay honest
    Ok(indeterminate)
}

/// Classification with automatic fallback to the exact Sturm certifier when
/// the root conditions are indecisive.
pub fn classify_or_certify(f: &FactoredPolynomial, iv: &Interval) -> Result<NonNegativityReport> {
    let report = classify_roots_theorem1(f, iv)?;
    if report.verdict != Verdict::Indeterminate {
        return Ok(report);
    }
    Ok(certify_nonneg_sturm(&f.to_polynomial()?, iv))
}

/// The numeric negativity integrals: `I1 = Im ∫ √p` (the square root made
/// complex wherever `p < 0`) and `I2 = ∫ (p - |p|)`. Both vanish (within the
/// quadrature tolerance) iff `p` is non-negative on the interval.
///
/// The integrands are identically zero outside the negative regions, which
/// makes a single adaptive pass blind to narrow dips (a zero error estimate
/// stops refinement); the interval is therefore pre-split into panels.
pub fn numeric_negativity_tests(p: &Polynomial, iv: &Interval) -> (f64, f64) {
    const PANELS: usize = 128;
    let edges = iv.grid(PANELS);
    let panel_tol = tol::NEGATIVITY_QUAD_TOL / PANELS as f64;
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    for w in edges.windows(2) {
        i1 += quadrature::integrate(
            |x| {
                let v = p.eval(x);
                if v < 0.0 {
                    (-v).sqrt()
                } else {
                    0.0
                }
            },
            w[0],
            w[1],
            panel_tol,
        )
        .value;
        i2 += quadrature::integrate(
            |x| {
                let v = p.eval(x);
                v - v.abs()
            },
            w[0],
            w[1],
            panel_tol,
        )
        .value;
    }
    (i1, i2)
}

/// Verdict derived from the I1/I2 pair at the quadrature tolerance.
pub fn numeric_verdict(i1: f64, i2: f64) -> Verdict {
    if i1 > tol::NEGATIVITY_QUAD_TOL && i2 < -tol::NEGATIVITY_QUAD_TOL {
        Verdict::HasNegative
    } else if i1.abs() <= tol::NEGATIVITY_QUAD_TOL && i2.abs() <= tol::NEGATIVITY_QUAD_TOL {
        Verdict::NonNegative
    } else {
        Verdict::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn iv(l: f64, u: f64) -> Interval {
        Interval::new(l, u).unwrap()
    }

    #[test]
    fn linear_nonnegative() {
        let p = Polynomial::new(vec![0.0, 2.0]);
        let report = certify_nonneg_sturm(&p, &iv(0.0, 1.0));
        assert_eq!(report.verdict, Verdict::NonNegative);
    }

    #[test]
    fn linear_with_sign_change() {
        let p = Polynomial::new(vec![-0.5, 1.0]);
        let report = certify_nonneg_sturm(&p, &iv(0.0, 1.0));
        assert_eq!(report.verdict, Verdict::HasNegative);
        let w = report.witnesses[0];
        assert!(w > 0.0 && w < 0.5);
        assert!(p.eval(w) < 0.0);
    }

    #[test]
    fn tangential_square_is_nonnegative() {
        // (x - 2)^2 restricted to (0,1), and (x - 0.5)^2 touching inside
        let p = Polynomial::new(vec![4.0, -4.0, 1.0]);
        assert_eq!(certify_nonneg_sturm(&p, &iv(0.0, 1.0)).verdict, Verdict::NonNegative);
        let q = Polynomial::new(vec![0.25, -1.0, 1.0]);
        assert_eq!(certify_nonneg_sturm(&q, &iv(0.0, 1.0)).verdict, Verdict::NonNegative);
    }

    #[test]
    fn deep_interior_dip_found() {
        // (x-0.3)(x-0.7) is negative between the roots
        let p = &Polynomial::new(vec![-0.3, 1.0]) * &Polynomial::new(vec![-0.7, 1.0]);
        let report = certify_nonneg_sturm(&p, &iv(0.0, 1.0));
        assert_eq!(report.verdict, Verdict::HasNegative);
        assert!(report.witnesses.iter().all(|&w| p.eval(w) < 0.0));
    }

    #[test]
    fn theorem1_roots_right_of_interval_even_count() {
        let f = FactoredPolynomial::from_real_roots(1.0, &[2.0, 3.0]).unwrap();
        let r = classify_roots_theorem1(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::NonNegative);
    }

    #[test]
    fn theorem1_single_root_right_is_negative() {
        let f = FactoredPolynomial::from_real_roots(1.0, &[2.0]).unwrap();
        let r = classify_roots_theorem1(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::HasNegative);
        assert!(f.eval(r.witnesses[0]) < 0.0);
    }

    #[test]
    fn theorem1_even_multiplicity_inside() {
        let f = FactoredPolynomial::from_real_roots(1.0, &[0.5, 0.5]).unwrap();
        let r = classify_roots_theorem1(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::NonNegative);
    }

    #[test]
    fn theorem1_conjugate_pair() {
        let f = FactoredPolynomial::new(
            1.0,
            vec![Complex64::new(0.5, 0.3), Complex64::new(0.5, -0.3)],
        )
        .unwrap();
        let r = classify_roots_theorem1(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::NonNegative);
    }

    #[test]
    fn theorem1_requires_positive_leading() {
        let f = FactoredPolynomial::from_real_roots(-1.0, &[2.0]).unwrap();
        assert!(classify_roots_theorem1(&f, &iv(0.0, 1.0)).is_err());
    }

    #[test]
    fn theorem1_boundary_root_is_indeterminate() {
        let f = FactoredPolynomial::from_real_roots(1.0, &[1.0]).unwrap();
        let r = classify_roots_theorem1(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
        // fallback decides it exactly: x - 1 < 0 on (0,1)
        let full = classify_or_certify(&f, &iv(0.0, 1.0)).unwrap();
        assert_eq!(full.verdict, Verdict::HasNegative);
    }

    #[test]
    fn numeric_tests_on_clean_cases() {
        let unit = iv(0.0, 1.0);
        let (i1, i2) = numeric_negativity_tests(&Polynomial::new(vec![0.0, 2.0]), &unit);
        assert_abs_diff_eq!(i1, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(i2, 0.0, epsilon = 1e-9);

        let (i1, i2) = numeric_negativity_tests(&Polynomial::constant(1.0), &unit);
        assert_eq!(numeric_verdict(i1, i2), Verdict::NonNegative);

        // x - 0.5: I2 = ∫_0^0.5 2(x - 0.5) = -0.25
        let (i1, i2) = numeric_negativity_tests(&Polynomial::new(vec![-0.5, 1.0]), &unit);
        assert!(i1 > 1e-3);
        assert_abs_diff_eq!(i2, -0.25, epsilon = 1e-9);
        assert_eq!(numeric_verdict(i1, i2), Verdict::HasNegative);
    }
}
