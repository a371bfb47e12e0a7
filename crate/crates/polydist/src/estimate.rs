//! Coefficient estimation for polynomial densities: likelihood machinery,
//! the centroid and pairwise closed-form estimators, method of moments,
//! Fisher information and the Cramér-Rao bound, plus a reference numeric
//! maximum-likelihood ascent used as the oracle for the fast estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::forms::FactoredPolynomial;
use crate::interval::Interval;
use crate::linalg;
use crate::poly::Polynomial;
use crate::tol;

/// Observations confined to a declared support interval.
#[derive(Debug, Clone)]
pub struct SampleSet {
    observations: Vec<f64>,
    support: Interval,
}

impl SampleSet {
    pub fn new(observations: Vec<f64>, support: Interval) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::ArgumentDomain {
                name: "observations",
                value: 0.0,
                expected: "at least one sample",
            });
        }
        for &x in &observations {
            if !support.contains(x) {
                return Err(Error::OutsideSupport {
                    x,
                    lower: support.lower(),
                    upper: support.upper(),
                });
            }
        }
        Ok(Self { observations, support })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// The lifted feature row `(1, x, x^2, ..., x^n)`.
    pub fn lifted_row(x: f64, degree: usize) -> DVector<f64> {
        DVector::from_iterator(degree + 1, (0..=degree).map(|i| x.powi(i as i32)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Centroid,
    Pairwise,
    MethodOfMoments,
    NumericMl,
}

impl std::fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EstimateMethod::Centroid => "centroid",
            EstimateMethod::Pairwise => "pairwise",
            EstimateMethod::MethodOfMoments => "mom",
            EstimateMethod::NumericMl => "numeric-ml",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub coefficients: Polynomial,
    pub method: EstimateMethod,
    pub log_likelihood: f64,
    pub constraint_residual: f64,
    /// Diagonal-bound matrix from `cramer_rao`, when one was computed.
    pub covariance_bound: Option<Vec<Vec<f64>>>,
    /// Pairs dropped by the pairwise estimator for numerically null
    /// normalizers.
    pub skipped_pairs: usize,
}

/// `Σ log p(x_m)`; `-inf` when the density is not positive at a sample.
pub fn log_likelihood(a: &Polynomial, s: &SampleSet) -> f64 {
    let mut acc = 0.0;
    for &x in &s.observations {
        let v = a.eval(x);
        if v <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += v.ln();
    }
    acc
}

/// Score vector `∂/∂a_i Σ log(a' x_m) = Σ x_m^i / (a' x_m)`.
pub fn score(a: &Polynomial, s: &SampleSet, degree: usize) -> Vec<f64> {
    let mut g = vec![0.0; degree + 1];
    for &x in &s.observations {
        let v = a.eval(x);
        if v <= 0.0 {
            continue;
        }
        let mut pw = 1.0;
        for gi in g.iter_mut() {
            *gi += pw / v;
            pw *= x;
        }
    }
    g
}

fn weights(degree: usize, support: &Interval) -> DVector<f64> {
    crate::fit::mass_weights(degree, support)
}

fn report_for(
    coeffs: DVector<f64>,
    method: EstimateMethod,
    s: &SampleSet,
    degree: usize,
    skipped: usize,
) -> EstimateReport {
    let w = weights(degree, &s.support);
    let residual = (w.dot(&coeffs) - 1.0).abs();
    let poly = Polynomial::new(coeffs.iter().copied().collect());
    let ll = log_likelihood(&poly, s);
    EstimateReport {
        coefficients: poly,
        method,
        log_likelihood: ll,
        constraint_residual: residual,
        covariance_bound: None,
        skipped_pairs: skipped,
    }
}

/// Centroid heuristic: the mean of the normalized lifted rows, rescaled to
/// satisfy the unit-mass constraint.
pub fn ml_centroid(s: &SampleSet, degree: usize) -> Result<EstimateReport> {
    let mut acc = DVector::zeros(degree + 1);
    for &x in &s.observations {
        let row = SampleSet::lifted_row(x, degree);
        acc += row.normalize();
    }
    acc /= s.len() as f64;

    let w = weights(degree, &s.support);
    let scale = w.dot(&acc);
    if scale.abs() < 1e-12 {
        return Err(Error::DegenerateEstimate {
            detail: "centroid cannot be rescaled to unit mass (w'a = 0)".into(),
        });
    }
    acc /= scale;
    Ok(report_for(acc, EstimateMethod::Centroid, s, degree, 0))
}

/// Pairwise constrained estimator: for each observation pair the stationary
/// point `X⁺w / (w' X⁺ w)` of the constrained pair likelihood, averaged over
/// the independent pairs. `X = x_1 x_2'` is rank one, so the Moore-Penrose
/// pseudo-inverse stands in for the literal inverse, with a ridge fallback.
pub fn ml_pairwise(s: &SampleSet, degree: usize) -> Result<EstimateReport> {
    let m = s.len();
    if m < 2 || m % 2 != 0 {
        return Err(Error::ArgumentDomain {
            name: "observations",
            value: m as f64,
            expected: "an even count >= 2",
        });
    }
    let w = weights(degree, &s.support);
    let mut acc = DVector::zeros(degree + 1);
    let mut used = 0usize;
    let mut skipped = 0usize;

    for pair in s.observations.chunks_exact(2) {
        let x1 = SampleSet::lifted_row(pair[0], degree);
        let x2 = SampleSet::lifted_row(pair[1], degree);
        let x = &x1 * x2.transpose();

        let mut estimate: Option<DVector<f64>> = None;
        if let Ok(pinv) = linalg::pseudo_inverse(&x, 1e-12) {
            let xw = &pinv * &w;
            let denom = w.dot(&xw);
            if denom.abs() > 1e-12 * xw.norm().max(1e-300) {
                estimate = Some(xw / denom);
            }
        }
        if estimate.is_none() {
            // diagonal ridge keeps the normalizer away from zero
            let ridged = &x + DMatrix::identity(degree + 1, degree + 1) * 1e-10;
            if let Some(inv) = ridged.try_inverse() {
                let xw = &inv * &w;
                let denom = w.dot(&xw);
                if denom.abs() > 1e-300 {
                    estimate = Some(xw / denom);
                }
            }
        }
        match estimate {
            Some(e) => {
                acc += e;
                used += 1;
            }
            None => skipped += 1,
        }
    }

    if used == 0 {
        return Err(Error::DegenerateEstimate {
            detail: "every observation pair was skipped".into(),
        });
    }
    acc /= used as f64;
    Ok(report_for(acc, EstimateMethod::Pairwise, s, degree, skipped))
}

/// Method of moments: matches the first `K` general moments through the
/// same constrained least-squares machinery as histogram fitting, with
/// `B[k][i] = (u^{i+k+1} - l^{i+k+1})/(i+k+1)`.
pub fn method_of_moments(
    moments: &[f64],
    degree: usize,
    support: &Interval,
) -> Result<EstimateReport> {
    let k = moments.len();
    if k < degree {
        return Err(Error::ArgumentDomain {
            name: "moments",
            value: k as f64,
            expected: "at least `degree` moments",
        });
    }
    let (l, u) = (support.lower(), support.upper());
    let design = DMatrix::from_fn(k, degree + 1, |row, col| {
        let e = (row + 1 + col + 1) as i32; // moment k+1 = row+1, power col
        (u.powi(e) - l.powi(e)) / e as f64
    });
    let rhs = DVector::from_column_slice(moments);
    let w = weights(degree, support);

    let solution = linalg::constrained_least_squares(&design, &rhs, &w)?;
    let poly = Polynomial::new(solution.coeffs.iter().copied().collect());
    let residual = (w.dot(&solution.coeffs) - 1.0).abs();
    Ok(EstimateReport {
        coefficients: poly,
        method: EstimateMethod::MethodOfMoments,
        log_likelihood: f64::NAN,
        constraint_residual: residual,
        covariance_bound: None,
        skipped_pairs: 0,
    })
}

/// Sample moments `1/M Σ x_m^k` for k = 1..=K.
pub fn sample_moments(s: &SampleSet, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| {
            s.observations.iter().map(|x| x.powi(k as i32)).sum::<f64>() / s.len() as f64
        })
        .collect()
}

/// Fisher information of the root parameters of a factored density:
/// `J_ij = ∫ a_n Π_{k ∉ {i,j}} (x - r_k) dx`, evaluated exactly by
/// converting the reduced product to coefficient form.
pub fn fisher_information(f: &FactoredPolynomial, support: &Interval) -> Result<DMatrix<f64>> {
    let n = f.degree();
    for r in f.roots() {
        if r.im.abs() > tol::CONJUGATE_PAIR_TOL * (1.0 + r.norm()) {
            return Err(Error::ArgumentDomain {
                name: "roots",
                value: r.im,
                expected: "real root parameters",
            });
        }
    }
    let mut j = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut reduced = Polynomial::constant(f.leading());
            for (k, root) in f.roots().iter().enumerate() {
                if k != a && k != b {
                    reduced = &reduced * &Polynomial::new(vec![-root.re, 1.0]);
                }
            }
            let v = reduced.definite_integral(support);
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    Ok(j)
}

/// Cramér-Rao bound `J⁻¹`, requiring `J` symmetric positive definite.
pub fn cramer_rao(j: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if j.nrows() != j.ncols() {
        return Err(Error::BoundUnavailable);
    }
    let sym_gap = (j - j.transpose()).abs().max();
    if sym_gap > 1e-9 * (1.0 + j.abs().max()) {
        return Err(Error::BoundUnavailable);
    }
    let chol = j.clone().cholesky().ok_or(Error::BoundUnavailable)?;
    Ok(chol.inverse())
}

/// Reference numeric ML: projected gradient ascent on the constraint
/// manifold `{w'a = 1}` with backtracking line search, started from the
/// centroid heuristic. This is the oracle the closed-form estimators are
/// compared against.
pub fn ml_numeric(s: &SampleSet, degree: usize, max_iterations: usize) -> Result<EstimateReport> {
    let start = ml_centroid(s, degree)?;
    let w = weights(degree, &s.support);
    let wtw = w.dot(&w);

    let mut a = DVector::from_iterator(
        degree + 1,
        (0..=degree).map(|i| start.coefficients.coeff(i)),
    );
    let mut ll = start.log_likelihood;

    // the centroid can sit outside the feasible region; nudge toward uniform
    if !ll.is_finite() {
        let uniform = &w / wtw;
        let mut t = 1.0;
        while t > 1e-12 {
            let cand = &a * (1.0 - t) + &uniform * t;
            let cand_poly = Polynomial::new(cand.iter().copied().collect());
            let cand_ll = log_likelihood(&cand_poly, s);
            if cand_ll.is_finite() {
                a = cand;
                ll = cand_ll;
                break;
            }
            t *= 0.5;
        }
        if !ll.is_finite() {
            a = uniform;
            let poly = Polynomial::new(a.iter().copied().collect());
            ll = log_likelihood(&poly, s);
        }
    }

    for _ in 0..max_iterations {
        let poly = Polynomial::new(a.iter().copied().collect());
        let raw = DVector::from_vec(score(&poly, s, degree));
        let tangent = &raw - &w * (w.dot(&raw) / wtw);
        let gnorm = tangent.norm();
        if gnorm <= 1e-6 * (1.0 + ll.abs()) {
            break;
        }
        let mut step = 1.0 / (1.0 + gnorm);
        let mut advanced = false;
        while step > 1e-14 {
            let cand = &a + &tangent * step;
            let cand_poly = Polynomial::new(cand.iter().copied().collect());
            let cand_ll = log_likelihood(&cand_poly, s);
            if cand_ll.is_finite() && cand_ll > ll {
                a = cand;
                ll = cand_ll;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }

    Ok(report_for(a, EstimateMethod::NumericMl, s, degree, 0))
}
