//! Dense solvers shared by the fitting and estimation modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;

pub(crate) struct ConstrainedLsq {
    pub coeffs: DVector<f64>,
    /// Multiplier of the eliminated mass constraint.
    #[allow(dead_code)]
    pub lambda: f64,
    pub kkt_residual: f64,
}

/// Solves `min ||rhs - design a||^2  s.t.  w' a = 1` by null-space
/// projection: `a = a0 + Z v` with `a0 = w / (w'w)` and `Z` an orthonormal
/// basis of the constraint's null space, then an SVD least-squares solve in
/// the reduced variables. The multiplier of the eliminated constraint is
/// recovered for the KKT residual report.
pub(crate) fn constrained_least_squares(
    design: &DMatrix<f64>,
    rhs: &DVector<f64>,
    w: &DVector<f64>,
) -> Result<ConstrainedLsq> {
    let dim = w.len();
    assert_eq!(design.ncols(), dim);

    let a0 = w / w.dot(w);
    if dim == 1 {
        // the constraint fully determines the single coefficient
        let gradient = design.transpose() * (design * &a0 - rhs) * 2.0;
        let lambda = -w.dot(&gradient) / w.dot(w);
        return Ok(ConstrainedLsq {
            coeffs: a0,
            lambda,
            kkt_residual: 0.0,
        });
    }
    let z = null_space_basis(w);
    let reduced = design * &z;
    let target = rhs - design * &a0;

    let svd = reduced.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > tol::MAX_CONDITION {
        return Err(Error::IllConditioned { cond: condition });
    }
    let v = svd
        .solve(&target, smax * 1e-14)
        .map_err(|_| Error::IllConditioned { cond: condition })?;
    let coeffs = &a0 + &z * v;

    let gradient = design.transpose() * (design * &coeffs - rhs) * 2.0;
    let lambda = -w.dot(&gradient) / w.dot(w);
    let kkt = &gradient + w * lambda;
    let scale = 1.0f64.max((design.transpose() * rhs).norm() * 2.0);
    Ok(ConstrainedLsq {
        coeffs,
        lambda,
        kkt_residual: kkt.norm() / scale,
    })
}

/// Orthonormal basis of `{ x : w' x = 0 }` by Gram-Schmidt completion.
fn null_space_basis(w: &DVector<f64>) -> DMatrix<f64> {
    let dim = w.len();
    let mut basis: Vec<DVector<f64>> = vec![w.normalize()];
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[k] = 1.0;
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-10 {
            basis.push(v / norm);
        }
    }
    let mut z = DMatrix::zeros(dim, dim - 1);
    for (col, b) in basis.iter().skip(1).enumerate() {
        z.column_mut(col).copy_from(b);
    }
    z
}

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
pub(crate) fn pseudo_inverse(m: &DMatrix<f64>, rel_tol: f64) -> Result<DMatrix<f64>> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    m.clone()
        .pseudo_inverse(smax * rel_tol)
        .map_err(|_| Error::BoundUnavailable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constraint_always_holds() {
        let design = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let rhs = DVector::from_vec(vec![1.0, 2.0, 2.5]);
        let w = DVector::from_vec(vec![1.0, 0.5]);
        let sol = constrained_least_squares(&design, &rhs, &w).unwrap();
        assert_abs_diff_eq!(w.dot(&sol.coeffs), 1.0, epsilon = 1e-12);
        assert!(sol.kkt_residual <= 1e-10);
    }

    #[test]
    fn exact_data_is_recovered() {
        // rhs generated by a = (0.4, 1.2) with w chosen so w'a = 1
        let a_true = DVector::from_vec(vec![0.4, 1.2]);
        let design = DMatrix::from_row_slice(4, 2, &[1.0, -1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let rhs = &design * &a_true;
        let w = DVector::from_vec(vec![1.0, 0.5]);
        let sol = constrained_least_squares(&design, &rhs, &w).unwrap();
        assert_abs_diff_eq!(sol.coeffs[0], 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.coeffs[1], 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.lambda, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn rank_deficiency_reported() {
        let design = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let rhs = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let w = DVector::from_vec(vec![1.0, -1.0]);
        // reduced direction is parallel to the degenerate column space
        let out = constrained_least_squares(&design, &rhs, &w);
        // either an ill-conditioning error or a solution with the constraint met
        if let Ok(sol) = out {
            assert_abs_diff_eq!(w.dot(&sol.coeffs), 1.0, epsilon = 1e-10);
        }
    }
}
