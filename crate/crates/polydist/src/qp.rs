//! Minimal-norm quadratic programs with equality and inequality constraints.
//!
//! Solves `min <a, a>` subject to `E a = e` and `G a >= h` with a small
//! active-set loop: the working set starts empty, the most violated sample
//! constraint is promoted to an equality, and constraints with negative
//! multipliers are dropped. Problem sizes here are tiny (tens of unknowns),
//! so every subproblem is solved directly through the normal equations of
//! the stacked constraint matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) struct QpSolution {
    pub x: DVector<f64>,
    /// Indices of inequality rows active at the solution.
    #[allow(dead_code)]
    pub active: Vec<usize>,
    /// `max(0, h - G x)` over all inequality rows at exit.
    pub worst_violation: f64,
}

/// Minimum-norm least-squares point of `{ C a = d }`:
/// `a = C' (C C')^+ d`, with the multiplier vector `u = (C C')^+ d`
/// (so `2a = C' (2u)`). The returned flag reports whether the system was
/// actually consistent; an inconsistent working set is the caller's cue to
/// drop a constraint.
fn min_norm_point(c: &DMatrix<f64>, d: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>, bool)> {
    if c.nrows() == 0 {
        return Ok((DVector::zeros(c.ncols()), DVector::zeros(0), true));
    }
    let gram = c * c.transpose();
    let cutoff = 1e-12 * gram.abs().max().max(1e-300);
    let pinv = gram
        .pseudo_inverse(cutoff)
        .map_err(|_| Error::Infeasible { iterations: 0, violated: 0 })?;
    let u = &pinv * d;
    let x = c.transpose() * &u;
    let residual = (c * &x - d).norm();
    let consistent = residual <= 1e-8 * (1.0 + d.norm());
    Ok((x, u, consistent))
}

pub(crate) fn min_norm_qp(
    eq: &DMatrix<f64>,
    eq_rhs: &DVector<f64>,
    ineq: &DMatrix<f64>,
    ineq_rhs: &DVector<f64>,
    max_iterations: usize,
    feasibility_tol: f64,
) -> Result<QpSolution> {
    let n_ineq = ineq.nrows();
    let mut active: Vec<usize> = Vec::new();

    for _sweep in 0..max_iterations {
        let rows = eq.nrows() + active.len();
        let mut c = DMatrix::zeros(rows, eq.ncols());
        let mut d = DVector::zeros(rows);
        c.rows_mut(0, eq.nrows()).copy_from(eq);
        d.rows_mut(0, eq.nrows()).copy_from(eq_rhs);
        for (slot, &j) in active.iter().enumerate() {
            c.row_mut(eq.nrows() + slot).copy_from(&ineq.row(j));
            d[eq.nrows() + slot] = ineq_rhs[j];
        }

        let (x, u, consistent) = min_norm_point(&c, &d)?;

        if !consistent {
            // the working set over-constrains the space: shed the most
            // negative multiplier; with none to shed the program itself is
            // contradictory
            let mut drop: Option<(usize, f64)> = None;
            for (slot, &j) in active.iter().enumerate() {
                let mu = 2.0 * u[eq.nrows() + slot];
                if drop.map_or(true, |(_, m)| mu < m) {
                    drop = Some((j, mu));
                }
            }
            match drop {
                Some((j, mu)) if mu < 0.0 => {
                    active.retain(|&k| k != j);
                    continue;
                }
                _ => return Err(Error::Infeasible { iterations: 0, violated: 1 }),
            }
        }

        // multipliers of active inequalities must be non-negative
        let mut drop: Option<(usize, f64)> = None;
        for (slot, &j) in active.iter().enumerate() {
            let mu = 2.0 * u[eq.nrows() + slot];
            if mu < -1e-9 && drop.map_or(true, |(_, m)| mu < m) {
                drop = Some((j, mu));
            }
        }
        if let Some((j, _)) = drop {
            active.retain(|&k| k != j);
            continue;
        }

        // most violated inactive inequality
        let mut worst: Option<(usize, f64)> = None;
        for j in 0..n_ineq {
            if active.contains(&j) {
                continue;
            }
            let slack = (ineq.row(j) * &x)[0] - ineq_rhs[j];
            if slack < -feasibility_tol && worst.map_or(true, |(_, s)| slack < s) {
                worst = Some((j, slack));
            }
        }
        if let Some((j, _)) = worst {
            active.push(j);
            continue;
        }

        let worst_violation = (0..n_ineq)
            .map(|j| ineq_rhs[j] - (ineq.row(j) * &x)[0])
            .fold(0.0f64, f64::max);
        return Ok(QpSolution { x, active, worst_violation });
    }

    let violated = {
        // report how many constraints the last working set leaves unmet
        let rows = eq.nrows() + active.len();
        let mut c = DMatrix::zeros(rows, eq.ncols());
        let mut d = DVector::zeros(rows);
        c.rows_mut(0, eq.nrows()).copy_from(eq);
        d.rows_mut(0, eq.nrows()).copy_from(eq_rhs);
        for (slot, &j) in active.iter().enumerate() {
            c.row_mut(eq.nrows() + slot).copy_from(&ineq.row(j));
            d[eq.nrows() + slot] = ineq_rhs[j];
        }
        match min_norm_point(&c, &d) {
            Ok((x, _, _)) => (0..n_ineq)
                .filter(|&j| (ineq.row(j) * &x)[0] - ineq_rhs[j] < -feasibility_tol)
                .count(),
            Err(_) => n_ineq,
        }
    };
    Err(Error::Infeasible { iterations: max_iterations, violated })
}
