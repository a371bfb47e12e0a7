//! Polynomial root finding: closed forms for degrees 1..=3 and an
//! Aberth-Ehrlich simultaneous iteration for the general case.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tol;

/// All complex roots of a degree 1..=3 polynomial via the closed forms.
pub fn closed_form_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    match p.degree() {
        1 => {
            let (a0, a1) = (p.coeff(0), p.coeff(1));
            Ok(vec![Complex64::new(-a0 / a1, 0.0)])
        }
        2 => Ok(quadratic_roots(p.coeff(0), p.coeff(1), p.coeff(2))),
        3 => Ok(cubic_roots(p.coeff(0), p.coeff(1), p.coeff(2), p.coeff(3))),
        d => Err(Error::UnsupportedDegree { degree: d }),
    }
}

fn quadratic_roots(a0: f64, a1: f64, a2: f64) -> Vec<Complex64> {
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc > 0.0 {
        // avoid cancellation: compute the large-magnitude root first
        let q = -0.5 * (a1 + a1.signum() * disc.sqrt());
        let (r1, r2) = if a1 == 0.0 {
            let r = (disc.sqrt()) / (2.0 * a2);
            (r, -r)
        } else {
            (q / a2, a0 / q)
        };
        vec![Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else if disc == 0.0 {
        let r = -a1 / (2.0 * a2);
        vec![Complex64::new(r, 0.0); 2]
    } else {
        let re = -a1 / (2.0 * a2);
        let im = (-disc).sqrt() / (2.0 * a2).abs();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn cubic_roots(a0: f64, a1: f64, a2: f64, a3: f64) -> Vec<Complex64> {
    // depressed form t^3 + p t + q with x = t - a2/(3 a3)
    let shift = a2 / (3.0 * a3);
    let b = a1 / a3;
    let c = a0 / a3;
    let p = b - 3.0 * shift * shift;
    let q = 2.0 * shift.powi(3) - shift * b + c;

    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let scale = (p.abs().max(q.abs())).max(1.0);

    let ts: Vec<Complex64> = if disc.abs() <= 1e-14 * scale * scale * scale {
        // repeated roots
        if p.abs() <= 1e-12 * scale {
            vec![Complex64::new(0.0, 0.0); 3]
        } else {
            let simple = 3.0 * q / p;
            let double = -1.5 * q / p;
            vec![
                Complex64::new(simple, 0.0),
                Complex64::new(double, 0.0),
                Complex64::new(double, 0.0),
            ]
        }
    } else if disc > 0.0 {
        // three distinct real roots: trigonometric form
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                Complex64::new(t, 0.0)
            })
            .collect()
    } else {
        // one real root, conjugate complex pair: Cardano with real radicals
        let delta = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let u = (-q / 2.0 + delta).cbrt();
        let v = (-q / 2.0 - delta).cbrt();
        let real = u + v;
        let re = -0.5 * (u + v);
        let im = 0.5 * 3f64.sqrt() * (u - v);
        vec![
            Complex64::new(real, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    };

    ts.into_iter().map(|t| t - shift).collect()
}

/// All `n` roots of a degree >= 1 polynomial by Aberth-Ehrlich iteration with
/// Newton polishing, sorted by real part then imaginary part.
///
/// Accepted roots satisfy `|p(r)| <= tol * max|a_i| * max(1,|r|)^n`; otherwise
/// the best iterate is returned inside the error.
pub fn numeric_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::UnsupportedDegree { degree: 0 });
    }

    // peel off exact roots at the origin
    let zeros_at_origin = p.coeffs().iter().take_while(|&&a| a == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if zeros_at_origin == n {
        return Ok(roots);
    }
    let reduced = Polynomial::new(p.coeffs()[zeros_at_origin..].to_vec());

    let mut inner = aberth(&reduced)?;
    symmetrize_conjugates(&reduced, &mut inner);
    for z in &mut inner {
        *z = newton_polish(&reduced, *z);
    }

    roots.append(&mut inner);
    sort_roots(&mut roots);

    let bound = residual_bound(p);
    let worst = roots
        .iter()
        .map(|&r| p.eval_complex(r).norm() / (1.0f64.max(r.norm())).powi(n as i32))
        .fold(0.0f64, f64::max);
    if worst > bound {
        return Err(Error::RootsDidNotConverge { iterations: MAX_SWEEPS, best: roots });
    }
    Ok(roots)
}

pub fn residual_bound(p: &Polynomial) -> f64 {
    tol::ROOT_RESIDUAL_REL * p.max_abs_coeff()
}

const MAX_SWEEPS: usize = 400;

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative(1);
    let lead = p.leading();

    // initial guesses on a circle inside the Cauchy bound
    let radius = 1.0
        + p.coeffs()[..n]
            .iter()
            .fold(0.0f64, |m, &a| m.max((a / lead).abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.7, angle)
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pv = p.eval_complex(z[k]);
            let dv = dp.eval_complex(z[k]);
            let newton = if dv.norm() == 0.0 {
                // sit exactly on a critical point: nudge off it
                Complex64::new(1e-8 * (1.0 + z[k].norm()), 1e-8)
            } else {
                pv / dv
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    repulsion += (z[k] - z[j]).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-12 { newton } else { newton / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            return Ok(z);
        }
    }

    // accept whatever the sweep produced if residuals are already fine
    let bound = residual_bound(p);
    let ok = z
        .iter()
        .all(|&r| p.eval_complex(r).norm() <= bound * (1.0f64.max(r.norm())).powi(n as i32));
    if ok {
        Ok(z)
    } else {
        Err(Error::RootsDidNotConverge { iterations: MAX_SWEEPS, best: z })
    }
}

fn newton_polish(p: &Polynomial, start: Complex64) -> Complex64 {
    let dp = p.derivative(1);
    let mut best = start;
    let mut best_res = p.eval_complex(best).norm();
    let mut z = start;
    for _ in 0..4 {
        let dv = dp.eval_complex(z);
        if dv.norm() == 0.0 {
            break;
        }
        z -= p.eval_complex(z) / dv;
        let res = p.eval_complex(z).norm();
        if res < best_res {
            best_res = res;
            best = z;
        } else {
            break;
        }
    }
    best
}

/// Pair approximate conjugates of a real polynomial and snap noise-level
/// imaginary parts to zero, guarded by the residual so genuine complex roots
/// are never flattened.
fn symmetrize_conjugates(p: &Polynomial, roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let zi = roots[i];
        if zi.im.abs() <= 1e-10 * (1.0 + zi.re.abs()) {
            roots[i].im = 0.0;
            used[i] = true;
            continue;
        }
        let mut mate: Option<(usize, f64)> = None;
        for (j, zj) in roots.iter().enumerate() {
            if j == i || used[j] {
                continue;
            }
            let d = (zj - zi.conj()).norm();
            if mate.map_or(true, |(_, dm)| d < dm) {
                mate = Some((j, d));
            }
        }
        if let Some((j, d)) = mate {
            if d <= 1e-6 * (1.0 + zi.norm()) {
                let mean = 0.5 * (zi + roots[j].conj());
                let old = p.eval_complex(zi).norm().max(p.eval_complex(roots[j]).norm());
                let new = p.eval_complex(mean).norm().max(p.eval_complex(mean.conj()).norm());
                if new <= 10.0 * old.max(f64::MIN_POSITIVE) {
                    roots[i] = mean;
                    roots[j] = mean.conj();
                }
                used[i] = true;
                used[j] = true;
            }
        }
    }
}

pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// Real roots of `p` strictly inside `(lo, hi)`, deduplicated.
pub fn real_roots_in(p: &Polynomial, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let roots = if p.degree() <= 3 {
        closed_form_roots(p)?
    } else {
        numeric_roots(p)?
    };
    let mut xs: Vec<f64> = roots
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .filter(|&x| x > lo && x < hi)
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Ok(xs)
}
