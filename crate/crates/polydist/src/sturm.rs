//! Sturm chains and real-root counting.

use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::tol;

/// Remainders this small relative to the renormalized chain scale end it.
const CHAIN_ZERO: f64 = 1e-11;

/// The signed remainder chain `p, p', -rem(p_{k-1}, p_k), ...`, each member
/// renormalized to unit max-coefficient to limit growth. The chain stops at
/// the (numerical) GCD, which still counts distinct roots of `p`.
pub fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = Vec::with_capacity(p.degree() + 1);
    let p0 = normalize(p);
    let p1 = normalize(&p0.derivative(1));
    chain.push(p0);
    if p1.is_zero() {
        return chain;
    }
    chain.push(p1);
    loop {
        let a = &chain[chain.len() - 2];
        let b = &chain[chain.len() - 1];
        if b.degree() == 0 {
            break;
        }
        let rem = poly_remainder(a, b);
        if rem.max_abs_coeff() <= CHAIN_ZERO {
            break;
        }
        chain.push(normalize(&rem.scale(-1.0)));
    }
    chain
}

fn normalize(p: &Polynomial) -> Polynomial {
    let m = p.max_abs_coeff();
    if m == 0.0 {
        Polynomial::zero()
    } else {
        p.scale(1.0 / m)
    }
}

/// Remainder of `a / b` by long division; degrees are small so the naive
/// schoolbook scheme is fine.
fn poly_remainder(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut rem: Vec<f64> = a.coeffs().to_vec();
    let db = b.degree();
    let lead = b.leading();
    while rem.len() > db {
        let k = rem.len() - 1;
        let factor = rem[k] / lead;
        for j in 0..=db {
            rem[k - db + j] -= factor * b.coeff(j);
        }
        rem.pop();
    }
    Polynomial::new(rem)
}

fn sign_variations(chain: &[Polynomial], x: f64) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for member in chain {
        let v = member.eval(x);
        if v == 0.0 {
            continue;
        }
        let positive = v > 0.0;
        if let Some(prev) = last {
            if prev != positive {
                count += 1;
            }
        }
        last = Some(positive);
    }
    count
}

/// Number of distinct real roots of `p` in the open interval, via the
/// difference of sign variations. Endpoints that happen to be roots are
/// displaced inward by `1e-12 * width` before counting.
pub fn sturm_count(p: &Polynomial, iv: &Interval) -> usize {
    let chain = sturm_chain(p);
    sturm_count_with(&chain, p, iv.lower(), iv.upper())
}

/// Same as [`sturm_count`], reusing a prebuilt chain.
pub fn sturm_count_with(chain: &[Polynomial], p: &Polynomial, lo: f64, hi: f64) -> usize {
    let width = hi - lo;
    let shift = tol::ENDPOINT_SHIFT_REL * width;
    let near_root = |x: f64| p.eval(x).abs() <= tol::COEFF_TRIM_REL * p.max_abs_coeff().max(1e-300);

    let mut a = lo;
    let mut b = hi;
    for _ in 0..8 {
        if near_root(a) {
            a += shift;
        } else {
            break;
        }
    }
    for _ in 0..8 {
        if near_root(b) {
            b -= shift;
        } else {
            break;
        }
    }
    if a >= b {
        return 0;
    }
    let va = sign_variations(chain, a);
    let vb = sign_variations(chain, b);
    va.saturating_sub(vb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(l: f64, u: f64) -> Interval {
        Interval::new(l, u).unwrap()
    }

    #[test]
    fn counts_single_root() {
        // x^2 - 2 has one root in (0, 2)
        let p = Polynomial::new(vec![-2.0, 0.0, 1.0]);
        assert_eq!(sturm_count(&p, &iv(0.0, 2.0)), 1);
    }

    #[test]
    fn counts_two_roots() {
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]);
        assert_eq!(sturm_count(&p, &iv(0.0, 3.0)), 2);
    }

    #[test]
    fn no_real_roots() {
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]);
        assert_eq!(sturm_count(&p, &iv(-10.0, 10.0)), 0);
    }

    #[test]
    fn endpoint_root_is_excluded() {
        // roots at 1 and 2; interval (1, 3) must count only x = 2
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]);
        assert_eq!(sturm_count(&p, &iv(1.0, 3.0)), 1);
    }

    #[test]
    fn multiple_roots_counted_once() {
        // (x - 1)^2 (x - 2): distinct roots {1, 2}
        let p = &Polynomial::new(vec![1.0, -2.0, 1.0]) * &Polynomial::new(vec![-2.0, 1.0]);
        assert_eq!(sturm_count(&p, &iv(0.0, 3.0)), 2);
    }

    #[test]
    fn matches_brute_force_scan() {
        // x^2 - 2 on (0, 2): scan 1e5 points for sign changes
        let p = Polynomial::new(vec![-2.0, 0.0, 1.0]);
        let interval = iv(0.0, 2.0);
        let grid = interval.grid(100_000);
        let mut changes = 0;
        for w in grid.windows(2) {
            if p.eval(w[0]).signum() != p.eval(w[1]).signum() {
                changes += 1;
            }
        }
        assert_eq!(sturm_count(&p, &interval), changes);
    }
}
