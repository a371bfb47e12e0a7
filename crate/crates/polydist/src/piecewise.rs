//! Piecewise polynomial densities.
//!
//! Two roles share the [`PiecewisePdf`] container: outputs of operations
//! that are naturally piecewise (convolutions, absolute-value and clipped
//! constructions), and the control-point construction that threads a
//! C-smooth density of fixed degree through prescribed alternating
//! minima and maxima by solving one small quadratic program per segment.

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::nonneg::{self, Verdict};
use crate::pdf::Density;
use crate::poly::Polynomial;
use crate::qp;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumLabel {
    Min,
    Max,
}

impl ExtremumLabel {
    fn sign(self) -> f64 {
        match self {
            ExtremumLabel::Min => 1.0,
            ExtremumLabel::Max => -1.0,
        }
    }

    fn opposite(self) -> ExtremumLabel {
        match self {
            ExtremumLabel::Min => ExtremumLabel::Max,
            ExtremumLabel::Max => ExtremumLabel::Min,
        }
    }
}

/// Prescribed `(x_i, y_i)` pairs with alternating min/max labels; the first
/// and last abscissae define the support.
#[derive(Debug, Clone)]
pub struct ControlPoints {
    xs: Vec<f64>,
    ys: Vec<f64>,
    labels: Vec<ExtremumLabel>,
}

impl ControlPoints {
    pub fn new(points: &[(f64, f64)], labels: &[ExtremumLabel]) -> Result<Self> {
        if points.len() < 2 || labels.len() != points.len() {
            return Err(Error::LabelsNotAlternating);
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::DuplicateAbscissa { x: w[1].0 });
            }
        }
        for &(x, y) in points {
            if !x.is_finite() || !y.is_finite() || y < 0.0 {
                return Err(Error::ArgumentDomain {
                    name: "y",
                    value: y,
                    expected: "finite and >= 0",
                });
            }
        }
        for w in labels.windows(2) {
            if w[1] != w[0].opposite() {
                return Err(Error::LabelsNotAlternating);
            }
        }
        Ok(Self {
            xs: points.iter().map(|p| p.0).collect(),
            ys: points.iter().map(|p| p.1).collect(),
            labels: labels.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn labels(&self) -> &[ExtremumLabel] {
        &self.labels
    }

    pub fn support(&self) -> Result<Interval> {
        Interval::new(self.xs[0], *self.xs.last().unwrap())
    }

    /// Number of segments (`M`), one less than the point count.
    pub fn segment_count(&self) -> usize {
        self.xs.len() - 1
    }
}

/// The `(C+1) x (n+1)` matrix whose k-th row evaluates the k-th derivative
/// of a degree-n polynomial at `x0`, in descending power order
/// `[x0^n, x0^{n-1}, ..., x0, 1]` for k = 0.
pub fn smoothness_matrix(x0: f64, degree: usize, order: usize) -> Result<DMatrix<f64>> {
    if order >= degree {
        return Err(Error::InfeasibleOrder {
            order,
            degree,
            needed: order + 1,
        });
    }
    let n = degree;
    let mut m = DMatrix::zeros(order + 1, n + 1);
    for k in 0..=order {
        for col in 0..=n {
            let p = n - col; // power represented by this column
            if p >= k {
                let factor: f64 = ((p - k + 1)..=p).map(|v| v as f64).product();
                m[(k, col)] = factor * x0.powi((p - k) as i32);
            }
        }
    }
    Ok(m)
}

fn descending_to_poly(v: &DVector<f64>) -> Polynomial {
    Polynomial::new(v.iter().rev().copied().collect())
}

/// Each segment is solved in its own local coordinate `u ∈ (-1, 1)`; the
/// minimal-norm objective is then invariant under mirroring a segment
/// (`u -> -u` only flips coefficient signs), so symmetric control points
/// produce exactly mirrored segments, and the collocation rows stay well
/// conditioned.
struct LocalBasis {
    mid: f64,
    half: f64,
}

impl LocalBasis {
    fn for_cell(x_lo: f64, x_hi: f64) -> Self {
        Self {
            mid: 0.5 * (x_lo + x_hi),
            half: 0.5 * (x_hi - x_lo),
        }
    }

    fn local(&self, x: f64) -> f64 {
        (x - self.mid) / self.half
    }

    /// Row evaluating the k-th x-space derivative at local coordinate `u`,
    /// against descending local coefficients.
    fn derivative_row(&self, u: f64, n: usize, k: usize) -> RowDVector<f64> {
        let scale = self.half.powi(k as i32);
        RowDVector::from_iterator(
            n + 1,
            (0..=n).rev().map(|p| {
                if p >= k {
                    let factor: f64 = ((p - k + 1)..=p).map(|v| v as f64).product();
                    factor * u.powi((p - k) as i32) / scale
                } else {
                    0.0
                }
            }),
        )
    }

    fn to_x_space(&self, descending: &DVector<f64>) -> Polynomial {
        let local = descending_to_poly(descending);
        local.compose_affine(1.0 / self.half, -self.mid / self.half)
    }
}

struct SegmentProblem<'a> {
    cp: &'a ControlPoints,
    degree: usize,
    order: usize,
    samples: usize,
    margin: f64,
}

impl SegmentProblem<'_> {
    /// With smoothness of order >= 1, a labeled extremum at an interior knot
    /// forces the density slope to vanish there; the strict signed-slope
    /// samples then apply only away from such knots.
    fn pinned_endpoints(&self, seg: usize) -> (bool, bool) {
        if self.order == 0 {
            return (false, false);
        }
        (seg > 0, seg + 1 < self.cp.segment_count())
    }

    /// Monotonicity rows: the segment rising from a min (falling from a max)
    /// must keep a signed x-space slope of at least `margin` at the K
    /// equidistant samples, except at endpoints pinned to zero slope.
    fn inequality_rows(&self, seg: usize, basis: &LocalBasis) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.degree;
        let k = self.samples;
        let (x_lo, x_hi) = (self.cp.xs[seg], self.cp.xs[seg + 1]);
        let step = (x_hi - x_lo) / (k - 1) as f64;
        let sign = self.cp.labels[seg].sign();
        let (pin_lo, pin_hi) = self.pinned_endpoints(seg);
        let mut samples = Vec::with_capacity(k);
        for idx in 0..k {
            if (idx == 0 && pin_lo) || (idx == k - 1 && pin_hi) {
                continue;
            }
            samples.push(x_lo + step * idx as f64);
        }
        let mut g = DMatrix::zeros(samples.len(), n + 1);
        let mut h = DVector::zeros(samples.len());
        for (row, &x) in samples.iter().enumerate() {
            let slope = basis.derivative_row(basis.local(x), n, 1);
            g.row_mut(row).copy_from(&(slope * sign));
            h[row] = self.margin;
        }
        (g, h)
    }

    fn solve(&self, seg: usize, previous: Option<&Polynomial>) -> Result<Polynomial> {
        let n = self.degree;
        let (x_lo, x_hi) = (self.cp.xs[seg], self.cp.xs[seg + 1]);
        let (y_lo, y_hi) = (self.cp.ys[seg], self.cp.ys[seg + 1]);
        let (pin_lo, pin_hi) = self.pinned_endpoints(seg);
        let basis = LocalBasis::for_cell(x_lo, x_hi);

        let mut eq_rows: Vec<(RowDVector<f64>, f64)> = vec![
            (basis.derivative_row(-1.0, n, 0), y_lo),
            (basis.derivative_row(1.0, n, 0), y_hi),
        ];
        if pin_lo {
            eq_rows.push((basis.derivative_row(-1.0, n, 1), 0.0));
        }
        if pin_hi {
            eq_rows.push((basis.derivative_row(1.0, n, 1), 0.0));
        }
        if let Some(prev) = previous {
            // match x-space derivatives 0..=C of the previous segment at
            // the shared knot
            let mut target = prev.clone();
            for k in 0..=self.order {
                let value = target.eval(x_lo);
                eq_rows.push((basis.derivative_row(-1.0, n, k), value));
                if k < self.order {
                    target = target.derivative(1);
                }
            }
        }
        let mut eq = DMatrix::zeros(eq_rows.len(), n + 1);
        let mut rhs = DVector::zeros(eq_rows.len());
        for (i, (row, value)) in eq_rows.iter().enumerate() {
            eq.row_mut(i).copy_from(row);
            rhs[i] = *value;
        }

        let (g, h) = self.inequality_rows(seg, &basis);
        let y_scale = self.cp.ys.iter().fold(0.0f64, |m, y| m.max(*y)).max(1.0);
        let solution = qp::min_norm_qp(&eq, &rhs, &g, &h, 10 * (n + 1), 1e-9 * y_scale)?;

        // interpolation and monotonicity residuals are part of the contract
        let worst_eq = (&eq * &solution.x - &rhs).abs().max();
        if worst_eq > 1e-8 * y_scale {
            return Err(Error::PostconditionFailed {
                what: "segment interpolation",
                residual: worst_eq,
            });
        }
        if solution.worst_violation > 1e-8 * y_scale {
            return Err(Error::PostconditionFailed {
                what: "signed monotonicity",
                residual: solution.worst_violation,
            });
        }
        Ok(basis.to_x_space(&solution.x))
    }
}

/// First-segment program: interpolate `(x_1, y_1)`, `(x_2, y_2)` with the
/// minimal-norm coefficient vector whose signed slope stays positive at K
/// equidistant samples.
pub fn solve_first_segment(
    cp: &ControlPoints,
    degree: usize,
    order: usize,
    samples: usize,
) -> Result<Polynomial> {
    check_problem(cp, degree, order, samples)?;
    segment_problem(cp, degree, order, samples).solve(0, None)
}

/// Follow-up segments additionally match derivatives 0..=C of the previous
/// segment at the shared knot.
pub fn solve_next_segment(
    previous: &Polynomial,
    seg: usize,
    cp: &ControlPoints,
    degree: usize,
    order: usize,
    samples: usize,
) -> Result<Polynomial> {
    check_problem(cp, degree, order, samples)?;
    if seg == 0 || seg >= cp.segment_count() {
        return Err(Error::ArgumentDomain {
            name: "seg",
            value: seg as f64,
            expected: "1 <= seg < segment count",
        });
    }
    segment_problem(cp, degree, order, samples).solve(seg, Some(previous))
}

fn segment_problem(
    cp: &ControlPoints,
    degree: usize,
    order: usize,
    samples: usize,
) -> SegmentProblem<'_> {
    let y_max = cp.ys.iter().fold(0.0f64, |m, y| m.max(*y));
    SegmentProblem {
        cp,
        degree,
        order,
        samples,
        margin: tol::QP_MARGIN_REL * y_max.max(1.0),
    }
}

fn check_problem(cp: &ControlPoints, degree: usize, order: usize, samples: usize) -> Result<()> {
    if degree < order + 3 {
        return Err(Error::InfeasibleOrder {
            order,
            degree,
            needed: order + 3,
        });
    }
    if samples < 2 {
        return Err(Error::ArgumentDomain {
            name: "samples",
            value: samples as f64,
            expected: ">= 2",
        });
    }
    let _ = cp;
    Ok(())
}

/// An ordered, contiguous sequence of polynomial segments forming a density.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePdf {
    segments: Vec<(Polynomial, Interval)>,
    smoothness: usize,
    signs: Vec<i8>,
}

impl PiecewisePdf {
    /// Validates contiguity: consecutive segment intervals must share their
    /// endpoint exactly (to interval-width precision).
    pub fn from_segments(segments: Vec<(Polynomial, Interval)>, smoothness: usize) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::DegenerateMass);
        }
        for pair in segments.windows(2) {
            let gap = (pair[0].1.upper() - pair[1].1.lower()).abs();
            if gap > 1e-12 * pair[0].1.width().max(1.0) {
                return Err(Error::Format {
                    detail: format!(
                        "segments not contiguous at x = {} (gap {gap:e})",
                        pair[0].1.upper()
                    ),
                });
            }
        }
        Ok(Self { segments, smoothness, signs: Vec::new() })
    }

    pub fn segments(&self) -> &[(Polynomial, Interval)] {
        &self.segments
    }

    pub fn smoothness(&self) -> usize {
        self.smoothness
    }

    /// Segment orientation signs from the construction; empty for piecewise
    /// densities assembled by other operations.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.segments.iter().map(|s| s.1.lower()).collect();
        k.push(self.segments.last().unwrap().1.upper());
        k
    }

    fn segment_index(&self, x: f64) -> Option<usize> {
        let support = self.support();
        if x < support.lower() || x > support.upper() {
            return None;
        }
        let idx = self
            .segments
            .partition_point(|(_, iv)| iv.upper() < x)
            .min(self.segments.len() - 1);
        Some(idx)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.segment_index(x) {
            Some(i) => self.segments[i].0.eval(x),
            None => 0.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.segments.iter().map(|(p, iv)| p.definite_integral(iv)).sum()
    }

    pub fn moment(&self, k: usize) -> f64 {
        self.segments.iter().map(|(p, iv)| p.moment_integral(k, iv)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.moment(1);
        self.moment(2) - m * m
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|(p, iv)| (p.scale(factor), *iv))
                .collect(),
            smoothness: self.smoothness,
            signs: self.signs.clone(),
        }
    }

    /// CDF by accumulating per-segment integrals left to right.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let support = self.support();
        if !support.contains(x) {
            return Err(Error::OutsideSupport {
                x,
                lower: support.lower(),
                upper: support.upper(),
            });
        }
        Ok(self.cumulative(x))
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ArgumentDomain {
                name: "q",
                value: q,
                expected: "0 < q < 1",
            });
        }
        let support = self.support();
        let (mut lo, mut hi) = (support.lower(), support.upper());
        while hi - lo > tol::QUANTILE_WIDTH * support.width() {
            let mid = 0.5 * (lo + hi);
            if self.cumulative(mid) >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Sturm-certifies every segment; the first negative segment fails.
    pub fn certify_segments(&self) -> Result<()> {
        for (p, iv) in &self.segments {
            let report = nonneg::certify_nonneg_sturm(p, iv);
            if report.verdict != Verdict::NonNegative {
                return Err(Error::Negative { report });
            }
        }
        Ok(())
    }
}

impl Density for PiecewisePdf {
    fn support(&self) -> Interval {
        let lo = self.segments[0].1.lower();
        let hi = self.segments.last().unwrap().1.upper();
        Interval::new(lo, hi).expect("segments span a valid interval")
    }

    fn density(&self, x: f64) -> f64 {
        self.eval(x).max(0.0)
    }

    fn cumulative(&self, x: f64) -> f64 {
        let support = self.support();
        if x <= support.lower() {
            return 0.0;
        }
        if x >= support.upper() {
            return 1.0;
        }
        let mut acc = 0.0;
        for (p, iv) in &self.segments {
            if x >= iv.upper() {
                acc += p.definite_integral(iv);
            } else {
                if x > iv.lower() {
                    if let Ok(part) = Interval::new(iv.lower(), x) {
                        acc += p.definite_integral(&part);
                    }
                }
                break;
            }
        }
        acc.clamp(0.0, 1.0)
    }
}

/// Assembles the control-point construction: per-segment quadratic programs
/// left to right, then uniform rescaling to unit mass, then verification of
/// interpolation, knot continuity, and per-segment non-negativity.
pub fn build(cp: &ControlPoints, degree: usize, order: usize, samples: usize) -> Result<PiecewisePdf> {
    check_problem(cp, degree, order, samples)?;
    let m = cp.segment_count();
    let mut polys: Vec<Polynomial> = Vec::with_capacity(m);
    polys.push(solve_first_segment(cp, degree, order, samples)?);
    for seg in 1..m {
        let prev = polys[seg - 1].clone();
        polys.push(solve_next_segment(&prev, seg, cp, degree, order, samples)?);
    }

    let segments: Vec<(Polynomial, Interval)> = polys
        .into_iter()
        .enumerate()
        .map(|(i, p)| Ok((p, Interval::new(cp.xs[i], cp.xs[i + 1])?)))
        .collect::<Result<_>>()?;

    let mut pdf = PiecewisePdf {
        segments,
        smoothness: order,
        signs: cp.labels[..m].iter().map(|l| l.sign() as i8).collect(),
    };

    verify_construction(&pdf, cp, order)?;

    let mass = pdf.mass();
    if mass <= 0.0 {
        return Err(Error::DegenerateMass);
    }
    pdf = pdf.scaled(1.0 / mass);
    pdf.certify_segments()?;
    Ok(pdf)
}

/// Pre-normalization checks: exact interpolation at control points and
/// derivative continuity to order C at interior knots.
fn verify_construction(pdf: &PiecewisePdf, cp: &ControlPoints, order: usize) -> Result<()> {
    let y_scale = cp.ys.iter().fold(1.0f64, |m, y| m.max(*y));
    for (i, (p, iv)) in pdf.segments.iter().enumerate() {
        let at_lo = (p.eval(iv.lower()) - cp.ys[i]).abs();
        let at_hi = (p.eval(iv.upper()) - cp.ys[i + 1]).abs();
        if at_lo > 1e-8 * y_scale || at_hi > 1e-8 * y_scale {
            return Err(Error::PostconditionFailed {
                what: "control-point interpolation",
                residual: at_lo.max(at_hi),
            });
        }
    }
    for i in 1..pdf.segments.len() {
        let knot = pdf.segments[i].1.lower();
        let mut left = pdf.segments[i - 1].0.clone();
        let mut right = pdf.segments[i].0.clone();
        for _k in 0..=order {
            let lv = left.eval(knot);
            let rv = right.eval(knot);
            let gap = (lv - rv).abs();
            if gap > 1e-6 * (1.0 + lv.abs()) {
                return Err(Error::PostconditionFailed {
                    what: "knot continuity",
                    residual: gap,
                });
            }
            left = left.derivative(1);
            right = right.derivative(1);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn poly_to_descending(p: &Polynomial, n: usize) -> DVector<f64> {
        DVector::from_iterator(n + 1, (0..=n).rev().map(|i| p.coeff(i)))
    }

    fn tent() -> ControlPoints {
        ControlPoints::new(
            &[(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)],
            &[ExtremumLabel::Min, ExtremumLabel::Max, ExtremumLabel::Min],
        )
        .unwrap()
    }

    #[test]
    fn smoothness_matrix_examples() {
        // x0 = 0, n = 2, C = 0: single row [x0^2, x0, 1]
        let m = smoothness_matrix(0.0, 2, 0).unwrap();
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.as_slice(), &[0.0, 0.0, 1.0]);

        let m = smoothness_matrix(1.0, 1, 0).unwrap();
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 1.0]);

        // x0 = 1, n = 2, C = 1: rows [1,1,1] and [2,1,0]
        let m = smoothness_matrix(1.0, 2, 1).unwrap();
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 1.0, 1.0]);
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), vec![2.0, 1.0, 0.0]);
    }

    #[test]
    fn smoothness_matrix_rejects_high_order() {
        assert!(matches!(
            smoothness_matrix(0.0, 2, 2),
            Err(Error::InfeasibleOrder { .. })
        ));
    }

    #[test]
    fn first_segment_rises() {
        let cp = ControlPoints::new(
            &[(0.0, 0.0), (1.0, 1.0)],
            &[ExtremumLabel::Min, ExtremumLabel::Max],
        )
        .unwrap();
        let p = solve_first_segment(&cp, 4, 1, 9).unwrap();
        assert_abs_diff_eq!(p.eval(0.0), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(p.eval(1.0), 1.0, epsilon = 1e-8);
        // strictly increasing at the samples
        for k in 0..9 {
            let x = k as f64 / 8.0;
            assert!(p.derivative(1).eval(x) > 0.0, "slope at {x}");
        }
    }

    #[test]
    fn flat_pair_is_degenerate() {
        let cp = ControlPoints::new(
            &[(0.0, 0.5), (1.0, 0.5)],
            &[ExtremumLabel::Min, ExtremumLabel::Max],
        )
        .unwrap();
        assert!(solve_first_segment(&cp, 4, 1, 9).is_err());
    }

    #[test]
    fn minimal_norm_against_random_feasible() {
        let cp = ControlPoints::new(
            &[(0.0, 0.0), (1.0, 1.0)],
            &[ExtremumLabel::Min, ExtremumLabel::Max],
        )
        .unwrap();
        let n = 4;
        let p = solve_first_segment(&cp, n, 1, 9).unwrap();
        // the objective is the coefficient norm in the segment's local basis
        let local_norm = |q: &Polynomial| -> f64 {
            let local = q.compose_affine(0.5, 0.5);
            (0..=n).map(|i| local.coeff(i) * local.coeff(i)).sum()
        };
        let opt = local_norm(&p);

        // random feasible candidates: interpolating + increasing samples
        let mut rng = crate::sample::GeneratorState::new(7);
        let mut tried = 0;
        while tried < 50 {
            // cubic through the endpoints with random middle coefficients
            let c2 = rng.uniform() * 2.0 - 1.0;
            let c3 = rng.uniform() * 2.0 - 1.0;
            let c1 = 1.0 - c2 - c3; // forces p(1) = 1 with p(0) = 0
            let cand = Polynomial::new(vec![0.0, c1, c2, c3]);
            let increasing = (0..9).all(|k| {
                let x = k as f64 / 8.0;
                cand.derivative(1).eval(x) > 0.0
            });
            if !increasing {
                continue;
            }
            tried += 1;
            assert!(
                local_norm(&cand) >= opt - 1e-9,
                "feasible candidate below optimum"
            );
        }
    }

    #[test]
    fn tent_build_is_symmetric() {
        let pdf = build(&tent(), 5, 1, 9).unwrap();
        assert_eq!(pdf.segments().len(), 2);
        assert_abs_diff_eq!(pdf.mass(), 1.0, epsilon = 1e-9);
        // mirror symmetry of the two segments under x -> 1-x
        for k in 0..=20 {
            let x = 0.5 * k as f64 / 20.0;
            assert_abs_diff_eq!(pdf.eval(x), pdf.eval(1.0 - x), epsilon = 1e-6);
        }
        assert_eq!(pdf.signs(), &[1, -1]);
    }

    #[test]
    fn tent_cdf_and_quantile() {
        let pdf = build(&tent(), 5, 1, 9).unwrap();
        assert_abs_diff_eq!(pdf.cdf(1.0).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(pdf.cdf(0.5).unwrap(), 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(pdf.quantile(0.5).unwrap(), 0.5, epsilon = 1e-6);
    }

    #[test]
    fn five_point_bimodal() {
        let cp = ControlPoints::new(
            &[(0.0, 0.0), (0.25, 2.0), (0.5, 0.5), (0.75, 2.0), (1.0, 0.0)],
            &[
                ExtremumLabel::Min,
                ExtremumLabel::Max,
                ExtremumLabel::Min,
                ExtremumLabel::Max,
                ExtremumLabel::Min,
            ],
        )
        .unwrap();
        let pdf = build(&cp, 5, 1, 15).unwrap();
        assert_abs_diff_eq!(pdf.mass(), 1.0, epsilon = 1e-9);
        pdf.certify_segments().unwrap();
        // local maxima at the two labeled peaks: value above both neighbors
        for &peak in &[0.25, 0.75] {
            let v = pdf.eval(peak);
            assert!(v > pdf.eval(peak - 0.05));
            assert!(v > pdf.eval(peak + 0.05));
        }
    }

    #[test]
    fn alternation_enforced() {
        let bad = ControlPoints::new(
            &[(0.0, 0.0), (0.5, 1.0), (1.0, 2.0)],
            &[ExtremumLabel::Min, ExtremumLabel::Max, ExtremumLabel::Max],
        );
        assert!(matches!(bad, Err(Error::LabelsNotAlternating)));
    }

    #[test]
    fn continuity_rows_match_previous_derivatives() {
        let pdf = build(&tent(), 5, 1, 9).unwrap();
        let knot = 0.5;
        let left = &pdf.segments()[0].0;
        let right = &pdf.segments()[1].0;
        assert_abs_diff_eq!(left.eval(knot), right.eval(knot), epsilon = 1e-6);
        assert_abs_diff_eq!(
            left.derivative(1).eval(knot),
            right.derivative(1).eval(knot),
            epsilon = 1e-6
        );
        // the construction's signed null-space identity: with q_i = w_i s_i,
        // X_C(knot) (q_1 + q_2) = 0
        let n = 5;
        let xc = smoothness_matrix(knot, n, 1).unwrap();
        let q1 = poly_to_descending(&left.scale(pdf.signs()[0] as f64), n);
        let q2 = poly_to_descending(&right.scale(pdf.signs()[1] as f64), n);
        let residual = (&xc * (q1 + q2)).abs().max();
        assert!(residual <= 1e-6, "null-space residual {residual}");
    }

    #[test]
    fn two_point_build_reduces_to_single_segment() {
        let cp = ControlPoints::new(
            &[(0.0, 0.0), (1.0, 1.0)],
            &[ExtremumLabel::Min, ExtremumLabel::Max],
        )
        .unwrap();
        let pdf = build(&cp, 4, 1, 9).unwrap();
        assert_eq!(pdf.segments().len(), 1);
        assert_abs_diff_eq!(pdf.mass(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn eval_at_knot_matches_control_value() {
        let pdf = build(&tent(), 5, 1, 9).unwrap();
        // normalization scaled the control ordinates by 1/mass of the raw build;
        // the knot value must agree with the scaled peak
        let scale = pdf.eval(0.5) / 2.0;
        assert_abs_diff_eq!(pdf.eval(0.0), 0.0 * scale, epsilon = 1e-7);
        assert_abs_diff_eq!(pdf.eval(0.5), 2.0 * scale, epsilon = 1e-7);
    }
}
