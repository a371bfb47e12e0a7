//! Random variate generation: a deterministic counter-based generator, the
//! discretized inverse-CDF sampler, and rejection sampling with piecewise
//! step or linear envelopes.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pdf::Density;
use crate::tol;

/// Deterministic counter-based uniform generator (SplitMix64 with a
/// pre-mixed seed).
///
/// The exact algorithm, so any implementation reproduces streams
/// bit-identically (all arithmetic wrapping, on u64):
///
/// 0. seeding: `state = mix(seed + 0x9E3779B97F4A7C15)`
/// 1. per draw: `state += 0x9E3779B97F4A7C15; z = mix(state)`
///
/// where `mix(z)` is
/// `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
///  z *= 0x94D049BB133111EB; z ^= z >> 31`.
///
/// A uniform in the open interval (0, 1) is `((z >> 11) + 0.5) * 2^-53`.
/// Independent substreams come from [`GeneratorState::substream`], which
/// seeds a fresh generator with `state = mix(seed XOR stream * 0xD1B54A32D192ED03)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorState {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;
const STREAM_SALT: u64 = 0xD1B54A32D192ED03;

fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl GeneratorState {
    pub fn new(seed: u64) -> Self {
        Self {
            state: mix64(seed.wrapping_add(GOLDEN_GAMMA)),
        }
    }

    /// Stream `k` of the given seed; distinct `k` give independent streams
    /// with a documented offset rule.
    pub fn substream(seed: u64, stream: u64) -> Self {
        Self {
            state: mix64(seed ^ stream.wrapping_mul(STREAM_SALT)),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform variate in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }
}

/// Piecewise-linear CDF approximation on a uniform grid.
#[derive(Debug, Clone)]
pub struct DiscretizedCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

pub const DEFAULT_GRID: usize = 1024;

impl DiscretizedCdf {
    /// Tabulates the CDF of a density on `resolution + 1` uniform nodes.
    /// The inverse interpolation error is O(resolution⁻²) in the CDF.
    pub fn from_density<D: Density + ?Sized>(d: &D, resolution: usize) -> Result<Self> {
        if resolution < 64 {
            return Err(Error::ArgumentDomain {
                name: "resolution",
                value: resolution as f64,
                expected: ">= 64 grid cells",
            });
        }
        let support = d.support();
        let xs = support.grid(resolution);
        let mut fs: Vec<f64> = xs.iter().map(|&x| d.cumulative(x)).collect();
        // pin the ends and enforce monotonicity against rounding
        fs[0] = 0.0;
        let last = fs.len() - 1;
        fs[last] = 1.0;
        for i in 1..fs.len() {
            if fs[i] < fs[i - 1] {
                fs[i] = fs[i - 1];
            }
        }
        Self::from_grid(xs, fs)
    }

    /// Validates a raw grid: strictly increasing x, F nondecreasing from 0
    /// to 1.
    pub fn from_grid(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() || xs.len() < 2 {
            return Err(Error::Format {
                detail: "cdf grid needs matching x/F columns with >= 2 rows".into(),
            });
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::DuplicateAbscissa { x: w[1] });
            }
        }
        if fs[0] != 0.0 || *fs.last().unwrap() != 1.0 {
            return Err(Error::Format {
                detail: "cdf grid must start at 0 and end at 1".into(),
            });
        }
        for w in fs.windows(2) {
            if w[1] < w[0] {
                return Err(Error::Format {
                    detail: "cdf grid must be nondecreasing".into(),
                });
            }
        }
        Ok(Self { xs, fs })
    }

    /// Piecewise-linear inverse: locates the bracketing cell by binary
    /// search and interpolates
    /// `x = x_i + (x_{i+1} - x_i)(u - F_i)/(F_{i+1} - F_i)`,
    /// skipping flat cells.
    pub fn invert(&self, u: f64) -> f64 {
        let n = self.fs.len();
        // first node with F >= u brackets the cell; the node before it has
        // F strictly below u, so flat cells never host the inversion and a
        // plateau at exactly u resolves to its left edge
        let hi = self.fs.partition_point(|&f| f < u).clamp(1, n - 1);
        let lo = hi - 1;
        let df = self.fs[hi] - self.fs[lo];
        if df <= 0.0 {
            return self.xs[hi];
        }
        self.xs[lo] + (self.xs[hi] - self.xs[lo]) * (u - self.fs[lo]) / df
    }
}

/// Inverse-CDF sampling through a fresh discretization of the density's CDF.
pub fn inverse_cdf_sample<D: Density + ?Sized>(
    d: &D,
    rng: &mut GeneratorState,
    count: usize,
    grid: usize,
) -> Result<Vec<f64>> {
    let table = DiscretizedCdf::from_density(d, grid)?;
    let support = d.support();
    Ok((0..count)
        .map(|_| support.clamp(table.invert(rng.uniform())))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeKind {
    Step,
    Linear,
}

#[derive(Debug, Clone)]
struct EnvelopeCell {
    lo: f64,
    hi: f64,
    y_lo: f64,
    y_hi: f64,
    cum_area: f64, // cumulative area up to and including this cell
}

/// A piecewise envelope dominating a target density, used as the rejection
/// proposal.
#[derive(Debug, Clone)]
pub struct Envelope {
    cells: Vec<EnvelopeCell>,
    area: f64,
    kind: EnvelopeKind,
}

const CELL_SCAN: usize = 64;

impl Envelope {
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn kind(&self) -> EnvelopeKind {
        self.kind
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn value(&self, x: f64) -> f64 {
        let idx = self
            .cells
            .partition_point(|c| c.hi < x)
            .min(self.cells.len() - 1);
        let c = &self.cells[idx];
        if x < c.lo || x > c.hi {
            return 0.0;
        }
        match self.kind {
            EnvelopeKind::Step => c.y_lo,
            EnvelopeKind::Linear => {
                let t = (x - c.lo) / (c.hi - c.lo);
                c.y_lo + (c.y_hi - c.y_lo) * t
            }
        }
    }

    /// Uniformly scaled copy; scaling below one breaks domination and is
    /// how the envelope-violation path is exercised in tests.
    pub fn scaled(&self, factor: f64) -> Envelope {
        let mut cells = self.cells.clone();
        for c in &mut cells {
            c.y_lo *= factor;
            c.y_hi *= factor;
            c.cum_area *= factor;
        }
        Envelope {
            cells,
            area: self.area * factor,
            kind: self.kind,
        }
    }

    /// Draws one proposal `(x, envelope(x))` by cell selection proportional
    /// to cell area, then the in-cell inverse CDF.
    fn propose(&self, rng: &mut GeneratorState) -> (f64, f64) {
        let target = rng.uniform() * self.area;
        let idx = self
            .cells
            .partition_point(|c| c.cum_area < target)
            .min(self.cells.len() - 1);
        let c = &self.cells[idx];
        let u = rng.uniform();
        let x = match self.kind {
            EnvelopeKind::Step => c.lo + (c.hi - c.lo) * u,
            EnvelopeKind::Linear => {
                // invert the linear-density CDF within the cell
                let w = c.hi - c.lo;
                let a = 0.5 * (c.y_hi - c.y_lo) / w;
                let b = c.y_lo;
                let target_area = u * (0.5 * (c.y_lo + c.y_hi) * w);
                if a.abs() < 1e-300 {
                    c.lo + target_area / b.max(1e-300)
                } else {
                    let disc = (b * b + 4.0 * a * target_area).max(0.0);
                    c.lo + (disc.sqrt() - b) / (2.0 * a)
                }
            }
        };
        (x.clamp(c.lo, c.hi), self.value(x))
    }
}

/// Builds a per-cell upper bound of the density: the scanned cell maximum
/// (step) or the endpoint chord lifted to dominate the scan (linear), both
/// padded with the safety margin.
pub fn build_envelope<D: Density + ?Sized>(
    d: &D,
    support: &Interval,
    cells: usize,
    kind: EnvelopeKind,
) -> Result<Envelope> {
    if cells == 0 {
        return Err(Error::ArgumentDomain {
            name: "cells",
            value: 0.0,
            expected: ">= 1",
        });
    }
    let edges = support.grid(cells);
    let mut out: Vec<EnvelopeCell> = Vec::with_capacity(cells);
    let mut cum = 0.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut peak = f64::MIN;
        for k in 0..=CELL_SCAN {
            let x = lo + (hi - lo) * k as f64 / CELL_SCAN as f64;
            peak = peak.max(d.density(x));
        }
        let (y_lo, y_hi) = match kind {
            EnvelopeKind::Step => {
                let y = peak + tol::ENVELOPE_MARGIN;
                (y, y)
            }
            EnvelopeKind::Linear => {
                let mut a = d.density(lo);
                let mut b = d.density(hi);
                // lift the chord until it dominates the scanned values
                let mut lift = 0.0f64;
                for k in 0..=CELL_SCAN {
                    let t = k as f64 / CELL_SCAN as f64;
                    let x = lo + (hi - lo) * t;
                    let chord = a + (b - a) * t;
                    lift = lift.max(d.density(x) - chord);
                }
                a += lift + tol::ENVELOPE_MARGIN;
                b += lift + tol::ENVELOPE_MARGIN;
                (a, b)
            }
        };
        let area = 0.5 * (y_lo + y_hi) * (hi - lo);
        cum += area;
        out.push(EnvelopeCell { lo, hi, y_lo, y_hi, cum_area: cum });
    }
    Ok(Envelope { cells: out, area: cum, kind })
}

/// Rejection sampling under the envelope. The envelope is re-verified on a
/// thousand-point grid before any draws; a runtime violation at a proposal
/// aborts with a witness.
pub fn rejection_sample<D: Density + ?Sized>(
    d: &D,
    envelope: &Envelope,
    rng: &mut GeneratorState,
    count: usize,
) -> Result<(Vec<f64>, f64)> {
    let support = d.support();
    for &x in support.grid(1000).iter() {
        let target = d.density(x);
        let bound = envelope.value(x) + tol::ENVELOPE_MARGIN;
        if target > bound {
            return Err(Error::EnvelopeViolation {
                witness: x,
                target,
                envelope: envelope.value(x),
            });
        }
    }

    let mut accepted = Vec::with_capacity(count);
    let mut proposed = 0usize;
    while accepted.len() < count {
        let (x, env) = envelope.propose(rng);
        proposed += 1;
        let target = d.density(x);
        if target > env + tol::ENVELOPE_MARGIN {
            return Err(Error::EnvelopeViolation { witness: x, target, envelope: env });
        }
        if env <= 0.0 {
            continue;
        }
        if rng.uniform() * env <= target {
            accepted.push(x);
        }
    }
    let rate = accepted.len() as f64 / proposed as f64;
    Ok((accepted, rate))
}

/// Pointwise mean and variance of a polynomial with independent random
/// coefficients: `E[Y] = Σ E[a_i] x^i`, `Var[Y] = Σ Var[a_i] x^{2i}`.
pub fn random_poly_stats(means: &[f64], variances: &[f64], x: f64) -> Result<(f64, f64)> {
    if let Some(&v) = variances.iter().find(|&&v| v < 0.0) {
        return Err(Error::ArgumentDomain {
            name: "variance",
            value: v,
            expected: ">= 0",
        });
    }
    let mut pw = 1.0;
    let mut mean = 0.0;
    for &m in means {
        mean += m * pw;
        pw *= x;
    }
    let x2 = x * x;
    let mut pw2 = 1.0;
    let mut var = 0.0;
    for &v in variances {
        var += v * pw2;
        pw2 *= x2;
    }
    Ok((mean, var))
}

/// Kolmogorov-Smirnov statistic of a sample against an analytic CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        worst = worst.max(above.abs()).max(below.abs());
    }
    worst
}
