//! Browser bindings for the polynomial distribution toolkit.
//!
//! Every entry point takes and returns JSON strings so the page needs no
//! bindings beyond `JSON.parse`; failures come back as `{"error": {...}}`
//! payloads instead of exceptions. The same functions run natively, which
//! is how the test suite exercises them.

use polydist::fit::{self, FitConfig, FitMethod, Histogram};
use polydist::pdf::Density;
use polydist::piecewise::{self, ControlPoints, ExtremumLabel};
use polydist::sample::{self, EnvelopeKind, GeneratorState};
use polydist::serialize::{pdf_from_json, pdf_to_json, ErrorJson, PdfJson};
use polydist::{Interval, PolynomialPdf};
use wasm_bindgen::prelude::wasm_bindgen;

fn error_payload(e: &polydist::Error) -> String {
    serde_json::json!({ "error": ErrorJson::from(e) }).to_string()
}

fn io_error(detail: &str) -> String {
    serde_json::json!({ "error": { "kind": "io", "detail": detail } }).to_string()
}

fn curve(d: &dyn Density, points: usize) -> serde_json::Value {
    let support = d.support();
    let xs = support.grid(points);
    serde_json::json!({
        "x": xs,
        "density": xs.iter().map(|&x| d.density(x)).collect::<Vec<f64>>(),
        "cdf": xs.iter().map(|&x| d.cumulative(x)).collect::<Vec<f64>>(),
    })
}

/// Fit a polynomial density to histogram points.
///
/// Input: `{"points": [[x, y], ...], "degree": n, "method": "ls"|"lagrange"|"squared",
/// "support": [l, u], "repair": bool}`.
/// Output: the fitted pdf JSON, a plot curve, moments, and the fitted
/// polynomial's coefficient list.
#[wasm_bindgen]
pub fn fit_histogram_json(request: &str) -> String {
    let Ok(req) = serde_json::from_str::<serde_json::Value>(request) else {
        return io_error("request is not valid JSON");
    };
    let Some(point_rows) = req["points"].as_array() else {
        return io_error("missing points array");
    };
    let mut points = Vec::with_capacity(point_rows.len());
    for row in point_rows {
        let (Some(x), Some(y)) = (row[0].as_f64(), row[1].as_f64()) else {
            return io_error("points must be [x, y] number pairs");
        };
        points.push((x, y));
    }
    let degree = req["degree"].as_u64().unwrap_or(2) as usize;
    let method = match req["method"].as_str().unwrap_or("ls") {
        "lagrange" => FitMethod::LagrangeSqrt,
        "squared" => FitMethod::SquaredLs,
        _ => FitMethod::ConstrainedLs,
    };
    let support = match (req["support"][0].as_f64(), req["support"][1].as_f64()) {
        (Some(l), Some(u)) => match Interval::new(l, u) {
            Ok(iv) => iv,
            Err(e) => return error_payload(&e),
        },
        _ => return io_error("missing support [l, u]"),
    };
    let repair = req["repair"].as_bool().unwrap_or(false);

    let histogram = match Histogram::new(points) {
        Ok(h) => h,
        Err(e) => return error_payload(&e),
    };
    let cfg = FitConfig { degree, support, method, repair };
    let fitted = match fit::fit_histogram(&histogram, &cfg) {
        Ok(p) => p,
        Err(e) => return error_payload(&e),
    };
    let pdf = match PolynomialPdf::new(fitted, support) {
        Ok(p) => p,
        Err(e) => return error_payload(&e),
    };
    serde_json::json!({
        "pdf": PdfJson::from(&pdf),
        "coefficients": pdf.poly().coeffs(),
        "curve": curve(&pdf, 257),
        "mean": pdf.mean(),
        "variance": pdf.variance(),
        "entropy": pdf.entropy(),
    })
    .to_string()
}

/// Build a smooth piecewise density through alternating control points.
///
/// Input: `{"points": [[x, y], ...], "labels": ["min","max",...],
/// "degree": n, "smoothness": C, "samples": K}`.
#[wasm_bindgen]
pub fn build_piecewise_json(request: &str) -> String {
    let Ok(req) = serde_json::from_str::<serde_json::Value>(request) else {
        return io_error("request is not valid JSON");
    };
    let Some(point_rows) = req["points"].as_array() else {
        return io_error("missing points array");
    };
    let mut points = Vec::with_capacity(point_rows.len());
    for row in point_rows {
        let (Some(x), Some(y)) = (row[0].as_f64(), row[1].as_f64()) else {
            return io_error("points must be [x, y] number pairs");
        };
        points.push((x, y));
    }
    let labels: Vec<ExtremumLabel> = match req["labels"].as_array() {
        Some(rows) => {
            let mut out = Vec::with_capacity(rows.len());
            for row in rows {
                match row.as_str() {
                    Some("min") => out.push(ExtremumLabel::Min),
                    Some("max") => out.push(ExtremumLabel::Max),
                    _ => return io_error("labels must be \"min\" or \"max\""),
                }
            }
            out
        }
        None => return io_error("missing labels array"),
    };
    let smoothness = req["smoothness"].as_u64().unwrap_or(1) as usize;
    let degree = req["degree"].as_u64().unwrap_or((smoothness + 4) as u64) as usize;
    let samples = req["samples"].as_u64().unwrap_or(25) as usize;

    let cp = match ControlPoints::new(&points, &labels) {
        Ok(cp) => cp,
        Err(e) => return error_payload(&e),
    };
    let pdf = match piecewise::build(&cp, degree, smoothness, samples) {
        Ok(p) => p,
        Err(e) => return error_payload(&e),
    };
    let knots = pdf.knots();
    serde_json::json!({
        "piecewise": serde_json::from_str::<serde_json::Value>(
            &polydist::serialize::piecewise_to_json(&pdf)).unwrap(),
        "curve": curve(&pdf, 257),
        "knots": knots,
        "mass": pdf.mass(),
        "mean": pdf.mean(),
        "variance": pdf.variance(),
    })
    .to_string()
}

/// Draw variates from a density file and bin them against the analytic curve.
///
/// Input: `{"pdf": <pdf JSON object>, "seed": s, "count": n,
/// "method": "inverse"|"rejection", "bins": b}`.
/// Output: bin centers and empirical densities, the analytic curve, the
/// acceptance rate (rejection only), and the Kolmogorov-Smirnov statistic.
#[wasm_bindgen]
pub fn sample_histogram_json(request: &str) -> String {
    let Ok(req) = serde_json::from_str::<serde_json::Value>(request) else {
        return io_error("request is not valid JSON");
    };
    let pdf = match pdf_from_json(&req["pdf"].to_string()) {
        Ok(p) => p,
        Err(e) => return error_payload(&e),
    };
    let seed = req["seed"].as_u64().unwrap_or(1);
    let count = req["count"].as_u64().unwrap_or(10_000) as usize;
    let bins = (req["bins"].as_u64().unwrap_or(40) as usize).max(4);
    let method = req["method"].as_str().unwrap_or("inverse");

    let mut rng = GeneratorState::new(seed);
    let (draws, acceptance) = if method == "rejection" {
        let envelope =
            match sample::build_envelope(&pdf, &pdf.support(), 64, EnvelopeKind::Step) {
                Ok(env) => env,
                Err(e) => return error_payload(&e),
            };
        match sample::rejection_sample(&pdf, &envelope, &mut rng, count) {
            Ok((s, rate)) => (s, Some(rate)),
            Err(e) => return error_payload(&e),
        }
    } else {
        match sample::inverse_cdf_sample(&pdf, &mut rng, count, 1024) {
            Ok(s) => (s, None),
            Err(e) => return error_payload(&e),
        }
    };

    let support = pdf.support();
    let width = support.width() / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &draws {
        let idx = (((x - support.lower()) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let centers: Vec<f64> = (0..bins)
        .map(|i| support.lower() + width * (i as f64 + 0.5))
        .collect();
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (draws.len() as f64 * width))
        .collect();
    let ks = sample::ks_statistic(&draws, |x| pdf.cumulative(x));

    serde_json::json!({
        "centers": centers,
        "empirical": empirical,
        "curve": curve(&pdf, 257),
        "ks": ks,
        "acceptance": acceptance,
        "count": draws.len(),
    })
    .to_string()
}

/// Round-trip helper for the page: validates a pasted pdf JSON and returns
/// its canonical form plus summary statistics.
#[wasm_bindgen]
pub fn describe_pdf_json(text: &str) -> String {
    match pdf_from_json(text) {
        Ok(pdf) => serde_json::json!({
            "pdf": serde_json::from_str::<serde_json::Value>(&pdf_to_json(&pdf)).unwrap(),
            "mean": pdf.mean(),
            "variance": pdf.variance(),
            "entropy": pdf.entropy(),
            "curve": curve(&pdf, 257),
        })
        .to_string(),
        Err(e) => error_payload(&e),
    }
}
