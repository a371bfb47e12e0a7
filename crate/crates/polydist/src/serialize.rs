//! JSON wire formats shared by the CLI, the files on disk, and the demo.
//!
//! Polynomials serialize either by coefficients or by roots:
//!
//! ```json
//! {"form":"coeffs","coefficients":[0.0,2.0]}
//! {"form":"roots","leading":1.0,"roots":[{"re":1.0,"im":0.0}]}
//! ```
//!
//! Densities pair a polynomial with a support; reading a density re-runs
//! the validation (non-negativity certificate plus unit mass).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::EstimateReport;
use crate::forms::FactoredPolynomial;
use crate::interval::Interval;
use crate::pdf::PolynomialPdf;
use crate::piecewise::PiecewisePdf;
use crate::poly::Polynomial;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum PolynomialJson {
    #[serde(rename = "coeffs")]
    Coeffs { coefficients: Vec<f64> },
    #[serde(rename = "roots")]
    Roots {
        leading: f64,
        roots: Vec<ComplexJson>,
    },
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson::Coeffs {
            coefficients: p.coeffs().to_vec(),
        }
    }
}

impl From<&FactoredPolynomial> for PolynomialJson {
    fn from(f: &FactoredPolynomial) -> Self {
        PolynomialJson::Roots {
            leading: f.leading(),
            roots: f
                .roots()
                .iter()
                .map(|z| ComplexJson { re: z.re, im: z.im })
                .collect(),
        }
    }
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        match self {
            PolynomialJson::Coeffs { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::Format {
                        detail: "empty coefficient list".into(),
                    });
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Format {
                        detail: "non-finite coefficient".into(),
                    });
                }
                Ok(Polynomial::new(coefficients.clone()))
            }
            PolynomialJson::Roots { leading, roots } => {
                let f = FactoredPolynomial::new(
                    *leading,
                    roots.iter().map(|c| Complex64::new(c.re, c.im)).collect(),
                )?;
                f.to_polynomial()
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportJson {
    pub lower: f64,
    pub upper: f64,
}

impl From<&Interval> for SupportJson {
    fn from(iv: &Interval) -> Self {
        SupportJson {
            lower: iv.lower(),
            upper: iv.upper(),
        }
    }
}

impl SupportJson {
    pub fn to_interval(&self) -> Result<Interval> {
        Interval::new(self.lower, self.upper)
    }
}

/// The density file format: `{"pdf": ..., "support": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PdfJson {
    pub pdf: PolynomialJson,
    pub support: SupportJson,
}

impl From<&PolynomialPdf> for PdfJson {
    fn from(d: &PolynomialPdf) -> Self {
        use crate::pdf::Density;
        PdfJson {
            pdf: PolynomialJson::from(d.poly()),
            support: SupportJson::from(&d.support()),
        }
    }
}

impl PdfJson {
    /// Re-validates on read: certification plus unit mass.
    pub fn to_pdf(&self) -> Result<PolynomialPdf> {
        let poly = self.pdf.to_polynomial()?;
        let support = self.support.to_interval()?;
        PolynomialPdf::from_validated_parts(poly, support)
    }
}

pub fn pdf_to_json(d: &PolynomialPdf) -> String {
    serde_json::to_string_pretty(&PdfJson::from(d)).expect("pdf serializes")
}

pub fn pdf_from_json(text: &str) -> Result<PolynomialPdf> {
    let parsed: PdfJson = serde_json::from_str(text).map_err(|e| Error::Format {
        detail: e.to_string(),
    })?;
    parsed.to_pdf()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentJson {
    pub poly: PolynomialJson,
    pub interval: SupportJson,
}

/// Piecewise density format: `{"segments":[...],"smoothness":C}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseJson {
    pub segments: Vec<SegmentJson>,
    pub smoothness: usize,
}

impl From<&PiecewisePdf> for PiecewiseJson {
    fn from(p: &PiecewisePdf) -> Self {
        PiecewiseJson {
            segments: p
                .segments()
                .iter()
                .map(|(poly, iv)| SegmentJson {
                    poly: PolynomialJson::from(poly),
                    interval: SupportJson::from(iv),
                })
                .collect(),
            smoothness: p.smoothness(),
        }
    }
}

impl PiecewiseJson {
    pub fn to_piecewise(&self) -> Result<PiecewisePdf> {
        let segments = self
            .segments
            .iter()
            .map(|s| Ok((s.poly.to_polynomial()?, s.interval.to_interval()?)))
            .collect::<Result<Vec<_>>>()?;
        let pdf = PiecewisePdf::from_segments(segments, self.smoothness)?;
        let deviation = (pdf.mass() - 1.0).abs();
        if deviation > 1e-6 {
            return Err(Error::MassNotUnit { deviation });
        }
        Ok(pdf)
    }
}

pub fn piecewise_to_json(p: &PiecewisePdf) -> String {
    serde_json::to_string_pretty(&PiecewiseJson::from(p)).expect("piecewise serializes")
}

pub fn piecewise_from_json(text: &str) -> Result<PiecewisePdf> {
    let parsed: PiecewiseJson = serde_json::from_str(text).map_err(|e| Error::Format {
        detail: e.to_string(),
    })?;
    parsed.to_piecewise()
}

/// Estimation output format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReportJson {
    pub method: String,
    pub coefficients: PolynomialJson,
    pub support: SupportJson,
    pub log_likelihood: Option<f64>,
    pub constraint_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance_bound: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub skipped_pairs: usize,
}

impl EstimateReportJson {
    pub fn from_report(r: &EstimateReport, support: &Interval) -> Self {
        EstimateReportJson {
            method: r.method.to_string(),
            coefficients: PolynomialJson::from(&r.coefficients),
            support: SupportJson::from(support),
            log_likelihood: if r.log_likelihood.is_finite() {
                Some(r.log_likelihood)
            } else {
                None
            },
            constraint_residual: r.constraint_residual,
            covariance_bound: r.covariance_bound.clone(),
            skipped_pairs: r.skipped_pairs,
        }
    }
}

/// Structured error payload for pipelines: `{"kind":..,"detail":..,"witness":..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorJson {
    pub kind: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<f64>,
}

impl From<&Error> for ErrorJson {
    fn from(e: &Error) -> Self {
        ErrorJson {
            kind: e.kind().to_string(),
            detail: e.to_string(),
            witness: e.witness(),
        }
    }
}
