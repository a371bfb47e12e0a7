//! `polydist` — fit, validate, transform, estimate, and sample polynomial
//! probability densities from the command line.
//!
//! Validation failures (negativity, mass, infeasibility) exit with status 2
//! and a machine-readable JSON error on stderr; I/O and parse failures exit
//! with status 1.

mod io;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polydist::estimate;
use polydist::fit::{self, FitConfig, FitMethod};
use polydist::pdf::Density;
use polydist::piecewise;
use polydist::sample::{self, EnvelopeKind, GeneratorState};
use polydist::serialize::{
    pdf_from_json, pdf_to_json, piecewise_from_json, piecewise_to_json, ErrorJson,
    EstimateReportJson,
};
use polydist::transform;
use polydist::{Interval, PiecewisePdf, PolynomialPdf};

use io::{read_control_points, read_file, read_histogram, read_samples, write_output, CliError,
    CliResult};

#[derive(Parser)]
#[command(name = "polydist", version, about = "Polynomial probability distribution toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_support(text: &str) -> Result<Interval, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("support must be l,u".into());
    }
    let l: f64 = parts[0].trim().parse().map_err(|_| "bad lower bound")?;
    let u: f64 = parts[1].trim().parse().map_err(|_| "bad upper bound")?;
    Interval::new(l, u).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMethodArg {
    /// Constrained least squares (unit mass enforced).
    Ls,
    /// Lagrange interpolation of sqrt(y), squared.
    Lagrange,
    /// Unconstrained least squares on sqrt(y), squared.
    Squared,
}

#[derive(Args)]
struct FitArgs {
    /// Histogram CSV with columns x,y
    #[arg(long)]
    input: String,
    #[arg(long)]
    degree: usize,
    /// Support interval as l,u
    #[arg(long, value_parser = parse_support)]
    support: Interval,
    #[arg(long, value_enum, default_value = "ls")]
    method: FitMethodArg,
    /// Shift-and-rescale repair if the fit dips negative
    #[arg(long)]
    repair: bool,
    /// Output pdf JSON path (stdout when omitted)
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct PdfArg {
    /// Density JSON file
    #[arg(long)]
    pdf: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateMethodArg {
    Mom,
    Centroid,
    Pairwise,
    NumericMl,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleMethodArg {
    Inverse,
    Rejection,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a polynomial density to a histogram
    Fit(FitArgs),
    /// Check that a density file satisfies the density conditions
    Validate {
        #[arg(long, conflicts_with = "piecewise")]
        pdf: Option<String>,
        #[arg(long)]
        piecewise: Option<String>,
    },
    /// Mean, variance, median, entropy, mass of a density
    Stats(PdfArg),
    /// Kullback-Leibler divergence KL(p || q)
    Kl {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Differential entropy
    Entropy(PdfArg),
    /// Remap or transform a density: unit, semi-infinite, real-line, affine:b1,b0
    Transform {
        #[arg(long)]
        pdf: String,
        /// One of: unit | semi-infinite | real-line | affine:b1,b0
        #[arg(long)]
        map: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Build a smooth piecewise density through control points
    Piecewise {
        /// CSV with columns x,y,label (label: min|max)
        #[arg(long)]
        control_points: String,
        /// Segment polynomial degree (defaults to smoothness + 4)
        #[arg(long)]
        degree: Option<usize>,
        /// Smoothness order C
        #[arg(long, default_value_t = 1)]
        smoothness: usize,
        /// Positivity samples per segment
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Estimate density coefficients from observations
    Estimate {
        /// Samples CSV, one observation per line
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        method: EstimateMethodArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_parser = parse_support)]
        support: Interval,
        /// Number of sample moments for the mom method (default degree + 1)
        #[arg(long)]
        moments: Option<usize>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Draw variates from a density, one per line
    Sample {
        #[arg(long, conflicts_with = "piecewise")]
        pdf: Option<String>,
        #[arg(long)]
        piecewise: Option<String>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_enum, default_value = "inverse")]
        method: SampleMethodArg,
        /// Inverse-CDF grid resolution
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Envelope cells for rejection sampling
        #[arg(long, default_value_t = 64)]
        cells: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Tabulate (x, density, cdf) rows over the support
    PlotData {
        #[arg(long, conflicts_with = "piecewise")]
        pdf: Option<String>,
        #[arg(long)]
        piecewise: Option<String>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Density of the sum of two independent variables
    Convolve {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        output: Option<String>,
    },
}

fn load_pdf(path: &str) -> CliResult<PolynomialPdf> {
    let text = read_file(path)?;
    Ok(pdf_from_json(&text)?)
}

fn load_piecewise(path: &str) -> CliResult<PiecewisePdf> {
    let text = read_file(path)?;
    Ok(piecewise_from_json(&text)?)
}

enum AnyDensity {
    Poly(PolynomialPdf),
    Piecewise(PiecewisePdf),
}

impl AnyDensity {
    fn load(pdf: Option<&str>, piecewise: Option<&str>) -> CliResult<AnyDensity> {
        match (pdf, piecewise) {
            (Some(p), None) => Ok(AnyDensity::Poly(load_pdf(p)?)),
            (None, Some(p)) => Ok(AnyDensity::Piecewise(load_piecewise(p)?)),
            _ => Err(CliError::Io("provide exactly one of --pdf / --piecewise".into())),
        }
    }

    fn as_density(&self) -> &dyn Density {
        match self {
            AnyDensity::Poly(p) => p,
            AnyDensity::Piecewise(p) => p,
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Fit(args) => {
            let h = read_histogram(&args.input)?;
            let method = match args.method {
                FitMethodArg::Ls => FitMethod::ConstrainedLs,
                FitMethodArg::Lagrange => FitMethod::LagrangeSqrt,
                FitMethodArg::Squared => FitMethod::SquaredLs,
            };
            let cfg = FitConfig {
                degree: args.degree,
                support: args.support,
                method,
                repair: args.repair,
            };
            let fitted = fit::fit_histogram(&h, &cfg)?;
            let pdf = PolynomialPdf::new(fitted, args.support)?;
            write_output(args.output.as_deref(), &pdf_to_json(&pdf))
        }
        Command::Validate { pdf, piecewise } => {
            match AnyDensity::load(pdf.as_deref(), piecewise.as_deref())? {
                AnyDensity::Poly(_) | AnyDensity::Piecewise(_) => {}
            }
            println!("valid");
            Ok(())
        }
        Command::Stats(args) => {
            let d = load_pdf(&args.pdf)?;
            let out = serde_json::json!({
                "mean": d.mean(),
                "variance": d.variance(),
                "median": d.quantile(0.5)?,
                "entropy": d.entropy(),
                "mass": d.mass(),
                "support": {"lower": d.support().lower(), "upper": d.support().upper()},
                "modes": d.modes(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Kl { p, q } => {
            let dp = load_pdf(&p)?;
            let dq = load_pdf(&q)?;
            let kl = dp.kl_divergence(&dq)?;
            println!("{}", serde_json::json!({ "kl": kl }));
            Ok(())
        }
        Command::Entropy(args) => {
            let d = load_pdf(&args.pdf)?;
            println!("{}", serde_json::json!({ "entropy": d.entropy() }));
            Ok(())
        }
        Command::Transform { pdf, map, output } => {
            let d = load_pdf(&pdf)?;
            match map.as_str() {
                "unit" => {
                    let unit = Interval::new(-1.0, 1.0).unwrap();
                    let out = transform::affine_remap(&d, unit);
                    write_output(output.as_deref(), &pdf_to_json(&out))
                }
                "semi-infinite" => {
                    let t = transform::to_semi_infinite(&d)?;
                    let payload = serde_json::json!({
                        "kind": "semi-infinite",
                        "base": serde_json::from_str::<serde_json::Value>(
                            &pdf_to_json(t.base())).unwrap(),
                    });
                    write_output(output.as_deref(), &serde_json::to_string_pretty(&payload).unwrap())
                }
                "real-line" => {
                    let t = transform::to_real_line(&d)?;
                    let payload = serde_json::json!({
                        "kind": "real-line",
                        "base": serde_json::from_str::<serde_json::Value>(
                            &pdf_to_json(t.base())).unwrap(),
                    });
                    write_output(output.as_deref(), &serde_json::to_string_pretty(&payload).unwrap())
                }
                other => {
                    let Some(params) = other.strip_prefix("affine:") else {
                        return Err(CliError::Io(format!(
                            "unknown map {other}; use unit | semi-infinite | real-line | affine:b1,b0"
                        )));
                    };
                    let parts: Vec<&str> = params.split(',').collect();
                    if parts.len() != 2 {
                        return Err(CliError::Io("affine map needs b1,b0".into()));
                    }
                    let b1: f64 = parts[0]
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Io("bad b1".into()))?;
                    let b0: f64 = parts[1]
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Io("bad b0".into()))?;
                    let out = transform::affine_transform(&d, b1, b0)?;
                    write_output(output.as_deref(), &pdf_to_json(&out))
                }
            }
        }
        Command::Piecewise {
            control_points,
            degree,
            smoothness,
            samples,
            output,
        } => {
            let cp = read_control_points(&control_points)?;
            let degree = degree.unwrap_or(smoothness + 4);
            let pdf = piecewise::build(&cp, degree, smoothness, samples)?;
            write_output(output.as_deref(), &piecewise_to_json(&pdf))
        }
        Command::Estimate {
            input,
            method,
            degree,
            support,
            moments,
            output,
        } => {
            let xs = read_samples(&input)?;
            let set = estimate::SampleSet::new(xs, support)?;
            let report = match method {
                EstimateMethodArg::Mom => {
                    let count = moments.unwrap_or(degree + 1).max(degree);
                    let sample_moments = estimate::sample_moments(&set, count);
                    estimate::method_of_moments(&sample_moments, degree, &support)?
                }
                EstimateMethodArg::Centroid => estimate::ml_centroid(&set, degree)?,
                EstimateMethodArg::Pairwise => estimate::ml_pairwise(&set, degree)?,
                EstimateMethodArg::NumericMl => estimate::ml_numeric(&set, degree, 500)?,
            };
            let json = EstimateReportJson::from_report(&report, &support);
            write_output(
                output.as_deref(),
                &serde_json::to_string_pretty(&json).unwrap(),
            )
        }
        Command::Sample {
            pdf,
            piecewise,
            seed,
            count,
            method,
            grid,
            cells,
            output,
        } => {
            let density = AnyDensity::load(pdf.as_deref(), piecewise.as_deref())?;
            let d = density.as_density();
            let mut rng = GeneratorState::new(seed);
            let draws = match method {
                SampleMethodArg::Inverse => sample::inverse_cdf_sample(d, &mut rng, count, grid)?,
                SampleMethodArg::Rejection => {
                    let envelope =
                        sample::build_envelope(d, &d.support(), cells, EnvelopeKind::Step)?;
                    sample::rejection_sample(d, &envelope, &mut rng, count)?.0
                }
            };
            let mut lines = String::with_capacity(draws.len() * 20);
            for x in draws {
                lines.push_str(&format!("{x}\n"));
            }
            match output {
                Some(path) => std::fs::write(&path, lines)
                    .map_err(|e| CliError::Io(format!("{path}: {e}"))),
                None => {
                    print!("{lines}");
                    Ok(())
                }
            }
        }
        Command::PlotData {
            pdf,
            piecewise,
            resolution,
            output,
        } => {
            let density = AnyDensity::load(pdf.as_deref(), piecewise.as_deref())?;
            let d = density.as_density();
            let support = d.support();
            let mut csv = String::from("x,density,cdf\n");
            for &x in support.grid(resolution.max(1)).iter() {
                csv.push_str(&format!("{x},{},{}\n", d.density(x), d.cumulative(x)));
            }
            match output {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| CliError::Io(format!("{path}: {e}"))),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Convolve { p, q, output } => {
            let dp = load_pdf(&p)?;
            let dq = load_pdf(&q)?;
            let c = dp.convolve(&dq)?;
            write_output(output.as_deref(), &piecewise_to_json(&c))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Io(detail)) => {
            let payload = serde_json::json!({ "kind": "io", "detail": detail });
            eprintln!("{payload}");
            std::process::exit(1);
        }
        Err(CliError::Validation(err)) => {
            let payload = ErrorJson::from(&err);
            eprintln!("{}", serde_json::to_string(&payload).unwrap());
            std::process::exit(2);
        }
    }
}
