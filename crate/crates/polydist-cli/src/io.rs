//! File readers and writers for the CLI formats: histogram CSV (`x,y`),
//! samples CSV (one `x` per line), control-points CSV (`x,y,label`), and
//! the shared JSON density formats.

use polydist::fit::Histogram;
use polydist::piecewise::{ControlPoints, ExtremumLabel};

#[derive(Debug)]
pub enum CliError {
    /// I/O or parse problems: exit status 1.
    Io(String),
    /// Library validation errors: exit status 2.
    Validation(polydist::Error),
}

impl From<polydist::Error> for CliError {
    fn from(e: polydist::Error) -> Self {
        match e {
            polydist::Error::Format { .. } => CliError::Io(e.to_string()),
            other => CliError::Validation(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{path}: {e}")))
}

pub fn write_output(path: Option<&str>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(format!("{p}: {e}"))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.iter().any(|f| f.parse::<f64>().is_err())
}

/// Two-column `x,y` CSV; a header row is skipped when present.
pub fn read_histogram(path: &str) -> CliResult<Histogram> {
    let text = read_file(path)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 && is_header(&fields) {
            continue;
        }
        if fields.len() != 2 {
            return Err(CliError::Io(format!(
                "{path}:{}: expected two columns x,y",
                lineno + 1
            )));
        }
        let x: f64 = fields[0]
            .parse()
            .map_err(|_| CliError::Io(format!("{path}:{}: bad x value", lineno + 1)))?;
        let y: f64 = fields[1]
            .parse()
            .map_err(|_| CliError::Io(format!("{path}:{}: bad y value", lineno + 1)))?;
        points.push((x, y));
    }
    Ok(Histogram::new(points)?)
}

/// Single-column samples CSV; a header row is skipped when present.
pub fn read_samples(path: &str) -> CliResult<Vec<f64>> {
    let text = read_file(path)?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.parse::<f64>().is_err() {
            continue;
        }
        samples.push(
            line.parse::<f64>()
                .map_err(|_| CliError::Io(format!("{path}:{}: bad sample", lineno + 1)))?,
        );
    }
    if samples.is_empty() {
        return Err(CliError::Io(format!("{path}: no samples")));
    }
    Ok(samples)
}

/// Three-column `x,y,label` CSV with labels `min`/`max`.
pub fn read_control_points(path: &str) -> CliResult<ControlPoints> {
    let text = read_file(path)?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 && fields.len() >= 2 && fields[0].parse::<f64>().is_err() {
            continue;
        }
        if fields.len() != 3 {
            return Err(CliError::Io(format!(
                "{path}:{}: expected three columns x,y,label",
                lineno + 1
            )));
        }
        let x: f64 = fields[0]
            .parse()
            .map_err(|_| CliError::Io(format!("{path}:{}: bad x value", lineno + 1)))?;
        let y: f64 = fields[1]
            .parse()
            .map_err(|_| CliError::Io(format!("{path}:{}: bad y value", lineno + 1)))?;
        let label = match fields[2].to_ascii_lowercase().as_str() {
            "min" => ExtremumLabel::Min,
            "max" => ExtremumLabel::Max,
            other => {
                return Err(CliError::Io(format!(
                    "{path}:{}: label must be min or max, got {other}",
                    lineno + 1
                )))
            }
        };
        points.push((x, y));
        labels.push(label);
    }
    Ok(ControlPoints::new(&points, &labels)?)
}
