//! `x,v` CSV signals. Lines starting with `#` are comments.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use vanhecke_core::SampleSet;

use crate::error::CliError;

pub fn read_samples(path: &Path) -> Result<SampleSet, CliError> {
    let file = File::open(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_samples(file)
}

pub fn parse_samples<R: Read>(reader: R) -> Result<SampleSet, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names != ["x", "v"] {
        let line = header.position().map_or(1, |p| p.line());
        return Err(CliError::Parse {
            line,
            message: format!("expected header `x,v`, found `{}`", names.join(",")),
        });
    }

    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<f64, CliError> {
            let raw = &record[i];
            let value: f64 = raw.parse().map_err(|_| CliError::Parse {
                line,
                message: format!("{name} `{raw}` is not a number"),
            })?;
            if !value.is_finite() {
                return Err(CliError::Parse {
                    line,
                    message: format!("{name} `{raw}` is not finite"),
                });
            }
            Ok(value)
        };
        xs.push(field(0, "x")?);
        vs.push(field(1, "v")?);
    }
    if xs.is_empty() {
        return Err(CliError::Parse {
            line: 0,
            message: "no data rows".into(),
        });
    }
    Ok(SampleSet::new(xs, vs)?)
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> CliError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    CliError::Parse { line, message }
}

/// Write `x,v` rows using shortest round-trip formatting.
pub fn write_samples<W: Write>(samples: &SampleSet, mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,v")?;
    for (x, v) in samples.abscissas().iter().zip(samples.values()) {
        writeln!(out, "{x},{v}")?;
    }
    Ok(())
}
