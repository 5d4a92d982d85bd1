//! Reading the CSV files the CLI writes.

use std::path::Path;

use crate::CliError;

pub const DISPLACEMENT: &str = "displacement_mm";
pub const ANGLE: &str = "angle_deg";

/// Header and numeric rows of any all-numeric CSV. Non-numeric columns
/// (such as `phase`) come back as NaN.
pub fn read_numeric(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Degenerate(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Degenerate(e.to_string()))?;
        rows.push(
            record
                .iter()
                .map(|cell| cell.parse::<f64>().unwrap_or(f64::NAN))
                .collect(),
        );
    }
    Ok((header, rows))
}

/// Loop samples as `(u [m], θ [rad])`.
pub fn parse_loop(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Degenerate(e.to_string()))?
        .clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Degenerate(format!("missing column {name}")))
    };
    let (u_col, t_col) = (col(DISPLACEMENT)?, col(ANGLE)?);
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Degenerate(e.to_string()))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Degenerate(format!("row {}: unreadable value", line + 2)))
        };
        out.push((field(u_col)? * 1e-3, field(t_col)?.to_radians()));
    }
    Ok(out)
}

pub fn read_loop(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_loop(&text)
}
