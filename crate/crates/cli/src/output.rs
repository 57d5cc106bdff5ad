//! Deterministic text output: CSV columns with 12 significant digits
//! and '.' decimal separators, JSON without non-finite numbers.

use crate::error::AppError;
use serde::Serialize;
use std::fs;
use std::path::Path;

/// Format a value with 12 significant digits in scientific notation;
/// non-finite values (failed cells) become `NA`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return "NA".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

/// `Some(x)` for finite values, `None` (JSON `null`) otherwise.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Write a CSV file from a fixed header and formatted rows.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), AppError> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| AppError::Io(format!("writing {}: {e}", path.display())))
}

/// Write pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::Io(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| AppError::Io(format!("writing {}: {e}", path.display())))
}
