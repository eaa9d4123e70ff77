use std::fs;
use std::path::Path;

use cq_core::error::{Error, Result};
use cq_core::exactmath::ExactRational;
use cq_core::segre::SegreData;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Whitespace separated rationals (`3`, `-2/5`), one matrix row per line.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<ExactRational>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            line.split_whitespace()
                .map(|t| t.parse::<ExactRational>().map_err(|e| Error::Parse(format!("\"{t}\": {e}"))))
                .collect()
        })
        .collect()
}

/// Segre data given inline as JSON or as `@path`.
pub fn segre_data(arg: &str) -> Result<SegreData> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("Segre data: {e}")))
}

/// `name=value` pairs separated by commas, values rational.
pub fn assignments(arg: &str) -> Result<Vec<(String, ExactRational)>> {
    arg.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value, got \"{pair}\"")))?;
            let value = value.trim().parse::<ExactRational>().map_err(|e| Error::Parse(format!("\"{value}\": {e}")))?;
            Ok((name.trim().to_string(), value))
        })
        .collect()
}
