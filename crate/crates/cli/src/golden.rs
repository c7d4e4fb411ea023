//! Byte-wise comparison of classify output against a stored table.

use std::fs;
use std::path::Path;

use serde::Serialize;

use wpsbir_core::classify::{self, Generality, HypersurfaceProblem};

#[derive(Debug, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Serialize)]
pub struct GoldenReport {
    pub rows: usize,
    pub mismatches: Vec<Mismatch>,
}

/// Rows of `space<TAB>degree<TAB>generality`; `#` starts a comment line.
pub fn read_rows(path: &Path) -> Result<Vec<(String, String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            match cols.as_slice() {
                [s, d, g] => Ok((s.to_string(), d.to_string(), g.to_string())),
                _ => Err(format!("{}:{}: expected 3 tab-separated columns", path.display(), i + 1)),
            }
        })
        .collect()
}

pub fn classify_row(space: &str, degree: &str, generality: &str) -> Result<String, String> {
    let g: Generality = generality.parse().map_err(|e| format!("{e}"))?;
    let p = HypersurfaceProblem::parse(space, degree, g).map_err(|e| format!("{e}"))?;
    serde_json::to_string(&classify::classify(&p)).map_err(|e| e.to_string())
}

pub fn check(fixtures: &Path, golden: &Path) -> Result<GoldenReport, String> {
    let rows = read_rows(fixtures)?;
    let text = fs::read_to_string(golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    let expected: Vec<&str> = text.lines().collect();
    if expected.len() != rows.len() {
        return Err(format!(
            "{} has {} lines but {} has {} rows",
            golden.display(),
            expected.len(),
            fixtures.display(),
            rows.len()
        ));
    }
    let mut mismatches = Vec::new();
    for (i, ((s, d, g), want)) in rows.iter().zip(expected).enumerate() {
        let got = classify_row(s, d, g)?;
        if got != want {
            mismatches.push(Mismatch {
                row: i + 1,
                expected: want.to_string(),
                got,
            });
        }
    }
    Ok(GoldenReport {
        rows: rows.len(),
        mismatches,
    })
}
