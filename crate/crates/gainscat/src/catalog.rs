//! Catalog file ingestion.
//!
//! Levels file (CSV, header required): `id,energy[,population]`. When the
//! population column is present every row must carry it, and the run must
//! not also specify a temperature. Transitions file: `upper,lower,mu2`.
//! Lines starting with `#` are comments; reals accept decimal notation with
//! an optional exponent.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{Level, Transition, TransitionTable};

/// Parsed levels file; `populations` is present iff the optional column was.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelsCatalog {
    pub levels: Vec<Level>,
    pub populations: Option<Vec<f64>>,
}

pub fn read_levels(path: &Path) -> Result<LevelsCatalog> {
    let text = read_text(path)?;
    let mut rows = content_rows(&text);
    let (header_line, header) = rows
        .next()
        .ok_or_else(|| Error::Config(format!("{}: missing header", path.display())))?;
    let fields = split_fields(header);
    let with_population = match fields.as_slice() {
        ["id", "energy"] => false,
        ["id", "energy", "population"] => true,
        _ => {
            return Err(Error::Config(format!(
                "{}:{}: header must be `id,energy` or `id,energy,population`, got `{}`",
                path.display(),
                header_line,
                header.trim()
            )))
        }
    };
    let expected = if with_population { 3 } else { 2 };

    let mut levels = Vec::new();
    let mut populations = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, row) in rows {
        let fields = split_fields(row);
        if fields.len() != expected {
            return Err(Error::Config(format!(
                "{}:{}: expected {} fields, got {}",
                path.display(),
                line_no,
                expected,
                fields.len()
            )));
        }
        let id = fields[0];
        if id.is_empty() {
            return Err(Error::Config(format!(
                "{}:{}: level id must not be empty",
                path.display(),
                line_no
            )));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::Config(format!(
                "{}:{}: duplicate level id `{id}`",
                path.display(),
                line_no
            )));
        }
        let energy = parse_real(path, line_no, "energy", fields[1])?;
        levels.push(Level::new(id, energy));
        if with_population {
            let p = parse_real(path, line_no, "population", fields[2])?;
            if p < 0.0 {
                return Err(Error::Config(format!(
                    "{}:{}: population must be >= 0, got {p}",
                    path.display(),
                    line_no
                )));
            }
            populations.push(p);
        }
    }
    if levels.is_empty() {
        return Err(Error::Config(format!(
            "{}: no levels defined",
            path.display()
        )));
    }
    Ok(LevelsCatalog {
        levels,
        populations: with_population.then_some(populations),
    })
}

pub fn read_transitions(path: &Path) -> Result<TransitionTable> {
    let text = read_text(path)?;
    let mut rows = content_rows(&text);
    let (header_line, header) = rows
        .next()
        .ok_or_else(|| Error::Config(format!("{}: missing header", path.display())))?;
    if split_fields(header) != ["upper", "lower", "mu2"] {
        return Err(Error::Config(format!(
            "{}:{}: header must be `upper,lower,mu2`, got `{}`",
            path.display(),
            header_line,
            header.trim()
        )));
    }
    let mut transitions = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, row) in rows {
        let fields = split_fields(row);
        if fields.len() != 3 {
            return Err(Error::Config(format!(
                "{}:{}: expected 3 fields, got {}",
                path.display(),
                line_no,
                fields.len()
            )));
        }
        let (upper, lower) = (fields[0], fields[1]);
        if upper.is_empty() || lower.is_empty() {
            return Err(Error::Config(format!(
                "{}:{}: transition ids must not be empty",
                path.display(),
                line_no
            )));
        }
        if !seen.insert((upper.to_string(), lower.to_string())) {
            return Err(Error::Config(format!(
                "{}:{}: duplicate transition ({upper}, {lower})",
                path.display(),
                line_no
            )));
        }
        let mu2 = parse_real(path, line_no, "mu2", fields[2])?;
        if mu2 < 0.0 {
            return Err(Error::Config(format!(
                "{}:{}: mu2 must be >= 0, got {mu2}",
                path.display(),
                line_no
            )));
        }
        transitions.push(Transition::new(upper, lower, mu2));
    }
    TransitionTable::new(transitions)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| {
            let trimmed = line.trim();
            !trimmed.is_empty() && !trimmed.starts_with('#')
        })
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn parse_real(path: &Path, line_no: usize, what: &str, token: &str) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| {
        Error::Config(format!(
            "{}:{}: cannot parse {what} from `{token}`",
            path.display(),
            line_no
        ))
    })?;
    if !value.is_finite() {
        return Err(Error::Config(format!(
            "{}:{}: {what} must be finite, got `{token}`",
            path.display(),
            line_no
        )));
    }
    Ok(value)
}
