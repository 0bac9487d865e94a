//! CSV and JSON persistence.
//!
//! Numbers are written in scientific notation with nine significant
//! digits; every CSV starts with a header naming each column and its unit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::CliError;

pub const MANIFEST: &str = "manifest.json";
pub const TIMESERIES: &str = "timeseries.csv";
pub const LOADS: &str = "loads.csv";
pub const STATS: &str = "stats.csv";
pub const SOBOL: &str = "sobol.csv";
pub const PF: &str = "pf.csv";
pub const FIELD_STATS: &str = "field_stats.csv";
pub const REALIZATIONS: &str = "realizations.csv";
pub const COMPARE: &str = "compare.csv";

/// `1.23456789e2`; `NaN` for undefined values.
pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `fields_<year>.csv`, with the year printed without trailing zeros.
pub fn fields_file_name(year: f64) -> String {
    let rounded = (year * 100.0).round() / 100.0;
    format!("fields_{rounded}.csv")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_csv<I>(path: &Path, header: &[String], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let err = |e: csv::Error| CliError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Column label `name [unit]`.
pub fn col(name: &str, unit: &str) -> String {
    format!("{name} [{unit}]")
}

/// Header and numeric rows of a CSV written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let err = |e: csv::Error| CliError::io(path, e.into());
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    let header = r.headers().map_err(err)?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(err)?;
        let row = rec
            .iter()
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    CliError::Validation(format!("{}: row {}: '{s}' is not a number", path.display(), i + 2))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub tool_version: String,
    pub core_version: String,
    pub config_path: PathBuf,
    /// SHA-256 of the config file bytes as read.
    pub config_sha256: String,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Fully resolved configuration, defaults included.
    pub config: Config,
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Validation(format!("cannot serialize manifest: {e}")))?;
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let text = serde_json::to_string(value)
        .map_err(|e| CliError::Validation(format!("cannot serialize {}: {e}", path.display())))?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Temperature statistics fields read back from a bundle, grouped by time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub time: f64,
    pub x: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

pub fn read_field_stats(dir: &Path) -> Result<Vec<FieldTable>, CliError> {
    let path = dir.join(FIELD_STATS);
    let (_, rows) = read_csv(&path)?;
    let mut out: Vec<FieldTable> = Vec::new();
    for row in rows {
        if row.len() != 4 {
            return Err(CliError::Validation(format!(
                "{}: expected 4 columns, found {}",
                path.display(),
                row.len()
            )));
        }
        match out.last_mut() {
            Some(t) if t.time == row[0] => {
                t.x.push(row[1]);
                t.mean.push(row[2]);
                t.std.push(row[3]);
            }
            _ => out.push(FieldTable {
                time: row[0],
                x: vec![row[1]],
                mean: vec![row[2]],
                std: vec![row[3]],
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(1500.0), "1.50000000e3");
        assert_eq!(num(-0.000123456789123), "-1.23456789e-4");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(1.0 / 3.0).len(), "3.33333333e-1".len());
    }

    #[test]
    fn field_file_names() {
        assert_eq!(fields_file_name(5.0), "fields_5.csv");
        assert_eq!(fields_file_name(2.5), "fields_2.5.csv");
        assert_eq!(fields_file_name(0.0), "fields_0.csv");
        assert_eq!(fields_file_name(5.000000000001), "fields_5.csv");
    }

    #[test]
    fn sha_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
