use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// What a subcommand produced: a summary line for stdout, a CSV body and
/// a structured JSON summary.
#[derive(Debug)]
pub struct Report {
    pub line: String,
    pub csv: String,
    pub summary: Summary,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub fits: Value,
}

/// Two-column `key,value` table; floats use 15 significant digits.
#[derive(Debug, Default)]
pub struct KeyValueCsv {
    rows: Vec<(String, String)>,
}

impl KeyValueCsv {
    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        self.rows.push((key.to_string(), format!("{value:.14e}")));
        self
    }

    pub fn int(&mut self, key: &str, value: impl Into<u128>) -> &mut Self {
        self.rows.push((key.to_string(), value.into().to_string()));
        self
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        self.rows.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.rows {
            out.push_str(k);
            out.push(',');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

pub fn json_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_report(report: &Report, csv_path: &Path) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    fs::write(csv_path, &report.csv).map_err(io(csv_path))?;
    let json_path = json_path(csv_path);
    let mut body = serde_json::to_string_pretty(&report.summary).expect("summary serializes");
    body.push('\n');
    fs::write(&json_path, body).map_err(io(&json_path))?;
    Ok(())
}
