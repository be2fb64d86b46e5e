use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use smale_lab::serial::{format_f64, to_json_string};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub elapsed_seconds: f64,
}

impl Meta {
    pub fn since(start: Instant) -> Self {
        Meta {
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    command: &'a str,
    config: &'a Value,
    result: &'a R,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

/// A flat table; every cell is already formatted.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format_f64(x)
    } else {
        x.to_string()
    }
}

/// Everything one command hands to the writer.
pub struct Artifact<'a, R: Serialize> {
    pub command: &'a str,
    pub config: Value,
    pub result: &'a R,
    pub table: Table,
}

pub fn render<R: Serialize>(
    artifact: &Artifact<'_, R>,
    format: Format,
    meta: Option<Meta>,
) -> io::Result<String> {
    match format {
        Format::Json => {
            let envelope = Envelope {
                command: artifact.command,
                config: &artifact.config,
                result: artifact.result,
                meta,
            };
            let mut text = to_json_string(&envelope).map_err(io::Error::other)?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut text = format!("# command: {}\n", artifact.command);
            text.push_str(&format!("# config: {}\n", artifact.config));
            if let Some(meta) = meta {
                text.push_str(&format!(
                    "# meta: {}\n",
                    serde_json::to_string(&meta).map_err(io::Error::other)?
                ));
            }
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&artifact.table.header)?;
            for row in &artifact.table.rows {
                writer.write_record(row)?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| io::Error::other(e.to_string()))?;
            text.push_str(&String::from_utf8(bytes).expect("csv of UTF-8 cells"));
            Ok(text)
        }
    }
}

pub fn write_text(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
