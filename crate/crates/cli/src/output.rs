//! Rendering of command results as aligned text, CSV or JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from an output file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// What a command produces: either one record of named values or a table.
pub enum Output {
    Record(Vec<(String, String)>),
    Rows {
        headers: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

impl Output {
    pub fn record<K: Into<String>, V: Into<String>>(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        Output::Record(pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }

    pub fn rows<H: Into<String>>(headers: impl IntoIterator<Item = H>, rows: Vec<Vec<String>>) -> Self {
        Output::Rows {
            headers: headers.into_iter().map(Into::into).collect(),
            rows,
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Table => self.write_table(out),
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_table(&self, out: &mut dyn Write) -> io::Result<()> {
        match self {
            Output::Record(pairs) => {
                let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in pairs {
                    writeln!(out, "{k:<width$}  {v}")?;
                }
            }
            Output::Rows { headers, rows } => {
                let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
                for row in rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, &w)| format!("{c:<w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(headers))?;
                for row in rows {
                    writeln!(out, "{}", line(row))?;
                }
            }
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        match self {
            Output::Record(pairs) => {
                writer.write_record(pairs.iter().map(|(k, _)| k))?;
                writer.write_record(pairs.iter().map(|(_, v)| v))?;
            }
            Output::Rows { headers, rows } => {
                writer.write_record(headers)?;
                for row in rows {
                    writer.write_record(row)?;
                }
            }
        }
        writer.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let object = |pairs: &mut dyn Iterator<Item = (&String, &String)>| {
            Value::Object(
                pairs
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect::<Map<_, _>>(),
            )
        };
        let value = match self {
            Output::Record(pairs) => object(&mut pairs.iter().map(|(k, v)| (k, v))),
            Output::Rows { headers, rows } => Value::Array(
                rows.iter()
                    .map(|row| object(&mut headers.iter().zip(row)))
                    .collect(),
            ),
        };
        serde_json::to_writer_pretty(&mut *out, &value)?;
        writeln!(out)
    }
}
