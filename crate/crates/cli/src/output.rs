use std::io::Write;

use serde_json::{Map, Value};

/// One flat output record; keys keep insertion order.
pub type Row = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// CSV text of a cell: strings verbatim, `null` empty, numbers and booleans
/// exactly as JSON prints them.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<(), String> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| e.to_string())?;
            writeln!(out).map_err(|e| e.to_string())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut columns: Vec<&String> = Vec::new();
            for row in rows {
                for k in row.keys() {
                    if !columns.contains(&k) {
                        columns.push(k);
                    }
                }
            }
            w.write_record(&columns).map_err(|e| e.to_string())?;
            for row in rows {
                let cells = columns.iter().map(|c| row.get(*c).map(cell_text).unwrap_or_default());
                w.write_record(cells).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())
        }
    }
}
