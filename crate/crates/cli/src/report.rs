use std::path::Path;

use serde_json::{json, Value};

use crate::experiments::CliError;
use crate::output::Row;

pub const REPORT_STEM: &str = "report";

struct Group {
    experiment: String,
    files: Vec<String>,
    rows: Vec<csv::StringRecord>,
    headers: Vec<String>,
}

/// Aggregates every `*.csv` in `dir` (except the report itself) into one row
/// per experiment: file and row counts plus the mean of each numeric column.
pub fn aggregate(dir: &Path) -> Result<Vec<Row>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .filter(|p| p.file_stem().is_some_and(|s| s != REPORT_STEM))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Config(format!("no CSV files in {}", dir.display())));
    }

    let mut groups: Vec<Group> = Vec::new();
    for path in &paths {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::Io(format!("{name}: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let exp_col = headers
            .iter()
            .position(|h| h == "experiment")
            .ok_or_else(|| CliError::Config(format!("{name}: no `experiment` column")))?;
        for rec in reader.records() {
            let rec = rec.map_err(|e| CliError::Io(format!("{name}: {e}")))?;
            let experiment = rec.get(exp_col).unwrap_or_default().to_string();
            let idx = match groups.iter().position(|g| g.experiment == experiment && g.headers == headers) {
                Some(i) => i,
                None => {
                    groups.push(Group {
                        experiment,
                        files: Vec::new(),
                        rows: Vec::new(),
                        headers: headers.clone(),
                    });
                    groups.len() - 1
                }
            };
            let g = &mut groups[idx];
            if !g.files.contains(&name) {
                g.files.push(name.clone());
            }
            g.rows.push(rec);
        }
    }

    Ok(groups.iter().map(summarize).collect())
}

fn summarize(g: &Group) -> Row {
    let mut row = Row::new();
    row.insert("experiment".into(), json!(g.experiment));
    row.insert("files".into(), json!(g.files.len()));
    row.insert("rows".into(), json!(g.rows.len()));
    for (i, h) in g.headers.iter().enumerate() {
        if h == "experiment" || h == "seed" {
            continue;
        }
        let values: Option<Vec<f64>> = g
            .rows
            .iter()
            .map(|r| r.get(i).and_then(|c| c.parse::<f64>().ok()))
            .collect();
        if let Some(v) = values {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            row.insert(format!("mean_{h}"), Value::from(mean));
        }
    }
    row
}
