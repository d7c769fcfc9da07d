//! Table, summary and plot-data writers shared by the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::{Format, OutputConfig};
use crate::error::{CliError, CliResult};

/// Above this many decades a norm is written as `10^x`.
pub const LOG10_CUTOFF: f64 = 300.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
    /// A positive quantity given by its base-10 logarithm.
    Log10(f64),
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
            Cell::Log10(l) if *l > LOG10_CUTOFF => format!("10^{l}"),
            Cell::Log10(l) => fmt_f64(10f64.powf(*l)),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
            Cell::Log10(l) if *l > LOG10_CUTOFF => json!(format!("10^{l}")),
            Cell::Log10(l) => num(10f64.powf(*l)),
        }
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number, or null when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub struct PlotFile {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Option<Value>,
    pub plots: Vec<PlotFile>,
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io { path: path.display().to_string(), source: e }
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn rows_json(report: &Report) -> Value {
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (h, c) in report.header.iter().zip(r) {
                m.insert((*h).to_string(), c.json());
            }
            Value::Object(m)
        })
        .collect();
    Value::Array(rows)
}

/// Where the summary goes in csv format.
pub fn summary_path(cfg: &OutputConfig) -> Option<PathBuf> {
    if let Some(p) = &cfg.summary {
        return Some(p.clone());
    }
    let p = cfg.path.as_ref()?;
    if p.extension().is_some_and(|e| e == "json") {
        Some(p.with_extension("summary.json"))
    } else {
        Some(p.with_extension("json"))
    }
}

fn write_json(value: &Value, path: Option<&Path>) -> CliResult<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Output(e.to_string()))
}

pub fn emit(report: &Report, cfg: &OutputConfig) -> CliResult<()> {
    match cfg.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(cfg.path.as_deref())?);
            w.write_record(&report.header)?;
            for r in &report.rows {
                w.write_record(r.iter().map(Cell::csv))?;
            }
            w.flush().map_err(|e| CliError::Output(e.to_string()))?;
            if let Some(s) = &report.summary {
                match summary_path(cfg) {
                    Some(p) => write_json(s, Some(&p))?,
                    None => {
                        let text = serde_json::to_string_pretty(s)?;
                        eprintln!("{text}");
                    }
                }
            }
        }
        Format::Json => {
            let mut doc = Map::new();
            if let Some(s) = &report.summary {
                doc.insert("summary".into(), s.clone());
            }
            doc.insert("rows".into(), rows_json(report));
            write_json(&Value::Object(doc), cfg.path.as_deref())?;
        }
    }
    if let Some(dir) = &cfg.plot_data {
        write_plots(&report.plots, dir)?;
    }
    Ok(())
}

fn write_plots(plots: &[PlotFile], dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    for p in plots {
        let path = dir.join(format!("{}.dat", p.name));
        let mut w = create(&path)?;
        let mut text = format!("# {}\n", p.columns.join(" "));
        for r in &p.rows {
            let line: Vec<String> = r.iter().map(|x| fmt_f64(*x)).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(io_err(&path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_digits() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-200, 6.02214076e23] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn huge_norms_are_written_as_powers() {
        assert_eq!(Cell::Log10(412.5).csv(), "10^412.5");
        assert_eq!(Cell::Log10(2.0).csv(), fmt_f64(100.00000000000000));
        assert_eq!(Cell::Log10(412.5).json(), json!("10^412.5"));
    }

    #[test]
    fn summary_sits_next_to_the_table() {
        let cfg = OutputConfig { path: Some("out/run.csv".into()), ..Default::default() };
        assert_eq!(summary_path(&cfg).unwrap(), PathBuf::from("out/run.json"));
        let cfg = OutputConfig { path: Some("run.json".into()), ..Default::default() };
        assert_eq!(summary_path(&cfg).unwrap(), PathBuf::from("run.summary.json"));
        assert_eq!(summary_path(&OutputConfig::default()), None);
    }
}
