//! CSV and JSON-lines tables.
//!
//! Column order: scan coordinate, parameters, key rate, `e_ZZ`, `e_XX`, then
//! diagnostics. Floats are printed with 12 significant digits. Failed rows
//! leave the numeric cells empty (CSV) or `null` (JSON) and carry the reason
//! in `status`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{KeyRatePoint, OutputFormat, SweepKind};
use crate::error::{Error, Result};

const LOSS_COLUMNS: &[&str] = &[
    "loss_db",
    "eps",
    "delta",
    "key_rate",
    "e_zz",
    "e_xx",
    "omega_ref",
    "omega_ref_upper",
    "omega_upper",
    "delta_vir_lower",
    "zeta_obs",
    "cond_s",
    "clamp_events",
    "status",
];

const FREQUENCY_COLUMNS: &[&str] = &[
    "frequency_ghz",
    "loss_db",
    "eps",
    "delta",
    "key_rate",
    "e_zz",
    "e_xx",
    "key_rate_per_second",
    "omega_ref",
    "omega_ref_upper",
    "omega_upper",
    "delta_vir_lower",
    "zeta_obs",
    "cond_s",
    "clamp_events",
    "status",
];

pub fn columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::Loss => LOSS_COLUMNS,
        SweepKind::Frequency => FREQUENCY_COLUMNS,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Missing,
}

fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn row_cells(p: &KeyRatePoint) -> Result<Vec<Cell>> {
    if let Some(e) = &p.estimate {
        e.validate().map_err(|why| {
            Error::InvalidInput(format!("row at loss {} dB, eps {:e} fails validation: {why}", p.loss_db, p.eps))
        })?;
    }
    let est = |f: fn(&crate::estimator::EstimationResult) -> f64| p.estimate.as_ref().map_or(Cell::Missing, |e| Cell::Num(f(e)));

    let mut cells = Vec::with_capacity(16);
    match p.kind {
        SweepKind::Loss => cells.extend([Cell::Num(p.loss_db), Cell::Num(p.eps), Cell::Num(p.delta)]),
        SweepKind::Frequency => cells.extend([
            Cell::Num(p.frequency_ghz.unwrap_or(f64::NAN)),
            Cell::Num(p.loss_db),
            Cell::Num(p.eps),
            Cell::Num(p.delta),
        ]),
    }
    cells.extend([est(|e| e.key_rate), est(|e| e.e_zz), est(|e| e.e_xx)]);
    if p.kind == SweepKind::Frequency {
        cells.push(p.key_rate_per_second.map_or(Cell::Missing, Cell::Num));
    }
    cells.extend([
        est(|e| e.omega_ref),
        est(|e| e.omega_ref_upper),
        est(|e| e.omega_upper),
        est(|e| e.delta_vir_lower),
        est(|e| e.zeta_obs),
        est(|e| e.cond_s),
        p.estimate.as_ref().map_or(Cell::Missing, |e| Cell::Int(e.clamp_events)),
        Cell::Text(match &p.error {
            None => "ok".to_string(),
            Some(why) => format!("error: {why}"),
        }),
    ]);
    Ok(cells)
}

/// Writes the table for `points` (all of one sweep kind) to `out`.
pub fn emit_table<W: Write>(points: &[KeyRatePoint], format: OutputFormat, out: W) -> Result<()> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("cannot emit an empty table".into()))?;
    let kind = first.kind;
    if points.iter().any(|p| p.kind != kind) {
        return Err(Error::InvalidInput("table mixes loss and frequency rows".into()));
    }
    let cols = columns(kind);

    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(cols).map_err(csv_err)?;
            for p in points {
                let record: Vec<String> = row_cells(p)?
                    .into_iter()
                    .map(|c| match c {
                        Cell::Num(v) => fmt_num(v),
                        Cell::Int(n) => n.to_string(),
                        Cell::Text(s) => s,
                        Cell::Missing => String::new(),
                    })
                    .collect();
                w.write_record(&record).map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::JsonLines => {
            let mut w = out;
            let header = serde_json::json!({ "columns": cols });
            writeln!(w, "{header}")?;
            for p in points {
                // Built by hand to keep column order and the fixed float format.
                let fields: Vec<String> = cols
                    .iter()
                    .zip(row_cells(p)?)
                    .map(|(name, cell)| {
                        let value = match cell {
                            Cell::Num(v) => fmt_num(v),
                            Cell::Int(n) => n.to_string(),
                            Cell::Text(s) => serde_json::Value::String(s).to_string(),
                            Cell::Missing => "null".to_string(),
                        };
                        format!("\"{name}\":{value}")
                    })
                    .collect();
                writeln!(w, "{{{}}}", fields.join(","))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidInput(format!("csv: {other:?}")),
    }
}

/// [`emit_table`] into a file at `path`.
pub fn write_table(points: &[KeyRatePoint], format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    emit_table(points, format, BufWriter::new(file))
}
