//! The consolidated per-layer CSV.

use crate::ansatz::{Algorithm, LayerRecord, PoolKind, RunRecord, RunStatus};
use crate::error::{Error, Result};
use std::path::Path;
use std::str::FromStr;

pub const CSV_COLUMNS: [&str; 13] = [
    "run_id",
    "seed",
    "n",
    "d",
    "algorithm",
    "pool",
    "layer",
    "selected_mixer",
    "energy",
    "energy_error",
    "grad_norm",
    "n_params",
    "n_cnots",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

/// One row per optimized layer, runs in the given order.
pub fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        for l in &r.layers {
            w.write_record([
                r.run_id.clone(),
                opt(r.seed),
                r.n.to_string(),
                opt(r.d),
                r.algorithm.to_string(),
                r.pool.to_string(),
                l.layer.to_string(),
                l.mixer.clone(),
                fmt_f64(l.energy),
                fmt_f64(l.energy_error),
                opt(l.grad_norm.map(fmt_f64)),
                l.n_params.to_string(),
                l.n_cnots.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

struct Row<'a> {
    rec: &'a csv::StringRecord,
    row: usize,
}

impl Row<'_> {
    fn raw(&self, col: usize) -> &str {
        self.rec.get(col).unwrap_or("")
    }

    fn err(&self, col: usize, message: impl Into<String>) -> Error {
        Error::MalformedCsv { row: self.row, column: CSV_COLUMNS[col].to_string(), message: message.into() }
    }

    fn parse<T: FromStr>(&self, col: usize) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(col).parse().map_err(|e: T::Err| self.err(col, format!("{:?}: {e}", self.raw(col))))
    }

    fn parse_opt<T: FromStr>(&self, col: usize) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if self.raw(col).is_empty() {
            Ok(None)
        } else {
            self.parse(col).map(Some)
        }
    }

    fn finite(&self, col: usize) -> Result<f64> {
        let v: f64 = self.parse(col)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.err(col, "non-finite value"))
        }
    }
}

/// Rebuilds run records from the CSV. Fields the CSV does not carry
/// (reference energy, status, parameters) are left at neutral values.
///
/// Rows are numbered from 1 for the first data row after the header.
pub fn read_runs_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_COLUMNS {
        let col = (0..CSV_COLUMNS.len())
            .find(|&i| header.get(i) != Some(CSV_COLUMNS[i]))
            .map_or(String::from("<extra>"), |i| CSV_COLUMNS[i].to_string());
        return Err(Error::MalformedCsv { row: 0, column: col, message: format!("unexpected header {header:?}") });
    }
    let mut records: Vec<RunRecord> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = Row { rec: &rec, row: i + 1 };
        if rec.len() != CSV_COLUMNS.len() {
            let col = rec.len().min(CSV_COLUMNS.len() - 1);
            return Err(row.err(col, format!("expected {} fields, found {}", CSV_COLUMNS.len(), rec.len())));
        }
        let run_id = row.raw(0).to_string();
        if run_id.is_empty() {
            return Err(row.err(0, "empty run id"));
        }
        let seed: Option<u64> = row.parse_opt(1)?;
        let n: usize = row.parse(2)?;
        let d: Option<usize> = row.parse_opt(3)?;
        let algorithm: Algorithm = row.parse(4)?;
        let pool: PoolKind = row.parse(5)?;
        let layer = LayerRecord {
            layer: row.parse(6)?,
            mixer: row.raw(7).to_string(),
            energy: row.finite(8)?,
            energy_error: row.finite(9)?,
            grad_norm: row.parse_opt::<f64>(10)?,
            n_params: row.parse(11)?,
            n_cnots: row.parse(12)?,
            gradients: Vec::new(),
        };
        if layer.mixer.is_empty() {
            return Err(row.err(7, "empty mixer label"));
        }
        if layer.energy_error < 0.0 {
            return Err(row.err(9, "negative energy error"));
        }
        let same_run = records.last().is_some_and(|r| r.run_id == run_id);
        if same_run {
            let r = records.last_mut().unwrap();
            if (r.seed, r.n, r.d, r.algorithm, r.pool) != (seed, n, d, algorithm, pool) {
                return Err(row.err(0, format!("metadata differs from earlier rows of run {run_id}")));
            }
            if layer.layer != r.layers.len() + 1 {
                return Err(row.err(6, format!("expected layer {}, found {}", r.layers.len() + 1, layer.layer)));
            }
            r.layers.push(layer);
        } else {
            if records.iter().any(|r| r.run_id == run_id) {
                return Err(row.err(0, format!("rows of run {run_id} are not contiguous")));
            }
            if layer.layer != 1 {
                return Err(row.err(6, format!("run {run_id} starts at layer {}", layer.layer)));
            }
            records.push(RunRecord {
                run_id,
                seed,
                n,
                d,
                algorithm,
                pool,
                exact_energy: layer.energy - layer.energy_error,
                reference_energy: f64::NAN,
                layers: vec![layer],
                status: RunStatus::LayerBudget,
                final_gradient: None,
                parameters: vec![],
            });
        }
    }
    if records.is_empty() {
        return Err(Error::MalformedCsv { row: 1, column: CSV_COLUMNS[0].into(), message: "no data rows".into() });
    }
    Ok(records)
}
