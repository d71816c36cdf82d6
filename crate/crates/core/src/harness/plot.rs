//! Tidy per-figure tables for external plotting.

use super::cd::{overlap_from_rows, read_overlap_csv, OVERLAP_CSV};
use super::table::fmt_f64;
use super::{prepare_output_dir, summarize, RUNS_CSV};
use crate::error::{Error, Result};
use std::path::{Path, PathBuf};

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Reads `runs.csv` and/or `cd/overlap.csv` under `input` and writes
/// `convergence.csv`, `resources.csv`, `selection.csv` and `overlap.csv`
/// into `output` for whichever inputs exist.
pub fn write_plot_data(input: &Path, output: &Path, delta_e: f64) -> Result<Vec<PathBuf>> {
    let runs = input.join(RUNS_CSV);
    let overlap = input.join("cd").join(OVERLAP_CSV);
    if !runs.exists() && !overlap.exists() {
        return Err(Error::InvalidArgument(format!("no {RUNS_CSV} or cd/{OVERLAP_CSV} under {}", input.display())));
    }
    prepare_output_dir(output)?;
    let mut written = Vec::new();
    if runs.exists() {
        let s = summarize(&runs, delta_e)?;
        let p = output.join("convergence.csv");
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(["series", "layer", "mean_error", "ci_half_width", "count", "completed"])?;
        for ser in &s.series {
            for l in &ser.layers {
                w.write_record([
                    ser.label.clone(),
                    l.layer.to_string(),
                    fmt_f64(l.mean_error),
                    opt(l.ci_half_width),
                    l.count.to_string(),
                    l.completed.to_string(),
                ])?;
            }
        }
        w.flush()?;
        written.push(p);

        let p = output.join("resources.csv");
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(["series", "metric", "mean", "variance", "reached", "runs"])?;
        for ser in &s.series {
            let r = &ser.resources;
            for (metric, m, v) in [
                ("cnots", r.mean_cnots, r.var_cnots),
                ("parameters", r.mean_params, r.var_params),
                ("layers", r.mean_layers, r.var_layers),
            ] {
                w.write_record([ser.label.clone(), metric.into(), opt(m), opt(v), r.reached.to_string(), r.runs.to_string()])?;
            }
        }
        w.flush()?;
        written.push(p);

        let p = output.join("selection.csv");
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(["series", "layers", "non_sum_x", "fraction"])?;
        for ser in &s.series {
            if let Some(sel) = &ser.selection {
                w.write_record([ser.label.clone(), sel.layers.to_string(), sel.non_sum_x.to_string(), fmt_f64(sel.fraction)])?;
            }
        }
        w.flush()?;
        written.push(p);
    }
    if overlap.exists() {
        let series = overlap_from_rows(&read_overlap_csv(&overlap)?);
        let p = output.join("overlap.csv");
        let mut w = csv::Writer::from_path(&p)?;
        w.write_record(["order", "layer", "probability", "members", "instances"])?;
        for s in &series {
            for l in &s.layers {
                w.write_record([
                    s.order.to_string(),
                    l.layer.to_string(),
                    opt(l.probability),
                    l.members.to_string(),
                    l.instances.to_string(),
                ])?;
            }
        }
        w.flush()?;
        written.push(p);
    }
    Ok(written)
}
