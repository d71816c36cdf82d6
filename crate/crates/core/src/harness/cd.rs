//! Overlap between adaptive mixer selections and dominant gauge-potential strings.

use super::{prepare_output_dir, split_results, with_jobs, write_failures, write_json, ExperimentConfig, RunFailure};
use super::table::fmt_f64;
use crate::ansatz::{run_adapt, PoolKind, RunRecord};
use crate::counterdiabatic::{overlap_probability, time_averaged_series, DominantSet, LayerOverlap, DOMINANT_SET_SIZE};
use crate::error::{Error, Result};
use crate::maxcut::WeightedGraph;
use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

pub const OVERLAP_CSV: &str = "overlap.csv";
pub const OVERLAP_COLUMNS: [&str; 5] = ["instance_id", "order", "layer", "selected_mixer", "member"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSeries {
    pub order: usize,
    pub layers: Vec<LayerOverlap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub instance_id: u64,
    pub order: usize,
    pub layer: usize,
    pub selected_mixer: String,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdOutcome {
    pub overlap: Vec<OverlapSeries>,
    pub records: Vec<RunRecord>,
    /// Dominant sets per instance, indexed like `records`, one per entry of `cd_orders`.
    pub dominant: Vec<Vec<DominantSet>>,
    pub failures: Vec<RunFailure>,
}

struct Instance {
    seed: u64,
    run: Result<RunRecord>,
    /// `(order, ranking)` for each requested order.
    rankings: Result<Vec<(usize, Vec<(String, f64)>)>>,
}

fn study_instance(g: &WeightedGraph, cfg: &ExperimentConfig) -> Instance {
    let mut run_cfg = cfg.run_config(cfg.cd_layers);
    run_cfg.energy_tol = 0.0;
    let max_order = cfg.cd_orders.iter().copied().max().unwrap_or(1);
    let rankings = time_averaged_series::<f64>(g, max_order, cfg.cd_grid).map(|series| {
        cfg.cd_orders
            .iter()
            .map(|&o| (o, series[o - 1].ranking().into_iter().map(|(p, c)| (p.label(), c)).collect()))
            .collect()
    });
    Instance { seed: g.seed().unwrap_or_default(), run: run_adapt::<f64>(g, PoolKind::Multi, &run_cfg), rankings }
}

/// Grows adaptive multi-pool runs to `cd_layers` layers (energy stop
/// disabled), ranks gauge-potential strings per order and tabulates how
/// often each layer's mixer is in the instance's dominant set.
pub fn run_cd_study(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<CdOutcome> {
    cfg.validate()?;
    if cfg.cd_orders.is_empty() {
        return Err(Error::InvalidArgument("cd_orders must not be empty".into()));
    }
    let out = cfg.output_dir.join("cd");
    prepare_output_dir(&out)?;
    let graphs = cfg.graphs()?;
    info!("cd-study: {} instances, orders {:?}", graphs.len(), cfg.cd_orders);
    let instances: Vec<Instance> = with_jobs(jobs, || graphs.par_iter().map(|g| study_instance(g, cfg)).collect())?;

    let mut results = Vec::new();
    let mut rankings = Vec::new();
    for inst in instances {
        let id = format!("cd-s{}", inst.seed);
        match inst.rankings {
            Ok(r) => {
                rankings.push((inst.seed, r));
                results.push((id, inst.run));
            }
            Err(e) => results.push((id, Err(e))),
        }
    }
    let (records, failures) = split_results(results);
    let kept: Vec<_> =
        rankings.into_iter().filter(|(s, _)| records.iter().any(|r| r.seed == Some(*s))).collect();

    let run_dir = out.join("runs");
    fs::create_dir_all(&run_dir)?;
    for r in &records {
        write_json(&run_dir.join(format!("{}.json", r.run_id)), r)?;
    }
    for (seed, per_order) in &kept {
        let mut w = csv::Writer::from_path(out.join(format!("ranking-s{seed}.csv")))?;
        w.write_record(["order", "rank", "label", "coefficient"])?;
        for (order, ranking) in per_order {
            for (rank, (label, c)) in ranking.iter().enumerate() {
                w.write_record([order.to_string(), (rank + 1).to_string(), label.clone(), fmt_f64(*c)])?;
            }
        }
        w.flush()?;
    }

    let dominant: Vec<Vec<DominantSet>> = kept
        .iter()
        .map(|(_, per_order)| {
            per_order
                .iter()
                .map(|(_, r)| DominantSet { strings: r.iter().take(DOMINANT_SET_SIZE).map(|(l, _)| l.clone()).collect() })
                .collect()
        })
        .collect();
    let mut overlap = Vec::new();
    let mut w = csv::Writer::from_path(out.join(OVERLAP_CSV))?;
    w.write_record(OVERLAP_COLUMNS)?;
    for (k, &order) in cfg.cd_orders.iter().enumerate() {
        let sets: Vec<DominantSet> = dominant.iter().map(|d| d[k].clone()).collect();
        overlap.push(OverlapSeries { order, layers: overlap_probability(&records, &sets, cfg.cd_layers)? });
        for (r, set) in records.iter().zip(&sets) {
            for l in &r.layers {
                w.write_record([
                    r.seed.unwrap_or_default().to_string(),
                    order.to_string(),
                    l.layer.to_string(),
                    l.mixer.clone(),
                    set.contains_label(&l.mixer, r.n).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    write_json(&out.join("overlap.json"), &overlap)?;
    write_json(&out.join("config.json"), cfg)?;
    write_failures(&out, &failures)?;
    Ok(CdOutcome { overlap, records, dominant, failures })
}

/// Reads the overlap table back.
pub fn read_overlap_csv(path: impl AsRef<Path>) -> Result<Vec<OverlapRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != OVERLAP_COLUMNS {
        return Err(Error::MalformedCsv { row: 0, column: "header".into(), message: format!("unexpected header {header:?}") });
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::MalformedCsv {
                row: i + 1,
                column: e
                    .position()
                    .and_then(|_| match e.kind() {
                        csv::ErrorKind::Deserialize { err, .. } => err.field().map(|f| OVERLAP_COLUMNS[f as usize].to_string()),
                        _ => None,
                    })
                    .unwrap_or_else(|| "?".into()),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Aggregates overlap rows into per-order, per-layer probabilities.
pub fn overlap_from_rows(rows: &[OverlapRow]) -> Vec<OverlapSeries> {
    let mut orders: Vec<usize> = rows.iter().map(|r| r.order).collect();
    orders.sort_unstable();
    orders.dedup();
    orders
        .into_iter()
        .map(|order| {
            let sel: Vec<&OverlapRow> = rows.iter().filter(|r| r.order == order).collect();
            let depth = sel.iter().map(|r| r.layer).max().unwrap_or(0);
            let layers = (1..=depth)
                .map(|layer| {
                    let at: Vec<&&OverlapRow> = sel.iter().filter(|r| r.layer == layer).collect();
                    let members = at.iter().filter(|r| r.member).count();
                    let instances = at.len();
                    LayerOverlap {
                        layer,
                        members,
                        instances,
                        probability: (instances > 0).then(|| members as f64 / instances as f64),
                    }
                })
                .collect();
            OverlapSeries { order, layers }
        })
        .collect()
}
