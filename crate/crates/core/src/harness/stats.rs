//! Ensemble statistics over run records.

use super::cd::OverlapSeries;
use crate::ansatz::{mixer_selection_stats, Algorithm, PoolKind, RunRecord, SelectionStats};
use crate::error::{Error, Result};
use crate::resources::resources_to_accuracy;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::BTreeMap;

pub const CONFIDENCE: f64 = 0.95;
pub const CI_METHOD: &str =
    "two-sided Student-t interval over instances, df = count - 1; runs that stopped early carry their last error forward";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerStats {
    pub layer: usize,
    pub mean_error: f64,
    /// Absent when fewer than two runs contribute.
    pub ci_half_width: Option<f64>,
    pub ci_degenerate: bool,
    /// Runs contributing to the mean (all runs with at least one layer).
    pub count: usize,
    /// Runs that actually optimized this layer.
    pub completed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceStats {
    pub delta_e: f64,
    /// Runs that reached `delta_e`; means and variances are over these only.
    pub reached: usize,
    pub runs: usize,
    pub mean_cnots: Option<f64>,
    pub var_cnots: Option<f64>,
    pub mean_params: Option<f64>,
    pub var_params: Option<f64>,
    pub mean_layers: Option<f64>,
    pub var_layers: Option<f64>,
    /// Median over all runs, unreached ones ranked last; absent if the median is unreached.
    pub median_layers: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    /// `standard` or `adapt-<pool>`.
    pub label: String,
    pub algorithm: Algorithm,
    pub pool: PoolKind,
    pub runs: usize,
    pub layers: Vec<LayerStats>,
    pub resources: ResourceStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub ci_method: String,
    pub confidence: f64,
    pub delta_e: f64,
    pub series: Vec<SeriesSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlap: Vec<OverlapSeries>,
}

impl EnsembleSummary {
    pub fn series(&self, algorithm: Algorithm, pool: PoolKind) -> Option<&SeriesSummary> {
        self.series.iter().find(|s| s.algorithm == algorithm && s.pool == pool)
    }
}

pub fn series_label(algorithm: Algorithm, pool: PoolKind) -> String {
    match algorithm {
        Algorithm::Standard => "standard".into(),
        Algorithm::Adapt => format!("adapt-{pool}"),
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance; absent below two samples.
fn variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// Half-width `t_{(1+c)/2, k-1} · s / √k` of the Student-t interval.
pub fn student_t_half_width(xs: &[f64], confidence: f64) -> Option<f64> {
    let var = variance(xs)?;
    let df = (xs.len() - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, df).ok()?.inverse_cdf(0.5 + confidence / 2.0);
    Some(t * (var / xs.len() as f64).sqrt())
}

/// Median where `None` stands for a value beyond every finite one.
pub fn median_with_censoring(values: &[Option<usize>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v: Vec<Option<usize>> = values.to_vec();
    v.sort_by_key(|x| x.unwrap_or(usize::MAX));
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2].map(|x| x as f64)
    } else {
        Some((v[k / 2 - 1]? + v[k / 2]?) as f64 / 2.0)
    }
}

fn layer_curve(runs: &[&RunRecord]) -> Vec<LayerStats> {
    let active: Vec<&&RunRecord> = runs.iter().filter(|r| !r.layers.is_empty()).collect();
    let depth = active.iter().map(|r| r.layers.len()).max().unwrap_or(0);
    (1..=depth)
        .map(|layer| {
            let errs: Vec<f64> =
                active.iter().map(|r| r.layers.get(layer - 1).unwrap_or(r.layers.last().unwrap()).energy_error).collect();
            let half = student_t_half_width(&errs, CONFIDENCE);
            LayerStats {
                layer,
                mean_error: mean(&errs).unwrap_or(0.0),
                ci_half_width: half,
                ci_degenerate: half.is_none(),
                count: errs.len(),
                completed: active.iter().filter(|r| r.layers.len() >= layer).count(),
            }
        })
        .collect()
}

fn resource_stats(runs: &[&RunRecord], delta_e: f64) -> ResourceStats {
    let tallies: Vec<_> = runs.iter().filter_map(|r| resources_to_accuracy(r, delta_e)).collect();
    let cnots: Vec<f64> = tallies.iter().map(|t| t.cnots as f64).collect();
    let params: Vec<f64> = tallies.iter().map(|t| t.parameters as f64).collect();
    let layers: Vec<f64> = tallies.iter().map(|t| t.layers as f64).collect();
    let to_acc: Vec<Option<usize>> = runs.iter().map(|r| r.layers_to_accuracy(delta_e)).collect();
    ResourceStats {
        delta_e,
        reached: tallies.len(),
        runs: runs.len(),
        mean_cnots: mean(&cnots),
        var_cnots: variance(&cnots),
        mean_params: mean(&params),
        var_params: variance(&params),
        mean_layers: mean(&layers),
        var_layers: variance(&layers),
        median_layers: median_with_censoring(&to_acc),
    }
}

/// Groups records by (algorithm, pool) and computes every statistic.
/// Uses only fields the CSV carries, so it gives the same answer on
/// records rebuilt from the CSV.
pub fn summarize_records(records: &[RunRecord], delta_e: f64) -> Result<EnsembleSummary> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no run records to summarize".into()));
    }
    let mut groups: BTreeMap<(Algorithm, PoolKind), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.algorithm, r.pool)).or_default().push(r);
    }
    let series = groups
        .into_iter()
        .map(|((algorithm, pool), runs)| {
            let selection = if algorithm == Algorithm::Adapt {
                let owned: Vec<RunRecord> = runs.iter().map(|r| (*r).clone()).collect();
                mixer_selection_stats(&owned, delta_e)?.remove(&pool)
            } else {
                None
            };
            Ok(SeriesSummary {
                label: series_label(algorithm, pool),
                algorithm,
                pool,
                runs: runs.len(),
                layers: layer_curve(&runs),
                resources: resource_stats(&runs, delta_e),
                selection,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleSummary {
        ci_method: CI_METHOD.to_string(),
        confidence: CONFIDENCE,
        delta_e,
        series,
        overlap: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{LayerRecord, RunStatus};

    fn run(algorithm: Algorithm, pool: PoolKind, errors: &[f64], mixers: &[&str]) -> RunRecord {
        RunRecord {
            run_id: format!("{algorithm}-{pool}-{}", errors.len()),
            seed: Some(1),
            n: 6,
            d: Some(3),
            algorithm,
            pool,
            exact_energy: -1.0,
            reference_energy: 0.0,
            layers: errors
                .iter()
                .zip(mixers)
                .enumerate()
                .map(|(k, (e, m))| LayerRecord {
                    layer: k + 1,
                    mixer: m.to_string(),
                    energy: e - 1.0,
                    energy_error: *e,
                    grad_norm: None,
                    n_params: 2 * k + 2,
                    n_cnots: 18 * (k + 1),
                    gradients: vec![],
                })
                .collect(),
            status: RunStatus::LayerBudget,
            final_gradient: None,
            parameters: vec![],
        }
    }

    #[test]
    fn two_sample_t_interval() {
        // t_{0.975, 1} = 12.7062047361747; s of {1, 3} is √2.
        let h = student_t_half_width(&[1.0, 3.0], 0.95).unwrap();
        assert!((h - 12.706_204_736_174_7).abs() < 1e-9, "{h}");
        assert_eq!(student_t_half_width(&[1.0], 0.95), None);
        // Large-sample limit approaches the normal quantile.
        let xs: Vec<f64> = (0..10_000).map(|i| (i % 2) as f64).collect();
        let h = student_t_half_width(&xs, 0.95).unwrap();
        let s = variance(&xs).unwrap().sqrt();
        assert!((h / (s / 100.0) - 1.959_963_984_540_054).abs() < 1e-3);
    }

    #[test]
    fn censored_median() {
        assert_eq!(median_with_censoring(&[Some(3), None, Some(5)]), Some(5.0));
        assert_eq!(median_with_censoring(&[Some(3), None, None]), None);
        assert_eq!(median_with_censoring(&[Some(2), Some(4), Some(9), None]), Some(6.5));
        assert_eq!(median_with_censoring(&[]), None);
    }

    #[test]
    fn carry_forward_and_counts() {
        let recs = vec![
            run(Algorithm::Adapt, PoolKind::Multi, &[0.5, 1e-4], &["Y0Z1", "sumX"]),
            run(Algorithm::Adapt, PoolKind::Multi, &[0.7, 0.3, 0.1], &["Y0Z1", "Z2Y3", "X1"]),
        ];
        let s = summarize_records(&recs, 1e-3).unwrap();
        let m = s.series(Algorithm::Adapt, PoolKind::Multi).unwrap();
        assert_eq!(m.layers.len(), 3);
        assert!((m.layers[2].mean_error - (1e-4 + 0.1) / 2.0).abs() < 1e-15);
        assert_eq!((m.layers[2].count, m.layers[2].completed), (2, 1));
        assert_eq!(m.resources.reached, 1);
        assert_eq!(m.resources.mean_cnots, Some(36.0));
        assert_eq!(m.resources.var_cnots, None);
        assert_eq!(m.resources.median_layers, None);
        let sel = m.selection.as_ref().unwrap();
        // Counted up to the accuracy layer: Y0Z1, sumX | Y0Z1, Z2Y3, X1.
        assert_eq!((sel.layers, sel.non_sum_x), (5, 4));
    }

    #[test]
    fn single_instance_flags_degenerate_ci() {
        let recs = vec![run(Algorithm::Standard, PoolKind::Qaoa, &[0.5, 0.2], &["sumX", "sumX"])];
        let s = summarize_records(&recs, 1e-3).unwrap();
        assert!(s.series[0].layers.iter().all(|l| l.ci_half_width.is_none() && l.ci_degenerate));
        assert!(s.series[0].selection.is_none());
        assert_eq!(s.series[0].label, "standard");
        assert!(summarize_records(&[], 1e-3).is_err());
    }
}
