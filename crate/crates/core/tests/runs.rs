//! End-to-end properties of the adaptive and standard runners and the harness.

use adapt_qaoa::ansatz::{run_adapt, run_standard_qaoa, PoolKind, RunConfig, RunStatus};
use adapt_qaoa::harness::{run_sweep, summarize, ExperimentConfig, RUNS_CSV};
use adapt_qaoa::maxcut::{brute_force_max_cut, generate_regular_graph, WeightedGraph};
use adapt_qaoa::resources::count_resources;
use std::fs;

#[test]
fn unit_edge_is_solved_by_both_runners() {
    let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
    let r = run_adapt::<f64>(&g, PoolKind::Multi, &RunConfig { energy_tol: 1e-6, ..Default::default() }).unwrap();
    assert!(r.layers.len() <= 2 && r.final_error() < 1e-6, "{r:?}");
    let r = run_standard_qaoa::<f64>(&g, &RunConfig { max_layers: 1, ..Default::default() }).unwrap();
    assert!(r.final_error() < 1e-6);
}

#[test]
fn zero_weight_graph_stops_immediately() {
    let g = WeightedGraph::new(4, [(0, 1, 0.0), (2, 3, 0.0)]).unwrap();
    let r = run_adapt::<f64>(&g, PoolKind::Multi, &RunConfig::default()).unwrap();
    assert_eq!(r.status, RunStatus::ConvergedByGradient);
    assert!(r.layers.is_empty());
    assert_eq!(r.final_error(), 0.0);
}

#[test]
fn energies_never_increase_with_depth() {
    let g = generate_regular_graph(6, 3, 31).unwrap();
    let cfg = RunConfig { max_layers: 6, energy_tol: 0.0, ..Default::default() };
    for r in [
        run_adapt::<f64>(&g, PoolKind::Multi, &cfg).unwrap(),
        run_adapt::<f64>(&g, PoolKind::Single, &cfg).unwrap(),
        run_standard_qaoa::<f64>(&g, &cfg).unwrap(),
    ] {
        for w in r.layers.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-9, "{}: {} > {}", r.run_id, w[1].energy, w[0].energy);
        }
        let exact = brute_force_max_cut(&g).energy;
        assert!((r.exact_energy - exact).abs() < 1e-12);
    }
}

#[test]
fn record_round_trips_and_rebuilds_its_ansatz() {
    let g = generate_regular_graph(6, 3, 8).unwrap();
    let r = run_adapt::<f64>(&g, PoolKind::Multi, &RunConfig { max_layers: 3, ..Default::default() }).unwrap();
    assert_eq!(adapt_qaoa::ansatz::RunRecord::from_json(&r.to_json().unwrap()).unwrap(), r);
    let a = r.to_ansatz::<f64>().unwrap();
    let d = adapt_qaoa::maxcut::cost_diagonal::<f64>(&g).unwrap();
    assert!((a.energy(&d).unwrap() - r.final_energy()).abs() < 1e-12);
    assert_eq!(count_resources(&a, &g).unwrap().cnots, r.layers.last().unwrap().n_cnots);
}

#[test]
fn runs_are_reproducible() {
    let g = generate_regular_graph(6, 3, 12).unwrap();
    let cfg = RunConfig { max_layers: 4, ..Default::default() };
    assert_eq!(
        run_adapt::<f64>(&g, PoolKind::Multi, &cfg).unwrap(),
        run_adapt::<f64>(&g, PoolKind::Multi, &cfg).unwrap()
    );
}

#[test]
fn sweep_csv_is_identical_across_job_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = |dir: &std::path::Path| ExperimentConfig {
        n: 6,
        d: 3,
        instance_count: 4,
        base_seed: 40,
        max_layers: 4,
        max_p: 4,
        output_dir: dir.to_path_buf(),
        ..Default::default()
    };
    let sa = run_sweep(&cfg(a.path()), Some(1)).unwrap();
    let sb = run_sweep(&cfg(b.path()), Some(3)).unwrap();
    assert_eq!(fs::read(a.path().join(RUNS_CSV)).unwrap(), fs::read(b.path().join(RUNS_CSV)).unwrap());
    assert_eq!(sa.summary, sb.summary);
    assert_eq!(summarize(a.path().join(RUNS_CSV), 1e-3).unwrap(), sa.summary);
}
