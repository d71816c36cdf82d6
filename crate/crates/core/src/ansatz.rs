//! Mixer pools, gradient-driven mixer selection, the adaptive layer-growing
//! loop and the fixed-mixer QAOA baseline.

use crate::error::{Error, Result};
use crate::maxcut::{cost_diagonal, exact_ground, WeightedGraph};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::resources;
use crate::scalar::Real;
use crate::simplex::{minimize, OptimizerConfig};
use crate::state::{CostDiagonal, Generator, StateVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Label of the collective `Σ_i X_i` mixer.
pub const SUM_X_LABEL: &str = "sumX";
/// Label of the collective `Σ_i Y_i` candidate (always removed by the flip filter).
pub const SUM_Y_LABEL: &str = "sumY";

#[derive(Clone, Debug, PartialEq)]
pub enum MixerBody<T> {
    String(PauliString),
    Collective(PauliSum<T>),
}

/// A Hermitian layer generator `A` with a printable label.
#[derive(Clone, Debug, PartialEq)]
pub struct MixerOperator<T> {
    body: MixerBody<T>,
    label: String,
}

impl<T: Real> MixerOperator<T> {
    pub fn pauli(p: PauliString) -> Result<Self> {
        if p.phase() != 0 {
            return Err(Error::NotHermitian(p.to_string()));
        }
        Ok(MixerOperator { label: p.label(), body: MixerBody::String(p) })
    }

    /// Collective mixer; terms must be Hermitian and pairwise commuting.
    pub fn collective(sum: PauliSum<T>, label: impl Into<String>) -> Result<Self> {
        if let Some((p, q)) = sum.first_noncommuting_pair() {
            return Err(Error::NonCommuting(p.label(), q.label()));
        }
        if !sum.is_hermitian() {
            return Err(Error::NotHermitian(sum.to_string()));
        }
        Ok(MixerOperator { body: MixerBody::Collective(sum), label: label.into() })
    }

    pub fn sum_x(n: usize) -> Self {
        Self::collective(PauliSum::sum_x(n), SUM_X_LABEL).expect("ΣX terms commute")
    }

    pub fn sum_y(n: usize) -> Self {
        Self::collective(PauliSum::collective(n, Pauli::Y), SUM_Y_LABEL).expect("ΣY terms commute")
    }

    /// Resolves a pool label (`"sumX"`, `"sumY"` or a Pauli label like `"Y0Z3"`).
    pub fn from_label(label: &str, n: usize) -> Result<Self> {
        match label {
            SUM_X_LABEL => Ok(Self::sum_x(n)),
            SUM_Y_LABEL => Ok(Self::sum_y(n)),
            _ => Self::pauli(PauliString::parse(label, n)?),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn body(&self) -> &MixerBody<T> {
        &self.body
    }

    pub fn is_collective(&self) -> bool {
        matches!(self.body, MixerBody::Collective(_))
    }

    pub fn as_pauli_string(&self) -> Option<&PauliString> {
        match &self.body {
            MixerBody::String(p) => Some(p),
            MixerBody::Collective(_) => None,
        }
    }

    /// Pauli-sum form of the operator.
    pub fn to_pauli_sum(&self) -> PauliSum<T> {
        match &self.body {
            MixerBody::String(p) => PauliSum::from_string(p, T::one()),
            MixerBody::Collective(s) => s.clone(),
        }
    }

    /// `true` iff the operator commutes with `F = ⊗X`.
    pub fn commutes_with_flip(&self) -> bool {
        match &self.body {
            MixerBody::String(p) => p.commutes_with_flip(),
            MixerBody::Collective(s) => s.iter().all(|(p, _)| p.commutes_with_flip()),
        }
    }

    /// CNOTs needed for `e^{-iβA}` under [`resources::mixer_cnots`].
    pub fn cnot_cost(&self) -> usize {
        match &self.body {
            MixerBody::String(p) => resources::pauli_rotation_cnots(p),
            MixerBody::Collective(s) => s.iter().map(|(p, _)| resources::pauli_rotation_cnots(p)).sum(),
        }
    }
}

impl<T: Real> Generator<T> for MixerOperator<T> {
    fn num_qubits(&self) -> usize {
        match &self.body {
            MixerBody::String(p) => p.num_qubits(),
            MixerBody::Collective(s) => s.num_qubits(),
        }
    }

    fn apply(&self, amps: &[Complex<T>], out: &mut [Complex<T>]) {
        match &self.body {
            MixerBody::String(p) => p.apply(amps, out),
            MixerBody::Collective(s) => s.apply(amps, out),
        }
    }

    fn rotate(&self, state: &mut StateVector<T>, beta: T) -> Result<()> {
        match &self.body {
            MixerBody::String(p) => state.apply_pauli_rotation(p, beta),
            MixerBody::Collective(s) => {
                if state.num_qubits() != s.num_qubits() {
                    return Err(Error::SizeMismatch(state.num_qubits(), s.num_qubits()));
                }
                // Commutation and Hermiticity were checked at construction.
                state.rotate_commuting_sum(s, beta);
                Ok(())
            }
        }
    }
}

impl<T: Real> fmt::Display for MixerOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolKind {
    Qaoa,
    Single,
    Multi,
}

impl PoolKind {
    pub const ALL: [PoolKind; 3] = [PoolKind::Qaoa, PoolKind::Single, PoolKind::Multi];

    pub fn as_str(&self) -> &'static str {
        match self {
            PoolKind::Qaoa => "qaoa",
            PoolKind::Single => "single",
            PoolKind::Multi => "multi",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qaoa" => Ok(PoolKind::Qaoa),
            "single" => Ok(PoolKind::Single),
            "multi" => Ok(PoolKind::Multi),
            _ => Err(Error::InvalidArgument(format!("unknown pool kind {s:?} (expected qaoa, single or multi)"))),
        }
    }
}

/// Candidate mixers that survived the flip-symmetry filter, in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct MixerPool<T> {
    kind: PoolKind,
    n: usize,
    operators: Vec<MixerOperator<T>>,
}

impl<T: Real> MixerPool<T> {
    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[MixerOperator<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.operators.iter().map(|o| o.label()).collect()
    }
}

/// Every candidate of a pool before symmetry filtering, in canonical order:
/// collectives first, then single-site `X_i`/`Y_i` by qubit, then two-qubit
/// strings `B_i C_j` lexicographic in `(i, j, B, C)`.
pub fn pool_candidates<T: Real>(kind: PoolKind, n: usize) -> Result<Vec<MixerOperator<T>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("mixer pools need at least 2 qubits, got {n}")));
    }
    let mut out = vec![MixerOperator::sum_x(n)];
    if kind == PoolKind::Qaoa {
        return Ok(out);
    }
    out.push(MixerOperator::sum_y(n));
    for i in 0..n {
        for p in [Pauli::X, Pauli::Y] {
            out.push(MixerOperator::pauli(PauliString::single(n, i, p)?)?);
        }
    }
    if kind == PoolKind::Multi {
        for i in 0..n {
            for j in i + 1..n {
                for b in [Pauli::X, Pauli::Y, Pauli::Z] {
                    for c in [Pauli::X, Pauli::Y, Pauli::Z] {
                        out.push(MixerOperator::pauli(PauliString::from_sites(n, &[(i, b), (j, c)])?)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Builds a pool, keeping only candidates that commute with `F = ⊗X`.
pub fn build_pool<T: Real>(kind: PoolKind, n: usize) -> Result<MixerPool<T>> {
    let operators = pool_candidates(kind, n)?.into_iter().filter(|o| o.commutes_with_flip()).collect();
    Ok(MixerPool { kind, n, operators })
}

/// Outcome of a gradient sweep over a pool.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection<T> {
    pub index: usize,
    pub gradients: Vec<T>,
    pub max_abs_gradient: T,
}

/// Picks the pool operator with the largest `|gradient_component|` at `gamma0`.
/// Ties go to the earliest operator in pool order.
pub fn select_mixer<T: Real>(
    state: &StateVector<T>,
    d: &CostDiagonal<T>,
    pool: &MixerPool<T>,
    gamma0: T,
) -> Result<Selection<T>> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("empty mixer pool".into()));
    }
    let gradients =
        pool.operators.iter().map(|op| state.gradient_component(d, op, gamma0)).collect::<Result<Vec<T>>>()?;
    let mut index = 0;
    let mut max_abs = T::zero();
    for (k, g) in gradients.iter().enumerate() {
        if g.abs() > max_abs {
            max_abs = g.abs();
            index = k;
        }
    }
    Ok(Selection { index, gradients, max_abs_gradient: max_abs })
}

/// Alternating-operator ansatz `Π_k e^{-iβ_k A_k} e^{-iγ_k H_C} |+⟩^{⊗n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz<T> {
    n: usize,
    layers: Vec<Layer<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<T> {
    pub mixer: MixerOperator<T>,
    pub gamma: T,
    pub beta: T,
}

impl<T: Real> Ansatz<T> {
    pub fn new(n: usize) -> Self {
        Ansatz { n, layers: Vec::new() }
    }

    /// Standard depth-`p` QAOA ansatz with every mixer `ΣX`.
    pub fn standard(n: usize, params: &[T]) -> Result<Self> {
        let mixers = vec![MixerOperator::sum_x(n); params.len() / 2];
        Self::from_parts(n, mixers, params)
    }

    /// Builds layers from mixers and a flat `[γ_1, β_1, γ_2, β_2, …]` vector.
    pub fn from_parts(n: usize, mixers: Vec<MixerOperator<T>>, params: &[T]) -> Result<Self> {
        if params.len() != 2 * mixers.len() {
            return Err(Error::InvalidArgument(format!(
                "{} parameters for {} layers (expected two per layer)",
                params.len(),
                mixers.len()
            )));
        }
        let mut a = Ansatz::new(n);
        for (m, gb) in mixers.into_iter().zip(params.chunks_exact(2)) {
            a.push(m, gb[0], gb[1])?;
        }
        Ok(a)
    }

    pub fn push(&mut self, mixer: MixerOperator<T>, gamma: T, beta: T) -> Result<()> {
        if mixer.num_qubits() != self.n {
            return Err(Error::SizeMismatch(self.n, mixer.num_qubits()));
        }
        self.layers.push(Layer { mixer, gamma, beta });
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn num_parameters(&self) -> usize {
        2 * self.layers.len()
    }

    pub fn parameters(&self) -> Vec<T> {
        self.layers.iter().flat_map(|l| [l.gamma, l.beta]).collect()
    }

    pub fn mixers(&self) -> Vec<MixerOperator<T>> {
        self.layers.iter().map(|l| l.mixer.clone()).collect()
    }

    pub fn prepare(&self, d: &CostDiagonal<T>) -> Result<StateVector<T>> {
        let mut s = StateVector::plus(self.n)?;
        for l in &self.layers {
            s.apply_cost_phase(d, l.gamma)?;
            l.mixer.rotate(&mut s, l.beta)?;
        }
        Ok(s)
    }

    pub fn energy(&self, d: &CostDiagonal<T>) -> Result<T> {
        self.prepare(d)?.expectation(d)
    }
}

/// State of the ansatz defined by `mixers` and a flat parameter vector.
pub fn prepare_state<T: Real>(
    n: usize,
    mixers: &[MixerOperator<T>],
    params: &[T],
    d: &CostDiagonal<T>,
) -> Result<StateVector<T>> {
    let mut s = StateVector::plus(n)?;
    for (m, gb) in mixers.iter().zip(params.chunks_exact(2)) {
        s.apply_cost_phase(d, gb[0])?;
        m.rotate(&mut s, gb[1])?;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Standard,
    Adapt,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Standard => "standard",
            Algorithm::Adapt => "adapt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Algorithm::Standard),
            "adapt" => Ok(Algorithm::Adapt),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    ConvergedByGradient,
    ConvergedByEnergy,
    LayerBudget,
}

/// One optimized layer of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub layer: usize,
    pub mixer: String,
    pub energy: f64,
    pub energy_error: f64,
    /// ∞-norm of the pool gradient when this layer's mixer was selected.
    pub grad_norm: Option<f64>,
    pub n_params: usize,
    pub n_cnots: usize,
    /// Full pool gradient at selection, in pool order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gradients: Vec<f64>,
}

/// Everything recorded for one (graph, algorithm, pool) run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub d: Option<usize>,
    pub algorithm: Algorithm,
    pub pool: PoolKind,
    pub exact_energy: f64,
    /// `⟨+|H_C|+⟩`, the zero-layer energy.
    pub reference_energy: f64,
    pub layers: Vec<LayerRecord>,
    pub status: RunStatus,
    /// Gradient ∞-norm of the sweep that ended the run, when one did.
    pub final_gradient: Option<f64>,
    /// Optimized `[γ_1, β_1, …]` of the final ansatz.
    pub parameters: Vec<f64>,
}

impl RunRecord {
    pub fn final_energy(&self) -> f64 {
        self.layers.last().map_or(self.reference_energy, |l| l.energy)
    }

    pub fn final_error(&self) -> f64 {
        self.layers.last().map_or(self.reference_energy - self.exact_energy, |l| l.energy_error)
    }

    /// First layer (1-based) whose energy error is at most `delta_e`.
    pub fn layers_to_accuracy(&self, delta_e: f64) -> Option<usize> {
        self.layers.iter().find(|l| l.energy_error <= delta_e).map(|l| l.layer)
    }

    pub fn mixer_labels(&self) -> Vec<&str> {
        self.layers.iter().map(|l| l.mixer.as_str()).collect()
    }

    /// Rebuilds the optimized ansatz from labels and parameters.
    pub fn to_ansatz<T: Real>(&self) -> Result<Ansatz<T>> {
        let mixers = self.layers.iter().map(|l| MixerOperator::from_label(&l.mixer, self.n)).collect::<Result<Vec<_>>>()?;
        let params: Vec<T> = self.parameters.iter().map(|&p| T::lit(p)).collect();
        Ansatz::from_parts(self.n, mixers, &params)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Stopping rules and seeds shared by the adaptive and standard runners.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Layer budget (the depth `p` for the standard runner).
    pub max_layers: usize,
    /// Stop when the pool gradient ∞-norm falls below this.
    pub grad_tol: f64,
    /// Stop once the energy error falls below this; `0` disables the check.
    pub energy_tol: f64,
    /// `γ` used for gradient measurement and for seeding new layers.
    pub gamma0: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_layers: 10, grad_tol: 1e-4, energy_tol: 1e-3, gamma0: 0.01, optimizer: OptimizerConfig::default() }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_layers == 0 {
            return Err(Error::InvalidArgument("max_layers must be at least 1".into()));
        }
        if !(self.grad_tol >= 0.0 && self.energy_tol >= 0.0 && self.gamma0.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid run tolerances: {self:?}")));
        }
        Ok(())
    }
}

fn run_id(g: &WeightedGraph, algorithm: Algorithm, pool: PoolKind) -> String {
    let d = g.degree().map_or("x".to_string(), |d| d.to_string());
    let seed = g.seed().map_or("x".to_string(), |s| s.to_string());
    match algorithm {
        Algorithm::Standard => format!("standard-n{}-d{d}-s{seed}", g.num_vertices()),
        Algorithm::Adapt => format!("adapt-{pool}-n{}-d{d}-s{seed}", g.num_vertices()),
    }
}

struct Problem<T> {
    n: usize,
    diag: CostDiagonal<T>,
    exact: T,
    edges: usize,
}

impl<T: Real> Problem<T> {
    fn new(g: &WeightedGraph) -> Result<Self> {
        let diag = cost_diagonal::<T>(g)?;
        let (exact, _) = exact_ground(&diag);
        Ok(Problem { n: g.num_vertices(), diag, exact, edges: g.edges().len() })
    }

    fn optimize(&self, mixers: &[MixerOperator<T>], start: &[T], cfg: &OptimizerConfig, layer: usize) -> Result<(Vec<T>, T)> {
        let objective = |p: &[T]| {
            prepare_state(self.n, mixers, p, &self.diag)
                .and_then(|s| s.expectation(&self.diag))
                .unwrap_or_else(|_| T::lit(f64::NAN))
        };
        let res = minimize(objective, start, cfg).map_err(|e| Error::Optimizer { layer, source: Box::new(e) })?;
        Ok((res.best_point, res.best_value))
    }

    fn reference_energy(&self) -> Result<T> {
        StateVector::plus(self.n)?.expectation(&self.diag)
    }

    fn layer_record(&self, layer: usize, mixers: &[MixerOperator<T>], energy: T, sel: Option<&Selection<T>>) -> LayerRecord {
        let err = energy - self.exact;
        LayerRecord {
            layer,
            mixer: mixers[layer - 1].label().to_string(),
            energy: energy.as_f64(),
            energy_error: err.max(T::zero()).as_f64(),
            grad_norm: sel.map(|s| s.max_abs_gradient.as_f64()),
            n_params: 2 * layer,
            n_cnots: resources::ansatz_cnots(self.edges, mixers),
            gradients: sel.map(|s| s.gradients.iter().map(|g| g.as_f64()).collect()).unwrap_or_default(),
        }
    }
}

/// Grows an ansatz one layer at a time from `pool_kind`.
///
/// Each iteration measures the pool gradient of the current optimum at
/// `gamma0`, stops if its ∞-norm is below `grad_tol`, otherwise appends the
/// steepest mixer with `(γ, β) = (gamma0, 0)` and reoptimizes every
/// parameter from the warm start.
pub fn run_adapt<T: Real>(g: &WeightedGraph, pool_kind: PoolKind, cfg: &RunConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let prob = Problem::<T>::new(g)?;
    let pool = build_pool::<T>(pool_kind, prob.n)?;
    let gamma0 = T::lit(cfg.gamma0);
    let mut mixers: Vec<MixerOperator<T>> = Vec::new();
    let mut params: Vec<T> = Vec::new();
    let mut state = StateVector::plus(prob.n)?;
    let mut layers = Vec::new();
    let mut status = RunStatus::LayerBudget;
    let mut final_gradient = None;

    for k in 1..=cfg.max_layers {
        let sel = select_mixer(&state, &prob.diag, &pool, gamma0)?;
        if sel.max_abs_gradient.as_f64() < cfg.grad_tol {
            status = RunStatus::ConvergedByGradient;
            final_gradient = Some(sel.max_abs_gradient.as_f64());
            break;
        }
        mixers.push(pool.operators()[sel.index].clone());
        params.extend([gamma0, T::zero()]);
        let (best, energy) = prob.optimize(&mixers, &params, &cfg.optimizer, k)?;
        params = best;
        state = prepare_state(prob.n, &mixers, &params, &prob.diag)?;
        let rec = prob.layer_record(k, &mixers, energy, Some(&sel));
        let done = cfg.energy_tol > 0.0 && rec.energy_error < cfg.energy_tol;
        layers.push(rec);
        if done {
            status = RunStatus::ConvergedByEnergy;
            break;
        }
    }

    Ok(RunRecord {
        run_id: run_id(g, Algorithm::Adapt, pool_kind),
        seed: g.seed(),
        n: prob.n,
        d: g.degree(),
        algorithm: Algorithm::Adapt,
        pool: pool_kind,
        exact_energy: prob.exact.as_f64(),
        reference_energy: prob.reference_energy()?.as_f64(),
        layers,
        status,
        final_gradient,
        parameters: params.iter().map(|p| p.as_f64()).collect(),
    })
}

/// Standard QAOA swept over depths `1..=cfg.max_layers`, each depth warm-started
/// from the previous optimum extended by `(gamma0, 0)`.
pub fn run_standard_qaoa<T: Real>(g: &WeightedGraph, cfg: &RunConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let prob = Problem::<T>::new(g)?;
    let gamma0 = T::lit(cfg.gamma0);
    let mut mixers = Vec::new();
    let mut params: Vec<T> = Vec::new();
    let mut layers = Vec::new();
    let mut status = RunStatus::LayerBudget;

    for k in 1..=cfg.max_layers {
        mixers.push(MixerOperator::sum_x(prob.n));
        params.extend([gamma0, T::zero()]);
        let (best, energy) = prob.optimize(&mixers, &params, &cfg.optimizer, k)?;
        params = best;
        let rec = prob.layer_record(k, &mixers, energy, None);
        let done = cfg.energy_tol > 0.0 && rec.energy_error < cfg.energy_tol;
        layers.push(rec);
        if done {
            status = RunStatus::ConvergedByEnergy;
            break;
        }
    }

    Ok(RunRecord {
        run_id: run_id(g, Algorithm::Standard, PoolKind::Qaoa),
        seed: g.seed(),
        n: prob.n,
        d: g.degree(),
        algorithm: Algorithm::Standard,
        pool: PoolKind::Qaoa,
        exact_energy: prob.exact.as_f64(),
        reference_energy: prob.reference_energy()?.as_f64(),
        layers,
        status,
        final_gradient: None,
        parameters: params.iter().map(|p| p.as_f64()).collect(),
    })
}

/// Share of layers whose mixer is not `ΣX`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionStats {
    pub layers: usize,
    pub non_sum_x: usize,
    pub fraction: f64,
}

/// Non-`ΣX` selection fraction per pool, counting each record's layers up to
/// the first one with energy error at most `delta_e` (all layers if never reached).
pub fn mixer_selection_stats(records: &[RunRecord], delta_e: f64) -> Result<BTreeMap<PoolKind, SelectionStats>> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no run records to summarize".into()));
    }
    let mut out: BTreeMap<PoolKind, SelectionStats> = BTreeMap::new();
    for r in records {
        let upto = r.layers_to_accuracy(delta_e).unwrap_or(r.layers.len());
        let e = out.entry(r.pool).or_insert(SelectionStats { layers: 0, non_sum_x: 0, fraction: 0.0 });
        for l in &r.layers[..upto] {
            e.layers += 1;
            if l.mixer != SUM_X_LABEL {
                e.non_sum_x += 1;
            }
        }
    }
    for s in out.values_mut() {
        s.fraction = if s.layers == 0 { 0.0 } else { s.non_sum_x as f64 / s.layers as f64 };
    }
    Ok(out)
}
