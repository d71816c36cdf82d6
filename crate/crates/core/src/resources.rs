//! CNOT and parameter accounting for alternating-operator ansätze.
//!
//! Counting convention (no cancellation across layers):
//! - cost layer `e^{-iγH_C}`: one `ZZ` rotation per graph edge, each compiled
//!   as CNOT · RZ · CNOT, so `2·|E|` CNOTs;
//! - mixer `e^{-iβP}` for a weight-`k` Pauli string: `2(k-1)` CNOTs (a CNOT
//!   ladder around one single-qubit rotation, local basis changes free), so
//!   single-qubit strings and `ΣX` cost nothing and two-qubit strings cost 2;
//! - two variational parameters per layer.

use crate::ansatz::{Ansatz, MixerOperator, RunRecord};
use crate::error::{Error, Result};
use crate::maxcut::WeightedGraph;
use crate::pauli::PauliString;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// CNOTs per `ZZ` rotation in the cost layer.
pub const CNOTS_PER_EDGE: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceTally {
    pub cnots: usize,
    pub parameters: usize,
    pub layers: usize,
}

pub fn pauli_rotation_cnots(p: &PauliString) -> usize {
    2 * (p.weight() as usize).saturating_sub(1)
}

pub fn cost_layer_cnots(edges: usize) -> usize {
    CNOTS_PER_EDGE * edges
}

/// Cumulative CNOTs of the layers whose mixers are given.
pub fn ansatz_cnots<T: Real>(edges: usize, mixers: &[MixerOperator<T>]) -> usize {
    mixers.iter().map(|m| cost_layer_cnots(edges) + m.cnot_cost()).sum()
}

/// CNOT cost of a mixer given only its label.
pub fn mixer_cnots(label: &str, n: usize) -> Result<usize> {
    Ok(MixerOperator::<f64>::from_label(label, n)?.cnot_cost())
}

pub fn count_resources<T: Real>(a: &Ansatz<T>, g: &WeightedGraph) -> Result<ResourceTally> {
    if a.num_qubits() != g.num_vertices() {
        return Err(Error::SizeMismatch(a.num_qubits(), g.num_vertices()));
    }
    Ok(ResourceTally {
        cnots: ansatz_cnots(g.edges().len(), &a.mixers()),
        parameters: a.num_parameters(),
        layers: a.depth(),
    })
}

/// Tally at the first layer of `record` with energy error at most `delta_e`,
/// or `None` if the run never got there.
pub fn resources_to_accuracy(record: &RunRecord, delta_e: f64) -> Option<ResourceTally> {
    record.layers.iter().find(|l| l.energy_error <= delta_e).map(|l| ResourceTally {
        cnots: l.n_cnots,
        parameters: l.n_params,
        layers: l.layer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{Algorithm, LayerRecord, PoolKind, RunStatus};

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 0.3), (1, 2, 0.6), (0, 2, 0.9)]).unwrap()
    }

    #[test]
    fn standard_on_triangle() {
        let a = Ansatz::<f64>::standard(3, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(count_resources(&a, &triangle()).unwrap(), ResourceTally { cnots: 12, parameters: 4, layers: 2 });
    }

    #[test]
    fn adapt_on_triangle() {
        let mixers = vec![MixerOperator::sum_x(3), MixerOperator::from_label("Y0Y1", 3).unwrap()];
        let a = Ansatz::<f64>::from_parts(3, mixers, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(count_resources(&a, &triangle()).unwrap(), ResourceTally { cnots: 14, parameters: 4, layers: 2 });
    }

    #[test]
    fn empty_ansatz() {
        let a = Ansatz::<f64>::new(3);
        assert_eq!(count_resources(&a, &triangle()).unwrap(), ResourceTally::default());
        assert!(count_resources(&Ansatz::<f64>::new(4), &triangle()).is_err());
    }

    fn record(mixers: &[&str], errors: &[f64], edges: usize) -> RunRecord {
        let mut cnots = 0;
        let layers = mixers
            .iter()
            .zip(errors)
            .enumerate()
            .map(|(k, (m, e))| {
                cnots += cost_layer_cnots(edges) + mixer_cnots(m, 6).unwrap();
                LayerRecord {
                    layer: k + 1,
                    mixer: m.to_string(),
                    energy: 0.0,
                    energy_error: *e,
                    grad_norm: None,
                    n_params: 2 * (k + 1),
                    n_cnots: cnots,
                    gradients: vec![],
                }
            })
            .collect();
        RunRecord {
            run_id: "t".into(),
            seed: None,
            n: 6,
            d: Some(3),
            algorithm: Algorithm::Adapt,
            pool: PoolKind::Multi,
            exact_energy: 0.0,
            reference_energy: 0.0,
            layers,
            status: RunStatus::LayerBudget,
            final_gradient: None,
            parameters: vec![],
        }
    }

    #[test]
    fn tally_at_accuracy() {
        let r = record(&["sumX", "Y0Y5", "X2", "X3"], &[0.5, 0.01, 5e-4, 1e-5], 9);
        assert_eq!(resources_to_accuracy(&r, 1e-3), Some(ResourceTally { cnots: 3 * 18 + 2, parameters: 6, layers: 3 }));
        let r = record(&["sumX", "Y0Y5"], &[0.5, 0.01], 9);
        assert_eq!(resources_to_accuracy(&r, 1e-3), None);
    }

    #[test]
    fn weight_three_string_costs_four() {
        assert_eq!(pauli_rotation_cnots(&PauliString::parse("X0Y1Z2", 3).unwrap()), 4);
        assert_eq!(mixer_cnots("sumX", 4).unwrap(), 0);
    }
}
