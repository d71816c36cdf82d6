//! Weighted Max-Cut instances and their Ising encoding
//! `H_C = -½ Σ w_ij (I - Z_i Z_j)`.

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::scalar::Real;
use crate::state::CostDiagonal;
use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

/// Attempts of the pairing model before giving up.
pub const PAIRING_RETRY_CAP: usize = 1_000_000;

/// Undirected weighted graph with edges stored as `(i, j, w)`, `i < j`.
///
/// Serialized as `{"n": …, "d": …, "seed": …, "edges": [[i, j, w], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    #[serde(rename = "d")]
    degree: Option<usize>,
    seed: Option<u64>,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    /// Validates and normalizes an edge list (endpoints ordered, edges sorted).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut g = WeightedGraph { n, degree: None, seed: None, edges: edges.into_iter().collect() };
        for e in &mut g.edges {
            if e.0 > e.1 {
                *e = (e.1, e.0, e.2);
            }
        }
        g.edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        g.validate()?;
        Ok(g)
    }

    /// Attaches regularity metadata, checking that every vertex has degree `d`.
    pub fn with_degree(mut self, d: usize) -> Result<Self> {
        self.degree = Some(d);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if self.n == 0 {
            return bad("graph has no vertices".into());
        }
        let mut seen = BTreeSet::new();
        let mut deg = vec![0usize; self.n];
        for &(i, j, w) in &self.edges {
            if i == j {
                return bad(format!("self-loop at vertex {i}"));
            }
            if i > j || j >= self.n {
                return bad(format!("edge ({i}, {j}) out of range or unordered for n={}", self.n));
            }
            if !seen.insert((i, j)) {
                return bad(format!("duplicate edge ({i}, {j})"));
            }
            if !w.is_finite() || w < 0.0 {
                return bad(format!("edge ({i}, {j}) has invalid weight {w}"));
            }
            deg[i] += 1;
            deg[j] += 1;
        }
        if let Some(d) = self.degree {
            if let Some(v) = deg.iter().position(|&k| k != d) {
                return bad(format!("vertex {v} has degree {} but graph is labelled {d}-regular", deg[v]));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut g = self.clone();
        g.edges.iter_mut().for_each(|e| e.2 *= factor);
        g.validate()?;
        Ok(g)
    }

    /// Total weight of edges crossing the partition labelled by `bits`.
    pub fn cut_value(&self, bits: usize) -> f64 {
        self.edges.iter().filter(|&&(i, j, _)| (bits >> i & 1) != (bits >> j & 1)).map(|e| e.2).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: WeightedGraph = serde_json::from_str(s)?;
        let d = g.degree;
        let seed = g.seed;
        let mut out = WeightedGraph::new(g.n, g.edges)?;
        out.seed = seed;
        match d {
            Some(d) => out.with_degree(d),
            None => Ok(out),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Random `d`-regular simple graph on `n` vertices with `U(0,1)` edge weights.
///
/// Topology comes from the pairing (configuration) model: `n·d` stubs are
/// shuffled and paired consecutively, and the whole pairing is redrawn
/// whenever it produces a loop or a repeated edge. Weights are then drawn in
/// sorted `(i, j)` edge order. The generator is ChaCha8 seeded through
/// `SeedableRng::seed_from_u64`, so instances are reproducible for a fixed
/// `(n, d, seed)`.
pub fn generate_regular_graph(n: usize, d: usize, seed: u64) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if (n * d) % 2 != 0 {
        return Err(Error::DegreeParity { n, d });
    }
    if d >= n {
        return Err(Error::DegreeTooLarge { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..PAIRING_RETRY_CAP {
        stubs.shuffle(&mut rng);
        if let Some(mut pairs) = pair_stubs(&stubs) {
            pairs.sort_unstable();
            let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, rng.gen::<f64>())).collect();
            let mut g = WeightedGraph::new(n, edges)?.with_degree(d)?;
            g.seed = Some(seed);
            return Ok(g);
        }
    }
    Err(Error::PairingFailed { n, d, seed, attempts: PAIRING_RETRY_CAP })
}

fn pair_stubs(stubs: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::with_capacity(stubs.len() / 2);
    for c in stubs.chunks_exact(2) {
        let (i, j) = (c[0].min(c[1]), c[0].max(c[1]));
        if i == j || !seen.insert((i, j)) {
            return None;
        }
        pairs.push((i, j));
    }
    Some(pairs)
}

/// Diagonal of `H_C`: `values[b] = -Σ_{cut edges} w`.
pub fn cost_diagonal<T: Real>(g: &WeightedGraph) -> Result<CostDiagonal<T>> {
    let dim = 1usize << g.n;
    let values = (0..dim).map(|b| T::lit(-g.cut_value(b))).collect();
    CostDiagonal::new(g.n, values)
}

/// `H_C` as a Pauli sum, constant term included.
pub fn cost_hamiltonian<T: Real>(g: &WeightedGraph) -> Result<PauliSum<T>> {
    let n = g.n;
    let mut h = PauliSum::zero(n);
    let half = T::lit(0.5);
    for &(i, j, w) in &g.edges {
        let w = T::lit(w) * half;
        h.add_term(&PauliString::identity(n), Complex::new(-w, T::zero()));
        h.add_term(&PauliString::from_sites(n, &[(i, Pauli::Z), (j, Pauli::Z)])?, Complex::new(w, T::zero()));
    }
    Ok(h)
}

/// A labelled partition; bit `i` set places vertex `i` in the complement side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutSolution {
    pub bitstring: usize,
    pub cut_value: f64,
    pub energy: f64,
}

/// Ground energy of a diagonal and every bitstring attaining it.
pub fn exact_ground<T: Real>(d: &CostDiagonal<T>) -> (T, Vec<usize>) {
    let min = d.min();
    let tol = T::lit(1e-12) * (T::one() + min.abs());
    let argmin = d.values().iter().enumerate().filter(|(_, &v)| v - min <= tol).map(|(b, _)| b).collect();
    (min, argmin)
}

/// Maximum cut by enumerating all partitions directly on the edge list.
pub fn brute_force_max_cut(g: &WeightedGraph) -> CutSolution {
    let mut best = CutSolution { bitstring: 0, cut_value: 0.0, energy: -0.0 };
    for b in 0..(1usize << g.n) {
        let v = g.cut_value(b);
        if v > best.cut_value {
            best = CutSolution { bitstring: b, cut_value: v, energy: -v };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &WeightedGraph) -> Vec<usize> {
        let mut d = vec![0; g.num_vertices()];
        for &(i, j, _) in g.edges() {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    #[test]
    fn degree_five_on_six_is_complete() {
        let g = generate_regular_graph(6, 5, 7).unwrap();
        assert_eq!(g.edges().len(), 15);
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.0, e.1)).collect();
        let all: Vec<_> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
        assert_eq!(pairs, all);
    }

    #[test]
    fn parity_and_degree_errors() {
        assert!(matches!(generate_regular_graph(3, 1, 0), Err(Error::DegreeParity { .. })));
        assert!(matches!(generate_regular_graph(4, 4, 0), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_regular_graph(6, 3, 42).unwrap();
        let b = generate_regular_graph(6, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_regular_graph(6, 3, 43).unwrap());
    }

    #[test]
    fn generated_graphs_are_simple_and_regular() {
        for seed in 0..1000 {
            let g = generate_regular_graph(6, 3, seed).unwrap();
            assert_eq!(g.edges().len(), 9);
            assert!(degrees(&g).iter().all(|&k| k == 3));
            assert!(g.edges().iter().all(|e| e.0 < e.1 && (0.0..1.0).contains(&e.2)));
            let mut pairs: Vec<_> = g.edges().iter().map(|e| (e.0, e.1)).collect();
            pairs.dedup();
            assert_eq!(pairs.len(), 9);
        }
    }

    #[test]
    fn single_edge_diagonal() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let d = cost_diagonal::<f64>(&g).unwrap();
        assert_eq!(d.values(), &[0.0, -1.0, -1.0, 0.0]);
        let (e, arg) = exact_ground(&d);
        assert_eq!(e, -1.0);
        assert_eq!(arg, vec![0b01, 0b10]);
    }

    #[test]
    fn empty_graph_diagonal() {
        let g = WeightedGraph::new(3, []).unwrap();
        let d = cost_diagonal::<f64>(&g).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        let (e, arg) = exact_ground(&d);
        assert_eq!(e, 0.0);
        assert_eq!(arg.len(), 8);
    }

    #[test]
    fn unit_triangle_ground() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let d = cost_diagonal::<f64>(&g).unwrap();
        let (e, arg) = exact_ground(&d);
        assert_eq!(e, -2.0);
        assert_eq!(arg.len(), 6);
    }

    #[test]
    fn invalid_graphs_rejected() {
        assert!(WeightedGraph::new(3, [(1, 1, 0.5)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, 0.5), (1, 0, 0.2)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 3, 0.5)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, -0.5)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, 0.5)]).unwrap().with_degree(1).is_err());
    }

    #[test]
    fn json_round_trip_preserves_weights() {
        let g = generate_regular_graph(6, 3, 11).unwrap();
        let s = g.to_json().unwrap();
        assert!(s.contains("\"d\": 3"));
        let back = WeightedGraph::from_json(&s).unwrap();
        assert_eq!(g, back);
        assert!(WeightedGraph::from_json(r#"{"n":2,"d":null,"seed":null,"edges":[[0,0,0.1]]}"#).is_err());
    }

    #[test]
    fn pauli_hamiltonian_matches_diagonal() {
        let g = generate_regular_graph(4, 3, 5).unwrap();
        let d = cost_diagonal::<f64>(&g).unwrap();
        let m = cost_hamiltonian::<f64>(&g).unwrap().to_dense();
        for b in 0..16 {
            assert!((m[(b, b)].re - d.values()[b]).abs() < 1e-12);
        }
    }
}
