//! Adiabatic gauge potentials for the interpolation `H₀(λ) = λ·H_C + (1−λ)·ΣX`.
//!
//! The approximate potential uses the nested-commutator ansatz
//! `A = i Σ_k α_k C_{2k−1}` with `C_1 = [H₀, ∂λH₀]` and
//! `C_{m+1} = [H₀, C_m]`. The coefficients minimize `‖G‖²` with
//! `G = ∂λH₀ − i[H₀, A] = ∂λH₀ + Σ_k α_k C_{2k}`.

use crate::ansatz::{PoolKind, RunRecord};
use crate::error::{Error, Result};
use crate::maxcut::{cost_hamiltonian, WeightedGraph};
use crate::pauli::{PauliString, PauliSum, PRUNE_TOL};
use crate::scalar::Real;
use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Size of the dominant set.
pub const DOMINANT_SET_SIZE: usize = 5;
/// Default number of λ grid points, endpoints included.
pub const DEFAULT_LAMBDA_GRID: usize = 101;
/// Largest register handled by the dense spectral oracle.
pub const EXACT_ORACLE_MAX_QUBITS: usize = 6;

const RANK_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationHamiltonian<T> {
    lambda: T,
    h0: PauliSum<T>,
    d_lambda: PauliSum<T>,
}

impl<T: Real> InterpolationHamiltonian<T> {
    /// `λ·target + (1−λ)·driver`.
    pub fn interpolate(target: &PauliSum<T>, driver: &PauliSum<T>, lambda: T) -> Result<Self> {
        if !(lambda >= T::zero() && lambda <= T::one()) {
            return Err(Error::InvalidArgument(format!("lambda {lambda} outside [0, 1]")));
        }
        let h0 = target.scale_real(lambda).add(&driver.scale_real(T::one() - lambda))?;
        let d_lambda = target.sub(driver)?;
        Ok(InterpolationHamiltonian { lambda, h0, d_lambda })
    }

    pub fn num_qubits(&self) -> usize {
        self.h0.num_qubits()
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn h0(&self) -> &PauliSum<T> {
        &self.h0
    }

    pub fn d_lambda(&self) -> &PauliSum<T> {
        &self.d_lambda
    }
}

/// `λ·H_C + (1−λ)·ΣX` for the Max-Cut Hamiltonian of `g`.
pub fn build_h0<T: Real>(g: &WeightedGraph, lambda: T) -> Result<InterpolationHamiltonian<T>> {
    let hc = cost_hamiltonian::<T>(g)?;
    InterpolationHamiltonian::interpolate(&hc, &PauliSum::sum_x(g.num_vertices()), lambda)
}

/// Variational gauge potential of one order at one λ.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeSolution<T> {
    pub order: usize,
    pub alpha: Vec<T>,
    /// Hermitian `A^(ℓ)`.
    pub a_lambda: PauliSum<T>,
    /// `Tr(G†G)/2^n` at the optimum.
    pub action: T,
    /// Whether the normal equations were rank deficient.
    pub rank_deficient: bool,
}

/// Solutions for orders `1..=max_order`, sharing one commutator chain.
pub fn approx_gauge_series<T: Real>(h: &InterpolationHamiltonian<T>, max_order: usize) -> Result<Vec<GaugeSolution<T>>> {
    if max_order == 0 {
        return Err(Error::InvalidArgument("approximation order must be at least 1".into()));
    }
    let mut odd = Vec::with_capacity(max_order);
    let mut even = Vec::with_capacity(max_order);
    let mut c = h.h0.commutator(&h.d_lambda)?;
    for _ in 0..max_order {
        let e = h.h0.commutator(&c)?;
        let next = h.h0.commutator(&e)?;
        odd.push(c);
        even.push(e);
        c = next;
    }
    let mut gram = DMatrix::<T>::zeros(max_order, max_order);
    let mut rhs = DVector::<T>::zeros(max_order);
    for j in 0..max_order {
        rhs[j] = h.d_lambda.trace_inner(&even[j])?;
        for k in j..max_order {
            let v = even[j].trace_inner(&even[k])?;
            gram[(j, k)] = v;
            gram[(k, j)] = v;
        }
    }
    (1..=max_order)
        .map(|order| {
            let m = gram.view((0, 0), (order, order)).into_owned();
            let b = rhs.rows(0, order).into_owned();
            let (alpha, rank_deficient) = solve_normal_equations(&m, &b);
            if rank_deficient {
                warn!("rank-deficient gauge-potential system at lambda={} order={order}; using pseudo-inverse", h.lambda);
            }
            let i = Complex::new(T::zero(), T::one());
            let mut a = PauliSum::zero(h.num_qubits());
            let mut g = h.d_lambda.clone();
            for k in 0..order {
                a = a.add_scaled(&odd[k], i * alpha[k])?;
                g = g.add_scaled(&even[k], Complex::new(alpha[k], T::zero()))?;
            }
            Ok(GaugeSolution { order, alpha, a_lambda: real_part(&a), action: g.norm_sqr(), rank_deficient })
        })
        .collect()
}

pub fn approx_gauge_potential<T: Real>(h: &InterpolationHamiltonian<T>, order: usize) -> Result<GaugeSolution<T>> {
    Ok(approx_gauge_series(h, order)?.pop().expect("non-empty series"))
}

/// Solves `M α = −b` after diagonal equilibration, through an SVD
/// pseudo-inverse that discards relative singular values below `RANK_TOL`.
fn solve_normal_equations<T: Real>(m: &DMatrix<T>, b: &DVector<T>) -> (Vec<T>, bool) {
    let n = b.len();
    let scale: Vec<T> =
        (0..n).map(|k| if m[(k, k)] > T::zero() { T::one() / m[(k, k)].sqrt() } else { T::one() }).collect();
    let ms = DMatrix::from_fn(n, n, |j, k| m[(j, k)] * scale[j] * scale[k]);
    let bs = DVector::from_fn(n, |j, _| -b[j] * scale[j]);
    let svd = ms.svd(true, true);
    let smax = svd.singular_values.iter().fold(T::zero(), |a, s| a.max(*s));
    let eps = smax * T::lit(RANK_TOL);
    let rank_deficient = smax == T::zero() || svd.singular_values.iter().any(|s| *s <= eps);
    let y = if smax == T::zero() {
        DVector::zeros(n)
    } else {
        svd.solve(&bs, eps).expect("SVD computed with both factors")
    };
    ((0..n).map(|k| y[k] * scale[k]).collect(), rank_deficient)
}

/// Drops imaginary rounding residue from a sum known to be Hermitian.
fn real_part<T: Real>(a: &PauliSum<T>) -> PauliSum<T> {
    let mut out = PauliSum::zero(a.num_qubits());
    for (p, c) in a.iter() {
        out.add_term(p, Complex::new(c.re, T::zero()));
    }
    out.prune(T::lit(PRUNE_TOL));
    out
}

/// Dense eigendecomposition of the real symmetric `H₀(λ)`.
fn eigensystem<T: Real>(h: &InterpolationHamiltonian<T>) -> Result<(DVector<T>, DMatrix<T>)> {
    let n = h.num_qubits();
    if n > EXACT_ORACLE_MAX_QUBITS {
        return Err(Error::QubitCount { n, max: EXACT_ORACLE_MAX_QUBITS });
    }
    let dense = h.h0.to_dense();
    if dense.iter().any(|z| z.im != T::zero()) {
        return Err(Error::InvalidArgument("spectral oracle expects a real symmetric H0".into()));
    }
    let eig = dense.map(|z| z.re).symmetric_eigen();
    Ok((eig.eigenvalues, eig.eigenvectors))
}

fn is_degenerate<T: Real>(e: &DVector<T>, m: usize, k: usize) -> bool {
    let scale = e.iter().fold(T::one(), |a, v| a.max(v.abs()));
    (e[m] - e[k]).abs() <= T::lit(DEGENERACY_TOL) * scale
}

/// Exact potential from `⟨m|A|n⟩ = −i⟨m|∂λH|n⟩/(E_m − E_n)`, returned in the
/// computational basis. Diagonal and degenerate-gap elements are zero.
pub fn exact_gauge_potential<T: Real>(h: &InterpolationHamiltonian<T>) -> Result<DMatrix<Complex<T>>> {
    let (e, v) = eigensystem(h)?;
    let dim = e.len();
    let dh = h.d_lambda.to_dense().map(|z| z.re);
    let dh_eig = v.transpose() * dh * &v;
    let mut degenerate = 0usize;
    let mut a_eig = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for m in 0..dim {
        for k in 0..dim {
            if m == k {
                continue;
            }
            if is_degenerate(&e, m, k) {
                if dh_eig[(m, k)].abs() > T::lit(DEGENERACY_TOL) {
                    degenerate += 1;
                }
                continue;
            }
            a_eig[(m, k)] = Complex::new(T::zero(), -dh_eig[(m, k)] / (e[m] - e[k]));
        }
    }
    if degenerate > 0 {
        warn!("{degenerate} degenerate coupled level pairs at lambda={} set to zero", h.lambda);
    }
    let vc = v.map(|x| Complex::new(x, T::zero()));
    Ok(&vc * a_eig * vc.transpose())
}

/// Frobenius distance between `a` and the exact potential, restricted to
/// eigenbasis elements between non-degenerate levels (the gauge-fixed part).
pub fn oracle_distance<T: Real>(h: &InterpolationHamiltonian<T>, a: &PauliSum<T>) -> Result<T> {
    if a.num_qubits() != h.num_qubits() {
        return Err(Error::SizeMismatch(a.num_qubits(), h.num_qubits()));
    }
    let (e, v) = eigensystem(h)?;
    let vc = v.map(|x| Complex::new(x, T::zero()));
    let exact = vc.adjoint() * exact_gauge_potential(h)? * &vc;
    let approx = vc.adjoint() * a.to_dense() * &vc;
    let mut acc = T::zero();
    for m in 0..e.len() {
        for k in 0..e.len() {
            if m != k && !is_degenerate(&e, m, k) {
                acc += (approx[(m, k)] - exact[(m, k)]).norm_sqr();
            }
        }
    }
    Ok(acc.sqrt())
}

/// The strings with the largest time-averaged coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominantSet {
    pub strings: Vec<String>,
}

impl DominantSet {
    pub fn contains_label(&self, label: &str, n: usize) -> bool {
        let Ok(p) = PauliString::parse(label, n) else {
            return false;
        };
        self.strings.iter().any(|s| PauliString::parse(s, n).map(|q| q == p.phaseless()).unwrap_or(false))
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// Grid-averaged approximation of one order.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePotentialApprox<T> {
    pub order: usize,
    pub lambdas: Vec<T>,
    pub alphas: Vec<Vec<T>>,
    pub expansions: Vec<PauliSum<T>>,
    /// Mean of `|coefficient|` over the grid, per string.
    pub time_averaged: BTreeMap<PauliString, T>,
}

impl<T: Real> GaugePotentialApprox<T> {
    /// Strings by decreasing averaged coefficient, ties in canonical order.
    pub fn ranking(&self) -> Vec<(PauliString, T)> {
        let mut v: Vec<_> = self.time_averaged.iter().map(|(p, c)| (*p, *c)).collect();
        v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        v
    }

    pub fn dominant_set(&self, k: usize) -> DominantSet {
        DominantSet { strings: self.ranking().into_iter().take(k).map(|(p, _)| p.label()).collect() }
    }
}

/// Approximations of orders `1..=max_order` on a uniform λ grid of `grid` points.
pub fn time_averaged_series<T: Real>(
    g: &WeightedGraph,
    max_order: usize,
    grid: usize,
) -> Result<Vec<GaugePotentialApprox<T>>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("lambda grid needs at least 2 points, got {grid}")));
    }
    let lambdas: Vec<T> =
        (0..grid).map(|i| T::from_usize(i).unwrap() / T::from_usize(grid - 1).unwrap()).collect();
    let per_point = lambdas
        .par_iter()
        .map(|&l| approx_gauge_series(&build_h0(g, l)?, max_order))
        .collect::<Result<Vec<_>>>()?;
    let inv = T::one() / T::from_usize(grid).unwrap();
    Ok((0..max_order)
        .map(|o| {
            let mut averaged = BTreeMap::new();
            for sols in &per_point {
                for (p, c) in sols[o].a_lambda.iter() {
                    *averaged.entry(*p).or_insert_with(T::zero) += c.re.abs() * inv;
                }
            }
            GaugePotentialApprox {
                order: o + 1,
                lambdas: lambdas.clone(),
                alphas: per_point.iter().map(|s| s[o].alpha.clone()).collect(),
                expansions: per_point.iter().map(|s| s[o].a_lambda.clone()).collect(),
                time_averaged: averaged,
            }
        })
        .collect())
}

pub fn time_averaged_ranking<T: Real>(
    g: &WeightedGraph,
    order: usize,
    grid: usize,
) -> Result<(GaugePotentialApprox<T>, DominantSet)> {
    let approx = time_averaged_series(g, order, grid)?.pop().expect("non-empty series");
    let set = approx.dominant_set(DOMINANT_SET_SIZE);
    Ok((approx, set))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerOverlap {
    pub layer: usize,
    pub members: usize,
    pub instances: usize,
    /// `members / instances`, absent when no run reached the layer.
    pub probability: Option<f64>,
}

/// Per-layer fraction of runs whose selected mixer lies in that instance's
/// dominant set. Collective mixers never count as members.
pub fn overlap_probability(runs: &[RunRecord], sets: &[DominantSet], max_layer: usize) -> Result<Vec<LayerOverlap>> {
    if runs.len() != sets.len() {
        return Err(Error::InvalidArgument(format!("{} runs but {} dominant sets", runs.len(), sets.len())));
    }
    if let Some(r) = runs.iter().find(|r| r.pool != PoolKind::Multi) {
        return Err(Error::InvalidArgument(format!("run {} does not use the multi pool", r.run_id)));
    }
    Ok((1..=max_layer)
        .map(|layer| {
            let mut members = 0;
            let mut instances = 0;
            for (r, s) in runs.iter().zip(sets) {
                if let Some(l) = r.layers.get(layer - 1) {
                    instances += 1;
                    if s.contains_label(&l.mixer, r.n) {
                        members += 1;
                    }
                }
            }
            let probability = (instances > 0).then(|| members as f64 / instances as f64);
            LayerOverlap { layer, members, instances, probability }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{Algorithm, LayerRecord, RunStatus};
    use crate::maxcut::generate_regular_graph;
    use crate::pauli::Pauli;

    fn single_qubit(lambda: f64) -> InterpolationHamiltonian<f64> {
        let z = PauliSum::collective(1, Pauli::Z);
        let x = PauliSum::collective(1, Pauli::X);
        InterpolationHamiltonian::interpolate(&z, &x, lambda).unwrap()
    }

    fn unit_edge() -> WeightedGraph {
        WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn endpoints() {
        let g = generate_regular_graph(6, 3, 4).unwrap();
        assert_eq!(build_h0::<f64>(&g, 0.0).unwrap().h0(), &PauliSum::sum_x(6));
        assert_eq!(build_h0::<f64>(&g, 1.0).unwrap().h0(), &cost_hamiltonian::<f64>(&g).unwrap());
        assert!(build_h0::<f64>(&g, 1.5).is_err());
        assert!(build_h0::<f64>(&g, f64::NAN).is_err());
    }

    #[test]
    fn half_way_on_unit_edge() {
        let h = build_h0::<f64>(&unit_edge(), 0.5).unwrap();
        let c = |l: &str| h.h0().coefficient(&PauliString::parse(l, 2).unwrap()).re;
        assert_eq!((c("I"), c("Z0Z1"), c("X0"), c("X1")), (-0.25, 0.25, 0.5, 0.5));
        assert_eq!(h.h0().len(), 4);
    }

    #[test]
    fn single_qubit_alpha_and_exact() {
        for &l in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let h = single_qubit(l);
            let s = approx_gauge_potential(&h, 1).unwrap();
            let norm = l * l + (1.0 - l) * (1.0 - l);
            assert!((s.alpha[0] + 1.0 / (4.0 * norm)).abs() < 1e-12);
            let y = PauliString::parse("Y0", 1).unwrap();
            assert_eq!(s.a_lambda.len(), 1);
            assert!((s.a_lambda.coefficient(&y).re + 1.0 / (2.0 * norm)).abs() < 1e-12);
            // 2x2 spectral oracle: eigenvalues ±r, A = -Y/(2r²) after diagonalization.
            let exact = exact_gauge_potential(&h).unwrap();
            let approx = s.a_lambda.to_dense();
            assert!((exact - approx).norm() < 1e-10);
        }
    }

    #[test]
    fn residual_non_increasing() {
        let g = generate_regular_graph(6, 3, 11).unwrap();
        for &l in &[0.0, 0.1, 0.37, 0.5, 0.8, 1.0] {
            let series = approx_gauge_series(&build_h0::<f64>(&g, l).unwrap(), 3).unwrap();
            for w in series.windows(2) {
                assert!(w[1].action <= w[0].action + 1e-10, "lambda {l}: {} > {}", w[1].action, w[0].action);
            }
        }
    }

    type Dense = DMatrix<Complex<f64>>;

    /// Order-2 least squares over `span{C2, C4}` done on dense matrices.
    fn dense_order_two(h: &InterpolationHamiltonian<f64>) -> (DVector<f64>, Dense, f64) {
        let (hd, dd) = (h.h0().to_dense(), h.d_lambda().to_dense());
        let comm = |a: &Dense, b: &Dense| a * b - b * a;
        let c1 = comm(&hd, &dd);
        let c2 = comm(&hd, &c1);
        let c3 = comm(&hd, &c2);
        let c4 = comm(&hd, &c3);
        let tr = |a: &Dense, b: &Dense| (a.adjoint() * b).trace().re;
        let basis = [&c2, &c4];
        let m = DMatrix::from_fn(2, 2, |j, k| tr(basis[j], basis[k]));
        let b = DVector::from_fn(2, |j, _| -tr(&dd, basis[j]));
        let alpha = m.clone().pseudo_inverse(1e-12 * m.norm()).unwrap() * b;
        let i = Complex::new(0.0, 1.0);
        let a = (&c1 * Complex::from(alpha[0]) + &c3 * Complex::from(alpha[1])) * i;
        let g = &dd + &c2 * Complex::from(alpha[0]) + &c4 * Complex::from(alpha[1]);
        let action = tr(&g, &g) / hd.nrows() as f64;
        (alpha, a, action)
    }

    #[test]
    fn order_two_matches_dense_least_squares_on_edge() {
        // C4 is parallel to C2 here, so only A and the action are unique.
        let h = build_h0::<f64>(&unit_edge(), 0.3).unwrap();
        let s = approx_gauge_potential(&h, 2).unwrap();
        let (_, a, action) = dense_order_two(&h);
        assert!(s.rank_deficient);
        assert!((s.a_lambda.to_dense() - a).norm() < 1e-8);
        assert!((s.action - action).abs() < 1e-8);
    }

    #[test]
    fn order_two_matches_dense_least_squares_on_triangle() {
        let g = WeightedGraph::new(3, [(0, 1, 0.3), (1, 2, 0.6), (0, 2, 0.9)]).unwrap();
        let h = build_h0::<f64>(&g, 0.4).unwrap();
        let s = approx_gauge_potential(&h, 2).unwrap();
        let (alpha, a, action) = dense_order_two(&h);
        assert!(!s.rank_deficient);
        for k in 0..2 {
            assert!((alpha[k] - s.alpha[k]).abs() < 1e-8 * (1.0 + alpha[k].abs()), "{alpha} vs {:?}", s.alpha);
        }
        assert!((s.a_lambda.to_dense() - a).norm() < 1e-8);
        assert!((s.action - action).abs() < 1e-8);
    }

    #[test]
    fn normal_equations_match_dense_traces() {
        let g = WeightedGraph::new(3, [(0, 1, 0.3), (1, 2, 0.6), (0, 2, 0.9)]).unwrap();
        let h = build_h0::<f64>(&g, 0.6).unwrap();
        let c1 = h.h0().commutator(h.d_lambda()).unwrap();
        let c2 = h.h0().commutator(&c1).unwrap();
        let dim = 8.0;
        let dense = (h.d_lambda().to_dense().adjoint() * c2.to_dense()).trace().re / dim;
        assert!((h.d_lambda().trace_inner(&c2).unwrap() - dense).abs() < 1e-10);
        let dense = (c2.to_dense().adjoint() * c2.to_dense()).trace().re / dim;
        assert!((c2.trace_inner(&c2).unwrap() - dense).abs() < 1e-10 * (1.0 + dense));
    }

    #[test]
    fn oracle_distance_shrinks_with_order() {
        for &l in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let h = build_h0::<f64>(&unit_edge(), l).unwrap();
            let d: Vec<f64> =
                approx_gauge_series(&h, 3).unwrap().iter().map(|s| oracle_distance(&h, &s.a_lambda).unwrap()).collect();
            assert!(d[1] <= d[0] + 1e-10 && d[2] <= d[1] + 1e-10, "lambda {l}: {d:?}");
        }
    }

    #[test]
    fn terms_are_odd_y_and_flip_symmetric() {
        let g = generate_regular_graph(6, 3, 2).unwrap();
        for s in approx_gauge_series(&build_h0::<f64>(&g, 0.4).unwrap(), 3).unwrap() {
            assert!(!s.a_lambda.is_empty());
            assert!(s.a_lambda.is_hermitian());
            for (p, _) in s.a_lambda.iter() {
                assert!(p.y_count() % 2 == 1 && p.commutes_with_flip(), "{p}");
            }
        }
    }

    #[test]
    fn exact_is_finite_at_lambda_zero() {
        let g = generate_regular_graph(4, 3, 1).unwrap();
        let a = exact_gauge_potential(&build_h0::<f64>(&g, 0.0).unwrap()).unwrap();
        assert!(a.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(exact_gauge_potential(&build_h0::<f64>(&generate_regular_graph(8, 3, 1).unwrap(), 0.5).unwrap()).is_err());
    }

    #[test]
    fn zero_weight_graph_has_no_potential() {
        let g = WeightedGraph::new(3, [(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        let h = build_h0::<f64>(&g, 0.5).unwrap();
        assert!(exact_gauge_potential(&h).unwrap().norm() < 1e-12);
        let s = approx_gauge_potential(&h, 2).unwrap();
        assert!(s.a_lambda.is_empty() && s.rank_deficient);
        let (approx, set) = time_averaged_ranking::<f64>(&g, 1, 5).unwrap();
        assert!(approx.time_averaged.is_empty() && set.is_empty());
    }

    #[test]
    fn unit_edge_ranking_is_odd_y() {
        let (approx, set) = time_averaged_ranking::<f64>(&unit_edge(), 1, 11).unwrap();
        // [h0, dλ] = -[H_C, ΣX] contains only the edge YZ pair.
        assert_eq!(set.strings, vec!["Y0Z1", "Z0Y1"]);
        let (_, set) = time_averaged_ranking::<f64>(&unit_edge(), 2, 11).unwrap();
        let allowed = ["Y0", "Y1", "Y0Z1", "Z0Y1"];
        assert!(set.strings.iter().all(|s| allowed.contains(&s.as_str())), "{:?}", set.strings);
        let r = approx.ranking();
        // Y0Z1 and Z0Y1 share a coefficient; the canonical order decides.
        assert_eq!(r[0].1, r[1].1);
        assert!(r[0].0 < r[1].0);
    }

    #[test]
    fn ranking_invariant_under_rescaling() {
        let g = generate_regular_graph(6, 3, 9).unwrap();
        let (a, _) = time_averaged_ranking::<f64>(&g, 2, 11).unwrap();
        let (b, _) = time_averaged_ranking::<f64>(&g.scaled(2.0).unwrap(), 2, 11).unwrap();
        let names = |x: &GaugePotentialApprox<f64>| x.ranking().into_iter().take(10).map(|(p, _)| p).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
    }

    #[test]
    fn grid_validation() {
        assert!(time_averaged_ranking::<f64>(&unit_edge(), 1, 1).is_err());
        assert!(approx_gauge_series(&build_h0::<f64>(&unit_edge(), 0.5).unwrap(), 0).is_err());
    }

    fn multi_run(mixers: &[&str]) -> RunRecord {
        RunRecord {
            run_id: "r".into(),
            seed: None,
            n: 6,
            d: Some(3),
            algorithm: Algorithm::Adapt,
            pool: PoolKind::Multi,
            exact_energy: 0.0,
            reference_energy: 0.0,
            layers: mixers
                .iter()
                .enumerate()
                .map(|(k, m)| LayerRecord {
                    layer: k + 1,
                    mixer: m.to_string(),
                    energy: 0.0,
                    energy_error: 0.0,
                    grad_norm: None,
                    n_params: 2 * k + 2,
                    n_cnots: 0,
                    gradients: vec![],
                })
                .collect(),
            status: RunStatus::LayerBudget,
            final_gradient: None,
            parameters: vec![],
        }
    }

    #[test]
    fn overlap_counts() {
        let set = DominantSet { strings: vec!["Y0Z1".into(), "Z2Y3".into()] };
        let runs = vec![multi_run(&["Y0Z1", "sumX", "Z2Y3"]), multi_run(&["Z0Y1"])];
        let p = overlap_probability(&runs, &[set.clone(), set.clone()], 4).unwrap();
        assert_eq!(p[0].probability, Some(0.5));
        assert_eq!((p[1].members, p[1].instances), (0, 1));
        assert_eq!(p[2].probability, Some(1.0));
        assert_eq!(p[3].probability, None);
        let empty = overlap_probability(&runs, &[DominantSet::default(), DominantSet::default()], 1).unwrap();
        assert_eq!(empty[0].probability, Some(0.0));
        assert!(overlap_probability(&runs, &[set], 1).is_err());
    }
}
