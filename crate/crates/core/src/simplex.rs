//! Nelder–Mead downhill simplex minimizer.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Budget and stopping rule for [`minimize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Edge length of the axis-aligned starting simplex.
    pub initial_step: f64,
    /// Stop once the spread of simplex values drops below this...
    pub f_tol: f64,
    /// ...and every vertex lies within this (∞-norm) of the best one.
    pub x_tol: f64,
    /// Evaluations allowed per simplex run; `None` means `200 · dimension`.
    pub max_evals: Option<usize>,
    /// Number of times a fresh simplex is rebuilt around the incumbent.
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { initial_step: 0.1, f_tol: 1e-10, x_tol: 1e-8, max_evals: None, restarts: 1 }
    }
}

impl OptimizerConfig {
    pub fn eval_budget(&self, dim: usize) -> usize {
        self.max_evals.unwrap_or(200 * dim)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.initial_step) && positive(self.f_tol) && positive(self.x_tol)) {
            return Err(Error::InvalidArgument(format!("optimizer tolerances and step must be positive: {self:?}")));
        }
        if self.eval_budget(dim) < dim + 1 {
            return Err(Error::InvalidArgument(format!(
                "max_evals {} below dimension + 1 = {}",
                self.eval_budget(dim),
                dim + 1
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult<T> {
    pub best_point: Vec<T>,
    pub best_value: T,
    pub evals: usize,
    pub converged: bool,
    /// Incumbent best value after every iteration, across restarts.
    pub best_history: Vec<T>,
}

struct Vertex<T> {
    x: Vec<T>,
    f: T,
}

struct Counted<'a, T, F> {
    f: &'a mut F,
    evals: usize,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real, F: FnMut(&[T]) -> T> Counted<'_, T, F> {
    fn eval(&mut self, x: Vec<T>) -> Result<Vertex<T>> {
        self.evals += 1;
        let f = (self.f)(&x);
        if !f.is_finite() {
            return Err(Error::NonFinite { value: f.as_f64(), point: x.iter().map(|v| v.as_f64()).collect() });
        }
        Ok(Vertex { x, f })
    }
}

/// Minimizes `objective` starting from `x0`.
///
/// Uses reflection, expansion, contraction and shrink coefficients
/// `(1, 2, 0.5, 0.5)`. A run terminates when the value spread is below
/// `f_tol` and the simplex diameter below `x_tol`, or when the evaluation
/// budget is spent. Each restart rebuilds the starting simplex around the
/// incumbent and gets a fresh budget; no randomness is involved.
pub fn minimize<T: Real, F: FnMut(&[T]) -> T>(
    mut objective: F,
    x0: &[T],
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T>> {
    let dim = x0.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("empty starting point".into()));
    }
    cfg.validate(dim)?;
    let mut counted = Counted { f: &mut objective, evals: 0, _t: std::marker::PhantomData };
    let mut history = Vec::new();
    let mut best = counted.eval(x0.to_vec())?;
    let mut converged = false;
    for _ in 0..=cfg.restarts {
        let (b, c) = run_simplex(&mut counted, best, cfg, &mut history)?;
        best = b;
        converged = c;
    }
    Ok(OptimizationResult { best_point: best.x, best_value: best.f, evals: counted.evals, converged, best_history: history })
}

fn run_simplex<T: Real, F: FnMut(&[T]) -> T>(
    obj: &mut Counted<'_, T, F>,
    start: Vertex<T>,
    cfg: &OptimizerConfig,
    history: &mut Vec<T>,
) -> Result<(Vertex<T>, bool)> {
    let dim = start.x.len();
    let budget = obj.evals + cfg.eval_budget(dim);
    let step = T::lit(cfg.initial_step);
    let (f_tol, x_tol) = (T::lit(cfg.f_tol), T::lit(cfg.x_tol));
    let (alpha, gamma, rho, sigma) = (T::lit(REFLECT), T::lit(EXPAND), T::lit(CONTRACT), T::lit(SHRINK));

    let mut simplex = Vec::with_capacity(dim + 1);
    let x0 = start.x.clone();
    simplex.push(start);
    for i in 0..dim {
        let mut x = x0.clone();
        x[i] += step;
        simplex.push(obj.eval(x)?);
    }

    loop {
        // Stable sort keeps earlier vertices ahead on ties.
        simplex.sort_by(|a, b| a.f.partial_cmp(&b.f).unwrap());
        history.push(simplex[0].f);
        let spread = simplex[dim].f - simplex[0].f;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.x.iter().zip(&simplex[0].x).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), |m, d| m.max(d));
        if spread <= f_tol && diameter <= x_tol {
            return Ok((simplex.swap_remove(0), true));
        }
        if obj.evals >= budget {
            return Ok((simplex.swap_remove(0), false));
        }

        let inv = T::one() / T::from_usize(dim).unwrap();
        let mut centroid = vec![T::zero(); dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += *x * inv;
            }
        }
        let along = |t: T, from: &[T]| -> Vec<T> {
            centroid.iter().zip(from).map(|(c, x)| *c + t * (*x - *c)).collect()
        };

        let worst = &simplex[dim];
        let reflected = obj.eval(along(-alpha, &worst.x))?;
        if reflected.f < simplex[0].f {
            let expanded = obj.eval(along(-alpha * gamma, &worst.x))?;
            simplex[dim] = if expanded.f < reflected.f { expanded } else { reflected };
            continue;
        }
        if reflected.f < simplex[dim - 1].f {
            simplex[dim] = reflected;
            continue;
        }
        let contracted = if reflected.f < simplex[dim].f {
            let c = obj.eval(along(rho, &reflected.x))?;
            (c.f <= reflected.f).then_some(c)
        } else {
            let c = obj.eval(along(rho, &simplex[dim].x))?;
            (c.f < simplex[dim].f).then_some(c)
        };
        if let Some(c) = contracted {
            simplex[dim] = c;
            continue;
        }
        let best_x = simplex[0].x.clone();
        for v in simplex.iter_mut().skip(1) {
            let x = best_x.iter().zip(&v.x).map(|(b, x)| *b + sigma * (*x - *b)).collect();
            *v = obj.eval(x)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let r = minimize(|x: &[f64]| (x[0] - 3.0).powi(2), &[0.0], &OptimizerConfig::default()).unwrap();
        assert!((r.best_point[0] - 3.0).abs() < 1e-6, "{:?}", r.best_point);
        assert!(r.converged);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = minimize(f, &[-1.2, 1.0], &OptimizerConfig::default()).unwrap();
        assert!((r.best_point[0] - 1.0).abs() < 1e-4 && (r.best_point[1] - 1.0).abs() < 1e-4, "{:?}", r);
    }

    #[test]
    fn constant_objective() {
        let r = minimize(|_: &[f64]| 2.5, &[0.3, -0.7], &OptimizerConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.best_point, vec![0.3, -0.7]);
        assert_eq!(r.best_value, 2.5);
    }

    #[test]
    fn errors() {
        assert!(minimize(|_: &[f64]| 0.0, &[], &OptimizerConfig::default()).is_err());
        let r = minimize(|x: &[f64]| if x[0] > 0.05 { f64::NAN } else { -x[0] }, &[0.0], &OptimizerConfig::default());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
        let cfg = OptimizerConfig { max_evals: Some(2), ..Default::default() };
        assert!(minimize(|x: &[f64]| x[0] * x[0], &[0.0, 0.0], &cfg).is_err());
        let cfg = OptimizerConfig { f_tol: 0.0, ..Default::default() };
        assert!(minimize(|x: &[f64]| x[0] * x[0], &[0.0], &cfg).is_err());
    }

    #[test]
    fn best_value_matches_best_point() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 0.5).powi(4) + x[0].sin();
        let r = minimize(f, &[0.0, 0.0], &OptimizerConfig::default()).unwrap();
        assert_eq!(r.best_value, f(&r.best_point));
    }

    #[test]
    fn single_precision() {
        let cfg = OptimizerConfig { f_tol: 1e-6, x_tol: 1e-4, ..Default::default() };
        let r = minimize(|x: &[f32]| (x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2), &[0.0f32, 0.0], &cfg).unwrap();
        assert!((r.best_point[0] - 2.0).abs() < 1e-3 && (r.best_point[1] + 1.0).abs() < 1e-3);
    }
}
