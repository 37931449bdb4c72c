//! Box-constrained maximization with exact evaluation accounting.
//!
//! The optimizer is a projected limited-memory BFGS method in the L-BFGS-B
//! family: the search direction comes from the two-loop recursion restricted
//! to the free variables, steps are projected onto the box, and an Armijo
//! backtracking search along the projected path guarantees monotone progress.
//! Gradients are central finite differences, and every probe counts as one
//! objective evaluation.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::graph::Classification;
use crate::sim::ParameterVector;

/// Uniform box on every gamma and every beta of a parameter vector.
///
/// The landscape bounds are half-open intervals; the optimizer works on the
/// closed box, which loses nothing because the upper edge is a periodic image
/// of the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Bounds {
    pub fn new(gamma_min: f64, gamma_max: f64, beta_min: f64, beta_max: f64) -> Result<Self> {
        if !(gamma_min < gamma_max) || !(beta_min < beta_max) {
            return Err(Error::invalid(format!(
                "empty box: gamma [{gamma_min}, {gamma_max}], beta [{beta_min}, {beta_max}]"
            )));
        }
        Ok(Bounds {
            gamma_min,
            gamma_max,
            beta_min,
            beta_max,
        })
    }

    /// Redundancy-free box for a graph class: regular graphs use
    /// `gamma, beta in [0, pi/2)`, everything else `gamma in [0, pi)`,
    /// `beta in [0, pi/2)`.
    pub fn for_class(class: Classification) -> Self {
        let gamma_max = if class.is_regular() { FRAC_PI_2 } else { PI };
        Bounds {
            gamma_min: 0.0,
            gamma_max,
            beta_min: 0.0,
            beta_max: FRAC_PI_2,
        }
    }

    pub fn clamp_gamma(&self, gamma: f64) -> f64 {
        gamma.clamp(self.gamma_min, self.gamma_max)
    }

    pub fn clamp_beta(&self, beta: f64) -> f64 {
        beta.clamp(self.beta_min, self.beta_max)
    }

    /// Replaces each out-of-box angle by the nearer boundary value.
    pub fn clamp(&self, phi: &ParameterVector) -> ParameterVector {
        phi.map(|_, g| self.clamp_gamma(g), |_, b| self.clamp_beta(b))
    }

    pub fn contains(&self, phi: &ParameterVector) -> bool {
        phi.gammas()
            .iter()
            .all(|g| (self.gamma_min..=self.gamma_max).contains(g))
            && phi
                .betas()
                .iter()
                .all(|b| (self.beta_min..=self.beta_max).contains(b))
    }

    /// Per-coordinate lower and upper limits for the flat layout at `depth`.
    pub fn flat_limits(&self, depth: usize) -> (Vec<f64>, Vec<f64>) {
        let mut lower = vec![self.gamma_min; depth];
        lower.extend(core::iter::repeat_n(self.beta_min, depth));
        let mut upper = vec![self.gamma_max; depth];
        upper.extend(core::iter::repeat_n(self.beta_max, depth));
        (lower, upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerConfig {
    /// Central-difference step in radians.
    pub gradient_step: f64,
    /// Stop when the relative objective change of an iteration drops below this.
    pub convergence_tolerance: f64,
    /// Stop when the projected gradient's infinity norm drops below this.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Number of stored correction pairs.
    pub memory: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            gradient_step: 1e-6,
            convergence_tolerance: 1e-9,
            gradient_tolerance: 1e-6,
            max_iterations: 500,
            memory: 10,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.gradient_step > 0.0
            && self.convergence_tolerance > 0.0
            && self.gradient_tolerance > 0.0
            && self.max_iterations > 0
            && self.memory > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("optimizer settings must all be positive"))
        }
    }
}

/// Outcome of [`maximize_box`] in the flat coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective calls, gradient probes included.
    pub nfev: u64,
    pub iterations: usize,
    pub converged: bool,
}

/// Outcome of [`maximize_bounded`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptResult {
    pub phi_star: ParameterVector,
    pub f_star: f64,
    pub nfev: u64,
    pub iterations: usize,
    pub converged: bool,
}

/// `(f(x + h e_i) - f(x - h e_i)) / 2h` for every coordinate.
pub fn central_difference(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], step: f64, out: &mut [f64]) {
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + step;
        let plus = f(&probe);
        probe[i] = x[i] - step;
        let minus = f(&probe);
        probe[i] = x[i];
        out[i] = (plus - minus) / (2.0 * step);
    }
}

/// Wraps the objective as a counted minimization target.
struct Counted<F> {
    objective: F,
    nfev: u64,
    best: Option<(Vec<f64>, f64)>,
    failure: Option<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    /// Negated objective. Non-finite values are recorded and replaced by
    /// +inf so line searches reject them.
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.nfev += 1;
        let v = (self.objective)(x);
        if !v.is_finite() {
            self.failure.get_or_insert(v);
            return f64::INFINITY;
        }
        if self.best.as_ref().is_none_or(|(_, b)| v > *b) {
            self.best = Some((x.to_vec(), v));
        }
        -v
    }

    fn gradient(&mut self, x: &[f64], step: f64, out: &mut [f64]) {
        central_difference(|p| self.eval(p), x, step, out);
    }

    fn check(&self, iterations: usize) -> Result<()> {
        match self.failure {
            None => Ok(()),
            Some(value) => {
                let (x, v) = self.best.clone().unwrap_or_default();
                Err(Error::OptimizationFailure {
                    value,
                    partial: Box::new(Solution {
                        x,
                        value: v,
                        nfev: self.nfev,
                        iterations,
                        converged: false,
                    }),
                })
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(lo, hi);
    }
}

/// Projected gradient for minimization: components that would push a
/// variable further past an active bound are zeroed.
fn projected_gradient(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64], out: &mut [f64]) {
    for i in 0..x.len() {
        let blocked = (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0);
        out[i] = if blocked { 0.0 } else { g[i] };
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Maximizes `objective` over the box `[lower, upper]` starting at `x0`
/// (projected onto the box first). Deterministic for fixed inputs.
pub fn maximize_box(
    objective: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    cfg: &OptimizerConfig,
) -> Result<Solution> {
    cfg.validate()?;
    let dim = x0.len();
    if dim == 0 || lower.len() != dim || upper.len() != dim {
        return Err(Error::invalid(format!(
            "dimension mismatch: x0 {dim}, lower {}, upper {}",
            lower.len(),
            upper.len()
        )));
    }
    if lower.iter().zip(upper).any(|(lo, hi)| !(lo <= hi)) {
        return Err(Error::invalid("lower bound exceeds upper bound"));
    }

    let mut f = Counted {
        objective,
        nfev: 0,
        best: None,
        failure: None,
    };
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let mut fx = f.eval(&x);
    f.check(0)?;
    let mut g = vec![0.0; dim];
    f.gradient(&x, cfg.gradient_step, &mut g);
    f.check(0)?;

    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(cfg.memory);
    let mut pg = vec![0.0; dim];
    let mut dir = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut g_new = vec![0.0; dim];
    let mut alphas = vec![0.0; cfg.memory];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        projected_gradient(&x, &g, lower, upper, &mut pg);
        if inf_norm(&pg) <= cfg.gradient_tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        // two-loop recursion on the free subspace
        dir.copy_from_slice(&pg);
        for (k, (s, y, rho)) in memory.iter().enumerate().rev() {
            alphas[k] = rho * dot(s, &dir);
            dir.iter_mut().zip(y).for_each(|(d, yi)| *d -= alphas[k] * yi);
        }
        if let Some((s, y, _)) = memory.back() {
            let scale = dot(s, y) / dot(y, y);
            dir.iter_mut().for_each(|d| *d *= scale);
        }
        for (k, (s, y, rho)) in memory.iter().enumerate() {
            let b = rho * dot(y, &dir);
            dir.iter_mut()
                .zip(s)
                .for_each(|(d, si)| *d += (alphas[k] - b) * si);
        }
        for i in 0..dim {
            dir[i] = if pg[i] == 0.0 { 0.0 } else { -dir[i] };
        }
        if dot(&dir, &g) >= 0.0 {
            memory.clear();
            dir.iter_mut().zip(&pg).for_each(|(d, p)| *d = -p);
        }

        let mut step = if memory.is_empty() {
            (1.0 / libm::sqrt(dot(&dir, &dir))).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..40 {
            for i in 0..dim {
                trial[i] = x[i] + step * dir[i];
            }
            project(&mut trial, lower, upper);
            let decrease: f64 = g
                .iter()
                .zip(&trial)
                .zip(&x)
                .map(|((gi, t), xi)| gi * (t - xi))
                .sum();
            if decrease >= 0.0 {
                break;
            }
            let ft = f.eval(&trial);
            if f.failure.is_some() {
                break;
            }
            if ft <= fx + 1e-4 * decrease {
                accepted = Some(ft);
                break;
            }
            step *= 0.5;
        }
        f.check(iterations)?;
        let Some(f_trial) = accepted else {
            // no descent left that finite differences can resolve
            break;
        };

        f.gradient(&trial, cfg.gradient_step, &mut g_new);
        f.check(iterations)?;
        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-10 * dot(&y, &y) {
            if memory.len() == cfg.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }

        let change = fx - f_trial;
        x.copy_from_slice(&trial);
        g.copy_from_slice(&g_new);
        let previous = fx;
        fx = f_trial;
        if change <= cfg.convergence_tolerance * previous.abs().max(fx.abs()).max(1.0) {
            converged = true;
            break;
        }
    }

    Ok(Solution {
        x,
        value: -fx,
        nfev: f.nfev,
        iterations,
        converged,
    })
}

/// Maximizes an objective over parameter vectors inside `bounds`. The
/// objective receives the flat `(gammas, betas)` layout.
pub fn maximize_bounded(
    objective: impl FnMut(&[f64]) -> f64,
    phi0: &ParameterVector,
    bounds: &Bounds,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    let (lower, upper) = bounds.flat_limits(phi0.depth());
    let sol = maximize_box(objective, &phi0.to_flat(), &lower, &upper, cfg)?;
    Ok(OptResult {
        phi_star: ParameterVector::from_flat(&sol.x)?,
        f_star: sol.value,
        nfev: sol.nfev,
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::sim::MaxCutProblem;
    use approx::assert_abs_diff_eq;
    use core::cell::Cell;
    use core::f64::consts::FRAC_PI_8;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};

    #[test]
    fn table_of_bounds() {
        let regular = Bounds::new(0.0, FRAC_PI_2, 0.0, FRAC_PI_2).unwrap();
        assert_eq!(Bounds::for_class(Classification::OddRegular), regular);
        assert_eq!(Bounds::for_class(Classification::EvenRegular), regular);
        assert_eq!(
            Bounds::for_class(Classification::NonRegular),
            Bounds::new(0.0, PI, 0.0, FRAC_PI_2).unwrap()
        );
        assert!(Bounds::new(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn clamp_takes_the_nearer_boundary() {
        let b = Bounds::for_class(Classification::OddRegular);
        let phi = ParameterVector::new(vec![1.7, 0.4], vec![0.3, -0.15]).unwrap();
        let c = b.clamp(&phi);
        assert_eq!(c.gammas(), &[FRAC_PI_2, 0.4]);
        assert_eq!(c.betas(), &[0.3, 0.0]);
    }

    #[test]
    fn interior_quadratic_maximum() {
        let s = maximize_box(
            |x| -(x[0] - 0.3).powi(2),
            &[0.9],
            &[0.0],
            &[1.0],
            &Default::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(s.x[0], 0.3, epsilon = 1e-6);
        assert!(s.converged);
    }

    #[test]
    fn active_bound_maximum() {
        let s = maximize_box(
            |x| -(x[0] + 1.0).powi(2),
            &[0.5],
            &[0.0],
            &[1.0],
            &Default::default(),
        )
        .unwrap();
        assert_eq!(s.x[0], 0.0);
        assert!(s.converged);
    }

    #[test]
    fn rosenbrock_in_a_box() {
        let s = maximize_box(
            |x| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            &[-1.2, 1.0],
            &[-2.0, -2.0],
            &[2.0, 2.0],
            &OptimizerConfig {
                convergence_tolerance: 1e-14,
                ..Default::default()
            },
        )
        .unwrap();
        assert_abs_diff_eq!(s.x[0], 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(s.x[1], 1.0, epsilon = 2e-3);
    }

    #[test]
    fn single_edge_optimum() {
        let problem = MaxCutProblem::new(Graph::complete(2).unwrap()).unwrap();
        let bounds = Bounds::for_class(Classification::NonRegular);
        let phi0 = ParameterVector::new(vec![0.4], vec![0.3]).unwrap();
        let r = maximize_bounded(
            |x| problem.expectation_flat(x),
            &phi0,
            &bounds,
            &Default::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.phi_star.gammas()[0], FRAC_PI_2, epsilon = 1e-5);
        assert_abs_diff_eq!(r.phi_star.betas()[0], FRAC_PI_8, epsilon = 1e-5);
        assert_abs_diff_eq!(r.f_star, 1.0, epsilon = 1e-6);
        let grad = problem.gradient(&r.phi_star, 1e-6).unwrap();
        assert!(inf_norm(&grad) <= 1e-4);
    }

    #[test]
    fn non_finite_objective_reports_partial_result() {
        let calls = Cell::new(0);
        let err = maximize_box(
            |x| {
                calls.set(calls.get() + 1);
                if calls.get() > 5 {
                    f64::NAN
                } else {
                    -x[0] * x[0]
                }
            },
            &[0.5],
            &[-1.0],
            &[1.0],
            &Default::default(),
        )
        .unwrap_err();
        match err {
            Error::OptimizationFailure { value, partial } => {
                assert!(value.is_nan());
                assert!(partial.nfev >= 6);
                assert_eq!(partial.x.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = OptimizerConfig::default();
        assert!(maximize_box(|_| 0.0, &[], &[], &[], &cfg).is_err());
        assert!(maximize_box(|_| 0.0, &[0.0], &[1.0], &[0.0], &cfg).is_err());
        let bad = OptimizerConfig {
            gradient_step: 0.0,
            ..cfg
        };
        assert!(maximize_box(|_| 0.0, &[0.0], &[0.0], &[1.0], &bad).is_err());
    }

    fn landscape(seed: u64) -> (MaxCutProblem, ParameterVector, Bounds) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = Graph::erdos_renyi(6, 0.5, seed).unwrap();
        let b = Bounds::for_class(g.classify());
        let p = rng.gen_range(1..=3);
        let gammas = (0..p).map(|_| rng.gen_range(b.gamma_min..b.gamma_max)).collect();
        let betas = (0..p).map(|_| rng.gen_range(b.beta_min..b.beta_max)).collect();
        (
            MaxCutProblem::new(g).unwrap(),
            ParameterVector::new(gammas, betas).unwrap(),
            b,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn optimizer_contract(seed in 0u64..10_000) {
            let (problem, phi0, bounds) = landscape(seed);
            let start = problem.expectation(&phi0);
            let counter = Cell::new(0u64);
            let cfg = OptimizerConfig::default();
            let run = || maximize_bounded(
                |x| { counter.set(counter.get() + 1); problem.expectation_flat(x) },
                &phi0, &bounds, &cfg,
            ).unwrap();
            let r = run();
            prop_assert!(bounds.contains(&r.phi_star));
            prop_assert!(r.f_star >= start - 1e-12);
            prop_assert_eq!(r.nfev, counter.get());
            prop_assert!(r.nfev >= 1);
            prop_assert_eq!(r.clone(), run());
        }
    }
}
