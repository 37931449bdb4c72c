//! Depth-progressive initialization strategies.
//!
//! Every strategy produces one [`DepthRecord`] per depth `p = 1..=q`. Depths
//! one and two come from a multistart search ([`base_exhaustion`]); after
//! that the strategies differ in how they seed the optimizer at the new
//! depth:
//!
//! * bilinear: a single start extrapolated from the two previous optima,
//! * parameters fixing: the previous optimum plus a random new layer, over
//!   many trials with all angles free,
//! * layerwise: the previous optimum frozen, only the new layer optimized.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::opt::{maximize_box, Bounds, OptimizerConfig, Solution};
use crate::sim::{MaxCutProblem, ParameterVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Strategy {
    Bilinear,
    ParametersFixing,
    Layerwise,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::Bilinear,
        Strategy::ParametersFixing,
        Strategy::Layerwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bilinear => "bilinear",
            Strategy::ParametersFixing => "parameters_fixing",
            Strategy::Layerwise => "layerwise",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Strategy::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn run(self, problem: &MaxCutProblem, cfg: &StrategyConfig) -> Result<Vec<DepthRecord>> {
        match self {
            Strategy::Bilinear => run_bilinear(problem, cfg),
            Strategy::ParametersFixing => run_parameters_fixing(problem, cfg),
            Strategy::Layerwise => run_layerwise(problem, cfg),
        }
    }
}

impl core::fmt::Display for Strategy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyConfig {
    /// Deepest circuit to optimize (`q`).
    pub max_depth: usize,
    /// Starts per depth for the multistart searches.
    pub trials: usize,
    pub rng_seed: u64,
    pub bounds: Bounds,
    pub optimizer: OptimizerConfig,
}

impl StrategyConfig {
    /// Defaults for `problem`: 20 trials, seed 0 and the class bounds.
    pub fn for_problem(problem: &MaxCutProblem, max_depth: usize) -> Self {
        StrategyConfig {
            max_depth,
            trials: 20,
            rng_seed: 0,
            bounds: Bounds::for_class(problem.graph().classify()),
            optimizer: OptimizerConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 {
            return Err(Error::invalid("max depth must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("at least one trial is required"));
        }
        self.optimizer.validate()
    }
}

/// Optimization outcome at one depth.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepthRecord {
    pub depth: usize,
    pub strategy: Strategy,
    pub phi_star: ParameterVector,
    pub f_star: f64,
    pub alpha: f64,
    /// Circuit evaluations spent at this depth, summed over all trials.
    pub nfev: u64,
    /// Local optimizations run at this depth.
    pub optimizer_runs: usize,
    /// Whether the kept run met a convergence criterion.
    pub converged: bool,
}

/// Objective values closer than this count as ties. Finite-difference
/// gradients leave roundoff in the last digits of converged optima.
const TIE_TOLERANCE: f64 = 1e-9;

/// Best of several local runs; ties go to the earliest start.
pub(crate) struct Multistart {
    best: Option<Solution>,
    nfev: u64,
    runs: usize,
}

impl Multistart {
    fn new() -> Self {
        Multistart {
            best: None,
            nfev: 0,
            runs: 0,
        }
    }

    fn push(&mut self, sol: Solution) {
        self.nfev += sol.nfev;
        self.runs += 1;
        if self
            .best
            .as_ref()
            .is_none_or(|b| sol.value > b.value + TIE_TOLERANCE)
        {
            self.best = Some(sol);
        }
    }
}

pub(crate) fn record(
    problem: &MaxCutProblem,
    strategy: Strategy,
    phi_star: ParameterVector,
    f_star: f64,
    ms: &Multistart,
    converged: bool,
) -> Result<DepthRecord> {
    Ok(DepthRecord {
        depth: phi_star.depth(),
        strategy,
        alpha: problem.approximation_ratio(f_star)?,
        phi_star,
        f_star,
        nfev: ms.nfev,
        optimizer_runs: ms.runs,
        converged,
    })
}

fn optimize_full(
    problem: &MaxCutProblem,
    x0: &[f64],
    bounds: &Bounds,
    cfg: &OptimizerConfig,
) -> Result<Solution> {
    let (lower, upper) = bounds.flat_limits(x0.len() / 2);
    maximize_box(|x| problem.expectation_flat(x), x0, &lower, &upper, cfg)
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let base = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// `index`-th Halton point in `[0, 1)^dim` (index 0 is the origin).
pub fn halton_point(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len(), "Halton dimension {dim} too large");
    PRIMES[..dim].iter().map(|&b| radical_inverse(index, b)).collect()
}

/// Multistart search at depth one or two: one start at the lower corner of
/// `region` and `trials - 1` Halton points inside it, each optimized within
/// `bounds`.
pub(crate) fn exhaust_region(
    problem: &MaxCutProblem,
    depth: usize,
    region: &Bounds,
    bounds: &Bounds,
    trials: usize,
    optimizer: &OptimizerConfig,
) -> Result<(Solution, Multistart)> {
    let (lower, upper) = region.flat_limits(depth);
    let mut ms = Multistart::new();
    for t in 0..trials {
        let x0: Vec<f64> = halton_point(t as u64, 2 * depth)
            .iter()
            .zip(lower.iter().zip(&upper))
            .map(|(u, (lo, hi))| lo + u * (hi - lo))
            .collect();
        ms.push(optimize_full(problem, &x0, bounds, optimizer)?);
    }
    let best = ms.best.clone().expect("at least one trial");
    Ok((best, ms))
}

/// Locates the depth-1 or depth-2 optimum by seeded multistart.
pub fn base_exhaustion(
    problem: &MaxCutProblem,
    depth: usize,
    cfg: &StrategyConfig,
    strategy: Strategy,
) -> Result<DepthRecord> {
    if depth != 1 && depth != 2 {
        return Err(Error::invalid(format!(
            "base exhaustion covers depths 1 and 2, not {depth}"
        )));
    }
    cfg.validate()?;
    let (best, ms) = exhaust_region(
        problem,
        depth,
        &cfg.bounds,
        &cfg.bounds,
        cfg.trials,
        &cfg.optimizer,
    )?;
    record(
        problem,
        strategy,
        ParameterVector::from_flat(&best.x)?,
        best.value,
        &ms,
        best.converged,
    )
}

fn extrapolate(prev: &[f64], prev2: &[f64]) -> Vec<f64> {
    let p = prev.len() + 1;
    let mut out = Vec::with_capacity(p);
    // j <= p - 2: continue each angle's drift across depths
    out.extend(prev[..p - 2].iter().zip(prev2).map(|(a, b)| 2.0 * a - b));
    // j = p - 1: no entry at depth p - 2, borrow the drift of index p - 2
    out.push(prev[p - 2] + (prev[p - 3] - prev2[p - 3]));
    // j = p: continue the trend along the angle index
    out.push(2.0 * out[p - 2] - out[p - 3]);
    out
}

/// Predicts the depth-`p` starting point from the optima at depths `p - 1`
/// and `p - 2`, then clamps every angle into `bounds`.
pub fn bilinear_predict(
    prev: &ParameterVector,
    prev2: &ParameterVector,
    bounds: &Bounds,
) -> Result<ParameterVector> {
    if prev.depth() != prev2.depth() + 1 {
        return Err(Error::invalid(format!(
            "bilinear prediction needs consecutive depths, got {} and {}",
            prev.depth(),
            prev2.depth()
        )));
    }
    let raw = ParameterVector::new(
        extrapolate(prev.gammas(), prev2.gammas()),
        extrapolate(prev.betas(), prev2.betas()),
    )?;
    Ok(bounds.clamp(&raw))
}

/// Bilinear strategy continued from two given base records at depths 1 and
/// 2. Each deeper level costs exactly one local optimization.
pub fn run_bilinear_from(
    problem: &MaxCutProblem,
    cfg: &StrategyConfig,
    base: [DepthRecord; 2],
) -> Result<Vec<DepthRecord>> {
    cfg.validate()?;
    let mut records: Vec<DepthRecord> = base.into_iter().take(cfg.max_depth).collect();
    for _ in 3..=cfg.max_depth {
        let n = records.len();
        let phi0 = bilinear_predict(&records[n - 1].phi_star, &records[n - 2].phi_star, &cfg.bounds)?;
        let sol = optimize_full(problem, &phi0.to_flat(), &cfg.bounds, &cfg.optimizer)?;
        let mut ms = Multistart::new();
        ms.push(sol.clone());
        records.push(record(
            problem,
            Strategy::Bilinear,
            ParameterVector::from_flat(&sol.x)?,
            sol.value,
            &ms,
            sol.converged,
        )?);
    }
    Ok(records)
}

pub fn run_bilinear(problem: &MaxCutProblem, cfg: &StrategyConfig) -> Result<Vec<DepthRecord>> {
    cfg.validate()?;
    let first = base_exhaustion(problem, 1, cfg, Strategy::Bilinear)?;
    if cfg.max_depth == 1 {
        return Ok(alloc::vec![first]);
    }
    let second = base_exhaustion(problem, 2, cfg, Strategy::Bilinear)?;
    run_bilinear_from(problem, cfg, [first, second])
}

/// New-layer starting pairs for one depth: `(0, 0)` clamped into the box,
/// then uniform draws.
fn new_layer_starts(rng: &mut ChaCha8Rng, bounds: &Bounds, trials: usize) -> Vec<(f64, f64)> {
    let mut starts = Vec::with_capacity(trials);
    starts.push((bounds.clamp_gamma(0.0), bounds.clamp_beta(0.0)));
    for _ in 1..trials {
        starts.push((
            rng.gen_range(bounds.gamma_min..bounds.gamma_max),
            rng.gen_range(bounds.beta_min..bounds.beta_max),
        ));
    }
    starts
}

/// Parameters fixing: at each new depth, `trials` full optimizations start
/// from the previous optimum extended by one new layer.
pub fn run_parameters_fixing(problem: &MaxCutProblem, cfg: &StrategyConfig) -> Result<Vec<DepthRecord>> {
    cfg.validate()?;
    let first = base_exhaustion(problem, 1, cfg, Strategy::ParametersFixing)?;
    run_parameters_fixing_from(problem, cfg, first)
}

/// Parameters fixing continued from a given depth-1 record.
pub fn run_parameters_fixing_from(
    problem: &MaxCutProblem,
    cfg: &StrategyConfig,
    first: DepthRecord,
) -> Result<Vec<DepthRecord>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut records = alloc::vec![first];
    for _ in 2..=cfg.max_depth {
        let prev = &records[records.len() - 1].phi_star;
        let mut ms = Multistart::new();
        for (gamma, beta) in new_layer_starts(&mut rng, &cfg.bounds, cfg.trials) {
            let mut gammas = prev.gammas().to_vec();
            gammas.push(gamma);
            let mut betas = prev.betas().to_vec();
            betas.push(beta);
            let x0 = ParameterVector::new(gammas, betas)?.to_flat();
            ms.push(optimize_full(problem, &x0, &cfg.bounds, &cfg.optimizer)?);
        }
        let best = ms.best.clone().expect("at least one trial");
        records.push(record(
            problem,
            Strategy::ParametersFixing,
            ParameterVector::from_flat(&best.x)?,
            best.value,
            &ms,
            best.converged,
        )?);
    }
    Ok(records)
}

/// Layerwise: earlier layers stay frozen at the previous optimum and only
/// the newest `(gamma_p, beta_p)` pair is optimized.
pub fn run_layerwise(problem: &MaxCutProblem, cfg: &StrategyConfig) -> Result<Vec<DepthRecord>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut records = alloc::vec![base_exhaustion(problem, 1, cfg, Strategy::Layerwise)?];
    let lower = [cfg.bounds.gamma_min, cfg.bounds.beta_min];
    let upper = [cfg.bounds.gamma_max, cfg.bounds.beta_max];
    for _ in 2..=cfg.max_depth {
        let prev = records[records.len() - 1].phi_star.clone();
        let depth = prev.depth() + 1;
        let mut gammas = prev.gammas().to_vec();
        gammas.push(0.0);
        let mut betas = prev.betas().to_vec();
        betas.push(0.0);
        let mut full = gammas;
        full.extend_from_slice(&betas);
        let objective = |layer: &[f64]| {
            let mut x = full.clone();
            x[depth - 1] = layer[0];
            x[2 * depth - 1] = layer[1];
            problem.expectation_flat(&x)
        };
        let mut ms = Multistart::new();
        for (gamma, beta) in new_layer_starts(&mut rng, &cfg.bounds, cfg.trials) {
            ms.push(maximize_box(
                objective,
                &[gamma, beta],
                &lower,
                &upper,
                &cfg.optimizer,
            )?);
        }
        let best = ms.best.clone().expect("at least one trial");
        let mut x = full.clone();
        x[depth - 1] = best.x[0];
        x[2 * depth - 1] = best.x[1];
        records.push(record(
            problem,
            Strategy::Layerwise,
            ParameterVector::from_flat(&x)?,
            best.value,
            &ms,
            best.converged,
        )?);
    }
    Ok(records)
}

/// Discretized linear annealing path: `gamma_j = (j/p) dt`,
/// `beta_j = (1 - j/p) dt` for `j = 1..=p`.
pub fn linear_ramp_init(depth: usize, delta_t: f64) -> Result<ParameterVector> {
    if depth == 0 {
        return Err(Error::invalid("linear ramp needs depth p >= 1"));
    }
    if !(delta_t > 0.0) {
        return Err(Error::invalid(format!("time step {delta_t} must be positive")));
    }
    let p = depth as f64;
    let gammas = (1..=depth).map(|j| j as f64 / p * delta_t).collect();
    let betas = (1..=depth).map(|j| (1.0 - j as f64 / p) * delta_t).collect();
    ParameterVector::new(gammas, betas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn pv(g: &[f64], b: &[f64]) -> ParameterVector {
        ParameterVector::new(g.to_vec(), b.to_vec()).unwrap()
    }

    fn wide() -> Bounds {
        Bounds::new(-10.0, 10.0, -10.0, 10.0).unwrap()
    }

    #[test]
    fn halton_prefix() {
        assert_eq!(halton_point(0, 2), alloc::vec![0.0, 0.0]);
        assert_eq!(halton_point(1, 2), alloc::vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton_point(2, 2), alloc::vec![0.25, 2.0 / 3.0]);
    }

    #[test]
    fn bilinear_prediction_rules() {
        let prev2 = pv(&[0.3], &[0.35]);
        let prev = pv(&[0.2, 0.5], &[0.4, 0.1]);
        let b = Bounds::new(0.0, PI, 0.0, FRAC_PI_2).unwrap();
        let out = bilinear_predict(&prev, &prev2, &b).unwrap();
        for (got, want) in out.gammas().iter().zip([0.1, 0.4, 0.7]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        for (got, want) in out.betas().iter().zip([0.45, 0.15, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn bilinear_constant_inputs_stay_constant() {
        let out = bilinear_predict(&pv(&[0.4; 3], &[0.2; 3]), &pv(&[0.4; 2], &[0.2; 2]), &wide()).unwrap();
        assert_eq!(out.gammas(), &[0.4; 4]);
        assert_eq!(out.betas(), &[0.2; 4]);
    }

    #[test]
    fn bilinear_rejects_non_consecutive_depths() {
        assert!(bilinear_predict(&pv(&[0.1; 3], &[0.1; 3]), &pv(&[0.1], &[0.1]), &wide()).is_err());
        assert!(bilinear_predict(&pv(&[0.1], &[0.1]), &pv(&[0.1], &[0.1]), &wide()).is_err());
    }

    #[test]
    fn linear_ramp_examples() {
        let r = linear_ramp_init(2, 1.0).unwrap();
        assert_eq!((r.gammas(), r.betas()), (&[0.5, 1.0][..], &[0.5, 0.0][..]));
        let r = linear_ramp_init(3, 0.9).unwrap();
        for (got, want) in r.to_flat().iter().zip([0.3, 0.6, 0.9, 0.6, 0.3, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let r = linear_ramp_init(1, 0.7).unwrap();
        assert_eq!((r.gammas(), r.betas()), (&[0.7][..], &[0.0][..]));
        assert!(linear_ramp_init(0, 1.0).is_err());
        assert!(linear_ramp_init(2, 0.0).is_err());
    }

    #[test]
    fn base_exhaustion_on_single_edge() {
        let problem = MaxCutProblem::new(Graph::complete(2).unwrap()).unwrap();
        let mut cfg = StrategyConfig::for_problem(&problem, 2);
        cfg.bounds = Bounds::new(0.0, PI, 0.0, FRAC_PI_2).unwrap();
        let r = base_exhaustion(&problem, 1, &cfg, Strategy::Bilinear).unwrap();
        assert_abs_diff_eq!(r.phi_star.gammas()[0], FRAC_PI_2, epsilon = 1e-5);
        assert_abs_diff_eq!(r.phi_star.betas()[0], FRAC_PI_8, epsilon = 1e-5);
        assert_abs_diff_eq!(r.f_star, 1.0, epsilon = 1e-5);
        assert_eq!(r.optimizer_runs, 20);

        let r2 = base_exhaustion(&problem, 2, &cfg, Strategy::Bilinear).unwrap();
        assert_eq!(r2.phi_star.depth(), 2);
        assert!(cfg.bounds.contains(&r2.phi_star));
        assert!(base_exhaustion(&problem, 3, &cfg, Strategy::Bilinear).is_err());
    }

    #[test]
    fn base_exhaustion_beats_the_origin() {
        let g = Graph::erdos_renyi(7, 0.5, 5).unwrap();
        let m = g.num_edges() as f64;
        let problem = MaxCutProblem::new(g).unwrap();
        let cfg = StrategyConfig::for_problem(&problem, 1);
        let r = base_exhaustion(&problem, 1, &cfg, Strategy::Bilinear).unwrap();
        assert!(cfg.bounds.contains(&r.phi_star));
        assert!(r.f_star >= m / 2.0);
    }

    #[test]
    fn bilinear_up_to_depth_two_is_base_exhaustion() {
        let problem = MaxCutProblem::new(Graph::complete(3).unwrap()).unwrap();
        let cfg = StrategyConfig::for_problem(&problem, 2);
        let recs = run_bilinear(&problem, &cfg).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(
            recs[0],
            base_exhaustion(&problem, 1, &cfg, Strategy::Bilinear).unwrap()
        );
        assert_eq!(
            recs[1],
            base_exhaustion(&problem, 2, &cfg, Strategy::Bilinear).unwrap()
        );
    }

    #[test]
    fn bilinear_depth_three_on_triangle() {
        let problem = MaxCutProblem::new(Graph::complete(3).unwrap()).unwrap();
        let cfg = StrategyConfig::for_problem(&problem, 3);
        let before = problem.evaluations();
        let recs = run_bilinear(&problem, &cfg).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs[2].alpha >= recs[1].alpha - 0.01);
        assert_eq!(recs[2].optimizer_runs, 1);
        let total: u64 = recs.iter().map(|r| r.nfev).sum();
        assert_eq!(total, problem.evaluations() - before);
    }

    #[test]
    fn identity_layer_start_reproduces_previous_optimum() {
        let problem = MaxCutProblem::new(Graph::random_regular(8, 3, 1).unwrap()).unwrap();
        let cfg = StrategyConfig::for_problem(&problem, 1);
        let r = base_exhaustion(&problem, 1, &cfg, Strategy::ParametersFixing).unwrap();
        let extended = pv(&[r.phi_star.gammas()[0], 0.0], &[r.phi_star.betas()[0], 0.0]);
        assert_eq!(problem.expectation(&extended), r.f_star);
    }

    #[test]
    fn baselines_on_single_edge_are_exact() {
        let problem = MaxCutProblem::new(Graph::complete(2).unwrap()).unwrap();
        let mut cfg = StrategyConfig::for_problem(&problem, 3);
        cfg.trials = 5;
        for strategy in Strategy::ALL {
            for r in strategy.run(&problem, &cfg).unwrap() {
                assert_abs_diff_eq!(r.alpha, 1.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn baselines_are_monotone_and_layerwise_is_dominated() {
        let problem = MaxCutProblem::new(Graph::erdos_renyi(7, 0.5, 21).unwrap()).unwrap();
        let mut cfg = StrategyConfig::for_problem(&problem, 5);
        cfg.trials = 6;
        let pf = run_parameters_fixing(&problem, &cfg).unwrap();
        let lw = run_layerwise(&problem, &cfg).unwrap();
        for w in pf.windows(2).chain(lw.windows(2)) {
            assert!(w[1].alpha >= w[0].alpha - 1e-9);
        }
        for (a, b) in pf.iter().zip(&lw) {
            assert!(b.f_star <= a.f_star + 1e-6);
            assert_eq!(a.optimizer_runs, 6);
        }
        for w in lw.windows(2) {
            let p = w[0].depth;
            assert_eq!(&w[1].phi_star.gammas()[..p], w[0].phi_star.gammas());
            assert_eq!(&w[1].phi_star.betas()[..p], w[0].phi_star.betas());
        }
    }

    #[test]
    fn strategies_reject_bad_configs() {
        let problem = MaxCutProblem::new(Graph::complete(2).unwrap()).unwrap();
        let mut cfg = StrategyConfig::for_problem(&problem, 0);
        assert!(run_bilinear(&problem, &cfg).is_err());
        cfg.max_depth = 2;
        cfg.trials = 0;
        assert!(run_parameters_fixing(&problem, &cfg).is_err());
    }

    proptest! {
        #[test]
        fn prediction_stays_in_bounds(
            prev2 in proptest::collection::vec(-3.0..3.0f64, 2..6),
            extra in proptest::collection::vec(-3.0..3.0f64, 2),
        ) {
            let p2 = prev2.len();
            let mut prev: Vec<f64> = prev2.iter().map(|x| x * 0.9).collect();
            prev.push(extra[0]);
            let b = Bounds::new(0.0, PI, 0.0, FRAC_PI_2).unwrap();
            let out = bilinear_predict(
                &pv(&prev, &prev),
                &pv(&prev2, &prev2),
                &b,
            ).unwrap();
            prop_assert_eq!(out.depth(), p2 + 2);
            prop_assert!(b.contains(&out));
        }

        #[test]
        fn prediction_is_shift_equivariant(
            prev2 in proptest::collection::vec(-1.0..1.0f64, 1..5),
            last in -1.0..1.0f64,
            shift in -2.0..2.0f64,
        ) {
            let mut prev: Vec<f64> = prev2.iter().map(|x| x + 0.1).collect();
            prev.push(last);
            let base = bilinear_predict(&pv(&prev, &prev), &pv(&prev2, &prev2), &wide()).unwrap();
            let shifted_prev: Vec<f64> = prev.iter().map(|x| x + shift).collect();
            let shifted_prev2: Vec<f64> = prev2.iter().map(|x| x + shift).collect();
            let moved = bilinear_predict(
                &pv(&shifted_prev, &prev),
                &pv(&shifted_prev2, &prev2),
                &wide(),
            ).unwrap();
            for (a, b) in moved.gammas().iter().zip(base.gammas()) {
                prop_assert!((a - b - shift).abs() < 1e-12);
            }
            prop_assert_eq!(moved.betas(), base.betas());
        }
    }
}
