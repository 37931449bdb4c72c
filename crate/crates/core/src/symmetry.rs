//! Numerical checks of the exact symmetries of the Max-Cut expectation.
//!
//! Each `check_*` function evaluates `F_p` at a point and at its image under
//! one transform and returns the absolute difference. The identities are
//! exact, so any deviation is floating-point residue.
//!
//! | transform | holds for |
//! |-----------|-----------|
//! | `(gamma, beta) -> (-gamma, -beta)` | every graph |
//! | `gamma_j += 2 pi`, `beta_j += pi/2` (any subset) | every graph |
//! | `(gamma, beta) -> (2 pi - gamma, pi/2 - beta)` | every graph |
//! | `gamma += pi`, `(gamma, beta) -> (pi - gamma, pi/2 - beta)` | even-regular graphs |
//! | `(gamma, beta) -> (pi - gamma, tilde(beta))` | odd-regular graphs |

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Classification, Graph};
use crate::opt::{Bounds, OptimizerConfig};
use crate::sim::{MaxCutProblem, ParameterVector};
use crate::strategy::{
    exhaust_region, record, run_bilinear_from, run_parameters_fixing_from, DepthRecord, Strategy,
    StrategyConfig,
};

/// Worst deviation observed for one transform over a batch of samples.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetryReport {
    pub transform: String,
    pub max_abs_deviation: f64,
    pub samples: usize,
}

fn deviation(problem: &MaxCutProblem, a: &ParameterVector, b: &ParameterVector) -> f64 {
    (problem.expectation(a) - problem.expectation(b)).abs()
}

/// `|F(gamma, beta) - F(-gamma, -beta)|`.
pub fn check_angle_reversal(problem: &MaxCutProblem, phi: &ParameterVector) -> f64 {
    deviation(problem, phi, &phi.map(|_, g| -g, |_, b| -b))
}

/// Shifts the selected angles by their periods (`2 pi` for gammas, `pi/2`
/// for betas). `shift` holds flat indices: `0..p` are gammas, `p..2p` betas.
pub fn check_periodicity(problem: &MaxCutProblem, phi: &ParameterVector, shift: &[usize]) -> Result<f64> {
    let p = phi.depth();
    if let Some(&bad) = shift.iter().find(|&&i| i >= 2 * p) {
        return Err(Error::invalid(format!(
            "shift index {bad} out of range for depth {p}"
        )));
    }
    let shifted = phi.map(
        |j, g| if shift.contains(&j) { g + 2.0 * PI } else { g },
        |j, b| {
            if shift.contains(&(p + j)) {
                b + FRAC_PI_2
            } else {
                b
            }
        },
    );
    Ok(deviation(problem, phi, &shifted))
}

/// `|F(gamma, beta) - F(2 pi - gamma, pi/2 - beta)|`.
pub fn check_general_point_symmetry(problem: &MaxCutProblem, phi: &ParameterVector) -> f64 {
    deviation(problem, phi, &phi.map(|_, g| 2.0 * PI - g, |_, b| FRAC_PI_2 - b))
}

fn require(problem: &MaxCutProblem, class: Classification) -> Result<()> {
    let got = problem.graph().classify();
    if got == class {
        Ok(())
    } else {
        Err(Error::invalid(format!("graph is {got:?}, check needs {class:?}")))
    }
}

/// Larger of the `gamma + pi` period and the `(pi - gamma, pi/2 - beta)`
/// reflection deviations. Even-regular graphs only.
pub fn check_even_regular(problem: &MaxCutProblem, phi: &ParameterVector) -> Result<f64> {
    require(problem, Classification::EvenRegular)?;
    let period = deviation(problem, phi, &phi.map(|_, g| g + PI, |_, b| b));
    let reflection = deviation(problem, phi, &phi.map(|_, g| PI - g, |_, b| FRAC_PI_2 - b));
    Ok(period.max(reflection))
}

/// Keeps odd-indexed betas (1-based) and maps even-indexed ones to
/// `pi/2 - beta`. An involution.
pub fn tilde_beta(betas: &[f64]) -> Vec<f64> {
    betas
        .iter()
        .enumerate()
        .map(|(j, &b)| if j % 2 == 1 { FRAC_PI_2 - b } else { b })
        .collect()
}

/// Image of `phi` under the odd-regular symmetry `(pi - gamma, tilde(beta))`.
pub fn odd_regular_image(phi: &ParameterVector) -> ParameterVector {
    let gammas = phi.gammas().iter().map(|g| PI - g).collect();
    ParameterVector::new(gammas, tilde_beta(phi.betas())).expect("same depth")
}

/// `|F(gamma, beta) - F(pi - gamma, tilde(beta))|`. Odd-regular graphs only.
pub fn check_odd_regular(problem: &MaxCutProblem, phi: &ParameterVector) -> Result<f64> {
    require(problem, Classification::OddRegular)?;
    Ok(deviation(problem, phi, &odd_regular_image(phi)))
}

/// Uniform angles over the full periods `gamma in [0, 2 pi)`, `beta in [0, pi)`.
pub fn random_parameters(rng: &mut impl Rng, depth: usize) -> ParameterVector {
    let gammas = (0..depth).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let betas = (0..depth).map(|_| rng.gen_range(0.0..PI)).collect();
    ParameterVector::new(gammas, betas).expect("depth >= 1")
}

#[derive(Clone, Copy)]
enum Family {
    Any,
    EvenRegular,
    OddRegular,
}

fn random_graph(rng: &mut ChaCha8Rng, family: Family, max_n: usize) -> Graph {
    loop {
        let n = rng.gen_range(2..=max_n);
        let seed = rng.gen();
        let g = match family {
            Family::Any if rng.gen_bool(0.5) => Graph::erdos_renyi(n, rng.gen_range(0.2..0.9), seed),
            Family::Any => Graph::random_regular(n, rng.gen_range(1..n), seed),
            Family::EvenRegular => Graph::random_regular(n, 2 * rng.gen_range(1..=2), seed),
            Family::OddRegular => Graph::random_regular(n, 2 * rng.gen_range(0..=1) + 1, seed),
        };
        if let Ok(g) = g {
            return g;
        }
    }
}

/// Runs every check over `samples` random `(graph, phi)` draws each, with
/// `n <= max_n` vertices and depth `p <= max_depth`.
pub fn run_symmetry_suite(
    seed: u64,
    samples: usize,
    max_n: usize,
    max_depth: usize,
) -> Result<Vec<SymmetryReport>> {
    if max_n < 4 || max_depth == 0 {
        return Err(Error::invalid("suite needs max_n >= 4 and max_depth >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    type Check = fn(&MaxCutProblem, &ParameterVector, &mut ChaCha8Rng) -> Result<f64>;
    let checks: [(&str, Family, Check); 6] = [
        ("angle_reversal", Family::Any, |pr, phi, _| {
            Ok(check_angle_reversal(pr, phi))
        }),
        ("periodicity_full", Family::Any, |pr, phi, _| {
            let all: Vec<usize> = (0..2 * phi.depth()).collect();
            check_periodicity(pr, phi, &all)
        }),
        ("periodicity_per_element", Family::Any, |pr, phi, rng| {
            let subset: Vec<usize> = (0..2 * phi.depth()).filter(|_| rng.gen_bool(0.5)).collect();
            check_periodicity(pr, phi, &subset)
        }),
        ("general_point_symmetry", Family::Any, |pr, phi, _| {
            Ok(check_general_point_symmetry(pr, phi))
        }),
        ("even_regular", Family::EvenRegular, |pr, phi, _| {
            check_even_regular(pr, phi)
        }),
        ("odd_regular", Family::OddRegular, |pr, phi, _| {
            check_odd_regular(pr, phi)
        }),
    ];
    let mut reports = Vec::with_capacity(checks.len());
    for (label, family, check) in checks {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let problem = MaxCutProblem::new(random_graph(&mut rng, family, max_n))?;
            let depth = rng.gen_range(1..=max_depth);
            let phi = random_parameters(&mut rng, depth);
            worst = worst.max(check(&problem, &phi, &mut rng)?);
        }
        reports.push(SymmetryReport {
            transform: label.into(),
            max_abs_deviation: worst,
            samples,
        });
    }
    Ok(reports)
}

/// Per-depth result of following the non-adiabatic branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub record: DepthRecord,
    /// `|F(phi*) - F(pi - gamma*, tilde(beta*))|`.
    pub image_deviation: f64,
    /// The odd-regular image of the optimum.
    pub image: ParameterVector,
    /// Whether every `pi - gamma*_j` lies in `[0, pi/2]`.
    pub image_in_adiabatic_region: bool,
}

/// Over-wide box `gamma in [0, pi)`, `beta in [0, pi/2)` that keeps the
/// redundant half of an odd-regular landscape.
pub fn over_wide_bounds() -> Bounds {
    Bounds::for_class(Classification::NonRegular)
}

/// Depth-1 optimum in the redundant half `gamma_1 in [pi/2, pi)`: a multistart
/// whose starts all lie in that half, optimized in the over-wide box.
pub fn non_adiabatic_start(
    problem: &MaxCutProblem,
    trials: usize,
    optimizer: &OptimizerConfig,
    strategy: Strategy,
) -> Result<DepthRecord> {
    require(problem, Classification::OddRegular)?;
    let upper_half = Bounds::new(FRAC_PI_2, PI, 0.0, FRAC_PI_2)?;
    let (best, ms) = exhaust_region(problem, 1, &upper_half, &over_wide_bounds(), trials, optimizer)?;
    record(
        problem,
        strategy,
        ParameterVector::from_flat(&best.x)?,
        best.value,
        &ms,
        best.converged,
    )
}

/// Follows the optimum of an odd-regular graph from the non-adiabatic start
/// with parameters fixing in the over-wide box, pairing every depth's
/// optimum with its odd-regular image. The images trace the adiabatic
/// branch while the betas of the optima themselves oscillate.
pub fn non_adiabatic_branch(
    problem: &MaxCutProblem,
    max_depth: usize,
    trials: usize,
) -> Result<Vec<BranchPoint>> {
    let cfg = StrategyConfig {
        max_depth,
        trials,
        rng_seed: 0,
        bounds: over_wide_bounds(),
        optimizer: OptimizerConfig::default(),
    };
    cfg.validate()?;
    let first = non_adiabatic_start(problem, trials, &cfg.optimizer, Strategy::ParametersFixing)?;
    let records = run_parameters_fixing_from(problem, &cfg, first)?;
    Ok(records
        .into_iter()
        .map(|record| {
            let image = odd_regular_image(&record.phi_star);
            BranchPoint {
                image_deviation: (record.f_star - problem.expectation(&image)).abs(),
                image_in_adiabatic_region: image.gammas().iter().all(|g| (0.0..=FRAC_PI_2).contains(g)),
                image,
                record,
            }
        })
        .collect())
}

/// Bilinear strategy seeded by the non-adiabatic start: depth 2 comes from
/// parameters fixing in the over-wide box, deeper levels from the bilinear
/// prediction.
pub fn bilinear_from_non_adiabatic_start(
    problem: &MaxCutProblem,
    max_depth: usize,
    trials: usize,
) -> Result<Vec<DepthRecord>> {
    let cfg = StrategyConfig {
        max_depth,
        trials,
        rng_seed: 0,
        bounds: over_wide_bounds(),
        optimizer: OptimizerConfig::default(),
    };
    cfg.validate()?;
    let first = non_adiabatic_start(problem, trials, &cfg.optimizer, Strategy::Bilinear)?;
    if max_depth == 1 {
        return Ok(alloc::vec![first]);
    }
    let two = StrategyConfig { max_depth: 2, ..cfg };
    let mut second = run_parameters_fixing_from(problem, &two, first.clone())?
        .pop()
        .expect("depth-2 record");
    second.strategy = Strategy::Bilinear;
    run_bilinear_from(problem, &cfg, [first, second])
}
