//! Exact statevector simulation of the QAOA Max-Cut ansatz.
//!
//! Basis index `z` encodes vertex `v` in bit `v`. The ansatz is
//! `prod_j exp(-i beta_j H_x) exp(-i gamma_j H_z) |+>^n` with `H_z` the cut
//! operator and `H_x = sum_v X_v`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{CutValue, Graph};

/// Largest qubit count the fast simulator accepts (16 MiB of amplitudes).
pub const MAX_QUBITS: usize = 20;

/// Largest qubit count accepted by the dense-matrix oracle.
pub const MAX_DENSE_QUBITS: usize = 8;

/// Angles of a depth-`p` ansatz: `gammas[j]` drives the cost layer and
/// `betas[j]` the mixer layer of layer `j + 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParameterVector {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl ParameterVector {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::invalid("parameter vector needs depth p >= 1"));
        }
        if gammas.len() != betas.len() {
            return Err(Error::invalid(format!(
                "{} gammas but {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        Ok(ParameterVector { gammas, betas })
    }

    pub fn zeros(depth: usize) -> Result<Self> {
        ParameterVector::new(vec![0.0; depth], vec![0.0; depth])
    }

    /// Splits `(gamma_1..gamma_p, beta_1..beta_p)`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 == 1 {
            return Err(Error::invalid("flat parameter vector has odd length"));
        }
        let (g, b) = flat.split_at(flat.len() / 2);
        ParameterVector::new(g.to_vec(), b.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = self.gammas.clone();
        flat.extend_from_slice(&self.betas);
        flat
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas_mut(&mut self) -> &mut [f64] {
        &mut self.gammas
    }

    pub fn betas_mut(&mut self) -> &mut [f64] {
        &mut self.betas
    }

    /// Applies `f` to every gamma and `g` to every beta (with 0-based index).
    pub fn map(&self, f: impl Fn(usize, f64) -> f64, g: impl Fn(usize, f64) -> f64) -> Self {
        ParameterVector {
            gammas: self.gammas.iter().enumerate().map(|(j, &x)| f(j, x)).collect(),
            betas: self.betas.iter().enumerate().map(|(j, &x)| g(j, x)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`: every amplitude equals `2^(-n/2)`.
    pub fn plus_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("state needs at least one qubit"));
        }
        if n > MAX_QUBITS {
            return Err(Error::UnsupportedSize { n, limit: MAX_QUBITS });
        }
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / libm::sqrt(dim as f64), 0.0);
        Ok(StateVector {
            n,
            amplitudes: vec![amp; dim],
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "{dim} amplitudes is not a power of two >= 2"
            )));
        }
        Ok(StateVector {
            n: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multiplies amplitude `z` by `exp(-i gamma cut(z))`.
    pub fn apply_phase_separator(&mut self, graph: &Graph, gamma: f64) -> Result<()> {
        if graph.num_vertices() != self.n {
            return Err(Error::invalid(format!(
                "graph has {} vertices, state has {} qubits",
                graph.num_vertices(),
                self.n
            )));
        }
        let cuts: Vec<u32> = (0..self.amplitudes.len() as u64)
            .map(|z| graph.cut_of_mask(z))
            .collect();
        self.apply_phase_table(&cuts, graph.num_edges(), gamma);
        Ok(())
    }

    /// Phase separator driven by a precomputed cut table. Cut values are
    /// integers in `0..=max_cut`, so one phase per distinct value suffices.
    pub(crate) fn apply_phase_table(&mut self, cuts: &[u32], max_cut: usize, gamma: f64) {
        let phases: Vec<Complex64> = (0..=max_cut)
            .map(|c| {
                let (s, co) = libm::sincos(gamma * c as f64);
                Complex64::new(co, -s)
            })
            .collect();
        for (amp, &c) in self.amplitudes.iter_mut().zip(cuts) {
            *amp *= phases[c as usize];
        }
    }

    /// `exp(-i beta X)` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = libm::sincos(beta);
        let dim = self.amplitudes.len();
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in (0..dim).step_by(stride << 1) {
                for i in block..block + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    // [[c, -is], [-is, c]]
                    self.amplitudes[i] = Complex64::new(c * a.re + s * b.im, c * a.im - s * b.re);
                    self.amplitudes[i + stride] = Complex64::new(c * b.re + s * a.im, c * b.im - s * a.re);
                }
            }
        }
    }

    fn expectation_with(&self, cuts: &[u32]) -> f64 {
        self.amplitudes
            .iter()
            .zip(cuts)
            .map(|(a, &c)| a.norm_sqr() * c as f64)
            .sum()
    }
}

/// A Max-Cut instance prepared for repeated expectation evaluation.
///
/// The cut table is built once and shared by every evaluation. Each call to
/// [`MaxCutProblem::expectation`] runs the circuit once and increments the
/// evaluation counter.
#[derive(Debug)]
pub struct MaxCutProblem {
    graph: Graph,
    cuts: Vec<u32>,
    c_max: CutValue,
    evaluations: AtomicU64,
}

impl MaxCutProblem {
    pub fn new(graph: Graph) -> Result<Self> {
        let n = graph.num_vertices();
        if n > MAX_QUBITS {
            return Err(Error::UnsupportedSize { n, limit: MAX_QUBITS });
        }
        let cuts: Vec<u32> = (0..1u64 << n).map(|z| graph.cut_of_mask(z)).collect();
        let c_max = CutValue(cuts.iter().copied().max().unwrap_or(0));
        Ok(MaxCutProblem {
            graph,
            cuts,
            c_max,
            evaluations: AtomicU64::new(0),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn c_max(&self) -> CutValue {
        self.c_max
    }

    pub fn cut_table(&self) -> &[u32] {
        &self.cuts
    }

    /// Total circuit executions performed through this problem so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn prepare_ansatz(&self, phi: &ParameterVector) -> StateVector {
        self.prepare(phi.gammas(), phi.betas())
    }

    fn prepare(&self, gammas: &[f64], betas: &[f64]) -> StateVector {
        let mut state =
            StateVector::plus_state(self.graph.num_vertices()).expect("qubit count checked at construction");
        for (&gamma, &beta) in gammas.iter().zip(betas) {
            state.apply_phase_table(&self.cuts, self.graph.num_edges(), gamma);
            state.apply_mixer(beta);
        }
        state
    }

    /// `F_p = <psi_p| H_z |psi_p>`.
    pub fn expectation(&self, phi: &ParameterVector) -> f64 {
        self.expectation_split(phi.gammas(), phi.betas())
    }

    /// Expectation of a flat `(gammas, betas)` slice of even length.
    pub fn expectation_flat(&self, flat: &[f64]) -> f64 {
        let (g, b) = flat.split_at(flat.len() / 2);
        self.expectation_split(g, b)
    }

    fn expectation_split(&self, gammas: &[f64], betas: &[f64]) -> f64 {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.prepare(gammas, betas).expectation_with(&self.cuts)
    }

    /// Central-difference gradient of `F_p` over the flat angle layout.
    /// Costs `4p` circuit evaluations.
    pub fn gradient(&self, phi: &ParameterVector, step: f64) -> Result<Vec<f64>> {
        if !(step > 0.0) {
            return Err(Error::invalid(format!("gradient step {step} must be positive")));
        }
        let x = phi.to_flat();
        let mut grad = vec![0.0; x.len()];
        crate::opt::central_difference(|v| self.expectation_flat(v), &x, step, &mut grad);
        Ok(grad)
    }

    pub fn approximation_ratio(&self, f: f64) -> Result<f64> {
        approximation_ratio(f, self.c_max)
    }
}

/// `alpha = F / C_max`.
pub fn approximation_ratio(f: f64, c_max: CutValue) -> Result<f64> {
    if c_max.get() == 0 {
        return Err(Error::invalid("approximation ratio undefined for C_max = 0"));
    }
    Ok(f / c_max.get() as f64)
}

/// Reference expectation built from explicit `2^n x 2^n` matrices: a dense
/// diagonal `exp(-i gamma H_z)` with `H_z = sum (1 - Z_j Z_k)/2` evaluated from
/// spin values, and the Kronecker power of the single-qubit mixer kernel.
pub fn expectation_dense_oracle(graph: &Graph, phi: &ParameterVector) -> Result<f64> {
    let n = graph.num_vertices();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::UnsupportedSize {
            n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let spin = |z: usize, v: usize| if (z >> v) & 1 == 1 { -1.0 } else { 1.0 };
    let energy: Vec<f64> = (0..dim)
        .map(|z| {
            graph
                .edges()
                .iter()
                .map(|&(j, k)| 0.5 * (1.0 - spin(z, j) * spin(z, k)))
                .sum()
        })
        .collect();

    let mut state = vec![Complex64::new(libm::pow(2.0, -(n as f64) / 2.0), 0.0); dim];
    for (&gamma, &beta) in phi.gammas().iter().zip(phi.betas()) {
        let mut cost = vec![Complex64::new(0.0, 0.0); dim * dim];
        for z in 0..dim {
            cost[z * dim + z] = Complex64::new(0.0, -gamma * energy[z]).exp();
        }
        state = mat_vec(&cost, &state);
        state = mat_vec(&mixer_matrix(n, beta), &state);
    }
    Ok(state.iter().zip(&energy).map(|(a, e)| a.norm_sqr() * e).sum())
}

fn mixer_matrix(n: usize, beta: f64) -> Vec<Complex64> {
    let c = Complex64::new(libm::cos(beta), 0.0);
    let s = Complex64::new(0.0, -libm::sin(beta));
    let kernel = [c, s, s, c];
    let mut m = vec![Complex64::new(1.0, 0.0)];
    let mut size = 1;
    // Higher qubits are more significant, so each new factor goes on the left.
    for _ in 0..n {
        let next_size = size * 2;
        let mut next = vec![Complex64::new(0.0, 0.0); next_size * next_size];
        for (ki, &kv) in kernel.iter().enumerate() {
            let (kr, kc) = (ki / 2, ki % 2);
            for r in 0..size {
                for col in 0..size {
                    next[(kr * size + r) * next_size + kc * size + col] = kv * m[r * size + col];
                }
            }
        }
        m = next;
        size = next_size;
    }
    m
}

fn mat_vec(m: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let dim = v.len();
    (0..dim)
        .map(|r| m[r * dim..(r + 1) * dim].iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
