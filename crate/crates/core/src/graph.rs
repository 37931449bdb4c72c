//! Unweighted graphs, seeded instance generators and the exact Max-Cut oracle.
//!
//! Assignments are bit masks with vertex `v` stored in bit `v`, which is the
//! same layout the statevector simulator uses for basis indices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`Graph::max_cut_brute_force`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

/// Upper bound on configuration-model restarts before the generator gives up.
const MAX_PAIRING_ATTEMPTS: usize = 100_000;

/// Where an instance came from. Only `Regular` is checked against the edges.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum GraphKind {
    Regular { degree: usize },
    ErdosRenyi { prob: f64 },
    General,
}

/// Bound selection classes for the Max-Cut landscape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Classification {
    OddRegular,
    EvenRegular,
    NonRegular,
}

impl Classification {
    pub fn is_regular(self) -> bool {
        !matches!(self, Classification::NonRegular)
    }
}

/// Number of edges crossing a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CutValue(pub u32);

impl CutValue {
    pub fn get(self) -> u32 {
        self.0
    }
}

/// A simple undirected graph. Edges are stored as `(j, k)` with `j < k`,
/// sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    kind: GraphKind,
}

impl Graph {
    /// Builds a general graph. Edge orientation does not matter; self-loops,
    /// duplicates and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one vertex"));
        }
        let mut normalized = Vec::new();
        for (j, k) in edges {
            if j >= n || k >= n {
                return Err(Error::invalid(format!(
                    "edge ({j}, {k}) has an endpoint outside [0, {n})"
                )));
            }
            if j == k {
                return Err(Error::invalid(format!("self-loop on vertex {j}")));
            }
            normalized.push((j.min(k), j.max(k)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Graph {
            n,
            edges: normalized,
            kind: GraphKind::General,
        })
    }

    /// Attaches class metadata. A `Regular` kind must match the degrees.
    pub fn with_kind(mut self, kind: GraphKind) -> Result<Self> {
        if let GraphKind::Regular { degree } = kind {
            if let Some(v) = self.degrees().iter().position(|&d| d != degree) {
                return Err(Error::invalid(format!(
                    "vertex {v} does not have degree {degree}"
                )));
            }
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k)));
        let g = Graph::new(n, edges)?;
        g.with_kind(GraphKind::Regular { degree: n - 1 })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("a cycle needs at least 3 vertices"));
        }
        Graph::new(n, (0..n).map(|j| (j, (j + 1) % n)))?.with_kind(GraphKind::Regular { degree: 2 })
    }

    pub fn path(n: usize) -> Result<Self> {
        Graph::new(n, (1..n).map(|j| (j - 1, j)))
    }

    /// Uniform-ish random `d`-regular graph from the pairing (configuration)
    /// model. Pairings containing a self-loop or a repeated edge are discarded
    /// and redrawn.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one vertex"));
        }
        if d >= n {
            return Err(Error::invalid(format!(
                "degree {d} must be smaller than the vertex count {n}"
            )));
        }
        if (n * d) % 2 == 1 {
            return Err(Error::invalid(format!(
                "n * d = {} is odd, no {d}-regular graph on {n} vertices exists",
                n * d
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<usize> = (0..n).flat_map(|v| core::iter::repeat_n(v, d)).collect();
        let mut adjacent = vec![false; n * n];
        'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
            points.shuffle(&mut rng);
            adjacent.iter_mut().for_each(|a| *a = false);
            let mut edges = Vec::with_capacity(n * d / 2);
            for pair in points.chunks_exact(2) {
                let (j, k) = (pair[0], pair[1]);
                if j == k || adjacent[j * n + k] {
                    continue 'attempt;
                }
                adjacent[j * n + k] = true;
                adjacent[k * n + j] = true;
                edges.push((j, k));
            }
            return Graph::new(n, edges)?.with_kind(GraphKind::Regular { degree: d });
        }
        Err(Error::invalid(format!(
            "no simple pairing found for n = {n}, d = {d}"
        )))
    }

    /// G(n, p): every pair `j < k`, visited in lexicographic order, is kept
    /// when a uniform draw from `[0, 1)` falls below `prob`.
    pub fn erdos_renyi(n: usize, prob: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::invalid(format!(
                "edge probability {prob} is outside [0, 1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                if rng.gen::<f64>() < prob {
                    edges.push((j, k));
                }
            }
        }
        Graph::new(n, edges)?.with_kind(GraphKind::ErdosRenyi { prob })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(j, k) in &self.edges {
            deg[j] += 1;
            deg[k] += 1;
        }
        deg
    }

    pub fn classify(&self) -> Classification {
        let deg = self.degrees();
        let first = deg[0];
        if deg.iter().any(|&d| d != first) {
            Classification::NonRegular
        } else if first % 2 == 1 {
            Classification::OddRegular
        } else {
            Classification::EvenRegular
        }
    }

    /// Cut value of an assignment given as one bit per vertex.
    pub fn cut_value(&self, assignment: &[bool]) -> Result<CutValue> {
        if assignment.len() != self.n {
            return Err(Error::invalid(format!(
                "assignment has {} bits, graph has {} vertices",
                assignment.len(),
                self.n
            )));
        }
        let crossing = self
            .edges
            .iter()
            .filter(|&&(j, k)| assignment[j] != assignment[k])
            .count();
        Ok(CutValue(crossing as u32))
    }

    /// Cut value of a bit mask assignment (vertex `v` in bit `v`).
    pub fn cut_of_mask(&self, mask: u64) -> u32 {
        self.edges
            .iter()
            .filter(|&&(j, k)| ((mask >> j) ^ (mask >> k)) & 1 == 1)
            .count() as u32
    }

    /// Exact maximum cut by enumeration. Vertex 0 is pinned to side 0, since
    /// complementing every bit leaves the cut unchanged.
    pub fn max_cut_brute_force(&self) -> Result<(CutValue, u64)> {
        if self.n > MAX_BRUTE_FORCE_VERTICES {
            return Err(Error::UnsupportedSize {
                n: self.n,
                limit: MAX_BRUTE_FORCE_VERTICES,
            });
        }
        let mut best = (0u32, 0u64);
        for half in 0..1u64 << (self.n - 1) {
            let mask = half << 1;
            let cut = self.cut_of_mask(mask);
            if cut > best.0 {
                best = (cut, mask);
            }
        }
        Ok((CutValue(best.0), best.1))
    }
}

/// Expands a bit mask into one bool per vertex.
pub fn mask_to_bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|v| (mask >> v) & 1 == 1).collect()
}
