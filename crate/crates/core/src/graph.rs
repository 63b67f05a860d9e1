//! Undirected weighted graphs and the random regular graph generator used for
//! benchmark instances.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{invalid, Result};

/// A simple undirected graph on vertices `1..=n_vertices`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl GraphSpec {
    /// Builds a graph, normalising every edge to `u < v`.
    ///
    /// Rejects self-loops, duplicate edges, out-of-range endpoints and
    /// non-finite weights.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(invalid("graph must have at least one vertex"));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (u, v, w) in edges {
            let (u, v) = if u <= v { (u, v) } else { (v, u) };
            if u == v {
                return Err(invalid(format!("self-loop on vertex {u}")));
            }
            if u == 0 || v > n_vertices {
                return Err(invalid(format!("edge ({u}, {v}) outside 1..={n_vertices}")));
            }
            if !w.is_finite() {
                return Err(invalid(format!("edge ({u}, {v}) has non-finite weight")));
            }
            if !seen.insert((u, v)) {
                return Err(invalid(format!("duplicate edge ({u}, {v})")));
            }
            out.push((u, v, w));
        }
        Ok(Self { n_vertices, edges: out })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n_vertices, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Degree of the 1-based vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == v || b == v).count()
    }

    /// Total weight of edges whose endpoints land on different sides.
    pub fn cut_value(&self, bits: &[u8]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| bits[u - 1] != bits[v - 1])
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Samples a simple `degree`-regular graph on `n` vertices with the
/// configuration model, redrawing the whole pairing until it has neither
/// self-loops nor repeated edges.
///
/// Edges come back sorted, with unit weights.
pub fn random_regular_graph<R: RngCore>(n: usize, degree: usize, rng: &mut R) -> Result<GraphSpec> {
    if n == 0 {
        return Err(invalid("graph must have at least one vertex"));
    }
    if degree >= n {
        return Err(invalid(format!("degree {degree} must be smaller than n = {n}")));
    }
    if !(n * degree).is_multiple_of(2) {
        return Err(invalid(format!("n * degree = {} must be even", n * degree)));
    }
    if degree == 0 {
        return GraphSpec::new(n, []);
    }

    const MAX_ATTEMPTS: usize = 1_000_000;
    let mut stubs: Vec<usize> = (1..=n).flat_map(|v| core::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..MAX_ATTEMPTS {
        // Fisher-Yates
        for i in (1..stubs.len()).rev() {
            let j = uniform_below(rng, i as u64 + 1) as usize;
            stubs.swap(i, j);
        }
        let mut edges = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'attempt;
            }
        }
        return GraphSpec::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)));
    }
    Err(invalid(format!("no simple {degree}-regular graph on {n} vertices after {MAX_ATTEMPTS} attempts")))
}

/// Unbiased integer in `0..bound` by rejection.
pub(crate) fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits.
pub(crate) fn uniform_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
