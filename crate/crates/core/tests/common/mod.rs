#![allow(dead_code)]

use mpsqaoa_core::hamiltonian::{maxcut_to_interactions, mis_to_interactions};
use mpsqaoa_core::{c64, random_regular_graph, GraphSpec, MpsState, ZHamiltonian, ZInteraction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn maxcut_instance(n: usize, seed: u64) -> ZHamiltonian {
    let g = random_regular_graph(n, 3, &mut rng(seed)).unwrap();
    maxcut_to_interactions(&g, false).unwrap()
}

/// Erdős–Rényi graph with edge probability `prob`.
pub fn random_graph(n: usize, prob: f64, seed: u64) -> GraphSpec {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if r.gen::<f64>() < prob {
                edges.push((u, v));
            }
        }
    }
    GraphSpec::unweighted(n, edges).unwrap()
}

pub fn mis_instance(n: usize, seed: u64) -> ZHamiltonian {
    mis_to_interactions(&random_graph(n, 0.4, seed), 2.0).unwrap()
}

/// Random terms of locality 1..=max_k with coefficients in [-1, 1].
pub fn random_hamiltonian(n: usize, n_terms: usize, max_k: usize, seed: u64) -> ZHamiltonian {
    let mut r = rng(seed);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let k = r.gen_range(1..=max_k.min(n));
        let mut sites: Vec<usize> = rand::seq::index::sample(&mut r, n, k).into_iter().map(|s| s + 1).collect();
        sites.sort_unstable();
        terms.push(ZInteraction::new(&sites, r.gen_range(-1.0..1.0)).unwrap());
    }
    ZHamiltonian::new(n, terms, 0.0).unwrap()
}

pub fn random_amplitudes(n: usize, seed: u64) -> Vec<c64> {
    let mut r = rng(seed);
    let v: Vec<c64> = (0..1 << n).map(|_| c64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_state(n: usize, seed: u64) -> MpsState {
    MpsState::from_amplitudes(&random_amplitudes(n, seed)).unwrap()
}

pub fn random_angles(p: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    (0..2 * p).map(|_| r.gen_range(-1.5..1.5)).collect()
}

pub fn max_diff(a: &[c64], b: &[c64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn exact_maxdim(n: usize) -> usize {
    1 << (n / 2)
}
