mod common;

use common::*;
use mpsqaoa_core::hamiltonian::maxcut_to_interactions;
use mpsqaoa_core::{
    finite_difference_gradient, qaoa_gradient, AngleSchedule, GraphSpec, QaoaProblem, TruncationConfig, ZHamiltonian,
};
use rand::Rng;

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale.max(1e-12)
}

#[test]
fn adjoint_matches_finite_differences_exact_regime() {
    let mut r = rng(11);
    for draw in 0..8 {
        let n = r.gen_range(4..=9);
        let p = r.gen_range(1..=3);
        let ham = if draw % 2 == 0 { random_hamiltonian(n, 2 * n, 3, draw) } else { mis_instance(n, draw) };
        let problem = QaoaProblem::new(ham);
        let angles = AngleSchedule::from_flat(&random_angles(p, &mut r)).unwrap();
        let t = TruncationConfig::new(0.0, exact_maxdim(n)).unwrap();
        let adj = qaoa_gradient(&problem, &angles, &t).unwrap();
        let fd = finite_difference_gradient(&problem, &angles, &t, 1e-5).unwrap();
        assert!((adj.energy - fd.energy).abs() < 1e-12);
        let err = relative_error(&adj.to_flat(), &fd.to_flat());
        assert!(err <= 1e-5, "draw {draw}: n={n} p={p} err={err}");
    }
}

#[test]
fn ten_qubit_regular_graph() {
    let problem = QaoaProblem::new(maxcut_instance(10, 77));
    let t = TruncationConfig::new(0.0, 32).unwrap();
    let mut r = rng(12);
    for _ in 0..5 {
        let angles = AngleSchedule::from_flat(&random_angles(2, &mut r)).unwrap();
        let adj = qaoa_gradient(&problem, &angles, &t).unwrap().to_flat();
        let fd = finite_difference_gradient(&problem, &angles, &t, 1e-5).unwrap().to_flat();
        assert!(relative_error(&adj, &fd) <= 1e-5);
    }
}

#[test]
fn step_size_insensitive() {
    let problem = QaoaProblem::new(random_hamiltonian(6, 9, 2, 4));
    let angles = AngleSchedule::new(vec![0.4, -0.2], vec![0.7, 1.1]).unwrap();
    let t = TruncationConfig::default();
    let a = finite_difference_gradient(&problem, &angles, &t, 1e-4).unwrap().to_flat();
    let b = finite_difference_gradient(&problem, &angles, &t, 1e-5).unwrap().to_flat();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-6, "{x} vs {y}");
    }
}

#[test]
fn beta_gradient_vanishes_without_cost() {
    let problem = QaoaProblem::new(maxcut_instance(8, 6));
    let angles = AngleSchedule::new(vec![0.3, 1.2], vec![0.0, 0.0]).unwrap();
    let t = TruncationConfig::default();
    let fd = finite_difference_gradient(&problem, &angles, &t, 1e-5).unwrap();
    let adj = qaoa_gradient(&problem, &angles, &t).unwrap();
    for (f, a) in fd.d_betas.iter().zip(&adj.d_betas) {
        assert!(f.abs() <= 1e-9);
        assert!(a.abs() <= 1e-12);
    }
}

/// Weighted 16-cycle; at p = 3 a bond cap of 16 truncates, but mildly.
fn weighted_cycle(seed: u64) -> ZHamiltonian {
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize, f64)> = (1..16).map(|i| (i, i + 1, r.gen_range(0.5..1.5))).collect();
    edges.push((1, 16, r.gen_range(0.5..1.5)));
    maxcut_to_interactions(&GraphSpec::new(16, edges).unwrap(), true).unwrap()
}

#[test]
fn truncated_sixteen_qubits() {
    let t = TruncationConfig::new(0.0, 16).unwrap();
    let mut r = rng(316);
    for seed in 0..3 {
        let problem = QaoaProblem::new(weighted_cycle(seed));
        let angles = AngleSchedule::from_flat(&random_angles(3, &mut r)).unwrap();
        let adj = qaoa_gradient(&problem, &angles, &t).unwrap();
        assert!(adj.metrics.cumulative_discarded_weight > 0.0);
        let fd = finite_difference_gradient(&problem, &angles, &t, 1e-5).unwrap().to_flat();
        let err = relative_error(&adj.to_flat(), &fd);
        assert!(err <= 1e-2, "seed {seed}: relative error {err}");
    }
}
