mod common;

use common::*;
use mpsqaoa_core::hamiltonian::maxcut_post_process;
use mpsqaoa_core::optimizer::optimize_with;
use mpsqaoa_core::{optimize_angles, qaoa_expectation, qaoa_gradient, AngleSchedule, OptConfig, QaoaProblem, TruncationConfig};

#[test]
fn same_seed_same_result() {
    let problem = QaoaProblem::new(maxcut_instance(8, 21));
    let cfg = OptConfig { p: 2, restarts: 3, seed: 9, max_iterations: 40, ..OptConfig::default() };
    let t = TruncationConfig::default();
    let a = optimize_angles(&problem, &cfg, &t).unwrap();
    let b = optimize_angles(&problem, &cfg, &t).unwrap();
    assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    assert_eq!(a.angles, b.angles);
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.trace, b.trace);
}

#[test]
fn maximize_is_minimize_of_negated_objective() {
    let ham = random_hamiltonian(6, 10, 2, 3);
    let problem = QaoaProblem::new(ham);
    let cfg = OptConfig { p: 2, restarts: 2, seed: 4, max_iterations: 50, ..OptConfig::default() };
    let t = TruncationConfig::default();
    let max = optimize_angles(&problem, &OptConfig { maximize: true, ..cfg.clone() }, &t).unwrap();
    let mut negated = |x: &[f64]| {
        let g = qaoa_gradient(&problem, &AngleSchedule::from_flat(x)?, &t)?;
        Ok((-g.energy, g.to_flat().into_iter().map(|v| -v).collect()))
    };
    let min = optimize_with(&mut negated, &cfg).unwrap();
    assert_eq!(max.angles, min.angles);
    assert_eq!(max.energy, -min.energy);
}

#[test]
fn negated_hamiltonian_mirrors_gamma() {
    // e^{-iγ(-H)} = e^{-i(-γ)H}, so the landscape of -H is that of H
    // reflected in γ and negated.
    let ham = random_hamiltonian(6, 10, 3, 8);
    let t = TruncationConfig::default();
    let mut r = rng(1);
    for _ in 0..5 {
        let flat = random_angles(2, &mut r);
        let mut mirrored = flat.clone();
        mirrored[2..].iter_mut().for_each(|g| *g = -*g);
        let (e, _) = qaoa_expectation(&AngleSchedule::from_flat(&flat).unwrap(), &QaoaProblem::new(ham.clone()), &t).unwrap();
        let (en, _) =
            qaoa_expectation(&AngleSchedule::from_flat(&mirrored).unwrap(), &QaoaProblem::new(ham.negated()), &t).unwrap();
        assert!((e + en).abs() < 1e-12);
    }
}

#[test]
fn more_restarts_never_worse() {
    let problem = QaoaProblem::new(maxcut_instance(8, 13));
    let t = TruncationConfig::default();
    let mut prev = f64::INFINITY;
    for k in 1..=4 {
        let cfg = OptConfig { p: 1, restarts: k, seed: 2, max_iterations: 40, ..OptConfig::default() };
        let r = optimize_angles(&problem, &cfg, &t).unwrap();
        assert!(r.energy <= prev + 1e-15, "restarts {k}");
        assert_eq!(r.starts.len(), k);
        prev = r.energy;
    }
}

#[test]
fn result_at_least_as_good_as_every_start() {
    let ham = maxcut_instance(8, 44);
    let problem = QaoaProblem::new(ham.clone());
    let t = TruncationConfig::default();
    let cfg = OptConfig { p: 2, restarts: 10, seed: 1, ..OptConfig::default() };
    let r = optimize_angles(&problem, &cfg, &t).unwrap();
    let cut = maxcut_post_process(r.energy, &ham);
    for s in r.starts.iter().flatten() {
        assert!(cut >= maxcut_post_process(s.initial_energy, &ham) - 1e-12);
        assert!(s.trace.windows(2).all(|w| w[1].energy <= w[0].energy + 1e-12));
    }
    let (check, _) = qaoa_expectation(&r.angles, &problem, &t).unwrap();
    assert!((check - r.energy).abs() < 1e-12);
}
