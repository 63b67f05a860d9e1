//! Angle gradients of `⟨H'⟩` by a reverse adjoint sweep, plus central
//! differences for checking.
//!
//! The sweep is exact when nothing is truncated. Under truncation it does
//! not differentiate the truncation itself, so it drifts from finite
//! differences of the truncated energy as the discarded weight grows.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::mps::{build_hamiltonian_chain, TruncationConfig};
use crate::qaoa::{
    apply_cost_layer, apply_mixer_layer, qaoa_expectation, run_layers, AngleSchedule, LayerCache, QaoaProblem, RunMetrics,
};
use crate::timer::Stopwatch;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientResult {
    /// `⟨H'⟩` at the evaluation point.
    pub energy: f64,
    pub d_betas: Vec<f64>,
    pub d_gammas: Vec<f64>,
    pub metrics: RunMetrics,
}

impl GradientResult {
    /// `[∂β_1..∂β_p, ∂γ_1..∂γ_p]`
    pub fn to_flat(&self) -> Vec<f64> {
        self.d_betas.iter().chain(&self.d_gammas).copied().collect()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.to_flat().iter().map(|g| g * g).sum())
    }
}

/// Adjoint gradient. The adjoint state `H'|ψ⟩` carries more entanglement
/// than `|ψ⟩`, so it is propagated with twice the forward bond cap; capping
/// it at the forward `maxdim` visibly degrades the gradient even when the
/// forward pass discards nothing.
pub fn qaoa_gradient(problem: &QaoaProblem, angles: &AngleSchedule, trunc: &TruncationConfig) -> Result<GradientResult> {
    let seed_trunc = TruncationConfig { cutoff: trunc.cutoff, maxdim: trunc.maxdim.saturating_mul(2) };
    qaoa_gradient_with_seed(problem, angles, trunc, &seed_trunc)
}

/// As [`qaoa_gradient`] with an explicit compression for the adjoint state,
/// used both for `H'|ψ⟩` and for the backward cost layers.
pub fn qaoa_gradient_with_seed(
    problem: &QaoaProblem,
    angles: &AngleSchedule,
    trunc: &TruncationConfig,
    seed_trunc: &TruncationConfig,
) -> Result<GradientResult> {
    let clock = Stopwatch::start();
    let ham = problem.ham();
    let p = angles.p();

    // cache.0[l] = C_l B_{l-1}···|s⟩, cache.1[l] = B_l cache.0[l]
    let mut cache: LayerCache = (Vec::with_capacity(p), Vec::with_capacity(p));
    let (state, mut metrics) = run_layers(problem, angles, trunc, &mut |_| true, Some(&mut cache))?;
    let (after_cost, after_mixer) = cache;
    let energy = state.expectation_hamiltonian(ham)?;

    let mut d_betas = alloc::vec![0.0; p];
    let mut d_gammas = alloc::vec![0.0; p];
    if !ham.terms().is_empty() {
        let mut lambda = state;
        lambda.apply_operator_chain(&build_hamiltonian_chain(ham), seed_trunc)?;
        for l in (0..p).rev() {
            d_betas[l] = 2.0 * lambda.matrix_element_mixer(&after_mixer[l])?.im;
            apply_mixer_layer(&mut lambda, -angles.betas()[l])?;
            d_gammas[l] = 2.0 * lambda.matrix_element_hamiltonian(&after_cost[l], ham)?.im;
            if !(d_betas[l].is_finite() && d_gammas[l].is_finite()) {
                return Err(Error::NonFiniteGradient { layer: l + 1 });
            }
            if l > 0 {
                apply_cost_layer(&mut lambda, ham, -angles.gammas()[l], seed_trunc)?;
            }
        }
    }
    metrics.wall_seconds = clock.elapsed_seconds();
    Ok(GradientResult { energy, d_betas, d_gammas, metrics })
}

/// Central differences `(E(θ + h e_i) − E(θ − h e_i)) / 2h` per angle.
pub fn finite_difference_gradient(
    problem: &QaoaProblem,
    angles: &AngleSchedule,
    trunc: &TruncationConfig,
    h: f64,
) -> Result<GradientResult> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let clock = Stopwatch::start();
    let (energy, mut metrics) = qaoa_expectation(angles, problem, trunc)?;
    let flat = angles.to_flat();
    let mut grad = Vec::with_capacity(flat.len());
    for i in 0..flat.len() {
        let mut shifted = flat.clone();
        shifted[i] = flat[i] + h;
        let (plus, _) = qaoa_expectation(&AngleSchedule::from_flat(&shifted)?, problem, trunc)?;
        shifted[i] = flat[i] - h;
        let (minus, _) = qaoa_expectation(&AngleSchedule::from_flat(&shifted)?, problem, trunc)?;
        grad.push((plus - minus) / (2.0 * h));
    }
    let p = angles.p();
    metrics.wall_seconds = clock.elapsed_seconds();
    Ok(GradientResult { energy, d_betas: grad[..p].to_vec(), d_gammas: grad[p..].to_vec(), metrics })
}
