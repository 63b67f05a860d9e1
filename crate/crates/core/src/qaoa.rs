//! The QAOA circuit: alternating cost and transverse-field mixer layers.
//!
//! Layer `l` applies `e^{−iγ_l H'}` and then `e^{−iβ_l X}` on every qubit,
//! starting from `|+…+⟩` unless a basis state is requested. `H'` is the
//! Hamiltonian without its constant.

use alloc::format;
use alloc::vec::Vec;

use faer::c64;

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::ZHamiltonian;
use crate::mps::{MpsState, ProductKind, TruncationConfig};
use crate::timer::Stopwatch;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialState {
    AllPlus,
    Bitstring(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaProblem {
    ham: ZHamiltonian,
    initial: InitialState,
}

impl QaoaProblem {
    pub fn new(ham: ZHamiltonian) -> Self {
        Self { ham, initial: InitialState::AllPlus }
    }

    /// Starts from the basis state `bits` instead of `|+…+⟩`.
    pub fn with_initial_bits(mut self, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != self.ham.n_qubits() {
            return Err(Error::SizeMismatch { expected: self.ham.n_qubits(), actual: bits.len() });
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(invalid("initial bitstring entries must be 0 or 1"));
        }
        self.initial = InitialState::Bitstring(bits);
        Ok(self)
    }

    pub fn ham(&self) -> &ZHamiltonian {
        &self.ham
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    pub fn n_qubits(&self) -> usize {
        self.ham.n_qubits()
    }

    pub fn initial_state(&self) -> Result<MpsState> {
        let kind = match &self.initial {
            InitialState::AllPlus => ProductKind::AllPlus,
            InitialState::Bitstring(b) => ProductKind::Bitstring(b.clone()),
        };
        MpsState::product_state(self.n_qubits(), kind)
    }
}

/// Mixer angles `β_1..β_p` and cost angles `γ_1..γ_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSchedule {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl AngleSchedule {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(invalid(format!("{} betas but {} gammas", betas.len(), gammas.len())));
        }
        if betas.is_empty() {
            return Err(invalid("angle schedule needs at least one layer"));
        }
        if betas.iter().chain(&gammas).any(|x| !x.is_finite()) {
            return Err(invalid("angles must be finite"));
        }
        Ok(Self { betas, gammas })
    }

    /// Splits `[β_1..β_p, γ_1..γ_p]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 != 0 {
            return Err(invalid(format!("flat angle vector has odd length {}", flat.len())));
        }
        let p = flat.len() / 2;
        Self::new(flat[..p].to_vec(), flat[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub wall_seconds: f64,
    /// Largest total tensor element count seen after any gate.
    pub peak_storage_elements: usize,
    /// Largest bond dimension at the end of each layer.
    pub max_bond_per_layer: Vec<usize>,
    pub cumulative_discarded_weight: f64,
}

fn mixer_gate(beta: f64) -> [[c64; 2]; 2] {
    let c = c64::new(libm::cos(beta), 0.0);
    let s = c64::new(0.0, -libm::sin(beta));
    [[c, s], [s, c]]
}

/// Applies `∏_S e^{−iγ k_S ∏Z_s}` term by term in the Hamiltonian's
/// canonical order, truncating after each term.
pub fn apply_cost_layer(state: &mut MpsState, ham: &ZHamiltonian, gamma: f64, trunc: &TruncationConfig) -> Result<()> {
    cost_layer(state, ham, gamma, trunc, &mut |_| true)
}

fn cost_layer(
    state: &mut MpsState,
    ham: &ZHamiltonian,
    gamma: f64,
    trunc: &TruncationConfig,
    after_gate: &mut dyn FnMut(&MpsState) -> bool,
) -> Result<()> {
    if ham.n_qubits() != state.n_sites() {
        return Err(Error::SizeMismatch { expected: state.n_sites(), actual: ham.n_qubits() });
    }
    if gamma == 0.0 {
        return Ok(());
    }
    for term in ham.terms() {
        state.apply_zstring_phase(&term.zero_based(), gamma * term.coeff(), trunc)?;
        if !after_gate(state) {
            return Err(Error::Cancelled);
        }
    }
    Ok(())
}

/// Applies `e^{−iβX}` to every qubit.
pub fn apply_mixer_layer(state: &mut MpsState, beta: f64) -> Result<()> {
    let gate = mixer_gate(beta);
    for k in 0..state.n_sites() {
        state.apply_single_site_unchecked(k, gate)?;
    }
    Ok(())
}

pub fn run_qaoa(problem: &QaoaProblem, angles: &AngleSchedule, trunc: &TruncationConfig) -> Result<(MpsState, RunMetrics)> {
    run_qaoa_observed(problem, angles, trunc, |_| true)
}

/// As [`run_qaoa`], calling `observer` after every gate; returning `false`
/// aborts the run with [`Error::Cancelled`].
pub fn run_qaoa_observed(
    problem: &QaoaProblem,
    angles: &AngleSchedule,
    trunc: &TruncationConfig,
    mut observer: impl FnMut(&MpsState) -> bool,
) -> Result<(MpsState, RunMetrics)> {
    run_layers(problem, angles, trunc, &mut observer, None)
}

/// Copies of the state after each cost layer and after each mixer layer.
pub(crate) type LayerCache = (Vec<MpsState>, Vec<MpsState>);

pub(crate) fn run_layers(
    problem: &QaoaProblem,
    angles: &AngleSchedule,
    trunc: &TruncationConfig,
    observer: &mut dyn FnMut(&MpsState) -> bool,
    mut cache: Option<&mut LayerCache>,
) -> Result<(MpsState, RunMetrics)> {
    let clock = Stopwatch::start();
    let mut state = problem.initial_state()?;
    let mut peak = state.storage_elements();
    let mut per_layer = Vec::with_capacity(angles.p());
    for (&beta, &gamma) in angles.betas().iter().zip(angles.gammas()) {
        cost_layer(&mut state, problem.ham(), gamma, trunc, &mut |s| {
            peak = peak.max(s.storage_elements());
            observer(s)
        })?;
        if let Some(c) = cache.as_deref_mut() {
            c.0.push(state.clone());
        }
        apply_mixer_layer(&mut state, beta)?;
        if !observer(&state) {
            return Err(Error::Cancelled);
        }
        if let Some(c) = cache.as_deref_mut() {
            c.1.push(state.clone());
        }
        per_layer.push(state.max_bond());
    }
    let metrics = RunMetrics {
        wall_seconds: clock.elapsed_seconds(),
        peak_storage_elements: peak,
        max_bond_per_layer: per_layer,
        cumulative_discarded_weight: state.discarded_weight(),
    };
    Ok((state, metrics))
}

/// `⟨H'⟩` of the final state, constant excluded.
pub fn qaoa_expectation(angles: &AngleSchedule, problem: &QaoaProblem, trunc: &TruncationConfig) -> Result<(f64, RunMetrics)> {
    let clock = Stopwatch::start();
    let (state, mut metrics) = run_qaoa(problem, angles, trunc)?;
    let energy = state.expectation_hamiltonian(problem.ham())?;
    metrics.wall_seconds = clock.elapsed_seconds();
    Ok((energy, metrics))
}
