//! Dense state-vector reference simulator for small registers.
//!
//! Basis index `x` encodes qubit 1 in its most significant bit, so the
//! amplitude order matches MPS site order.

use alloc::vec;
use alloc::vec::Vec;

use faer::c64;

use crate::error::{Error, Result};
use crate::hamiltonian::ZHamiltonian;
use crate::linalg;
use crate::qaoa::{AngleSchedule, InitialState, QaoaProblem};

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Bits of basis index `x`, qubit 1 first.
pub fn bits_of(x: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((x >> (n - 1 - k)) & 1) as u8).collect()
}

pub fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<c64>,
}

impl DenseState {
    pub fn uniform(n: usize, cap: usize) -> Result<Self> {
        check_cap(n, cap)?;
        let a = c64::new(libm::pow(2.0, -(n as f64) / 2.0), 0.0);
        Ok(Self { n, amps: vec![a; 1 << n] })
    }

    pub fn basis(bits: &[u8], cap: usize) -> Result<Self> {
        let n = bits.len();
        check_cap(n, cap)?;
        let mut amps = vec![linalg::ZERO; 1 << n];
        amps[index_of(bits)] = linalg::ONE;
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<c64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(crate::error::invalid("amplitude count must be a power of two ≥ 2"));
        }
        Ok(Self { n: len.trailing_zeros() as usize, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `u[out][in]` to the 0-based qubit `site`.
    pub fn apply_single(&mut self, site: usize, u: [[c64; 2]; 2]) {
        let mask = 1usize << (self.n - 1 - site);
        for x in 0..self.amps.len() {
            if x & mask == 0 {
                let (a0, a1) = (self.amps[x], self.amps[x | mask]);
                self.amps[x] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[x | mask] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Multiplies amplitude `x` by `e^{−iθ·values[x]}`.
    pub fn apply_diagonal_phase(&mut self, values: &[f64], theta: f64) {
        for (a, &v) in self.amps.iter_mut().zip(values) {
            *a *= linalg::cis(-theta * v);
        }
    }

    /// `Σ_x |c_x|² ∏_{s∈S}(1 − 2x_s)` for 0-based sites `S`.
    pub fn expectation_zstring(&self, sites: &[usize]) -> f64 {
        let mask: usize = sites.iter().map(|&s| 1usize << (self.n - 1 - s)).sum();
        self.amps
            .iter()
            .enumerate()
            .map(|(x, a)| if (x & mask).count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }
}

/// `f'(x)` for every basis state: the Hamiltonian's value without its
/// constant.
pub fn diagonal_values(ham: &ZHamiltonian) -> Vec<f64> {
    let n = ham.n_qubits();
    (0..1usize << n).map(|x| ham.terms_value(&bits_of(x, n))).collect()
}

pub fn dense_run_qaoa(problem: &QaoaProblem, angles: &AngleSchedule) -> Result<DenseState> {
    dense_run_qaoa_with_cap(problem, angles, DEFAULT_ORACLE_CAP)
}

/// As [`dense_run_qaoa`] with an explicit qubit cap.
pub fn dense_run_qaoa_with_cap(problem: &QaoaProblem, angles: &AngleSchedule, cap: usize) -> Result<DenseState> {
    let n = problem.n_qubits();
    let mut state = match problem.initial() {
        InitialState::AllPlus => DenseState::uniform(n, cap)?,
        InitialState::Bitstring(bits) => DenseState::basis(bits, cap)?,
    };
    let values = diagonal_values(problem.ham());
    for (&beta, &gamma) in angles.betas().iter().zip(angles.gammas()) {
        state.apply_diagonal_phase(&values, gamma);
        let (c, s) = (c64::new(libm::cos(beta), 0.0), c64::new(0.0, -libm::sin(beta)));
        for k in 0..n {
            state.apply_single(k, [[c, s], [s, c]]);
        }
    }
    Ok(state)
}

/// `Σ_x |c_x|² f'(x)`, constant excluded.
pub fn dense_expectation(state: &DenseState, ham: &ZHamiltonian) -> Result<f64> {
    if ham.n_qubits() != state.n {
        return Err(Error::SizeMismatch { expected: state.n, actual: ham.n_qubits() });
    }
    let values = diagonal_values(ham);
    Ok(state.amps.iter().zip(&values).map(|(a, v)| a.norm_sqr() * v).sum())
}

/// Exhaustive optimum of the full Hamiltonian (constant included). Ties go
/// to the lexicographically smallest bitstring.
pub fn brute_force_optimum(ham: &ZHamiltonian, direction: Direction) -> Result<(f64, Vec<u8>)> {
    let n = ham.n_qubits();
    check_cap(n, DEFAULT_ORACLE_CAP)?;
    let mut best: Option<(f64, usize)> = None;
    for x in 0..1usize << n {
        let v = ham.terms_value(&bits_of(x, n)) + ham.constant();
        let better = match best {
            None => true,
            Some((b, _)) => match direction {
                Direction::Min => v < b,
                Direction::Max => v > b,
            },
        };
        if better {
            best = Some((v, x));
        }
    }
    let (v, x) = best.unwrap_or((ham.constant(), 0));
    Ok((v, bits_of(x, n)))
}
