//! Matrix product state simulation of the Quantum Approximate Optimization
//! Algorithm for diagonal cost Hamiltonians written as sums of Pauli-Z
//! products.
//!
//! The crate is `no_std` compatible (it needs `alloc`). The default `std`
//! feature enables runtime SIMD dispatch in the dense kernels and wall-clock
//! timing in [`qaoa::RunMetrics`]; without it reported wall times are zero.
//!
//! Conventions used throughout:
//!
//! * bit `0` is spin `z = +1` and basis state `|0⟩`; in general `z = 1 - 2x`;
//! * Hamiltonian sites are 1-based (as in the interactions file format), MPS
//!   sites are 0-based;
//! * the cost unitary is `exp(-iγ H)` and the mixer is `exp(-iβ X)` on every
//!   qubit;
//! * flat angle vectors are ordered `[β₁..β_p, γ₁..γ_p]`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod gradient;
pub mod graph;
pub mod hamiltonian;
pub mod mps;
pub mod optimizer;
pub mod oracle;
pub mod qaoa;

mod linalg;
mod timer;

pub use error::{Error, Result};
pub use faer::c64;
pub use gradient::{finite_difference_gradient, qaoa_gradient, GradientResult};
pub use graph::{random_regular_graph, GraphSpec};
pub use hamiltonian::{ZHamiltonian, ZInteraction};
pub use mps::{MpsState, OperatorChain, ProductKind, TruncationConfig};
pub use optimizer::{optimize_angles, OptConfig, OptResult};
pub use qaoa::{qaoa_expectation, run_qaoa, AngleSchedule, QaoaProblem, RunMetrics};
