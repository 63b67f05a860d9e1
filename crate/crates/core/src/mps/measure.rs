//! Expectations, overlaps and sampling by transfer-matrix contraction.

use alloc::vec;
use alloc::vec::Vec;

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, Par};
use rand_core::RngCore;

use super::chain::check_sorted;
use super::{MpsState, Site};
use crate::error::{Error, Result};
use crate::graph::uniform_f64;
use crate::hamiltonian::ZHamiltonian;
use crate::linalg::{self, CMat, ONE, ZERO};

const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SiteOp {
    I,
    Z,
    X,
}

impl SiteOp {
    /// Nonzero `(out, in, weight)` entries.
    fn entries(self) -> [(usize, usize, f64); 2] {
        match self {
            SiteOp::I => [(0, 0, 1.0), (1, 1, 1.0)],
            SiteOp::Z => [(0, 0, 1.0), (1, 1, -1.0)],
            SiteOp::X => [(0, 1, 1.0), (1, 0, 1.0)],
        }
    }
}

/// `E' = Σ O[σ,τ] B[σ]† E K[τ]`, bra bonds on rows.
fn transfer_left(e: &CMat, bra: &Site, ket: &Site, op: SiteOp) -> CMat {
    let mut out = Mat::zeros(bra.dr(), ket.dr());
    for (s, t, w) in op.entries() {
        let ek = linalg::mul(e.as_ref(), ket.a[t].as_ref());
        matmul(out.as_mut(), Accum::Add, bra.a[s].adjoint(), ek.as_ref(), c64::new(w, 0.0), Par::Seq);
    }
    out
}

/// `R' = Σ O[σ,τ] conj(B[σ]) R K[τ]ᵀ`, bra bonds on rows.
fn transfer_right(r: &CMat, bra: &Site, ket: &Site, op: SiteOp) -> CMat {
    let mut out = Mat::zeros(bra.dl(), ket.dl());
    for (s, t, w) in op.entries() {
        let rk = linalg::mul(r.as_ref(), ket.a[t].transpose());
        matmul(out.as_mut(), Accum::Add, bra.a[s].conjugate(), rk.as_ref(), c64::new(w, 0.0), Par::Seq);
    }
    out
}

fn one() -> CMat {
    Mat::from_fn(1, 1, |_, _| ONE)
}

/// Left and right partial overlaps of two states. `left[k]` covers sites
/// `0..k`, `right[k]` covers sites `k+1..n`.
struct Environments<'a> {
    bra: &'a MpsState,
    ket: &'a MpsState,
    left: Vec<CMat>,
    right: Vec<CMat>,
}

impl<'a> Environments<'a> {
    fn new(bra: &'a MpsState, ket: &'a MpsState) -> Result<Self> {
        if bra.n_sites() != ket.n_sites() {
            return Err(Error::SizeMismatch { expected: bra.n_sites(), actual: ket.n_sites() });
        }
        let n = bra.n_sites();
        let mut left = Vec::with_capacity(n);
        left.push(one());
        for k in 0..n - 1 {
            let next = transfer_left(&left[k], &bra.sites[k], &ket.sites[k], SiteOp::I);
            left.push(next);
        }
        let mut right = vec![one(); n];
        for k in (1..n).rev() {
            right[k - 1] = transfer_right(&right[k], &bra.sites[k], &ket.sites[k], SiteOp::I);
        }
        Ok(Self { bra, ket, left, right })
    }

    /// `⟨bra| ∏_{s∈S} Z_s |ket⟩` for sorted 0-based `S`.
    fn zstring(&self, sites: &[usize]) -> c64 {
        let (a, b) = (sites[0], sites[sites.len() - 1]);
        let mut e = self.left[a].clone();
        let mut members = sites.iter().peekable();
        for k in a..=b {
            let op = if members.next_if_eq(&&k).is_some() { SiteOp::Z } else { SiteOp::I };
            e = transfer_left(&e, &self.bra.sites[k], &self.ket.sites[k], op);
        }
        linalg::dot_elementwise(e.as_ref(), self.right[b].as_ref())
    }

    fn local(&self, k: usize, op: SiteOp) -> c64 {
        let e = transfer_left(&self.left[k], &self.bra.sites[k], &self.ket.sites[k], op);
        linalg::dot_elementwise(e.as_ref(), self.right[k].as_ref())
    }

    fn hamiltonian(&self, ham: &ZHamiltonian) -> c64 {
        let mut acc = ZERO;
        for t in ham.terms() {
            acc += c64::new(t.coeff(), 0.0) * self.zstring(&t.zero_based());
        }
        acc
    }
}

fn real_part(z: c64) -> Result<f64> {
    if !(z.im.abs() <= IMAG_TOL) {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

impl MpsState {
    fn check_zstring(&self, sites: &[usize]) -> Result<()> {
        check_sorted(sites)?;
        self.check_site(sites[sites.len() - 1])
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &MpsState) -> Result<c64> {
        if self.n_sites() != other.n_sites() {
            return Err(Error::SizeMismatch { expected: self.n_sites(), actual: other.n_sites() });
        }
        let mut e = one();
        for (b, k) in self.sites.iter().zip(&other.sites) {
            e = transfer_left(&e, b, k, SiteOp::I);
        }
        Ok(e[(0, 0)])
    }

    /// `⟨self| ∏_{s∈S} Z_s |other⟩` for sorted 0-based sites `S`.
    pub fn matrix_element_zstring(&self, other: &MpsState, sites: &[usize]) -> Result<c64> {
        self.check_zstring(sites)?;
        if self.n_sites() != other.n_sites() {
            return Err(Error::SizeMismatch { expected: self.n_sites(), actual: other.n_sites() });
        }
        let mut e = one();
        let mut members = sites.iter().peekable();
        for (k, (b, t)) in self.sites.iter().zip(&other.sites).enumerate() {
            let op = if members.next_if_eq(&&k).is_some() { SiteOp::Z } else { SiteOp::I };
            e = transfer_left(&e, b, t, op);
        }
        Ok(e[(0, 0)])
    }

    /// `⟨self| Σ_S k_S ∏Z_s |other⟩`, constant excluded.
    pub fn matrix_element_hamiltonian(&self, other: &MpsState, ham: &ZHamiltonian) -> Result<c64> {
        self.check_hamiltonian(ham)?;
        if ham.terms().is_empty() {
            return Ok(ZERO);
        }
        Ok(Environments::new(self, other)?.hamiltonian(ham))
    }

    /// `Σ_i ⟨self| X_i |other⟩`
    pub fn matrix_element_mixer(&self, other: &MpsState) -> Result<c64> {
        let env = Environments::new(self, other)?;
        let mut acc = ZERO;
        for k in 0..self.n_sites() {
            acc += env.local(k, SiteOp::X);
        }
        Ok(acc)
    }

    /// `⟨∏_{s∈S} Z_s⟩` for sorted 0-based sites `S`.
    pub fn expectation_zstring(&self, sites: &[usize]) -> Result<f64> {
        real_part(self.matrix_element_zstring(self, sites)?)
    }

    /// `Σ_S k_S ⟨∏Z_s⟩`, constant excluded. Environments are built once and
    /// shared by all terms.
    pub fn expectation_hamiltonian(&self, ham: &ZHamiltonian) -> Result<f64> {
        real_part(self.matrix_element_hamiltonian(self, ham)?)
    }

    fn check_hamiltonian(&self, ham: &ZHamiltonian) -> Result<()> {
        if ham.n_qubits() != self.n_sites() {
            return Err(Error::SizeMismatch { expected: self.n_sites(), actual: ham.n_qubits() });
        }
        Ok(())
    }

    /// Draws `count` bitstrings from `|⟨x|ψ⟩|²` by sequential conditional
    /// sampling in right-canonical form.
    pub fn sample_bitstrings<R: RngCore>(&self, count: usize, rng: &mut R) -> Vec<Vec<u8>> {
        let mut state = self.clone();
        state.move_center(0);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut bits = Vec::with_capacity(state.n_sites());
            let mut v = one();
            for site in &state.sites {
                let w: [CMat; 2] = core::array::from_fn(|s| linalg::mul(v.as_ref(), site.a[s].as_ref()));
                let p0 = w[0].squared_norm_l2();
                let p1 = w[1].squared_norm_l2();
                let total = p0 + p1;
                let bit = if total > 0.0 && uniform_f64(rng) * total >= p0 { 1 } else { 0 };
                let p = if bit == 1 { p1 } else { p0 };
                let scale = if p > 0.0 { 1.0 / linalg::sqrt(p) } else { 0.0 };
                let [w0, w1] = w;
                v = if bit == 1 { w1 } else { w0 };
                for j in 0..v.ncols() {
                    v[(0, j)] *= c64::new(scale, 0.0);
                }
                bits.push(bit);
            }
            out.push(bits);
        }
        out
    }
}
