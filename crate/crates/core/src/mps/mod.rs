//! Matrix product states with open boundaries.
//!
//! Sites are indexed from 0 here. Each site stores one `dl × dr` matrix per
//! physical value, so `A[σ][l, r]` is the tensor entry at left bond `l`,
//! physical index `σ` and right bond `r`.

mod apply;
mod chain;
mod measure;
mod truncation;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use faer::{c64, Mat, MatRef};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};

pub use chain::{build_hamiltonian_chain, ChainSite, OperatorChain};
pub use truncation::TruncationConfig;

/// Largest register `to_amplitudes` / `from_amplitudes` will handle.
pub const MAX_DENSE_SITES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductKind {
    AllZero,
    AllPlus,
    /// One 0/1 entry per site.
    Bitstring(Vec<u8>),
}

#[derive(Debug, Clone)]
pub(crate) struct Site {
    pub(crate) a: [CMat; 2],
}

impl Site {
    fn product(amp0: c64, amp1: c64) -> Self {
        let mut a0 = Mat::zeros(1, 1);
        let mut a1 = Mat::zeros(1, 1);
        a0[(0, 0)] = amp0;
        a1[(0, 0)] = amp1;
        Self { a: [a0, a1] }
    }

    pub(crate) fn dl(&self) -> usize {
        self.a[0].nrows()
    }

    pub(crate) fn dr(&self) -> usize {
        self.a[0].ncols()
    }

    /// `(2·dl) × dr`, row index `σ·dl + l`.
    pub(crate) fn left_matrix(&self) -> CMat {
        let dl = self.dl();
        Mat::from_fn(2 * dl, self.dr(), |i, j| self.a[i / dl][(i % dl, j)])
    }

    /// `dl × (2·dr)`, column index `σ·dr + r`.
    pub(crate) fn right_matrix(&self) -> CMat {
        let dr = self.dr();
        Mat::from_fn(self.dl(), 2 * dr, |i, j| self.a[j / dr][(i, j % dr)])
    }

    pub(crate) fn from_left(m: MatRef<'_, c64>, dl: usize) -> Self {
        let dr = m.ncols();
        let a = core::array::from_fn(|s| Mat::from_fn(dl, dr, |l, r| m[(s * dl + l, r)]));
        Self { a }
    }

    pub(crate) fn from_right(m: MatRef<'_, c64>, dr: usize) -> Self {
        let dl = m.nrows();
        let a = core::array::from_fn(|s| Mat::from_fn(dl, dr, |l, r| m[(l, s * dr + r)]));
        Self { a }
    }

    /// `A[σ] ← m · A[σ]`
    pub(crate) fn mul_left(&mut self, m: MatRef<'_, c64>) {
        for s in 0..2 {
            self.a[s] = linalg::mul(m, self.a[s].as_ref());
        }
    }

    /// `A[σ] ← A[σ] · m`
    pub(crate) fn mul_right(&mut self, m: MatRef<'_, c64>) {
        for s in 0..2 {
            self.a[s] = linalg::mul(self.a[s].as_ref(), m);
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        let f = c64::new(factor, 0.0);
        for s in 0..2 {
            for j in 0..self.a[s].ncols() {
                for i in 0..self.a[s].nrows() {
                    self.a[s][(i, j)] *= f;
                }
            }
        }
    }

    pub(crate) fn squared_norm(&self) -> f64 {
        self.a[0].squared_norm_l2() + self.a[1].squared_norm_l2()
    }
}

/// An `n`-qubit state stored as a chain of site tensors.
#[derive(Debug, Clone)]
pub struct MpsState {
    pub(crate) sites: Vec<Site>,
    pub(crate) center: Option<usize>,
    pub(crate) discarded_weight: f64,
    pub(crate) max_bond_reached: usize,
}

impl MpsState {
    pub fn product_state(n: usize, kind: ProductKind) -> Result<Self> {
        if n == 0 {
            return Err(invalid("state needs at least one site"));
        }
        let h = c64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let sites = match &kind {
            ProductKind::AllZero => vec![Site::product(ONE, ZERO); n],
            ProductKind::AllPlus => vec![Site::product(h, h); n],
            ProductKind::Bitstring(bits) => {
                if bits.len() != n {
                    return Err(Error::SizeMismatch { expected: n, actual: bits.len() });
                }
                bits.iter()
                    .map(|&b| match b {
                        0 => Ok(Site::product(ONE, ZERO)),
                        1 => Ok(Site::product(ZERO, ONE)),
                        _ => Err(invalid(format!("bit value {b} is not 0 or 1"))),
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self { sites, center: Some(0), discarded_weight: 0.0, max_bond_reached: 1 })
    }

    /// Exact decomposition of a dense state vector (site 0 is the most
    /// significant bit). The norm is carried over as given.
    pub fn from_amplitudes(amplitudes: &[c64]) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(invalid(format!("amplitude count {len} is not a power of two ≥ 2")));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_DENSE_SITES {
            return Err(Error::OracleCap { n, cap: MAX_DENSE_SITES });
        }
        let trunc = TruncationConfig::exact();
        let mut sites = Vec::with_capacity(n);
        // rest: dl × 2^(n-k), column index = remaining bits, most significant first
        let mut rest = Mat::from_fn(1, len, |_, j| amplitudes[j]);
        for _ in 0..n - 1 {
            let dl = rest.nrows();
            let half = rest.ncols() / 2;
            let m = Mat::from_fn(2 * dl, half, |i, j| rest[(i % dl, (i / dl) * half + j)]);
            let (u, s, v) = linalg::svd(m.as_ref())?;
            let (keep, _) = trunc.keep_count(&s.iter().map(|x| x * x).collect::<Vec<_>>(), usize::MAX);
            sites.push(Site::from_left(u.subcols(0, keep), dl));
            rest = Mat::from_fn(keep, half, |i, j| c64::new(s[i], 0.0) * v[(j, i)].conj());
        }
        sites.push(Site::from_right(rest.as_ref(), 1));
        let max_bond = sites.iter().map(Site::dr).max().unwrap_or(1);
        Ok(Self { sites, center: Some(n - 1), discarded_weight: 0.0, max_bond_reached: max_bond })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    /// Sum of relative discarded weights over every truncation so far.
    pub fn discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    /// Largest interior bond dimension right now.
    pub fn max_bond(&self) -> usize {
        self.sites[..self.sites.len() - 1].iter().map(Site::dr).max().unwrap_or(1)
    }

    /// Largest interior bond dimension seen over the state's lifetime.
    pub fn max_bond_reached(&self) -> usize {
        self.max_bond_reached
    }

    /// Interior bond dimensions, `n - 1` entries.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(Site::dr).collect()
    }

    /// Total number of complex entries across all site tensors.
    pub fn storage_elements(&self) -> usize {
        self.sites.iter().map(|s| 2 * s.dl() * s.dr()).sum()
    }

    /// Shape `(dl, 2, dr)` and row-major entries of one site tensor.
    pub fn site_tensor(&self, site: usize) -> Result<((usize, usize, usize), Vec<c64>)> {
        self.check_site(site)?;
        let t = &self.sites[site];
        let (dl, dr) = (t.dl(), t.dr());
        let mut out = Vec::with_capacity(2 * dl * dr);
        for l in 0..dl {
            for s in 0..2 {
                for r in 0..dr {
                    out.push(t.a[s][(l, r)]);
                }
            }
        }
        Ok(((dl, 2, dr), out))
    }

    pub fn norm(&self) -> f64 {
        match self.center {
            Some(c) => linalg::sqrt(self.sites[c].squared_norm()),
            None => linalg::sqrt(self.inner(self).map(|z| z.re.max(0.0)).unwrap_or(0.0)),
        }
    }

    /// Moves the orthogonality center to `center` by QR sweeps.
    pub fn canonicalize(&mut self, center: usize) -> Result<()> {
        self.check_site(center)?;
        self.move_center(center);
        Ok(())
    }

    /// Rescales to unit norm. A zero state is left alone.
    pub fn normalize(&mut self) {
        let c = self.ensure_center();
        let norm = linalg::sqrt(self.sites[c].squared_norm());
        if norm > 0.0 {
            self.sites[c].scale(1.0 / norm);
        }
    }

    /// Dense amplitudes, site 0 as the most significant bit.
    pub fn to_amplitudes(&self) -> Result<Vec<c64>> {
        let n = self.n_sites();
        if n > MAX_DENSE_SITES {
            return Err(Error::OracleCap { n, cap: MAX_DENSE_SITES });
        }
        // rows: prefixes so far, columns: right bond
        let mut acc = Mat::from_fn(1, 1, |_, _| ONE);
        for site in &self.sites {
            let rows = acc.nrows();
            let mut next = Mat::zeros(2 * rows, site.dr());
            for s in 0..2 {
                let part = linalg::mul(acc.as_ref(), site.a[s].as_ref());
                for p in 0..rows {
                    for r in 0..site.dr() {
                        next[(2 * p + s, r)] = part[(p, r)];
                    }
                }
            }
            acc = next;
        }
        Ok((0..acc.nrows()).map(|i| acc[(i, 0)]).collect())
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites() {
            return Err(Error::SiteOutOfRange { site, n_sites: self.n_sites() });
        }
        Ok(())
    }

    pub(crate) fn ensure_center(&mut self) -> usize {
        match self.center {
            Some(c) => c,
            None => {
                self.move_center(0);
                0
            }
        }
    }

    pub(crate) fn move_center(&mut self, target: usize) {
        let n = self.n_sites();
        let (from_left, from_right) = match self.center {
            Some(c) => (c, c),
            None => (0, n - 1),
        };
        for k in from_left..target {
            self.qr_step(k);
        }
        for k in (target + 1..=from_right).rev() {
            self.lq_step(k);
        }
        self.center = Some(target);
    }

    /// Makes site `k` a left isometry and pushes the remainder into `k + 1`.
    pub(crate) fn qr_step(&mut self, k: usize) {
        let dl = self.sites[k].dl();
        let (q, r) = linalg::qr(self.sites[k].left_matrix().as_ref());
        self.sites[k] = Site::from_left(q.as_ref(), dl);
        self.sites[k + 1].mul_left(r.as_ref());
    }

    /// Makes site `k` a right isometry and pushes the remainder into `k - 1`.
    pub(crate) fn lq_step(&mut self, k: usize) {
        let dr = self.sites[k].dr();
        let (l, q) = linalg::lq(self.sites[k].right_matrix().as_ref());
        self.sites[k] = Site::from_right(q.as_ref(), dr);
        self.sites[k - 1].mul_right(l.as_ref());
    }

    pub(crate) fn note_bonds(&mut self) {
        self.max_bond_reached = self.max_bond_reached.max(self.max_bond());
    }
}
