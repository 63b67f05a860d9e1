use alloc::vec::Vec;

use faer::{c64, Mat};

use super::chain::check_sorted;
use super::{MpsState, OperatorChain, Site, TruncationConfig};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ZERO};

const UNITARY_TOL: f64 = 1e-12;

fn unitarity_error(u: &[[c64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut g = ZERO;
            for k in 0..2 {
                g += u[k][i].conj() * u[k][j];
            }
            if i == j {
                g -= c64::new(1.0, 0.0);
            }
            worst = worst.max(linalg::abs(g));
        }
    }
    worst
}

impl MpsState {
    /// Applies the 2×2 unitary `u[out][in]` to one site.
    pub fn apply_single_site(&mut self, site: usize, u: [[c64; 2]; 2]) -> Result<()> {
        let err = unitarity_error(&u);
        if !(err <= UNITARY_TOL) {
            return Err(invalid(alloc::format!("gate is not unitary (deviation {err:e})")));
        }
        self.apply_single_site_unchecked(site, u)
    }

    /// As [`apply_single_site`](Self::apply_single_site) without the
    /// unitarity check. A non-unitary gate invalidates the canonical form.
    pub fn apply_single_site_unchecked(&mut self, site: usize, u: [[c64; 2]; 2]) -> Result<()> {
        self.check_site(site)?;
        let t = &mut self.sites[site];
        let (a0, a1) = (&t.a[0], &t.a[1]);
        let n0 = Mat::from_fn(a0.nrows(), a0.ncols(), |i, j| u[0][0] * a0[(i, j)] + u[0][1] * a1[(i, j)]);
        let n1 = Mat::from_fn(a0.nrows(), a0.ncols(), |i, j| u[1][0] * a0[(i, j)] + u[1][1] * a1[(i, j)]);
        t.a = [n0, n1];
        Ok(())
    }

    /// Applies `exp(−iθ ∏_{s∈S} Z_s)` for 0-based sorted sites `S`.
    pub fn apply_zstring_phase(&mut self, sites: &[usize], theta: f64, trunc: &TruncationConfig) -> Result<()> {
        check_sorted(sites)?;
        self.check_site(sites[sites.len() - 1])?;
        if sites.len() == 1 {
            let e = linalg::cis(-theta);
            return self.apply_single_site_unchecked(sites[0], [[e, ZERO], [ZERO, e.conj()]]);
        }
        let chain = OperatorChain::zstring_phase(sites, theta)?;
        self.apply_operator_chain(&chain, trunc).map(|_| ())
    }

    /// Contracts `chain` into the state and recompresses the span.
    ///
    /// Unitary chains are renormalized back to the prior norm. For other
    /// chains the state keeps its true norm, which is also returned.
    pub fn apply_operator_chain(&mut self, chain: &OperatorChain, trunc: &TruncationConfig) -> Result<f64> {
        let n = self.n_sites();
        if chain.end() >= n {
            return Err(Error::SiteOutOfRange { site: chain.end(), n_sites: n });
        }
        let start = chain.start();
        self.move_center(start);
        let prior = linalg::sqrt(self.sites[start].squared_norm());
        let span: Vec<Site> = chain
            .sites()
            .iter()
            .zip(&self.sites[start..=chain.end()])
            .map(|(w, s)| w.contract(s))
            .collect();
        let target = chain.is_unitary().then_some(prior);
        self.absorb_span(start, span, trunc, target)
    }

    /// Recompresses every bond under `trunc`, keeping the norm.
    pub fn truncate_sweep(&mut self, trunc: &TruncationConfig) -> Result<()> {
        let prior = self.norm();
        let span = self.sites.clone();
        self.absorb_span(0, span, trunc, Some(prior)).map(|_| ())
    }

    /// Writes `span` over sites `start..` after a left-to-right QR pass and a
    /// right-to-left truncating SVD pass; the center ends at `start`.
    ///
    /// Sites left of `start` must be left isometries and sites right of the
    /// span right isometries.
    fn absorb_span(
        &mut self,
        start: usize,
        mut span: Vec<Site>,
        trunc: &TruncationConfig,
        target_norm: Option<f64>,
    ) -> Result<f64> {
        let len = span.len();
        for j in 0..len - 1 {
            let dl = span[j].dl();
            let (q, r) = linalg::qr(span[j].left_matrix().as_ref());
            span[j] = Site::from_left(q.as_ref(), dl);
            span[j + 1].mul_left(r.as_ref());
        }
        let mut discarded = 0.0;
        for j in (1..len).rev() {
            let dr = span[j].dr();
            let (u, s, v) = linalg::svd(span[j].right_matrix().as_ref())?;
            let sq: Vec<f64> = s.iter().map(|x| x * x).collect();
            let (keep, dropped) = trunc.keep_count(&sq, usize::MAX);
            discarded += dropped;
            span[j] = Site::from_right(v.subcols(0, keep).adjoint().to_owned().as_ref(), dr);
            let us = Mat::from_fn(u.nrows(), keep, |i, c| u[(i, c)] * s[c]);
            span[j - 1].mul_right(us.as_ref());
        }
        let norm = linalg::sqrt(span[0].squared_norm());
        if let Some(target) = target_norm {
            if norm > 0.0 {
                span[0].scale(target / norm);
            }
        }
        for (k, site) in span.into_iter().enumerate() {
            self.sites[start + k] = site;
        }
        self.center = Some(start);
        self.discarded_weight += discarded;
        self.note_bonds();
        Ok(norm)
    }
}
