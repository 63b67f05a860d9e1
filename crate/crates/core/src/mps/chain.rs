//! Operators factored site by site (matrix product operators) over a
//! contiguous span of sites.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use faer::{c64, Mat};

use super::Site;
use crate::error::{invalid, Result};
use crate::hamiltonian::ZHamiltonian;
use crate::linalg::{self, CMat, ONE, ZERO};

/// One site of an operator chain: `w[out][in]` is a `wl × wr` matrix over
/// the operator bonds.
#[derive(Debug, Clone)]
pub struct ChainSite {
    pub(crate) w: [[CMat; 2]; 2],
}

impl ChainSite {
    pub fn zeros(wl: usize, wr: usize) -> Self {
        Self { w: core::array::from_fn(|_| core::array::from_fn(|_| Mat::zeros(wl, wr))) }
    }

    /// Bond-1 site carrying a plain 2×2 operator `op[out][in]`.
    pub fn local(op: [[c64; 2]; 2]) -> Self {
        let mut site = Self::zeros(1, 1);
        for (o, row) in op.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                site.w[o][i][(0, 0)] = v;
            }
        }
        site
    }

    pub fn wl(&self) -> usize {
        self.w[0][0].nrows()
    }

    pub fn wr(&self) -> usize {
        self.w[0][0].ncols()
    }

    pub fn get(&self, left: usize, out: usize, inp: usize, right: usize) -> c64 {
        self.w[out][inp][(left, right)]
    }

    pub fn set(&mut self, left: usize, out: usize, inp: usize, right: usize, value: c64) {
        self.w[out][inp][(left, right)] = value;
    }

    /// Diagonal entry `(out = inp = σ)` built from `a·I + b·Z`.
    fn add_diag(&mut self, left: usize, right: usize, a: f64, b: f64) {
        self.w[0][0][(left, right)] += c64::new(a + b, 0.0);
        self.w[1][1][(left, right)] += c64::new(a - b, 0.0);
    }

    /// Applies this operator to an MPS site, fusing bonds as `w·d + l`.
    pub(crate) fn contract(&self, site: &Site) -> Site {
        let (wl, wr) = (self.wl(), self.wr());
        let (dl, dr) = (site.dl(), site.dr());
        let a = core::array::from_fn(|out| {
            let mut m = Mat::zeros(wl * dl, wr * dr);
            for inp in 0..2 {
                let w = &self.w[out][inp];
                let src = &site.a[inp];
                for i in 0..wl {
                    for j in 0..wr {
                        let c = w[(i, j)];
                        if c == ZERO {
                            continue;
                        }
                        for r in 0..dr {
                            for l in 0..dl {
                                m[(i * dl + l, j * dr + r)] += c * src[(l, r)];
                            }
                        }
                    }
                }
            }
            m
        });
        Site { a }
    }
}

/// An operator acting on sites `start..start + len`, outer bonds of size 1.
#[derive(Debug, Clone)]
pub struct OperatorChain {
    start: usize,
    sites: Vec<ChainSite>,
    unitary: bool,
}

impl OperatorChain {
    /// `unitary` marks chains that preserve the norm; their application is
    /// renormalized after truncation.
    pub fn new(start: usize, sites: Vec<ChainSite>, unitary: bool) -> Result<Self> {
        let (first, last) = match (sites.first(), sites.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(invalid("operator chain needs at least one site")),
        };
        if first.wl() != 1 || last.wr() != 1 {
            return Err(invalid("operator chain boundary bonds must have dimension 1"));
        }
        for (k, pair) in sites.windows(2).enumerate() {
            if pair[0].wr() != pair[1].wl() {
                return Err(invalid(format!(
                    "operator bond mismatch after chain site {k}: {} vs {}",
                    pair[0].wr(),
                    pair[1].wl()
                )));
            }
        }
        Ok(Self { start, sites, unitary })
    }

    pub fn identity(start: usize, len: usize) -> Result<Self> {
        let id = ChainSite::local([[ONE, ZERO], [ZERO, ONE]]);
        Self::new(start, vec![id; len], true)
    }

    /// `cos θ · I − i sin θ · ∏_{s∈S} Z_s` on 0-based sorted sites `S`.
    pub fn zstring_phase(sites: &[usize], theta: f64) -> Result<Self> {
        check_sorted(sites)?;
        let (a, b) = (sites[0], sites[sites.len() - 1]);
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        if a == b {
            let e = linalg::cis(-theta);
            return Self::new(a, vec![ChainSite::local([[e, ZERO], [ZERO, e.conj()]])], true);
        }
        let mut chain = Vec::with_capacity(b - a + 1);
        // channel 0 carries c·I, channel 1 carries −i s·∏Z
        let mut first = ChainSite::zeros(1, 2);
        first.add_diag(0, 0, c, 0.0);
        first.w[0][0][(0, 1)] = c64::new(0.0, -s);
        first.w[1][1][(0, 1)] = c64::new(0.0, s);
        chain.push(first);
        for k in a + 1..b {
            let mut mid = ChainSite::zeros(2, 2);
            mid.add_diag(0, 0, 1.0, 0.0);
            if sites.binary_search(&k).is_ok() {
                mid.add_diag(1, 1, 0.0, 1.0);
            } else {
                mid.add_diag(1, 1, 1.0, 0.0);
            }
            chain.push(mid);
        }
        let mut last = ChainSite::zeros(2, 1);
        last.add_diag(0, 0, 1.0, 0.0);
        last.add_diag(1, 0, 0.0, 1.0);
        chain.push(last);
        Self::new(a, chain, true)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Last site covered (inclusive).
    pub fn end(&self) -> usize {
        self.start + self.sites.len() - 1
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn sites(&self) -> &[ChainSite] {
        &self.sites
    }

    /// Interior operator bond dimensions.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(ChainSite::wr).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }
}

pub(crate) fn check_sorted(sites: &[usize]) -> Result<()> {
    if sites.is_empty() {
        return Err(invalid("Z-string needs at least one site"));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(format!("Z-string sites {sites:?} are not strictly increasing")));
    }
    Ok(())
}

/// Builds `Σ_S k_S ∏_{s∈S} Z_s` (constant excluded) as an operator chain.
///
/// Each bond tracks a small automaton: "no term started yet", one channel
/// per term whose span crosses the bond, and "a term already finished".
/// An empty Hamiltonian gives the zero operator on site 0.
pub fn build_hamiltonian_chain(ham: &ZHamiltonian) -> OperatorChain {
    let terms: Vec<(Vec<usize>, f64)> = ham.terms().iter().map(|t| (t.zero_based(), t.coeff())).collect();
    if terms.is_empty() {
        return OperatorChain { start: 0, sites: vec![ChainSite::zeros(1, 1)], unitary: false };
    }
    let lo = terms.iter().map(|t| t.0[0]).min().unwrap_or(0);
    let hi = terms.iter().map(|t| t.0[t.0.len() - 1]).max().unwrap_or(0);

    // Channel layout of the bond to the right of site k; `None` is the bond
    // left of the span.
    struct Layout {
        not_started: Option<usize>,
        crossing: Vec<(usize, usize)>, // (term index, channel)
        done: Option<usize>,
        dim: usize,
    }
    let layout = |k: Option<usize>| -> Layout {
        let (mut ns, mut crossing, mut done) = (false, Vec::new(), false);
        for (t, (s, _)) in terms.iter().enumerate() {
            let (min, max) = (s[0], s[s.len() - 1]);
            match k {
                None => ns = true,
                Some(k) if min > k => ns = true,
                Some(k) if max <= k => done = true,
                Some(_) => crossing.push(t),
            }
        }
        let mut dim = 0;
        let not_started = ns.then(|| {
            dim += 1;
            dim - 1
        });
        let crossing = crossing
            .into_iter()
            .map(|t| {
                dim += 1;
                (t, dim - 1)
            })
            .collect();
        let done = done.then(|| {
            dim += 1;
            dim - 1
        });
        Layout { not_started, crossing, done, dim }
    };
    let channel_of = |lay: &Layout, t: usize| lay.crossing.iter().find(|c| c.0 == t).map(|c| c.1);

    let mut sites = Vec::with_capacity(hi - lo + 1);
    let mut left = layout(None);
    for k in lo..=hi {
        let right = layout(Some(k));
        let mut w = ChainSite::zeros(left.dim, right.dim);
        if let (Some(a), Some(b)) = (left.not_started, right.not_started) {
            w.add_diag(a, b, 1.0, 0.0);
        }
        if let (Some(a), Some(b)) = (left.done, right.done) {
            w.add_diag(a, b, 1.0, 0.0);
        }
        for (t, (s, coeff)) in terms.iter().enumerate() {
            let (min, max) = (s[0], s[s.len() - 1]);
            let member = s.binary_search(&k).is_ok();
            if min == k && max == k {
                if let (Some(a), Some(b)) = (left.not_started, right.done) {
                    w.add_diag(a, b, 0.0, *coeff);
                }
            } else if min == k {
                if let (Some(a), Some(b)) = (left.not_started, channel_of(&right, t)) {
                    w.add_diag(a, b, 0.0, *coeff);
                }
            } else if max == k {
                if let (Some(a), Some(b)) = (channel_of(&left, t), right.done) {
                    w.add_diag(a, b, 0.0, 1.0);
                }
            } else if min < k && k < max {
                if let (Some(a), Some(b)) = (channel_of(&left, t), channel_of(&right, t)) {
                    if member {
                        w.add_diag(a, b, 0.0, 1.0);
                    } else {
                        w.add_diag(a, b, 1.0, 0.0);
                    }
                }
            }
        }
        sites.push(w);
        left = right;
    }
    OperatorChain { start: lo, sites, unitary: false }
}
