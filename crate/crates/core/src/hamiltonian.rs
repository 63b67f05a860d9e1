//! Diagonal cost Hamiltonians `H = c·I + Σ_S k_S ∏_{s∈S} Z_s` and converters
//! from standard optimization problems.
//!
//! The identity offset `c` is carried on [`ZHamiltonian`] but never simulated.
//! Problem-native objectives are recovered from simulated expectations with
//! [`maxcut_post_process`] and [`mis_post_process`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::GraphSpec;

/// Default penalty for the independent-set converter. Must exceed 1.
pub const DEFAULT_MIS_PENALTY: f64 = 2.0;

/// Widest clause the Max-SAT expansion accepts (`2^k` monomials per clause).
pub const MAX_CLAUSE_WIDTH: usize = 10;

/// One term `coeff · ∏_{s∈sites} Z_s`, with 1-based sorted sites.
#[derive(Debug, Clone, PartialEq)]
pub struct ZInteraction {
    sites: Vec<usize>,
    coeff: f64,
}

impl ZInteraction {
    pub fn new(sites: &[usize], coeff: f64) -> Result<Self> {
        if sites.is_empty() {
            return Err(invalid("interaction needs at least one site"));
        }
        if !coeff.is_finite() {
            return Err(invalid(format!("non-finite coefficient {coeff}")));
        }
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        if sorted[0] == 0 {
            return Err(invalid("sites are 1-based; got 0"));
        }
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate site {} in interaction", w[0])));
        }
        Ok(Self { sites: sorted, coeff })
    }

    /// Interaction with the default coefficient 1.
    pub fn unit(sites: &[usize]) -> Result<Self> {
        Self::new(sites, 1.0)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn min_site(&self) -> usize {
        self.sites[0]
    }

    pub fn max_site(&self) -> usize {
        self.sites[self.sites.len() - 1]
    }

    /// 0-based sites, as used by the MPS routines.
    pub fn zero_based(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s - 1).collect()
    }

    /// `∏ z_s` for `z = 1 - 2x`.
    pub fn parity(&self, bits: &[u8]) -> f64 {
        let ones = self.sites.iter().filter(|&&s| bits[s - 1] != 0).count();
        if ones % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn order_key(&self) -> (usize, usize, &[usize]) {
        (self.min_site(), self.max_site(), &self.sites)
    }
}

/// A diagonal Hamiltonian over `n_qubits` qubits.
///
/// Terms have pairwise-distinct site sets, non-zero coefficients, and are kept
/// in the canonical order `(min site, max site, site tuple)`, which is also
/// the order cost layers apply them in.
#[derive(Debug, Clone, PartialEq)]
pub struct ZHamiltonian {
    n_qubits: usize,
    terms: Vec<ZInteraction>,
    constant: f64,
}

impl ZHamiltonian {
    /// Merges terms sharing a site set by adding coefficients and drops terms
    /// whose coefficient ends up exactly zero.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = ZInteraction>, constant: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(invalid("Hamiltonian needs at least one qubit"));
        }
        if !constant.is_finite() {
            return Err(invalid("non-finite constant"));
        }
        let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for term in terms {
            if term.max_site() > n_qubits {
                return Err(Error::SiteOutOfRange { site: term.max_site(), n_sites: n_qubits });
            }
            *merged.entry(term.sites).or_insert(0.0) += term.coeff;
        }
        let mut terms: Vec<ZInteraction> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(sites, coeff)| ZInteraction { sites, coeff })
            .collect();
        terms.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        Ok(Self { n_qubits, terms, constant })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[ZInteraction] {
        &self.terms
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    /// `-H`, constant included.
    pub fn negated(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| ZInteraction { sites: t.sites.clone(), coeff: -t.coeff })
                .collect(),
            constant: -self.constant,
        }
    }

    /// Largest interaction width `d` (the Hamiltonian is `d`-local).
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|t| t.sites.len()).max().unwrap_or(0)
    }

    /// `Σ |k_S|`, a bound on `|⟨H - c⟩|`.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Energy of a computational basis state: `c + Σ_S k_S ∏_{s∈S} (1 - 2 x_s)`.
    pub fn evaluate_classical(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, actual: bits.len() });
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(invalid("bitstring entries must be 0 or 1"));
        }
        Ok(self.constant + self.terms_value(bits))
    }

    /// `Σ_S k_S ∏ z_s` without the constant and without validation.
    pub(crate) fn terms_value(&self, bits: &[u8]) -> f64 {
        self.terms.iter().map(|t| t.coeff * t.parity(bits)).sum()
    }
}

/// The simplified Max-Cut Hamiltonian `H' = Σ_{(i,j)∈E} w_ij Z_i Z_j`.
///
/// With `weighted == false` every edge weight is taken as 1.
pub fn maxcut_to_interactions(graph: &GraphSpec, weighted: bool) -> Result<ZHamiltonian> {
    let terms = graph
        .edges()
        .iter()
        .map(|&(u, v, w)| ZInteraction::new(&[u, v], if weighted { w } else { 1.0 }))
        .collect::<Result<Vec<_>>>()?;
    ZHamiltonian::new(graph.n_vertices(), terms, 0.0)
}

/// The penalised independent-set Hamiltonian
/// `½ Σ_i (I - Z_i) - (λ/4) Σ_{(i,j)∈E} (I - Z_i)(I - Z_j)`, whose value on
/// a bitstring is `|S| - λ · (edges inside S)`.
///
/// Expanded: `k_i = (λ/4)·deg_i - ½`, `k_ij = -λ/4`, and the identity part
/// `n/2 - (λ/4)·m` goes into the constant. Penalties `λ ≤ 1` are accepted
/// with a warning since they no longer guarantee feasible optima.
pub fn mis_to_interactions(graph: &GraphSpec, penalty: f64) -> Result<ZHamiltonian> {
    if !penalty.is_finite() {
        return Err(invalid("penalty must be finite"));
    }
    if penalty <= 1.0 {
        log::warn!("independent-set penalty {penalty} <= 1 does not enforce independence");
    }
    let n = graph.n_vertices();
    let quarter = penalty / 4.0;
    let mut terms = Vec::with_capacity(n + graph.n_edges());
    for v in 1..=n {
        let k = quarter * graph.degree(v) as f64 - 0.5;
        terms.push(ZInteraction::new(&[v], k)?);
    }
    for &(u, v, _) in graph.edges() {
        terms.push(ZInteraction::new(&[u, v], -quarter)?);
    }
    let constant = n as f64 / 2.0 - quarter * graph.n_edges() as f64;
    ZHamiltonian::new(n, terms, constant)
}

/// Weighted Max-SAT: the Hamiltonian's value on an assignment is the total
/// weight of satisfied clauses.
///
/// Literals are signed 1-based variable indices (negative = negated);
/// `x = 1` means true. Each clause contributes `w·(1 - ∏_ℓ f_ℓ)` with
/// `f = (1 + z)/2` for a positive literal and `(1 - z)/2` for a negated one.
pub fn maxsat_to_interactions(n_vars: usize, clauses: &[Vec<i64>], weights: &[f64]) -> Result<ZHamiltonian> {
    if weights.len() != clauses.len() {
        return Err(Error::SizeMismatch { expected: clauses.len(), actual: weights.len() });
    }
    let mut poly: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (ci, (clause, &w)) in clauses.iter().zip(weights).enumerate() {
        if clause.is_empty() {
            return Err(invalid(format!("clause {} is empty", ci + 1)));
        }
        if clause.len() > MAX_CLAUSE_WIDTH {
            return Err(invalid(format!(
                "clause {} has width {} > {MAX_CLAUSE_WIDTH}",
                ci + 1,
                clause.len()
            )));
        }
        if !w.is_finite() {
            return Err(invalid(format!("clause {} has non-finite weight", ci + 1)));
        }
        // Expand ∏ (1 + s·z) into monomials; z_i² = 1 makes products
        // symmetric differences of site sets.
        let mut product: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        product.insert(Vec::new(), 1.0);
        for &lit in clause {
            let var = lit.unsigned_abs() as usize;
            if lit == 0 || var > n_vars {
                return Err(invalid(format!("clause {}: literal {lit} outside ±1..={n_vars}", ci + 1)));
            }
            let sign = if lit > 0 { 1.0 } else { -1.0 };
            let mut next: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
            for (mono, c) in product {
                let toggled = toggle_site(&mono, var);
                *next.entry(mono).or_insert(0.0) += 0.5 * c;
                *next.entry(toggled).or_insert(0.0) += 0.5 * sign * c;
            }
            product = next;
        }
        *poly.entry(Vec::new()).or_insert(0.0) += w;
        for (mono, c) in product {
            *poly.entry(mono).or_insert(0.0) -= w * c;
        }
    }
    let constant = poly.remove(&Vec::new()).unwrap_or(0.0);
    let terms = poly
        .into_iter()
        .map(|(sites, c)| ZInteraction::new(&sites, c))
        .collect::<Result<Vec<_>>>()?;
    ZHamiltonian::new(n_vars.max(1), terms, constant)
}

fn toggle_site(mono: &[usize], site: usize) -> Vec<usize> {
    match mono.binary_search(&site) {
        Ok(i) => {
            let mut out = mono.to_vec();
            out.remove(i);
            out
        }
        Err(i) => {
            let mut out = mono.to_vec();
            out.insert(i, site);
            out
        }
    }
}

/// Cut value from a simplified Max-Cut expectation: `W/2 - E'/2`, where `W`
/// is the sum of the two-site coefficients.
pub fn maxcut_post_process(e_val: f64, ham: &ZHamiltonian) -> f64 {
    let total: f64 = ham.terms().iter().filter(|t| t.sites().len() == 2).map(|t| t.coeff()).sum();
    total / 2.0 - e_val / 2.0
}

/// Restores the identity term dropped from the simulated Hamiltonian.
pub fn mis_post_process(e_val: f64, ham: &ZHamiltonian) -> f64 {
    e_val + ham.constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path_graph() -> GraphSpec {
        GraphSpec::new(3, [(1, 2, 1.0), (2, 3, 2.0)]).unwrap()
    }

    fn term_list(h: &ZHamiltonian) -> Vec<(Vec<usize>, f64)> {
        h.terms().iter().map(|t| (t.sites().to_vec(), t.coeff())).collect()
    }

    #[test]
    fn interaction_construction() {
        let a = ZInteraction::unit(&[1, 2]).unwrap();
        assert_eq!((a.sites(), a.coeff()), (&[1, 2][..], 1.0));
        let b = ZInteraction::new(&[2, 3], 2.0).unwrap();
        assert_eq!((b.sites(), b.coeff()), (&[2, 3][..], 2.0));
        assert!(ZInteraction::unit(&[3, 3]).is_err());
        assert!(ZInteraction::unit(&[]).is_err());
        assert!(ZInteraction::unit(&[0, 1]).is_err());
        assert!(ZInteraction::new(&[1], f64::INFINITY).is_err());
        assert_eq!(ZInteraction::unit(&[4, 2]).unwrap().sites(), &[2, 4]);
    }

    #[test]
    fn duplicates_merge_and_zeros_vanish() {
        let h = ZHamiltonian::new(
            3,
            [
                ZInteraction::new(&[1, 2], 1.5).unwrap(),
                ZInteraction::new(&[2, 1], 0.5).unwrap(),
                ZInteraction::new(&[3], 1.0).unwrap(),
                ZInteraction::new(&[3], -1.0).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        assert_eq!(term_list(&h), vec![(vec![1, 2], 2.0)]);
        assert!(ZHamiltonian::new(2, [ZInteraction::unit(&[3]).unwrap()], 0.0).is_err());
    }

    #[test]
    fn canonical_term_order() {
        let h = ZHamiltonian::new(
            5,
            [
                ZInteraction::unit(&[1, 2, 5]).unwrap(),
                ZInteraction::unit(&[2, 3]).unwrap(),
                ZInteraction::unit(&[1, 3]).unwrap(),
                ZInteraction::unit(&[1]).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        let sites: Vec<_> = h.terms().iter().map(|t| t.sites().to_vec()).collect();
        assert_eq!(sites, vec![vec![1], vec![1, 3], vec![1, 2, 5], vec![2, 3]]);
    }

    #[test]
    fn maxcut_converter() {
        let h = maxcut_to_interactions(&path_graph(), true).unwrap();
        assert_eq!(term_list(&h), vec![(vec![1, 2], 1.0), (vec![2, 3], 2.0)]);
        assert_eq!(h.constant(), 0.0);
        let single = GraphSpec::new(2, [(1, 2, 5.0)]).unwrap();
        let h = maxcut_to_interactions(&single, false).unwrap();
        assert_eq!(term_list(&h), vec![(vec![1, 2], 1.0)]);
        let empty = GraphSpec::new(4, []).unwrap();
        let h = maxcut_to_interactions(&empty, true).unwrap();
        assert!(h.terms().is_empty());
        assert_eq!(h.n_qubits(), 4);
    }

    #[test]
    fn mis_converter_coefficients() {
        let g = GraphSpec::unweighted(3, [(1, 2)]).unwrap();
        let h = mis_to_interactions(&g, 2.0).unwrap();
        assert_eq!(term_list(&h), vec![(vec![1, 2], -0.5), (vec![3], -0.5)]);
        assert_eq!(h.constant(), 1.0);

        let tri = GraphSpec::unweighted(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let h = mis_to_interactions(&tri, 2.0).unwrap();
        assert_eq!(
            term_list(&h),
            vec![
                (vec![1], 0.5),
                (vec![1, 2], -0.5),
                (vec![1, 3], -0.5),
                (vec![2], 0.5),
                (vec![2, 3], -0.5),
                (vec![3], 0.5)
            ]
        );
        assert_eq!(h.constant(), 0.0);

        let edgeless = GraphSpec::new(2, []).unwrap();
        let h = mis_to_interactions(&edgeless, 2.0).unwrap();
        assert_eq!(term_list(&h), vec![(vec![1], -0.5), (vec![2], -0.5)]);
        assert_eq!(h.constant(), 1.0);
    }

    #[test]
    fn maxsat_converter_examples() {
        let h = maxsat_to_interactions(1, &[vec![1]], &[1.0]).unwrap();
        assert_eq!(h.constant(), 0.5);
        assert_eq!(term_list(&h), vec![(vec![1], -0.5)]);

        let h = maxsat_to_interactions(2, &[vec![1, 2]], &[1.0]).unwrap();
        assert_eq!(h.constant(), 0.75);
        assert_eq!(term_list(&h), vec![(vec![1], -0.25), (vec![1, 2], -0.25), (vec![2], -0.25)]);

        let h = maxsat_to_interactions(2, &[vec![1], vec![-1]], &[1.0, 1.0]).unwrap();
        assert_eq!(h.constant(), 1.0);
        assert!(h.terms().is_empty());

        assert!(maxsat_to_interactions(2, &[vec![]], &[1.0]).is_err());
        assert!(maxsat_to_interactions(2, &[vec![3]], &[1.0]).is_err());
        assert!(maxsat_to_interactions(2, &[vec![0]], &[1.0]).is_err());
        assert!(maxsat_to_interactions(11, &[(1..=11).collect()], &[1.0]).is_err());
    }

    #[test]
    fn classical_evaluation() {
        let h = maxcut_to_interactions(&path_graph(), true).unwrap();
        assert_eq!(h.evaluate_classical(&[0, 0, 0]).unwrap(), 3.0);
        assert_eq!(h.evaluate_classical(&[0, 1, 0]).unwrap(), -3.0);
        assert!(h.evaluate_classical(&[0, 1]).is_err());
        assert!(h.evaluate_classical(&[0, 2, 0]).is_err());

        let g = GraphSpec::unweighted(3, [(1, 2)]).unwrap();
        let mis = mis_to_interactions(&g, 2.0).unwrap();
        assert_eq!(mis.evaluate_classical(&[0, 0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn post_processing() {
        let h = maxcut_to_interactions(&path_graph(), true).unwrap();
        assert_eq!(maxcut_post_process(-3.0, &h), 3.0);
        assert_eq!(maxcut_post_process(3.0, &h), 0.0);
        assert_eq!(maxcut_post_process(0.0, &h), 1.5);

        let g = GraphSpec::unweighted(3, [(1, 2)]).unwrap();
        let mis = mis_to_interactions(&g, 2.0).unwrap();
        assert_eq!(mis_post_process(0.0, &mis), 1.0);
        assert_eq!(mis_post_process(-0.5, &mis), 0.5);
        // bits 001: simulated (constant-free) energy is 0
        let e = mis.evaluate_classical(&[0, 0, 1]).unwrap() - mis.constant();
        assert_eq!(mis_post_process(e, &mis), 1.0);
    }
}
