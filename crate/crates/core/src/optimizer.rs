//! Multi-start L-BFGS search over QAOA angles.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{invalid, Error, Result};
use crate::gradient::qaoa_gradient;
use crate::graph::uniform_f64;
use crate::mps::TruncationConfig;
use crate::qaoa::{AngleSchedule, QaoaProblem};

const HISTORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;
const PERTURBATION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig {
    /// Ignored when `warm_start` is given; its length decides.
    pub p: usize,
    pub maximize: bool,
    /// Total number of local searches, the warm start included.
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop a local search once the gradient norm drops to this.
    pub tolerance: f64,
    pub warm_start: Option<AngleSchedule>,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self { p: 1, maximize: false, restarts: 1, max_iterations: 100, tolerance: 1e-6, warm_start: None, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub energy: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartSummary {
    pub initial_energy: f64,
    pub final_energy: f64,
    pub iterations: usize,
    /// One entry per accepted iterate, the starting point first.
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// `⟨H'⟩` at `angles`.
    pub energy: f64,
    pub angles: AngleSchedule,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub restarts_used: usize,
    /// Trace of the winning start.
    pub trace: Vec<TracePoint>,
    /// `None` for starts that hit a non-finite objective.
    pub starts: Vec<Option<StartSummary>>,
}

struct LocalResult {
    x: Vec<f64>,
    f: f64,
    grad_norm: f64,
    summary: StartSummary,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Two-loop recursion: `−H·g` from the stored `(s, y)` pairs.
fn lbfgs_direction(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y) in history.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push((a, rho));
    }
    let scale = history.back().map(|(s, y)| dot(s, y) / dot(y, y)).unwrap_or(1.0);
    for qi in q.iter_mut() {
        *qi *= scale;
    }
    for ((s, y), (a, rho)) in history.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}

/// Minimizes `objective` from `x0`. Returns `None` when the start point is
/// not finite.
fn minimize(
    x0: Vec<f64>,
    objective: &mut dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    max_iterations: usize,
    tolerance: f64,
    sign: f64,
) -> Result<Option<LocalResult>> {
    let mut x = x0;
    let (mut f, mut g) = objective(&x)?;
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Ok(None);
    }
    let mut trace = alloc::vec![TracePoint { energy: sign * f, gradient_norm: norm(&g) }];
    let mut history: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::with_capacity(HISTORY);
    let mut iterations = 0;
    while iterations < max_iterations && norm(&g) > tolerance {
        let mut d = lbfgs_direction(&g, &history);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut t = if history.is_empty() { (1.0 / norm(&g)).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            let (ft, gt) = objective(&trial)?;
            if ft.is_finite() && gt.iter().all(|v| v.is_finite()) && ft <= f + ARMIJO_C1 * t * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            log::debug!("line search stalled after {iterations} iterations");
            break;
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s, &y) > 1e-12 * norm(&s) * norm(&y) {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, y));
        }
        x = x_new;
        f = f_new;
        g = g_new;
        iterations += 1;
        trace.push(TracePoint { energy: sign * f, gradient_norm: norm(&g) });
    }
    let summary = StartSummary { initial_energy: trace[0].energy, final_energy: sign * f, iterations, trace };
    Ok(Some(LocalResult { x, f, grad_norm: norm(&g), summary }))
}

fn random_angles(p: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let betas: Vec<f64> = (0..p).map(|_| core::f64::consts::PI * uniform_f64(rng)).collect();
    let gammas: Vec<f64> = (0..p).map(|_| 2.0 * core::f64::consts::PI * uniform_f64(rng)).collect();
    betas.into_iter().chain(gammas).collect()
}

/// Multi-start local optimization of the QAOA energy.
///
/// Start 0 is the warm start when given, otherwise random. Later starts
/// alternate between perturbing the best angles so far (odd starts) and
/// fresh draws with `β ∈ [0, π)`, `γ ∈ [0, 2π)` (even starts). Each start
/// draws from its own ChaCha8 stream of `seed`.
pub fn optimize_angles(problem: &QaoaProblem, config: &OptConfig, trunc: &TruncationConfig) -> Result<OptResult> {
    let mut objective = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let g = qaoa_gradient(problem, &AngleSchedule::from_flat(x)?, trunc)?;
        Ok((g.energy, g.to_flat()))
    };
    optimize_with(&mut objective, config)
}

/// Drives the multi-start search over any `(energy, gradient)` oracle on the
/// flat angle vector.
pub fn optimize_with(
    objective: &mut dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    config: &OptConfig,
) -> Result<OptResult> {
    if config.restarts == 0 {
        return Err(invalid("restarts must be at least 1"));
    }
    if !(config.tolerance > 0.0) {
        return Err(invalid("gradient tolerance must be positive"));
    }
    let p = match &config.warm_start {
        Some(w) => w.p(),
        None => config.p,
    };
    if p == 0 {
        return Err(invalid("p must be at least 1"));
    }
    let sign = if config.maximize { -1.0 } else { 1.0 };
    let mut internal = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (e, g) = objective(x)?;
        Ok((sign * e, g.into_iter().map(|v| sign * v).collect()))
    };

    let mut best: Option<LocalResult> = None;
    let mut starts = Vec::with_capacity(config.restarts);
    for i in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        let x0 = match (i, &config.warm_start, &best) {
            (0, Some(w), _) => w.to_flat(),
            (i, _, Some(b)) if i % 2 == 1 => {
                b.x.iter().map(|v| v + PERTURBATION * (2.0 * uniform_f64(&mut rng) - 1.0)).collect()
            }
            _ => random_angles(p, &mut rng),
        };
        match minimize(x0, &mut internal, config.max_iterations, config.tolerance, sign) {
            Ok(Some(local)) => {
                starts.push(Some(local.summary.clone()));
                if best.as_ref().map_or(true, |b| local.f < b.f) {
                    best = Some(local);
                }
            }
            Ok(None) => {
                log::warn!("optimizer start {i} has a non-finite objective; skipped");
                starts.push(None);
            }
            Err(e @ Error::Validation(_)) => return Err(e),
            Err(e) => {
                log::warn!("optimizer start {i} failed: {e}");
                starts.push(None);
            }
        }
    }
    let best = best.ok_or(Error::AllStartsFailed(config.restarts))?;
    Ok(OptResult {
        energy: sign * best.f,
        angles: AngleSchedule::from_flat(&best.x)?,
        iterations: best.summary.iterations,
        final_gradient_norm: best.grad_norm,
        restarts_used: starts.iter().filter(|s| s.is_some()).count(),
        trace: best.summary.trace,
        starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{ZHamiltonian, ZInteraction};
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn quadratic(x: &[f64]) -> Result<(f64, Vec<f64>)> {
        // minimum 0.5 at (1, -2)
        let f = (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5;
        Ok((f, vec![2.0 * (x[0] - 1.0), 6.0 * (x[1] + 2.0)]))
    }

    #[test]
    fn lbfgs_on_quadratic() {
        let cfg = OptConfig { restarts: 3, tolerance: 1e-10, max_iterations: 200, ..OptConfig::default() };
        let r = optimize_with(&mut quadratic, &cfg).unwrap();
        assert_abs_diff_eq!(r.energy, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.angles.betas()[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.angles.gammas()[0], -2.0, epsilon = 1e-6);
        for s in r.starts.iter().flatten() {
            assert!(s.trace.windows(2).all(|w| w[1].energy <= w[0].energy));
        }
    }

    #[test]
    fn maximize_negates() {
        let mut neg = |x: &[f64]| quadratic(x).map(|(f, g)| (-f, g.into_iter().map(|v| -v).collect()));
        let cfg = OptConfig { maximize: true, restarts: 2, tolerance: 1e-10, ..OptConfig::default() };
        let r = optimize_with(&mut neg, &cfg).unwrap();
        assert_abs_diff_eq!(r.energy, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn warm_start_at_stationary_point() {
        let warm = AngleSchedule::new(vec![1.0], vec![-2.0]).unwrap();
        let cfg = OptConfig { warm_start: Some(warm), tolerance: 1e-8, ..OptConfig::default() };
        let r = optimize_with(&mut quadratic, &cfg).unwrap();
        assert!(r.iterations <= 1);
        assert_eq!(r.restarts_used, 1);
    }

    #[test]
    fn failures() {
        let mut nan = |_: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((f64::NAN, vec![0.0, 0.0])) };
        let cfg = OptConfig { restarts: 2, ..OptConfig::default() };
        assert_eq!(optimize_with(&mut nan, &cfg).unwrap_err(), Error::AllStartsFailed(2));
        let cfg = OptConfig { restarts: 0, ..OptConfig::default() };
        assert!(optimize_with(&mut quadratic, &cfg).is_err());
        let cfg = OptConfig { tolerance: 0.0, ..OptConfig::default() };
        assert!(optimize_with(&mut quadratic, &cfg).is_err());
    }

    #[test]
    fn single_edge_reaches_minus_one() {
        let ham = ZHamiltonian::new(2, vec![ZInteraction::unit(&[1, 2]).unwrap()], 0.0).unwrap();
        let cfg = OptConfig { restarts: 3, seed: 1, tolerance: 1e-9, ..OptConfig::default() };
        let r = optimize_angles(&QaoaProblem::new(ham), &cfg, &TruncationConfig::default()).unwrap();
        assert_abs_diff_eq!(r.energy, -1.0, epsilon = 1e-6);
    }
}
