//! Scaling sweep over (n, χ, p) on seeded random 3-regular Max-Cut
//! instances.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use mpsqaoa_core::hamiltonian::{maxcut_post_process, maxcut_to_interactions};
use mpsqaoa_core::qaoa::run_qaoa_observed;
use mpsqaoa_core::{random_regular_graph, AngleSchedule, Error, QaoaProblem, TruncationConfig, ZHamiltonian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

pub const DEGREE: usize = 3;
pub const CSV_HEADER: &str =
    "n,p,chi,cutoff,seed,energy,post_processed_energy,runtime_s,peak_storage_elements,max_bond,discarded_weight,status";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub depths: Vec<usize>,
    pub chis: Vec<usize>,
    pub cutoff: f64,
    pub seed: u64,
    pub timeout: Duration,
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Timeout,
    Error,
}

/// One CSV row. Fields that a timed-out or failed cell never produced are
/// left empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub p: usize,
    pub chi: usize,
    pub cutoff: f64,
    pub seed: u64,
    pub energy: Option<f64>,
    pub post_processed_energy: Option<f64>,
    pub runtime_s: f64,
    pub peak_storage_elements: Option<usize>,
    pub max_bond: Option<usize>,
    pub discarded_weight: Option<f64>,
    pub status: CellStatus,
}

/// The Max-Cut instance shared by every cell with this `n`.
pub fn instance(n: usize, seed: u64) -> Result<ZHamiltonian, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let graph = random_regular_graph(n, DEGREE, &mut rng)?;
    Ok(maxcut_to_interactions(&graph, false)?)
}

/// Angles for `(n, p)`; the same for every χ so that χ comparisons run the
/// same circuit. `β ∈ [0, π)`, `γ ∈ [0, 2π)`.
pub fn angles(n: usize, p: usize, seed: u64) -> AngleSchedule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((1 << 63) | ((n as u64) << 32) | p as u64);
    let betas = (0..p).map(|_| rng.gen_range(0.0..std::f64::consts::PI)).collect();
    let gammas = (0..p).map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI)).collect();
    AngleSchedule::new(betas, gammas).expect("p >= 1 and finite angles")
}

pub fn run_cell(
    ham: &ZHamiltonian,
    n: usize,
    p: usize,
    chi: usize,
    cutoff: f64,
    seed: u64,
    timeout: Duration,
) -> Result<BenchRecord, CliError> {
    let trunc = TruncationConfig::new(cutoff, chi)?;
    let problem = QaoaProblem::new(ham.clone());
    let schedule = angles(n, p, seed);
    let mut record = BenchRecord {
        n,
        p,
        chi,
        cutoff,
        seed,
        energy: None,
        post_processed_energy: None,
        runtime_s: 0.0,
        peak_storage_elements: None,
        max_bond: None,
        discarded_weight: None,
        status: CellStatus::Ok,
    };
    let start = Instant::now();
    let outcome = run_qaoa_observed(&problem, &schedule, &trunc, |_| start.elapsed() < timeout)
        .and_then(|(state, metrics)| Ok((state.expectation_hamiltonian(ham)?, state, metrics)));
    record.runtime_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok((energy, state, metrics)) => {
            record.energy = Some(energy);
            record.post_processed_energy = Some(maxcut_post_process(energy, ham));
            record.peak_storage_elements = Some(metrics.peak_storage_elements);
            record.max_bond = Some(state.max_bond_reached());
            record.discarded_weight = Some(metrics.cumulative_discarded_weight);
        }
        Err(Error::Cancelled) => {
            log::warn!("cell n={n} p={p} chi={chi} timed out after {:.1} s", record.runtime_s);
            record.status = CellStatus::Timeout;
        }
        Err(e) => {
            log::error!("cell n={n} p={p} chi={chi} failed: {e}");
            record.status = CellStatus::Error;
        }
    }
    Ok(record)
}

/// Runs every cell, `jobs` at a time. Rows come back in (n, χ, p) order
/// regardless of completion order.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    if config.sizes.is_empty() || config.depths.is_empty() || config.chis.is_empty() {
        return Err(CliError::Usage("sizes, depths and chis must be non-empty".into()));
    }
    if config.depths.contains(&0) || config.chis.contains(&0) {
        return Err(CliError::Usage("depths and chis must be positive".into()));
    }
    TruncationConfig::new(config.cutoff, 1)?;
    let mut hams = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        hams.push(instance(n, config.seed)?);
    }
    let mut cells = Vec::new();
    for (i, &n) in config.sizes.iter().enumerate() {
        for &chi in &config.chis {
            for &p in &config.depths {
                cells.push((i, n, chi, p));
            }
        }
    }
    let results: Vec<Mutex<Option<Result<BenchRecord, CliError>>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.clamp(1, cells.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, n, chi, p)) = cells.get(k) else { break };
                let r = run_cell(&hams[i], n, p, chi, config.cutoff, config.seed, config.timeout);
                *results[k].lock().unwrap() = Some(r);
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().expect("every cell ran")).collect()
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`; `None` with fewer than
/// two distinct `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if xs.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LinearFit { slope, intercept, r_squared })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthFit {
    pub n: usize,
    pub chi: usize,
    pub points: usize,
    /// Runtime (s) against p.
    pub fit: Option<LinearFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiRatio {
    pub n: usize,
    pub p: usize,
    pub chi_low: usize,
    pub chi_high: usize,
    pub runtime_ratio: f64,
    pub storage_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub cells: usize,
    pub ok: usize,
    pub timeouts: usize,
    pub errors: usize,
    pub depth_fits: Vec<DepthFit>,
    /// Consecutive rungs of the χ ladder, both cells completed.
    pub chi_ratios: Vec<ChiRatio>,
}

pub fn summarize(records: &[BenchRecord]) -> Summary {
    let count = |s: CellStatus| records.iter().filter(|r| r.status == s).count();
    let ok: Vec<&BenchRecord> = records.iter().filter(|r| r.status == CellStatus::Ok).collect();

    let mut keys: Vec<(usize, usize)> = records.iter().map(|r| (r.n, r.chi)).collect();
    keys.dedup();
    let depth_fits = keys
        .iter()
        .map(|&(n, chi)| {
            let pts: Vec<&&BenchRecord> = ok.iter().filter(|r| r.n == n && r.chi == chi).collect();
            let xs: Vec<f64> = pts.iter().map(|r| r.p as f64).collect();
            let ys: Vec<f64> = pts.iter().map(|r| r.runtime_s).collect();
            DepthFit { n, chi, points: pts.len(), fit: linear_fit(&xs, &ys) }
        })
        .collect();

    let mut chi_ratios = Vec::new();
    for low in &ok {
        let next_chi = ok.iter().filter(|r| r.n == low.n && r.p == low.p && r.chi > low.chi).map(|r| r.chi).min();
        let Some(high) = next_chi.and_then(|c| ok.iter().find(|r| r.n == low.n && r.p == low.p && r.chi == c)) else {
            continue;
        };
        chi_ratios.push(ChiRatio {
            n: low.n,
            p: low.p,
            chi_low: low.chi,
            chi_high: high.chi,
            runtime_ratio: high.runtime_s / low.runtime_s,
            storage_ratio: high.peak_storage_elements.unwrap_or(0) as f64
                / low.peak_storage_elements.unwrap_or(1).max(1) as f64,
        });
    }
    Summary {
        cells: records.len(),
        ok: count(CellStatus::Ok),
        timeouts: count(CellStatus::Timeout),
        errors: count(CellStatus::Error),
        depth_fits,
        chi_ratios,
    }
}
