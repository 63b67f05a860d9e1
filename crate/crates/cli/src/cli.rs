use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpsqaoa_core::hamiltonian::{
    maxcut_post_process, maxcut_to_interactions, maxsat_to_interactions, mis_post_process, mis_to_interactions,
};
use mpsqaoa_core::{
    optimize_angles, random_regular_graph, run_qaoa, AngleSchedule, MpsState, OptConfig, QaoaProblem, RunMetrics,
    TruncationConfig, ZHamiltonian,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench::{self, BenchConfig};
use crate::error::{read_file, write_file, CliError};
use crate::formats;

#[derive(Debug, Parser)]
#[command(name = "mpsqaoa", version, about = "MPS simulation of QAOA on diagonal Z-product Hamiltonians")]
pub struct Cli {
    /// Log more (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an interactions file from a graph or CNF formula.
    Convert(ConvertArgs),
    /// Evaluate the QAOA energy at given angles.
    Solve(SolveArgs),
    /// Search for good angles.
    Optimize(OptimizeArgs),
    /// Write a seeded random regular graph as an edge list.
    GenGraph(GenGraphArgs),
    /// Sweep sizes, depths and bond dimensions on random 3-regular Max-Cut.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Maxcut,
    Mis,
    Maxsat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PostProcess {
    Maxcut,
    Mis,
    None,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Edge list (maxcut, mis) or DIMACS CNF (maxsat).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Independent-set penalty.
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    /// Ignore edge weights in the Max-Cut Hamiltonian.
    #[arg(long)]
    pub unweighted: bool,
    /// Where to write the JSON; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TruncArgs {
    /// Relative discarded-weight cutoff per truncation.
    #[arg(long, default_value_t = 1e-10)]
    pub cutoff: f64,
    /// Bond dimension cap χ.
    #[arg(long, default_value_t = 128)]
    pub maxdim: usize,
}

impl TruncArgs {
    fn config(&self) -> Result<TruncationConfig, CliError> {
        Ok(TruncationConfig::new(self.cutoff, self.maxdim)?)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Interactions JSON.
    #[arg(long)]
    pub problem: PathBuf,
    /// Flat `β₁,..,β_p,γ₁,..,γ_p`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub angles: Vec<f64>,
    #[command(flatten)]
    pub trunc: TruncArgs,
    #[arg(long, value_enum, default_value = "none")]
    pub post_process: PostProcess,
    /// Write the final MPS tensors as JSON.
    #[arg(long)]
    pub dump_state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Maximize the energy (default is to minimize).
    #[arg(long, conflicts_with = "min")]
    pub max: bool,
    #[arg(long)]
    pub min: bool,
    /// Total number of local searches.
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Flat starting angles, 2p values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub warm_start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
    /// Gradient-norm stopping tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub trunc: TruncArgs,
    #[arg(long, value_enum, default_value = "none")]
    pub post_process: PostProcess,
    /// Include the per-iteration trace of the winning start.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach weights drawn uniformly from (0, 1].
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub depths: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub chis: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seconds before a cell is abandoned.
    #[arg(long, default_value_t = 300.0)]
    pub timeout_per_cell: f64,
    /// Cells run concurrently; timings are cleanest with 1.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV destination.
    #[arg(long)]
    pub output: PathBuf,
    /// Summary JSON destination; stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_problem(path: &PathBuf) -> Result<ZHamiltonian, CliError> {
    formats::parse_interactions(&read_file(path)?)
}

fn post_process(kind: PostProcess, energy: f64, ham: &ZHamiltonian) -> Option<f64> {
    match kind {
        PostProcess::Maxcut => Some(maxcut_post_process(energy, ham)),
        PostProcess::Mis => Some(mis_post_process(energy, ham)),
        PostProcess::None => None,
    }
}

/// Runs one command and returns what belongs on stdout.
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Convert(a) => convert(a),
        Command::Solve(a) => solve(a),
        Command::Optimize(a) => optimize(a),
        Command::GenGraph(a) => gen_graph(a),
        Command::Benchmark(a) => benchmark(a),
    }
}

fn convert(a: &ConvertArgs) -> Result<String, CliError> {
    let text = read_file(&a.input)?;
    let ham = match a.problem {
        ProblemKind::Maxcut => maxcut_to_interactions(&formats::parse_edge_list(&text)?, !a.unweighted)?,
        ProblemKind::Mis => mis_to_interactions(&formats::parse_edge_list(&text)?, a.lambda)?,
        ProblemKind::Maxsat => {
            let cnf = formats::parse_dimacs(&text)?;
            maxsat_to_interactions(cnf.n_vars, &cnf.clauses, &vec![1.0; cnf.clauses.len()])?
        }
    };
    let json = formats::write_interactions(&ham);
    let report = format!("terms: {}\nconstant: {}\n", ham.terms().len(), ham.constant());
    match &a.output {
        Some(path) => {
            write_file(path, &json)?;
            Ok(report)
        }
        None => {
            eprint!("{report}");
            Ok(json)
        }
    }
}

#[derive(Serialize)]
struct MetricsOut {
    runtime_s: f64,
    peak_storage_elements: usize,
    max_bond: usize,
    max_bond_per_layer: Vec<usize>,
    discarded_weight: f64,
}

impl MetricsOut {
    fn new(m: &RunMetrics, state: &MpsState) -> Self {
        Self {
            runtime_s: m.wall_seconds,
            peak_storage_elements: m.peak_storage_elements,
            max_bond: state.max_bond_reached(),
            max_bond_per_layer: m.max_bond_per_layer.clone(),
            discarded_weight: m.cumulative_discarded_weight,
        }
    }
}

#[derive(Serialize)]
struct SolveOut {
    n: usize,
    p: usize,
    cutoff: f64,
    maxdim: usize,
    energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    post_processed: Option<f64>,
    metrics: MetricsOut,
}

#[derive(Serialize)]
struct SiteDump {
    shape: [usize; 3],
    /// Row-major over the shape, interleaved re/im.
    data: Vec<f64>,
}

#[derive(Serialize)]
struct StateDump {
    n_sites: usize,
    center: Option<usize>,
    sites: Vec<SiteDump>,
}

fn dump_state(state: &MpsState) -> Result<String, CliError> {
    let mut sites = Vec::with_capacity(state.n_sites());
    for k in 0..state.n_sites() {
        let ((dl, d, dr), values) = state.site_tensor(k)?;
        sites.push(SiteDump { shape: [dl, d, dr], data: values.iter().flat_map(|z| [z.re, z.im]).collect() });
    }
    Ok(to_json(&StateDump { n_sites: state.n_sites(), center: state.center(), sites }))
}

fn solve(a: &SolveArgs) -> Result<String, CliError> {
    if a.angles.is_empty() || a.angles.len() % 2 != 0 {
        return Err(CliError::Usage(format!(
            "--angles needs an even number of values [betas..., gammas...], got {}",
            a.angles.len()
        )));
    }
    let trunc = a.trunc.config()?;
    let ham = load_problem(&a.problem)?;
    let schedule = AngleSchedule::from_flat(&a.angles)?;
    let problem = QaoaProblem::new(ham.clone());
    let start = std::time::Instant::now();
    let (state, mut metrics) = run_qaoa(&problem, &schedule, &trunc)?;
    let energy = state.expectation_hamiltonian(&ham)?;
    metrics.wall_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &a.dump_state {
        write_file(path, &dump_state(&state)?)?;
    }
    Ok(to_json(&SolveOut {
        n: ham.n_qubits(),
        p: schedule.p(),
        cutoff: trunc.cutoff,
        maxdim: trunc.maxdim,
        energy,
        post_processed: post_process(a.post_process, energy, &ham),
        metrics: MetricsOut::new(&metrics, &state),
    }))
}

#[derive(Serialize)]
struct TraceOut {
    energy: f64,
    gradient_norm: f64,
}

#[derive(Serialize)]
struct OptimizeOut {
    direction: &'static str,
    energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    post_processed: Option<f64>,
    /// Flat `[β..., γ...]`.
    angles: Vec<f64>,
    iterations: usize,
    final_gradient_norm: f64,
    restarts_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceOut>>,
}

fn optimize(a: &OptimizeArgs) -> Result<String, CliError> {
    let warm_start = match &a.warm_start {
        Some(flat) if flat.len() != 2 * a.p => {
            return Err(CliError::Usage(format!("--warm-start needs 2p = {} values, got {}", 2 * a.p, flat.len())));
        }
        Some(flat) => Some(AngleSchedule::from_flat(flat)?),
        None => None,
    };
    let trunc = a.trunc.config()?;
    let ham = load_problem(&a.problem)?;
    let config = OptConfig {
        p: a.p,
        maximize: a.max,
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        tolerance: a.tolerance,
        warm_start,
        seed: a.seed,
    };
    let r = optimize_angles(&QaoaProblem::new(ham.clone()), &config, &trunc)?;
    Ok(to_json(&OptimizeOut {
        direction: if a.max { "max" } else { "min" },
        energy: r.energy,
        post_processed: post_process(a.post_process, r.energy, &ham),
        angles: r.angles.to_flat(),
        iterations: r.iterations,
        final_gradient_norm: r.final_gradient_norm,
        restarts_used: r.restarts_used,
        trace: a
            .trace
            .then(|| r.trace.iter().map(|t| TraceOut { energy: t.energy, gradient_norm: t.gradient_norm }).collect()),
    }))
}

fn gen_graph(a: &GenGraphArgs) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut graph = random_regular_graph(a.n, a.degree, &mut rng)?;
    if a.weighted {
        let edges: Vec<_> = graph.edges().iter().map(|&(u, v, _)| (u, v, 1.0 - rng.gen::<f64>())).collect();
        graph = mpsqaoa_core::GraphSpec::new(a.n, edges)?;
    }
    let text = formats::write_edge_list(&graph, a.weighted);
    match &a.output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn benchmark(a: &BenchmarkArgs) -> Result<String, CliError> {
    if !(a.timeout_per_cell >= 0.0 && a.timeout_per_cell.is_finite()) {
        return Err(CliError::Usage("--timeout-per-cell must be a non-negative number of seconds".into()));
    }
    let config = BenchConfig {
        sizes: a.sizes.clone(),
        depths: a.depths.clone(),
        chis: a.chis.clone(),
        cutoff: a.cutoff,
        seed: a.seed,
        timeout: Duration::from_secs_f64(a.timeout_per_cell),
        jobs: a.jobs.max(1),
    };
    let records = bench::run_benchmark(&config)?;
    write_file(&a.output, &bench::to_csv(&records)?)?;
    let summary = to_json(&bench::summarize(&records));
    match &a.summary {
        Some(path) => {
            write_file(path, &summary)?;
            Ok(String::new())
        }
        None => Ok(summary),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
    match execute(&cli.command) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
