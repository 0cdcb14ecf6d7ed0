use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nrp_bench::algorithm::Algorithm;
use nrp_bench::best_known::{best_known, BestKnownBudget};
use nrp_bench::experiment::{run_experiment, BmaSummary, ExperimentSpec};
use nrp_bench::landscape::landscape_scan;
use nrp_bench::trajectory::reduction_trajectory;
use nrp_bench::{BenchError, Result};
use nrp_core::bma::BmaParams;
use nrp_core::instances::{
    format_instance, generate_classic, mine_instance, read_dump, read_instance, ClassicGenSpec, CountRange,
    MinerSpec,
};
use nrp_core::oracle::brute_force_oracle_capped;
use nrp_core::search::{ClimbParams, GaParams, SaParams, SampledParams, SearchOperator};
use nrp_core::{CustomerId, Instance, Solution};

/// Next release problem solvers and experiment tools.
///
/// Results go to stdout as JSON and never contain timings, so repeated
/// invocations with the same seed print identical bytes. Timings go to
/// stderr.
#[derive(Parser)]
#[command(name = "nrp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a classic instance from a preset or a TOML generator spec.
    Gen(GenArgs),
    /// Build an instance from a bug repository dump.
    Mine(MineArgs),
    /// Run one algorithm once.
    Solve(SolveArgs),
    /// Run an experiment described by a TOML file.
    Bench(BenchArgs),
    /// Sample local optima relative to a best-known solution.
    Landscape(LandscapeArgs),
    /// Record customer counts over repeated reduction pairs.
    Trajectory(TrajectoryArgs),
    /// Enumerate a small instance exhaustively.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Preset name (nrp-1 to nrp-5).
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    /// Generator spec in TOML.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Budget as a fraction of the total requirement cost.
    #[arg(long, default_value_t = 0.5)]
    cost_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    /// Tab separated dump: report id, timestamp, severity, commenter ids.
    #[arg(long)]
    dump: PathBuf,
    /// Miner spec in TOML; flags given explicitly override it.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    start_offset: Option<usize>,
    /// Minimum number of commented reports per user.
    #[arg(long)]
    user_min: Option<usize>,
    #[arg(long)]
    user_max: Option<usize>,
    /// Minimum number of commenting users per report.
    #[arg(long)]
    report_min: Option<usize>,
    #[arg(long)]
    report_max: Option<usize>,
    #[arg(long)]
    cost_ratio: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    instance: Option<PathBuf>,
    /// Generate a preset instance instead of reading a file.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    cost_ratio: f64,
    /// Generator seed for --preset.
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
}

impl InstanceArgs {
    fn load(&self) -> Result<(String, Instance)> {
        match (&self.instance, &self.preset) {
            (Some(path), _) => {
                let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
                let inst = read_instance(path)
                    .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
                Ok((name, inst))
            }
            (None, Some(preset)) => {
                let spec = ClassicGenSpec::preset(preset, self.cost_ratio, self.instance_seed)?;
                Ok((spec.instance_name(), generate_classic(&spec)?))
            }
            (None, None) => Err(BenchError::Config("an instance file or preset is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoName {
    Rs,
    Ffhc,
    Shc,
    Sa,
    Mssa,
    Ga,
    Bma,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorName {
    Rs,
    Ffhc,
    Shc,
    Sa,
}

#[derive(Args)]
struct OperatorArgs {
    /// Start temperature of annealing.
    #[arg(long, default_value_t = SaParams::default().start_temperature)]
    t0: f64,
    /// Cooling ratio β of annealing.
    #[arg(long, default_value_t = SaParams::default().cooling_ratio)]
    cooling: f64,
    /// Iterations per annealing run.
    #[arg(long, default_value_t = SaParams::default().iteration_budget)]
    sa_iterations: u64,
    /// Neighbour evaluations per hill climbing run.
    #[arg(long, default_value_t = ClimbParams::default().iteration_budget)]
    climb_iterations: u64,
    /// Neighbours sampled per sampled hill climbing step.
    #[arg(long, default_value_t = SampledParams::default().sample_count)]
    sample_count: usize,
}

impl OperatorArgs {
    fn sa(&self) -> SaParams {
        SaParams { start_temperature: self.t0, cooling_ratio: self.cooling, iteration_budget: self.sa_iterations }
    }

    fn operator(&self, name: OperatorName) -> SearchOperator {
        match name {
            OperatorName::Rs => SearchOperator::Random,
            OperatorName::Ffhc => SearchOperator::FirstFound(ClimbParams { iteration_budget: self.climb_iterations }),
            OperatorName::Shc => SearchOperator::Sampled(SampledParams {
                sample_count: self.sample_count,
                iteration_budget: self.climb_iterations,
            }),
            OperatorName::Sa => SearchOperator::Annealing(self.sa()),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    algo: AlgoName,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    ops: OperatorArgs,
    /// Independent annealing runs of MSSA.
    #[arg(long, default_value_t = 30)]
    restarts: usize,
    #[arg(long, default_value_t = GaParams::default().population_size)]
    population: usize,
    #[arg(long, default_value_t = GaParams::default().elitism_ratio)]
    elitism: f64,
    #[arg(long, default_value_t = GaParams::default().crossover_ratio)]
    crossover: f64,
    #[arg(long, default_value_t = GaParams::default().mutation_ratio)]
    mutation: f64,
    #[arg(long, default_value_t = GaParams::default().max_iterations)]
    generations: u64,
    /// Maximum number of reduction levels.
    #[arg(long, default_value_t = BmaParams::default().alpha)]
    alpha: usize,
    /// Reduction stops once at most this many customers remain.
    #[arg(long, default_value_t = BmaParams::default().beta)]
    beta: usize,
    /// Local optima per reduction level.
    #[arg(long, default_value_t = BmaParams::default().gamma)]
    gamma: usize,
    /// Local search used inside the multilevel solver.
    #[arg(long, value_enum, default_value = "sa")]
    operator: OperatorName,
}

impl SolveArgs {
    fn algorithm(&self) -> Algorithm {
        let op = |name| self.ops.operator(name);
        match self.algo {
            AlgoName::Rs => Algorithm::Rs,
            AlgoName::Ffhc => Algorithm::Ffhc(ClimbParams { iteration_budget: self.ops.climb_iterations }),
            AlgoName::Shc => Algorithm::Shc(SampledParams {
                sample_count: self.ops.sample_count,
                iteration_budget: self.ops.climb_iterations,
            }),
            AlgoName::Sa => Algorithm::Sa(self.ops.sa()),
            AlgoName::Mssa => Algorithm::Mssa { restarts: self.restarts, sa: self.ops.sa() },
            AlgoName::Ga => Algorithm::Ga(GaParams {
                population_size: self.population,
                elitism_ratio: self.elitism,
                crossover_ratio: self.crossover,
                mutation_ratio: self.mutation,
                max_iterations: self.generations,
                rng_seed: self.seed,
            }),
            AlgoName::Bma => Algorithm::Bma(BmaParams {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
                operator: op(self.operator),
                rng_seed: self.seed,
            }),
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment spec in TOML.
    config: PathBuf,
    /// Overrides the spec's output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ReferenceArgs {
    /// Reference solution as JSON `[[customer, 0|1], ...]`; computed from
    /// repeated runs when absent.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Random search runs for the computed reference.
    #[arg(long, default_value_t = BestKnownBudget::default().rs_runs)]
    rs_runs: usize,
    /// Multilevel runs for the computed reference.
    #[arg(long, default_value_t = BestKnownBudget::default().bma_runs)]
    bma_runs: usize,
}

#[derive(Args)]
struct LandscapeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "sa")]
    operator: OperatorName,
    #[command(flatten)]
    ops: OperatorArgs,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    reference: ReferenceArgs,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "sa")]
    operator: OperatorName,
    #[command(flatten)]
    ops: OperatorArgs,
    #[arg(long, default_value_t = 12)]
    pairs: usize,
    #[arg(long, default_value_t = 5)]
    gamma: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest customer count accepted.
    #[arg(long, default_value_t = nrp_core::oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
    /// Also print every optimal solution.
    #[arg(long)]
    all: bool,
}

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    bound: u64,
    algorithm: String,
    seed: u64,
    profit: u64,
    cost: u64,
    evaluations: u64,
    selected: Vec<CustomerId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bma: Option<BmaSummary>,
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn print_json_lines<T: Serialize>(values: &[T]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for v in values {
        serde_json::to_writer(&mut out, v)?;
        writeln!(out)?;
    }
    Ok(())
}

fn emit_text(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let spec = match (&args.preset, &args.spec) {
        (Some(name), _) => ClassicGenSpec::preset(name, args.cost_ratio, args.seed)?,
        (None, Some(path)) => {
            let mut spec = ClassicGenSpec::from_toml(&std::fs::read_to_string(path)?)?;
            spec.rng_seed = args.seed;
            spec.cost_ratio = args.cost_ratio;
            spec
        }
        (None, None) => return Err(BenchError::Config("--preset or --spec is required".into())),
    };
    emit_text(&format_instance(&generate_classic(&spec)?), args.output.as_ref())
}

fn mine(args: MineArgs) -> Result<()> {
    let mut spec = match &args.spec {
        Some(path) => toml::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?,
        None => MinerSpec::default(),
    };
    if let Some(w) = args.window {
        spec.window = w;
    }
    if let Some(o) = args.start_offset {
        spec.start_offset = o;
    }
    let merge = |range: CountRange, min: Option<usize>, max: Option<usize>| {
        CountRange::new(min.unwrap_or(range.min), max.or(range.max))
    };
    spec.user_comments = merge(spec.user_comments, args.user_min, args.user_max);
    spec.report_comments = merge(spec.report_comments, args.report_min, args.report_max);
    if let Some(r) = args.cost_ratio {
        spec.cost_ratio = r;
    }
    if let Some(s) = args.seed {
        spec.rng_seed = s;
    }
    let dump = read_dump(&args.dump)?;
    let mined = mine_instance(&dump, &spec)?;
    emit_text(&format_instance(&mined.instance), args.output.as_ref())
}

fn solve(args: SolveArgs) -> Result<()> {
    let (name, inst) = args.instance.load()?;
    let algorithm = args.algorithm();
    let started = Instant::now();
    let outcome = algorithm.run(&inst, args.seed)?;
    eprintln!("solve time: {:.3} s", started.elapsed().as_secs_f64());
    let run = outcome.run;
    let profit = inst.solution_profit(&run.solution)?;
    let cost = inst.solution_cost(&run.solution)?;
    if profit != run.profit || cost != run.cost || cost > inst.budget() {
        return Err(nrp_core::NrpError::Integrity(format!(
            "solver reported ({}, {}) but the solution evaluates to ({profit}, {cost})",
            run.profit, run.cost
        ))
        .into());
    }
    print_json(&SolveReport {
        instance: name,
        bound: inst.budget(),
        algorithm: algorithm.label().to_string(),
        seed: args.seed,
        profit,
        cost,
        evaluations: run.evaluations,
        selected: run.solution.selected().collect(),
        bma: outcome.bma.map(|b| BmaSummary {
            delta: b.delta,
            levels: b.levels.iter().map(|l| l.summary()).collect(),
            combined_backbone: b.combined_backbone,
        }),
    })
}

#[derive(Serialize)]
struct BenchLine<'a> {
    instance: &'a str,
    bound: u64,
    algorithm: &'a str,
    best: u64,
    average: f64,
    profits: &'a [u64],
    advantages: &'a [(String, f64)],
}

fn bench(args: BenchArgs) -> Result<()> {
    let mut spec = ExperimentSpec::load(&args.config)?;
    if let Some(dir) = args.output_dir {
        spec.output_dir = dir;
    }
    let started = Instant::now();
    let rows = run_experiment(&spec)?;
    eprintln!("bench time: {:.3} s, results in {}", started.elapsed().as_secs_f64(), spec.output_dir.display());
    for row in &rows {
        eprintln!("{} {}: average time {:.3} s", row.instance, row.algorithm, row.avg_time_s);
    }
    let lines: Vec<BenchLine> = rows
        .iter()
        .map(|r| BenchLine {
            instance: &r.instance,
            bound: r.bound,
            algorithm: &r.algorithm,
            best: r.best,
            average: r.average,
            profits: &r.profits,
            advantages: &r.advantages,
        })
        .collect();
    print_json_lines(&lines)
}

fn reference(inst: &Instance, args: &ReferenceArgs, seed: u64) -> Result<Solution> {
    match &args.reference {
        Some(path) => Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?),
        None => {
            let budget = BestKnownBudget { rs_runs: args.rs_runs, bma_runs: args.bma_runs, ..Default::default() };
            Ok(best_known(inst, &budget, seed)?.solution)
        }
    }
}

#[derive(Serialize)]
struct LandscapeLine {
    seed: u64,
    n_dist: f64,
    n_diff: f64,
    agreement: usize,
    profit: u64,
}

fn landscape(args: LandscapeArgs) -> Result<()> {
    let (_, inst) = args.instance.load()?;
    let best = reference(&inst, &args.reference, args.seed)?;
    let operator = args.ops.operator(args.operator);
    operator.validate()?;
    let points = landscape_scan(&inst, &operator, args.runs, &best, args.seed)?;
    let lines: Vec<LandscapeLine> = points
        .iter()
        .map(|p| LandscapeLine { seed: p.seed, n_dist: p.n_dist, n_diff: p.n_diff, agreement: p.agreement, profit: p.profit })
        .collect();
    print_json_lines(&lines)
}

fn trajectory(args: TrajectoryArgs) -> Result<()> {
    let (_, inst) = args.instance.load()?;
    let operator = args.ops.operator(args.operator);
    operator.validate()?;
    if args.pairs < 1 || args.gamma < 1 {
        return Err(BenchError::Config("pairs and gamma must be at least 1".into()));
    }
    print_json(&reduction_trajectory(&inst, args.pairs, args.gamma, &operator, args.seed)?)
}

#[derive(Serialize)]
struct OracleLine {
    optimum_profit: u64,
    num_optimal: usize,
    exact_backbone: nrp_core::backbone::Backbone,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_solutions: Option<Vec<Solution>>,
}

fn oracle(args: OracleArgs) -> Result<()> {
    let (_, inst) = args.instance.load()?;
    let report = brute_force_oracle_capped(&inst, args.cap)?;
    print_json(&OracleLine {
        optimum_profit: report.optimum_profit,
        num_optimal: report.num_optimal(),
        exact_backbone: report.exact_backbone.clone(),
        optimal_solutions: args.all.then(|| report.optimal_solutions().collect()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Mine(a) => mine(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Landscape(a) => landscape(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
