use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qap_bench::{
    emit_chart, emit_report, format_duration, relative_difference, run_bench, BenchPlan, ChartMetric, ReportFormat,
    ReportOptions,
};
use qap_core::ga::GaConfig;
use qap_core::qaplib::{self, best_known, load_instance, load_solution, validate_solution, PermReading};
use qap_core::sa::SaConfig;
use qap_core::ts::TsConfig;
use qap_core::{run, Cost, Instance, SolverConfig, SolverId, StopCondition};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qap", version, about = "Quadratic assignment solvers (GA, TS, SA) and QAPLIB benchmark harness")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Print every solver default (parameters and iteration budgets) as JSON and exit.
    #[arg(long)]
    defaults: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Run a benchmark plan (instances x solvers x seeds).
    Bench(BenchArgs),
    /// Evaluate a QAPLIB solution file against its instance.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Print instance size and matrix statistics.
    Info { instance: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Ga,
    Ts,
    Sa,
}

impl From<SolverArg> for SolverId {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Ga => SolverId::Ga,
            SolverArg::Ts => SolverId::Ts,
            SolverArg::Sa => SolverId::Sa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Markdown,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "ts")]
    solver: SolverArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Iteration budget; defaults to the solver's own budget.
    #[arg(long)]
    max_iters: Option<u64>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    /// Stop as soon as the best cost is at or below this value.
    #[arg(long)]
    target: Option<Cost>,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
    #[command(flatten)]
    params: SolverParams,
}

#[derive(Args, Default)]
struct SolverParams {
    #[arg(long, help_heading = "GA")]
    population_size: Option<usize>,
    #[arg(long, help_heading = "GA")]
    crossover_rate: Option<f64>,
    #[arg(long, help_heading = "GA")]
    mutation_rate: Option<f64>,
    #[arg(long, help_heading = "GA")]
    tournament_size: Option<usize>,
    #[arg(long, help_heading = "GA")]
    elite_count: Option<usize>,
    /// Tabu tenure (default: n).
    #[arg(long, help_heading = "TS")]
    tenure: Option<usize>,
    #[arg(long, help_heading = "TS")]
    candidate_fraction: Option<f64>,
    /// Starting temperature (default: calibrated).
    #[arg(long, help_heading = "SA")]
    initial_temperature: Option<f64>,
    #[arg(long, help_heading = "SA")]
    alpha: Option<f64>,
    #[arg(long, help_heading = "SA")]
    epsilon: Option<f64>,
    /// Proposals per temperature level (default: 100 n).
    #[arg(long, help_heading = "SA")]
    moves_per_temperature: Option<usize>,
}

impl SolverParams {
    fn given(&self) -> [(SolverId, &'static str, bool); 11] {
        [
            (SolverId::Ga, "--population-size", self.population_size.is_some()),
            (SolverId::Ga, "--crossover-rate", self.crossover_rate.is_some()),
            (SolverId::Ga, "--mutation-rate", self.mutation_rate.is_some()),
            (SolverId::Ga, "--tournament-size", self.tournament_size.is_some()),
            (SolverId::Ga, "--elite-count", self.elite_count.is_some()),
            (SolverId::Ts, "--tenure", self.tenure.is_some()),
            (SolverId::Ts, "--candidate-fraction", self.candidate_fraction.is_some()),
            (SolverId::Sa, "--initial-temperature", self.initial_temperature.is_some()),
            (SolverId::Sa, "--alpha", self.alpha.is_some()),
            (SolverId::Sa, "--epsilon", self.epsilon.is_some()),
            (SolverId::Sa, "--moves-per-temperature", self.moves_per_temperature.is_some()),
        ]
    }

    fn config(&self, solver: SolverId) -> Result<SolverConfig> {
        if let Some((owner, flag, _)) = self.given().into_iter().find(|&(owner, _, set)| set && owner != solver) {
            bail!("{flag} is a {owner} parameter and cannot be used with --solver {}", solver.as_str().to_lowercase());
        }
        let config = match solver {
            SolverId::Ga => {
                let d = GaConfig::default();
                SolverConfig::Ga(GaConfig {
                    population_size: self.population_size.unwrap_or(d.population_size),
                    crossover_rate: self.crossover_rate.unwrap_or(d.crossover_rate),
                    mutation_rate: self.mutation_rate.unwrap_or(d.mutation_rate),
                    tournament_size: self.tournament_size.unwrap_or(d.tournament_size),
                    elite_count: self.elite_count.unwrap_or(d.elite_count),
                })
            }
            SolverId::Ts => {
                let d = TsConfig::default();
                SolverConfig::Ts(TsConfig {
                    tenure: self.tenure.or(d.tenure),
                    candidate_fraction: self.candidate_fraction.unwrap_or(d.candidate_fraction),
                })
            }
            SolverId::Sa => {
                let d = SaConfig::default();
                SolverConfig::Sa(SaConfig {
                    initial_temperature: self.initial_temperature.or(d.initial_temperature),
                    alpha: self.alpha.unwrap_or(d.alpha),
                    epsilon: self.epsilon.unwrap_or(d.epsilon),
                    moves_per_temperature: self.moves_per_temperature.or(d.moves_per_temperature),
                })
            }
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["plan", "table1"])))]
struct BenchArgs {
    /// JSON plan file.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// The built-in twelve-instance plan.
    #[arg(long)]
    table1: bool,
    /// Comma-separated seeds, replacing the plan's.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Output directory; the report goes to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Also write diff and time SVG charts (requires --out).
    #[arg(long, requires = "out")]
    charts: bool,
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long)]
    max_iters: Option<u64>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    /// Leave elapsed-time columns out of the report.
    #[arg(long)]
    no_timing: bool,
    /// Directory holding <name>.dat files (default: $QAP_DATA_DIR or data/qaplib).
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let outcome = if cli.defaults {
        print_defaults(&mut stdout)
    } else {
        match cli.command {
            Some(Command::Solve(args)) => solve(&args, &mut stdout),
            Some(Command::Bench(args)) => bench(&args, &mut stdout),
            Some(Command::Validate { instance, solution }) => validate(&instance, &solution, &mut stdout),
            Some(Command::Info { instance }) => info(&instance, &mut stdout),
            None => Err(anyhow::anyhow!("no subcommand given; see --help")),
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn print_defaults(out: &mut impl Write) -> Result<ExitCode> {
    let solvers: Vec<_> = SolverId::ALL
        .iter()
        .map(|&id| {
            json!({
                "solver": id,
                "max_iterations": id.default_max_iterations(),
                "config": SolverConfig::default_for(id),
            })
        })
        .collect();
    let doc = json!({
        "solvers": solvers,
        "notes": {
            "ts.tenure": "null means n",
            "sa.initial_temperature": "null means calibrated from 100 random swaps for 80% uphill acceptance",
            "sa.moves_per_temperature": "null means 100 * n",
        },
        "bench": {
            "seeds": qap_bench::plan::DEFAULT_SEEDS,
            "table1_time_limit_ms": qap_bench::plan::TABLE1_CELL_LIMIT_MS,
            "parallelism": 1,
        },
        "data_dir_env": qaplib::DATA_DIR_ENV,
        "default_data_dir": qaplib::DEFAULT_DATA_DIR,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn load(path: &Path) -> Result<Instance> {
    load_instance(path).with_context(|| format!("cannot load instance {}", path.display()))
}

fn solve(args: &SolveArgs, out: &mut impl Write) -> Result<ExitCode> {
    let solver = SolverId::from(args.solver);
    let config = args.params.config(solver)?;
    let inst = load(&args.instance)?;
    let mut stop = StopCondition {
        max_iterations: Some(args.max_iters.unwrap_or(solver.default_max_iterations())),
        time_limit_ms: args.time_limit_ms,
        target_quality: args.target,
    };
    if args.max_iters.is_none() && args.time_limit_ms.is_some() {
        stop.max_iterations = None;
    }
    let result = run(&inst, &config, &stop, args.seed)?;
    let known = best_known(inst.name()).ok();
    let diff = known.map(|k| relative_difference(result.best_cost, k)).transpose()?;

    match args.output {
        Output::Json => {
            let doc = json!({
                "instance": inst.name(),
                "n": inst.n(),
                "solver": solver,
                "seed": args.seed,
                "config": config,
                "best_quality": result.best_cost,
                "best_known": known,
                "diff_percent": diff,
                "iterations": result.iterations_executed,
                "elapsed_ms": result.elapsed_ms,
                "permutation": result.best,
                "trace": result.trace,
            });
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Output::Text => {
            writeln!(out, "instance      {} (n = {})", inst.name(), inst.n())?;
            writeln!(out, "solver        {solver} (seed {})", args.seed)?;
            writeln!(out, "best quality  {}", result.best_cost)?;
            if let (Some(k), Some(d)) = (known, diff) {
                writeln!(out, "best known    {k}")?;
                writeln!(out, "diff          {d:.2}%")?;
            }
            writeln!(out, "iterations    {}", result.iterations_executed)?;
            writeln!(out, "elapsed       {} ({} ms)", format_duration(result.elapsed_ms), result.elapsed_ms)?;
            let one_based: Vec<String> = result.best.as_slice().iter().map(|l| (l + 1).to_string()).collect();
            writeln!(out, "permutation   {}", one_based.join(" "))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(args: &BenchArgs, out: &mut impl Write) -> Result<ExitCode> {
    let mut plan = match &args.plan {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read plan {}", path.display()))?;
            BenchPlan::from_json(&text).with_context(|| format!("bad plan {}", path.display()))?
        }
        None => BenchPlan::table1(),
    };
    if let Some(seeds) = &args.seeds {
        plan.seeds = seeds.clone();
    }
    if let Some(p) = args.parallelism {
        plan.parallelism = p;
    }
    if args.max_iters.is_some() {
        plan.max_iterations = args.max_iters;
    }
    if args.time_limit_ms.is_some() {
        plan.time_limit_ms = args.time_limit_ms;
    }
    if args.data_dir.is_some() {
        plan.data_dir = args.data_dir.clone();
    }
    plan.validate()?;

    let outcome = run_bench(&plan)?;
    for f in &outcome.failures {
        eprintln!("error: {} / {} / seed {}: {}", f.instance, f.solver, f.seed, f.error);
    }
    if outcome.rows.is_empty() {
        bail!("no cell of the plan completed");
    }

    let format = ReportFormat::from(args.format);
    let report = emit_report(&outcome, format, ReportOptions { timing: !args.no_timing })?;
    match &args.out {
        None => out.write_all(&report)?,
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join(format!("report.{}", format.extension()));
            fs::write(&path, &report).with_context(|| format!("cannot write {}", path.display()))?;
            let mut written = vec![path];
            if args.charts {
                for metric in [ChartMetric::Diff, ChartMetric::Time] {
                    let path = dir.join(format!("chart_{}.svg", metric.as_str()));
                    fs::write(&path, emit_chart(&outcome.summary, metric)?)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    written.push(path);
                }
            }
            for p in written {
                writeln!(out, "{}", p.display())?;
            }
        }
    }

    if outcome.is_success() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: {} of {} cells failed", outcome.failures.len(), outcome.failures.len() + outcome.rows.len());
        Ok(ExitCode::FAILURE)
    }
}

fn validate(instance: &Path, solution: &Path, out: &mut impl Write) -> Result<ExitCode> {
    let inst = load(instance)?;
    let sol = load_solution(solution).with_context(|| format!("cannot load solution {}", solution.display()))?;
    let check = validate_solution(&inst, &sol)?;
    let reading = match check.reading {
        PermReading::FacilityToLocation => "facility-to-location",
        PermReading::LocationToFacility => "location-to-facility",
    };
    writeln!(out, "cost       {}", check.cost)?;
    writeln!(out, "objective  {}", check.header_objective)?;
    writeln!(out, "reading    {reading}")?;
    if check.matches() {
        writeln!(out, "MATCH")?;
        Ok(ExitCode::SUCCESS)
    } else {
        writeln!(out, "MISMATCH")?;
        eprintln!(
            "warning: evaluated cost {} differs from the solution file's objective {}",
            check.cost, check.header_objective
        );
        Ok(ExitCode::FAILURE)
    }
}

struct Stats {
    min: Cost,
    max: Cost,
    mean: f64,
    zeros: f64,
}

fn stats(values: &[Cost]) -> Stats {
    let len = values.len() as f64;
    Stats {
        min: values.iter().copied().min().unwrap_or(0),
        max: values.iter().copied().max().unwrap_or(0),
        mean: values.iter().map(|&v| v as f64).sum::<f64>() / len,
        zeros: values.iter().filter(|&&v| v == 0).count() as f64 / len * 100.0,
    }
}

fn info(instance: &Path, out: &mut impl Write) -> Result<ExitCode> {
    let inst = load(instance)?;
    writeln!(out, "instance   {}", inst.name())?;
    writeln!(out, "n          {}", inst.n())?;
    writeln!(out, "symmetric  {}", inst.is_symmetric())?;
    for (label, values) in [("flow", inst.flow_matrix()), ("distance", inst.distance_matrix())] {
        let s = stats(values);
        writeln!(
            out,
            "{label:<10} min {} max {} mean {:.3} zeros {:.1}%",
            s.min, s.max, s.mean, s.zeros
        )?;
    }
    match best_known(inst.name()) {
        Ok(k) => writeln!(out, "best known {k}")?,
        Err(_) => writeln!(out, "best known n/a")?,
    }
    Ok(ExitCode::SUCCESS)
}
