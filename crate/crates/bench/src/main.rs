use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use subcont_bench::check::{build_function, property_check, CHECK_DIM};
use subcont_bench::config::{
    BudgetAxis, ExperimentConfig, ExperimentKind, MethodKind, PropertyCheckSpec, PropertyKind,
};
use subcont_bench::experiment::{config_from_manifest, run_experiment, summary_table, ExperimentOutput};
use subcont_bench::oracle::grid_brute_force;
use subcont_core::zoo::gen_monotone_nqp;
use subcont_core::Domain;

#[derive(Parser)]
#[command(name = "subcont", version, about = "Continuous submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write traces, summary and manifest.
    Run(RunArgs),
    /// Sample a lattice property of a function and print a JSON verdict.
    Check(CheckArgs),
    /// Grid brute-force maximum of a small instance.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// monotone_nqp, nonmonotone_nqp, budget_allocation, revenue or property_check.
    #[arg(long, required_unless_present = "manifest")]
    experiment: Option<ExperimentKind>,
    /// Re-run the configuration stored in an earlier manifest.
    #[arg(long, conflicts_with = "experiment")]
    manifest: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Iterations of Frank-Wolfe and projected gradient.
    #[arg(long = "K", visible_alias = "iterations")]
    iterations: Option<usize>,
    /// Frank-Wolfe step size; 1/K by default.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Number of repetitions.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long = "base-seed", env = "SUBCONT_SEED")]
    base_seed: Option<u64>,
    /// Samples for the random baselines.
    #[arg(long)]
    ks: Option<usize>,
    /// Projected-gradient step sizes.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<f64>>,
    /// Values of the swept quantity.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<MethodKind>>,
    /// Edge-list file for budget_allocation or revenue.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Points per dimension of the grid oracle.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
    /// Revenue weights alpha,beta,gamma.
    #[arg(long = "revenue-weights", value_delimiter = ',', num_args = 3)]
    revenue_weights: Option<Vec<f64>>,
    #[arg(long = "budget-axis")]
    budget_axis: Option<BudgetAxisArg>,
    #[arg(long = "fixed-budget")]
    fixed_budget: Option<f64>,
    #[arg(long)]
    advertisers: Option<usize>,
    /// property_check only.
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    property: Option<PropertyKind>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum BudgetAxisArg {
    Advertiser,
    Volume,
}

#[derive(Args)]
struct CheckArgs {
    /// Zoo function name or edge-list path.
    #[arg(long)]
    function: String,
    #[arg(long)]
    property: PropertyKind,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, env = "SUBCONT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = CHECK_DIM)]
    n: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value = "nonmonotone_nqp")]
    function: String,
    #[arg(long)]
    n: usize,
    /// Points per dimension.
    #[arg(long)]
    grid: usize,
    #[arg(long, env = "SUBCONT_SEED", default_value_t = 0)]
    seed: u64,
    /// Constraint rows, monotone_nqp only.
    #[arg(long, default_value_t = 1)]
    m: usize,
}

fn run_config(a: RunArgs) -> anyhow::Result<ExperimentConfig> {
    // a stored config is reproduced verbatim; only the output directory moves
    if let Some(path) = &a.manifest {
        let mut cfg = config_from_manifest(path)?;
        cfg.output_dir = a.out;
        return Ok(cfg);
    }
    let Some(kind) = a.experiment else {
        anyhow::bail!("--experiment or --manifest is required");
    };
    let mut cfg = ExperimentConfig::new(kind, &a.out);
    macro_rules! set {
        ($($field:ident = $value:expr),* $(,)?) => { $(if let Some(v) = $value { cfg.$field = v; })* };
    }
    set!(
        n = a.n,
        m = a.m,
        iterations = a.iterations,
        delta = a.delta,
        seeds = a.seeds,
        base_seed = a.base_seed,
        k_s = a.ks,
        steps = a.steps,
        sweep = a.sweep,
        methods = a.methods,
        density = a.density,
        fixed_budget = a.fixed_budget,
        advertisers = a.advertisers,
    );
    if a.gamma.is_some() {
        cfg.gamma = a.gamma;
    }
    if a.data.is_some() {
        cfg.data_path = a.data;
    }
    if a.grid.is_some() {
        cfg.grid_points = a.grid;
    }
    if let Some(w) = a.revenue_weights {
        cfg.revenue_weights = [w[0], w[1], w[2]];
    }
    if let Some(axis) = a.budget_axis {
        cfg.budget_axis = match axis {
            BudgetAxisArg::Advertiser => BudgetAxis::Advertiser,
            BudgetAxisArg::Volume => BudgetAxis::Volume,
        };
    }
    if cfg.experiment == ExperimentKind::PropertyCheck && cfg.property.is_none() {
        let (Some(function), Some(property)) = (a.function, a.property) else {
            anyhow::bail!("property_check needs --function and --property");
        };
        cfg.property = Some(PropertyCheckSpec {
            function,
            property,
            dim: a.n.unwrap_or(CHECK_DIM),
            trials: a.trials,
            seed: cfg.base_seed,
        });
    }
    Ok(cfg)
}

fn oracle(a: OracleArgs) -> anyhow::Result<serde_json::Value> {
    let (f, domain): (Box<dyn subcont_core::Objective>, Domain) = if a.function == "monotone_nqp" {
        let (f, p) = gen_monotone_nqp(a.n, a.m, a.seed)?;
        (Box::new(f), Domain::Polytope(p))
    } else {
        let (f, b) = build_function(&a.function, a.n, a.seed)?;
        (f, Domain::Box(b))
    };
    let (x, value) = grid_brute_force(f.as_ref(), &domain, a.grid)?;
    Ok(serde_json::json!({
        "function": a.function,
        "n": domain.dim(),
        "grid": a.grid,
        "seed": a.seed,
        "x_star": x.as_slice(),
        "f_star": value,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run_config(a).and_then(|cfg| {
            let out = cfg.output_dir.clone();
            match run_experiment(&cfg).with_context(|| format!("run failed, outputs in {}", out.display()))? {
                ExperimentOutput::Runs(s) => Ok(summary_table(&s)),
                ExperimentOutput::Check(v) => Ok(serde_json::to_value(v)?),
            }
        }),
        Command::Check(a) => property_check(&PropertyCheckSpec {
            function: a.function,
            property: a.property,
            dim: a.n,
            trials: a.trials,
            seed: a.seed,
        })
        .and_then(|v| Ok(serde_json::to_value(v)?)),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json value"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
