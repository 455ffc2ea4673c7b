//! Experiment orchestration: instance construction per sweep point and
//! seed, method runs, and CSV/JSON emission.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! manifest.json                      written before anything else
//! traces/<method>__s<i>__seed<k>.csv one per run
//! summary.json                       per sweep point and method
//! ```

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use subcont_core::baselines::{proj_grad_ascent, random_best_of, random_cube_baseline, single_greedy};
use subcont_core::solvers::{
    double_greedy, frank_wolfe_variant, Aborted, CoordinateOrder, DgConfig, FwConfig, OneDimMode, DEFAULT_1D_TOL,
};
use subcont_core::zoo::{
    gen_monotone_nqp, gen_nonmonotone_nqp_with, BipartiteInfluenceInstance, BudgetAllocation, NonmonotoneNqpParams,
    RevenueInstance, RevenueWeights,
};
use subcont_core::{rng, BoxDomain, Domain, Objective, PolytopeDomain, SolverTrace};

use crate::check::{property_check, CheckVerdict};
use crate::config::{BudgetAxis, ExperimentConfig, ExperimentKind, MethodKind};
use crate::oracle::grid_brute_force;
use crate::tsv::{read_edge_list, EdgeList, GraphKind};

pub const TRACE_HEADER: &str = "iteration,t,objective,feasibility_residual";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const VERDICT_FILE: &str = "verdict.json";
pub const TRACE_DIR: &str = "traces";

/// Recorded in every manifest.
pub const PROJGRAD_STEP_NOTE: &str = "projgrad step sizes are an untuned default grid";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Method label; projected gradient runs carry their step size.
    pub method: String,
    pub sweep_value: f64,
    pub instance_seed: u64,
    /// Objective of the last trace row.
    pub final_value: f64,
    /// Relative to the output directory.
    pub trace_path: PathBuf,
    pub wall_time: f64,
    /// Best value on the oracle grid, when enabled.
    pub grid_optimum: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub mean: f64,
    /// Sample standard deviation, 0 for a single run.
    pub std: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub sweep_value: f64,
    pub methods: Vec<MethodSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: ExperimentKind,
    pub sweep_variable: String,
    pub points: Vec<SweepPoint>,
    pub records: Vec<ResultRecord>,
}

impl Summary {
    pub fn mean(&self, sweep_index: usize, method: &str) -> Option<f64> {
        self.points
            .get(sweep_index)?
            .methods
            .iter()
            .find(|m| m.method == method)
            .map(|m| m.mean)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub method: String,
    pub sweep_value: f64,
    pub instance_seed: u64,
    pub error: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Data(#[from] crate::tsv::TsvError),
    #[error("{} of the runs failed; partial outputs kept, first: {}", .0.len(), .0[0].error)]
    Failed(Vec<Failure>),
    #[error("property check failed to run: {0}")]
    Check(String),
}

type Res<T> = std::result::Result<T, ExperimentError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Res<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| ExperimentError::Json {
        path: path.to_owned(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub fn write_trace_csv(path: &Path, trace: &SolverTrace) -> std::io::Result<()> {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in trace.records() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.iteration, r.t, r.objective, r.feasibility_residual
        ));
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())
}

/// Rows of a trace CSV as `(iteration, t, objective, residual)`.
pub fn read_trace_csv(path: &Path) -> std::io::Result<Vec<(usize, f64, f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let bad = |line: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad trace row `{line}`"));
    let mut lines = text.lines();
    if lines.next() != Some(TRACE_HEADER) {
        return Err(bad("header"));
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad(line));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line));
            Ok((f[0].parse().map_err(|_| bad(line))?, num(f[1])?, num(f[2])?, num(f[3])?))
        })
        .collect()
}

#[derive(Serialize)]
struct Manifest<'a> {
    status: &'a str,
    experiment: ExperimentKind,
    sweep_variable: &'a str,
    sweep: &'a [f64],
    instance_seeds: Vec<u64>,
    methods: Vec<String>,
    notes: Vec<&'a str>,
    failures: &'a [Failure],
    config: &'a ExperimentConfig,
}

/// Config stored in a manifest written by [`run_experiment`].
pub fn config_from_manifest(path: &Path) -> Res<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    #[derive(Deserialize)]
    struct Stored {
        config: ExperimentConfig,
    }
    serde_json::from_str::<Stored>(&text)
        .map(|s| s.config)
        .map_err(|source| ExperimentError::Json {
            path: path.to_owned(),
            source,
        })
}

/// Method labels in output order.
pub fn method_labels(cfg: &ExperimentConfig) -> Vec<String> {
    let mut out = Vec::new();
    for m in &cfg.methods {
        if *m == MethodKind::ProjGrad {
            out.extend(cfg.steps.iter().map(|s| projgrad_label(*s)));
        } else {
            out.push(m.name().to_owned());
        }
    }
    out
}

pub fn projgrad_label(step: f64) -> String {
    format!("projgrad_step{step}")
}

/// Seed of the samplers, decorrelated from the instance generator.
fn sampler_seed(instance_seed: u64) -> u64 {
    instance_seed ^ 0x5eed_5eed_0000_0000
}

/// A single instance ready to be solved by any applicable method.
struct Instance {
    f: Box<dyn Objective>,
    /// Feasible set for Frank-Wolfe and the samplers.
    polytope: PolytopeDomain,
    /// Box for the coordinate-wise methods.
    box_domain: Option<BoxDomain>,
    domain: Domain,
    mode: OneDimMode,
    projgrad_iters: usize,
}

/// Data shared by every task, loaded once.
enum Shared {
    None,
    Influence(BipartiteInfluenceInstance),
    Revenue(EdgeList),
}

fn build_instance(cfg: &ExperimentConfig, shared: &Shared, sweep: f64, seed: u64) -> subcont_core::Result<Instance> {
    let n = cfg.n;
    match cfg.experiment {
        ExperimentKind::MonotoneNqp => {
            let (f, p) = gen_monotone_nqp(n, cfg.m, seed)?;
            let p = p.with_rhs(vec![sweep; cfg.m])?;
            Ok(Instance {
                f: Box::new(f),
                domain: Domain::Polytope(p.clone()),
                polytope: p,
                box_domain: None,
                mode: OneDimMode::QuadraticClosedForm,
                projgrad_iters: cfg.iterations,
            })
        }
        ExperimentKind::NonmonotoneNqp => {
            let params = NonmonotoneNqpParams {
                n,
                upper: sweep,
                density: cfg.density,
            };
            let (f, b) = gen_nonmonotone_nqp_with(params, seed)?;
            Ok(Instance {
                f: Box::new(f),
                polytope: PolytopeDomain::from_box(b.upper().to_vec())?,
                domain: Domain::Box(b.clone()),
                box_domain: Some(b),
                mode: OneDimMode::QuadraticClosedForm,
                projgrad_iters: n,
            })
        }
        ExperimentKind::BudgetAllocation => {
            let graph = match shared {
                Shared::Influence(g) => g.clone(),
                _ => BipartiteInfluenceInstance::random(n, cfg.m, cfg.degree, cfg.p_max, seed)?,
            };
            let channels = graph.n_channels();
            let mut r = rng::seeded(seed);
            let weights: Vec<f64> = (0..cfg.advertisers).map(|_| r.random::<f64>()).collect();
            let alloc = BudgetAllocation::new(graph, weights)?;
            let (adv, vol) = match cfg.budget_axis {
                BudgetAxis::Advertiser => (sweep, cfg.fixed_budget),
                BudgetAxis::Volume => (cfg.fixed_budget, sweep),
            };
            let p = alloc.polytope(&vec![adv; cfg.advertisers], &vec![vol; channels], adv.max(vol))?;
            Ok(Instance {
                f: Box::new(alloc),
                domain: Domain::Polytope(p.clone()),
                polytope: p,
                box_domain: None,
                mode: OneDimMode::ConcaveSearch,
                projgrad_iters: cfg.iterations,
            })
        }
        ExperimentKind::Revenue => {
            let [alpha, beta, gamma] = cfg.revenue_weights;
            let weights = RevenueWeights { alpha, beta, gamma };
            let f = match shared {
                Shared::Revenue(list) => list.to_revenue(weights, sweep).map_err(|e| match e {
                    crate::tsv::TsvError::Instance(e) => e,
                    other => subcont_core::Error::InvalidInput(other.to_string()),
                })?,
                _ => {
                    let edges = RevenueInstance::random_edges(n, cfg.density, seed);
                    RevenueInstance::generate(n, &edges, weights, vec![sweep; n], seed)?
                }
            };
            let dim = f.dim();
            let b = BoxDomain::unit(dim, sweep)?;
            Ok(Instance {
                f: Box::new(f),
                polytope: PolytopeDomain::from_box(vec![sweep; dim])?,
                domain: Domain::Box(b.clone()),
                box_domain: Some(b),
                mode: OneDimMode::RevenueDiscontinuous,
                projgrad_iters: 0,
            })
        }
        ExperimentKind::PropertyCheck => Err(subcont_core::Error::InvalidInput(
            "property_check has no instances".into(),
        )),
    }
}

struct Task {
    sweep_index: usize,
    sweep_value: f64,
    instance_seed: u64,
}

/// Outcome of one method run: the trace to write and the error, if any.
struct RunOutcome {
    label: String,
    trace: SolverTrace,
    secondary: Option<(String, SolverTrace)>,
    error: Option<String>,
    wall_time: f64,
}

fn aborted(label: String, a: Aborted, start: Instant) -> RunOutcome {
    RunOutcome {
        label,
        trace: a.trace,
        secondary: None,
        error: Some(a.error.to_string()),
        wall_time: start.elapsed().as_secs_f64(),
    }
}

fn finished(label: String, r: subcont_core::Result<SolverTrace>, start: Instant) -> RunOutcome {
    let (trace, error) = match r {
        Ok(t) => (t, None),
        Err(e) => (SolverTrace::new(), Some(e.to_string())),
    };
    RunOutcome {
        label,
        trace,
        secondary: None,
        error,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

fn run_methods(cfg: &ExperimentConfig, inst: &Instance, seed: u64) -> Vec<RunOutcome> {
    let f = inst.f.as_ref();
    let mut out = Vec::new();
    for &method in &cfg.methods {
        let start = Instant::now();
        let label = method.name().to_owned();
        match method {
            MethodKind::FrankWolfe => {
                let fw = FwConfig {
                    gamma: cfg.gamma(),
                    alpha: 1.0,
                    delta: cfg.delta,
                    lipschitz: None,
                };
                out.push(match frank_wolfe_variant(f, &inst.polytope, &fw) {
                    Ok(o) => finished(label, Ok(o.trace), start),
                    Err(a) => aborted(label, a, start),
                });
            }
            MethodKind::DoubleGreedy => {
                let Some(b) = &inst.box_domain else { continue };
                let dg = DgConfig {
                    order: CoordinateOrder::Random(sampler_seed(seed)),
                    delta: cfg.delta,
                    mode: inst.mode,
                    tol: DEFAULT_1D_TOL,
                };
                out.push(match double_greedy(f, b, &dg) {
                    Ok(o) => {
                        let mut r = finished(label, Ok(o.trace_x), start);
                        r.secondary = Some(("double_greedy_y".into(), o.trace_y));
                        r
                    }
                    Err(a) => aborted(label, a, start),
                });
            }
            MethodKind::SingleGreedy => {
                let Some(b) = &inst.box_domain else { continue };
                let order = CoordinateOrder::Random(sampler_seed(seed));
                let r = single_greedy(f, b, &order, inst.mode, DEFAULT_1D_TOL).map(|o| o.trace);
                out.push(finished(label, r, start));
            }
            MethodKind::Random => {
                let r = random_best_of(f, &inst.polytope, cfg.k_s, sampler_seed(seed)).map(|o| o.trace);
                out.push(finished(label, r, start));
            }
            MethodKind::RandomCube => {
                let r = random_cube_baseline(f, &inst.polytope, cfg.k_s, sampler_seed(seed)).map(|o| o.trace);
                out.push(finished(label, r, start));
            }
            MethodKind::ProjGrad => {
                for &step in &cfg.steps {
                    let start = Instant::now();
                    let r = proj_grad_ascent(f, &inst.domain, step, inst.projgrad_iters).map(|o| o.trace);
                    out.push(finished(projgrad_label(step), r, start));
                }
            }
        }
    }
    out
}

fn trace_file(label: &str, sweep_index: usize, seed: u64) -> PathBuf {
    Path::new(TRACE_DIR).join(format!("{label}__s{sweep_index}__seed{seed}.csv"))
}

fn run_task(cfg: &ExperimentConfig, shared: &Shared, task: &Task) -> (Vec<ResultRecord>, Vec<Failure>) {
    let fail = |method: &str, error: String| Failure {
        method: method.to_owned(),
        sweep_value: task.sweep_value,
        instance_seed: task.instance_seed,
        error,
    };
    let inst = match build_instance(cfg, shared, task.sweep_value, task.instance_seed) {
        Ok(i) => i,
        Err(e) => return (Vec::new(), vec![fail("instance", e.to_string())]),
    };
    let mut failures = Vec::new();
    let grid_optimum = match cfg.grid_points {
        Some(ppd) => match grid_brute_force(inst.f.as_ref(), &inst.domain, ppd) {
            Ok((_, v)) => Some(v),
            Err(e) => {
                failures.push(fail("grid_oracle", e.to_string()));
                None
            }
        },
        None => None,
    };

    let mut records = Vec::new();
    for run in run_methods(cfg, &inst, task.instance_seed) {
        let rel = trace_file(&run.label, task.sweep_index, task.instance_seed);
        let path = cfg.output_dir.join(&rel);
        if let Err(e) = write_trace_csv(&path, &run.trace) {
            failures.push(fail(&run.label, format!("{}: {e}", path.display())));
            continue;
        }
        if let Some((label, trace)) = &run.secondary {
            let p = cfg
                .output_dir
                .join(trace_file(label, task.sweep_index, task.instance_seed));
            if let Err(e) = write_trace_csv(&p, trace) {
                failures.push(fail(label, format!("{}: {e}", p.display())));
            }
        }
        if let Some(error) = run.error {
            failures.push(fail(&run.label, error));
            continue;
        }
        let Some(last) = run.trace.last() else {
            failures.push(fail(&run.label, "empty trace".into()));
            continue;
        };
        records.push(ResultRecord {
            method: run.label,
            sweep_value: task.sweep_value,
            instance_seed: task.instance_seed,
            final_value: last.objective,
            trace_path: rel,
            wall_time: run.wall_time,
            grid_optimum,
        });
    }
    (records, failures)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(cfg: &ExperimentConfig, records: Vec<ResultRecord>) -> Summary {
    let labels = method_labels(cfg);
    let points = cfg
        .sweep
        .iter()
        .map(|&s| SweepPoint {
            sweep_value: s,
            methods: labels
                .iter()
                .filter_map(|label| {
                    let vals: Vec<f64> = records
                        .iter()
                        .filter(|r| r.sweep_value == s && &r.method == label)
                        .map(|r| r.final_value)
                        .collect();
                    if vals.is_empty() {
                        return None;
                    }
                    let (mean, std) = mean_std(&vals);
                    Some(MethodSummary {
                        method: label.clone(),
                        mean,
                        std,
                        count: vals.len(),
                    })
                })
                .collect(),
        })
        .collect();
    Summary {
        experiment: cfg.experiment,
        sweep_variable: cfg.experiment.sweep_variable().into(),
        points,
        records,
    }
}

#[derive(Debug)]
pub enum ExperimentOutput {
    Runs(Summary),
    Check(CheckVerdict),
}

fn write_manifest(cfg: &ExperimentConfig, status: &str, failures: &[Failure]) -> Res<()> {
    let manifest = Manifest {
        status,
        experiment: cfg.experiment,
        sweep_variable: cfg.experiment.sweep_variable(),
        sweep: &cfg.sweep,
        instance_seeds: (0..cfg.seeds as u64).map(|i| cfg.base_seed + i).collect(),
        methods: method_labels(cfg),
        notes: vec![PROJGRAD_STEP_NOTE],
        failures,
        config: cfg,
    };
    write_json(&cfg.output_dir.join(MANIFEST_FILE), &manifest)
}

/// Runs every configured method on every `(sweep value, seed)` pair.
///
/// The manifest is written before any result file. On failure every
/// finished trace is kept, the manifest is marked `failed`, and the
/// failures are returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Res<ExperimentOutput> {
    cfg.validate().map_err(ExperimentError::Config)?;
    fs::create_dir_all(&cfg.output_dir).map_err(io_err(&cfg.output_dir))?;
    write_manifest(cfg, "running", &[])?;

    if cfg.experiment == ExperimentKind::PropertyCheck {
        let spec = cfg.property.as_ref().expect("validated");
        return match property_check(spec) {
            Ok(v) => {
                write_json(&cfg.output_dir.join(VERDICT_FILE), &v)?;
                write_manifest(cfg, "ok", &[])?;
                Ok(ExperimentOutput::Check(v))
            }
            Err(e) => {
                let f = Failure {
                    method: "property_check".into(),
                    sweep_value: 0.0,
                    instance_seed: spec.seed,
                    error: e.to_string(),
                };
                write_manifest(cfg, "failed", std::slice::from_ref(&f))?;
                Err(ExperimentError::Check(f.error))
            }
        };
    }

    let shared = match &cfg.data_path {
        None => Shared::None,
        Some(path) => {
            let list = read_edge_list(path)?;
            match (cfg.experiment, list.kind) {
                (ExperimentKind::BudgetAllocation, GraphKind::Influence) => Shared::Influence(list.into_influence()?.0),
                (ExperimentKind::Revenue, GraphKind::Revenue) => Shared::Revenue(list),
                (kind, found) => {
                    return Err(ExperimentError::Config(format!(
                        "{kind} cannot use a kind={found} edge list"
                    )));
                }
            }
        }
    };
    let trace_dir = cfg.output_dir.join(TRACE_DIR);
    fs::create_dir_all(&trace_dir).map_err(io_err(&trace_dir))?;

    let tasks: Vec<Task> = cfg
        .sweep
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| {
            (0..cfg.seeds as u64).map(move |k| Task {
                sweep_index: i,
                sweep_value: s,
                instance_seed: cfg.base_seed + k,
            })
        })
        .collect();
    let results: Vec<_> = tasks.par_iter().map(|t| run_task(cfg, &shared, t)).collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in results {
        records.extend(r);
        failures.extend(f);
    }

    let summary = summarize(cfg, records);
    write_json(&cfg.output_dir.join(SUMMARY_FILE), &summary)?;
    if failures.is_empty() {
        write_manifest(cfg, "ok", &[])?;
        Ok(ExperimentOutput::Runs(summary))
    } else {
        write_manifest(cfg, "failed", &failures)?;
        Err(ExperimentError::Failed(failures))
    }
}

/// Reads `summary.json` from an output directory.
pub fn read_summary(dir: &Path) -> Res<Summary> {
    let path = dir.join(SUMMARY_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|source| ExperimentError::Json { path, source })
}

/// Manifest contents as untyped JSON.
pub fn read_manifest(dir: &Path) -> Res<serde_json::Value> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|source| ExperimentError::Json { path, source })
}

/// Compact JSON line describing a summary, for the CLI.
pub fn summary_table(summary: &Summary) -> serde_json::Value {
    json!(summary
        .points
        .iter()
        .map(|p| json!({
            summary.sweep_variable.clone(): p.sweep_value,
            "means": p.methods.iter().map(|m| (m.method.clone(), json!(m.mean))).collect::<serde_json::Map<_, _>>(),
        }))
        .collect::<Vec<_>>())
}
