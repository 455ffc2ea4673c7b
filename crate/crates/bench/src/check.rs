//! Sampled property certificates for named zoo functions and edge-list files.

use std::path::Path;

use serde::Serialize;
use subcont_core::properties::{
    check_coordinatewise_concave, check_dr, check_monotone, check_submodular, check_weak_dr, CheckConfig,
    PropertyReport, Verdict, DEFAULT_TOL,
};
use subcont_core::zoo::{
    gen_monotone_nqp, gen_nonmonotone_nqp, BipartiteInfluenceInstance, FacilityInstance, RevenueInstance,
    SensorInstance, SummarizationInstance,
};
use subcont_core::{BoxDomain, Capabilities, FnObjective, Objective};

use crate::config::{PropertyCheckSpec, PropertyKind};
use crate::tsv::{load_bipartite_tsv, LoadedInstance, DEFAULT_REVENUE_WEIGHTS};

pub const ZOO_NAMES: [&str; 8] = [
    "product",
    "monotone_nqp",
    "nonmonotone_nqp",
    "influence",
    "sensor",
    "summarization",
    "facility",
    "revenue",
];

/// Default dimension of the generated zoo instances.
pub const CHECK_DIM: usize = 5;

/// `f(x) = x₁ x₂` on `[0, 1]²`, supermodular.
pub fn product_objective() -> FnObjective {
    FnObjective::new(2, |x| x[0] * x[1])
        .with_gradient(|x| vec![x[1], x[0]])
        .with_capabilities(Capabilities {
            monotone: true,
            dr_submodular: false,
            submodular: false,
            differentiable: true,
        })
}

/// Builds the named function in dimension `n` (`product` is always 2-D), or
/// loads `name` as an edge-list file when it is not a zoo name.
pub fn build_function(name: &str, n: usize, seed: u64) -> anyhow::Result<(Box<dyn Objective>, BoxDomain)> {
    anyhow::ensure!(n >= 1, "dimension must be positive");
    let unit = |d: usize| BoxDomain::unit(d, 1.0);
    Ok(match name {
        "product" => (Box::new(product_objective()), unit(2)?),
        "monotone_nqp" => {
            let (f, p) = gen_monotone_nqp(n, 1, seed)?;
            (Box::new(f), BoxDomain::new(vec![0.0; n], p.upper().to_vec())?)
        }
        "nonmonotone_nqp" => {
            let (f, b) = gen_nonmonotone_nqp(n, seed)?;
            (Box::new(f), b)
        }
        "influence" => (
            Box::new(BipartiteInfluenceInstance::random(n, 2 * n, 2, 0.5, seed)?),
            unit(n)?,
        ),
        "sensor" => (Box::new(SensorInstance::random(n, 2 * n, 0.3, 10.0, seed)?), unit(n)?),
        "summarization" => (Box::new(SummarizationInstance::random(n, 0.5, seed)?), unit(n)?),
        "facility" => (Box::new(FacilityInstance::random(n, 2 * n, seed)?), unit(n)?),
        "revenue" => {
            let edges = RevenueInstance::random_edges(n, 0.5, seed);
            let f = RevenueInstance::generate(n, &edges, DEFAULT_REVENUE_WEIGHTS, vec![1.0; n], seed)?;
            (Box::new(f), unit(n)?)
        }
        path => {
            let path = Path::new(path);
            if !path.exists() {
                anyhow::bail!(
                    "`{}` is neither a zoo function ({}) nor a file",
                    path.display(),
                    ZOO_NAMES.join(", ")
                );
            }
            match load_bipartite_tsv(path)?.instance {
                LoadedInstance::Influence(f) => {
                    let d = f.n_channels();
                    (Box::new(f), unit(d)?)
                }
                LoadedInstance::Revenue(f) => {
                    let b = BoxDomain::new(vec![0.0; f.dim()], f.upper().to_vec())?;
                    (Box::new(f), b)
                }
            }
        }
    })
}

pub fn run_property(
    f: &dyn Objective,
    domain: &BoxDomain,
    property: PropertyKind,
    cfg: CheckConfig,
) -> subcont_core::Result<PropertyReport> {
    match property {
        PropertyKind::Submodular => check_submodular(f, domain, cfg),
        PropertyKind::WeakDr => check_weak_dr(f, domain, cfg),
        PropertyKind::Dr => check_dr(f, domain, cfg),
        PropertyKind::Coordconcave => check_coordinatewise_concave(f, domain, cfg),
        PropertyKind::Monotone => check_monotone(f, domain, cfg),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessJson {
    pub points: Vec<(String, Vec<f64>)>,
    pub coordinate: Option<usize>,
    pub steps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckVerdict {
    pub function: String,
    pub property: PropertyKind,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// `"pass"` or `"fail"`.
    pub verdict: &'static str,
    pub worst_violation: f64,
    pub witness: Option<WitnessJson>,
}

impl CheckVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

pub fn property_check(spec: &PropertyCheckSpec) -> anyhow::Result<CheckVerdict> {
    let (f, domain) = build_function(&spec.function, spec.dim, spec.seed)?;
    let report = run_property(
        f.as_ref(),
        &domain,
        spec.property,
        CheckConfig::new(spec.trials, DEFAULT_TOL, spec.seed),
    )?;
    Ok(CheckVerdict {
        function: spec.function.clone(),
        property: spec.property,
        dim: domain.dim(),
        trials: report.trials,
        seed: spec.seed,
        tol: DEFAULT_TOL,
        verdict: match report.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        },
        worst_violation: report.worst_violation,
        witness: report.witness.map(|w| WitnessJson {
            points: w
                .points
                .into_iter()
                .map(|(k, p)| (k.to_owned(), p.into_vec()))
                .collect(),
            coordinate: w.coordinate,
            steps: w.steps,
        }),
    })
}
