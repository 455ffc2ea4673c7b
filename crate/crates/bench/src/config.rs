use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MonotoneNqp,
    NonmonotoneNqp,
    BudgetAllocation,
    Revenue,
    PropertyCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::MonotoneNqp,
        ExperimentKind::NonmonotoneNqp,
        ExperimentKind::BudgetAllocation,
        ExperimentKind::Revenue,
        ExperimentKind::PropertyCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MonotoneNqp => "monotone_nqp",
            ExperimentKind::NonmonotoneNqp => "nonmonotone_nqp",
            ExperimentKind::BudgetAllocation => "budget_allocation",
            ExperimentKind::Revenue => "revenue",
            ExperimentKind::PropertyCheck => "property_check",
        }
    }

    /// Name of the swept quantity.
    pub fn sweep_variable(self) -> &'static str {
        match self {
            ExperimentKind::MonotoneNqp => "b",
            ExperimentKind::NonmonotoneNqp | ExperimentKind::Revenue => "upper",
            ExperimentKind::BudgetAllocation => "budget",
            ExperimentKind::PropertyCheck => "none",
        }
    }

    pub fn default_methods(self) -> &'static [MethodKind] {
        use MethodKind::*;
        match self {
            ExperimentKind::MonotoneNqp => &[FrankWolfe, Random, RandomCube, ProjGrad],
            ExperimentKind::NonmonotoneNqp => &[DoubleGreedy, SingleGreedy, Random, ProjGrad],
            ExperimentKind::BudgetAllocation => &[FrankWolfe, RandomCube, ProjGrad],
            ExperimentKind::Revenue => &[DoubleGreedy, SingleGreedy, Random],
            ExperimentKind::PropertyCheck => &[],
        }
    }

    pub fn supports(self, method: MethodKind) -> bool {
        use MethodKind::*;
        match self {
            ExperimentKind::MonotoneNqp | ExperimentKind::BudgetAllocation => {
                matches!(method, FrankWolfe | Random | RandomCube | ProjGrad)
            }
            ExperimentKind::NonmonotoneNqp => matches!(method, DoubleGreedy | SingleGreedy | Random | ProjGrad),
            // no gradient for the discontinuous revenue objective
            ExperimentKind::Revenue => matches!(method, DoubleGreedy | SingleGreedy | Random),
            ExperimentKind::PropertyCheck => false,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        Self::ALL.into_iter().find(|k| k.name() == key).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            format!("unknown experiment `{s}`; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    FrankWolfe,
    DoubleGreedy,
    Random,
    RandomCube,
    ProjGrad,
    SingleGreedy,
}

impl MethodKind {
    pub const ALL: [MethodKind; 6] = [
        MethodKind::FrankWolfe,
        MethodKind::DoubleGreedy,
        MethodKind::Random,
        MethodKind::RandomCube,
        MethodKind::ProjGrad,
        MethodKind::SingleGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::FrankWolfe => "frank_wolfe",
            MethodKind::DoubleGreedy => "double_greedy",
            MethodKind::Random => "random",
            MethodKind::RandomCube => "random_cube",
            MethodKind::ProjGrad => "projgrad",
            MethodKind::SingleGreedy => "single_greedy",
        }
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Which budget the allocation sweep varies; the other stays at
/// `fixed_budget`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetAxis {
    #[default]
    Advertiser,
    Volume,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyKind {
    Submodular,
    WeakDr,
    Dr,
    Coordconcave,
    Monotone,
}

impl FromStr for PropertyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "submodular" => PropertyKind::Submodular,
            "weak-dr" | "weak_dr" => PropertyKind::WeakDr,
            "dr" => PropertyKind::Dr,
            "coordconcave" => PropertyKind::Coordconcave,
            "monotone" => PropertyKind::Monotone,
            _ => {
                return Err(format!(
                    "unknown property `{s}`; expected submodular, weak-dr, dr, coordconcave or monotone"
                ))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheckSpec {
    /// A zoo function name or a path to an edge-list file.
    pub function: String,
    pub property: PropertyKind,
    #[serde(default = "default_check_dim")]
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
}

fn default_check_dim() -> usize {
    crate::check::CHECK_DIM
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Dimension: variables for NQP, users for revenue, channels for
    /// budget allocation.
    pub n: usize,
    /// Constraint rows for monotone NQP, customers for budget allocation.
    pub m: usize,
    /// Number of repetitions; repetition `i` uses seed `base_seed + i`.
    pub seeds: usize,
    pub base_seed: u64,
    /// Iterations `K` of the Frank-Wolfe variant and of projected gradient.
    pub iterations: usize,
    /// Frank-Wolfe step size; `1 / K` when absent.
    pub gamma: Option<f64>,
    /// Declared additive error level of the inner solves.
    pub delta: f64,
    /// Projected-gradient step sizes, one run each.
    pub steps: Vec<f64>,
    /// Samples for the random baselines.
    pub k_s: usize,
    /// Values of the swept quantity.
    pub sweep: Vec<f64>,
    pub methods: Vec<MethodKind>,
    pub data_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Points per dimension of the grid oracle, if enabled.
    pub grid_points: Option<usize>,
    /// Off-diagonal density of non-monotone NQP Hessians, edge density of
    /// synthetic revenue graphs.
    pub density: f64,
    pub revenue_weights: [f64; 3],
    pub budget_axis: BudgetAxis,
    pub fixed_budget: f64,
    pub advertisers: usize,
    /// Edges per customer in synthetic allocation graphs.
    pub degree: usize,
    /// Influence probabilities of synthetic allocation graphs are drawn
    /// from `U(0, p_max)`.
    pub p_max: f64,
    pub property: Option<PropertyCheckSpec>,
}

pub const DEFAULT_STEPS: [f64; 3] = [1e-4, 1e-3, 1e-2];
pub const DEFAULT_SWEEP: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, output_dir: impl Into<PathBuf>) -> Self {
        let (n, m) = match experiment {
            ExperimentKind::MonotoneNqp => (100, 50),
            ExperimentKind::NonmonotoneNqp => (100, 0),
            ExperimentKind::BudgetAllocation => (20, 100),
            ExperimentKind::Revenue => (200, 0),
            ExperimentKind::PropertyCheck => (0, 0),
        };
        ExperimentConfig {
            experiment,
            n,
            m,
            seeds: 20,
            base_seed: 0,
            iterations: 50,
            gamma: None,
            delta: 0.0,
            steps: DEFAULT_STEPS.to_vec(),
            k_s: 1000,
            sweep: DEFAULT_SWEEP.to_vec(),
            methods: experiment.default_methods().to_vec(),
            data_path: None,
            output_dir: output_dir.into(),
            grid_points: None,
            density: 0.1,
            revenue_weights: [10.0, 10.0, 10.0],
            budget_axis: BudgetAxis::Advertiser,
            fixed_budget: 1.0,
            advertisers: 3,
            degree: 5,
            p_max: 0.2,
            property: None,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or(1.0 / self.iterations.max(1) as f64)
    }

    pub fn validate(&self) -> Result<(), String> {
        let kind = self.experiment;
        if kind == ExperimentKind::PropertyCheck {
            let p = self
                .property
                .as_ref()
                .ok_or("property_check needs a function and a property")?;
            if p.trials == 0 {
                return Err("trials must be positive".into());
            }
            return Ok(());
        }
        if self.n == 0 {
            return Err("n must be positive".into());
        }
        if matches!(kind, ExperimentKind::MonotoneNqp | ExperimentKind::BudgetAllocation) && self.m == 0 {
            return Err(format!("{kind} needs m >= 1"));
        }
        if self.seeds == 0 {
            return Err("seeds must be positive".into());
        }
        if self.iterations == 0 {
            return Err("iterations must be positive".into());
        }
        let g = self.gamma();
        if !(g > 0.0 && g <= 1.0) {
            return Err(format!("gamma = {g} not in (0, 1]"));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err("delta must be >= 0".into());
        }
        if self.k_s == 0 {
            return Err("k_s must be positive".into());
        }
        if self.sweep.is_empty() || !self.sweep.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err("sweep values must be positive".into());
        }
        if self.methods.is_empty() {
            return Err("no methods selected".into());
        }
        if let Some(m) = self.methods.iter().find(|m| !kind.supports(**m)) {
            return Err(format!("method {} does not apply to {kind}", m.name()));
        }
        if self.methods.contains(&MethodKind::ProjGrad)
            && (self.steps.is_empty() || !self.steps.iter().all(|s| s.is_finite() && *s >= 0.0))
        {
            return Err("projgrad needs nonnegative step sizes".into());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err("density must be in [0, 1]".into());
        }
        if !self.revenue_weights.iter().all(|w| w.is_finite() && *w >= 0.0) {
            return Err("revenue weights must be nonnegative".into());
        }
        if !(self.fixed_budget.is_finite() && self.fixed_budget >= 0.0) || self.advertisers == 0 || self.degree == 0 {
            return Err("budget allocation needs a nonnegative fixed budget, advertisers >= 1 and degree >= 1".into());
        }
        if kind == ExperimentKind::BudgetAllocation && self.data_path.is_none() && self.degree > self.n {
            return Err(format!("degree {} exceeds the {} channels", self.degree, self.n));
        }
        if !(self.p_max > 0.0 && self.p_max < 1.0) {
            return Err("p_max must be in (0, 1)".into());
        }
        if let Some(g) = self.grid_points {
            if g < 2 {
                return Err("grid oracle needs at least 2 points per dimension".into());
            }
        }
        if self.data_path.is_some() && !matches!(kind, ExperimentKind::BudgetAllocation | ExperimentKind::Revenue) {
            return Err(format!("{kind} does not read a data file"));
        }
        Ok(())
    }
}
