//! Weighted edge lists in tab-separated form.
//!
//! ```text
//! # kind=influence
//! keyword_7	customer_12	0.25
//! ```
//!
//! The first non-comment line must be the `# kind=` header. Node ids are
//! arbitrary strings, mapped to dense indices in order of first appearance.
//! For `kind=influence` sources are channels and targets customers, weights
//! are activation probabilities in `(0, 1)`. For `kind=revenue` sources and
//! targets share one user index space, weights are nonnegative, and a line
//! with `source == target` sets that user's self-activation rate.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use subcont_core::zoo::{BipartiteInfluenceInstance, RevenueInstance, RevenueWeights};

#[derive(Debug, thiserror::Error)]
pub enum TsvError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: weight {weight} of edge {source_id} -> {target_id} out of range")]
    WeightOutOfRange {
        line: usize,
        source_id: String,
        target_id: String,
        weight: f64,
    },
    #[error("line {line}: duplicate edge {source_id} -> {target_id}")]
    Duplicate {
        line: usize,
        source_id: String,
        target_id: String,
    },
    #[error("no edges")]
    NoEdges,
    #[error("{expected} data required, file declares kind={found}")]
    WrongKind { expected: GraphKind, found: GraphKind },
    #[error(transparent)]
    Instance(#[from] subcont_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Influence,
    Revenue,
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphKind::Influence => "influence",
            GraphKind::Revenue => "revenue",
        })
    }
}

/// Dense index to original id.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct NodeMapping {
    pub sources: Vec<String>,
    /// Empty for revenue graphs, whose ids all live in `sources`.
    pub targets: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeList {
    pub kind: GraphKind,
    pub edges: Vec<(usize, usize, f64)>,
    /// Revenue only: per-user self-activation rate, 0 unless given.
    pub self_activation: Vec<f64>,
    pub mapping: NodeMapping,
}

#[derive(Default)]
struct Interner {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn get(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        self.ids.push(id.to_owned());
        self.index.insert(id.to_owned(), self.ids.len() - 1);
        self.ids.len() - 1
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, TsvError> {
    let mut kind = None;
    let mut sources = Interner::default();
    let mut targets = Interner::default();
    let mut edges = Vec::new();
    let mut self_rates: Vec<(usize, f64)> = Vec::new();
    let mut seen = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if kind.is_none() {
                kind = Some(match comment.trim() {
                    "kind=influence" => GraphKind::Influence,
                    "kind=revenue" => GraphKind::Revenue,
                    other => {
                        return Err(TsvError::Malformed {
                            line,
                            reason: format!("expected `# kind=influence|revenue` header, found `#{other}`"),
                        })
                    }
                });
            }
            continue;
        }
        let Some(kind) = kind else {
            return Err(TsvError::Malformed {
                line,
                reason: "edge before the `# kind=` header".into(),
            });
        };
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(TsvError::Malformed {
                line,
                reason: format!("expected source<TAB>target<TAB>weight, got {} fields", fields.len()),
            });
        }
        let weight: f64 = fields[2].parse().map_err(|_| TsvError::Malformed {
            line,
            reason: format!("weight `{}` is not a number", fields[2]),
        })?;
        let valid = match kind {
            GraphKind::Influence => weight > 0.0 && weight < 1.0,
            GraphKind::Revenue => weight.is_finite() && weight >= 0.0,
        };
        if !valid {
            return Err(TsvError::WeightOutOfRange {
                line,
                source_id: fields[0].into(),
                target_id: fields[1].into(),
                weight,
            });
        }
        let (s, t) = match kind {
            GraphKind::Influence => (sources.get(fields[0]), targets.get(fields[1])),
            GraphKind::Revenue => (sources.get(fields[0]), sources.get(fields[1])),
        };
        let key = match kind {
            GraphKind::Revenue => (s.min(t), s.max(t)),
            GraphKind::Influence => (s, t),
        };
        if !seen.insert(key) {
            return Err(TsvError::Duplicate {
                line,
                source_id: fields[0].into(),
                target_id: fields[1].into(),
            });
        }
        if kind == GraphKind::Revenue && s == t {
            self_rates.push((s, weight));
        } else {
            edges.push((s, t, weight));
        }
    }

    let kind = kind.ok_or(TsvError::NoEdges)?;
    if edges.is_empty() {
        return Err(TsvError::NoEdges);
    }
    let mut self_activation = Vec::new();
    if kind == GraphKind::Revenue {
        self_activation = vec![0.0; sources.ids.len()];
        for (s, w) in self_rates {
            self_activation[s] = w;
        }
    }
    Ok(EdgeList {
        kind,
        edges,
        self_activation,
        mapping: NodeMapping {
            sources: sources.ids,
            targets: targets.ids,
        },
    })
}

pub fn read_edge_list(path: &Path) -> Result<EdgeList, TsvError> {
    let text = fs::read_to_string(path).map_err(|source| TsvError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_edge_list(&text)
}

impl EdgeList {
    pub fn into_influence(self) -> Result<(BipartiteInfluenceInstance, NodeMapping), TsvError> {
        if self.kind != GraphKind::Influence {
            return Err(TsvError::WrongKind {
                expected: GraphKind::Influence,
                found: self.kind,
            });
        }
        let inst = BipartiteInfluenceInstance::new(self.mapping.sources.len(), self.mapping.targets.len(), self.edges)?;
        Ok((inst, self.mapping))
    }

    /// Revenue instance with a uniform upper bound; `γ` is halved until
    /// `f(0) + f(ū) >= 0`.
    pub fn to_revenue(&self, weights: RevenueWeights, upper: f64) -> Result<RevenueInstance, TsvError> {
        if self.kind != GraphKind::Revenue {
            return Err(TsvError::WrongKind {
                expected: GraphKind::Revenue,
                found: self.kind,
            });
        }
        let n = self.mapping.sources.len();
        Ok(RevenueInstance::with_gamma_adjustment(
            n,
            &self.edges,
            self.self_activation.clone(),
            weights,
            vec![upper; n],
        )?)
    }
}

pub enum LoadedInstance {
    Influence(BipartiteInfluenceInstance),
    Revenue(RevenueInstance),
}

/// A loaded instance with the id mapping.
pub struct Loaded {
    pub instance: LoadedInstance,
    pub mapping: NodeMapping,
}

pub const DEFAULT_REVENUE_WEIGHTS: RevenueWeights = RevenueWeights {
    alpha: 10.0,
    beta: 10.0,
    gamma: 10.0,
};

/// Reads a file and builds the instance its header declares; revenue graphs
/// get [`DEFAULT_REVENUE_WEIGHTS`] and `ū = 1`.
pub fn load_bipartite_tsv(path: &Path) -> Result<Loaded, TsvError> {
    let list = read_edge_list(path)?;
    match list.kind {
        GraphKind::Influence => {
            let (inst, mapping) = list.into_influence()?;
            Ok(Loaded {
                instance: LoadedInstance::Influence(inst),
                mapping,
            })
        }
        GraphKind::Revenue => {
            let inst = list.to_revenue(DEFAULT_REVENUE_WEIGHTS, 1.0)?;
            Ok(Loaded {
                instance: LoadedInstance::Revenue(inst),
                mapping: list.mapping,
            })
        }
    }
}
