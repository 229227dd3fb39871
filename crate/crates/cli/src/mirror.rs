use std::fmt;

use hisgen::baselines::{ba, er_gnm, ws};
use hisgen::distributions::{DegreeModel, ModelKind};
use hisgen::rng::{derive_seed, substream};
use hisgen::{generate, Error, GeneratorConfig, Graph, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hsg,
    Er,
    Ba,
    Ws,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hsg => "hsg",
            Method::Er => "er",
            Method::Ba => "ba",
            Method::Ws => "ws",
        })
    }
}

/// Size of one graph to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
}

impl Target {
    /// Node count, edge count and maximum degree of `g`.
    pub fn of(g: &Graph) -> Self {
        Target {
            n: g.node_count(),
            m: g.edge_count(),
            d_max: g.max_degree(),
        }
    }
}

pub fn targets_of(graphs: &[Graph]) -> Vec<Target> {
    graphs.iter().map(Target::of).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsgOptions {
    /// Degree model family; `None` is Poisson.
    pub model: Option<ModelKind>,
    pub use_dmax_limit: bool,
    pub use_truncation_k: bool,
    pub batch_halving: bool,
}

impl Default for HsgOptions {
    fn default() -> Self {
        HsgOptions {
            model: None,
            use_dmax_limit: true,
            use_truncation_k: true,
            batch_halving: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateOptions {
    pub method: Method,
    pub seed: u64,
    pub hsg: HsgOptions,
    /// BA attachment count; derived from `M / N` when unset.
    pub attach_m: Option<usize>,
    /// WS ring degree; derived from `2M / N` when unset.
    pub ring_k: Option<usize>,
    pub rewire_p: f64,
}

impl GenerateOptions {
    pub fn new(method: Method, seed: u64) -> Self {
        GenerateOptions {
            method,
            seed,
            hsg: HsgOptions::default(),
            attach_m: None,
            ring_k: None,
            rewire_p: 0.1,
        }
    }

    /// Generator configuration for graph `index` under the hsg method.
    pub fn hsg_config(&self, target: Target, index: usize) -> GeneratorConfig {
        let mut cfg = GeneratorConfig::new(target.n, target.m, target.d_max)
            .with_seed(derive_seed(self.seed, index as u64))
            .with_limits(self.hsg.use_dmax_limit, self.hsg.use_truncation_k)
            .with_batch_halving(self.hsg.batch_halving);
        if let Some(kind) = self.hsg.model {
            let model = DegreeModel::default_for(kind, cfg.avg_degree(), cfg.sparsity(), target.d_max);
            cfg = cfg.with_model(model);
        }
        cfg
    }

    /// Graph number `index` of the corpus.
    pub fn generate_one(&self, target: Target, index: usize) -> Result<Graph> {
        let Target { n, m, .. } = target;
        let mut rng = substream(self.seed, index as u64);
        match self.method {
            Method::Hsg => generate(&self.hsg_config(target, index)),
            Method::Er => er_gnm(n, m, &mut rng),
            Method::Ba => {
                let attach = self
                    .attach_m
                    .unwrap_or_else(|| ((m as f64 / n.max(1) as f64).round() as usize).max(1));
                ba(n, attach.min(n.saturating_sub(1)).max(1), &mut rng)
            }
            Method::Ws => {
                let k = self.ring_k.unwrap_or_else(|| nearest_even(2.0 * m as f64 / n.max(1) as f64));
                let top = if n % 2 == 0 { n.saturating_sub(2) } else { n.saturating_sub(1) };
                ws(n, k.min(top).max(2), self.rewire_p, &mut rng)
            }
        }
    }

    /// One graph per target, in target order.
    pub fn generate_corpus(&self, targets: &[Target]) -> Result<Vec<Graph>> {
        targets
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                self.generate_one(t, i).map_err(|e| match e {
                    Error::InvalidConfig(msg) => {
                        Error::InvalidConfig(format!("graph {i} (n={}, m={}, d_max={}): {msg}", t.n, t.m, t.d_max))
                    },
                    other => other,
                })
            })
            .collect()
    }
}

fn nearest_even(x: f64) -> usize {
    ((x / 2.0).round() as usize * 2).max(2)
}
