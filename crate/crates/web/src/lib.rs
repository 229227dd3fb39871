//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export returns a JSON string. The `*_json` functions hold the
//! logic and run natively as well, so they are what the tests call.

use hisgen::baselines::{ba, er_gnm};
use hisgen::distributions::{poisson_pmf, truncation_k};
use hisgen::hsg::{generate_observed, GeneratorConfig};
use hisgen::metrics::{compare_corpora, MetricConfig};
use hisgen::rng::{derive_seed, substream};
use hisgen::synth::{CorpusKind, CorpusSpec};
use hisgen::{Error, Graph, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest graph the page will lay out.
pub const MAX_NODES: usize = 2000;

/// Largest reference corpus the page will score.
pub const MAX_CORPUS: usize = 40;

fn js(result: Result<Value>) -> std::result::Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// Generates one graph: edges, the star each node was parsed into, bridge
/// edges, and the degree histogram next to `N · Poisson(2M/N)`.
#[wasm_bindgen]
pub fn generate(n: usize, m: usize, d_max: usize, seed: u64) -> std::result::Result<String, JsError> {
    js(generate_json(n, m, d_max, seed))
}

/// Scores hsg, ER and BA against a synthetic reference corpus, each
/// generated graph mirroring the size of one reference graph.
#[wasm_bindgen]
pub fn compare(kind: &str, count: usize, seed: u64) -> std::result::Result<String, JsError> {
    js(compare_json(kind, count, seed))
}

/// Poisson pmf of `lambda` up to a little past its truncation point.
#[wasm_bindgen]
pub fn degree_model(lambda: f64) -> std::result::Result<String, JsError> {
    js(degree_model_json(lambda))
}

pub fn generate_json(n: usize, m: usize, d_max: usize, seed: u64) -> Result<Value> {
    if n > MAX_NODES {
        return Err(Error::InvalidInput(format!("at most {MAX_NODES} nodes in the browser")));
    }
    let cfg = GeneratorConfig::new(n, m, d_max).with_seed(seed);
    let run = generate_observed(&cfg, &mut ())?;
    let subs = &run.substructures;
    let mut star = vec![0usize; n];
    for (i, (&first, &d)) in subs.node_offsets.iter().zip(&subs.anchor_degrees).enumerate() {
        star[first..=first + d].fill(i);
    }
    let degrees = run.graph.degrees();
    let top = degrees.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; top + 1];
    for &d in &degrees {
        histogram[d] += 1;
    }
    let lambda = cfg.avg_degree();
    let expected = (0..=top)
        .map(|d| poisson_pmf(d, lambda).map(|p| p * n as f64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(json!({
        "n": n,
        "m": run.graph.edge_count(),
        "edges": run.graph.edges(),
        "anchors": subs.anchors(),
        "star": star,
        "bridges": run.bridge_edges,
        "scans": run.scans,
        "histogram": histogram,
        "expected": expected,
        "lambda": lambda,
    }))
}

fn corpus_kind(name: &str) -> Result<CorpusKind> {
    match name {
        "grid" => Ok(CorpusKind::Grid),
        "tree" => Ok(CorpusKind::Tree),
        "clus" => Ok(CorpusKind::Clus),
        "ego" => Ok(CorpusKind::Ego),
        other => Err(Error::InvalidInput(format!("unknown corpus kind {other:?}"))),
    }
}

fn mirror(reference: &[Graph], seed: u64, method: &str) -> Result<Vec<Graph>> {
    reference
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let (n, m) = (g.node_count(), g.edge_count());
            let mut rng = substream(seed, i as u64);
            match method {
                "hsg" => {
                    let cfg = GeneratorConfig::new(n, m, g.max_degree()).with_seed(derive_seed(seed, i as u64));
                    hisgen::generate(&cfg)
                },
                "er" => er_gnm(n, m, &mut rng),
                _ => {
                    let attach = ((m as f64 / n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1));
                    ba(n, attach, &mut rng)
                },
            }
        })
        .collect()
}

pub fn compare_json(kind: &str, count: usize, seed: u64) -> Result<Value> {
    if count == 0 || count > MAX_CORPUS {
        return Err(Error::InvalidInput(format!("corpus size must be in 1..={MAX_CORPUS}")));
    }
    let reference = CorpusSpec::new(corpus_kind(kind)?, seed).with_count(count).build()?;
    let config = MetricConfig::default();
    let rows = ["hsg", "er", "ba"]
        .into_iter()
        .map(|method| {
            let generated = mirror(&reference, seed.wrapping_add(1), method)?;
            let report = compare_corpora(&reference, &generated, &config)?;
            Ok(json!({ "method": method, "deg": report.deg, "clus": report.clus, "orbit": report.orbit }))
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(json!({ "kind": kind, "count": count, "rows": rows }))
}

pub fn degree_model_json(lambda: f64) -> Result<Value> {
    let k = truncation_k(lambda)?;
    let pmf = (0..=k + 5).map(|d| poisson_pmf(d, lambda)).collect::<Result<Vec<f64>>>()?;
    Ok(json!({ "lambda": lambda, "k": k, "pmf": pmf }))
}
