//! Hierarchical scale-free graph generation under limited information.
//!
//! Given only a node count `N`, an edge count `M` and a maximum degree
//! `d_max`, [`hsg::generate`] builds a simple undirected graph in two
//! stages: star substructures around Poisson-sampled anchor nodes, then
//! bridging and densification edges drawn from a degree-mixing
//! probability list.
//!
//! The crate also carries the pieces needed to evaluate such generators:
//! classical baselines ([`baselines`]), synthetic reference corpora
//! ([`synth`]), MMD over degree / clustering / orbit statistics
//! ([`metrics`]) and plain-text corpus formats ([`io`]).

pub mod baselines;
pub mod distributions;
pub mod error;
pub mod graph;
pub mod hsg;
pub mod io;
pub mod metrics;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, GraphStats};
pub use hsg::{generate, GeneratorConfig};
