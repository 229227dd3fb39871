//! Library side of the `hisgen` command: corpus generation (explicit or
//! mirrored from a reference corpus), MMD evaluation and phase timing.

pub mod bench;
pub mod eval;
pub mod mirror;

pub use bench::{PhaseTimings, TimingSummary};
pub use eval::{load_corpus, EvalReport};
pub use mirror::{GenerateOptions, HsgOptions, Method, Target};
