use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hisgen::distributions::ModelKind;
use hisgen::io::{write_corpus, CorpusManifest};
use hisgen::metrics::{KernelConfig, MetricConfig};
use hisgen::synth::{CorpusKind, CorpusParams, CorpusSpec};
use hisgen_cli::bench::{edges_for_sparsity, loglog_slope};
use hisgen_cli::mirror::targets_of;
use hisgen_cli::{load_corpus, EvalReport, GenerateOptions, HsgOptions, Method, PhaseTimings, Target, TimingSummary};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Hierarchical scale-free graph generation and evaluation.
#[derive(Parser, Debug)]
#[command(name = "hisgen", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a corpus with hsg or a baseline, from explicit sizes or by
    /// mirroring a reference corpus.
    Generate(GenerateArgs),
    /// Write a synthetic reference corpus.
    Synth(SynthArgs),
    /// MMD between a reference and a generated corpus.
    Eval(EvalArgs),
    /// Time the parse, connect and densify phases.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GenerateArgs {
    /// Generator to run.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Node count (explicit mode).
    #[arg(long)]
    n: Option<usize>,
    /// Edge count (explicit mode).
    #[arg(long)]
    m: Option<usize>,
    /// Maximum degree; in mirror mode overrides the per-graph value.
    #[arg(long)]
    dmax: Option<usize>,
    /// Number of graphs (explicit mode, default 1).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reference corpus whose per-graph (N, M, d_max) are reproduced.
    #[arg(long)]
    mirror: Option<PathBuf>,
    /// Degree model family for hsg.
    #[arg(long)]
    model: Option<ModelKind>,
    /// Disable the maximum-degree limit.
    #[arg(long = "no-dmax")]
    no_dmax: bool,
    /// Disable the truncation k on anchor degrees.
    #[arg(long = "no-k")]
    no_k: bool,
    /// Rebuild the probability list after every edge.
    #[arg(long = "no-halving")]
    no_halving: bool,
    /// BA edges per new node (default round(M/N)).
    #[arg(long)]
    attach_m: Option<usize>,
    /// WS ring degree (default: even number nearest 2M/N).
    #[arg(long)]
    ring_k: Option<usize>,
    /// WS rewiring probability (default 0.1).
    #[arg(long)]
    rewire_p: Option<f64>,
    /// Output corpus directory.
    #[arg(long)]
    #[serde(skip_serializing)]
    out: Option<PathBuf>,
    /// JSON file with any of these options (or a manifest written by this
    /// command); flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SynthArgs {
    /// grid, tree, clus or ego.
    kind: Option<CorpusKind>,
    /// Number of graphs (default 200).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing)]
    out: Option<PathBuf>,
    /// Kind parameters; only settable from a config file.
    #[arg(skip)]
    params: Option<CorpusParams>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum ReportFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct EvalArgs {
    /// Reference corpus directory (edge lists or TUDataset files).
    reference: Option<PathBuf>,
    /// Generated corpus directory.
    generated: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    /// Report file (default `mmd_report.json` or `mmd_report.csv` in the
    /// working directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    deg_sigma: Option<f64>,
    #[arg(long)]
    clus_sigma: Option<f64>,
    #[arg(long)]
    orbit_sigma: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BenchArgs {
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Sparsity M / (N(N-1)/2) (default 0.05).
    #[arg(long)]
    c: Option<f64>,
    /// Maximum degree (default N-1).
    #[arg(long)]
    dmax: Option<usize>,
    /// Runs per node count (default 5).
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

/// Problems with the invocation itself rather than with data.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Reads a JSON options file. A corpus manifest is accepted too, in which
/// case the configuration echoed under `generator.config` is used.
fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> anyhow::Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if let Some(inner) = value.get("generator").and_then(|g| g.get("config")) {
        value = inner.clone();
    }
    serde_json::from_value(value).map_err(|e| usage(format!("{}: {e}", path.display())))
}

impl GenerateArgs {
    fn merged(self) -> anyhow::Result<Self> {
        let file: GenerateArgs = read_config(self.config.as_deref())?;
        Ok(GenerateArgs {
            method: self.method.or(file.method),
            n: self.n.or(file.n),
            m: self.m.or(file.m),
            dmax: self.dmax.or(file.dmax),
            count: self.count.or(file.count),
            seed: self.seed.or(file.seed),
            mirror: self.mirror.or(file.mirror),
            model: self.model.or(file.model),
            no_dmax: self.no_dmax || file.no_dmax,
            no_k: self.no_k || file.no_k,
            no_halving: self.no_halving || file.no_halving,
            attach_m: self.attach_m.or(file.attach_m),
            ring_k: self.ring_k.or(file.ring_k),
            rewire_p: self.rewire_p.or(file.rewire_p),
            out: self.out.or(file.out),
            config: None,
        })
    }
}

impl SynthArgs {
    fn merged(self) -> anyhow::Result<Self> {
        let file: SynthArgs = read_config(self.config.as_deref())?;
        Ok(SynthArgs {
            kind: self.kind.or(file.kind),
            count: self.count.or(file.count),
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            params: file.params,
            config: None,
        })
    }
}

impl EvalArgs {
    fn merged(self) -> anyhow::Result<Self> {
        let file: EvalArgs = read_config(self.config.as_deref())?;
        Ok(EvalArgs {
            reference: self.reference.or(file.reference),
            generated: self.generated.or(file.generated),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            deg_sigma: self.deg_sigma.or(file.deg_sigma),
            clus_sigma: self.clus_sigma.or(file.clus_sigma),
            orbit_sigma: self.orbit_sigma.or(file.orbit_sigma),
            config: None,
        })
    }
}

impl BenchArgs {
    fn merged(self) -> anyhow::Result<Self> {
        let file: BenchArgs = read_config(self.config.as_deref())?;
        Ok(BenchArgs {
            n: if self.n.is_empty() { file.n } else { self.n },
            c: self.c.or(file.c),
            dmax: self.dmax.or(file.dmax),
            runs: self.runs.or(file.runs),
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            config: None,
        })
    }
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<()> {
    let args = args.merged()?;
    let method = args.method.ok_or_else(|| usage("--method is required"))?;
    let out = args.out.clone().ok_or_else(|| usage("--out is required"))?;
    let seed = args.seed.unwrap_or(0);

    let targets: Vec<Target> = match &args.mirror {
        Some(dir) => {
            if args.n.is_some() || args.m.is_some() || args.count.is_some() {
                return Err(usage("--mirror cannot be combined with --n, --m or --count"));
            }
            let reference = load_corpus(dir)?;
            targets_of(&reference)
                .into_iter()
                .map(|t| Target {
                    d_max: args.dmax.unwrap_or(t.d_max),
                    ..t
                })
                .collect()
        }
        None => {
            let (Some(n), Some(m)) = (args.n, args.m) else {
                return Err(usage("either --mirror or both --n and --m are required"));
            };
            let count = args.count.unwrap_or(1);
            if count == 0 {
                return Err(usage("--count must be at least 1"));
            }
            let d_max = args.dmax.unwrap_or(n.saturating_sub(1));
            vec![Target { n, m, d_max }; count]
        }
    };

    let mut opts = GenerateOptions::new(method, seed);
    opts.hsg = HsgOptions {
        model: args.model,
        use_dmax_limit: !args.no_dmax,
        use_truncation_k: !args.no_k,
        batch_halving: !args.no_halving,
    };
    opts.attach_m = args.attach_m;
    opts.ring_k = args.ring_k;
    if let Some(p) = args.rewire_p {
        opts.rewire_p = p;
    }
    let graphs = opts.generate_corpus(&targets)?;
    let manifest = CorpusManifest::describe(&method.to_string(), &graphs).with_generator(json!({
        "command": "generate",
        "seed": seed,
        "config": args,
        "version": env!("CARGO_PKG_VERSION"),
    }));
    write_corpus(&out, &manifest, &graphs)?;
    println!("wrote {} graphs to {} (checksum {})", graphs.len(), out.display(), manifest.checksum);
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    let args = args.merged()?;
    let kind = args
        .kind
        .or(args.params.as_ref().map(CorpusParams::kind))
        .ok_or_else(|| usage("corpus kind is required"))?;
    let out = args.out.clone().ok_or_else(|| usage("--out is required"))?;
    let count = args.count.unwrap_or(200);
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let mut spec = CorpusSpec::new(kind, args.seed.unwrap_or(0)).with_count(count);
    if let Some(params) = &args.params {
        if params.kind() != kind {
            return Err(usage(format!("params are for `{}`, not `{}`", params.kind().name(), kind.name())));
        }
        spec.params = params.clone();
    }
    let graphs = spec.build()?;
    let manifest = CorpusManifest::describe(kind.name(), &graphs).with_generator(json!({
        "command": "synth",
        "seed": spec.seed,
        "config": SynthArgs { params: Some(spec.params.clone()), count: Some(count), ..args },
        "version": env!("CARGO_PKG_VERSION"),
    }));
    write_corpus(&out, &manifest, &graphs)?;
    println!("wrote {} {} graphs to {}", graphs.len(), kind.name(), out.display());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<()> {
    let args = args.merged()?;
    let (Some(reference), Some(generated)) = (&args.reference, &args.generated) else {
        return Err(usage("reference and generated corpus directories are required"));
    };
    let mut config = MetricConfig::default();
    let set = |k: &mut KernelConfig, sigma: Option<f64>| {
        if let Some(s) = sigma {
            k.sigma = s;
        }
    };
    set(&mut config.degree, args.deg_sigma);
    set(&mut config.clustering, args.clus_sigma);
    set(&mut config.orbit, args.orbit_sigma);

    let report = EvalReport::compute(reference, generated, &config)?;
    let format = args.format.unwrap_or_default();
    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        ReportFormat::Csv => report.to_csv(),
    };
    let out = args.out.clone().unwrap_or_else(|| {
        PathBuf::from(match format {
            ReportFormat::Json => "mmd_report.json",
            ReportFormat::Csv => "mmd_report.csv",
        })
    });
    fs::write(&out, &text).with_context(|| format!("writing {}", out.display()))?;
    print!("{text}");
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<()> {
    let args = args.merged()?;
    if args.n.is_empty() {
        return Err(usage("--n is required"));
    }
    let c = args.c.unwrap_or(0.05);
    let runs = args.runs.unwrap_or(5);
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let seed = args.seed.unwrap_or(0);

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &n in &args.n {
        if n < 2 {
            return Err(usage(format!("--n values must be at least 2, got {n}")));
        }
        let m = edges_for_sparsity(n, c);
        let d_max = args.dmax.unwrap_or(n - 1);
        let mut these = Vec::with_capacity(runs);
        for run in 0..runs {
            let cfg = hisgen::GeneratorConfig::new(n, m, d_max)
                .with_seed(hisgen::rng::derive_seed(seed, (rows.len() + run) as u64));
            these.push(PhaseTimings::measure(&cfg, run)?);
        }
        summaries.push(TimingSummary::of(&these));
        rows.extend(these);
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "row", "run", "n", "m", "d_max", "seed", "t1_parse", "t2_connect", "t3_densify", "total", "f1", "f2", "f3",
    ])?;
    for r in &rows {
        let f = r.fractions();
        w.write_record([
            "run".to_string(),
            r.run.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.d_max.to_string(),
            r.seed.to_string(),
            r.t1_parse.to_string(),
            r.t2_connect.to_string(),
            r.t3_densify.to_string(),
            r.total().to_string(),
            f[0].to_string(),
            f[1].to_string(),
            f[2].to_string(),
        ])?;
    }
    for s in &summaries {
        w.write_record([
            "mean".to_string(),
            s.runs.to_string(),
            s.n.to_string(),
            s.m.to_string(),
            args.dmax.unwrap_or(s.n - 1).to_string(),
            seed.to_string(),
            s.t1_parse.to_string(),
            s.t2_connect.to_string(),
            s.t3_densify.to_string(),
            s.total.to_string(),
            s.f1.to_string(),
            s.f2.to_string(),
            s.f3.to_string(),
        ])?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    match &args.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            for s in &summaries {
                println!("n={} m={} total={:.4}s t3 share={:.3}", s.n, s.m, s.total, s.f3);
            }
        }
        None => print!("{text}"),
    }
    if summaries.len() >= 2 {
        let pts: Vec<(f64, f64)> = summaries.iter().map(|s| (s.n as f64, s.total)).collect();
        eprintln!("log-log slope of total time vs n: {:.3}", loglog_slope(&pts));
    }
    Ok(())
}

/// Exit code for a failed command: 1 for usage and configuration problems,
/// 2 for unreadable or malformed data, 3 for anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<hisgen::Error>() {
            return match e {
                hisgen::Error::InvalidParameter(_)
                | hisgen::Error::InvalidConfig(_)
                | hisgen::Error::DegenerateSupport { .. }
                | hisgen::Error::InvalidInput(_) => 1,
                hisgen::Error::Format { .. }
                | hisgen::Error::Io { .. }
                | hisgen::Error::InvalidNode { .. }
                | hisgen::Error::InvalidEdge { .. } => 2,
                hisgen::Error::ExhaustedCapacity(_) => 3,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
