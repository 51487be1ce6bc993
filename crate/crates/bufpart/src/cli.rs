//! Command-line front end. Every subcommand writes one JSON document
//! (to `--out` or stdout). Exit codes: 0 success, 2 when a result fails
//! validation or a guarantee check, 1 for usage, I/O and parameter errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::balanced::{buffered_balanced_cut, cheeger2_buffered, kway_balanced};
use crate::certify::{brute_force_h_k_eps, certify_run, check_buffered_lower_bound_with};
use crate::error::{Error, Result};
use crate::graph::{validate_partition, Graph, VertexSet};
use crate::io::load_graph;
use crate::partitioner::{buffered_k_partition, AlgoConstants};
use crate::report::{to_json, Assignment};
use crate::spectral::{eigenbasis, embed, EigenMethod, EigenOptions};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "BUFPART_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bufpart", version, about = "Buffered spectral graph partitioning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Edge list: one `u v [cost]` per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Vertex weights: one `u weight` per line (default: incident cost).
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repeat for more log output on stderr.
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ε-buffered k-partition with certificate.
    Partition {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Restarts per batch (overrides the constants file).
        #[arg(long)]
        restarts: Option<usize>,
        /// JSON object with AlgoConstants fields.
        #[arg(long)]
        constants_file: Option<PathBuf>,
    },
    /// Two-threshold buffered spectral cut.
    Cheeger2 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
    /// Buffered 1/4-balanced cut.
    BalancedCut {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
    /// Buffered (6, k)-balanced partition by recursive bisection.
    Kbalanced {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Smallest eigenvalues of the normalized Laplacian.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Also write per-vertex rows `id μ ū_1 … ū_k` as TSV.
        #[arg(long)]
        embedding_tsv: Option<PathBuf>,
    },
    /// Validate a partition file and check λ_k ≤ 2φ + ε.
    Verify {
        #[command(flatten)]
        common: Common,
        /// JSON with an `assignment` object (as written by `partition`).
        #[arg(long)]
        partition: PathBuf,
        /// Buffer budget; defaults to the file's `epsilon`, else the measured ratio.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Certificate (bounds and ratios) for a partition file.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
    /// Exhaustive h^{k,ε} for graphs with at most 10 vertices.
    Brute {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum MethodArg {
    Auto,
    Dense,
    Lanczos,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Partition { common, .. }
            | Command::Cheeger2 { common, .. }
            | Command::BalancedCut { common, .. }
            | Command::Kbalanced { common, .. }
            | Command::Spectrum { common, .. }
            | Command::Verify { common, .. }
            | Command::Certify { common, .. }
            | Command::Brute { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Partition { .. } => "partition",
            Command::Cheeger2 { .. } => "cheeger2",
            Command::BalancedCut { .. } => "balanced-cut",
            Command::Kbalanced { .. } => "kbalanced",
            Command::Spectrum { .. } => "spectrum",
            Command::Verify { .. } => "verify",
            Command::Certify { .. } => "certify",
            Command::Brute { .. } => "brute",
        }
    }
}

#[derive(Serialize)]
struct GraphInfo {
    n: usize,
    m: usize,
    total_weight: f64,
}

fn graph_info(g: &Graph) -> GraphInfo {
    GraphInfo { n: g.n(), m: g.m(), total_weight: g.total_weight() }
}

/// Labels each vertex by the first set containing it.
fn side_labels(g: &Graph, sets: &[(&VertexSet, &str)]) -> Value {
    let mut m = serde_json::Map::new();
    for u in 0..g.n() {
        let l = sets.iter().find(|(s, _)| s.contains(u)).map_or("?", |(_, l)| l);
        m.insert(g.id(u).to_string(), Value::String(l.to_string()));
    }
    Value::Object(m)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("--eps {eps} outside [0, 1)")));
    }
    Ok(())
}

fn read_partition_file(g: &Graph, path: &Path, eps: Option<f64>) -> Result<crate::graph::BufferedPartition> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let v: Value = serde_json::from_str(&text)?;
    let assignment = v.get("assignment").unwrap_or(&v);
    let mut bp = Assignment::parse_partition(g, assignment, 0.0)?;
    bp.epsilon = match eps.or_else(|| v.get("epsilon").and_then(Value::as_f64)) {
        Some(e) => e,
        None => bp.measured_epsilon(g),
    };
    Ok(bp)
}

/// A JSON value with a flag saying whether every check passed.
struct Outcome {
    value: Value,
    ok: bool,
}

fn value<T: Serialize>(x: &T) -> Result<Value> {
    // Through the exact formatter, so that reports hold the printed values.
    Ok(serde_json::from_str(&to_json(x)?)?)
}

fn execute(cmd: &Command) -> Result<Outcome> {
    let c = cmd.common();
    let g = load_graph(&c.graph, c.weights.as_deref())?;
    match cmd {
        Command::Partition { k, eps, delta, restarts, constants_file, .. } => {
            check_eps(*eps)?;
            if !(*delta > 0.0 && *delta < 1.0) {
                return Err(Error::InvalidParameter(format!("--delta {delta} outside (0, 1)")));
            }
            let mut consts = match constants_file {
                Some(p) => AlgoConstants::from_json(
                    &std::fs::read_to_string(p).map_err(|source| Error::Io { path: p.display().to_string(), source })?,
                )?,
                None => AlgoConstants::default(),
            };
            if let Some(r) = restarts {
                consts.max_restarts = *r;
            }
            let kp = buffered_k_partition(&g, *k, *eps, *delta, &consts, c.seed)?;
            log::info!("{} tuples, max φ = {}", kp.partial.tuples.len(), kp.report.max_expansion);
            let ok = kp.report.is_valid() && kp.certificate.lower_bound_buffered_check;
            let p = &kp.partial;
            Ok(Outcome {
                value: json!({
                    "command": "partition",
                    "graph": value(&graph_info(&g))?,
                    "params": {"k": k, "epsilon": value(eps)?, "delta": value(delta)?, "seed": c.seed},
                    "constants": value(&consts)?,
                    "driver": value(&kp.params)?,
                    "epsilon": value(&kp.partition.epsilon)?,
                    "within_requested_epsilon": kp.within_requested_epsilon,
                    "assignment": value(&Assignment::from_partition(&g, &kp.partition))?,
                    "report": value(&kp.report)?,
                    "certificate": value(&kp.certificate)?,
                    "partial": {
                        "tuples": p.tuples.len(),
                        "expected_tuples": p.expected_tuples,
                        "max_phi": value(&p.max_phi())?,
                        "weight_condition": p.weight_condition,
                        "restart": p.restart,
                        "adjusted": value(&p.adjusted)?,
                        "separator": value(&p.separator)?,
                        "runs": value(&p.runs)?,
                    },
                }),
                ok,
            })
        }
        Command::Cheeger2 { eps, .. } => {
            let cut = cheeger2_buffered(&g, *eps)?;
            let bound = 4.0 * (1.0 + 2.0 / eps) * cut.lambda2;
            let ws = g.weight_of(&cut.s);
            let ok = cut.phi <= bound + 1e-12 && g.weight_of(&cut.b) <= 2.0 * eps * ws;
            let w = g.total_weight();
            Ok(Outcome {
                value: json!({
                    "command": "cheeger2",
                    "graph": value(&graph_info(&g))?,
                    "params": {"epsilon": value(eps)?},
                    "assignment": side_labels(&g, &[(&cut.s, "S"), (&cut.t, "T"), (&cut.b, "B")]),
                    "phi": value(&cut.phi)?,
                    "balance": value(&[ws / w, g.weight_of(&cut.t) / w])?,
                    "buffer_ratio": value(&cut.buffer_ratio)?,
                    "per_level_lambda2": value(&[cut.lambda2])?,
                    "threshold": value(&cut.threshold)?,
                    "bound": value(&bound)?,
                    "bound_holds": ok,
                }),
                ok,
            })
        }
        Command::BalancedCut { eps, .. } => {
            let bc = buffered_balanced_cut(&g, *eps)?;
            let min = g.weight_of(&bc.l).min(g.weight_of(&bc.r));
            Ok(Outcome {
                ok: bc.violations.is_empty(),
                value: json!({
                    "command": "balanced-cut",
                    "graph": value(&graph_info(&g))?,
                    "params": {"epsilon": value(eps)?},
                    "assignment": side_labels(&g, &[(&bc.l, "L"), (&bc.r, "R"), (&bc.b, "B")]),
                    "phi": value(&(bc.cut_cost / min))?,
                    "cut_cost": value(&bc.cut_cost)?,
                    "balance": value(&bc.balance)?,
                    "buffer_ratio": value(&bc.buffer_ratio)?,
                    "per_level_lambda2": value(&bc.per_level_lambda2())?,
                    "levels": value(&bc.levels)?,
                    "violations": bc.violations,
                }),
            })
        }
        Command::Kbalanced { k, eps, .. } => {
            let kw = kway_balanced(&g, *k, *eps)?;
            Ok(Outcome {
                ok: kw.violations.is_empty(),
                value: json!({
                    "command": "kbalanced",
                    "graph": value(&graph_info(&g))?,
                    "params": {"k": k, "epsilon": value(eps)?},
                    "assignment": value(&Assignment::from_shared(&g, &kw.parts, &kw.buffer))?,
                    "cost": value(&kw.cost)?,
                    "balance": value(&kw.balance)?,
                    "buffer_fraction": value(&kw.buffer_fraction)?,
                    "violations": kw.violations,
                }),
            })
        }
        Command::Spectrum { k, method, embedding_tsv, .. } => {
            let method = match method {
                MethodArg::Auto => EigenMethod::Auto,
                MethodArg::Dense => EigenMethod::Dense,
                MethodArg::Lanczos => EigenMethod::Lanczos,
            };
            let basis = eigenbasis(&g, *k, &EigenOptions { method, seed: c.seed, ..Default::default() })?;
            if let Some(path) = embedding_tsv {
                let e = embed(&g, &basis)?;
                let mut s = String::new();
                for u in 0..g.n() {
                    s.push_str(g.id(u));
                    s.push_str(&format!("\t{:.16e}", e.measure(u)));
                    for x in e.bar(u) {
                        s.push_str(&format!("\t{x:.16e}"));
                    }
                    s.push('\n');
                }
                std::fs::write(path, s).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            }
            Ok(Outcome {
                ok: true,
                value: json!({
                    "command": "spectrum",
                    "graph": value(&graph_info(&g))?,
                    "params": {"k": k},
                    "eigenvalues": value(&basis.values)?,
                    "residuals": value(&basis.residuals)?,
                    "method": value(&basis.method)?,
                    "matvecs": basis.matvecs,
                }),
            })
        }
        Command::Verify { partition, eps, .. } => {
            let bp = read_partition_file(&g, partition, *eps)?;
            let report = validate_partition(&g, &bp);
            let check = if report.is_valid() && bp.k() <= g.n() {
                let lk = eigenbasis(&g, bp.k(), &EigenOptions { seed: c.seed, ..Default::default() })?.lambda(bp.k());
                Some(check_buffered_lower_bound_with(&g, &bp, lk)?)
            } else {
                None
            };
            let ok = report.is_valid() && check.as_ref().map_or(false, |c| c.pass);
            Ok(Outcome {
                ok,
                value: json!({
                    "command": "verify",
                    "graph": value(&graph_info(&g))?,
                    "epsilon": value(&bp.epsilon)?,
                    "valid": report.is_valid(),
                    "report": value(&report)?,
                    "buffered_check": value(&check)?,
                }),
            })
        }
        Command::Certify { partition, eps, delta, .. } => {
            if !(*delta > 0.0 && *delta < 1.0) {
                return Err(Error::InvalidParameter(format!("--delta {delta} outside (0, 1)")));
            }
            let bp = read_partition_file(&g, partition, None)?;
            let k = bp.k();
            if k < 1 || k > g.n() {
                return Err(Error::InvalidParameter(format!("partition has {k} parts for {} vertices", g.n())));
            }
            let k_hat = (((1.0 + delta) * k as f64).floor() as usize).clamp(k, g.n());
            let basis = eigenbasis(&g, k_hat, &EigenOptions { seed: c.seed, ..Default::default() })?;
            let epsilon = eps.unwrap_or(bp.epsilon);
            check_eps(epsilon)?;
            let cert = certify_run(&g, k, epsilon, *delta, &bp, &basis)?;
            Ok(Outcome {
                ok: cert.lower_bound_buffered_check,
                value: json!({
                    "command": "certify",
                    "graph": value(&graph_info(&g))?,
                    "certificate": value(&cert)?,
                }),
            })
        }
        Command::Brute { k, eps, .. } => {
            check_eps(*eps)?;
            let (opt, witness) = brute_force_h_k_eps(&g, *k, *eps)?;
            let lk = eigenbasis(&g, *k, &EigenOptions { seed: c.seed, ..Default::default() })?.lambda(*k);
            let ok = lk <= 2.0 * opt + eps + crate::certify::BOUND_TOL;
            Ok(Outcome {
                ok,
                value: json!({
                    "command": "brute",
                    "graph": value(&graph_info(&g))?,
                    "params": {"k": k, "epsilon": value(eps)?},
                    "optimum": value(&opt)?,
                    "assignment": value(&Assignment::from_partition(&g, &witness))?,
                    "lambda_k": value(&lk)?,
                    "lower_bound_unbuffered": value(&(lk / 2.0))?,
                    "buffered_bound_holds": ok,
                }),
            })
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let cmd = &cli.command;
    let out = cmd.common().out.clone();
    let (doc, code) = match execute(cmd) {
        Ok(o) => (o.value, if o.ok { 0 } else { 2 }),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            (json!({"command": cmd.name(), "error": e.to_string(), "exit_code": code}), code)
        }
    };
    let text = match to_json(&doc) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Err(e) = emit(out.as_deref(), &text) {
        eprintln!("error: {e}");
        return 1;
    }
    code
}

/// Entry point of the binary: parses arguments, configures logging and the
/// thread pool from the environment, runs the command.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.command.common().verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).init();
    if let Ok(t) = std::env::var(THREADS_ENV) {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("warning: could not size the thread pool: {e}");
                }
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {t:?}");
                return 1;
            }
        }
    }
    run(&cli)
}
