//! The `neurolds` command line.
//!
//! Exit codes: 0 on success, 1 on runtime errors, 2 on flag errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use neurolds_core::bench::{
    borehole, integrate, mc_estimate, sensitivity, weights_from_sensitivity, BoreholeSpec, BOREHOLE_PARAMS,
    REFERENCE_SAMPLES, REFERENCE_SEED, TABLE_GRID,
};
use neurolds_core::hash::split_seed;
use neurolds_core::rrt::{
    precompute_sources, rep_rotation, rrt_plan, ChainEnv, ChainGeometry, RrtConfig, RrtSource, DEFAULT_WIDTHS,
};
use neurolds_core::seq::{owen_scramble, Sequence, SequenceKind, SequenceSpec};
use neurolds_core::trainer::{NoClock, SequentialEvaluator, TrainConfig, TrainError, Trainer};
use neurolds_core::{KernelFamily, KernelSpec, PointBuffer};

use crate::io;
use crate::parallel::{discrepancy_all_prefixes_par, success_rate_par, thread_pool, ParallelEvaluator, WallClock};

const AFTER_HELP: &str = "\
Seeds: every randomized step is keyed by --seed (default 0). Sub-seeds are
split_seed(seed, k) = splitmix64 output k of a generator started at seed:
  plan      k = 0 tunnel placements, k = 1 + i source i
The Borehole reference value uses 2^21 IID samples with the fixed seed 2021.

CSV outputs:
  generate, scramble   x1,...,xd
  disc                 P,<kernel>,...
  integrate            N,abs_error
  sensitivity          param,S1,ST
  plan                 source,width,success_pct
  train --log-out      stage,epoch,loss,lr,seconds";

#[derive(Debug, Parser)]
#[command(
    name = "neurolds",
    version,
    about = "Generate, train and evaluate low-discrepancy sequences",
    arg_required_else_help = true,
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output file (stdout if omitted). `.bin` selects binary point files.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Master seed for all randomized behavior.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the O(N²) loops and RRT repetitions.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Byte-identical output across runs: fixed-order reductions and no
    /// wall-clock timings in logs.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the first N points of a sequence.
    Generate(GenerateArgs),
    /// All-prefix L2 discrepancies of a point file.
    Disc(DiscArgs),
    /// Pretrain and fine-tune a neural sequence.
    Train(TrainArgs),
    /// Owen-scramble the points of a file (coordinates as 32-bit fractions).
    Scramble(ScrambleArgs),
    /// Absolute integration errors at a grid of N.
    Integrate(IntegrateArgs),
    /// Saltelli/Jansen Sobol' indices of the Borehole function.
    Sensitivity(SensitivityArgs),
    /// RRT success rates for the kinematic chain in a tunnel.
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// vdc, halton, sobol, sobol-scrambled, uniform or neural.
    #[arg(long)]
    kind: SequenceKind,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    /// Model file for `--kind neural`.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Sobol' direction-number file (default: embedded table, d ≤ 21).
    #[arg(long)]
    directions: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiscArgs {
    /// Point file (CSV or `.bin`).
    #[arg(long)]
    input: PathBuf,
    /// Kernel families: star, ext, per, ctr, sym, asd.
    #[arg(long, value_delimiter = ',', default_value = "sym")]
    kernel: Vec<KernelFamily>,
    /// Product weights γ, one per coordinate.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Only report these prefix lengths.
    #[arg(long, value_delimiter = ',')]
    prefixes: Option<Vec<usize>>,
    /// Only report the full set.
    #[arg(long, conflicts_with = "prefixes")]
    last: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Loss family; selects the tuned defaults.
    #[arg(long, default_value = "sym")]
    loss: KernelFamily,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    n: usize,
    /// `key: value` configuration file applied over the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `key=value` override, applied last; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Where to write the model (and its `.meta` sidecar).
    #[arg(long)]
    model_out: PathBuf,
    /// CSV training log.
    #[arg(long)]
    log_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScrambleArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Integrand {
    /// 8-dimensional Borehole flow rate.
    Borehole,
    /// Π x_j on [0,1]^dim (exact value 2^-dim).
    Product,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "borehole")]
    integrand: Integrand,
    /// Dimension of `product`.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    kind: SequenceKind,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    #[arg(long)]
    model: Option<PathBuf>,
    /// Error checkpoints (default 20,60,...,500).
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    /// Reference value; Borehole defaults to a 2^21-sample Monte Carlo run.
    #[arg(long)]
    reference: Option<f64>,
}

#[derive(Debug, Args)]
struct SensitivityArgs {
    #[arg(long, default_value_t = 8192)]
    base_n: usize,
    /// Floor of the derived product weights.
    #[arg(long, default_value_t = 0.001)]
    floor: f64,
    /// Also write the weights γ (one per line).
    #[arg(long)]
    weights_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long, value_delimiter = ',', default_value = "uniform,halton,sobol")]
    sources: Vec<SequenceKind>,
    /// Model file for a `neural` source (must be 4-dimensional).
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    widths: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Maximum RRT iterations K (also the precomputed sequence length).
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    #[arg(long, default_value_t = 0.05)]
    goal_tolerance: f64,
    /// Precomputed sequences per randomized source.
    #[arg(long, default_value_t = 10)]
    sequences: usize,
    /// Dump the tree of the first source, first width, repetition 0.
    #[arg(long)]
    tree_out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let c = &cli.common;
    match &cli.command {
        Command::Generate(a) => cmd_generate(c, a),
        Command::Disc(a) => cmd_disc(c, a),
        Command::Train(a) => cmd_train(c, a),
        Command::Scramble(a) => cmd_scramble(c, a),
        Command::Integrate(a) => cmd_integrate(c, a),
        Command::Sensitivity(a) => cmd_sensitivity(c, a),
        Command::Plan(a) => cmd_plan(c, a),
    }
}

/// Writes text to `--output` or stdout.
fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_points(common: &Common, points: &PointBuffer) -> Result<()> {
    match &common.output {
        Some(p) => Ok(io::write_points(p, points)?),
        None => {
            let mut out = std::io::stdout().lock();
            Ok(io::write_points_csv(&mut out, points)?)
        }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?)
}

fn load_model(path: &Option<PathBuf>) -> Result<Arc<neurolds_core::MlpModel>> {
    let path = path.as_ref().context("neural sequences need --model")?;
    Ok(Arc::new(io::load_model(path)?))
}

/// Builds a sequence; `dim` may be omitted for neural sequences.
fn build_sequence(
    kind: SequenceKind,
    dim: Option<usize>,
    burn_in: u64,
    seed: u64,
    model: &Option<PathBuf>,
    directions: Option<&Path>,
) -> Result<Sequence> {
    if kind == SequenceKind::Neural {
        let m = load_model(model)?;
        let spec = SequenceSpec {
            kind,
            dim: dim.unwrap_or(m.output_dim()),
            burn_in,
            seed: None,
            model_path: model.as_ref().map(|p| p.display().to_string()),
        };
        return Ok(Sequence::neural(&spec, m)?);
    }
    let dim = dim.context("--dim is required")?;
    let mut spec = SequenceSpec::new(kind, dim).with_burn_in(burn_in);
    if kind.is_randomized() {
        spec = spec.with_seed(seed);
    }
    Ok(match directions {
        Some(p) => Sequence::with_table(&spec, &io::read_direction_table(p, Some(dim))?)?,
        None => Sequence::new(&spec)?,
    })
}

fn cmd_generate(c: &Common, a: &GenerateArgs) -> Result<()> {
    let seq = build_sequence(
        a.kind,
        a.dim,
        a.burn_in,
        c.seed.unwrap_or(0),
        &a.model,
        a.directions.as_deref(),
    )?;
    if let (SequenceKind::Neural, Some(m)) = (a.kind, &a.model) {
        let last = a.burn_in + a.n as u64;
        let n_norm = io::load_model(m)?.encoding().n_norm();
        if last > n_norm {
            eprintln!("warning: indices beyond the training length {n_norm} are extrapolated");
        }
    }
    emit_points(c, &seq.generate(a.n)?)
}

fn cmd_disc(c: &Common, a: &DiscArgs) -> Result<()> {
    let points = io::read_points(&a.input)?;
    let pool = thread_pool(c.threads)?;
    let mut curves = Vec::new();
    for &family in &a.kernel {
        let spec = match &a.weights {
            Some(w) => KernelSpec::weighted(family, w.clone())?,
            None => KernelSpec::new(family),
        };
        curves.push(discrepancy_all_prefixes_par(&pool, &spec, &points)?);
    }
    let n = points.n_points();
    let prefixes: Vec<usize> = if a.last {
        vec![n]
    } else if let Some(p) = &a.prefixes {
        if let Some(&bad) = p.iter().find(|&&p| p == 0 || p > n) {
            bail!("prefix {bad} outside 1..={n}");
        }
        p.clone()
    } else {
        (1..=n).collect()
    };
    let mut header = vec!["P"];
    header.extend(a.kernel.iter().map(|k| k.name()));
    let rows = prefixes.iter().map(|&p| {
        let mut r = vec![p.to_string()];
        r.extend(curves.iter().map(|cv| format!("{:.16e}", cv[p - 1])));
        r
    });
    emit(c, &csv_text(&header, rows)?)
}

fn cmd_train(c: &Common, a: &TrainArgs) -> Result<()> {
    let mut cfg = TrainConfig::for_loss(a.loss, a.dim, a.n);
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(path) = &a.config {
        cfg = io::read_train_config(path, cfg)?;
    }
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got `{kv}`"))?;
        cfg.set(k.trim(), v).map_err(anyhow::Error::msg)?;
    }
    let pool = thread_pool(c.threads)?;
    let parallel = ParallelEvaluator { pool: &pool };
    let wall = WallClock::start();
    let trainer = Trainer {
        clock: if c.deterministic { &NoClock } else { &wall },
        evaluator: if c.threads > 1 { &parallel } else { &SequentialEvaluator },
    };
    let outcome = match trainer.train_full(&cfg) {
        Ok(o) => o,
        Err(TrainError::Diverged {
            stage,
            epoch,
            reason,
            checkpoint,
            log,
        }) => {
            io::save_model(&a.model_out, &checkpoint)?;
            if let Some(p) = &a.log_out {
                io::write_log(p, &log)?;
            }
            bail!("{stage} diverged at epoch {epoch} ({reason}); last good checkpoint written");
        }
        Err(TrainError::Collapsed { epoch, volume, log }) => {
            if let Some(p) = &a.log_out {
                io::write_log(p, &log)?;
            }
            bail!("points collapsed at fine-tuning epoch {epoch} (bounding box volume {volume:e})");
        }
        Err(e) => return Err(e.into()),
    };
    for w in &outcome.log.warnings {
        eprintln!("warning: {w}");
    }
    io::save_model(&a.model_out, &outcome.model)?;
    if let Some(p) = &a.log_out {
        io::write_log(p, &outcome.log)?;
    }
    emit(c, &format!("loss,{:.16e}\n", outcome.loss))
}

fn cmd_scramble(c: &Common, a: &ScrambleArgs) -> Result<()> {
    let points = io::read_points(&a.input)?;
    let scale = (1u64 << 32) as f64;
    let raw: Vec<u32> = points
        .coords()
        .iter()
        .map(|&x| (x * scale).floor().min(u32::MAX as f64) as u32)
        .collect();
    emit_points(c, &owen_scramble(&raw, points.dim(), c.seed.unwrap_or(0)))
}

type ScalarFn = Box<dyn Fn(&[f64]) -> f64>;

fn cmd_integrate(c: &Common, a: &IntegrateArgs) -> Result<()> {
    let spec = BoreholeSpec::default();
    let (dim, f): (usize, ScalarFn) = match a.integrand {
        Integrand::Borehole => (
            8,
            Box::new(move |u: &[f64]| borehole(u, &spec).expect("8-dimensional input")),
        ),
        Integrand::Product => (a.dim, Box::new(|u: &[f64]| u.iter().product())),
    };
    let reference = match (a.reference, a.integrand) {
        (Some(r), _) => r,
        (None, Integrand::Product) => 0.5f64.powi(dim as i32),
        (None, Integrand::Borehole) => mc_estimate(&f, dim, REFERENCE_SAMPLES, REFERENCE_SEED)?,
    };
    let seq = build_sequence(a.kind, Some(dim), a.burn_in, c.seed.unwrap_or(0), &a.model, None)?;
    let checkpoints = a.checkpoints.clone().unwrap_or_else(|| TABLE_GRID.to_vec());
    let n = checkpoints.iter().copied().max().context("no checkpoints")?;
    let result = integrate(&seq, &f, n, &checkpoints, Some(reference))?;
    let rows = result
        .checkpoints
        .iter()
        .map(|cp| vec![cp.n.to_string(), format!("{:.16e}", cp.abs_error.unwrap_or(f64::NAN))]);
    emit(c, &csv_text(&["N", "abs_error"], rows)?)
}

fn cmd_sensitivity(c: &Common, a: &SensitivityArgs) -> Result<()> {
    let spec = BoreholeSpec::default();
    let result = sensitivity(
        |u| borehole(u, &spec).expect("8-dimensional input"),
        8,
        a.base_n,
        c.seed.unwrap_or(0),
    )?;
    if let Some(p) = &a.weights_out {
        let g = weights_from_sensitivity(&result, a.floor)?;
        let text: String = g.iter().map(|v| format!("{v:.6}\n")).collect();
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    let rows = (0..8).map(|i| {
        vec![
            BOREHOLE_PARAMS[i].to_string(),
            format!("{:.6}", result.first_order[i]),
            format!("{:.6}", result.total[i]),
        ]
    });
    emit(c, &csv_text(&["param", "S1", "ST"], rows)?)
}

fn cmd_plan(c: &Common, a: &PlanArgs) -> Result<()> {
    let seed = c.seed.unwrap_or(0);
    let cfg = RrtConfig {
        max_iterations: a.iterations,
        step: a.step,
        goal_tolerance: a.goal_tolerance,
    };
    cfg.validate()?;
    let geometry = ChainGeometry::default();
    let mut sources = Vec::new();
    for (i, &kind) in a.sources.iter().enumerate() {
        let sequences = if kind == SequenceKind::Neural {
            let model = load_model(&a.model)?;
            let spec = SequenceSpec {
                kind,
                dim: geometry.joints,
                burn_in: 0,
                seed: None,
                model_path: None,
            };
            vec![Sequence::neural(&spec, model)?.generate(a.iterations)?]
        } else {
            let mut spec = SequenceSpec::new(kind, geometry.joints);
            if kind.is_randomized() {
                spec = spec.with_seed(split_seed(seed, 1 + i as u64));
            }
            precompute_sources(&spec, a.sequences, a.iterations)?
        };
        sources.push(RrtSource {
            label: kind.name().to_string(),
            sequences,
        });
    }
    let widths = a.widths.clone().unwrap_or_else(|| DEFAULT_WIDTHS.to_vec());
    let env_seed = split_seed(seed, 0);
    if let Some(path) = &a.tree_out {
        let (src, width) = match (sources.first(), widths.first()) {
            (Some(s), Some(&w)) => (s, w),
            _ => bail!("--tree-out needs at least one source and width"),
        };
        let env = ChainEnv::new(geometry, width, rep_rotation(env_seed, 0))?;
        let mut samples = &src.sequences[0];
        let result = rrt_plan(&env, &cfg, &mut samples)?;
        let d = geometry.joints;
        let mut header = vec!["node".to_string(), "parent".to_string()];
        header.extend((1..=d).map(|j| format!("q{j}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = result
            .tree
            .nodes
            .rows()
            .zip(&result.tree.parents)
            .enumerate()
            .map(|(k, (q, p))| {
                let mut r = vec![k.to_string(), p.map_or(String::new(), |p| p.to_string())];
                r.extend(q.iter().map(|v| format!("{v:.16e}")));
                r
            });
        std::fs::write(path, csv_text(&header, rows)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let pool = thread_pool(c.threads)?;
    let table = success_rate_par(&pool, &geometry, &widths, a.reps, &sources, &cfg, env_seed)?;
    let rows = table.cells.iter().map(|cell| {
        vec![
            cell.source.clone(),
            format!("{:.2}", cell.width),
            format!("{:.2}", cell.percent()),
        ]
    });
    emit(c, &csv_text(&["source", "width", "success_pct"], rows)?)
}
