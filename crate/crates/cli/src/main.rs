use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hyperon_qfim::dephasing::KernelVariant;
use hyperon_qfim::state::{parse_presets, Channel};
use hyperon_qfim::{NoiseModel, PhysicsParams};
use hyperon_qfim_cli::check::{run_checks, CheckConfig};
use hyperon_qfim_cli::figure::{figure_table, FigureId};
use hyperon_qfim_cli::grid::Grid;
use hyperon_qfim_cli::sweep::{describe, resolve_channel, run_sweep, SweepConfig};
use hyperon_qfim_cli::table::{Cell, Format, Table};
use hyperon_qfim_cli::with_threads;

#[derive(Parser)]
#[command(name = "hyperon-qfim", version, about = "Quantum Fisher information bounds for hyperon-antihyperon pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds on a parameter grid
    Sweep(Box<SweepArgs>),
    /// Emit a named figure dataset (f2a..f10)
    Figure(FigureArgs),
    /// Run the cross-oracle self-check
    Check(CheckArgs),
    /// Print the channel presets
    Channel(ChannelArgs),
}

#[derive(Args)]
struct Output {
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (all cores when omitted)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Preset channel name (Lambda, SigmaPlus, XiMinus, XiZero or a preset-file entry)
    #[arg(long, conflicts_with_all = ["dphi", "free"])]
    channel: Option<String>,
    /// Plain-text preset file: `name alpha_psi delta_phi` per line
    #[arg(long)]
    presets: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Relative phase for the constrained parametrization
    #[arg(long, allow_hyphen_values = true)]
    dphi: Option<f64>,
    /// Use independent beta and gamma
    #[arg(long, requires_all = ["alpha", "beta", "gamma"])]
    free: bool,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// start:stop:count, accepts pi expressions
    #[arg(long, default_value = "0:pi:181")]
    phi_grid: Grid,
    #[arg(long)]
    alpha_grid: Option<Grid>,
    #[arg(long)]
    time_grid: Option<Grid>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// literal or normalized
    #[arg(long, default_value = "normalized")]
    kernel: KernelVariant,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FigureArgs {
    /// f2a, f2b, f3a, f3b, f4a, f4b, f5a, f5b, f6, f7, f8, f9 or f10
    id: FigureId,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    /// Sample points per check; 0 skips every check
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long)]
    presets: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

fn read_presets(path: &Option<PathBuf>) -> anyhow::Result<Option<String>> {
    path.as_ref()
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .transpose()
}

fn sweep_params(args: &SweepArgs) -> anyhow::Result<PhysicsParams> {
    let presets = read_presets(&args.presets)?;
    if let Some(name) = &args.channel {
        let p = resolve_channel(name, presets.as_deref())?;
        return match args.alpha {
            Some(a) => Ok(p.with_alpha(a)?),
            None => Ok(p),
        };
    }
    match (args.free, args.alpha, args.dphi, args.beta, args.gamma) {
        (true, Some(a), None, Some(b), Some(g)) => Ok(PhysicsParams::free(a, b, g)?),
        (false, Some(a), Some(d), None, None) => Ok(PhysicsParams::constrained(a, d)?),
        _ => bail!("give --channel NAME, --alpha X --dphi Y, or --free --alpha X --beta B --gamma G"),
    }
}

fn sweep_config(args: &SweepArgs) -> anyhow::Result<SweepConfig> {
    let mut cfg = SweepConfig::new(sweep_params(args)?, args.phi_grid);
    cfg.alpha_grid = args.alpha_grid;
    cfg.time_grid = args.time_grid;
    cfg.noise = match (args.tau, args.mu) {
        (Some(tau), Some(mu)) => Some(NoiseModel::new(tau, mu, args.kernel)?),
        (None, None) => None,
        _ => bail!("--tau and --mu must be given together"),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit(table: &Table, output: &Output) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            table.write(&mut w, output.format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(&mut w, output.format)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn channel_table(presets: Option<&str>) -> anyhow::Result<Table> {
    let mut table = Table::new(["name", "alpha_psi", "delta_phi", "beta_psi", "gamma_psi"]);
    let mut entries: Vec<(String, PhysicsParams)> =
        Channel::ALL.iter().map(|&c| (c.name().to_string(), hyperon_qfim::state::preset_channel(c))).collect();
    if let Some(text) = presets {
        for e in parse_presets::<f64>(text)? {
            match entries.iter_mut().find(|(n, _)| n.eq_ignore_ascii_case(&e.name)) {
                Some(slot) => slot.1 = e.params,
                None => entries.push((e.name, e.params)),
            }
        }
    }
    for (name, p) in entries {
        let (beta, gamma) = p.derived_params()?;
        let dphi = match p.mode {
            hyperon_qfim::state::Parametrization::Constrained { delta_phi } => delta_phi,
            hyperon_qfim::state::Parametrization::Free { .. } => f64::NAN,
        };
        table.push(vec![Cell::Text(name), Cell::Num(p.alpha), Cell::Num(dphi), Cell::Num(beta), Cell::Num(gamma)]);
    }
    Ok(table)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sweep(args) => {
            let cfg = sweep_config(&args)?;
            eprintln!("sweep: {} over {} points", describe(&cfg.params), cfg.points().len());
            let table = with_threads(args.output.threads, || run_sweep(&cfg))??;
            emit(&table, &args.output)?;
        }
        Command::Figure(args) => {
            let table = with_threads(args.output.threads, || figure_table(args.id))??;
            emit(&table, &args.output)?;
        }
        Command::Check(args) => {
            let report = run_checks(&CheckConfig { points: args.points, seed: args.seed });
            print!("{}", report.render());
            return Ok(report.passed());
        }
        Command::Channel(args) => {
            let presets = read_presets(&args.presets)?;
            let table = channel_table(presets.as_deref())?;
            let out = Output { format: args.format, out: None, threads: None };
            emit(&table, &out)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
