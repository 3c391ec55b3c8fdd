mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperfund::exec::Exec;
use hyperfund::kernels::MassRegime;
use hyperfund::verify::Verdict;

use config::{CommandKind, Format, GridSpec, ProfileSpec, RunConfig, SourceSpec};
use error::{CliError, ConfigError};

/// Solve and verify variable-coefficient hyperbolic problems built from
/// wave-equation solutions by integral transforms.
#[derive(Parser, Debug)]
#[command(name = "hyperfund", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a solution on a grid.
    Solve(Args),
    /// Check the Wronskian identity of the kernel on a (b, t) grid.
    Identities(Args),
    /// Residual of the defining equation on a grid.
    Residual(Args),
    /// Split a de Sitter Cauchy solution into front and tail.
    Tail(Args),
    /// Fit and test the power-law tail bound.
    Tlin(Args),
    /// Run the command named in the config file.
    Run(Args),
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum RegimeArg {
    Large,
    Small,
}

#[derive(clap::Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct Args {
    /// JSON run configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// kg-real, kg-imag, tricomi, desitter, anti-desitter, edes, desitter-kg.
    #[arg(long)]
    family: Option<String>,
    /// Klein-Gordon mass.
    #[arg(long)]
    m: Option<f64>,
    /// Tricomi exponent.
    #[arg(long)]
    k: Option<f64>,
    /// Einstein-de Sitter index.
    #[arg(long)]
    index: Option<u32>,
    /// de Sitter Klein-Gordon mass.
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    /// zero, const<v>, t, t<p>, sin_t, gaussian, bump.
    #[arg(long)]
    source: Option<SourceSpec>,
    /// zero, heaviside, gaussian.
    #[arg(long)]
    phi0: Option<ProfileSpec>,
    #[arg(long)]
    phi1: Option<ProfileSpec>,
    /// Weighted Einstein-de Sitter problem.
    #[arg(long)]
    weighted: bool,
    /// x_min,x_max,nx,t_min,t_max,nt
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Largest t of the identity grid.
    #[arg(long)]
    t_max: Option<f64>,
    /// Identity grid size per axis.
    #[arg(long)]
    n: Option<usize>,
    /// Pass threshold of identities or residual.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Residual stencil half-width.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

fn apply(args: &Args, cfg: &mut RunConfig, kind: CommandKind) {
    let f = &mut cfg.family;
    if let Some(v) = &args.family {
        f.name = v.clone();
    }
    if let Some(v) = args.m {
        f.m = v;
    }
    if let Some(v) = args.k {
        f.k = v;
    }
    if let Some(v) = args.index {
        f.index = v;
    }
    if let Some(v) = args.mass {
        f.mass = v;
    }
    if let Some(r) = args.regime {
        f.regime = match r {
            RegimeArg::Large => MassRegime::Large,
            RegimeArg::Small => MassRegime::Small,
        };
    }
    if let Some(s) = &args.source {
        cfg.data.source = Some(s.clone());
    }
    if let Some(p) = &args.phi0 {
        cfg.data.phi0 = Some(p.clone());
    }
    if let Some(p) = &args.phi1 {
        cfg.data.phi1 = Some(p.clone());
    }
    cfg.data.weighted |= args.weighted;
    if let Some(g) = args.grid {
        cfg.grid = g;
    }
    if let Some(v) = args.rel_tol {
        cfg.quad.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        cfg.quad.abs_tol = v;
    }
    if let Some(v) = args.t_max {
        cfg.identities.t_max = v;
    }
    if let Some(v) = args.n {
        cfg.identities.n = v;
    }
    if let Some(v) = args.tolerance {
        match kind {
            CommandKind::Residual => cfg.residual.tolerance = v,
            _ => cfg.identities.tolerance = v,
        }
    }
    if let Some(v) = args.h {
        cfg.residual.h = v;
    }
    if let Some(v) = args.threads {
        cfg.threads = Some(v);
    }
    if let Some(p) = &args.out {
        cfg.output.path = Some(p.clone());
    }
    if let Some(fm) = args.format {
        cfg.output.format = fm;
    }
}

fn threads(cfg: &RunConfig) -> Result<usize, ConfigError> {
    if let Ok(v) = std::env::var("HYPERFUND_THREADS") {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(ConfigError::new("HYPERFUND_THREADS", format!("expected a positive integer, got `{v}`"))),
        };
    }
    Ok(cfg.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn execute(cmd: Cmd) -> Result<Verdict, CliError> {
    let (fixed, args) = match cmd {
        Cmd::Solve(a) => (Some(CommandKind::Solve), a),
        Cmd::Identities(a) => (Some(CommandKind::Identities), a),
        Cmd::Residual(a) => (Some(CommandKind::Residual), a),
        Cmd::Tail(a) => (Some(CommandKind::Tail), a),
        Cmd::Tlin(a) => (Some(CommandKind::Tlin), a),
        Cmd::Run(a) => (None, a),
    };
    let mut cfg = match &args.config {
        Some(p) => config::load(p)?,
        None => RunConfig::default(),
    };
    let kind = match (fixed, cfg.command) {
        (Some(k), Some(c)) if k != c => {
            return Err(ConfigError::new("command", format!("config names {c:?} but {k:?} was invoked")).into());
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(ConfigError::new("command", "`run` needs a config with a command").into()),
    };
    cfg.command = Some(kind);
    apply(&args, &mut cfg, kind);
    let n = threads(&cfg)?;
    let exec = if n == 1 { Exec::Sequential } else { Exec::Parallel };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| ConfigError::new("threads", e.to_string()))?;
    let art = pool.install(|| commands::run(kind, &cfg, exec))?;
    let bytes = match cfg.output.format {
        Format::Csv => art.table.to_bytes(),
        Format::Json => serde_json::to_vec_pretty(&art.json).map(|mut v| {
            v.push(b'\n');
            v
        }).map_err(std::io::Error::other),
    };
    fn io_err(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.to_string(), source }
    }
    let bytes = bytes.map_err(io_err("output"))?;
    match &cfg.output.path {
        Some(p) => std::fs::write(p, &bytes).map_err(io_err(&p.display().to_string()))?,
        None => std::io::stdout().write_all(&bytes).map_err(io_err("stdout"))?,
    }
    let tag = if art.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
    eprintln!("{tag} {}", art.summary);
    Ok(art.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
