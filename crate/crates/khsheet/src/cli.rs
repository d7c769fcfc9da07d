use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use khsheet_core::simulator::Method;
use khsheet_core::BackgroundState;

use crate::commands;
use crate::config::{Format, InitialData, RunConfig, Sweep};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use crate::output::{emit, Report};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "KHSHEET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "khsheet", version, about = "Linear stability of elastic compressible vortex sheets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersion roots, window classification and bound constants over a (K, M) sweep.
    Analyze(AnalyzeArgs),
    /// Sample a normal mode on an (x1, x2) grid.
    Mode(ModeArgs),
    /// Evolve one Fourier mode in time and compare growth with the predicted rate.
    Simulate(SimulateArgs),
    /// Norms of the ill-posedness sequence before and after growth.
    Hadamard(HadamardArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Summary JSON path in csv format.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Directory for x/y column files.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BackgroundArgs {
    #[arg(long, conflicts_with_all = ["k", "m"])]
    pub rho_dot: Option<f64>,
    #[arg(long, conflicts_with_all = ["k", "m"], allow_hyphen_values = true)]
    pub v1_plus: Option<f64>,
    #[arg(long, conflicts_with_all = ["k", "m"], allow_hyphen_values = true)]
    pub g11_plus: Option<f64>,
    #[arg(long, conflicts_with_all = ["k", "m"], allow_hyphen_values = true)]
    pub g12_plus: Option<f64>,
    /// Sound speed.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Elastic number; with --m, builds a unit-density state with the deformation row along e1.
    #[arg(long)]
    pub k: Option<f64>,
    /// Mach number.
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Elastic numbers: `a,b,c` or `start:stop:count`.
    #[arg(long, value_parser = Sweep::parse, allow_hyphen_values = true)]
    pub k: Option<Sweep>,
    /// Mach numbers: `a,b,c` or `start:stop:count`.
    #[arg(long, value_parser = Sweep::parse, allow_hyphen_values = true)]
    pub m: Option<Sweep>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub eps0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub background: BackgroundArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Growth rate `re,im`; the unstable root when absent.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau: Option<[f64; 2]>,
    /// Front amplitude `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub g_hat: Option<[f64; 2]>,
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub background: BackgroundArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Grid points per half-line.
    #[arg(long = "points")]
    pub n: Option<usize>,
    /// Half-line length.
    #[arg(long = "length")]
    pub l: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long = "t-end")]
    pub t: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    #[arg(long, value_parser = parse_initial)]
    pub initial: Option<InitialData>,
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub background: BackgroundArgs,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long = "k-reg")]
    pub k_reg: Option<u32>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub cbar: Option<f64>,
    /// Band indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("'{s}' is not re or re,im")),
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("method must be auto, dense or krylov, not '{s}'"))
}

fn parse_initial(s: &str) -> Result<InitialData, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("initial must be pulse or mode, not '{s}'"))
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn load(common: &Common) -> CliResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out = &mut cfg.output;
    if common.output.is_some() {
        out.path = common.output.clone();
    }
    set(&mut out.format, common.format);
    if common.summary.is_some() {
        out.summary = common.summary.clone();
    }
    if common.plot_data.is_some() {
        out.plot_data = common.plot_data.clone();
    }
    Ok(cfg)
}

/// Merges the background flags into the configured state.
fn apply_background(b: &BackgroundArgs, cfg: &mut RunConfig) -> CliResult<()> {
    let base = cfg.background;
    if b.k.is_some() || b.m.is_some() {
        let (k, m) = match (b.k, b.m, base) {
            (Some(k), Some(m), _) => (k, m),
            (k, m, Some(s)) => {
                let (k0, m0) = s.elastic_parameters()?;
                (k.unwrap_or(k0), m.unwrap_or(m0))
            }
            _ => return Err(CliError::usage("--k and --m both needed when the config has no background")),
        };
        let c = b.c.or(base.map(|s| s.c)).unwrap_or(1.0);
        let eps0 = b.eps0.or(base.map(|s| s.eps0)).unwrap_or(khsheet_core::state::DEFAULT_EPS0);
        cfg.background = Some(BackgroundState::from_dimensionless(k, m, c, eps0)?);
        return Ok(());
    }
    let given = [b.rho_dot, b.v1_plus, b.g11_plus, b.g12_plus, b.c, b.eps0];
    if given.iter().all(Option::is_none) {
        return Ok(());
    }
    let s = match base {
        Some(mut s) => {
            set(&mut s.rho_dot, b.rho_dot);
            set(&mut s.v1_plus, b.v1_plus);
            set(&mut s.g11_plus, b.g11_plus);
            set(&mut s.g12_plus, b.g12_plus);
            set(&mut s.c, b.c);
            set(&mut s.eps0, b.eps0);
            s
        }
        None => match (b.rho_dot, b.v1_plus, b.g11_plus, b.g12_plus, b.c) {
            (Some(r), Some(v), Some(g1), Some(g2), Some(c)) => BackgroundState {
                rho_dot: r,
                v1_plus: v,
                g11_plus: g1,
                g12_plus: g2,
                c,
                eps0: b.eps0.unwrap_or(khsheet_core::state::DEFAULT_EPS0),
            },
            _ => {
                return Err(CliError::usage(
                    "without a configured background, give --rho-dot, --v1-plus, --g11-plus, --g12-plus and --c, or --k and --m",
                ))
            }
        },
    };
    cfg.background = Some(s);
    Ok(())
}

fn execute(command: Command) -> CliResult<(Report, RunConfig)> {
    match command {
        Command::Analyze(a) => {
            let mut cfg = load(&a.common)?;
            let s = &mut cfg.analyze;
            set(&mut s.k, a.k);
            set(&mut s.m, a.m);
            set(&mut s.c, a.c);
            set(&mut s.eps0, a.eps0);
            Ok((commands::analyze::run(&cfg.analyze)?, cfg))
        }
        Command::Mode(a) => {
            let mut cfg = load(&a.common)?;
            apply_background(&a.background, &mut cfg)?;
            let s = &mut cfg.mode;
            set(&mut s.eta, a.eta);
            set(&mut s.g_hat, a.g_hat);
            set(&mut s.t, a.t);
            if a.tau.is_some() {
                s.tau = a.tau;
            }
            let state = cfg.state()?;
            Ok((commands::mode::run(&state, &cfg.mode)?, cfg))
        }
        Command::Simulate(a) => {
            let mut cfg = load(&a.common)?;
            apply_background(&a.background, &mut cfg)?;
            let s = &mut cfg.simulate;
            set(&mut s.eta, a.eta);
            set(&mut s.n, a.n);
            set(&mut s.l, a.l);
            set(&mut s.t, a.t);
            set(&mut s.cfl, a.cfl);
            set(&mut s.method, a.method);
            set(&mut s.initial, a.initial);
            if a.dt.is_some() {
                s.dt = a.dt;
            }
            let state = cfg.state()?;
            Ok((commands::simulate::run(&state, &cfg.simulate)?, cfg))
        }
        Command::Hadamard(a) => {
            let mut cfg = load(&a.common)?;
            apply_background(&a.background, &mut cfg)?;
            let s = &mut cfg.hadamard;
            set(&mut s.j, a.j);
            set(&mut s.k, a.k_reg);
            set(&mut s.t0, a.t0);
            set(&mut s.cbar, a.cbar);
            set(&mut s.n_list, a.n_list);
            if a.alpha.is_some() {
                s.alpha = a.alpha;
            }
            commands::hadamard::validate(&cfg.hadamard)?;
            let state = cfg.state()?;
            Ok((commands::hadamard::run(&state, &cfg.hadamard)?, cfg))
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, not '{text}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::usage(e.to_string()))
}

/// Runs the command line and returns the process exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|_| execute(cli.command)).and_then(|(report, cfg)| emit(&report, &cfg.output));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("khsheet: error: {e}");
            e.exit_code()
        }
    }
}
