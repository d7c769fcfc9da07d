//! Run configuration: a JSON document with one section per subcommand.
//! Command-line flags are merged on top of it.

use std::path::{Path, PathBuf};

use khsheet_core::simulator::Method;
use khsheet_core::BackgroundState;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub background: Option<BackgroundState>,
    #[serde(default)]
    pub analyze: AnalyzeConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub hadamard: HadamardConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("malformed config: {e}")))
    }

    /// The validated background state.
    pub fn state(&self) -> CliResult<BackgroundState> {
        let b = self.background.ok_or_else(|| CliError::usage("missing background state"))?;
        Ok(BackgroundState::new(b.rho_dot, b.v1_plus, b.g11_plus, b.g12_plus, b.c, b.eps0)?)
    }
}

/// A list of values, or `count` equally spaced values from `start` to `stop`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    List(Vec<f64>),
    Range(Range),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::List(v) => v.clone(),
            Sweep::Range(r) => r.values(),
        }
    }

    /// `a,b,c` or `start:stop:count`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Sweep::List(Vec::new()));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"));
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range '{text}' must read start:stop:count"));
            }
            let count = parts[2].trim().parse::<usize>().map_err(|e| format!("bad count '{}': {e}", parts[2]))?;
            return Ok(Sweep::Range(Range { start: num(parts[0])?, stop: num(parts[1])?, count }));
        }
        Ok(Sweep::List(text.split(',').map(num).collect::<Result<_, _>>()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    /// Elastic numbers K.
    #[serde(default = "AnalyzeConfig::default_k")]
    pub k: Sweep,
    /// Mach numbers M.
    #[serde(default = "AnalyzeConfig::default_m")]
    pub m: Sweep,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
}

impl AnalyzeConfig {
    fn default_k() -> Sweep {
        Sweep::List(vec![0.0])
    }

    fn default_m() -> Sweep {
        Sweep::List(vec![1.0])
    }
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig { k: Self::default_k(), m: Self::default_m(), c: 1.0, eps0: default_eps0() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    #[serde(default = "one")]
    pub eta: f64,
    /// Front amplitude as [re, im].
    #[serde(default = "ModeConfig::default_g_hat")]
    pub g_hat: [f64; 2],
    /// Growth rate as [re, im]; the unstable root when absent.
    #[serde(default)]
    pub tau: Option<[f64; 2]>,
    #[serde(default)]
    pub t: f64,
    #[serde(default = "ModeConfig::default_x1")]
    pub x1: Range,
    #[serde(default = "ModeConfig::default_x2")]
    pub x2: Range,
}

impl ModeConfig {
    fn default_g_hat() -> [f64; 2] {
        [1.0, 0.0]
    }

    fn default_x1() -> Range {
        Range { start: 0.0, stop: 2.0 * std::f64::consts::PI, count: 9 }
    }

    fn default_x2() -> Range {
        Range { start: -4.0, stop: 4.0, count: 17 }
    }
}

impl Default for ModeConfig {
    fn default() -> Self {
        ModeConfig { eta: 1.0, g_hat: Self::default_g_hat(), tau: None, t: 0.0, x1: Self::default_x1(), x2: Self::default_x2() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    /// Gaussian pulse at the sheet with a unit front displacement.
    Pulse,
    /// The on-shell normal mode with unit front amplitude.
    Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "one")]
    pub eta: f64,
    /// Grid points per half-line.
    #[serde(rename = "N", default = "SimulateConfig::default_n")]
    pub n: usize,
    /// Truncation length of each half-line.
    #[serde(rename = "L", default = "SimulateConfig::default_l")]
    pub l: f64,
    /// Time step; the CFL limit when absent.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Final time.
    #[serde(rename = "T", default = "SimulateConfig::default_t")]
    pub t: f64,
    #[serde(default = "SimulateConfig::default_cfl")]
    pub cfl: f64,
    #[serde(default = "SimulateConfig::default_method")]
    pub method: Method,
    #[serde(default = "SimulateConfig::default_initial")]
    pub initial: InitialData,
    /// Width of the initial pulse, as in exp(-x2^2 / width).
    #[serde(default = "one")]
    pub pulse_width: f64,
    /// Fraction of samples dropped before fitting the growth rate.
    #[serde(default = "SimulateConfig::default_discard")]
    pub discard: f64,
}

impl SimulateConfig {
    fn default_n() -> usize {
        512
    }

    fn default_l() -> f64 {
        40.0
    }

    fn default_t() -> f64 {
        20.0
    }

    fn default_cfl() -> f64 {
        khsheet_core::simulator::evolve::DEFAULT_CFL
    }

    fn default_method() -> Method {
        Method::Auto
    }

    fn default_initial() -> InitialData {
        InitialData::Pulse
    }

    fn default_discard() -> f64 {
        khsheet_core::simulator::growth::DEFAULT_DISCARD
    }
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            eta: 1.0,
            n: Self::default_n(),
            l: Self::default_l(),
            dt: None,
            t: Self::default_t(),
            cfl: Self::default_cfl(),
            method: Self::default_method(),
            initial: Self::default_initial(),
            pulse_width: 1.0,
            discard: Self::default_discard(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HadamardConfig {
    /// Regularity of the initial data.
    #[serde(default = "HadamardConfig::default_reg")]
    pub j: u32,
    /// Regularity in which growth is measured.
    #[serde(default = "HadamardConfig::default_reg")]
    pub k: u32,
    #[serde(default = "one")]
    pub t0: f64,
    #[serde(default = "one")]
    pub cbar: f64,
    #[serde(default = "HadamardConfig::default_n_list")]
    pub n_list: Vec<u32>,
    /// Threshold for the smallest band index whose grown norm exceeds it.
    #[serde(default)]
    pub alpha: Option<f64>,
}

impl HadamardConfig {
    fn default_reg() -> u32 {
        3
    }

    fn default_n_list() -> Vec<u32> {
        vec![5, 10, 20, 40]
    }
}

impl Default for HadamardConfig {
    fn default() -> Self {
        HadamardConfig { j: 3, k: 3, t0: 1.0, cbar: 1.0, n_list: Self::default_n_list(), alpha: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Main output; standard output when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Where the JSON summary goes in csv format. Defaults to the output path
    /// with a `.json` extension, or standard error when writing to stdout.
    #[serde(default)]
    pub summary: Option<PathBuf>,
    /// Directory for whitespace-separated x/y column files.
    #[serde(default)]
    pub plot_data: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn default_eps0() -> f64 {
    khsheet_core::state::DEFAULT_EPS0
}
