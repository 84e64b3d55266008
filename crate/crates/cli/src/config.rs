//! Run configuration: command-line flags layered over an optional flat JSON
//! file, layered over defaults (κ = 1, φ = 0, thermal reservoirs).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use duomode_core::{CorrelationMode, ReservoirSpec, SdeConfig, SystemParams};
use serde::Deserialize;

use crate::exit::{CliError, CliResult};

/// How the reservoir correlation m is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MMode {
    Thermal,
    ClassicalMax,
    QuantumMax,
    Literal(f64),
}

impl MMode {
    pub fn correlation(self) -> CorrelationMode<f64> {
        match self {
            MMode::Thermal => CorrelationMode::Thermal,
            MMode::ClassicalMax => CorrelationMode::ClassicalMax,
            MMode::QuantumMax => CorrelationMode::QuantumMax,
            MMode::Literal(m) => CorrelationMode::Literal(m),
        }
    }

    pub fn resolve(self, n: f64) -> f64 {
        self.correlation().resolve(n)
    }

    pub fn label(self) -> String {
        match self {
            MMode::Thermal => "thermal".into(),
            MMode::ClassicalMax => "classical-max".into(),
            MMode::QuantumMax => "quantum-max".into(),
            MMode::Literal(m) => crate::csv::format_number(m),
        }
    }
}

impl FromStr for MMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "thermal" => Ok(MMode::Thermal),
            "classical-max" => Ok(MMode::ClassicalMax),
            "quantum-max" => Ok(MMode::QuantumMax),
            other => other
                .parse::<f64>()
                .map(MMode::Literal)
                .map_err(|_| format!("unknown m-mode `{other}` (thermal, classical-max, quantum-max or a number)")),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Flat JSON file with any of the flag names as keys (underscored)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Damping rate
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Two-mode squeezing coupling
    #[arg(long)]
    pub g: Option<f64>,
    /// Beam-splitter coupling
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Reservoir squeezing phase
    #[arg(long)]
    pub phi: Option<f64>,
    /// Thermal photon number of both reservoirs
    #[arg(long)]
    pub n: Option<f64>,
    /// Reservoir two-photon correlation
    #[arg(long, conflicts_with = "m_mode")]
    pub m: Option<f64>,
    /// thermal | classical-max | quantum-max
    #[arg(long)]
    pub m_mode: Option<MMode>,
    /// Monte Carlo seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-check against the Lyapunov solver (and Monte Carlo with --traj)
    #[arg(long)]
    pub verify: bool,
    /// Relative tolerance for verification
    #[arg(long)]
    pub tol: Option<f64>,
    /// Monte Carlo trajectories; enables the stochastic engine
    #[arg(long)]
    pub traj: Option<usize>,
    /// Monte Carlo time step (units of 1/kappa)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Monte Carlo horizon (units of 1/kappa)
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Fraction of the horizon discarded before averaging
    #[arg(long)]
    pub burn_in: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kappa: Option<f64>,
    pub g: Option<f64>,
    pub lambda: Option<f64>,
    pub phi: Option<f64>,
    pub n: Option<f64>,
    pub m: Option<f64>,
    pub m_mode: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub traj: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub burn_in: Option<f64>,
    pub grid_g: Option<Vec<f64>>,
    pub grid_lambda: Option<Vec<f64>>,
    pub grid_n: Option<Vec<f64>>,
    pub grid_phi: Option<Vec<f64>>,
    pub grid_m_mode: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdeSettings {
    pub n_traj: usize,
    pub dt: f64,
    pub t_end: f64,
    pub burn_in: f64,
}

impl SdeSettings {
    pub fn config(&self, seed: u64) -> SdeConfig<f64> {
        SdeConfig::new(self.dt, self.t_end, self.n_traj, self.burn_in, seed)
    }
}

/// Verification grid in κ units.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub g: Vec<f64>,
    pub lambda: Vec<f64>,
    pub n: Vec<f64>,
    pub m_mode: Vec<MMode>,
    pub phi: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            g: vec![0.0, 0.3, 0.5, 0.8, 0.99, 1.2, 3.0],
            lambda: vec![0.0, 0.3, 0.5, 0.8, 1.0, 3.0, 5.0],
            n: vec![0.0, 0.5, 2.0],
            m_mode: vec![MMode::Thermal, MMode::ClassicalMax, MMode::QuantumMax],
            phi: vec![0.0, FRAC_PI_4, FRAC_PI_2, 2.1],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kappa: f64,
    pub g: f64,
    pub lambda: f64,
    pub phi: f64,
    pub n: f64,
    pub m_mode: MMode,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub verify: bool,
    pub tol: f64,
    pub sde: Option<SdeSettings>,
    pub grid: Grid,
}

pub const DEFAULT_TOL: f64 = 1e-9;

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let m_mode = match (args.m, args.m_mode, file.m, &file.m_mode) {
            (Some(m), ..) => MMode::Literal(m),
            (None, Some(mode), ..) => mode,
            (None, None, Some(m), None) => MMode::Literal(m),
            (None, None, None, Some(s)) => s.parse().map_err(CliError::Input)?,
            (None, None, Some(_), Some(_)) => {
                return Err(CliError::Input("config sets both `m` and `m_mode`".into()));
            }
            (None, None, None, None) => MMode::Thermal,
        };
        let traj = args.traj.or(file.traj);
        let sde = traj.map(|n_traj| SdeSettings {
            n_traj,
            dt: args.dt.or(file.dt).unwrap_or(1e-3),
            t_end: args.t_end.or(file.t_end).unwrap_or(10.0),
            burn_in: args.burn_in.or(file.burn_in).unwrap_or(0.5),
        });
        let defaults = Grid::default();
        let grid_m_mode = match file.grid_m_mode {
            Some(v) => v.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(CliError::Input)?,
            None => defaults.m_mode,
        };
        let grid = Grid {
            g: file.grid_g.unwrap_or(defaults.g),
            lambda: file.grid_lambda.unwrap_or(defaults.lambda),
            n: file.grid_n.unwrap_or(defaults.n),
            m_mode: grid_m_mode,
            phi: file.grid_phi.unwrap_or(defaults.phi),
        };
        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Input(format!("tolerance must be > 0, got {tol}")));
        }
        Ok(RunConfig {
            kappa: args.kappa.or(file.kappa).unwrap_or(1.0),
            g: args.g.or(file.g).unwrap_or(0.0),
            lambda: args.lambda.or(file.lambda).unwrap_or(0.0),
            phi: args.phi.or(file.phi).unwrap_or(0.0),
            n: args.n.or(file.n).unwrap_or(0.0),
            m_mode,
            seed: args.seed.or(file.seed).unwrap_or(0),
            out: args.out.clone().or(file.out),
            verify: args.verify,
            tol,
            sde,
            grid,
        })
    }

    pub fn m(&self) -> f64 {
        self.m_mode.resolve(self.n)
    }

    pub fn params(&self) -> CliResult<SystemParams<f64>> {
        Ok(SystemParams::new(self.kappa, self.g, self.lambda, self.phi)?)
    }

    pub fn reservoir(&self) -> CliResult<ReservoirSpec<f64>> {
        Ok(ReservoirSpec::with_mode(self.n, self.m_mode.correlation())?)
    }
}
