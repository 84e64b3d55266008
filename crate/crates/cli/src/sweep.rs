//! `duomode sweep`: every report field over a 1-D or 2-D grid in g, λ, φ
//! or n. The reservoir m follows the configured m-mode at each n.

use std::fmt;
use std::str::FromStr;

use clap::Args;

use crate::config::RunConfig;
use crate::csv::Table;
use crate::eval::{all_fields, evaluate_all, header, Point};
use crate::exit::{CliError, CliResult};
use crate::figures::linspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVar {
    G,
    Lambda,
    Phi,
    N,
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g" => Ok(SweepVar::G),
            "lambda" => Ok(SweepVar::Lambda),
            "phi" => Ok(SweepVar::Phi),
            "n" => Ok(SweepVar::N),
            other => Err(format!("cannot sweep `{other}` (g, lambda, phi or n)")),
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVar::G => "g",
            SweepVar::Lambda => "lambda",
            SweepVar::Phi => "phi",
            SweepVar::N => "n",
        })
    }
}

#[derive(Args, Clone, Debug)]
pub struct SweepArgs {
    /// Swept variable: g | lambda | phi | n
    #[arg(long)]
    pub var: SweepVar,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Optional second (outer) variable for a 2-D grid
    #[arg(long, requires_all = ["start2", "stop2"])]
    pub var2: Option<SweepVar>,
    #[arg(long)]
    pub start2: Option<f64>,
    #[arg(long)]
    pub stop2: Option<f64>,
    #[arg(long, default_value_t = 21)]
    pub steps2: usize,
}

fn set(base: &mut RunConfig, var: SweepVar, x: f64) {
    match var {
        SweepVar::G => base.g = x,
        SweepVar::Lambda => base.lambda = x,
        SweepVar::Phi => base.phi = x,
        SweepVar::N => base.n = x,
    }
}

fn point(c: &RunConfig) -> Point {
    Point { kappa: c.kappa, g: c.g, lambda: c.lambda, phi: c.phi, n: c.n, m: c.m() }
}

pub fn sweep_points(cfg: &RunConfig, args: &SweepArgs) -> CliResult<Vec<Point>> {
    if args.steps == 0 {
        return Err(CliError::Input("--steps must be >= 1".into()));
    }
    let outer: Vec<Option<f64>> = match (args.var2, args.start2, args.stop2) {
        (Some(v), ..) if v == args.var => {
            return Err(CliError::Input("--var2 must differ from --var".into()));
        }
        (Some(_), Some(a), Some(b)) => linspace(a, b, args.steps2).into_iter().map(Some).collect(),
        (Some(_), ..) => return Err(CliError::Input("--var2 needs --start2 and --stop2".into())),
        (None, ..) => vec![None],
    };
    let mut out = Vec::new();
    for y in outer {
        for x in linspace(args.start, args.stop, args.steps) {
            let mut c = cfg.clone();
            if let (Some(v2), Some(y)) = (args.var2, y) {
                set(&mut c, v2, y);
            }
            set(&mut c, args.var, x);
            out.push(point(&c));
        }
    }
    Ok(out)
}

pub fn sweep_table(cfg: &RunConfig, args: &SweepArgs) -> CliResult<Table> {
    let points = sweep_points(cfg, args)?;
    let fields = all_fields();
    let mut t = Table::new(header(&fields));
    for e in evaluate_all(&points) {
        t.push(e.row(&fields));
    }
    Ok(t)
}
