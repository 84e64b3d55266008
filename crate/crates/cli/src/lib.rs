//! Command-line front end for `duomode-core`: single-point reports,
//! figure data, engine verification and parameter sweeps, all as CSV.

pub mod config;
pub mod csv;
pub mod eval;
pub mod exit;
pub mod figures;
pub mod report;
pub mod sweep;
pub mod verify;

use clap::{Parser, Subcommand};

use crate::config::{CommonArgs, RunConfig};
use crate::csv::format_number;
use crate::exit::{CliError, CliResult};
use crate::figures::{figure_table, FigureId};
use crate::sweep::{sweep_table, SweepArgs};
use crate::verify::{grid_points, verify_points, VerifyOutcome};

pub const THREADS_ENV: &str = "DUOMODE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "duomode", version, about = "Steady states of two coupled damped bosonic modes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regime, roots and all steady-state fields for one point
    Report(CommonArgs),
    /// CSV data for one of the published figures
    Figure {
        /// fig2a | fig2b | fig5 | fig6 | fig7 | fig8 | fig9 | fig10
        id: FigureId,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed forms against the Lyapunov solver (and Monte Carlo with --traj) over a grid
    Verify(CommonArgs),
    /// All fields over a 1-D or 2-D parameter grid
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Caps the global rayon pool at `DUOMODE_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // a pool may already exist when embedded; keep it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn run_verify(cfg: &RunConfig) -> CliResult<VerifyOutcome> {
    let points = grid_points(&cfg.grid);
    verify_points(&points, cfg.tol, cfg.sde.as_ref().map(|s| (s, cfg.seed)))
}

fn cmd_verify(cfg: &RunConfig) -> CliResult<()> {
    let outcome = run_verify(cfg)?;
    outcome.summary_table().emit(cfg.out.as_deref())?;
    eprintln!(
        "verify: {} points checked, {} unstable skipped, {} violations",
        outcome.checked,
        outcome.skipped,
        outcome.violations.len()
    );
    if cfg.sde.is_some() {
        eprintln!(
            "verify: monte carlo at {} points, {} skipped (transient longer than the burn-in window)",
            outcome.mc_checked, outcome.mc_skipped
        );
    }
    for v in outcome.violations.iter().take(20) {
        let p = v.point;
        eprintln!(
            "  {} {}: g={} lambda={} phi={} n={} m={} expected {} got {}",
            v.engine,
            v.field,
            format_number(p.g),
            format_number(p.lambda),
            format_number(p.phi),
            format_number(p.n),
            format_number(p.m),
            format_number(v.expected),
            format_number(v.found)
        );
    }
    if outcome.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} field comparisons out of tolerance", outcome.violations.len())))
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Report(common) => report::cmd_report(&RunConfig::resolve(&common)?),
        Command::Figure { id, common } => {
            let cfg = RunConfig::resolve(&common)?;
            figure_table(id, common.lambda)?.emit(cfg.out.as_deref())?;
            Ok(())
        }
        Command::Verify(common) => cmd_verify(&RunConfig::resolve(&common)?),
        Command::Sweep { sweep, common } => {
            let cfg = RunConfig::resolve(&common)?;
            sweep_table(&cfg, &sweep)?.emit(cfg.out.as_deref())?;
            Ok(())
        }
    }
}
