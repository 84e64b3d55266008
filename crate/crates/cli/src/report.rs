//! `duomode report`: regime, roots and every steady-state field for one
//! parameter point, optionally cross-checked against the other engines.

use std::fmt::Write as _;

use duomode_core::dynamics::{moments_from_covariance, steady_state};
use duomode_core::model::REGIME_TOL;
use duomode_core::stochastic::run_ensemble;
use duomode_core::{analytic, classify_regime, Moments};

use crate::config::RunConfig;
use crate::csv::{format_number, Table};
use crate::eval::{all_fields, evaluate, header, regime_label, Point};
use crate::exit::{CliError, CliResult};
use crate::verify::{ensemble_deviation, relative, within, MC_RELATIVE, MC_SIGMAS};

fn field_values(m: &Moments<f64>) -> Vec<(&'static str, Option<f64>)> {
    let degrees = m.degrees().ok();
    let mut out: Vec<_> = m.fields().into_iter().map(|(n, v)| (n, Some(v))).collect();
    match degrees {
        Some(d) => out.extend(d.fields().into_iter().map(|(n, v)| (n, Some(v)))),
        None => out.extend(["eta_aa", "eta_bb", "gamma_ab", "eta_ab"].map(|n| (n, None))),
    }
    out
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_else(|| "undefined".into())
}

/// Renders the report and returns it with the exit status of the checks.
pub fn run_report(cfg: &RunConfig) -> CliResult<(String, bool)> {
    let params = cfg.params()?;
    let res = cfg.reservoir()?;
    params.s_factor()?;
    let info = classify_regime(&params, REGIME_TOL);
    let closed = analytic::moments(&params, &res)?;
    let mut text = String::new();
    let w = &mut text;
    writeln!(w, "kappa={} g={} lambda={} phi={} n={} m={}", cfg.kappa, cfg.g, cfg.lambda, cfg.phi, cfg.n, res.m()).ok();
    writeln!(w, "regime      {}", regime_label(info.regime)).ok();
    let root = |z: num_complex::Complex<f64>| {
        if z.im == 0.0 {
            format_number(z.re)
        } else {
            format!("{}{}{}i", format_number(z.re), if z.im < 0.0 { "-" } else { "+" }, format_number(z.im.abs()))
        }
    };
    writeln!(w, "roots/kappa {}, {}", root(info.roots[0]), root(info.roots[1])).ok();

    let mut ok = true;
    let lyap = if cfg.verify {
        let sigma = steady_state(&params, &res)?;
        Some(field_values(&moments_from_covariance(&sigma)))
    } else {
        None
    };
    let ensemble = match (cfg.verify, cfg.sde) {
        (true, Some(sde)) => {
            let est = run_ensemble(&params, &res, &sde.config(cfg.seed))?;
            let exact = analytic::covariance(&params, &res)?;
            Some((est, exact))
        }
        _ => None,
    };
    let mc_fields = ensemble.as_ref().map(|(est, _)| field_values(&moments_from_covariance(&est.sigma_hat)));

    let mut columns = vec!["field".to_string(), "analytic".to_string()];
    if lyap.is_some() {
        columns.extend(["lyapunov".into(), "rel_dev".into()]);
    }
    if mc_fields.is_some() {
        columns.extend(["monte_carlo".into(), "rel_dev".into()]);
    }
    let mut rows = vec![columns];
    for (k, (name, a)) in field_values(&closed).into_iter().enumerate() {
        let mut row = vec![name.to_string(), cell(a)];
        for other in [&lyap, &mc_fields].into_iter().flatten() {
            let b = other[k].1;
            row.push(cell(b));
            row.push(match (a, b) {
                (Some(a), Some(b)) => format_number(relative(a, b)),
                _ => String::new(),
            });
        }
        if let (Some(l), Some(a)) = (&lyap, a) {
            if let Some(b) = l[k].1 {
                ok &= within(a, b, cfg.tol);
            }
        }
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|c| rows.iter().map(|r| r.get(c).map_or(0, |s| s.len())).max().unwrap_or(0)).collect();
    for r in &rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        writeln!(w, "{}", line.join("  ").trim_end()).ok();
    }
    if let Some((est, exact)) = &ensemble {
        let devs = ensemble_deviation(est, exact);
        let worst_z = devs.iter().map(|d| d.3).fold(0.0, f64::max);
        let worst_rel = devs.iter().map(|d| d.4).fold(0.0, f64::max);
        writeln!(
            w,
            "monte carlo: {} samples, max |dev|/stderr = {}, max |dev|/sqrt(S_ii S_jj) = {}",
            est.n_effective,
            format_number(worst_z),
            format_number(worst_rel)
        )
        .ok();
        ok &= worst_z <= MC_SIGMAS && worst_rel <= MC_RELATIVE;
    }
    Ok((text, ok))
}

/// One-row CSV of the analytic report.
pub fn report_row(cfg: &RunConfig) -> Table {
    let point = Point { kappa: cfg.kappa, g: cfg.g, lambda: cfg.lambda, phi: cfg.phi, n: cfg.n, m: cfg.m() };
    let fields = all_fields();
    let mut t = Table::new(header(&fields));
    t.push(evaluate(point).row(&fields));
    t
}

pub fn cmd_report(cfg: &RunConfig) -> CliResult<()> {
    let (text, ok) = run_report(cfg)?;
    print!("{text}");
    if let Some(path) = &cfg.out {
        report_row(cfg).emit(Some(path))?;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification("engines disagree beyond tolerance".into()))
    }
}
