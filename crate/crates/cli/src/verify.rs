//! Engine cross-checks: closed forms against the Lyapunov solver, and
//! optionally against the Monte Carlo ensemble.

use duomode_core::dynamics::{moments_from_covariance, steady_state};
use duomode_core::stochastic::run_ensemble;
use duomode_core::{analytic, EnsembleEstimate, Mat4, Moments};
use rayon::prelude::*;

use crate::config::{Grid, SdeSettings};
use crate::csv::{format_number, Table};
use crate::eval::{Point, INPUT_COLUMNS};
use crate::exit::CliResult;

/// Monte Carlo estimates must sit within this many standard errors...
pub const MC_SIGMAS: f64 = 5.0;
/// ...and within this fraction of sqrt(Σ_ii Σ_jj).
pub const MC_RELATIVE: f64 = 0.02;

/// Absolute floor of the comparison, as a fraction of the relative tolerance.
const ABS_FLOOR: f64 = 1e-3;

pub fn within(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= (tol * a.abs().max(b.abs())).max(tol * ABS_FLOOR)
}

/// |a − b| relative to max(|a|, |b|), floored like [`within`].
pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(ABS_FLOOR)
}

/// Every grid combination with κ = 1, in nested order g, λ, n, m-mode, φ.
pub fn grid_points(grid: &Grid) -> Vec<Point> {
    let mut out = Vec::new();
    for &g in &grid.g {
        for &lambda in &grid.lambda {
            for &n in &grid.n {
                for &mode in &grid.m_mode {
                    for &phi in &grid.phi {
                        out.push(Point { kappa: 1.0, g, lambda, phi, n, m: mode.resolve(n) });
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldStat {
    pub field: String,
    pub engine: &'static str,
    pub max_abs: f64,
    pub max_rel: f64,
    pub worst: Option<Point>,
    pub violations: usize,
}

impl FieldStat {
    fn new(field: &str, engine: &'static str) -> Self {
        FieldStat { field: field.into(), engine, max_abs: 0.0, max_rel: 0.0, worst: None, violations: 0 }
    }

    fn record(&mut self, point: Point, abs: f64, rel: f64, ok: bool) {
        if abs > self.max_abs || self.worst.is_none() {
            self.worst = Some(point);
        }
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        if !ok {
            self.violations += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub point: Point,
    pub field: String,
    pub engine: &'static str,
    pub expected: f64,
    pub found: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub stats: Vec<FieldStat>,
    pub violations: Vec<Violation>,
    pub checked: usize,
    /// Unstable points.
    pub skipped: usize,
    pub mc_checked: usize,
    /// Stable points the Monte Carlo configuration cannot resolve.
    pub mc_skipped: usize,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary_table(&self) -> Table {
        let mut header = vec!["field", "engine", "max_abs_dev", "max_rel_dev", "violations"];
        let worst: Vec<String> = INPUT_COLUMNS.iter().map(|c| format!("worst_{c}")).collect();
        header.extend(worst.iter().map(String::as_str));
        let mut t = Table::new(header);
        for s in &self.stats {
            let mut row = vec![
                s.field.clone(),
                s.engine.to_string(),
                format_number(s.max_abs),
                format_number(s.max_rel),
                s.violations.to_string(),
            ];
            match s.worst {
                Some(p) => row.extend(p.input_cells()),
                None => row.extend(std::iter::repeat_n(String::new(), INPUT_COLUMNS.len())),
            }
            t.push(row);
        }
        t
    }
}

/// Named values compared between engines: moments always, degrees when
/// both engines have non-degenerate populations.
fn comparable(m: &Moments<f64>) -> Vec<(&'static str, Option<f64>)> {
    let mut out: Vec<_> = m.fields().into_iter().map(|(n, v)| (n, Some(v))).collect();
    let degrees = m.degrees().ok();
    for name in ["eta_aa", "eta_bb", "gamma_ab", "eta_ab"] {
        let v = degrees.and_then(|d| d.fields().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v));
        out.push((name, v));
    }
    out
}

enum PointCheck {
    Skipped,
    Compared(Vec<(&'static str, f64, f64)>),
}

fn check_lyapunov(point: &Point) -> CliResult<PointCheck> {
    let params = point.params()?;
    let res = point.reservoir()?;
    if params.s_factor().is_err() {
        return Ok(PointCheck::Skipped);
    }
    let closed = analytic::moments(&params, &res)?;
    let numeric = moments_from_covariance(&steady_state(&params, &res)?);
    let mut out = Vec::new();
    for ((name, a), (_, b)) in comparable(&closed).into_iter().zip(comparable(&numeric)) {
        if let (Some(a), Some(b)) = (a, b) {
            out.push((name, a, b));
        }
    }
    Ok(PointCheck::Compared(out))
}

const COVARIANCE_NAMES: [[&str; 4]; 4] = [
    ["var_xa", "xa_ya", "xa_xb", "xa_yb"],
    ["xa_ya", "var_ya", "ya_xb", "ya_yb"],
    ["xa_xb", "ya_xb", "var_xb", "xb_yb"],
    ["xa_yb", "ya_yb", "xb_yb", "var_yb"],
];

/// (entry, exact, estimate, |Δ|/stderr, |Δ|/sqrt(Σ_ii Σ_jj))
pub type EntryDeviation = (&'static str, f64, f64, f64, f64);

/// Deviation of every independent covariance entry from the exact value.
pub fn ensemble_deviation(est: &EnsembleEstimate<f64>, exact: &Mat4<f64>) -> Vec<EntryDeviation> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let mc = est.sigma_hat.matrix()[(i, j)];
            let se = est.stderr[(i, j)];
            let d = (mc - exact[(i, j)]).abs();
            let scale = (exact[(i, i)] * exact[(j, j)]).sqrt();
            let z = if se > 0.0 {
                d / se
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            out.push((COVARIANCE_NAMES[i][j], exact[(i, j)], mc, z, d / scale));
        }
    }
    out
}

fn check_ensemble(point: &Point, sde: &SdeSettings, seed: u64) -> CliResult<Option<Vec<EntryDeviation>>> {
    let params = point.params()?;
    let res = point.reservoir()?;
    let cfg = sde.config(seed);
    // points whose transient is too slow for the configured horizon are skipped
    if cfg.validate(&params).is_err() {
        return Ok(None);
    }
    let exact = analytic::covariance(&params, &res)?;
    let est = run_ensemble(&params, &res, &cfg)?;
    Ok(Some(ensemble_deviation(&est, &exact)))
}

pub fn verify_points(points: &[Point], tol: f64, sde: Option<(&SdeSettings, u64)>) -> CliResult<VerifyOutcome> {
    let checks: Vec<PointCheck> = points.par_iter().map(check_lyapunov).collect::<CliResult<_>>()?;
    let mut stats: Vec<FieldStat> = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let stat_for = |stats: &mut Vec<FieldStat>, name: &str, engine: &'static str| -> usize {
        match stats.iter().position(|s| s.field == name && s.engine == engine) {
            Some(i) => i,
            None => {
                stats.push(FieldStat::new(name, engine));
                stats.len() - 1
            }
        }
    };
    for (point, check) in points.iter().zip(checks) {
        let values = match check {
            PointCheck::Skipped => {
                skipped += 1;
                continue;
            }
            PointCheck::Compared(v) => v,
        };
        checked += 1;
        for (name, a, b) in values {
            let ok = within(a, b, tol);
            let i = stat_for(&mut stats, name, "lyapunov");
            stats[i].record(*point, (a - b).abs(), relative(a, b), ok);
            if !ok {
                violations.push(Violation {
                    point: *point,
                    field: name.into(),
                    engine: "lyapunov",
                    expected: a,
                    found: b,
                });
            }
        }
    }
    let mut mc_checked = 0;
    let mut mc_skipped = 0;
    if let Some((settings, seed)) = sde {
        for point in points {
            if point.params()?.s_factor().is_err() {
                continue;
            }
            let devs = match check_ensemble(point, settings, seed)? {
                Some(d) => d,
                None => {
                    mc_skipped += 1;
                    continue;
                }
            };
            mc_checked += 1;
            for (name, exact, mc, z, rel) in devs {
                let ok = z <= MC_SIGMAS && rel <= MC_RELATIVE;
                let i = stat_for(&mut stats, name, "monte_carlo");
                stats[i].record(*point, (exact - mc).abs(), rel, ok);
                if !ok {
                    violations.push(Violation {
                        point: *point,
                        field: name.into(),
                        engine: "monte_carlo",
                        expected: exact,
                        found: mc,
                    });
                }
            }
        }
    }
    Ok(VerifyOutcome { stats, violations, checked, skipped, mc_checked, mc_skipped })
}
