//! Parameter grids for the published figures, all in units of κ.
//!
//! Abscissae use 200 uniform points including both ends. Two-dimensional
//! figures step n over 0, 0.1, …, 2.0.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::csv::Table;
use crate::eval::{evaluate_all, header, Point};
use crate::exit::{CliError, CliResult};

pub const ABSCISSA_POINTS: usize = 200;
/// Caption value for Fig. 7; the text discussing it uses λ = 5.
pub const FIG7_DEFAULT_LAMBDA: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }

    /// Report columns plotted in the figure.
    pub fn quantities(self) -> &'static [&'static str] {
        match self {
            FigureId::Fig2a | FigureId::Fig2b => &["pop_a"],
            FigureId::Fig5 => &["var_xa", "var_xb"],
            FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8 => &["eta_aa", "eta_bb"],
            FigureId::Fig9 => &["gamma_ab"],
            FigureId::Fig10 => &["eta_ab"],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// n = 0, 0.1, …, 2.0
pub fn population_axis() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0).collect()
}

fn qmax(n: f64) -> f64 {
    (n * (n + 1.0)).sqrt()
}

fn pt(g: f64, lambda: f64, phi: f64, n: f64, m: f64) -> Point {
    Point { kappa: 1.0, g, lambda, phi, n, m }
}

/// `(curve label, point)` pairs in output order.
pub fn figure_points(id: FigureId, lambda_override: Option<f64>) -> CliResult<Vec<(String, Point)>> {
    if lambda_override.is_some() && id != FigureId::Fig7 {
        return Err(CliError::Input(format!("--lambda only applies to fig7, not {id}")));
    }
    let mut out = Vec::new();
    let two_d = |lambda: f64, phi: f64, m_of: &dyn Fn(f64) -> f64, out: &mut Vec<(String, Point)>| {
        for n in population_axis() {
            for g in linspace(0.0, lambda, ABSCISSA_POINTS) {
                out.push((String::new(), pt(g, lambda, phi, n, m_of(n))));
            }
        }
    };
    match id {
        FigureId::Fig2a | FigureId::Fig2b => {
            let g = if id == FigureId::Fig2a { 0.5 } else { 0.99 };
            let n = 0.1;
            for (label, phi) in [("phi=0", 0.0), ("phi=pi/2", FRAC_PI_2)] {
                for lambda in linspace(0.0, g, ABSCISSA_POINTS) {
                    out.push((label.to_string(), pt(g, lambda, phi, n, qmax(n))));
                }
            }
        }
        FigureId::Fig5 => {
            for lambda in [5.0, 10.0, 15.0, 20.0] {
                for g in linspace(0.0, lambda, ABSCISSA_POINTS) {
                    out.push((format!("lambda={lambda}"), pt(g, lambda, 0.0, 0.0, 0.0)));
                }
            }
        }
        FigureId::Fig6 => two_d(5.0, 0.0, &|_| 0.0, &mut out),
        FigureId::Fig7 => two_d(lambda_override.unwrap_or(FIG7_DEFAULT_LAMBDA), 0.0, &qmax, &mut out),
        FigureId::Fig8 => {
            let n = 1.0;
            for frac in [0.5, 0.75, 0.9, 1.0] {
                for g in linspace(0.0, 5.0, ABSCISSA_POINTS) {
                    out.push((format!("m={frac}n"), pt(g, 5.0, FRAC_PI_2, n, frac * n)));
                }
            }
        }
        FigureId::Fig9 => two_d(1.0, FRAC_PI_2, &qmax, &mut out),
        FigureId::Fig10 => two_d(0.8, 0.0, &|n| n, &mut out),
    }
    Ok(out)
}

pub fn figure_table(id: FigureId, lambda_override: Option<f64>) -> CliResult<Table> {
    let labelled = figure_points(id, lambda_override)?;
    let points: Vec<Point> = labelled.iter().map(|(_, p)| *p).collect();
    let evals = evaluate_all(&points);
    let quantities = id.quantities();
    let mut table = Table::new(["figure".to_string(), "curve".to_string()].into_iter().chain(header(quantities)));
    for ((label, _), e) in labelled.iter().zip(&evals) {
        let mut row = vec![id.name().to_string(), label.clone()];
        row.extend(e.row(quantities));
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig3".parse::<FigureId>().is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 5.0, 200);
        assert_eq!((v[0], v[199], v.len()), (0.0, 5.0, 200));
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(figure_points(FigureId::Fig2a, None).unwrap().len(), 400);
        assert_eq!(figure_points(FigureId::Fig5, None).unwrap().len(), 800);
        assert_eq!(figure_points(FigureId::Fig9, None).unwrap().len(), 21 * 200);
        let fig7 = figure_points(FigureId::Fig7, Some(5.0)).unwrap();
        assert!(fig7.iter().all(|(_, p)| p.lambda == 5.0));
        assert!(figure_points(FigureId::Fig6, Some(5.0)).is_err());
    }

    #[test]
    fn phase_zero_population_dominates() {
        let t = figure_table(FigureId::Fig2a, None).unwrap();
        let pop = t.header.iter().position(|h| h == "pop_a").unwrap();
        let (zero, half): (Vec<_>, Vec<_>) = t.rows.iter().partition(|r| r[1] == "phi=0");
        for (a, b) in zero.iter().zip(&half) {
            let (a, b): (f64, f64) = (a[pop].parse().unwrap(), b[pop].parse().unwrap());
            assert!(a >= b - 1e-12);
        }
    }
}
