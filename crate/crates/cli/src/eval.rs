//! Evaluation of a single parameter point into a CSV row. Failures become
//! flagged rows with empty value fields instead of aborting a sweep.

use duomode_core::analytic;
use duomode_core::model::REGIME_TOL;
use duomode_core::report::report_field_names;
use duomode_core::{classify_regime, Degrees, Error, Moments, Regime, ReservoirSpec, SystemParams};
use rayon::prelude::*;

use crate::csv::format_number;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub kappa: f64,
    pub g: f64,
    pub lambda: f64,
    pub phi: f64,
    pub n: f64,
    pub m: f64,
}

pub const INPUT_COLUMNS: [&str; 6] = ["kappa", "g", "lambda", "phi", "n", "m"];
pub const STATUS_COLUMNS: [&str; 3] = ["regime", "stable", "status"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Zero population: degrees undefined.
    Degenerate,
    Unstable,
    Unphysical,
    Invalid,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate => "degenerate",
            Status::Unstable => "unstable",
            Status::Unphysical => "unphysical",
            Status::Invalid => "invalid",
        }
    }
}

pub fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::Exponential => "exponential",
        Regime::Oscillatory => "oscillatory",
        Regime::ExceptionalPoint => "exceptional-point",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub point: Point,
    pub regime: Option<Regime>,
    pub status: Status,
    pub moments: Option<Moments<f64>>,
    pub degrees: Option<Degrees<f64>>,
}

impl Point {
    pub fn params(&self) -> duomode_core::Result<SystemParams<f64>> {
        SystemParams::new(self.kappa, self.g, self.lambda, self.phi)
    }

    pub fn reservoir(&self) -> duomode_core::Result<ReservoirSpec<f64>> {
        ReservoirSpec::new(self.n, self.m)
    }

    pub fn input_cells(&self) -> Vec<String> {
        [self.kappa, self.g, self.lambda, self.phi, self.n, self.m].into_iter().map(format_number).collect()
    }
}

pub fn evaluate(point: Point) -> Evaluation {
    let mut out = Evaluation { point, regime: None, status: Status::Invalid, moments: None, degrees: None };
    let params = match point.params() {
        Ok(p) => p,
        Err(_) => return out,
    };
    out.regime = Some(classify_regime(&params, REGIME_TOL).regime);
    let res = match point.reservoir() {
        Ok(r) => r,
        Err(Error::UnphysicalReservoir { .. }) => {
            out.status = Status::Unphysical;
            return out;
        }
        Err(_) => return out,
    };
    match analytic::moments(&params, &res) {
        Ok(m) => {
            out.moments = Some(m);
            match m.degrees() {
                Ok(d) => {
                    out.degrees = Some(d);
                    out.status = Status::Ok;
                }
                Err(_) => out.status = Status::Degenerate,
            }
        }
        Err(Error::Unstable { .. }) => out.status = Status::Unstable,
        Err(_) => {}
    }
    out
}

/// Evaluates in parallel; the result keeps the order of `points`.
pub fn evaluate_all(points: &[Point]) -> Vec<Evaluation> {
    points.par_iter().map(|p| evaluate(*p)).collect()
}

impl Evaluation {
    pub fn stable(&self) -> bool {
        !matches!(self.status, Status::Unstable)
    }

    pub fn status_cells(&self) -> Vec<String> {
        vec![
            self.regime.map(regime_label).unwrap_or("").to_string(),
            self.stable().to_string(),
            self.status.label().to_string(),
        ]
    }

    /// Looks up a report field by column name.
    pub fn value(&self, name: &str) -> Option<f64> {
        let from_moments = self.moments.and_then(|m| m.fields().into_iter().find(|(n, _)| *n == name));
        let from_degrees = self.degrees.and_then(|d| d.fields().into_iter().find(|(n, _)| *n == name));
        from_moments.or(from_degrees).map(|(_, v)| v)
    }

    /// Inputs, status and the requested value columns (empty when undefined).
    pub fn row(&self, columns: &[&str]) -> Vec<String> {
        let mut row = self.point.input_cells();
        row.extend(self.status_cells());
        row.extend(columns.iter().map(|c| self.value(c).map(format_number).unwrap_or_default()));
        row
    }
}

pub fn header(columns: &[&str]) -> Vec<String> {
    INPUT_COLUMNS.iter().chain(&STATUS_COLUMNS).chain(columns).map(|s| s.to_string()).collect()
}

pub fn all_fields() -> Vec<&'static str> {
    report_field_names()
}
