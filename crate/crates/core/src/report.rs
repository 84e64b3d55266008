//! Steady-state observables shared by the closed-form and numerical engines.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Second moments of the two modes, before normalisation into degrees.
///
/// Variances and `xy_*` are symmetrised quadrature moments. Correlators are
/// `⟨aa⟩`, `⟨bb⟩`, `⟨ab⟩` and `⟨a†b⟩`, with mode b in the φ-rotated frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments<T> {
    pub var_xa: T,
    pub var_ya: T,
    pub var_xb: T,
    pub var_yb: T,
    pub xy_a: T,
    pub xy_b: T,
    pub pop_a: T,
    pub pop_b: T,
    pub corr_aa: Complex<T>,
    pub corr_bb: Complex<T>,
    pub corr_ab: Complex<T>,
    pub corr_adag_b: Complex<T>,
}

/// Normalised squeezing, coherence and cross two-photon degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degrees<T> {
    /// (|⟨aa⟩| − ⟨a†a⟩)/⟨a†a⟩; positive means sub-vacuum squeezing.
    pub eta_aa: T,
    pub eta_bb: T,
    /// |⟨a†b⟩|/sqrt(⟨a†a⟩⟨b†b⟩)
    pub gamma_ab: T,
    /// |⟨ab⟩|/sqrt(⟨a†a⟩⟨b†b⟩); above one only for nonclassical correlations.
    pub eta_ab: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyStateReport<T> {
    pub var_xa: T,
    pub var_ya: T,
    pub var_xb: T,
    pub var_yb: T,
    pub xy_a: T,
    pub xy_b: T,
    pub pop_a: T,
    pub pop_b: T,
    pub corr_aa: Complex<T>,
    pub corr_bb: Complex<T>,
    pub corr_ab: Complex<T>,
    pub corr_adag_b: Complex<T>,
    pub eta_aa: T,
    pub eta_bb: T,
    pub gamma_ab: T,
    pub eta_ab: T,
}

/// Populations at or below this are treated as zero when normalising.
pub fn population_floor<T: Scalar>() -> T {
    T::lit(1e4) * T::epsilon()
}

impl<T: Scalar> Moments<T> {
    pub fn degrees(&self) -> Result<Degrees<T>> {
        let floor = population_floor::<T>();
        if !(self.pop_a > floor && self.pop_b > floor) {
            return Err(Error::DegeneratePopulation { pop_a: self.pop_a.as_f64(), pop_b: self.pop_b.as_f64() });
        }
        let geo = (self.pop_a * self.pop_b).sqrt();
        Ok(Degrees {
            eta_aa: (self.corr_aa.norm() - self.pop_a) / self.pop_a,
            eta_bb: (self.corr_bb.norm() - self.pop_b) / self.pop_b,
            gamma_ab: self.corr_adag_b.norm() / geo,
            eta_ab: self.corr_ab.norm() / geo,
        })
    }

    /// Named real values, complex correlators split into re/im/abs.
    pub fn fields(&self) -> Vec<(&'static str, T)> {
        let mut out = vec![
            ("var_xa", self.var_xa),
            ("var_ya", self.var_ya),
            ("var_xb", self.var_xb),
            ("var_yb", self.var_yb),
            ("xy_a", self.xy_a),
            ("xy_b", self.xy_b),
            ("pop_a", self.pop_a),
            ("pop_b", self.pop_b),
        ];
        let complex = [
            (["corr_aa_re", "corr_aa_im", "corr_aa_abs"], self.corr_aa),
            (["corr_bb_re", "corr_bb_im", "corr_bb_abs"], self.corr_bb),
            (["corr_ab_re", "corr_ab_im", "corr_ab_abs"], self.corr_ab),
            (["corr_adag_b_re", "corr_adag_b_im", "corr_adag_b_abs"], self.corr_adag_b),
        ];
        for (names, z) in complex {
            out.push((names[0], z.re));
            out.push((names[1], z.im));
            out.push((names[2], z.norm()));
        }
        out
    }
}

impl<T: Scalar> Degrees<T> {
    pub fn fields(&self) -> [(&'static str, T); 4] {
        [("eta_aa", self.eta_aa), ("eta_bb", self.eta_bb), ("gamma_ab", self.gamma_ab), ("eta_ab", self.eta_ab)]
    }
}

impl<T: Scalar> SteadyStateReport<T> {
    pub fn from_moments(m: Moments<T>) -> Result<Self> {
        let d = m.degrees()?;
        Ok(Self::from_parts(m, d))
    }

    pub fn from_parts(m: Moments<T>, d: Degrees<T>) -> Self {
        SteadyStateReport {
            var_xa: m.var_xa,
            var_ya: m.var_ya,
            var_xb: m.var_xb,
            var_yb: m.var_yb,
            xy_a: m.xy_a,
            xy_b: m.xy_b,
            pop_a: m.pop_a,
            pop_b: m.pop_b,
            corr_aa: m.corr_aa,
            corr_bb: m.corr_bb,
            corr_ab: m.corr_ab,
            corr_adag_b: m.corr_adag_b,
            eta_aa: d.eta_aa,
            eta_bb: d.eta_bb,
            gamma_ab: d.gamma_ab,
            eta_ab: d.eta_ab,
        }
    }

    pub fn moments(&self) -> Moments<T> {
        Moments {
            var_xa: self.var_xa,
            var_ya: self.var_ya,
            var_xb: self.var_xb,
            var_yb: self.var_yb,
            xy_a: self.xy_a,
            xy_b: self.xy_b,
            pop_a: self.pop_a,
            pop_b: self.pop_b,
            corr_aa: self.corr_aa,
            corr_bb: self.corr_bb,
            corr_ab: self.corr_ab,
            corr_adag_b: self.corr_adag_b,
        }
    }

    pub fn degrees(&self) -> Degrees<T> {
        Degrees { eta_aa: self.eta_aa, eta_bb: self.eta_bb, gamma_ab: self.gamma_ab, eta_ab: self.eta_ab }
    }

    pub fn fields(&self) -> Vec<(&'static str, T)> {
        let mut out = self.moments().fields();
        out.extend(self.degrees().fields());
        out
    }
}

/// Column names produced by [`SteadyStateReport::fields`], in order.
pub fn report_field_names() -> Vec<&'static str> {
    let zero = Complex::new(0.0f64, 0.0);
    let m = Moments {
        var_xa: 0.0,
        var_ya: 0.0,
        var_xb: 0.0,
        var_yb: 0.0,
        xy_a: 0.0,
        xy_b: 0.0,
        pop_a: 0.0,
        pop_b: 0.0,
        corr_aa: zero,
        corr_bb: zero,
        corr_ab: zero,
        corr_adag_b: zero,
    };
    let d = Degrees { eta_aa: 0.0, eta_bb: 0.0, gamma_ab: 0.0, eta_ab: 0.0 };
    SteadyStateReport::from_parts(m, d).fields().into_iter().map(|(n, _)| n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(pop_a: f64, pop_b: f64) -> Moments<f64> {
        Moments {
            var_xa: 0.5 + pop_a,
            var_ya: 0.5 + pop_a,
            var_xb: 0.5 + pop_b,
            var_yb: 0.5 + pop_b,
            xy_a: 0.0,
            xy_b: 0.0,
            pop_a,
            pop_b,
            corr_aa: Complex::new(0.3, 0.4),
            corr_bb: Complex::new(-0.6, 0.0),
            corr_ab: Complex::new(0.0, -2.0),
            corr_adag_b: Complex::new(0.5, 0.0),
        }
    }

    #[test]
    fn degrees_follow_definitions() {
        let d = moments(1.0, 4.0).degrees().unwrap();
        assert!((d.eta_aa - (0.5 - 1.0)).abs() < 1e-15);
        assert!((d.eta_bb - (0.6 - 4.0) / 4.0).abs() < 1e-15);
        assert!((d.gamma_ab - 0.25).abs() < 1e-15);
        assert!((d.eta_ab - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_population_is_an_error() {
        assert!(matches!(moments(0.0, 1.0).degrees(), Err(Error::DegeneratePopulation { .. })));
        assert!(moments(1e-17, 1e-17).degrees().is_err());
    }

    #[test]
    fn field_names_are_unique_and_complete() {
        let names = report_field_names();
        assert_eq!(names.len(), 8 + 12 + 4);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }
}
