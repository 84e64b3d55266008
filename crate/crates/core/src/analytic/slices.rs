//! Specialised closed forms valid on particular parameter slices (thermal
//! reservoirs, φ = 0, φ = π/2, the exceptional point). Each ignores the
//! phase stored in `SystemParams` and assumes the slice named in its doc.
//! They exist to cross-check the general expressions.

use num_complex::Complex;

use super::Inputs;
use crate::error::{Error, Result};
use crate::model::{ReservoirSpec, SystemParams};
use crate::scalar::Scalar;

fn require_oscillatory<T: Scalar>(q: &Inputs<T>) -> Result<()> {
    if q.exponential {
        Err(Error::InvalidParameter { name: "lambda", reason: "expression only valid for lambda > g".into() })
    } else {
        Ok(())
    }
}

/// Thermal reservoirs (m = 0): (⟨X²⟩, ⟨Y²⟩), equal for both modes.
pub fn thermal_variances<T: Scalar>(params: &SystemParams<T>, n: T) -> Result<(T, T)> {
    let q = Inputs::new(params, &ReservoirSpec::thermal(n)?)?;
    let (g, l, h, s) = (q.g, q.l, q.h, q.s);
    Ok(if q.exponential {
        (h * (T::one() + g * (g - l) * s), h * (T::one() + g * (g + l) * s))
    } else {
        (h * (T::one() - g * (l - g) * s), h * (T::one() + g * (l + g) * s))
    })
}

/// Thermal reservoirs: ⟨aa⟩ = ⟨bb⟩, real and non-positive.
pub fn thermal_two_photon<T: Scalar>(params: &SystemParams<T>, n: T) -> Result<T> {
    let q = Inputs::new(params, &ReservoirSpec::thermal(n)?)?;
    Ok(-q.h * q.g * q.l * q.s)
}

/// Thermal reservoirs: η_aa = η_bb.
pub fn thermal_squeezing_degree<T: Scalar>(params: &SystemParams<T>, n: T) -> Result<T> {
    let q = Inputs::new(params, &ReservoirSpec::thermal(n)?)?;
    let (g, l, h, s) = (q.g, q.l, q.h, q.s);
    let pop = n + h * g * g * s;
    Ok(if q.exponential { -(n + h * g * (g - l) * s) / pop } else { (h * g * (l - g) * s - n) / pop })
}

/// Exceptional point ḡ = λ̄ with m = sqrt(n(n+1)) and n ≫ 1:
/// ⟨a†a⟩ ≈ n + (½+n)(1 + cos2φ)ḡ².
pub fn ep_population_a_strong_squeezing<T: Scalar>(params: &SystemParams<T>, n: T) -> T {
    let g = params.g_bar();
    n + (T::half() + n) * (T::one() + (T::two() * params.phi()).cos()) * g * g
}

/// Exceptional point ḡ = λ̄ (uses ḡ for both couplings): (⟨aa⟩, ⟨bb⟩).
pub fn ep_two_photon<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> (Complex<T>, Complex<T>) {
    let g2 = params.g_bar() * params.g_bar();
    let (h, m) = (T::half() + res.n(), res.m());
    let phi = params.phi();
    let aa = Complex::from(m - (h + m * (T::two() * phi).cos()) * g2);
    let bb = Complex::from_polar(m, T::two() * phi) - Complex::from((h + m) * g2);
    (aa, bb)
}

fn quadrature_phase_denominator<T: Scalar>(q: &Inputs<T>) -> T {
    let base = q.n + q.h * q.g * q.g * q.s;
    let cross = q.m * q.g * q.l * q.s;
    (base * base - cross * cross).sqrt()
}

/// φ = π/2: γ_ab, either regime.
pub fn coherence_degree_quadrature_phase<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<T> {
    let q = Inputs::new(params, res)?;
    Ok(q.m * q.g * q.s / quadrature_phase_denominator(&q))
}

/// φ = π/2: η_ab, either regime.
pub fn cross_two_photon_degree_quadrature_phase<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<T> {
    let q = Inputs::new(params, res)?;
    Ok(q.h * q.g * q.s / quadrature_phase_denominator(&q))
}

/// φ = 0: η_ab, either regime.
pub fn cross_two_photon_degree_in_phase<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<T> {
    let q = Inputs::new(params, res)?;
    let (g, l, h, m, n, s) = (q.g, q.l, q.h, q.m, q.n, q.s);
    let pumped = (h * g + m * l) * s;
    Ok(T::one() + ((T::one() - g) * pumped - n) / (n + g * pumped))
}

/// φ = 0, λ̄ > ḡ: η_aa = η_bb.
pub fn oscillatory_squeezing_degree_in_phase<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<T> {
    let q = Inputs::new(params, res)?;
    require_oscillatory(&q)?;
    let (g, l, h, m, n, s) = (q.g, q.l, q.h, q.m, q.n, q.s);
    let num = (m - g * (h * l + m * g)).abs() * s;
    Ok(num / (n + g * (h * g + m * l) * s) - T::one())
}

/// φ = π/2, λ̄ > ḡ: (η_aa, η_bb).
pub fn oscillatory_squeezing_degrees_quadrature_phase<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<(T, T)> {
    let q = Inputs::new(params, res)?;
    require_oscillatory(&q)?;
    let (g, l, h, m, n, s) = (q.g, q.l, q.h, q.m, q.n, q.s);
    let eta_aa = (m - g * (h * l - m * g) * s).abs() / (n + g * (h * g - m * l) * s) - T::one();
    let eta_bb = (m - n + g * (h - m) * (l - g) * s) / (n + g * (h * g + m * l) * s);
    Ok((eta_aa, eta_bb))
}
