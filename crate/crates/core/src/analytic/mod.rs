//! Closed-form stationary statistics.
//!
//! Every expression branches on ḡ ≥ λ̄ (exponential amplification, including
//! the exceptional point) versus λ̄ > ḡ (oscillatory). The hyperbolic and
//! circular factors are evaluated through the rational form
//! `S = 1/(1 + λ̄² − ḡ²)`:
//!
//! ```text
//! cosh²ψ = S,  sinh²ψ = (ḡ² − λ̄²) S       (ḡ > λ̄)
//! cos²χ  = S,  sin²χ  = (λ̄² − ḡ²) S       (λ̄ > ḡ)
//! ```
//!
//! so a single code path stays finite up to the instability threshold and
//! across the exceptional point. All couplings below are normalised by κ.

pub mod slices;

use num_complex::Complex;

use crate::error::Result;
use crate::linalg::Mat4;
use crate::model::{ReservoirSpec, SystemParams, XA, XB, YA, YB};
use crate::report::{Degrees, Moments, SteadyStateReport};
use crate::scalar::Scalar;

/// Normalised inputs shared by every closed form.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Inputs<T> {
    pub g: T,
    pub l: T,
    pub n: T,
    pub m: T,
    /// ½ + n
    pub h: T,
    pub phi: T,
    /// cosh²ψ or cos²χ
    pub s: T,
    pub exponential: bool,
}

impl<T: Scalar> Inputs<T> {
    pub fn new(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<Self> {
        let s = params.s_factor()?;
        let g = params.g_bar();
        let l = params.lambda_bar();
        Ok(Inputs { g, l, n: res.n(), m: res.m(), h: T::half() + res.n(), phi: params.phi(), s, exponential: g >= l })
    }

    /// sinh²ψ, meaningful for ḡ ≥ λ̄.
    pub fn sinh2_psi(&self) -> T {
        (self.g * self.g - self.l * self.l) * self.s
    }

    /// sin²χ, meaningful for λ̄ > ḡ.
    pub fn sin2_chi(&self) -> T {
        (self.l * self.l - self.g * self.g) * self.s
    }

    pub fn cos_2phi(&self) -> T {
        (T::two() * self.phi).cos()
    }

    pub fn sin_2phi(&self) -> T {
        (T::two() * self.phi).sin()
    }
}

/// Stationary quadrature variances ⟨X_a²⟩, ⟨Y_a²⟩, ⟨X_b²⟩, ⟨Y_b²⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Variances<T> {
    pub xa: T,
    pub ya: T,
    pub xb: T,
    pub yb: T,
}

pub fn steady_variances<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<Variances<T>> {
    let q = Inputs::new(params, res)?;
    Ok(if q.exponential { exponential_variances(&q) } else { oscillatory_variances(&q) })
}

fn exponential_variances<T: Scalar>(q: &Inputs<T>) -> Variances<T> {
    let half = T::half();
    let c2 = q.cos_2phi();
    let (h, m, s) = (q.h, q.m, q.s);
    let local = T::one() + half * q.sinh2_psi();
    let diff2 = (q.g - q.l) * (q.g - q.l);
    let sum2 = (q.g + q.l) * (q.g + q.l);
    Variances {
        xa: (h + m) * local + half * diff2 * (h - m * c2) * s,
        ya: (h - m) * local + half * sum2 * (h + m * c2) * s,
        xb: (h + m * c2) * local + half * diff2 * (h - m) * s,
        yb: (h - m * c2) * local + half * sum2 * (h + m) * s,
    }
}

fn oscillatory_variances<T: Scalar>(q: &Inputs<T>) -> Variances<T> {
    let c2 = q.cos_2phi();
    let (g, l, h, m, s) = (q.g, q.l, q.h, q.m, q.s);
    let rotated = m * q.phi.cos().powi(2) * q.sin2_chi();
    let shrink = g * (l - g) * s;
    let grow = g * (l + g) * s;
    Variances {
        xa: (h + m - rotated) - (h - m * c2) * shrink,
        ya: (h - m + rotated) + (h + m * c2) * grow,
        xb: (h + m * c2 - rotated) - (h - m) * shrink,
        yb: (h - m * c2 + rotated) + (h + m) * grow,
    }
}

/// Mean photon numbers (⟨a†a⟩, ⟨b†b⟩). Only mode a depends on φ.
pub fn steady_populations<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<(T, T)> {
    let q = Inputs::new(params, res)?;
    let coupling = q.h * q.g * q.g;
    let cross = q.g * q.l * q.m;
    Ok((q.n + (coupling + cross * q.cos_2phi()) * q.s, q.n + (coupling + cross) * q.s))
}

/// Symmetrised ⟨X_aY_a⟩ and ⟨X_bY_b⟩ (the constant commutator part i/2 is
/// not included).
pub fn same_mode_xy<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<(T, T)> {
    let q = Inputs::new(params, res)?;
    if q.exponential {
        let sh = q.sinh2_psi();
        let ms = q.m * q.sin_2phi();
        Ok((T::half() * ms * sh, ms * (T::one() + T::half() * sh)))
    } else {
        let (aa, bb) = oscillatory_two_photon(&q);
        Ok((aa.im, bb.im))
    }
}

/// Local two-photon correlators (⟨aa⟩, ⟨bb⟩).
pub fn same_mode_two_photon<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let q = Inputs::new(params, res)?;
    Ok(if q.exponential { exponential_two_photon(&q) } else { oscillatory_two_photon(&q) })
}

fn exponential_two_photon<T: Scalar>(q: &Inputs<T>) -> (Complex<T>, Complex<T>) {
    let (g, l, h, m, s, phi) = (q.g, q.l, q.h, q.m, q.s, q.phi);
    let quarter_turn = T::FRAC_PI_2();
    let thermal = Complex::from(h * g * l);
    let from_linear = Complex::from_polar(m * phi.cos(), phi) * (l * l);
    let aa_nonlinear = Complex::from_polar(m * phi.sin(), -(phi + quarter_turn)) * (g * g);
    let bb_nonlinear = Complex::from_polar(m * phi.sin(), phi - quarter_turn) * (g * g);
    let aa = Complex::from(m) - (thermal + aa_nonlinear + from_linear) * s;
    let bb = Complex::from_polar(m, T::two() * phi) - (thermal + bb_nonlinear + from_linear) * s;
    (aa, bb)
}

fn oscillatory_two_photon<T: Scalar>(q: &Inputs<T>) -> (Complex<T>, Complex<T>) {
    let (g, l, h, m, s, phi) = (q.g, q.l, q.h, q.m, q.s, q.phi);
    let rotated = Complex::from_polar(m * phi.cos(), phi) * q.sin2_chi();
    let aa = Complex::from(m) - rotated - Complex::from((h * g * l + m * g * g * q.cos_2phi()) * s);
    let bb = Complex::from_polar(m, T::two() * phi) - rotated - Complex::from((h * g * l + m * g * g) * s);
    (aa, bb)
}

/// Sums and differences of the inter-mode quadrature moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossQuadratures<T> {
    /// ⟨X_aX_b⟩ + ⟨Y_aY_b⟩
    pub xx_plus_yy: T,
    /// ⟨X_aX_b⟩ − ⟨Y_aY_b⟩
    pub xx_minus_yy: T,
    /// ⟨X_aY_b⟩ + ⟨Y_aX_b⟩
    pub xy_plus_yx: T,
    /// ⟨X_aY_b⟩ − ⟨Y_aX_b⟩
    pub xy_minus_yx: T,
}

impl<T: Scalar> CrossQuadratures<T> {
    pub fn from_moments(xa_xb: T, ya_yb: T, xa_yb: T, ya_xb: T) -> Self {
        CrossQuadratures {
            xx_plus_yy: xa_xb + ya_yb,
            xx_minus_yy: xa_xb - ya_yb,
            xy_plus_yx: xa_yb + ya_xb,
            xy_minus_yx: xa_yb - ya_xb,
        }
    }

    pub fn xa_xb(&self) -> T {
        T::half() * (self.xx_plus_yy + self.xx_minus_yy)
    }
    pub fn ya_yb(&self) -> T {
        T::half() * (self.xx_plus_yy - self.xx_minus_yy)
    }
    pub fn xa_yb(&self) -> T {
        T::half() * (self.xy_plus_yx + self.xy_minus_yx)
    }
    pub fn ya_xb(&self) -> T {
        T::half() * (self.xy_plus_yx - self.xy_minus_yx)
    }

    /// (⟨a†b⟩, ⟨ab⟩) assembled from the quadrature moments.
    pub fn assemble(&self) -> (Complex<T>, Complex<T>) {
        let half = T::half();
        (
            Complex::new(half * self.xx_plus_yy, half * self.xy_minus_yx),
            Complex::new(half * self.xx_minus_yy, half * self.xy_plus_yx),
        )
    }
}

/// The same expressions hold in both regimes once cosh²ψ and cos²χ are
/// replaced by `S`.
pub fn cross_quadrature_correlators<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<CrossQuadratures<T>> {
    let q = Inputs::new(params, res)?;
    let (g, l, h, m, s, phi) = (q.g, q.l, q.h, q.m, q.s, q.phi);
    let s2 = q.sin_2phi();
    Ok(CrossQuadratures {
        xx_plus_yy: -m * g * s2 * s,
        xx_minus_yy: m * l * s2 * s,
        xy_plus_yx: -T::two() * (h * g + m * l * phi.cos().powi(2)) * s,
        xy_minus_yx: -T::two() * m * g * phi.sin().powi(2) * s,
    })
}

/// One-photon ⟨a†b⟩ and two-photon ⟨ab⟩ inter-mode correlators.
pub fn cross_mode_correlators<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let q = Inputs::new(params, res)?;
    let (g, l, h, m, s, phi) = (q.g, q.l, q.h, q.m, q.s, q.phi);
    let adag_b = -Complex::from_polar(m * g * phi.sin(), phi) * s;
    let inner = Complex::from(h * g) + Complex::from_polar(m * l * phi.cos(), phi);
    let ab = -Complex::<T>::i() * inner * s;
    Ok((adag_b, ab))
}

pub fn moments<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<Moments<T>> {
    let v = steady_variances(params, res)?;
    let (xy_a, xy_b) = same_mode_xy(params, res)?;
    let (pop_a, pop_b) = steady_populations(params, res)?;
    let (corr_aa, corr_bb) = same_mode_two_photon(params, res)?;
    let (corr_adag_b, corr_ab) = cross_mode_correlators(params, res)?;
    Ok(Moments {
        var_xa: v.xa,
        var_ya: v.ya,
        var_xb: v.xb,
        var_yb: v.yb,
        xy_a,
        xy_b,
        pop_a,
        pop_b,
        corr_aa,
        corr_bb,
        corr_ab,
        corr_adag_b,
    })
}

pub fn degrees<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<Degrees<T>> {
    moments(params, res)?.degrees()
}

pub fn steady_state_report<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
) -> Result<SteadyStateReport<T>> {
    SteadyStateReport::from_moments(moments(params, res)?)
}

/// Stationary symmetrised covariance assembled from the closed forms.
pub fn covariance<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<Mat4<T>> {
    let v = steady_variances(params, res)?;
    let (xy_a, xy_b) = same_mode_xy(params, res)?;
    let c = cross_quadrature_correlators(params, res)?;
    let mut sigma = Mat4::diagonal([v.xa, v.ya, v.xb, v.yb]);
    let mut set = |i: usize, j: usize, x: T| {
        sigma[(i, j)] = x;
        sigma[(j, i)] = x;
    };
    set(XA, YA, xy_a);
    set(XB, YB, xy_b);
    set(XA, XB, c.xa_xb());
    set(YA, YB, c.ya_yb());
    set(XA, YB, c.xa_yb());
    set(YA, XB, c.ya_xb());
    Ok(sigma)
}

#[cfg(test)]
mod tests;
