//! Parameters, regime classification and the linear Gaussian dynamics
//! (drift and diffusion) of the two doubly coupled modes.
//!
//! Quadratures are always ordered `(X_a, Y_a, X_b, Y_b)`. The mode-b
//! quadratures are taken in the frame rotated by the reservoir phase φ.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::scalar::Scalar;

/// Index of each quadrature in every 4-vector and 4×4 matrix of the crate.
pub const XA: usize = 0;
pub const YA: usize = 1;
pub const XB: usize = 2;
pub const YB: usize = 3;

/// Relative width of the band around ḡ = λ̄ reported as an exceptional point.
pub const REGIME_TOL: f64 = 1e-9;

/// Coupling strengths and damping of the two-mode system.
///
/// `g` is the two-mode-squeezing (nonlinear) rate, `lambda` the
/// photon-exchange (linear) rate, both in the same units as `kappa`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams<T> {
    kappa: T,
    g: T,
    lambda: T,
    phi: T,
    g_bar: T,
    lambda_bar: T,
}

impl<T: Scalar> SystemParams<T> {
    /// `phi` is reduced into `[0, 2π)`.
    pub fn new(kappa: T, g: T, lambda: T, phi: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(invalid("kappa", "must be finite and > 0"));
        }
        if !(g >= T::zero()) || !g.is_finite() {
            return Err(invalid("g", "must be finite and >= 0"));
        }
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(invalid("lambda", "must be finite and >= 0"));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        let two_pi = T::two() * T::PI();
        let mut phi = phi % two_pi;
        if phi < T::zero() {
            phi = phi + two_pi;
        }
        if phi >= two_pi {
            phi = T::zero();
        }
        Ok(SystemParams { kappa, g, lambda, phi, g_bar: g / kappa, lambda_bar: lambda / kappa })
    }

    /// Convenience constructor with `kappa = 1`, so the rates are already
    /// dimensionless.
    pub fn normalized(g: T, lambda: T, phi: T) -> Result<Self> {
        Self::new(T::one(), g, lambda, phi)
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }
    pub fn g(&self) -> T {
        self.g
    }
    pub fn lambda(&self) -> T {
        self.lambda
    }
    pub fn phi(&self) -> T {
        self.phi
    }
    /// g/κ
    pub fn g_bar(&self) -> T {
        self.g_bar
    }
    /// λ/κ
    pub fn lambda_bar(&self) -> T {
        self.lambda_bar
    }

    pub fn with_phi(&self, phi: T) -> Result<Self> {
        Self::new(self.kappa, self.g, self.lambda, phi)
    }

    /// `1 + λ̄² − ḡ²`, the constant term of the normalised characteristic
    /// polynomial. Positive iff the steady state exists.
    pub fn stability_margin(&self) -> T {
        T::one() + self.lambda_bar * self.lambda_bar - self.g_bar * self.g_bar
    }

    /// `S = κ²/(κ²+λ²−g²)`: equals cosh²ψ for ḡ > λ̄ and cos²χ for λ̄ > ḡ.
    pub fn s_factor(&self) -> Result<T> {
        let margin = self.stability_margin();
        if margin > T::zero() {
            Ok(T::one() / margin)
        } else {
            Err(Error::Unstable { margin: margin.as_f64() })
        }
    }
}

/// Occupation `n` and two-photon correlation `m` shared by both local
/// reservoirs. Always physical: `0 ≤ m ≤ sqrt(n(n+1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirSpec<T> {
    n: T,
    m: T,
}

/// How `m` is chosen relative to `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorrelationMode<T> {
    /// m = 0
    Thermal,
    /// m = n, the largest classically squeezed value.
    ClassicalMax,
    /// m = sqrt(n(n+1)), the largest quantum squeezed value.
    QuantumMax,
    Literal(T),
}

impl<T: Scalar> CorrelationMode<T> {
    pub fn resolve(&self, n: T) -> T {
        match *self {
            CorrelationMode::Thermal => T::zero(),
            CorrelationMode::ClassicalMax => n,
            CorrelationMode::QuantumMax => (n * (n + T::one())).sqrt(),
            CorrelationMode::Literal(m) => m,
        }
    }
}

impl<T: Scalar> ReservoirSpec<T> {
    pub fn new(n: T, m: T) -> Result<Self> {
        if !(n >= T::zero()) || !n.is_finite() {
            return Err(invalid("n", "must be finite and >= 0"));
        }
        if !(m >= T::zero()) || !m.is_finite() {
            return Err(invalid("m", "must be finite and >= 0"));
        }
        let bound = (n * (n + T::one())).sqrt();
        if m > bound * (T::one() + T::lit(4.0) * T::epsilon()) {
            return Err(Error::UnphysicalReservoir { m: m.as_f64(), bound: bound.as_f64() });
        }
        Ok(ReservoirSpec { n, m })
    }

    pub fn with_mode(n: T, mode: CorrelationMode<T>) -> Result<Self> {
        Self::new(n, mode.resolve(n))
    }

    pub fn thermal(n: T) -> Result<Self> {
        Self::new(n, T::zero())
    }

    pub fn vacuum() -> Self {
        ReservoirSpec { n: T::zero(), m: T::zero() }
    }

    pub fn n(&self) -> T {
        self.n
    }
    pub fn m(&self) -> T {
        self.m
    }

    pub fn is_thermal(&self) -> bool {
        self.m == T::zero()
    }

    pub fn is_classically_squeezed(&self) -> bool {
        self.m <= self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// ḡ > λ̄: real root splitting, exponential amplification.
    Exponential,
    /// λ̄ > ḡ: complex roots, damped oscillation.
    Oscillatory,
    /// ḡ = λ̄ within tolerance: coalescing roots.
    ExceptionalPoint,
}

/// Characteristic roots and the auxiliary factors of each regime.
///
/// Roots are in units of κ. Fields that belong to the other regime are
/// `None`. At the exceptional point α = β = 0 and ψ = χ = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeInfo<T> {
    pub regime: Regime,
    pub roots: [Complex<T>; 2],
    pub alpha: Option<T>,
    pub beta: Option<T>,
    pub psi: Option<T>,
    pub chi: Option<T>,
    pub u: Option<T>,
    pub w: Option<T>,
    pub kappa: T,
    pub g_bar: T,
    pub lambda_bar: T,
}

pub fn classify_regime<T: Scalar>(params: &SystemParams<T>, tol: T) -> RegimeInfo<T> {
    let g = params.g_bar();
    let l = params.lambda_bar();
    let one = T::one();
    let mut info = RegimeInfo {
        regime: Regime::ExceptionalPoint,
        roots: [Complex::new(-one, T::zero()); 2],
        alpha: None,
        beta: None,
        psi: None,
        chi: None,
        u: None,
        w: None,
        kappa: params.kappa(),
        g_bar: g,
        lambda_bar: l,
    };
    let band = tol * g.max(l).max(one);
    if (g - l).abs() <= band {
        info.alpha = Some(T::zero());
        info.beta = Some(T::zero());
        info.psi = Some(T::zero());
        info.chi = Some(T::zero());
    } else if g > l {
        let alpha = (g * g - l * l).sqrt();
        info.regime = Regime::Exponential;
        info.roots = [Complex::new(-one + alpha, T::zero()), Complex::new(-one - alpha, T::zero())];
        info.alpha = Some(alpha);
        info.psi = (alpha < one).then(|| alpha.atanh());
        info.u = Some(((g - l) / (g + l)).sqrt());
    } else {
        let beta = (l * l - g * g).sqrt();
        info.regime = Regime::Oscillatory;
        info.roots = [Complex::new(-one, beta), Complex::new(-one, -beta)];
        info.beta = Some(beta);
        info.chi = Some(beta.atan());
        info.w = Some(((l - g) / (l + g)).sqrt());
    }
    info
}

/// Coefficient matrix of the quadrature equations of motion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftMatrix<T>(Mat4<T>);

impl<T: Scalar> DriftMatrix<T> {
    /// Wraps an arbitrary 4×4 drift; the solvers check stability themselves.
    pub fn from_matrix(m: Mat4<T>) -> Self {
        DriftMatrix(m)
    }
    pub fn matrix(&self) -> &Mat4<T> {
        &self.0
    }
}

/// Noise covariance rate `D` in `dΣ/dt = AΣ + ΣAᵀ + D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffusionMatrix<T>(Mat4<T>);

impl<T: Scalar> DiffusionMatrix<T> {
    pub fn from_matrix(m: Mat4<T>) -> Self {
        DiffusionMatrix(m)
    }
    pub fn matrix(&self) -> &Mat4<T> {
        &self.0
    }
}

pub fn drift_matrix<T: Scalar>(params: &SystemParams<T>) -> DriftMatrix<T> {
    let k = params.kappa();
    let minus = -(params.g() - params.lambda());
    let plus = -(params.g() + params.lambda());
    let z = T::zero();
    DriftMatrix(Mat4([[-k, z, z, minus], [z, -k, plus, z], [z, minus, -k, z], [plus, z, z, -k]]))
}

/// Symmetrised input-noise covariance of the two independent reservoirs.
pub fn input_noise_covariance<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Mat4<T> {
    let base = T::half() + res.n();
    let m = res.m();
    let two_phi = T::two() * params.phi();
    let (s2, c2) = two_phi.sin_cos();
    let mut noise = Mat4::diagonal([base + m, base - m, base + m * c2, base - m * c2]);
    noise[(XB, YB)] = m * s2;
    noise[(YB, XB)] = m * s2;
    noise
}

pub fn diffusion_matrix<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> DiffusionMatrix<T> {
    DiffusionMatrix(input_noise_covariance(params, res).scale(T::two() * params.kappa()))
}

/// True iff both characteristic roots have negative real part.
pub fn stability<T: Scalar>(params: &SystemParams<T>) -> bool {
    params.stability_margin() > T::zero()
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParameter { name, reason: reason.to_string() }
}
