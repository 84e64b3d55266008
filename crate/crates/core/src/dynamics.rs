//! Numerical engine: stationary covariance from the continuous Lyapunov
//! equation, transient covariance by RK4, homogeneous mean propagation and
//! conversion of a covariance matrix into observables.

use num_complex::Complex;

use crate::analytic::CrossQuadratures;
use crate::error::{Error, Result};
use crate::linalg::{is_hurwitz, solve_dense, symmetric_eigenvalues, Mat4};
use crate::model::{
    diffusion_matrix, drift_matrix, DiffusionMatrix, DriftMatrix, Regime, RegimeInfo, ReservoirSpec, SystemParams, XA,
    XB, YA, YB,
};
use crate::report::{Moments, SteadyStateReport};
use crate::scalar::Scalar;

/// Symmetrised second moments in `(X_a, Y_a, X_b, Y_b)` order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceMatrix<T>(Mat4<T>);

impl<T: Scalar> CovarianceMatrix<T> {
    /// Rejects matrices asymmetric beyond `1e-12` relative to their largest entry.
    pub fn new(m: Mat4<T>) -> Result<Self> {
        let tol = T::lit(1e-12) * m.max_abs().max(T::one());
        if m.asymmetry() > tol {
            return Err(Error::InvalidParameter { name: "sigma", reason: format!("asymmetric by {}", m.asymmetry()) });
        }
        Ok(CovarianceMatrix(m.symmetrized()))
    }

    /// Σ = I/2
    pub fn vacuum() -> Self {
        CovarianceMatrix(Mat4::identity().scale(T::half()))
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.0
    }

    /// Smallest eigenvalue of the Hermitian matrix Σ + (i/2)Ω, where Ω is
    /// the symplectic form with `[X_i, Y_i] = i`. Non-negative for every
    /// physical state.
    pub fn uncertainty_min_eigenvalue(&self) -> T {
        let omega = symplectic_form::<T>();
        let half = T::half();
        // real 8×8 representation [[Σ, -Ω/2], [Ω/2, Σ]] of Σ + iΩ/2
        let mut big = vec![vec![T::zero(); 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                big[i][j] = self.0[(i, j)];
                big[i + 4][j + 4] = self.0[(i, j)];
                big[i][j + 4] = -half * omega[(i, j)];
                big[i + 4][j] = half * omega[(i, j)];
            }
        }
        symmetric_eigenvalues(&big)[0]
    }
}

pub fn symplectic_form<T: Scalar>() -> Mat4<T> {
    let mut omega = Mat4::zeros();
    omega[(XA, YA)] = T::one();
    omega[(YA, XA)] = -T::one();
    omega[(XB, YB)] = T::one();
    omega[(YB, XB)] = -T::one();
    omega
}

fn lyapunov_residual<T: Scalar>(a: &Mat4<T>, d: &Mat4<T>, sigma: &Mat4<T>) -> Mat4<T> {
    *a * *sigma + *sigma * a.transpose() + *d
}

const fn sym_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // row-major upper triangle of a 4×4 matrix
    i * 4 - i * (i + 1) / 2 + j
}

/// Unique Σ with `AΣ + ΣAᵀ + D = 0`, by solving the 10 × 10 linear system
/// for the independent entries of the symmetric unknown.
pub fn steady_state_lyapunov<T: Scalar>(
    drift: &DriftMatrix<T>,
    diffusion: &DiffusionMatrix<T>,
) -> Result<CovarianceMatrix<T>> {
    let a = drift.matrix();
    let d = diffusion.matrix().symmetrized();
    if !is_hurwitz(a) {
        return Err(Error::NotHurwitz);
    }
    let mut system = vec![vec![T::zero(); 10]; 10];
    let mut rhs = vec![T::zero(); 10];
    for i in 0..4 {
        for j in i..4 {
            let row = sym_index(i, j);
            for k in 0..4 {
                // (AΣ)_ij + (ΣAᵀ)_ij = Σ_k A_ik Σ_kj + Σ_ik A_jk
                system[row][sym_index(k, j)] = system[row][sym_index(k, j)] + a[(i, k)];
                system[row][sym_index(i, k)] = system[row][sym_index(i, k)] + a[(j, k)];
            }
            rhs[row] = -d[(i, j)];
        }
    }
    let unpack = |x: &[T]| Mat4::from_fn(|i, j| x[sym_index(i, j)]);
    let x = solve_dense(system.clone(), rhs)?;
    let mut sigma = unpack(&x);

    // one round of iterative refinement
    let r = lyapunov_residual(a, &d, &sigma);
    let mut r_vec = vec![T::zero(); 10];
    for i in 0..4 {
        for j in i..4 {
            r_vec[sym_index(i, j)] = -r[(i, j)];
        }
    }
    let dx = solve_dense(system, r_vec)?;
    sigma = sigma + unpack(&dx);

    let residual = lyapunov_residual(a, &d, &sigma).norm_fro();
    let bound = T::lit(1e-11) * (a.norm_fro() * sigma.norm_fro() + d.norm_fro());
    if residual > bound {
        return Err(Error::Singular { pivot: residual.as_f64() });
    }
    CovarianceMatrix::new(sigma)
}

/// Stationary covariance for a parameter point.
pub fn steady_state<T: Scalar>(params: &SystemParams<T>, res: &ReservoirSpec<T>) -> Result<CovarianceMatrix<T>> {
    params.s_factor()?;
    steady_state_lyapunov(&drift_matrix(params), &diffusion_matrix(params, res))
}

/// Integrates `dΣ/dt = AΣ + ΣAᵀ + D` from `sigma0` over `[0, t]` with
/// classical RK4 at step ≤ `dt`, re-symmetrising after every step.
pub fn evolve_covariance<T: Scalar>(
    drift: &DriftMatrix<T>,
    diffusion: &DiffusionMatrix<T>,
    sigma0: &CovarianceMatrix<T>,
    t: T,
    dt: T,
) -> Result<CovarianceMatrix<T>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidParameter { name: "t", reason: "must be >= 0".into() });
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter { name: "dt", reason: "must be > 0".into() });
    }
    let a = *drift.matrix();
    let max_dt = T::lit(0.1) / a.norm_inf();
    if dt > max_dt {
        return Err(Error::StepSize { dt: dt.as_f64(), max: max_dt.as_f64() });
    }
    let d = diffusion.matrix().symmetrized();
    let mut sigma = *sigma0.matrix();
    if t == T::zero() {
        return Ok(*sigma0);
    }
    let steps = (t / dt).ceil().to_usize().unwrap_or(usize::MAX).max(1);
    let h = t / T::lit(steps as f64);
    let half_h = h * T::half();
    let f = |s: &Mat4<T>| lyapunov_residual(&a, &d, s);
    for _ in 0..steps {
        let k1 = f(&sigma);
        let k2 = f(&(sigma + k1.scale(half_h)));
        let k3 = f(&(sigma + k2.scale(half_h)));
        let k4 = f(&(sigma + k3.scale(h)));
        let incr = (k1 + k2.scale(T::two()) + k3.scale(T::two()) + k4).scale(h / T::lit(6.0));
        sigma = (sigma + incr).symmetrized();
    }
    Ok(CovarianceMatrix(sigma))
}

/// Noise-free evolution `exp(A t) x0` of the quadrature means, written in
/// terms of the characteristic roots and the u / w mixing factors.
pub fn propagate_mean<T: Scalar>(info: &RegimeInfo<T>, x0: [T; 4], t: T) -> [T; 4] {
    let tau = info.kappa * t;
    let half = T::half();
    // (i, j) pairs: X_a couples to Y_b, X_b couples to Y_a.
    let pairs = [(XA, YA, XB, YB), (XB, YB, XA, YA)];
    let mut out = [T::zero(); 4];
    match info.regime {
        Regime::Exponential => {
            let u = info.u.expect("u defined in the exponential regime");
            let e1 = info.roots[0].re * tau;
            let e2 = info.roots[1].re * tau;
            let (e1, e2) = (e1.exp(), e2.exp());
            for (xi, yi, xj, yj) in pairs {
                out[xi] = half * ((x0[xi] - u * x0[yj]) * e1 + (x0[xi] + u * x0[yj]) * e2);
                out[yi] = (half / u) * (-(x0[xj] - u * x0[yi]) * e1 + (x0[xj] + u * x0[yi]) * e2);
            }
        }
        Regime::Oscillatory => {
            let w = info.w.expect("w defined in the oscillatory regime");
            let e3 = (info.roots[0] * tau).exp();
            let e4 = (info.roots[1] * tau).exp();
            let iw = Complex::new(T::zero(), w);
            let c = |x: T| Complex::from(x);
            for (xi, yi, xj, yj) in pairs {
                let x = (c(x0[xi]) - iw * x0[yj]) * e3 + (c(x0[xi]) + iw * x0[yj]) * e4;
                let y = (c(x0[xj]) - iw * x0[yi]) * e3 - (c(x0[xj]) + iw * x0[yi]) * e4;
                out[xi] = (x * half).re;
                out[yi] = (y * Complex::new(T::zero(), half / w)).re;
            }
        }
        Regime::ExceptionalPoint => {
            // second-order expansion in q = ḡ² − λ̄², exact when q = 0
            let (g, l) = (info.g_bar, info.lambda_bar);
            let q = g * g - l * l;
            let decay = (-tau).exp();
            let even = T::one() + half * q * tau * tau;
            let odd = tau * (T::one() + q * tau * tau / T::lit(6.0));
            for (xi, yi, xj, yj) in pairs {
                out[xi] = decay * (x0[xi] * even - (g - l) * odd * x0[yj]);
                out[yi] = decay * (x0[yi] * even - (g + l) * odd * x0[xj]);
            }
        }
    }
    out
}

/// Observables of a symmetrised covariance (populations, local and
/// inter-mode correlators).
pub fn moments_from_covariance<T: Scalar>(sigma: &CovarianceMatrix<T>) -> Moments<T> {
    let s = sigma.matrix();
    let half = T::half();
    let (var_xa, var_ya, var_xb, var_yb) = (s[(XA, XA)], s[(YA, YA)], s[(XB, XB)], s[(YB, YB)]);
    let (xy_a, xy_b) = (s[(XA, YA)], s[(XB, YB)]);
    let cross = CrossQuadratures::from_moments(s[(XA, XB)], s[(YA, YB)], s[(XA, YB)], s[(YA, XB)]);
    let (corr_adag_b, corr_ab) = cross.assemble();
    Moments {
        var_xa,
        var_ya,
        var_xb,
        var_yb,
        xy_a,
        xy_b,
        pop_a: half * (var_xa + var_ya - T::one()),
        pop_b: half * (var_xb + var_yb - T::one()),
        corr_aa: Complex::new(half * (var_xa - var_ya), xy_a),
        corr_bb: Complex::new(half * (var_xb - var_yb), xy_b),
        corr_ab,
        corr_adag_b,
    }
}

pub fn report_from_covariance<T: Scalar>(sigma: &CovarianceMatrix<T>) -> Result<SteadyStateReport<T>> {
    SteadyStateReport::from_moments(moments_from_covariance(sigma))
}
