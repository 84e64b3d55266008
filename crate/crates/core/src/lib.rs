//! Steady-state statistics of two damped bosonic modes coupled by a beam
//! splitter (λ) and a two-mode squeezer (g), driven by thermal or
//! phase-sensitive (squeezed) reservoirs.
//!
//! Three independent engines compute the same observables:
//!
//! * [`analytic`] evaluates the closed-form expressions,
//! * [`dynamics`] solves the Lyapunov equation for the covariance matrix,
//! * [`stochastic`] integrates the Langevin equations by Monte Carlo.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below cover the common case.

// `!(x > 0)` is used deliberately so that NaN is rejected along with the
// out-of-range values; dense 4×4 and 10×10 kernels read best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod report;
pub mod scalar;
pub mod stochastic;

pub use dynamics::{steady_state, steady_state_lyapunov, CovarianceMatrix};
pub use error::{Error, Result};
pub use linalg::Mat4;
pub use model::{
    classify_regime, diffusion_matrix, drift_matrix, CorrelationMode, DiffusionMatrix, DriftMatrix, Regime, RegimeInfo,
    ReservoirSpec, SystemParams,
};
pub use report::{Degrees, Moments, SteadyStateReport};
pub use scalar::Scalar;
pub use stochastic::{EnsembleEstimate, SdeConfig};

pub type SystemParamsF64 = SystemParams<f64>;
pub type ReservoirSpecF64 = ReservoirSpec<f64>;
pub type CovarianceMatrixF64 = CovarianceMatrix<f64>;
pub type SteadyStateReportF64 = SteadyStateReport<f64>;
pub type SdeConfigF64 = SdeConfig<f64>;

pub type SystemParamsF32 = SystemParams<f32>;
pub type ReservoirSpecF32 = ReservoirSpec<f32>;
pub type CovarianceMatrixF32 = CovarianceMatrix<f32>;
pub type SteadyStateReportF32 = SteadyStateReport<f32>;
