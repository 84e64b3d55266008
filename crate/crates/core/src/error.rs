use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unphysical reservoir: m = {m} exceeds sqrt(n(n+1)) = {bound}")]
    UnphysicalReservoir { m: f64, bound: f64 },

    #[error("unstable: kappa^2+lambda^2-g^2 <= 0 (margin {margin})")]
    Unstable { margin: f64 },

    #[error("unstable: drift matrix has an eigenvalue with non-negative real part")]
    NotHurwitz,

    #[error("singular linear system (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("degenerate populations: pop_a = {pop_a:e}, pop_b = {pop_b:e}")]
    DegeneratePopulation { pop_a: f64, pop_b: f64 },

    #[error("step size {dt} exceeds {max}")]
    StepSize { dt: f64, max: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trajectory {trajectory} diverged at step {step}")]
    Divergence { trajectory: u64, step: usize },

    #[error("invalid SDE configuration: {0}")]
    SdeConfig(String),
}
