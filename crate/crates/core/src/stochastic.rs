//! Monte Carlo estimate of the stationary covariance: Euler–Maruyama
//! integration of the linear Langevin equations with additive correlated
//! Gaussian noise, averaged in time (after burn-in) and over trajectories.
//!
//! Each trajectory draws from its own ChaCha8 stream seeded with
//! `seed ^ trajectory_index`, so results do not depend on how trajectories
//! are scheduled across threads. Per-trajectory averages are combined with
//! pairwise summation in trajectory order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dynamics::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_psd, min_symmetric_eigenvalue, Mat4};
use crate::model::{
    classify_regime, diffusion_matrix, drift_matrix, DiffusionMatrix, ReservoirSpec, SystemParams, REGIME_TOL,
};
use crate::scalar::Scalar;

/// Trajectories whose quadratures exceed this magnitude are reported as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdeConfig<T> {
    pub dt: T,
    pub t_end: T,
    pub n_traj: usize,
    /// Fraction of `t_end` discarded before averaging.
    pub burn_in: T,
    pub seed: u64,
}

impl<T: Scalar> SdeConfig<T> {
    pub fn new(dt: T, t_end: T, n_traj: usize, burn_in: T, seed: u64) -> Self {
        SdeConfig { dt, t_end, n_traj, burn_in, seed }
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    fn burn_steps(&self) -> usize {
        (self.burn_in * T::lit(self.steps() as f64)).floor().to_usize().unwrap_or(0)
    }

    /// Checks the step size against the drift and that the discarded window
    /// is long enough for the covariance transient (rate `2|Re p_max|`) to
    /// decay by at least `e⁻⁵`.
    pub fn validate(&self, params: &SystemParams<T>) -> Result<()> {
        let bad = |msg: String| Err(Error::SdeConfig(msg));
        if !(self.dt > T::zero()) || !(self.t_end > T::zero()) {
            return bad("dt and t_end must be > 0".into());
        }
        if self.n_traj == 0 {
            return bad("n_traj must be >= 1".into());
        }
        if !(self.burn_in >= T::zero() && self.burn_in < T::one()) {
            return bad(format!("burn_in {} outside [0, 1)", self.burn_in));
        }
        if self.steps() <= self.burn_steps() {
            return bad("no samples left after burn-in".into());
        }
        let norm = drift_matrix(params).matrix().norm_inf();
        let max_dt = T::lit(0.05) / norm;
        if self.dt > max_dt {
            return Err(Error::StepSize { dt: self.dt.as_f64(), max: max_dt.as_f64() });
        }
        let info = classify_regime(params, T::lit(REGIME_TOL));
        let slowest = info.roots[0].re.max(info.roots[1].re);
        if slowest >= T::zero() {
            return Err(Error::Unstable { margin: params.stability_margin().as_f64() });
        }
        let decay = T::two() * slowest.abs() * params.kappa() * self.burn_in * self.t_end;
        if decay < T::lit(5.0) {
            return bad(format!("burn-in window too short: 2|Re p|·burn_in·t_end = {decay} < 5"));
        }
        Ok(())
    }
}

/// Sample covariance with per-entry standard errors (batch means, one batch
/// per trajectory).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleEstimate<T> {
    pub sigma_hat: CovarianceMatrix<T>,
    pub stderr: Mat4<T>,
    /// Number of (trajectory, time) samples averaged.
    pub n_effective: usize,
}

/// Lower-triangular `L` with `L Lᵀ = D dt`.
pub fn noise_transform<T: Scalar>(diffusion: &DiffusionMatrix<T>, dt: T) -> Result<Mat4<T>> {
    let d = diffusion.matrix().symmetrized().scale(dt);
    let scale = d.max_abs().max(T::min_positive_value());
    let min_ev = min_symmetric_eigenvalue(&d);
    if min_ev < -T::lit(1e-10) * scale.max(T::one()) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min_ev.as_f64() });
    }
    cholesky_psd(&d, T::lit(1e-14) * scale)
}

/// Random stream for one trajectory.
pub fn trajectory_rng(seed: u64, trajectory: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trajectory)
}

const PACKED: usize = 10;
type Packed<T> = [T; PACKED];

fn pack_outer<T: Scalar>(acc: &mut Packed<T>, x: &[T; 4]) {
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            acc[k] = acc[k] + x[i] * x[j];
            k += 1;
        }
    }
}

fn unpack<T: Scalar>(p: &Packed<T>) -> Mat4<T> {
    let mut m = Mat4::zeros();
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            m[(i, j)] = p[k];
            m[(j, i)] = p[k];
            k += 1;
        }
    }
    m
}

fn lower_mul<T: Scalar>(l: &Mat4<T>, xi: &[T; 4]) -> [T; 4] {
    [
        l[(0, 0)] * xi[0],
        l[(1, 0)] * xi[0] + l[(1, 1)] * xi[1],
        l[(2, 0)] * xi[0] + l[(2, 1)] * xi[1] + l[(2, 2)] * xi[2],
        l[(3, 0)] * xi[0] + l[(3, 1)] * xi[1] + l[(3, 2)] * xi[2] + l[(3, 3)] * xi[3],
    ]
}

fn normals<T: Scalar, R: Rng>(rng: &mut R) -> [T; 4]
where
    StandardNormal: Distribution<T>,
{
    [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)]
}

fn diverged<T: Scalar>(x: &[T; 4]) -> bool {
    let bound = T::lit(DIVERGENCE_BOUND);
    !x.iter().all(|v| v.abs() <= bound)
}

/// Splits `samples` post-burn-in samples into `segments` contiguous blocks
/// and returns the segment each sample index falls in.
fn segment_bounds(samples: usize, segments: usize) -> Vec<usize> {
    (1..=segments).map(|s| samples * s / segments).collect()
}

/// One trajectory from the origin; returns the mean outer product over each
/// post-burn-in segment.
fn run_trajectory<T: Scalar>(
    step_matrix: &Mat4<T>,
    noise: &Mat4<T>,
    cfg: &SdeConfig<T>,
    trajectory: u64,
    segments: usize,
) -> Result<Vec<Packed<T>>>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = trajectory_rng(cfg.seed, trajectory);
    let steps = cfg.steps();
    let burn = cfg.burn_steps();
    let bounds = segment_bounds(steps - burn, segments);
    let mut out = vec![[T::zero(); PACKED]; segments];
    let mut x = [T::zero(); 4];
    let mut seg = 0;
    for step in 1..=steps {
        let xi = normals::<T, _>(&mut rng);
        let drift = step_matrix.mul_vec(&x);
        let kick = lower_mul(noise, &xi);
        for i in 0..4 {
            x[i] = drift[i] + kick[i];
        }
        if diverged(&x) {
            return Err(Error::Divergence { trajectory, step });
        }
        if step > burn {
            let idx = step - burn - 1;
            if idx >= bounds[seg] {
                seg += 1;
            }
            pack_outer(&mut out[seg], &x);
        }
    }
    let mut start = 0;
    for (acc, end) in out.iter_mut().zip(&bounds) {
        let count = T::lit((end - start) as f64);
        for v in acc.iter_mut() {
            *v = *v / count;
        }
        start = *end;
    }
    Ok(out)
}

fn pairwise_sum<T: Scalar>(items: &[Packed<T>]) -> Packed<T> {
    match items.len() {
        0 => [T::zero(); PACKED],
        1 => items[0],
        len => {
            let (lo, hi) = items.split_at(len / 2);
            let (a, b) = (pairwise_sum(lo), pairwise_sum(hi));
            let mut out = a;
            for k in 0..PACKED {
                out[k] = a[k] + b[k];
            }
            out
        }
    }
}

fn estimate_from_batches<T: Scalar>(batches: &[Packed<T>], samples_per_batch: usize) -> Result<EnsembleEstimate<T>> {
    let n = batches.len();
    let nt = T::lit(n as f64);
    let mean_packed = pairwise_sum(batches).map(|v| v / nt);
    let squares: Vec<Packed<T>> = batches
        .iter()
        .map(|b| {
            let mut sq = [T::zero(); PACKED];
            for k in 0..PACKED {
                let d = b[k] - mean_packed[k];
                sq[k] = d * d;
            }
            sq
        })
        .collect();
    let stderr_packed =
        if n >= 2 { pairwise_sum(&squares).map(|v| (v / (nt - T::one()) / nt).sqrt()) } else { [T::zero(); PACKED] };
    Ok(EnsembleEstimate {
        sigma_hat: CovarianceMatrix::new(unpack(&mean_packed))?,
        stderr: unpack(&stderr_packed),
        n_effective: n * samples_per_batch,
    })
}

struct Prepared<T> {
    step_matrix: Mat4<T>,
    noise: Mat4<T>,
}

fn prepare<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
    cfg: &SdeConfig<T>,
    dt: T,
) -> Result<Prepared<T>> {
    params.s_factor()?;
    cfg.validate(params)?;
    let a = drift_matrix(params);
    Ok(Prepared {
        step_matrix: Mat4::identity() + a.matrix().scale(dt),
        noise: noise_transform(&diffusion_matrix(params, res), dt)?,
    })
}

fn run_segments<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
    cfg: &SdeConfig<T>,
    segments: usize,
) -> Result<Vec<EnsembleEstimate<T>>>
where
    StandardNormal: Distribution<T>,
{
    let prep = prepare(params, res, cfg, cfg.dt)?;
    let per_traj: Vec<Vec<Packed<T>>> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|i| run_trajectory(&prep.step_matrix, &prep.noise, cfg, i, segments))
        .collect::<Result<_>>()?;
    let samples = cfg.steps() - cfg.burn_steps();
    let bounds = segment_bounds(samples, segments);
    let mut start = 0;
    let mut out = Vec::with_capacity(segments);
    for (s, end) in bounds.iter().enumerate() {
        let batches: Vec<Packed<T>> = per_traj.iter().map(|t| t[s]).collect();
        out.push(estimate_from_batches(&batches, end - start)?);
        start = *end;
    }
    Ok(out)
}

/// Time-and-ensemble averaged stationary covariance.
pub fn run_ensemble<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
    cfg: &SdeConfig<T>,
) -> Result<EnsembleEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    Ok(run_segments(params, res, cfg, 1)?.remove(0))
}

/// Same simulation as [`run_ensemble`], with the post-burn-in window split
/// into two halves estimated separately.
pub fn run_ensemble_halves<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
    cfg: &SdeConfig<T>,
) -> Result<[EnsembleEstimate<T>; 2]>
where
    StandardNormal: Distribution<T>,
{
    let mut v = run_segments(params, res, cfg, 2)?;
    let second = v.pop().expect("two segments");
    let first = v.pop().expect("two segments");
    Ok([first, second])
}

/// Runs step `cfg.dt` and step `cfg.dt / 2` on the same Brownian paths: each
/// coarse increment is the sum of the two fine increments it spans. The
/// difference of the two estimates isolates the discretisation bias.
pub fn run_refinement_pair<T: Scalar>(
    params: &SystemParams<T>,
    res: &ReservoirSpec<T>,
    cfg: &SdeConfig<T>,
) -> Result<(EnsembleEstimate<T>, EnsembleEstimate<T>)>
where
    StandardNormal: Distribution<T>,
{
    let coarse = prepare(params, res, cfg, cfg.dt)?;
    let fine_dt = cfg.dt * T::half();
    let fine = prepare(params, res, cfg, fine_dt)?;
    let steps = cfg.steps();
    let burn = cfg.burn_steps();
    let samples = steps - burn;
    let results: Vec<(Packed<T>, Packed<T>)> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|traj| {
            let mut rng = trajectory_rng(cfg.seed, traj);
            let mut xc = [T::zero(); 4];
            let mut xf = [T::zero(); 4];
            let mut acc_c = [T::zero(); PACKED];
            let mut acc_f = [T::zero(); PACKED];
            for step in 1..=steps {
                let k1 = lower_mul(&fine.noise, &normals::<T, _>(&mut rng));
                let k2 = lower_mul(&fine.noise, &normals::<T, _>(&mut rng));
                let d1 = fine.step_matrix.mul_vec(&xf);
                let mid = [d1[0] + k1[0], d1[1] + k1[1], d1[2] + k1[2], d1[3] + k1[3]];
                let d2 = fine.step_matrix.mul_vec(&mid);
                let dc = coarse.step_matrix.mul_vec(&xc);
                for i in 0..4 {
                    xf[i] = d2[i] + k2[i];
                    xc[i] = dc[i] + k1[i] + k2[i];
                }
                if diverged(&xf) || diverged(&xc) {
                    return Err(Error::Divergence { trajectory: traj, step });
                }
                if step > burn {
                    // fine path sampled at the coarse grid times
                    pack_outer(&mut acc_c, &xc);
                    pack_outer(&mut acc_f, &xf);
                }
            }
            let count = T::lit(samples as f64);
            Ok((acc_c.map(|v| v / count), acc_f.map(|v| v / count)))
        })
        .collect::<Result<_>>()?;
    let (c, f): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok((estimate_from_batches(&c, samples)?, estimate_from_batches(&f, samples)?))
}
