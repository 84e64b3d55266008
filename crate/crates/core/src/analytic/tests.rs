use super::slices::*;
use super::*;
use crate::dynamics::CovarianceMatrix;
use crate::error::Error;
use crate::model::CorrelationMode;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn p(g: f64, l: f64, phi: f64) -> SystemParams<f64> {
    SystemParams::normalized(g, l, phi).unwrap()
}

fn res(n: f64, m: f64) -> ReservoirSpec<f64> {
    ReservoirSpec::new(n, m).unwrap()
}

fn qmax(n: f64) -> f64 {
    (n * (n + 1.0)).sqrt()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Independent stationary covariance: drift and diffusion written out from
/// the quadrature equations of motion and the Kronecker-vectorised
/// Lyapunov equation solved by LU.
fn lyapunov_oracle(g: f64, l: f64, phi: f64, n: f64, m: f64) -> [[f64; 4]; 4] {
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(4, 4, &[
        -1.0, 0.0, 0.0, -(g - l),
        0.0, -1.0, -(g + l), 0.0,
        0.0, -(g - l), -1.0, 0.0,
        -(g + l), 0.0, 0.0, -1.0,
    ]);
    let h = 0.5 + n;
    let (c2, s2) = ((2.0 * phi).cos(), (2.0 * phi).sin());
    #[rustfmt::skip]
    let d = DMatrix::from_row_slice(4, 4, &[
        2.0 * (h + m), 0.0, 0.0, 0.0,
        0.0, 2.0 * (h - m), 0.0, 0.0,
        0.0, 0.0, 2.0 * (h + m * c2), 2.0 * m * s2,
        0.0, 0.0, 2.0 * m * s2, 2.0 * (h - m * c2),
    ]);
    let eye = DMatrix::<f64>::identity(4, 4);
    let k = eye.kronecker(&a) + a.kronecker(&eye);
    let rhs = -DVector::from_column_slice(d.as_slice());
    let x = k.lu().solve(&rhs).expect("stable drift");
    let mut out = [[0.0; 4]; 4];
    for j in 0..4 {
        for i in 0..4 {
            out[i][j] = x[j * 4 + i];
        }
    }
    out
}

#[test]
fn vacuum_variances() {
    let v = steady_variances(&p(0.0, 0.0, 0.0), &ReservoirSpec::vacuum()).unwrap();
    assert_eq!(v, Variances { xa: 0.5, ya: 0.5, xb: 0.5, yb: 0.5 });
}

#[test]
fn thermal_exponential_variances() {
    let (g, l, n) = (0.7, 0.3, 1.5);
    let v = steady_variances(&p(g, l, 0.4), &ReservoirSpec::thermal(n).unwrap()).unwrap();
    let psi = (g * g - l * l).sqrt().atanh();
    let c = psi.cosh().powi(2);
    let (x, y) = ((0.5 + n) * (1.0 + g * (g - l) * c), (0.5 + n) * (1.0 + g * (g + l) * c));
    assert!(close(v.xa, x, 1e-12) && close(v.xb, x, 1e-12));
    assert!(close(v.ya, y, 1e-12) && close(v.yb, y, 1e-12));

    let ep = steady_variances(&p(0.6, 0.6, 0.0), &ReservoirSpec::thermal(n).unwrap()).unwrap();
    assert!(close(ep.xa, 0.5 + n, 1e-14));
}

#[test]
fn strong_beam_splitter_halves_the_vacuum_variance() {
    let l = 20.0;
    let min = (1..4000)
        .map(|i| {
            let g = l * i as f64 / 4000.0;
            steady_variances(&p(g, l, 0.0), &ReservoirSpec::vacuum()).unwrap().xa
        })
        .fold(f64::INFINITY, f64::min);
    assert!((0.24..=0.27).contains(&min), "{min}");
}

#[test]
fn populations_examples() {
    let (a, b) = steady_populations(&p(0.0, 0.7, 1.0), &res(0.8, 0.5)).unwrap();
    assert!(close(a, 0.8, 1e-15) && close(b, 0.8, 1e-15));

    // exceptional point, φ = π/2 with quantum-max correlations
    let n = 0.1;
    let params = p(0.5, 0.5, FRAC_PI_2);
    let (a, _) = steady_populations(&params, &res(n, 0.11f64.sqrt())).unwrap();
    assert!((a - (0.1 + 0.25 * (0.6 - 0.11f64.sqrt()))).abs() < 1e-14);
    assert!((a - 0.16709).abs() < 1e-5);
    let oracle = lyapunov_oracle(0.5, 0.5, FRAC_PI_2, n, 0.11f64.sqrt());
    assert!((0.5 * (oracle[0][0] + oracle[1][1] - 1.0) - a).abs() < 1e-12);
}

#[test]
fn ep_population_strong_squeezing_limit() {
    let n = 200.0;
    let r = res(n, qmax(n));
    for phi in [0.0, 0.7, FRAC_PI_2] {
        let params = p(0.3, 0.3, phi);
        let (a, _) = steady_populations(&params, &r).unwrap();
        let approx = ep_population_a_strong_squeezing(&params, n);
        // the approximation drops terms of order g²/n relative to (½+n)g²
        assert!((a - approx).abs() < 0.01 * 0.09 + 1e-9, "{a} vs {approx}");
    }
    let (a, _) = steady_populations(&p(0.3, 0.3, FRAC_PI_2), &r).unwrap();
    assert!(a - n < 1e-3);
}

#[test]
fn same_mode_xy_examples() {
    for phi in [0.0, FRAC_PI_2] {
        for (g, l) in [(0.5, 0.2), (0.3, 0.9)] {
            let (a, b) = same_mode_xy(&p(g, l, phi), &res(1.0, 1.2)).unwrap();
            assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        }
    }
    let (m, phi) = (1.1, 0.6);
    let (a, b) = same_mode_xy(&p(0.0, 0.0, phi), &res(1.0, m)).unwrap();
    assert_eq!(a, 0.0);
    assert!(close(b, m * (2.0 * phi).sin(), 1e-15));
    for (g, l) in [(0.5, 0.2), (0.3, 0.9), (0.4, 0.4)] {
        assert_eq!(same_mode_xy(&p(g, l, 1.1), &ReservoirSpec::thermal(2.0).unwrap()).unwrap(), (0.0, 0.0));
    }
}

#[test]
fn same_mode_two_photon_examples() {
    let (g, l, n) = (0.8, 0.3, 0.4);
    let (aa, bb) = same_mode_two_photon(&p(g, l, 0.9), &ReservoirSpec::thermal(n).unwrap()).unwrap();
    let expect = -(0.5 + n) * g * l / (1.0 + l * l - g * g);
    assert_eq!(aa, bb);
    assert!(close(aa.re, expect, 1e-14) && aa.im == 0.0 && aa.re <= 0.0);

    let (m, phi) = (0.9, 0.35);
    let (aa, bb) = same_mode_two_photon(&p(0.0, 0.0, phi), &res(1.0, m)).unwrap();
    assert!((aa - Complex::new(m, 0.0)).norm() < 1e-15);
    assert!((bb - Complex::from_polar(m, 2.0 * phi)).norm() < 1e-15);

    let n = 50.0;
    let r = res(n, qmax(n));
    let params = p(0.4, 0.4, FRAC_PI_2);
    let (aa, bb) = same_mode_two_photon(&params, &r).unwrap();
    let (ep_aa, ep_bb) = ep_two_photon(&params, &r);
    assert!((aa - ep_aa).norm() < 1e-10 * aa.norm());
    assert!((bb - ep_bb).norm() < 1e-10 * bb.norm());
    let m = r.m();
    assert!((aa.re - (m - (0.5 + n - m) * 0.16)).abs() < 1e-10);
    assert!((aa.re - m).abs() / m < 1e-3);
}

#[test]
fn cross_quadrature_examples() {
    let (g, l, n) = (0.6, 0.4, 1.3);
    let s = 1.0 / (1.0 + l * l - g * g);
    let c = cross_quadrature_correlators(&p(g, l, 0.8), &ReservoirSpec::thermal(n).unwrap()).unwrap();
    assert_eq!(c.xx_plus_yy, 0.0);
    assert!(close(c.xy_plus_yx, -2.0 * (0.5 + n) * g * s, 1e-14));

    let m = 1.0;
    for (g, l) in [(0.6, 0.4), (0.2, 1.5)] {
        let s = 1.0 / (1.0 + l * l - g * g);
        let c = cross_quadrature_correlators(&p(g, l, FRAC_PI_2), &res(n, m)).unwrap();
        assert!(close(c.xy_minus_yx, -2.0 * m * g * s, 1e-14));
        assert!(close(c.xy_plus_yx, -2.0 * (0.5 + n) * g * s, 1e-14));
    }

    let (l, phi) = (0.7, 0.5);
    let s = 1.0 / (1.0 + l * l);
    let c = cross_quadrature_correlators(&p(0.0, l, phi), &res(n, m)).unwrap();
    assert!(close(c.xx_minus_yy, m * l * (2.0 * phi).sin() * s, 1e-14));
    assert_eq!((c.xx_plus_yy, c.xy_plus_yx, c.xy_minus_yx), (0.0, -2.0 * m * l * phi.cos().powi(2) * s, 0.0));
    let o = lyapunov_oracle(0.0, l, phi, n, m);
    assert!((o[0][2] - o[1][3] - c.xx_minus_yy).abs() < 1e-12);
}

#[test]
fn cross_mode_examples() {
    for (g, l) in [(0.7, 0.2), (0.2, 0.7), (0.5, 0.5)] {
        let (adag_b, _) = cross_mode_correlators(&p(g, l, 1.2), &ReservoirSpec::thermal(2.0).unwrap()).unwrap();
        assert_eq!(adag_b, Complex::new(0.0, 0.0));
    }
    let (g, l, n, m) = (0.7, 0.2, 0.5, 0.6);
    let s = 1.0 / (1.0 + l * l - g * g);
    let (adag_b, ab) = cross_mode_correlators(&p(g, l, 0.0), &res(n, m)).unwrap();
    assert_eq!(adag_b.norm(), 0.0);
    assert!((ab - Complex::new(0.0, -((0.5 + n) * g + m * l) * s)).norm() < 1e-14);

    let (_, ab) = cross_mode_correlators(&p(g, 0.0, 0.3), &ReservoirSpec::thermal(n).unwrap()).unwrap();
    assert!((ab - Complex::new(0.0, -(0.5 + n) * g / (1.0 - g * g))).norm() < 1e-14);
}

/// The printed oscillatory cross correlators coincide with the quadrature
/// assembly only when φ = 0; elsewhere the assembly (which matches the
/// Lyapunov solution) is used.
#[test]
fn printed_oscillatory_cross_correlators_only_hold_in_phase() {
    let (g, l, n, m) = (0.3, 0.9, 0.5, qmax(0.5));
    let s = 1.0 / (1.0 + l * l - g * g);
    let printed = |phi: f64| {
        let adag_b = Complex::new(-0.5 * g * m * (2.0 * phi).sin() * s, 0.0);
        let inner =
            Complex::new((0.5 + n + m * phi.sin().powi(2)) * g, 0.0) + Complex::from_polar(m * l * phi.cos(), phi);
        (adag_b, -Complex::<f64>::i() * inner * s)
    };
    let (adag_b, ab) = cross_mode_correlators(&p(g, l, 0.0), &res(n, m)).unwrap();
    let (pa, pb) = printed(0.0);
    assert!((adag_b - pa).norm() < 1e-14 && (ab - pb).norm() < 1e-14);

    let (adag_b, _) = cross_mode_correlators(&p(g, l, FRAC_PI_4), &res(n, m)).unwrap();
    let (pa, _) = printed(FRAC_PI_4);
    assert!((adag_b - pa).norm() > 0.01);
    let o = lyapunov_oracle(g, l, FRAC_PI_4, n, m);
    let lyap = CrossQuadratures::from_moments(o[0][2], o[1][3], o[0][3], o[1][2]).assemble().0;
    assert!((adag_b - lyap).norm() < 1e-12);
}

#[test]
fn degrees_examples() {
    for g in [0.3, 0.5, 0.8, 0.95] {
        for l in [0.0, 0.1, 0.25] {
            if l >= g {
                continue;
            }
            let d = degrees(&p(g, l, 0.0), &ReservoirSpec::thermal(0.7).unwrap()).unwrap();
            assert!(d.eta_aa < 0.0 && close(d.eta_aa, d.eta_bb, 1e-12));
        }
    }
    for (g, l) in [(0.1, 0.5), (0.3, 1.0), (2.0, 4.0), (0.01, 3.0)] {
        let d = degrees(&p(g, l, 0.0), &ReservoirSpec::vacuum()).unwrap();
        assert!(d.eta_aa > 0.0 && close(d.eta_aa, d.eta_bb, 1e-12), "{g} {l}: {d:?}");
    }
    let d = degrees(&p(0.99, 0.0, FRAC_PI_2), &res(2.0, qmax(2.0))).unwrap();
    assert!(d.gamma_ab > 0.9 && d.eta_ab < 1.0, "{d:?}");
}

#[test]
fn degrees_need_populated_modes() {
    assert!(matches!(degrees(&p(0.0, 0.5, 0.0), &ReservoirSpec::vacuum()), Err(Error::DegeneratePopulation { .. })));
}

#[test]
fn instability_is_reported_by_every_entry_point() {
    let params = p(1.2, 0.5, 0.0);
    let r = ReservoirSpec::vacuum();
    assert!(matches!(steady_variances(&params, &r), Err(Error::Unstable { .. })));
    assert!(steady_populations(&params, &r).is_err());
    assert!(same_mode_two_photon(&params, &r).is_err());
    assert!(cross_mode_correlators(&params, &r).is_err());
    assert!(steady_state_report(&params, &r).is_err());
}

#[test]
fn squeezing_bounds_on_grid() {
    for n in [0.0, 0.5, 2.0] {
        for g in [0.1, 0.3, 0.5, 0.8, 0.99] {
            for l in [0.0, 0.2, 0.4] {
                if l > g {
                    continue;
                }
                let v = steady_variances(&p(g, l, 0.0), &ReservoirSpec::thermal(n).unwrap()).unwrap();
                assert!(v.xa >= 0.5 + n - 1e-12);
            }
        }
    }
    let mut min = f64::INFINITY;
    for l in [0.5, 1.0, 3.0, 5.0, 10.0, 20.0, 50.0] {
        for i in 0..200 {
            let g = l * i as f64 / 200.0;
            min = min.min(steady_variances(&p(g, l, 0.0), &ReservoirSpec::vacuum()).unwrap().xa);
        }
    }
    assert!((0.25..0.5).contains(&min));
}

#[test]
fn negative_eta_bb_for_weak_correlation_in_quadrature_phase() {
    // m well below n: the reservoir itself is not squeezed
    let d = degrees(&p(0.1, 5.0, FRAC_PI_2), &res(1.0, 0.5)).unwrap();
    assert!(d.eta_bb < 0.0, "{d:?}");
}

#[test]
fn fig5_minimum_decreases_with_lambda() {
    let min_var = |l: f64| {
        (1..2000)
            .map(|i| steady_variances(&p(l * i as f64 / 2000.0, l, 0.0), &ReservoirSpec::vacuum()).unwrap().xa)
            .fold(f64::INFINITY, f64::min)
    };
    let mins: Vec<f64> = [5.0, 10.0, 15.0, 20.0].into_iter().map(min_var).collect();
    assert!(mins.windows(2).all(|w| w[1] < w[0]), "{mins:?}");
}

#[test]
fn slice_formulas_agree_with_general_expressions() {
    for (g, l) in [(0.5, 0.2), (0.8, 0.0), (0.3, 0.9), (0.0, 2.0), (0.6, 0.6), (2.0, 3.0)] {
        for n in [0.0, 0.5, 2.0] {
            let t = ReservoirSpec::thermal(n).unwrap();
            let params = p(g, l, 0.0);
            let v = steady_variances(&params, &t).unwrap();
            let (x, y) = thermal_variances(&params, n).unwrap();
            assert!(close(v.xa, x, 1e-10) && close(v.ya, y, 1e-10));
            let (aa, _) = same_mode_two_photon(&params, &t).unwrap();
            assert!(close(aa.re, thermal_two_photon(&params, n).unwrap(), 1e-10));
            if n > 0.0 || g > 0.0 {
                let d = degrees(&params, &t).unwrap();
                assert!(close(d.eta_aa, thermal_squeezing_degree(&params, n).unwrap(), 1e-10));
            }

            for m in [0.0, 0.5 * n, n, qmax(n)] {
                if n == 0.0 && g == 0.0 {
                    continue;
                }
                let r = res(n, m);
                let quad = p(g, l, FRAC_PI_2);
                let d = degrees(&quad, &r).unwrap();
                assert!(close(d.gamma_ab, coherence_degree_quadrature_phase(&quad, &r).unwrap(), 1e-10));
                assert!(close(d.eta_ab, cross_two_photon_degree_quadrature_phase(&quad, &r).unwrap(), 1e-10));
                let inphase = p(g, l, 0.0);
                let d0 = degrees(&inphase, &r).unwrap();
                assert!(close(d0.eta_ab, cross_two_photon_degree_in_phase(&inphase, &r).unwrap(), 1e-10));
                if l > g {
                    assert!(close(d0.eta_aa, oscillatory_squeezing_degree_in_phase(&inphase, &r).unwrap(), 1e-10));
                    assert!(close(d0.eta_bb, d0.eta_aa, 1e-10));
                    let (ea, eb) = oscillatory_squeezing_degrees_quadrature_phase(&quad, &r).unwrap();
                    assert!(close(d.eta_aa, ea, 1e-10), "{g} {l} {n} {m}: {} vs {ea}", d.eta_aa);
                    assert!(close(d.eta_bb, eb, 1e-10), "{g} {l} {n} {m}: {} vs {eb}", d.eta_bb);
                } else {
                    assert!(oscillatory_squeezing_degree_in_phase(&inphase, &r).is_err());
                }
            }
        }
    }
}

#[test]
fn generic_over_f32() {
    let params = SystemParams::<f32>::normalized(0.5, 0.2, 0.3).unwrap();
    let r = ReservoirSpec::<f32>::with_mode(1.0, CorrelationMode::QuantumMax).unwrap();
    let single = steady_state_report(&params, &r).unwrap();
    let double = steady_state_report(&p(0.5, 0.2, 0.3), &res(1.0, 2f64.sqrt())).unwrap();
    for ((_, a), (_, b)) in single.fields().into_iter().zip(double.fields()) {
        assert!((a as f64 - b).abs() < 1e-5 * b.abs().max(1.0));
    }
}

fn stable_point() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.0f64..4.0, 0.0f64..4.0, 0.0f64..2.0 * PI, 0.0f64..3.0, 0.0f64..=1.0)
        .prop_filter("stable", |(g, l, ..)| 1.0 + l * l - g * g > 0.05)
        .prop_map(|(g, l, phi, n, frac)| (g, l, phi, n, frac * qmax(n)))
}

proptest! {
    #[test]
    fn matches_independent_lyapunov_oracle((g, l, phi, n, m) in stable_point()) {
        let sigma = covariance(&p(g, l, phi), &res(n, m)).unwrap();
        let o = lyapunov_oracle(g, l, phi, n, m);
        let scale = sigma.max_abs();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((sigma[(i, j)] - o[i][j]).abs() <= 1e-9 * scale, "({i},{j}) {} vs {}", sigma[(i, j)], o[i][j]);
            }
        }
    }

    #[test]
    fn reconstruction_identities((g, l, phi, n, m) in stable_point()) {
        let params = p(g, l, phi);
        let r = res(n, m);
        let mo = moments(&params, &r).unwrap();
        let tol = 1e-12 * (1.0 + mo.pop_a.max(mo.pop_b));
        let aa = Complex::new(0.5 * (mo.var_xa - mo.var_ya), mo.xy_a);
        let bb = Complex::new(0.5 * (mo.var_xb - mo.var_yb), mo.xy_b);
        prop_assert!((mo.corr_aa - aa).norm() <= tol * 4.0);
        prop_assert!((mo.corr_bb - bb).norm() <= tol * 4.0);
        prop_assert!((mo.pop_a - 0.5 * (mo.var_xa + mo.var_ya - 1.0)).abs() <= tol);
        prop_assert!((mo.pop_b - 0.5 * (mo.var_xb + mo.var_yb - 1.0)).abs() <= tol);
        let (adag_b, ab) = cross_quadrature_correlators(&params, &r).unwrap().assemble();
        prop_assert!((mo.corr_adag_b - adag_b).norm() <= tol);
        prop_assert!((mo.corr_ab - ab).norm() <= tol);
    }

    #[test]
    fn physical_and_bounded((g, l, phi, n, m) in stable_point()) {
        let params = p(g, l, phi);
        let r = res(n, m);
        let sigma = CovarianceMatrix::new(covariance(&params, &r).unwrap()).unwrap();
        let scale = sigma.matrix().max_abs().max(1.0);
        prop_assert!(sigma.uncertainty_min_eigenvalue() >= -1e-10 * scale);
        let mo = moments(&params, &r).unwrap();
        prop_assert!(mo.pop_a >= -1e-12 && mo.pop_b >= -1e-12);
        prop_assert!(mo.var_xa > 0.0 && mo.var_ya > 0.0 && mo.var_xb > 0.0 && mo.var_yb > 0.0);
        if let Ok(d) = mo.degrees() {
            prop_assert!(d.gamma_ab >= 0.0 && d.gamma_ab <= 1.0 + 1e-9);
            prop_assert!(d.eta_ab >= 0.0);
        }
    }

    #[test]
    fn degrees_are_pi_periodic_in_phase((g, l, phi, n, m) in stable_point()) {
        prop_assume!(n > 0.01);
        let r = res(n, m);
        let a = degrees(&p(g, l, phi), &r).unwrap();
        let b = degrees(&p(g, l, phi + PI), &r).unwrap();
        for ((_, x), (_, y)) in a.fields().into_iter().zip(b.fields()) {
            prop_assert!(close(x, y, 1e-9));
        }
    }

    #[test]
    fn branches_agree_near_exceptional_point(l in 0.01f64..3.0, phi in 0.0f64..2.0 * PI, n in 0.0f64..3.0, frac in 0.0f64..=1.0, side in prop::bool::ANY) {
        let r = res(n, frac * qmax(n));
        let g = if side { l + 1e-6 } else { l - 1e-6 };
        let q = Inputs::new(&p(g, l, phi), &r).unwrap();
        let (ve, vo) = (exponential_variances(&q), oscillatory_variances(&q));
        let (te, to) = (exponential_two_photon(&q), oscillatory_two_photon(&q));
        let pairs = [
            (ve.xa, vo.xa), (ve.ya, vo.ya), (ve.xb, vo.xb), (ve.yb, vo.yb),
            (te.0.re, to.0.re), (te.0.im, to.0.im), (te.1.re, to.1.re), (te.1.im, to.1.im),
        ];
        for (k, (x, y)) in pairs.into_iter().enumerate() {
            let scale = x.abs().max(y.abs()).max(1e-3);
            prop_assert!((x - y).abs() < 1e-4 * scale, "#{k}: {x} vs {y}");
        }
    }
}
