//! Small dense linear algebra: fixed 4×4 matrices plus the handful of
//! routines the dynamics need (dense solve, symmetric eigenvalues,
//! characteristic polynomial, PSD factorisation).

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Scalar> Mat4<T> {
    pub fn zeros() -> Self {
        Mat4([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diagonal([T::one(); 4])
    }

    pub fn diagonal(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn mul_vec(&self, x: &[T; 4]) -> [T; 4] {
        let mut y = [T::zero(); 4];
        for (i, row) in self.0.iter().enumerate() {
            y[i] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
        }
        y
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    /// Induced ∞-norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> T {
        self.0.iter().map(|r| r.iter().fold(T::zero(), |acc, v| acc + v.abs())).fold(T::zero(), T::max)
    }

    pub fn norm_fro(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(|i, j| (self.0[i][j] + self.0[j][i]) * T::half())
    }

    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        worst
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.0[i][j].as_f64();
            }
        }
        out
    }

    pub fn to_rows_vec(&self) -> Vec<Vec<T>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }
}

impl<T> Index<(usize, usize)> for Mat4<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat4<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Scalar> Add for Mat4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Scalar> Sub for Mat4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Scalar> Neg for Mat4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Mat4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..4).fold(T::zero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

/// Solves the dense system `m x = b` by Gaussian elimination with partial
/// pivoting. `m` is row-major `n × n`.
pub fn solve_dense<T: Scalar>(mut m: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    let scale = m.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tiny = scale * T::epsilon() * T::lit(n as f64);
    for col in 0..n {
        let (piv, piv_abs) =
            (col..n)
                .map(|r| (r, m[r][col].abs()))
                .fold((col, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= tiny {
            return Err(Error::Singular { pivot: piv_abs.as_f64() });
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] = m[r][c] - f * v;
            }
            let bc = b[col];
            b[r] = b[r] - f * bc;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let s = ((r + 1)..n).fold(b[r], |acc, c| acc - m[r][c] * x[c]);
        x[r] = s / m[r][r];
    }
    Ok(x)
}

/// Eigenvalues of a real symmetric matrix (cyclic Jacobi), ascending.
pub fn symmetric_eigenvalues<T: Scalar>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    let mut a: Vec<Vec<T>> = a.to_vec();
    let total = a.iter().flatten().fold(T::zero(), |acc, v| acc + *v * *v);
    let target = total * T::epsilon() * T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a[i][j] * a[i][j];
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::two() * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

pub fn min_symmetric_eigenvalue<T: Scalar>(m: &Mat4<T>) -> T {
    symmetric_eigenvalues(&m.symmetrized().to_rows_vec())[0]
}

/// Coefficients `[c1, c2, c3, c4]` of `det(pI − A) = p⁴ + c1 p³ + c2 p² + c3 p + c4`
/// (Faddeev–LeVerrier).
pub fn characteristic_polynomial<T: Scalar>(a: &Mat4<T>) -> [T; 4] {
    let mut coeffs = [T::zero(); 4];
    let mut mk = Mat4::identity();
    let mut prev = T::one();
    for k in 1..=4 {
        if k > 1 {
            mk = *a * mk + Mat4::identity().scale(prev);
        }
        let c = -(*a * mk).trace() / T::lit(k as f64);
        coeffs[k - 1] = c;
        prev = c;
    }
    coeffs
}

/// Routh–Hurwitz test: every eigenvalue of `a` has strictly negative real part.
pub fn is_hurwitz<T: Scalar>(a: &Mat4<T>) -> bool {
    let [c1, c2, c3, c4] = characteristic_polynomial(a);
    c1 > T::zero() && c3 > T::zero() && c4 > T::zero() && c1 * c2 * c3 > c3 * c3 + c1 * c1 * c4
}

/// Lower-triangular `L` with `L Lᵀ = m` for symmetric positive semidefinite
/// `m`. Zero pivots (within `tol`) produce zero columns.
pub fn cholesky_psd<T: Scalar>(m: &Mat4<T>, tol: T) -> Result<Mat4<T>> {
    let mut l = Mat4::zeros();
    for j in 0..4 {
        let d = (0..j).fold(m[(j, j)], |acc, k| acc - l[(j, k)] * l[(j, k)]);
        if d < -tol {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: d.as_f64() });
        }
        if d <= tol {
            continue;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..4 {
            let s = (0..j).fold(m[(i, j)], |acc, k| acc - l[(i, k)] * l[(j, k)]);
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solve_recovers_known_solution() {
        let m = vec![vec![4.0, -2.0, 1.0], vec![-2.0, 4.0, -2.0], vec![1.0, -2.0, 4.0]];
        let x_true = [1.0, -2.0, 3.0];
        let b: Vec<f64> = m.iter().map(|r| r.iter().zip(x_true).map(|(a, x)| a * x).sum()).collect();
        let x = solve_dense(m, b).unwrap();
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_solve_flags_singular() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(solve_dense(m, vec![1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn jacobi_eigenvalues_of_tridiagonal() {
        // eigenvalues of tridiag(-1, 2, -1), n = 4: 2 - 2 cos(kπ/5)
        let n: usize = 4;
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2.0,
                        1 => -1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        let ev = symmetric_eigenvalues(&a);
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 5.0).cos();
            assert!((v - exact).abs() < 1e-13, "{v} vs {exact}");
        }
    }

    #[test]
    fn char_poly_of_diagonal() {
        let a = Mat4::diagonal([1.0, 2.0, 3.0, 4.0]);
        // (p-1)(p-2)(p-3)(p-4) = p^4 - 10p^3 + 35p^2 - 50p + 24
        let c = characteristic_polynomial(&a);
        assert_eq!(c, [-10.0, 35.0, -50.0, 24.0]);
        assert!(!is_hurwitz(&a));
        assert!(is_hurwitz(&(-a)));
    }

    #[test]
    fn hurwitz_rejects_marginal() {
        let mut a = Mat4::diagonal([-1.0, -1.0, -1.0, 0.0]);
        assert!(!is_hurwitz(&a));
        a[(3, 3)] = -1e-6;
        assert!(is_hurwitz(&a));
    }

    #[test]
    fn cholesky_handles_singular_psd() {
        let m = Mat4([[4.0, 2.0, 0.0, 0.0], [2.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 9.0]]);
        let l = cholesky_psd(&m, 1e-12).unwrap();
        let back = l * l.transpose();
        assert!((back - m).max_abs() < 1e-14);
        let neg = Mat4::diagonal([1.0, -1.0, 1.0, 1.0]);
        assert!(cholesky_psd(&neg, 1e-12).is_err());
    }
}
