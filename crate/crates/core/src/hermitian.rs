//! Small dense Hermitian matrices.
//!
//! Sizes here are the complex dimension of the domain (rarely above 4), so
//! everything is plain row-major storage with cyclic Jacobi rotations for the
//! spectrum.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative asymmetry tolerated when symmetrizing input.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// `|det| < SINGULAR_TOL * max(1, ||A||_inf^n)` counts as singular.
pub const SINGULAR_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
    asymmetry: f64,
}

impl HermitianMatrix {
    /// Symmetrizes `(A + A*)/2`. The asymmetry residual relative to the
    /// largest entry must not exceed [`HERMITIAN_TOL`].
    pub fn from_entries(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, got: data.len() });
        }
        let scale = data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut out = vec![ZERO; n * n];
        let mut residual: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = data[i * n + j];
                let b = data[j * n + i].conj();
                residual = residual.max((a - b).norm() / 2.0);
                out[i * n + j] = (a + b) * 0.5;
            }
        }
        let asymmetry = residual / scale;
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual: asymmetry });
        }
        Ok(Self { n, data: out, asymmetry })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_entries(n, data)
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![ZERO; n * n];
        for (i, &x) in d.iter().enumerate() {
            data[i * n + i] = Complex64::new(x, 0.0);
        }
        Self { n, data, asymmetry: 0.0 }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n], asymmetry: 0.0 }
    }

    /// `v v*`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let data = (0..n * n).map(|k| v[k / n] * v[k % n].conj()).collect();
        Self { n, data, asymmetry: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn asymmetry_residual(&self) -> f64 {
        self.asymmetry
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * s).collect(), asymmetry: self.asymmetry }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { n: self.n, data, asymmetry: self.asymmetry.max(other.asymmetry) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Plain matrix product (not Hermitian in general).
    pub fn matmul(&self, other: &Self) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Product `A B A` of Hermitian matrices, which is Hermitian.
    pub fn sandwich(&self, middle: &Self) -> Self {
        let n = self.n;
        let am = self.matmul(middle);
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = am[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * self.get(k, j);
                }
            }
        }
        Self::from_entries(n, data).expect("A B A is Hermitian")
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// `<v; w>_A = A_{i jbar} v_i conj(w_j)`.
    pub fn inner(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.get(i, j) * v[i] * w[j].conj();
            }
        }
        acc
    }

    /// `<v; v>_A`, real for Hermitian `A`.
    pub fn quad_form(&self, v: &[Complex64]) -> f64 {
        self.inner(v, v).re
    }

    fn lu_det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    pub fn det(&self) -> Complex64 {
        self.lu_det()
    }

    fn singular_threshold(&self) -> f64 {
        SINGULAR_TOL * self.norm_inf().powi(self.n as i32).max(1.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let det = self.det();
        let threshold = self.singular_threshold();
        if det.norm() < threshold {
            return Err(Error::SingularMatrix { det_abs: det.norm(), threshold });
        }
        // Gauss-Jordan with partial pivoting.
        let mut a = self.data.clone();
        let mut inv: Vec<Complex64> = (0..n * n).map(|k| if k / n == k % n { ONE } else { ZERO }).collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap();
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].inv();
            for j in 0..n {
                a[col * n + j] *= p;
                inv[col * n + j] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * x;
                    inv[r * n + j] -= f * y;
                }
            }
        }
        // Roundoff can leave a small relative asymmetry for badly scaled input.
        let scale = inv.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (inv[i * n + j] + inv[j * n + i].conj()) * 0.5;
            }
        }
        let residual =
            (0..n * n).map(|k| (inv[k] - out[k]).norm()).fold(0.0, f64::max) / scale;
        Ok(Self { n, data: out, asymmetry: residual })
    }

    /// Eigenvalues (ascending) and unitary eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Complex64>) {
        jacobi_eigen(self)
    }

    /// `(lambda_min, lambda_max)` with `lambda_min I <= A <= lambda_max I`.
    pub fn eigen_bounds(&self) -> (f64, f64) {
        let (vals, _) = self.eigen();
        (vals[0], vals[self.n - 1])
    }

    /// Hermitian positive semidefinite square root.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let n = self.n;
        let (vals, vecs) = self.eigen();
        let tol = 1e-12 * self.max_abs().max(1.0);
        if vals[0] < -tol {
            return Err(Error::NotPsd { min_eigenvalue: vals[0] });
        }
        let roots: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| vecs[i * n + k] * roots[k] * vecs[j * n + k].conj()).sum();
            }
        }
        Self::from_entries(n, data)
    }

    /// Checks `0 <= A <= Tr(A) I` on the coordinate vectors, the pairwise
    /// sums `e_i + e_j`, `e_i + i e_j`, and the eigenvectors of `A`.
    pub fn trace_bound_check(&self) -> bool {
        let n = self.n;
        let mut probes: Vec<Vec<Complex64>> = Vec::new();
        for i in 0..n {
            let mut e = vec![ZERO; n];
            e[i] = ONE;
            probes.push(e);
            for j in i + 1..n {
                let mut a = vec![ZERO; n];
                a[i] = ONE;
                a[j] = ONE;
                probes.push(a.clone());
                a[j] = Complex64::new(0.0, 1.0);
                probes.push(a);
            }
        }
        let (_, vecs) = self.eigen();
        for k in 0..n {
            probes.push((0..n).map(|i| vecs[i * n + k]).collect());
        }
        self.trace_bound_holds_on(&probes)
    }

    pub fn trace_bound_holds_on(&self, probes: &[Vec<Complex64>]) -> bool {
        let tr = self.trace();
        let tol = 1e-12 * self.max_abs().max(1.0);
        probes.iter().all(|v| {
            let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let q = self.quad_form(v);
            q >= -tol * norm2 && q <= (tr + tol) * norm2
        })
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.10e}{:+.10e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn jacobi_eigen(m: &HermitianMatrix) -> (Vec<f64>, Vec<Complex64>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v: Vec<Complex64> = (0..n * n).map(|k| if k / n == k % n { ONE } else { ZERO }).collect();
    let scale = m.max_abs();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U acts on columns p, q: U_pp = c, U_pq = s e^{i theta},
                // U_qp = -s e^{-i theta}, U_qq = c.
                let upq = phase * s;
                let uqp = -phase.conj() * s;
                // A <- A U
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * uqp;
                    a[k * n + q] = akp * upq + akq * c;
                }
                // A <- U* A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * uqp.conj();
                    a[q * n + k] = apk * upq.conj() + aqk * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c + vkq * uqp;
                    v[k * n + q] = vkp * upq + vkq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let vals = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vecs = vec![ZERO; n * n];
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + new] = v[i * n + old];
        }
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(n: usize, rows: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_entries(n, rows.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let b: Vec<Complex64> = (0..n * n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        HermitianMatrix::from_fn(n, |i, j| (0..n).map(|k| b[i * n + k] * b[j * n + k].conj()).sum()).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn determinants() {
        assert!((HermitianMatrix::identity(2).det() - ONE).norm() < 1e-15);
        assert!((HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).det() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((real(2, &[2.0, 1.0, 1.0, 2.0]).det() - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inverses() {
        let inv = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).inverse().unwrap();
        assert!(close(inv.entries(), HermitianMatrix::from_real_diagonal(&[1.0, 0.5]).entries(), 1e-15));
        let i2 = HermitianMatrix::identity(2).inverse().unwrap();
        assert_eq!(i2, HermitianMatrix::identity(2));
    }

    #[test]
    fn singular_is_rejected() {
        let m = real(2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        assert!(matches!(
            HermitianMatrix::from_entries(2, vec![ONE, c(1.0, 0.0), c(0.0, 0.0), ONE]),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn bounds_of_small_examples() {
        let (lo, hi) = HermitianMatrix::identity(2).eigen_bounds();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let (lo, hi) = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).eigen_bounds();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 2.0).abs() < 1e-15);
        let (lo, hi) = real(2, &[2.0, 1.0, 1.0, 2.0]).eigen_bounds();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 3.0).abs() < 1e-14);
    }

    #[test]
    fn square_roots_of_small_examples() {
        let r = HermitianMatrix::identity(2).sqrt_psd().unwrap();
        assert!(close(r.entries(), HermitianMatrix::identity(2).entries(), 1e-15));
        let r = HermitianMatrix::from_real_diagonal(&[4.0, 9.0]).sqrt_psd().unwrap();
        assert!(close(r.entries(), HermitianMatrix::from_real_diagonal(&[2.0, 3.0]).entries(), 1e-14));
        let r = real(2, &[2.0, 1.0, 1.0, 2.0]).sqrt_psd().unwrap();
        let s3 = 3f64.sqrt();
        let expected = real(2, &[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0, (s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0]);
        assert!(close(r.entries(), expected.entries(), 1e-14));
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        assert!(matches!(
            HermitianMatrix::from_real_diagonal(&[1.0, -1.0]).sqrt_psd(),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn trace_bound_examples() {
        assert!(HermitianMatrix::identity(2).trace_bound_check());
        let v = [c(1.0, 0.5), c(-0.3, 2.0)];
        let rank_one = HermitianMatrix::outer(&v);
        assert!(rank_one.trace_bound_check());
        // Equality at conj(v): A_{i jbar} u_i conj(u_j) = |sum v_i u_i|^2.
        let u: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((rank_one.quad_form(&u) - rank_one.trace() * norm2).abs() < 1e-12);
    }

    #[test]
    fn random_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let a = random_psd(&mut rng, n);
            let r = a.sqrt_psd().unwrap();
            assert!(close(&r.matmul(&r), a.entries(), 1e-10));
            assert!(a.trace_bound_check());
        }
    }

    #[test]
    fn eigen_bounds_bracket_rayleigh_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let n = rng.gen_range(1..=5);
            let a = random_psd(&mut rng, n).sub(&HermitianMatrix::identity(n).scale(0.7));
            let (lo, hi) = a.eigen_bounds();
            for _ in 0..1000 {
                let v = random_vec(&mut rng, n);
                let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                let q = a.quad_form(&v) / norm2;
                assert!(q >= lo - 1e-12 && q <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let n = rng.gen_range(2..=6);
            let a = random_psd(&mut rng, n);
            let (vals, vecs) = a.eigen();
            for k in 0..n {
                let col: Vec<Complex64> = (0..n).map(|i| vecs[i * n + k]).collect();
                let av = a.matvec(&col);
                for i in 0..n {
                    assert!((av[i] - col[i] * vals[k]).norm() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn inverse_twice_is_identity_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let a = random_psd(&mut rng, n).add(&HermitianMatrix::identity(n).scale(0.1));
            let inv = a.inverse().unwrap();
            let prod = a.matmul(&inv);
            assert!(close(&prod, HermitianMatrix::identity(n).entries(), 1e-12 * a.norm_inf() * inv.norm_inf()));
            let back = inv.inverse().unwrap();
            assert!(close(back.entries(), a.entries(), 1e-11 * a.max_abs()));
            assert!(a.det().im.abs() < 1e-12 * a.det().norm().max(1.0));
        }
    }
}
