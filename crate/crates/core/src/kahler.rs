//! Metrics, Ricci forms, curvature tensors and the bisectional deviation of
//! Kähler potentials.
//!
//! Index conventions: the metric is `g_{i jbar} = d_i d_jbar g`, stored as a
//! [`HermitianMatrix`] with `(i, j)` entry `g_{i jbar}`. `g_upper` stores the
//! matrix inverse `H = G^{-1}`; the contravariant tensor is read off as
//! `g^{i jbar} = H[j][i]`, so that `g^{i jbar} g_{k jbar} = delta_{ik}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::jets::{jet_determinant, JetSource, Wirtinger, WirtingerJet};

/// Relative eigenvalue margin below which a metric counts as not positive definite.
pub const PD_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn require_order(j: &WirtingerJet, required: usize) -> Result<()> {
    if j.order() < required {
        return Err(Error::InsufficientOrder { required, available: j.order() });
    }
    Ok(())
}

/// Complex Hessian `(f_{i jbar})` of a jet.
pub fn complex_hessian(j: &WirtingerJet) -> Result<HermitianMatrix> {
    require_order(j, 2)?;
    let n = j.n();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            data.push(j.partial(&[i], &[k])?);
        }
    }
    HermitianMatrix::from_entries(n, data)
}

fn wirtinger_gradient(j: &WirtingerJet) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    require_order(j, 1)?;
    let n = j.n();
    let holo = (0..n).map(|i| j.partial(&[i], &[])).collect::<Result<_>>()?;
    let anti = (0..n).map(|i| j.partial(&[], &[i])).collect::<Result<_>>()?;
    Ok((holo, anti))
}

fn min_eigen_margin(m: &HermitianMatrix) -> (f64, bool) {
    let (lo, _) = m.eigen_bounds();
    (lo, lo > PD_TOL * m.max_abs().max(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricAtPoint {
    pub g_lower: HermitianMatrix,
    /// Matrix inverse of `g_lower`.
    pub g_upper: HermitianMatrix,
    pub point: Option<Vec<Complex64>>,
    /// Value of the potential at the point.
    pub potential_value: f64,
    pub min_eigenvalue: f64,
    pub positive_definite: bool,
}

impl MetricAtPoint {
    fn from_parts(g_lower: HermitianMatrix, g_upper: HermitianMatrix, potential_value: f64) -> Self {
        let (min_eigenvalue, positive_definite) = min_eigen_margin(&g_lower);
        Self { g_lower, g_upper, point: None, potential_value, min_eigenvalue, positive_definite }
    }

    pub fn at(mut self, p: &[Complex64]) -> Self {
        self.point = Some(p.to_vec());
        self
    }

    pub fn n(&self) -> usize {
        self.g_lower.n()
    }

    /// `g^{i jbar}`.
    pub fn upper(&self, i: usize, j: usize) -> Complex64 {
        self.g_upper.get(j, i)
    }

    /// `max |(G H - I)_{ij}|`.
    pub fn inverse_residual(&self) -> f64 {
        let n = self.n();
        self.g_lower
            .matmul(&self.g_upper)
            .iter()
            .enumerate()
            .map(|(k, z)| (z - if k / n == k % n { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max)
    }

    /// `<v; w>_g`.
    pub fn inner(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.g_lower.inner(v, w)
    }

    /// `|v|_g^2`.
    pub fn norm_sq(&self, v: &[Complex64]) -> f64 {
        self.g_lower.quad_form(v)
    }
}

/// Metric whose potential has the jet `j`.
///
/// An indefinite Hessian is flagged in the result, not rejected.
pub fn metric_from_potential(j: &WirtingerJet) -> Result<MetricAtPoint> {
    let g_lower = complex_hessian(j)?;
    let g_upper = g_lower.inverse()?;
    Ok(MetricAtPoint::from_parts(g_lower, g_upper, j.value().re))
}

/// Jet of `-log(-psi)`.
pub fn neg_log_neg(psi: &WirtingerJet) -> Result<WirtingerJet> {
    let v = psi.value().re;
    if v >= 0.0 {
        return Err(Error::NonNegativePotentialValue { value: v });
    }
    Ok(psi.neg().ln()?.neg())
}

/// First and second order data of a negative potential `psi`, from which the
/// metric of `-log(-psi)` is assembled without differentiating the logarithm.
#[derive(Debug, Clone)]
pub struct LogMetricData {
    /// `-psi(p)`.
    pub s: f64,
    pub psi_hessian: HermitianMatrix,
    /// Matrix inverse of `psi_hessian`.
    pub psi_upper: HermitianMatrix,
    /// `(psi_i)`.
    pub grad: Vec<Complex64>,
    /// `(psi_ibar)`.
    pub grad_bar: Vec<Complex64>,
    /// `|grad psi|^2_psi`.
    pub grad_sq: f64,
    pub metric: MetricAtPoint,
}

impl LogMetricData {
    pub fn from_jet(psi: &WirtingerJet) -> Result<Self> {
        require_order(psi, 2)?;
        let value = psi.value().re;
        if value >= 0.0 {
            return Err(Error::NonNegativePotentialValue { value });
        }
        let s = -value;
        let n = psi.n();
        let psi_hessian = complex_hessian(psi)?;
        let (min_eigenvalue, pd) = min_eigen_margin(&psi_hessian);
        if !pd {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        let psi_upper = psi_hessian.inverse()?;
        let (grad, grad_bar) = wirtinger_gradient(psi)?;
        let grad_sq = contract_upper(&psi_upper, &grad, &grad_bar).re;

        // (-psi) g_{i jbar} = psi_{i jbar} + psi_i psi_jbar / (-psi)
        let g_lower = HermitianMatrix::from_fn(n, |i, j| (psi_hessian.get(i, j) + grad[i] * grad_bar[j] / s) / s)?;
        // Sherman-Morrison: H = s (P - (P u)(P u)^* / (s + |grad psi|^2_psi)), u_i = psi_i.
        let pu = psi_upper.matvec(&grad);
        let denom = s + grad_sq;
        let g_upper = HermitianMatrix::from_fn(n, |i, j| (psi_upper.get(i, j) - pu[i] * pu[j].conj() / denom) * s)?;
        let metric = MetricAtPoint::from_parts(g_lower, g_upper, -s.ln());
        Ok(Self { s, psi_hessian, psi_upper, grad, grad_bar, grad_sq, metric })
    }
}

/// `sum_{ij} g^{i jbar} a_i b_j` with `g^{i jbar} = H[j][i]`.
fn contract_upper(h: &HermitianMatrix, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let n = h.n();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += h.get(j, i) * a[i] * b[j];
        }
    }
    acc
}

/// Metric of `g = -log(-psi)` from the closed form in terms of `psi`, with the
/// inverse from the rank-one update formula.
pub fn log_metric(psi: &WirtingerJet) -> Result<MetricAtPoint> {
    Ok(LogMetricData::from_jet(psi)?.metric)
}

/// `|grad f|_g^2 = g^{i jbar} f_i f_jbar`.
pub fn gradient_norm_sq(f: &WirtingerJet, m: &MetricAtPoint) -> Result<f64> {
    if f.n() != m.n() {
        return Err(Error::DimensionMismatch { left: m.n(), right: f.n() });
    }
    let (holo, anti) = wirtinger_gradient(f)?;
    Ok(contract_upper(&m.g_upper, &holo, &anti).re)
}

/// `Delta_g f = Tr(G^{-1} (f_{i jbar}))`.
pub fn laplacian(f: &WirtingerJet, m: &MetricAtPoint) -> Result<f64> {
    if f.n() != m.n() {
        return Err(Error::DimensionMismatch { left: m.n(), right: f.n() });
    }
    let n = m.n();
    require_order(f, 2)?;
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += m.g_upper.get(i, j) * f.partial(&[j], &[i])?;
        }
    }
    Ok(acc.re)
}

/// `Ric = -d d-bar log det(g_{i jbar})` from a potential jet of order >= 4.
pub fn ricci_from_jet(j: &WirtingerJet) -> Result<HermitianMatrix> {
    require_order(j, 4)?;
    let n = j.n();
    let mut rows = Vec::with_capacity(n);
    for a in 0..n {
        let da = j.partial_shift(a, Wirtinger::Holomorphic)?;
        let row = (0..n).map(|b| da.partial_shift(b, Wirtinger::Antiholomorphic)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let log_det = jet_determinant(&rows)?.ln()?;
    HermitianMatrix::from_fn(n, |a, b| -log_det.partial(&[a], &[b]).expect("order >= 2"))
}

pub fn ricci_form(src: &dyn JetSource, p: &[Complex64], order: usize) -> Result<HermitianMatrix> {
    if order < 4 {
        return Err(Error::InsufficientOrder { required: 4, available: order });
    }
    ricci_from_jet(&src.jet(p, order)?)
}

/// `log det(g_{i jbar}) - (n + 1) g(p)`.
pub fn monge_ampere_from_jet(j: &WirtingerJet) -> Result<f64> {
    let g = complex_hessian(j)?;
    let det = g.det();
    let threshold = crate::hermitian::SINGULAR_TOL * g.norm_inf().powi(g.n() as i32).max(1.0);
    if det.norm() < threshold || det.re <= 0.0 {
        return Err(Error::SingularMatrix { det_abs: det.norm(), threshold });
    }
    Ok(det.re.ln() - (j.n() + 1) as f64 * j.value().re)
}

pub fn monge_ampere_residual(src: &dyn JetSource, p: &[Complex64], order: usize) -> Result<f64> {
    monge_ampere_from_jet(&src.jet(p, order.max(2))?)
}

/// Four-index curvature array `R_{i jbar k lbar}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<Complex64>,
}

impl CurvatureTensor {
    pub fn zeros(n: usize) -> Self {
        Self { n, r: vec![ZERO; n * n * n * n] }
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R_{i jbar k lbar}`.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.r[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Complex64) {
        let x = self.idx(i, j, k, l);
        self.r[x] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.r
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `R_{ijkl} = conj(R_{jilk})`, `R_{ijkl} = R_{kjil}`
    /// and `R_{ijkl} = R_{ilkj}`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r - self.get(j, i, l, k).conj()).norm())
                            .max((r - self.get(k, j, i, l)).norm())
                            .max((r - self.get(i, l, k, j)).norm());
                    }
                }
            }
        }
        worst
    }

    /// `R_{i jbar k lbar} v_i conj(v_j) w_k conj(w_l)`.
    pub fn contract(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        let n = self.n;
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                let vv = v[i] * v[j].conj();
                for k in 0..n {
                    for l in 0..n {
                        acc += self.get(i, j, k, l) * vv * w[k] * w[l].conj();
                    }
                }
            }
        }
        acc
    }

    /// Largest entrywise difference relative to the larger tensor's max entry.
    pub fn relative_difference(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        self.r.iter().zip(&other.r).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
    }
}

/// `R_{i jbar k lbar} = -g_{i jbar k lbar} + g_{i k pbar} g^{pbar q} g_{q jbar lbar}`.
pub fn curvature_from_jet(j: &WirtingerJet) -> Result<CurvatureTensor> {
    require_order(j, 4)?;
    let m = metric_from_potential(j)?;
    curvature_with_inverse(j, &m.g_upper)
}

fn curvature_with_inverse(j: &WirtingerJet, upper: &HermitianMatrix) -> Result<CurvatureTensor> {
    let n = j.n();
    // third[(i, k, p)] = g_{i k pbar}; third_bar[(q, j, l)] = g_{q jbar lbar}
    let mut third = vec![ZERO; n * n * n];
    let mut third_bar = vec![ZERO; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                third[(a * n + b) * n + c] = j.partial(&[a, b], &[c])?;
                third_bar[(a * n + b) * n + c] = j.partial(&[a], &[b, c])?;
            }
        }
    }
    let mut r = CurvatureTensor::zeros(n);
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = -j.partial(&[i, k], &[jj, l])?;
                    for p in 0..n {
                        for q in 0..n {
                            acc += third[(i * n + k) * n + p] * upper.get(p, q) * third_bar[(q * n + jj) * n + l];
                        }
                    }
                    r.set(i, jj, k, l, acc);
                }
            }
        }
    }
    Ok(r)
}

pub fn curvature_tensor(src: &dyn JetSource, p: &[Complex64], order: usize) -> Result<CurvatureTensor> {
    if order < 4 {
        return Err(Error::InsufficientOrder { required: 4, available: order });
    }
    curvature_from_jet(&src.jet(p, order)?)
}

fn check_nonzero(v: &[Complex64]) -> Result<()> {
    if v.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `Bis_g(v, w)`.
pub fn bisectional(r: &CurvatureTensor, m: &MetricAtPoint, v: &[Complex64], w: &[Complex64]) -> Result<f64> {
    check_nonzero(v)?;
    check_nonzero(w)?;
    Ok(r.contract(v, w).re / (m.norm_sq(v) * m.norm_sq(w)))
}

/// `H_g(v) = Bis_g(v, v)`.
pub fn sectional(r: &CurvatureTensor, m: &MetricAtPoint, v: &[Complex64]) -> Result<f64> {
    bisectional(r, m, v, v)
}

/// Denominator of the `|<v;w>_g|^2` term in the deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeviationNormalization {
    /// `|v|_g^2 |w|_g^2`, as in the decomposition of the bisectional curvature.
    #[default]
    Proof,
    /// `<v;v>_g^2 <w;w>_g^2`.
    Display,
}

impl DeviationNormalization {
    fn t1(self, m: &MetricAtPoint, v: &[Complex64], w: &[Complex64]) -> f64 {
        let (nv, nw) = (m.norm_sq(v), m.norm_sq(w));
        let ip = m.inner(v, w).norm_sqr();
        match self {
            Self::Proof => 1.0 + ip / (nv * nw),
            Self::Display => 1.0 + ip / (nv * nv * nw * nw),
        }
    }
}

/// `Bis_g(v, w) + T1(v, w)` and its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationValue {
    pub bis: f64,
    pub t1: f64,
    /// `(1/-psi) R(psi)(v, v, w, w) / (|v|_g^2 |w|_g^2)`, when decomposed.
    pub t2: Option<f64>,
    /// The non-negative rank-one term, when decomposed.
    pub t3: Option<f64>,
    /// `bis + t1`; for a decomposition under the proof normalization this is
    /// evaluated as `t2 - t3`, which avoids cancelling two O(1) terms.
    pub value: f64,
}

pub fn deviation(
    r: &CurvatureTensor,
    m: &MetricAtPoint,
    v: &[Complex64],
    w: &[Complex64],
    norm: DeviationNormalization,
) -> Result<DeviationValue> {
    let bis = bisectional(r, m, v, w)?;
    let t1 = norm.t1(m, v, w);
    Ok(DeviationValue { bis, t1, t2: None, t3: None, value: bis + t1 })
}

/// Curvature of `g = -log(-psi)` assembled from the jets of `psi` alone.
#[derive(Debug, Clone)]
pub struct RankOneCurvature {
    pub data: LogMetricData,
    /// `R(psi)`.
    pub psi_curvature: CurvatureTensor,
    /// `psi_{,ik} = psi_{ik} - psi_{ik pbar} psi^{pbar q} psi_q`.
    pub psi_comma: Vec<Complex64>,
    /// `psi_{,jbar lbar} = psi_{jbar lbar} - psi_pbar psi^{pbar q} psi_{q jbar lbar}`.
    pub psi_comma_bar: Vec<Complex64>,
}

impl RankOneCurvature {
    pub fn from_jet(psi: &WirtingerJet) -> Result<Self> {
        require_order(psi, 4)?;
        let data = LogMetricData::from_jet(psi)?;
        let n = psi.n();
        let psi_curvature = curvature_with_inverse(psi, &data.psi_upper)?;
        let up = &data.psi_upper;
        let mut psi_comma = vec![ZERO; n * n];
        let mut psi_comma_bar = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let mut a = psi.partial(&[i, k], &[])?;
                let mut b = psi.partial(&[], &[i, k])?;
                for p in 0..n {
                    for q in 0..n {
                        a -= psi.partial(&[i, k], &[p])? * up.get(p, q) * data.grad[q];
                        b -= data.grad_bar[p] * up.get(p, q) * psi.partial(&[q], &[i, k])?;
                    }
                }
                psi_comma[i * n + k] = a;
                psi_comma_bar[i * n + k] = b;
            }
        }
        Ok(Self { data, psi_curvature, psi_comma, psi_comma_bar })
    }

    pub fn metric(&self) -> &MetricAtPoint {
        &self.data.metric
    }

    pub fn tensor(&self) -> CurvatureTensor {
        let n = self.psi_curvature.n();
        let g = &self.data.metric.g_lower;
        let s = self.data.s;
        let denom = self.data.grad_sq + s;
        let mut r = CurvatureTensor::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let ball = -(g.get(i, j) * g.get(k, l) + g.get(i, l) * g.get(k, j));
                        let rank_one = self.psi_comma[i * n + k] * self.psi_comma_bar[j * n + l] / denom;
                        r.set(i, j, k, l, ball + (self.psi_curvature.get(i, j, k, l) - rank_one) / s);
                    }
                }
            }
        }
        r
    }

    /// `Bis_g(v, w) = -T1 + T2 - T3`.
    pub fn decomposition(&self, v: &[Complex64], w: &[Complex64], norm: DeviationNormalization) -> Result<DeviationValue> {
        check_nonzero(v)?;
        check_nonzero(w)?;
        let n = self.psi_curvature.n();
        let m = &self.data.metric;
        let s = self.data.s;
        let nvw = m.norm_sq(v) * m.norm_sq(w);
        let t1_proof = DeviationNormalization::Proof.t1(m, v, w);
        let t2 = self.psi_curvature.contract(v, w).re / (s * nvw);
        let mut a = ZERO;
        let mut b = ZERO;
        for i in 0..n {
            for k in 0..n {
                a += self.psi_comma[i * n + k] * v[i] * w[k];
                b += self.psi_comma_bar[i * n + k] * v[i].conj() * w[k].conj();
            }
        }
        let t3 = (a * b).re / (s * (self.data.grad_sq + s) * nvw);
        let bis = -t1_proof + t2 - t3;
        let (t1, value) = match norm {
            DeviationNormalization::Proof => (t1_proof, t2 - t3),
            DeviationNormalization::Display => {
                let t1 = norm.t1(m, v, w);
                (t1, bis + t1)
            }
        };
        Ok(DeviationValue { bis, t1, t2: Some(t2), t3: Some(t3), value })
    }
}

pub fn curvature_via_rank_one(src: &dyn JetSource, p: &[Complex64], order: usize) -> Result<CurvatureTensor> {
    if order < 4 {
        return Err(Error::InsufficientOrder { required: 4, available: order });
    }
    Ok(RankOneCurvature::from_jet(&src.jet(p, order)?)?.tensor())
}

/// Outcome of the two-sided bound
/// `lambda psi^2 / (-psi + |grad psi|^2_psi) I <= (g^{i jbar}) <= Lambda (-psi) I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichCheck {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub holds: bool,
}

pub fn sandwich_check(data: &LogMetricData) -> SandwichCheck {
    let (lambda, big_lambda) = data.psi_upper.eigen_bounds();
    let s = data.s;
    let lower_bound = lambda * s * s / (s + data.grad_sq);
    let upper_bound = big_lambda * s;
    let (min_eigenvalue, max_eigenvalue) = data.metric.g_upper.eigen_bounds();
    let tol = 1e-10 * upper_bound.abs().max(f64::MIN_POSITIVE);
    let holds = min_eigenvalue >= lower_bound - tol && max_eigenvalue <= upper_bound + tol;
    SandwichCheck { lower_bound, upper_bound, min_eigenvalue, max_eigenvalue, holds }
}

const PRIMES: [u32; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131,
];

fn radical_inverse(mut k: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while k > 0 {
        out += (k % b) as f64 * f;
        k /= b;
        f *= inv;
    }
    out
}

fn unit_from_gaussians(g: &[f64]) -> Vec<Complex64> {
    let v: Vec<Complex64> = g.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / norm).collect()
}

/// Pairs `(v, w)` on the Euclidean unit sphere of `C^n`: a Halton sequence
/// with a seeded Cranley-Patterson rotation, pushed through Box-Muller.
pub fn sample_direction_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let dims = 8 * n;
    assert!(dims <= PRIMES.len(), "direction sampling supports n <= {}", PRIMES.len() / 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
    (1..=count as u64)
        .map(|k| {
            let u: Vec<f64> = (0..dims)
                .map(|d| {
                    let x = (radical_inverse(k, PRIMES[d]) + shift[d]).fract();
                    x.max(f64::MIN_POSITIVE)
                })
                .collect();
            let gauss: Vec<f64> = u
                .chunks(2)
                .flat_map(|c| {
                    let r = (-2.0 * c[0].ln()).sqrt();
                    let th = 2.0 * std::f64::consts::PI * c[1];
                    [r * th.cos(), r * th.sin()]
                })
                .collect();
            (unit_from_gaussians(&gauss[..2 * n]), unit_from_gaussians(&gauss[2 * n..]))
        })
        .collect()
}
