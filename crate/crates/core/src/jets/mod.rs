//! Truncated Taylor expansions in the Wirtinger variables `(z, zbar)`.
//!
//! A [`WirtingerJet`] of order `K` at a base point `p` stores the Taylor
//! coefficients `c_{alpha,beta}` of a function `f` in
//! `f(p + h) = sum c_{alpha,beta} h^alpha hbar^beta`, for
//! `|alpha| + |beta| <= K`. Arithmetic is exact up to truncation, so mixed
//! partials of any composite expression come out as
//! `alpha! beta! c_{alpha,beta}`.

mod analytic;
mod space;

use std::sync::Arc;

use num_complex::Complex64;

pub use analytic::AnalyticFn;
pub use space::JetSpace;

use crate::error::{Error, Result};

/// A pair of exponent vectors: `alpha` for `z`, `beta` for `zbar`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    alpha: Vec<u32>,
    beta: Vec<u32>,
}

impl MultiIndex {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        assert_eq!(alpha.len(), beta.len(), "alpha and beta must have the same length");
        Self { alpha, beta }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n], vec![0; n])
    }

    /// Builds the index of `d^k / dz_{holo[0]} ... dzbar_{anti[0]} ...`
    /// (0-based axes, repeats allowed).
    pub fn from_axes(n: usize, holo: &[usize], anti: &[usize]) -> Self {
        let mut m = Self::zero(n);
        for &i in holo {
            m.alpha[i] += 1;
        }
        for &j in anti {
            m.beta[j] += 1;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u32] {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.alpha.iter().chain(&self.beta).map(|&e| e as usize).sum()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.beta.clone(), self.alpha.clone())
    }
}

/// Direction of a first Wirtinger derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    /// `d/dz_i`
    Holomorphic,
    /// `d/dzbar_i`
    Antiholomorphic,
}

#[derive(Debug, Clone)]
pub struct WirtingerJet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<Complex64>,
}

impl WirtingerJet {
    fn zeros(space: &Arc<JetSpace>, order: usize) -> Self {
        assert!(
            order <= space.max_order(),
            "order {order} exceeds jet space order {}",
            space.max_order()
        );
        Self { space: space.clone(), order, coeffs: vec![Complex64::new(0.0, 0.0); space.len_upto(order)] }
    }

    pub fn constant(space: &Arc<JetSpace>, order: usize, c: Complex64) -> Self {
        let mut j = Self::zeros(space, order);
        j.coeffs[0] = c;
        j
    }

    /// The jet of `z_axis` (0-based) expanded at a point whose `axis`
    /// coordinate is `base`.
    pub fn coordinate(space: &Arc<JetSpace>, order: usize, axis: usize, base: Complex64) -> Result<Self> {
        let n = space.n();
        if axis >= n {
            return Err(Error::AxisOutOfRange { axis, n });
        }
        if order == 0 {
            return Err(Error::InsufficientOrder { required: 1, available: 0 });
        }
        let mut j = Self::constant(space, order, base);
        let idx = space.index_of(&MultiIndex::from_axes(n, &[axis], &[])).expect("linear monomial");
        j.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(j)
    }

    /// Builds a jet from raw coefficients laid out in the space's graded order.
    pub fn from_coeffs(space: &Arc<JetSpace>, order: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), space.len_upto(order));
        Self { space: space.clone(), order, coeffs }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Value at the base point.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient; zero for indices above the order.
    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        match self.space.index_of(m) {
            Some(i) if i < self.coeffs.len() => self.coeffs[i],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set_coeff(&mut self, m: &MultiIndex, c: Complex64) -> Result<()> {
        let degree = m.degree();
        if degree > self.order {
            return Err(Error::DegreeExceedsOrder { degree, order: self.order });
        }
        let i = self.space.index_of(m).ok_or(Error::DimensionMismatch { left: self.n(), right: m.n() })?;
        self.coeffs[i] = c;
        Ok(())
    }

    /// The mixed partial `d^{|alpha|+|beta|} f / dz^alpha dzbar^beta` at the base point.
    pub fn extract_partial(&self, m: &MultiIndex) -> Result<Complex64> {
        if m.n() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: m.n() });
        }
        let degree = m.degree();
        if degree > self.order {
            return Err(Error::DegreeExceedsOrder { degree, order: self.order });
        }
        let i = self.space.index_of(m).expect("degree checked");
        Ok(self.coeffs[i] * self.space.weight(i))
    }

    /// Shorthand for `extract_partial` with axis lists.
    pub fn partial(&self, holo: &[usize], anti: &[usize]) -> Result<Complex64> {
        self.extract_partial(&MultiIndex::from_axes(self.n(), holo, anti))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    /// Picks the table with more room; layouts agree by construction.
    fn wider_space(&self, other: &Self) -> Arc<JetSpace> {
        if other.space.max_order() > self.space.max_order() {
            other.space.clone()
        } else {
            self.space.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { space: self.wider_space(other), order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { space: self.wider_space(other), order: self.order, coeffs })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let space = self.wider_space(other);
        let k = self.order;
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let room = k - space.degree(i);
            let jmax = space.len_upto(room);
            let row = &space.product_row(i)[..jmax];
            for (&t, &b) in row.iter().zip(&other.coeffs[..jmax]) {
                out[t as usize] += a * b;
            }
        }
        Ok(Self { space, order: k, coeffs: out })
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { space: self.space.clone(), order: self.order, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add_scalar(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Complex conjugate of the function: conjugates coefficients and swaps
    /// the roles of `z` and `zbar`.
    pub fn conjugate(&self) -> Self {
        let coeffs = (0..self.coeffs.len()).map(|i| self.coeffs[self.space.conj_index(i)].conj()).collect();
        Self { space: self.space.clone(), order: self.order, coeffs }
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder { required: order, available: self.order });
        }
        Ok(Self { space: self.space.clone(), order, coeffs: self.coeffs[..self.space.len_upto(order)].to_vec() })
    }

    /// Jet of `df/dz_axis` (or `df/dzbar_axis`), one order lower.
    pub fn partial_shift(&self, axis: usize, dir: Wirtinger) -> Result<Self> {
        let n = self.n();
        if axis >= n {
            return Err(Error::AxisOutOfRange { axis, n });
        }
        if self.order == 0 {
            return Err(Error::InsufficientOrder { required: 1, available: 0 });
        }
        let var = match dir {
            Wirtinger::Holomorphic => axis,
            Wirtinger::Antiholomorphic => n + axis,
        };
        let mut out = Self::zeros(&self.space, self.order - 1);
        let len = self.coeffs.len();
        for &(src, dst, e) in self.space.shifts(var) {
            if src as usize >= len {
                break;
            }
            out.coeffs[dst as usize] += self.coeffs[src as usize] * e;
        }
        Ok(out)
    }

    pub fn analytic(&self, f: AnalyticFn) -> Result<Self> {
        analytic::compose(self, f)
    }

    pub fn recip(&self) -> Result<Self> {
        self.analytic(AnalyticFn::Reciprocal)
    }

    pub fn ln(&self) -> Result<Self> {
        self.analytic(AnalyticFn::Log)
    }

    pub fn exp(&self) -> Result<Self> {
        self.analytic(AnalyticFn::Exp)
    }

    pub fn powf(&self, r: f64) -> Result<Self> {
        self.analytic(AnalyticFn::PowReal(r))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// `max |c_{alpha,beta} - conj(c_{beta,alpha})|`; zero for real-valued functions.
    pub fn reality_residual(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[i] - self.coeffs[self.space.conj_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_residual() <= tol
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// A real function whose jets can be produced at any point.
pub trait JetSource: Send + Sync {
    fn dim(&self) -> usize;

    /// Maximal table order needed to return a jet of order `order`.
    fn space_order(&self, order: usize) -> usize {
        order
    }

    /// Jet of order `order` at `p`; `space` must reach `space_order(order)`.
    fn jet_in_space(&self, space: &Arc<JetSpace>, p: &[Complex64], order: usize) -> Result<WirtingerJet>;

    fn jet(&self, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: p.len() });
        }
        let space = JetSpace::shared(self.dim(), self.space_order(order));
        self.jet_in_space(&space, p, order)
    }
}

/// Constant jet in a fresh space of dimension `n` and order `order`.
pub fn jet_const(c: Complex64, n: usize, order: usize) -> WirtingerJet {
    WirtingerJet::constant(&JetSpace::new(n, order), order, c)
}

/// Jet of `z_axis` (0-based) at `base`, in a fresh space.
pub fn jet_coordinate(axis: usize, base: &[Complex64], order: usize) -> Result<WirtingerJet> {
    let n = base.len();
    if axis >= n {
        return Err(Error::AxisOutOfRange { axis, n });
    }
    WirtingerJet::coordinate(&JetSpace::new(n, order), order, axis, base[axis])
}

/// Coordinate jets `z_1..z_n` at `base` in a shared space.
pub fn coordinate_jets(space: &Arc<JetSpace>, order: usize, base: &[Complex64]) -> Result<Vec<WirtingerJet>> {
    (0..base.len()).map(|i| WirtingerJet::coordinate(space, order, i, base[i])).collect()
}

/// Determinant of a square matrix of jets, by expansion over column subsets
/// (division free, `O(n 2^n)` jet products).
pub fn jet_determinant(rows: &[Vec<WirtingerJet>]) -> Result<WirtingerJet> {
    let m = rows.len();
    assert!(m >= 1 && m <= 16, "determinant size {m} unsupported");
    for r in rows {
        if r.len() != m {
            return Err(Error::ShapeMismatch { expected: m, got: r.len() });
        }
    }
    let proto = &rows[0][0];
    let one = WirtingerJet::constant(proto.space(), proto.order(), Complex64::new(1.0, 0.0));
    // minors[S] = det of rows (m - |S|)..m restricted to the columns in S.
    let full = (1usize << m) - 1;
    let mut minors: Vec<Option<WirtingerJet>> = vec![None; 1 << m];
    minors[0] = Some(one);
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|s| s.count_ones());
    for s in masks {
        let size = s.count_ones() as usize;
        let row = &rows[m - size];
        let mut acc: Option<WirtingerJet> = None;
        let mut position = 0;
        for c in 0..m {
            if s & (1 << c) == 0 {
                continue;
            }
            let minor = minors[s & !(1 << c)].as_ref().expect("smaller minors computed first");
            let mut term = row[c].mul(minor)?;
            if position % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
            position += 1;
        }
        minors[s] = acc;
    }
    Ok(minors[full].take().expect("full minor"))
}
