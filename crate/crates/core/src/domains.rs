//! Polynomial defining functions, the domain catalog, and boundary geometry.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{coordinate_jets, JetSource, JetSpace, MultiIndex, WirtingerJet};

/// Tolerance on Hermitian symmetry of loaded coefficients.
pub const SPEC_SYMMETRY_TOL: f64 = 1e-12;
/// `|phi(q)|` accepted as "on the boundary" when building rays.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Target of [`DomainSpec::boundary_project`].
pub const PROJECTION_TOL: f64 = 1e-12;
pub const PROJECTION_MAX_STEPS: usize = 100;
/// Smallest Wirtinger gradient norm accepted at a boundary point.
pub const MIN_GRADIENT: f64 = 1e-8;

/// A real polynomial `phi(z, zbar) = sum c_{alpha,beta} z^alpha zbar^beta`
/// defining a domain `{phi < 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    name: String,
    n: usize,
    params: Vec<f64>,
    terms: Vec<(MultiIndex, Complex64)>,
    interior_witness: Vec<Complex64>,
}

fn key(m: &MultiIndex) -> (Vec<u32>, Vec<u32>) {
    (m.alpha().to_vec(), m.beta().to_vec())
}

impl DomainSpec {
    /// Builds a spec, completing Hermitian symmetry: a missing partner
    /// `(beta, alpha)` is filled with the conjugate, a present one must match.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        terms: Vec<(MultiIndex, Complex64)>,
        interior_witness: Vec<Complex64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if interior_witness.len() != n {
            return Err(Error::InvalidParameter(format!(
                "interior witness has {} coordinates, expected {n}",
                interior_witness.len()
            )));
        }
        let mut map: BTreeMap<(Vec<u32>, Vec<u32>), Complex64> = BTreeMap::new();
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::InvalidParameter(format!("monomial of dimension {} in a {n}-dimensional spec", m.n())));
            }
            *map.entry(key(&m)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut done: BTreeMap<(Vec<u32>, Vec<u32>), Complex64> = BTreeMap::new();
        for ((a, b), c) in &map {
            if done.contains_key(&(a.clone(), b.clone())) {
                continue;
            }
            if a == b {
                if c.im.abs() > SPEC_SYMMETRY_TOL {
                    return Err(Error::SpecFile(format!(
                        "diagonal monomial {a:?}/{b:?} has imaginary coefficient {}",
                        c.im
                    )));
                }
                done.insert((a.clone(), b.clone()), Complex64::new(c.re, 0.0));
                continue;
            }
            let partner = (b.clone(), a.clone());
            let sym = match map.get(&partner) {
                Some(p) => {
                    if (c - p.conj()).norm() > SPEC_SYMMETRY_TOL {
                        return Err(Error::SpecFile(format!(
                            "coefficients of {a:?}/{b:?} and {b:?}/{a:?} are not conjugate"
                        )));
                    }
                    (c + p.conj()) * 0.5
                }
                None => *c,
            };
            done.insert((a.clone(), b.clone()), sym);
            done.insert(partner, sym.conj());
        }
        let terms = done
            .into_iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|((a, b), c)| (MultiIndex::new(a, b), c))
            .collect();
        let spec = Self { name: name.into(), n, params: Vec::new(), terms, interior_witness };
        let at_witness = spec.evaluate(&spec.interior_witness);
        if at_witness >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "phi(interior witness) = {at_witness} is not negative"
            )));
        }
        Ok(spec)
    }

    fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn terms(&self) -> &[(MultiIndex, Complex64)] {
        &self.terms
    }

    pub fn interior_witness(&self) -> &[Complex64] {
        &self.interior_witness
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| *c)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `max |c_{alpha,beta} - conj(c_{beta,alpha})|`.
    pub fn reality_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| (c - self.coeff(&m.conjugate()).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn evaluate_complex(&self, p: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = *c;
                for i in 0..self.n {
                    v *= p[i].powu(m.alpha()[i]) * p[i].conj().powu(m.beta()[i]);
                }
                v
            })
            .sum()
    }

    /// `phi(p)`.
    pub fn evaluate(&self, p: &[Complex64]) -> f64 {
        self.evaluate_complex(p).re
    }

    /// Exact re-centred expansion at `p`, truncated at `order`.
    pub fn evaluate_jet(&self, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        let space = JetSpace::shared(self.n, order);
        self.jet_in(&space, p, order)
    }

    fn jet_in(&self, space: &Arc<JetSpace>, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.len() });
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        if order == 0 {
            return Ok(WirtingerJet::constant(space, 0, self.evaluate_complex(p)));
        }
        let z = coordinate_jets(space, order, p)?;
        let zb: Vec<WirtingerJet> = z.iter().map(|j| j.conjugate()).collect();
        let max_pow = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.alpha().iter().chain(m.beta()).copied())
            .max()
            .unwrap_or(0) as usize;
        let powers = |base: &WirtingerJet| -> Result<Vec<WirtingerJet>> {
            let mut v = vec![WirtingerJet::constant(space, order, one)];
            for k in 1..=max_pow {
                v.push(v[k - 1].mul(base)?);
            }
            Ok(v)
        };
        let zp: Vec<Vec<WirtingerJet>> = z.iter().map(powers).collect::<Result<_>>()?;
        let zbp: Vec<Vec<WirtingerJet>> = zb.iter().map(powers).collect::<Result<_>>()?;
        let mut acc = WirtingerJet::constant(space, order, zero);
        for (m, c) in &self.terms {
            let mut t = WirtingerJet::constant(space, order, *c);
            for i in 0..self.n {
                let a = m.alpha()[i] as usize;
                let b = m.beta()[i] as usize;
                if a > 0 {
                    t = t.mul(&zp[i][a])?;
                }
                if b > 0 {
                    t = t.mul(&zbp[i][b])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Wirtinger gradient `(phi_1, .., phi_n)`.
    pub fn wirtinger_gradient(&self, p: &[Complex64]) -> Result<Vec<Complex64>> {
        let j = self.evaluate_jet(p, 1)?;
        (0..self.n).map(|i| j.partial(&[i], &[])).collect()
    }

    /// Euclidean real gradient identified with a complex vector: `2 conj(phi_i)`.
    pub fn real_gradient(&self, p: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(self.wirtinger_gradient(p)?.iter().map(|g| g.conj() * 2.0).collect())
    }

    /// `|grad phi| = (sum phi_i phi_ibar)^(1/2)`.
    pub fn gradient_norm(&self, p: &[Complex64]) -> Result<f64> {
        Ok(self.wirtinger_gradient(p)?.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt())
    }

    /// Damped Newton iteration along the real gradient onto `{phi = 0}`.
    pub fn boundary_project(&self, p_near: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut q = p_near.to_vec();
        let mut val = self.evaluate(&q);
        for _ in 0..PROJECTION_MAX_STEPS {
            if val.abs() <= PROJECTION_TOL {
                return Ok(q);
            }
            let g = self.real_gradient(&q)?;
            let g2: f64 = g.iter().map(|x| x.norm_sqr()).sum();
            if g2 <= MIN_GRADIENT * MIN_GRADIENT {
                return Err(Error::DegenerateGradient { norm: g2.sqrt() / 2.0 });
            }
            let mut step = 1.0;
            loop {
                let cand: Vec<Complex64> = q.iter().zip(&g).map(|(x, d)| x - d * (step * val / g2)).collect();
                let cv = self.evaluate(&cand);
                if cv.abs() < val.abs() || step < 1e-9 {
                    q = cand;
                    val = cv;
                    break;
                }
                step *= 0.5;
            }
        }
        if val.abs() <= PROJECTION_TOL {
            Ok(q)
        } else {
            Err(Error::NoConvergence { steps: PROJECTION_MAX_STEPS, residual: val.abs() })
        }
    }

    pub fn inward_ray(&self, q: &[Complex64], params: &RayParams) -> Result<RayGeometry> {
        params.validate()?;
        let v = self.evaluate(q);
        if v.abs() > BOUNDARY_TOL {
            return Err(Error::NotOnBoundary { value: v.abs() });
        }
        let norm = self.gradient_norm(q)?;
        if norm <= MIN_GRADIENT {
            return Err(Error::DegenerateGradient { norm });
        }
        let g = self.real_gradient(q)?;
        let gn: f64 = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let normal: Vec<Complex64> = g.iter().map(|x| -x / gn).collect();
        let ray = RayGeometry { q: q.to_vec(), normal, t_grid: params.grid() };
        for &t in &ray.t_grid {
            let value = self.evaluate(&ray.point(t));
            if value >= 0.0 {
                return Err(Error::RayLeavesDomain { t, value });
            }
        }
        Ok(ray)
    }

    /// A generic starting point for boundary projection.
    pub fn default_seed(&self) -> Vec<Complex64> {
        let base = [
            Complex64::new(0.55, 0.25),
            Complex64::new(0.35, -0.45),
            Complex64::new(-0.2, 0.3),
            Complex64::new(0.15, 0.1),
        ];
        let v: Vec<Complex64> = (0..self.n).map(|i| base[i % base.len()] / (1.0 + (i / base.len()) as f64)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter().map(|z| z * (0.9 / norm)).collect()
    }

    /// Text form understood by [`DomainSpec::parse`].
    pub fn to_spec_file(&self) -> String {
        let mut s = String::new();
        writeln!(s, "name = {}", self.name).unwrap();
        writeln!(s, "n = {}", self.n).unwrap();
        writeln!(s, "interior_witness = {}", format_point(&self.interior_witness)).unwrap();
        for (m, c) in &self.terms {
            let list = |v: &[u32]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            writeln!(s, "monomial = {} | {} | {:.17e} | {:.17e}", list(m.alpha()), list(m.beta()), c.re, c.im).unwrap();
        }
        s
    }

    /// Parses the domain ingestion format:
    ///
    /// ```text
    /// # comment
    /// name = my_domain
    /// n = 2
    /// interior_witness = 0, 0, 0, 0
    /// monomial = 1,0 | 1,0 | 1.0 | 0.0
    /// ```
    ///
    /// Points are flat `re, im` pairs; monomial records are
    /// `alpha | beta | re | im`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut n = None;
        let mut witness = None;
        let mut records: Vec<(Vec<u32>, Vec<u32>, Complex64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::SpecFile(format!("line {}: {msg}", lineno + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "name" => name = Some(v.to_string()),
                "n" => n = Some(v.parse::<usize>().map_err(|e| err(format!("bad n: {e}")))?),
                "interior_witness" => witness = Some(parse_point(v).map_err(|e| err(e))?),
                "monomial" => {
                    let parts: Vec<&str> = v.split('|').map(str::trim).collect();
                    if parts.len() != 4 {
                        return Err(err("monomial needs `alpha | beta | re | im`".into()));
                    }
                    let ints = |s: &str| -> std::result::Result<Vec<u32>, String> {
                        s.split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse::<u32>().map_err(|e| format!("bad exponent `{t}`: {e}")))
                            .collect()
                    };
                    let alpha = ints(parts[0]).map_err(&err)?;
                    let beta = ints(parts[1]).map_err(&err)?;
                    let re: f64 = parts[2].parse().map_err(|e| err(format!("bad re: {e}")))?;
                    let im: f64 = parts[3].parse().map_err(|e| err(format!("bad im: {e}")))?;
                    records.push((alpha, beta, Complex64::new(re, im)));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::SpecFile("missing `n`".into()))?;
        let name = name.unwrap_or_else(|| "custom".to_string());
        let witness = witness.ok_or_else(|| Error::SpecFile("missing `interior_witness`".into()))?;
        if witness.len() != n {
            return Err(Error::SpecFile(format!("interior_witness has {} coordinates, expected {n}", witness.len())));
        }
        let mut terms = Vec::with_capacity(records.len());
        for (alpha, beta, c) in records {
            if alpha.len() != n || beta.len() != n {
                return Err(Error::SpecFile(format!("monomial exponents must have length {n}")));
            }
            terms.push((MultiIndex::new(alpha, beta), c));
        }
        Self::new(name, n, terms, witness)
    }
}

impl JetSource for DomainSpec {
    fn dim(&self) -> usize {
        self.n
    }

    fn jet_in_space(&self, space: &Arc<JetSpace>, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        self.jet_in(space, p, order)
    }
}

/// Parses a flat `re1, im1, re2, im2, ...` list.
pub fn parse_point(s: &str) -> std::result::Result<Vec<Complex64>, String> {
    let vals: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad number `{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if vals.len() % 2 != 0 || vals.is_empty() {
        return Err(format!("expected an even, non-zero count of reals, got {}", vals.len()));
    }
    Ok(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

pub fn format_point(p: &[Complex64]) -> String {
    p.iter().map(|z| format!("{:.17e},{:.17e}", z.re, z.im)).collect::<Vec<_>>().join(",")
}

/// Names accepted by [`catalog`], with their default parameters.
pub const CATALOG: &[(&str, &str, &str)] = &[
    ("ball", "n", "2"),
    ("ellipsoid", "a1,...,an (> 0)", "1,2"),
    ("egg", "m (integer >= 1)", "2"),
    ("tube", "m (integer >= 1)", "1"),
    ("perturbed_ball", "eps", "0.05"),
];

fn positive_integer(x: f64, what: &str) -> Result<u32> {
    if x.fract() != 0.0 || x < 1.0 || x > 32.0 {
        return Err(Error::InvalidParameter(format!("{what} must be an integer >= 1, got {x}")));
    }
    Ok(x as u32)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Catalog domains; an empty `params` selects the defaults in [`CATALOG`].
pub fn catalog(name: &str, params: &[f64]) -> Result<DomainSpec> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let sq = |n: usize, i: usize| MultiIndex::from_axes(n, &[i], &[i]);
    match name {
        "ball" => {
            let n = match params {
                [] => 2,
                [x] => positive_integer(*x, "n")? as usize,
                _ => return Err(Error::InvalidParameter("ball takes at most one parameter (n)".into())),
            };
            let mut terms = vec![(MultiIndex::zero(n), c(-1.0))];
            terms.extend((0..n).map(|i| (sq(n, i), c(1.0))));
            Ok(DomainSpec::new("ball", n, terms, vec![c(0.0); n])?.with_params(vec![n as f64]))
        }
        "ellipsoid" => {
            let a: Vec<f64> = if params.is_empty() { vec![1.0, 2.0] } else { params.to_vec() };
            if let Some(bad) = a.iter().find(|&&x| !(x > 0.0)) {
                return Err(Error::InvalidParameter(format!("ellipsoid coefficients must be positive, got {bad}")));
            }
            let n = a.len();
            let mut terms = vec![(MultiIndex::zero(n), c(-1.0))];
            terms.extend(a.iter().enumerate().map(|(i, &ai)| (sq(n, i), c(ai))));
            Ok(DomainSpec::new("ellipsoid", n, terms, vec![c(0.0); n])?.with_params(a))
        }
        "egg" => {
            let m = match params {
                [] => 2,
                [x] => positive_integer(*x, "m")?,
                _ => return Err(Error::InvalidParameter("egg takes one parameter (m)".into())),
            };
            let terms = vec![
                (MultiIndex::zero(2), c(-1.0)),
                (sq(2, 0), c(1.0)),
                (MultiIndex::new(vec![0, m], vec![0, m]), c(1.0)),
            ];
            Ok(DomainSpec::new("egg", 2, terms, vec![c(0.0); 2])?.with_params(vec![m as f64]))
        }
        "tube" => {
            let m = match params {
                [] => 1,
                [x] => positive_integer(*x, "m")?,
                _ => return Err(Error::InvalidParameter("tube takes one parameter (m)".into())),
            };
            // Re z1 + (Re z2)^(2m) - 1, with Re z = (z + zbar)/2 expanded binomially.
            let mut terms = vec![
                (MultiIndex::zero(2), c(-1.0)),
                (MultiIndex::new(vec![1, 0], vec![0, 0]), c(0.5)),
                (MultiIndex::new(vec![0, 0], vec![1, 0]), c(0.5)),
            ];
            let p = 2 * m;
            let scale = 0.5f64.powi(p as i32);
            for k in 0..=p {
                terms.push((MultiIndex::new(vec![0, k], vec![0, p - k]), c(scale * binomial(p, k))));
            }
            Ok(DomainSpec::new("tube", 2, terms, vec![c(0.0); 2])?.with_params(vec![m as f64]))
        }
        "perturbed_ball" => {
            let eps = match params {
                [] => 0.05,
                [x] => *x,
                _ => return Err(Error::InvalidParameter("perturbed_ball takes one parameter (eps)".into())),
            };
            if !eps.is_finite() || eps.abs() >= 0.5 {
                return Err(Error::InvalidParameter(format!("perturbed_ball needs |eps| < 0.5, got {eps}")));
            }
            // |z|^2 - 1 + eps Re(z1^2 zbar2)
            let terms = vec![
                (MultiIndex::zero(2), c(-1.0)),
                (sq(2, 0), c(1.0)),
                (sq(2, 1), c(1.0)),
                (MultiIndex::new(vec![2, 0], vec![0, 1]), c(eps / 2.0)),
                (MultiIndex::new(vec![0, 1], vec![2, 0]), c(eps / 2.0)),
            ];
            Ok(DomainSpec::new("perturbed_ball", 2, terms, vec![c(0.0); 2])?.with_params(vec![eps]))
        }
        other => Err(Error::UnknownDomain(other.to_string())),
    }
}

/// Depth grid along an inward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayParams {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for RayParams {
    fn default() -> Self {
        Self { t_min: 1e-5, t_max: 1e-1, count: 24 }
    }
}

impl RayParams {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter("ray needs at least one point".into()));
        }
        if !(self.t_min > 0.0) || !(self.t_max > 0.0) || (self.count > 1 && self.t_min >= self.t_max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < t_min < t_max, got t_min = {}, t_max = {}",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    /// Geometric sequence from `t_max` down to `t_min`.
    pub fn grid(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.t_max];
        }
        let ratio = (self.t_min / self.t_max).ln();
        (0..self.count)
            .map(|k| self.t_max * (ratio * k as f64 / (self.count - 1) as f64).exp())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayGeometry {
    pub q: Vec<Complex64>,
    /// Inward Euclidean unit normal.
    pub normal: Vec<Complex64>,
    pub t_grid: Vec<f64>,
}

impl RayGeometry {
    pub fn point(&self, t: f64) -> Vec<Complex64> {
        self.q.iter().zip(&self.normal).map(|(q, v)| q + v * t).collect()
    }

    pub fn points(&self) -> Vec<Vec<Complex64>> {
        self.t_grid.iter().map(|&t| self.point(t)).collect()
    }
}
