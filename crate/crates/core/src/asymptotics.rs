//! Ray sampling toward the boundary, decay-rate regression, and the
//! consolidated verification suite.

pub mod suite;

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::domains::{format_point, DomainSpec, RayGeometry, RayParams};
use crate::error::{Error, Result};
use crate::fefferman::{in_region, iterate, spsh_adjust, FeffermanLevel, PotentialExpr};
use crate::kahler::{
    curvature_from_jet, deviation, gradient_norm_sq, metric_from_potential, monge_ampere_from_jet, neg_log_neg,
    sample_direction_pairs, DeviationNormalization, LogMetricData, RankOneCurvature,
};

/// `y` values at or below this are treated as exact zeros by [`decay_exponent`].
pub const ZERO_FLOOR: f64 = 1e-14;
/// A whole series below this is reported as exact rather than fitted.
pub const EXACT_SERIES_TOL: f64 = 1e-12;
/// Deviation series uniformly below this are reported as exact; the deviation
/// is a difference of O(1) terms, so it carries more roundoff than `J`.
pub const DEVIATION_ZERO_TOL: f64 = 1e-8;
/// Order-of-vanishing checks accept slopes down to `l - SLOPE_TOL`.
pub const SLOPE_TOL: f64 = 0.2;
pub const GRADIENT_GROWTH_LIMIT: f64 = 2.0;
pub const DEVIATION_SHRINK_FACTOR: f64 = 3.0;
pub const DEFAULT_DIRECTIONS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Least-squares slope of `log y` against `log x`; `None` when exact.
    pub slope: Option<f64>,
    pub exact_zero: bool,
    /// Pairs that entered the regression.
    pub used: usize,
}

pub fn decay_exponent(pairs: &[(f64, f64)]) -> Result<DecayFit> {
    let valid: Vec<(f64, f64)> = pairs.iter().copied().filter(|&(x, _)| x > 0.0).collect();
    if valid.len() < 3 {
        return Err(Error::TooFewPoints(valid.len()));
    }
    let logs: Vec<(f64, f64)> = valid.iter().filter(|&&(_, y)| y > ZERO_FLOOR).map(|&(x, y)| (x.ln(), y.ln())).collect();
    if logs.is_empty() {
        return Ok(DecayFit { slope: None, exact_zero: true, used: 0 });
    }
    if logs.len() < 2 {
        return Err(Error::TooFewPoints(logs.len()));
    }
    let m = logs.len() as f64;
    let (mx, my) = logs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / m, b + y / m));
    let (sxy, sxx) = logs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return Err(Error::TooFewPoints(1));
    }
    Ok(DecayFit { slope: Some(sxy / sxx), exact_zero: false, used: logs.len() })
}

/// Data of one level of the iteration at one ray point.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub l: usize,
    pub j_value: f64,
    pub abs_j_minus_1: f64,
    /// `log J`; NaN when `J <= 0`.
    pub f_value: f64,
    /// `|grad F|_w^2` for `w = -log(-phi^(l))`; NaN when unavailable.
    pub grad_f_w_sq: f64,
    pub in_region: bool,
    /// `phi^(l) / phi`.
    pub eta: f64,
    /// `log det(w_{i jbar}) - (n + 1) w - F`.
    pub defect_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub point: Vec<Complex64>,
    pub neg_phi: f64,
    /// `|grad phi|` of the plain defining function.
    pub grad_phi: f64,
    /// Levels `1..=l`.
    pub levels: Vec<LevelRecord>,
    /// `sup |Bis + T1|` over the direction pairs, for the top level.
    pub deviation_sup: f64,
    pub deviation_mean: f64,
    /// Set when the point could not be evaluated at all.
    pub error: Option<String>,
    /// Set when only the curvature of the top level failed.
    pub deviation_error: Option<String>,
}

impl RaySample {
    pub fn top(&self) -> Option<&LevelRecord> {
        self.levels.last()
    }

    pub fn in_top_region(&self) -> bool {
        self.error.is_none() && self.top().is_some_and(|r| r.in_region)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub level: usize,
    pub ray: RayParams,
    pub directions: usize,
    pub seed: u64,
    pub spsh_t: f64,
    pub normalization: DeviationNormalization,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            level: 1,
            ray: RayParams::default(),
            directions: DEFAULT_DIRECTIONS,
            seed: 0,
            spsh_t: 0.0,
            normalization: DeviationNormalization::Proof,
        }
    }
}

/// How a monitored series was judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesOutcome {
    /// Uniformly below [`EXACT_SERIES_TOL`]; no fit attempted.
    Exact,
    Measured { value: f64, pass: bool },
    /// Not enough usable samples.
    Insufficient,
}

impl SeriesOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Exact | Self::Measured { pass: true, .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Exact => "PASS-EXACT",
            Self::Measured { pass: true, .. } => "PASS",
            Self::Measured { pass: false, .. } => "FAIL",
            Self::Insufficient => "FAIL",
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Measured { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Per-level fitted quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSummary {
    pub l: usize,
    /// Slope of `|J - 1|` against `-phi`; passes at `>= l - 0.2`.
    pub j_decay: SeriesOutcome,
    /// Largest value of `|grad F|_w^2 / (-phi)^(2l-1)` over the deepest decade
    /// of `t`, divided by its value at the shallowest point of that decade.
    pub grad_f_growth: SeriesOutcome,
    /// `max / min` of the same ratio over the same decade (reported only).
    pub grad_f_variation: Option<f64>,
    /// `max / median` of the same ratio over the same decade (reported only).
    pub grad_f_max_over_median: Option<f64>,
    /// Largest `|log det(w_{i jbar}) - (n+1) w - F|` along the ray.
    pub defect_identity_max: f64,
    pub min_eta: f64,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub domain: String,
    pub params: Vec<f64>,
    pub q: Vec<Complex64>,
    pub config: SweepConfig,
    pub samples: Vec<RaySample>,
    pub levels: Vec<LevelSummary>,
    /// Slope of `deviation_sup` against `-phi` (positive = decaying).
    pub deviation_slope: SeriesOutcome,
    /// `deviation_sup` at the shallowest over the deepest in-region sample.
    pub deviation_shrink: SeriesOutcome,
    /// `min |grad phi| / |grad phi|(q)` along the ray.
    pub gradient_ratio_min: f64,
}

fn sample_point(
    spec: &DomainSpec,
    levels: &[FeffermanLevel],
    j_exprs: &[PotentialExpr],
    w_exprs: &[PotentialExpr],
    pairs: &[(Vec<Complex64>, Vec<Complex64>)],
    norm: DeviationNormalization,
    t: f64,
    p: Vec<Complex64>,
) -> RaySample {
    let phi = spec.evaluate(&p);
    let grad_phi = spec.gradient_norm(&p).unwrap_or(f64::NAN);
    let mut sample = RaySample {
        t,
        point: p.clone(),
        neg_phi: -phi,
        grad_phi,
        levels: Vec::new(),
        deviation_sup: f64::NAN,
        deviation_mean: f64::NAN,
        error: None,
        deviation_error: None,
    };
    let top = levels.len() - 1;
    let mut requests: Vec<(&PotentialExpr, usize)> = Vec::new();
    for k in 0..levels.len() {
        requests.push((&levels[k].expr, if k == top { 4 } else { 2 }));
        requests.push((&j_exprs[k], 1));
        requests.push((&w_exprs[k], 2));
    }
    let jets = match PotentialExpr::evaluate_many(&requests, &p) {
        Ok(j) => j,
        Err(e) => {
            sample.error = Some(e.to_string());
            return sample;
        }
    };
    for (k, lv) in levels.iter().enumerate() {
        let (phi_l, j, w) = (&jets[3 * k], &jets[3 * k + 1], &jets[3 * k + 2]);
        let j_value = j.value().re;
        let mut rec = LevelRecord {
            l: lv.l,
            j_value,
            abs_j_minus_1: (j_value - 1.0).abs(),
            f_value: f64::NAN,
            grad_f_w_sq: f64::NAN,
            in_region: in_region(j_value),
            eta: phi_l.value().re / phi,
            defect_identity_residual: f64::NAN,
        };
        if j_value > 0.0 {
            if let Ok(f) = j.ln() {
                rec.f_value = f.value().re;
                if let Ok(data) = LogMetricData::from_jet(&phi_l.truncate(2).expect("order >= 2")) {
                    rec.grad_f_w_sq = gradient_norm_sq(&f, &data.metric).unwrap_or(f64::NAN);
                }
                if let Ok(ma) = monge_ampere_from_jet(w) {
                    rec.defect_identity_residual = (ma - rec.f_value).abs();
                }
            }
        }
        sample.levels.push(rec);
    }
    // The rank-one route needs a strictly psh potential; otherwise fall back
    // to differentiating -log(-phi^(l)) directly.
    let top_jet = &jets[3 * top];
    let values: Result<Vec<f64>> = match RankOneCurvature::from_jet(top_jet) {
        Ok(curv) => pairs.iter().map(|(v, w)| curv.decomposition(v, w, norm).map(|d| d.value)).collect(),
        Err(_) => neg_log_neg(top_jet).and_then(|w| {
            let m = metric_from_potential(&w)?;
            if !m.positive_definite {
                return Err(Error::NotPositiveDefinite { min_eigenvalue: m.min_eigenvalue });
            }
            let r = curvature_from_jet(&w)?;
            pairs.iter().map(|(v, u)| deviation(&r, &m, v, u, norm).map(|d| d.value)).collect()
        }),
    };
    match values {
        Ok(vals) => {
            sample.deviation_sup = vals.iter().fold(0.0, |a, x| a.max(x.abs()));
            sample.deviation_mean = vals.iter().map(|x| x.abs()).sum::<f64>() / vals.len().max(1) as f64;
        }
        Err(e) => sample.deviation_error = Some(e.to_string()),
    }
    sample
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

fn summarize_level(samples: &[RaySample], idx: usize, t_min: f64) -> LevelSummary {
    let recs: Vec<(&RaySample, &LevelRecord)> = samples
        .iter()
        .filter(|s| s.error.is_none())
        .map(|s| (s, &s.levels[idx]))
        .collect();
    let l = samples.first().and_then(|s| s.levels.get(idx)).map(|r| r.l).unwrap_or(idx + 1);
    let inside: Vec<(&RaySample, &LevelRecord)> = recs.iter().copied().filter(|(_, r)| r.in_region).collect();
    let excluded = samples.len() - inside.len();
    let exact = !inside.is_empty() && inside.iter().all(|(_, r)| r.abs_j_minus_1 <= EXACT_SERIES_TOL);

    let j_decay = if exact {
        SeriesOutcome::Exact
    } else {
        let pairs: Vec<(f64, f64)> = inside.iter().map(|(s, r)| (s.neg_phi, r.abs_j_minus_1)).collect();
        match decay_exponent(&pairs) {
            Ok(DecayFit { exact_zero: true, .. }) => SeriesOutcome::Exact,
            Ok(DecayFit { slope: Some(s), .. }) => SeriesOutcome::Measured { value: s, pass: s >= l as f64 - SLOPE_TOL },
            _ => SeriesOutcome::Insufficient,
        }
    };

    let decade: Vec<(f64, f64)> = inside
        .iter()
        .filter(|(s, r)| s.t <= 10.0 * t_min * (1.0 + 1e-12) && r.grad_f_w_sq.is_finite())
        .map(|(s, r)| (s.t, r.grad_f_w_sq / s.neg_phi.powi(2 * l as i32 - 1)))
        .collect();
    let (grad_f_growth, grad_f_variation, grad_f_max_over_median) = if exact {
        (SeriesOutcome::Exact, None, None)
    } else if decade.len() < 2 {
        (SeriesOutcome::Insufficient, None, None)
    } else {
        // samples run from shallow to deep
        let ratios: Vec<f64> = decade.iter().map(|&(_, r)| r).collect();
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let growth = if ratios[0] > 0.0 { max / ratios[0] } else { f64::INFINITY };
        let variation = if min > 0.0 { max / min } else { f64::INFINITY };
        (
            SeriesOutcome::Measured { value: growth, pass: growth <= GRADIENT_GROWTH_LIMIT },
            Some(variation),
            Some(max / median(ratios)),
        )
    };
    let defect_identity_max = recs.iter().map(|(_, r)| r.defect_identity_residual).fold(0.0, f64::max);
    let min_eta = recs.iter().map(|(_, r)| r.eta).fold(f64::INFINITY, f64::min);
    LevelSummary { l, j_decay, grad_f_growth, grad_f_variation, grad_f_max_over_median, defect_identity_max, min_eta, excluded }
}

/// Samples `level` along the inward normal ray at the boundary point `q`.
pub fn ray_sweep(spec: &DomainSpec, q: &[Complex64], config: &SweepConfig) -> Result<AsymptoticsReport> {
    let n = spec.n();
    if config.level == 0 || config.level > n + 1 {
        return Err(Error::InvalidParameter(format!("level must lie in 1..={}, got {}", n + 1, config.level)));
    }
    if config.directions == 0 {
        return Err(Error::InvalidParameter("direction count must be positive".into()));
    }
    let ray: RayGeometry = spec.inward_ray(q, &config.ray)?;
    let levels: Vec<FeffermanLevel> = iterate(spec, config.level)?
        .iter()
        .map(|lv| spsh_adjust(lv, config.spsh_t))
        .collect::<Result<_>>()?;
    let j_exprs: Vec<PotentialExpr> = levels.iter().map(|lv| lv.j_expr()).collect();
    let w_exprs: Vec<PotentialExpr> = levels.iter().map(|lv| lv.kahler_potential()).collect();
    let pairs = sample_direction_pairs(n, config.directions, config.seed);
    let samples: Vec<RaySample> = ray
        .t_grid
        .par_iter()
        .map(|&t| sample_point(spec, &levels, &j_exprs, &w_exprs, &pairs, config.normalization, t, ray.point(t)))
        .collect();

    let t_min = ray.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let level_summaries: Vec<LevelSummary> = (0..levels.len()).map(|k| summarize_level(&samples, k, t_min)).collect();

    let inside: Vec<&RaySample> = samples.iter().filter(|s| s.in_top_region() && s.deviation_error.is_none()).collect();
    let (deviation_slope, deviation_shrink) = if inside.iter().all(|s| s.deviation_sup <= DEVIATION_ZERO_TOL) && !inside.is_empty() {
        (SeriesOutcome::Exact, SeriesOutcome::Exact)
    } else {
        let pairs: Vec<(f64, f64)> = inside.iter().map(|s| (s.neg_phi, s.deviation_sup)).collect();
        let slope = match decay_exponent(&pairs) {
            Ok(DecayFit { slope: Some(s), .. }) => SeriesOutcome::Measured { value: s, pass: s > 0.0 },
            Ok(_) => SeriesOutcome::Exact,
            Err(_) => SeriesOutcome::Insufficient,
        };
        let shrink = match (inside.first(), inside.last()) {
            (Some(a), Some(b)) if inside.len() >= 2 => {
                let f = a.deviation_sup / b.deviation_sup;
                SeriesOutcome::Measured { value: f, pass: f >= DEVIATION_SHRINK_FACTOR }
            }
            _ => SeriesOutcome::Insufficient,
        };
        (slope, shrink)
    };
    let g0 = spec.gradient_norm(q)?;
    let gradient_ratio_min = samples.iter().map(|s| s.grad_phi / g0).fold(f64::INFINITY, f64::min);

    Ok(AsymptoticsReport {
        domain: spec.name().to_string(),
        params: spec.params().to_vec(),
        q: q.to_vec(),
        config: config.clone(),
        samples,
        levels: level_summaries,
        deviation_slope,
        deviation_shrink,
        gradient_ratio_min,
    })
}

pub const CSV_HEADER: &str = "t,neg_phi,J,absJm1,F,gradF_w_sq,dev_sup,dev_mean,in_Ul";

/// Seventeen significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl AsymptoticsReport {
    /// Sample table for the top level, ordered by decreasing `t`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_HEADER);
        s.push('\n');
        for smp in &self.samples {
            let nan = f64::NAN;
            let (j, a, f, g, inside) = match smp.top() {
                Some(r) if smp.error.is_none() => (r.j_value, r.abs_j_minus_1, r.f_value, r.grad_f_w_sq, r.in_region),
                _ => (nan, nan, nan, nan, false),
            };
            let cells = [smp.t, smp.neg_phi, j, a, f, g, smp.deviation_sup, smp.deviation_mean].map(fmt_num);
            writeln!(s, "{},{}", cells.join(","), if inside { 1 } else { 0 }).unwrap();
        }
        s
    }

    /// Flat `key = value` lines.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let params = self.params.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",");
        writeln!(s, "domain = {}", self.domain).unwrap();
        writeln!(s, "params = {params}").unwrap();
        writeln!(s, "q = {}", format_point(&self.q)).unwrap();
        writeln!(s, "level = {}", c.level).unwrap();
        writeln!(s, "tmin = {}", fmt_num(c.ray.t_min)).unwrap();
        writeln!(s, "tmax = {}", fmt_num(c.ray.t_max)).unwrap();
        writeln!(s, "count = {}", c.ray.count).unwrap();
        writeln!(s, "dirs = {}", c.directions).unwrap();
        writeln!(s, "seed = {}", c.seed).unwrap();
        writeln!(s, "spsh_t = {}", fmt_num(c.spsh_t)).unwrap();
        for lv in &self.levels {
            let pre = format!("level.{}", lv.l);
            writeln!(s, "{pre}.j_decay_slope = {}", opt(lv.j_decay.value())).unwrap();
            writeln!(s, "{pre}.j_decay_status = {}", lv.j_decay.label()).unwrap();
            writeln!(s, "{pre}.gradF_ratio_growth = {}", opt(lv.grad_f_growth.value())).unwrap();
            writeln!(s, "{pre}.gradF_ratio_growth_status = {}", lv.grad_f_growth.label()).unwrap();
            writeln!(s, "{pre}.gradF_ratio_variation = {}", opt(lv.grad_f_variation)).unwrap();
            writeln!(s, "{pre}.gradF_ratio_max_over_median = {}", opt(lv.grad_f_max_over_median)).unwrap();
            writeln!(s, "{pre}.defect_identity_max = {}", fmt_num(lv.defect_identity_max)).unwrap();
            writeln!(s, "{pre}.min_eta = {}", fmt_num(lv.min_eta)).unwrap();
            writeln!(s, "{pre}.excluded = {}", lv.excluded).unwrap();
        }
        writeln!(s, "deviation_slope = {}", opt(self.deviation_slope.value())).unwrap();
        writeln!(s, "deviation_slope_status = {}", self.deviation_slope.label()).unwrap();
        writeln!(s, "deviation_shrink = {}", opt(self.deviation_shrink.value())).unwrap();
        writeln!(s, "deviation_shrink_status = {}", self.deviation_shrink.label()).unwrap();
        writeln!(s, "gradient_ratio_min = {}", fmt_num(self.gradient_ratio_min)).unwrap();
        s
    }

    /// Human-readable summary followed by the sample table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        writeln!(s, "ray sweep on {} (params [{}])", self.domain, self.params.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).unwrap();
        writeln!(s, "  q = {}", format_point(&self.q)).unwrap();
        writeln!(
            s,
            "  level {}, t in [{:e}, {:e}] ({} points), {} direction pairs, seed {}, spsh_t {}",
            c.level, c.ray.t_min, c.ray.t_max, c.ray.count, c.directions, c.seed, c.spsh_t
        )
        .unwrap();
        for lv in &self.levels {
            writeln!(
                s,
                "  l={}: |J-1| slope {} [{}], gradF ratio growth {} [{}], excluded {}",
                lv.l,
                opt(lv.j_decay.value()),
                lv.j_decay.label(),
                opt(lv.grad_f_growth.value()),
                lv.grad_f_growth.label(),
                lv.excluded
            )
            .unwrap();
        }
        writeln!(
            s,
            "  deviation: slope {} [{}], shrink {} [{}]",
            opt(self.deviation_slope.value()),
            self.deviation_slope.label(),
            opt(self.deviation_shrink.value()),
            self.deviation_shrink.label()
        )
        .unwrap();
        s.push_str(&self.to_csv());
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| "none".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::catalog;

    #[test]
    fn synthetic_power_law() {
        let pairs: Vec<(f64, f64)> = (0..10).map(|k| {
            let x = 10f64.powf(-0.5 * k as f64);
            (x, x.powf(2.5))
        }).collect();
        let fit = decay_exponent(&pairs).unwrap();
        assert!((fit.slope.unwrap() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn exact_zero_and_too_few() {
        let fit = decay_exponent(&[(1.0, 0.0), (0.1, 0.0), (0.01, 1e-15)]).unwrap();
        assert!(fit.exact_zero && fit.slope.is_none());
        assert!(matches!(decay_exponent(&[(1.0, 1.0), (0.1, 0.1)]), Err(Error::TooFewPoints(2))));
        assert!(matches!(decay_exponent(&[(1.0, 1.0), (0.0, 0.1), (-1.0, 0.1)]), Err(Error::TooFewPoints(1))));
    }

    #[test]
    fn dominant_term() {
        let pairs: Vec<(f64, f64)> = (0..=8).map(|k| {
            let x = 1e-4 * 10f64.powf(0.25 * k as f64);
            (x, 3.0 * x * x + x.powi(3))
        }).collect();
        let s = decay_exponent(&pairs).unwrap().slope.unwrap();
        assert!((1.98..=2.02).contains(&s), "{s}");
    }

    #[test]
    fn ball_sweep_is_exact() {
        let ball = catalog("ball", &[]).unwrap();
        let q = ball.boundary_project(&ball.default_seed()).unwrap();
        let cfg = SweepConfig { level: 2, directions: 16, ray: RayParams { t_min: 1e-4, t_max: 1e-1, count: 6 }, ..Default::default() };
        let rep = ray_sweep(&ball, &q, &cfg).unwrap();
        assert_eq!(rep.samples.len(), 6);
        assert!(rep.samples.windows(2).all(|w| w[0].t > w[1].t));
        for s in &rep.samples {
            assert!(s.error.is_none(), "{:?}", s.error);
            assert!(s.deviation_sup <= 1e-8);
            assert!(s.deviation_sup >= s.deviation_mean);
        }
        assert!(rep.levels.iter().all(|l| l.j_decay == SeriesOutcome::Exact));
        assert_eq!(rep.deviation_slope, SeriesOutcome::Exact);
        let csv = rep.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 7);
    }
}
