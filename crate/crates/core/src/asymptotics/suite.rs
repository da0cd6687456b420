//! Consolidated verification: every checkable invariant of the library run
//! against one domain, plus the ray sweeps, collected into a single report.
//!
//! Failures never abort the run; they become report entries. Each group of
//! checks declares the jet order it needs, and a group whose order exceeds the
//! configured cap is replaced by one `InsufficientOrder` entry.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fmt_num, ray_sweep, AsymptoticsReport, SeriesOutcome, SweepConfig};
use crate::domains::{format_point, DomainSpec, RayParams};
use crate::error::{Error, Result};
use crate::fefferman::{iterate, j_identity_residual, spsh_adjust, FeffermanLevel};
use crate::hermitian::HermitianMatrix;
use crate::jets::{MultiIndex, WirtingerJet};
use crate::kahler::{
    curvature_from_jet, deviation, metric_from_potential, monge_ampere_from_jet, neg_log_neg, ricci_from_jet,
    sample_direction_pairs, sandwich_check, sectional, DeviationNormalization, LogMetricData, RankOneCurvature,
};

pub const FD_STEP: f64 = 1e-3;
pub const FD_TOL: f64 = 1e-6;
pub const DEFAULT_PROBES: usize = 20;
/// Lowest ratio `|grad phi| / |grad phi|(q)` tolerated along the ray.
pub const GRADIENT_RATIO_FLOOR: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub spec: DomainSpec,
    pub level: usize,
    /// Boundary point of the sweep; projected from the default seed when absent.
    pub q: Option<Vec<Complex64>>,
    pub ray: RayParams,
    pub directions: usize,
    pub seed: u64,
    /// Cap on the jet order of the defining function; `None` means unlimited.
    pub order: Option<usize>,
    pub spsh_t: f64,
    /// Interior sample points per pointwise check.
    pub probes: usize,
}

impl SuiteConfig {
    /// Top level `n + 1` with default sampling.
    pub fn new(spec: DomainSpec) -> Self {
        let level = spec.n() + 1;
        Self {
            spec,
            level,
            q: None,
            ray: RayParams::default(),
            directions: super::DEFAULT_DIRECTIONS,
            seed: 0,
            order: None,
            spsh_t: 0.0,
            probes: DEFAULT_PROBES,
        }
    }

    /// Leaf jet order the full suite needs.
    pub fn required_order(&self) -> usize {
        4 + 2 * self.level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    PassExact,
    Fail,
    /// Nothing to test (no admissible sample point).
    Skipped,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::PassExact => "PASS-EXACT",
            Self::Fail => "FAIL",
            Self::Skipped => "SKIP",
        }
    }

    fn from_outcome(o: &SeriesOutcome) -> Self {
        match o {
            SeriesOutcome::Exact => Self::PassExact,
            o if o.passed() => Self::Pass,
            _ => Self::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckEntry {
    fn new(name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status, detail: detail.into() }
    }

    fn bound(name: &str, worst: f64, tol: f64, what: &str, points: usize) -> Self {
        if points == 0 {
            return Self::new(name, CheckStatus::Skipped, "no admissible sample points");
        }
        let status = if worst <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
        Self::new(name, status, format!("max {what} {worst:.3e} (tol {tol:.0e}) over {points} points"))
    }

    fn error(name: &str, e: &Error) -> Self {
        let detail = match e {
            Error::InsufficientOrder { .. } => format!("InsufficientOrder: {e}"),
            _ => e.to_string(),
        };
        Self::new(name, CheckStatus::Fail, detail)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Echo of the configuration, in output order.
    pub header: Vec<(String, String)>,
    pub checks: Vec<CheckEntry>,
    pub sweep: Option<AsymptoticsReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("verification report\n");
        for (k, v) in &self.header {
            writeln!(s, "  {k} = {v}").unwrap();
        }
        for c in &self.checks {
            writeln!(s, "[{}] {}: {}", c.status.label(), c.name, c.detail).unwrap();
        }
        let skipped = self.checks.iter().filter(|c| c.status == CheckStatus::Skipped).count();
        writeln!(
            s,
            "result: {} ({} checks, {} failed, {} skipped)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures(),
            skipped
        )
        .unwrap();
        s
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.header {
            writeln!(s, "{k} = {v}").unwrap();
        }
        for c in &self.checks {
            writeln!(s, "check.{} = {}", c.name, c.status.label()).unwrap();
            writeln!(s, "check.{}.detail = {}", c.name, c.detail).unwrap();
        }
        writeln!(s, "result = {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        s
    }
}

/// Uniform points in a cube around the interior witness with `phi < -margin`.
/// The cube shrinks whenever rejections pile up.
pub fn interior_probes(spec: &DomainSpec, count: usize, seed: u64, margin: f64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_9e0);
    let center = spec.interior_witness().to_vec();
    let mut radius = 1.0;
    let mut misses = 0;
    let mut out = Vec::with_capacity(count);
    while out.len() < count && radius > 1e-6 {
        let p: Vec<Complex64> = center
            .iter()
            .map(|c| c + Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
            .collect();
        if spec.evaluate(&p) < -margin {
            out.push(p);
            misses = 0;
        } else {
            misses += 1;
            if misses >= 200 {
                radius *= 0.5;
                misses = 0;
            }
        }
    }
    out
}

/// Central-difference estimate of the Wirtinger partial `m` of `f` at `p`,
/// from nested fourth-order five-point stencils in the real coordinates.
pub fn finite_difference_partial(f: &dyn Fn(&[Complex64]) -> f64, p: &[Complex64], m: &MultiIndex, h: f64) -> Complex64 {
    let n = p.len();
    // each Wirtinger factor is (d/dx -+ i d/dy) / 2
    let mut ops: Vec<(usize, f64)> = Vec::new();
    for k in 0..n {
        for _ in 0..m.alpha()[k] {
            ops.push((k, -1.0));
        }
        for _ in 0..m.beta()[k] {
            ops.push((k, 1.0));
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 0..(1usize << ops.len()) {
        let mut coef = Complex64::new(1.0, 0.0);
        let mut dirs = Vec::with_capacity(ops.len());
        for (b, &(k, sign)) in ops.iter().enumerate() {
            if mask >> b & 1 == 0 {
                coef *= 0.5;
                dirs.push((k, false));
            } else {
                coef *= Complex64::new(0.0, 0.5 * sign);
                dirs.push((k, true));
            }
        }
        let mut q = p.to_vec();
        total += coef * nested_stencil(f, &mut q, &dirs, h);
    }
    total
}

fn nested_stencil(f: &dyn Fn(&[Complex64]) -> f64, q: &mut Vec<Complex64>, dirs: &[(usize, bool)], h: f64) -> f64 {
    let Some((&(k, imag), rest)) = dirs.split_first() else {
        return f(q);
    };
    let step = if imag { Complex64::new(0.0, h) } else { Complex64::new(h, 0.0) };
    let base = q[k];
    let mut acc = 0.0;
    for (off, w) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
        q[k] = base + step * off;
        acc += w * nested_stencil(f, q, rest, h);
    }
    q[k] = base;
    acc / (12.0 * h)
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    probes: Vec<Vec<Complex64>>,
    /// Plain or spsh-adjusted defining function.
    psi: FeffermanLevel,
}

impl Ctx<'_> {
    fn cap(&self) -> usize {
        self.cfg.order.unwrap_or(usize::MAX)
    }

    /// Runs `body` when `order` fits under the cap; otherwise one failure entry.
    fn group(&self, name: &str, order: usize, out: &mut Vec<CheckEntry>, body: impl FnOnce(&mut Vec<CheckEntry>)) {
        if order > self.cap() {
            out.push(CheckEntry::error(name, &Error::InsufficientOrder { required: order, available: self.cap() }));
        } else {
            body(out);
        }
    }

    fn psi_jet(&self, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        self.psi.expr.evaluate(p, order)
    }
}

fn rel_matrix_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE)
}

fn check_finite_differences(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let spec = &ctx.cfg.spec;
    let witness_depth = (-spec.evaluate(spec.interior_witness())).min(1.0);
    let points = interior_probes(spec, ctx.cfg.probes, ctx.cfg.seed.wrapping_add(1), 0.2 * witness_depth);
    let f = |z: &[Complex64]| -(-spec.evaluate(z)).ln();
    let mut worst: f64 = 0.0;
    for p in &points {
        let jet = match spec.evaluate_jet(p, 3).and_then(|j| neg_log_neg(&j)) {
            Ok(j) => j,
            Err(e) => return out.push(CheckEntry::error("jet_finite_differences", &e)),
        };
        let space = jet.space().clone();
        let n = spec.n();
        for i in 1..space.len_upto(3) {
            let e = space.exponents(i);
            let m = MultiIndex::new(e[..n].iter().map(|&x| x as u32).collect(), e[n..].iter().map(|&x| x as u32).collect());
            let ad = jet.extract_partial(&m).expect("degree <= 3");
            let fd = finite_difference_partial(&f, p, &m, FD_STEP);
            worst = worst.max((ad - fd).norm() / ad.norm().max(1.0));
        }
    }
    out.push(CheckEntry::bound("jet_finite_differences", worst, FD_TOL, "relative error", points.len()));
}

fn check_hermitian(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed.wrapping_add(2));
    let mut worst_sqrt: f64 = 0.0;
    let mut bounds_ok = true;
    let mut trace_ok = true;
    let gauss = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for trial in 0..ctx.cfg.probes.max(1) {
        let n = 1 + trial % 4;
        let b: Vec<Complex64> = (0..n * n).map(|_| gauss(&mut rng)).collect();
        let bm = HermitianMatrix::from_fn(n, |i, j| (0..n).map(|k| b[i * n + k] * b[j * n + k].conj()).sum());
        let Ok(a) = bm else {
            bounds_ok = false;
            continue;
        };
        match a.sqrt_psd() {
            Ok(r) => {
                let sq = HermitianMatrix::from_entries(n, r.matmul(&r));
                worst_sqrt = match sq {
                    Ok(sq) => worst_sqrt.max(rel_matrix_diff(&sq, &a)),
                    Err(_) => f64::INFINITY,
                };
            }
            Err(_) => worst_sqrt = f64::INFINITY,
        }
        let (lo, hi) = a.eigen_bounds();
        let tol = 1e-12 * a.max_abs().max(1.0);
        for _ in 0..8 {
            let v: Vec<Complex64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let rq = a.quad_form(&v) / norm2;
            bounds_ok &= rq >= lo - tol && rq <= hi + tol;
        }
        trace_ok &= a.trace_bound_check();
    }
    let status = if worst_sqrt <= 1e-10 && bounds_ok && trace_ok { CheckStatus::Pass } else { CheckStatus::Fail };
    out.push(CheckEntry::new(
        "hermitian_oracles",
        status,
        format!("sqrt residual {worst_sqrt:.3e}, eigen bounds bracket {bounds_ok}, trace bound {trace_ok}"),
    ));
}

fn check_reality(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let spec = &ctx.cfg.spec;
    let j_expr = FeffermanLevel::base(spec.clone()).j_expr();
    let mut worst = spec.reality_residual();
    for p in &ctx.probes {
        let jets = spec.evaluate_jet(p, 2).and_then(|phi| Ok((phi, j_expr.evaluate(p, 0)?)));
        match jets {
            Ok((phi, j)) => {
                worst = worst.max(phi.reality_residual() / phi.max_abs().max(1.0));
                worst = worst.max(j.value().im.abs() / j.value().norm().max(1.0));
            }
            Err(e) => return out.push(CheckEntry::error("reality", &e)),
        }
    }
    out.push(CheckEntry::bound("reality", worst, 1e-12, "imaginary residual", ctx.probes.len()));
}

fn check_j_identity(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let mut worst: f64 = 0.0;
    for p in &ctx.probes {
        let r = ctx.cfg.spec.evaluate_jet(p, 2).and_then(|phi| {
            let psi = phi.neg();
            let j = crate::fefferman::fefferman_j(&psi)?.value().norm();
            Ok(j_identity_residual(&psi)? / j.max(1.0))
        });
        match r {
            Ok(r) => worst = worst.max(r),
            Err(e) => return out.push(CheckEntry::error("j_identity", &e)),
        }
    }
    out.push(CheckEntry::bound("j_identity", worst, 1e-10, "relative residual", ctx.probes.len()));
}

fn check_log_metric(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let (mut inv_res, mut direct_res) = (0.0f64, 0.0f64);
    let mut sandwich_fail = 0;
    let mut used = 0;
    for p in &ctx.probes {
        let Ok(psi) = ctx.psi_jet(p, 2) else { continue };
        let Ok(data) = LogMetricData::from_jet(&psi) else { continue };
        let Ok(direct) = neg_log_neg(&psi).and_then(|w| metric_from_potential(&w)) else { continue };
        used += 1;
        inv_res = inv_res.max(data.metric.inverse_residual());
        direct_res = direct_res
            .max(rel_matrix_diff(&data.metric.g_lower, &direct.g_lower))
            .max(rel_matrix_diff(&data.metric.g_upper, &direct.g_upper));
        if !sandwich_check(&data).holds {
            sandwich_fail += 1;
        }
    }
    out.push(CheckEntry::bound("metric_inverse", inv_res, 1e-10, "|G H - I|", used));
    out.push(CheckEntry::bound("metric_closed_form", direct_res, 1e-9, "relative difference to direct metric", used));
    let status = match (used, sandwich_fail) {
        (0, _) => CheckStatus::Skipped,
        (_, 0) => CheckStatus::Pass,
        _ => CheckStatus::Fail,
    };
    out.push(CheckEntry::new("sandwich", status, format!("{sandwich_fail} violations over {used} points")));
}

fn check_curvature(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let (mut sym, mut rank_one) = (0.0f64, 0.0f64);
    let mut used = 0;
    for p in &ctx.probes {
        let Ok(psi) = ctx.psi_jet(p, 4) else { continue };
        let Ok(curv) = RankOneCurvature::from_jet(&psi) else { continue };
        let full = match neg_log_neg(&psi).and_then(|w| curvature_from_jet(&w)) {
            Ok(r) => r,
            Err(e) => return out.push(CheckEntry::error("curvature_symmetries", &e)),
        };
        used += 1;
        sym = sym.max(full.symmetry_residual() / full.max_abs().max(f64::MIN_POSITIVE));
        rank_one = rank_one.max(full.relative_difference(&curv.tensor()));
    }
    out.push(CheckEntry::bound("curvature_symmetries", sym, 1e-9, "relative symmetry residual", used));
    out.push(CheckEntry::bound("rank_one_curvature", rank_one, 1e-8, "relative difference", used));
}

fn check_ball_fixed_point(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let levels = match iterate(&ctx.cfg.spec, ctx.cfg.level) {
        Ok(l) => l,
        Err(e) => return out.push(CheckEntry::error("ball_fixed_point", &e)),
    };
    let mut worst: f64 = 0.0;
    for p in &ctx.probes {
        let phi = ctx.cfg.spec.evaluate(p);
        for lv in &levels {
            match (lv.phi(p), lv.j_value(p)) {
                (Ok(v), Ok(j)) => worst = worst.max((v - phi).abs()).max((j - 1.0).abs()),
                (Err(e), _) | (_, Err(e)) => return out.push(CheckEntry::error("ball_fixed_point", &e)),
            }
        }
    }
    out.push(CheckEntry::bound("ball_fixed_point", worst, 1e-11, "|phi^(l) - phi| or |J - 1|", ctx.probes.len()));
}

fn check_ball_einstein(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let n1 = (ctx.cfg.spec.n() + 1) as f64;
    let (mut ricci, mut ma) = (0.0f64, 0.0f64);
    for p in &ctx.probes {
        let r = ctx.cfg.spec.evaluate_jet(p, 4).and_then(|phi| {
            let w = neg_log_neg(&phi)?;
            let g = metric_from_potential(&w)?;
            let ric = ricci_from_jet(&w)?;
            let scale = g.g_lower.max_abs().max(1.0);
            Ok((ric.add(&g.g_lower.scale(n1)).max_abs() / scale, monge_ampere_from_jet(&w)?.abs()))
        });
        match r {
            Ok((a, b)) => {
                ricci = ricci.max(a);
                ma = ma.max(b);
            }
            Err(e) => return out.push(CheckEntry::error("ball_einstein", &e)),
        }
    }
    out.push(CheckEntry::bound("ball_ricci", ricci, 1e-8, "|Ric + (n+1) g|", ctx.probes.len()));
    out.push(CheckEntry::bound("ball_monge_ampere", ma, 1e-9, "|log det g - (n+1) w|", ctx.probes.len()));
}

fn check_ball_curvature(ctx: &Ctx, out: &mut Vec<CheckEntry>) {
    let pairs = sample_direction_pairs(ctx.cfg.spec.n(), ctx.cfg.directions, ctx.cfg.seed);
    let (mut hol, mut dev) = (0.0f64, 0.0f64);
    for p in &ctx.probes {
        let r = ctx.cfg.spec.evaluate_jet(p, 4).and_then(|phi| {
            let w = neg_log_neg(&phi)?;
            let m = metric_from_potential(&w)?;
            let r = curvature_from_jet(&w)?;
            let (mut a, mut b) = (0.0f64, 0.0f64);
            for (v, u) in &pairs {
                a = a.max((sectional(&r, &m, v)? + 2.0).abs());
                b = b.max(deviation(&r, &m, v, u, DeviationNormalization::Proof)?.value.abs());
            }
            Ok((a, b))
        });
        match r {
            Ok((a, b)) => {
                hol = hol.max(a);
                dev = dev.max(b);
            }
            Err(e) => return out.push(CheckEntry::error("ball_curvature", &e)),
        }
    }
    out.push(CheckEntry::bound("ball_holomorphic_sectional", hol, 1e-8, "|H + 2|", ctx.probes.len()));
    out.push(CheckEntry::bound("ball_deviation", dev, 1e-8, "|deviation|", ctx.probes.len()));
}

fn sweep_entries(rep: &AsymptoticsReport, out: &mut Vec<CheckEntry>) {
    let label = |o: &SeriesOutcome| o.value().map(fmt_num).unwrap_or_else(|| "none".into());
    for lv in &rep.levels {
        let l = lv.l;
        out.push(CheckEntry::new(
            format!("ray.l{l}.j_decay"),
            CheckStatus::from_outcome(&lv.j_decay),
            format!("slope {} (need >= {}), {} excluded", label(&lv.j_decay), l as f64 - super::SLOPE_TOL, lv.excluded),
        ));
        out.push(CheckEntry::new(
            format!("ray.l{l}.gradF_growth"),
            CheckStatus::from_outcome(&lv.grad_f_growth),
            format!("growth {} (limit {})", label(&lv.grad_f_growth), super::GRADIENT_GROWTH_LIMIT),
        ));
        let status = if lv.defect_identity_max <= 1e-9 { CheckStatus::Pass } else { CheckStatus::Fail };
        out.push(CheckEntry::new(
            format!("ray.l{l}.defect_identity"),
            status,
            format!("max residual {:.3e} (tol 1e-9)", lv.defect_identity_max),
        ));
        let status = if lv.min_eta > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail };
        out.push(CheckEntry::new(format!("ray.l{l}.eta_positive"), status, format!("min eta {:.6e}", lv.min_eta)));
    }
    out.push(CheckEntry::new(
        "ray.deviation_slope",
        CheckStatus::from_outcome(&rep.deviation_slope),
        format!("slope {} (need > 0)", label(&rep.deviation_slope)),
    ));
    out.push(CheckEntry::new(
        "ray.deviation_shrink",
        CheckStatus::from_outcome(&rep.deviation_shrink),
        format!("factor {} (need >= {})", label(&rep.deviation_shrink), super::DEVIATION_SHRINK_FACTOR),
    ));
    let status = if rep.gradient_ratio_min >= GRADIENT_RATIO_FLOOR { CheckStatus::Pass } else { CheckStatus::Fail };
    out.push(CheckEntry::new(
        "ray.gradient_lower_bound",
        status,
        format!("min |grad phi| ratio {:.6e} (need >= {GRADIENT_RATIO_FLOOR})", rep.gradient_ratio_min),
    ));
}

fn header(cfg: &SuiteConfig, q: Option<&[Complex64]>) -> Vec<(String, String)> {
    let params = cfg.spec.params().iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",");
    let mut h = vec![
        ("domain", cfg.spec.name().to_string()),
        ("n", cfg.spec.n().to_string()),
        ("params", params),
        ("level", cfg.level.to_string()),
        ("q", q.map(format_point).unwrap_or_else(|| "none".into())),
        ("tmin", fmt_num(cfg.ray.t_min)),
        ("tmax", fmt_num(cfg.ray.t_max)),
        ("count", cfg.ray.count.to_string()),
        ("dirs", cfg.directions.to_string()),
        ("seed", cfg.seed.to_string()),
        ("order", cfg.order.map(|o| o.to_string()).unwrap_or_else(|| "auto".into())),
        ("spsh_t", fmt_num(cfg.spsh_t)),
        ("probes", cfg.probes.to_string()),
    ];
    h.push(("required_order", cfg.required_order().to_string()));
    h.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Runs every check on `cfg.spec`; failures are recorded, never raised.
pub fn verify_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let n = cfg.spec.n();
    if cfg.level == 0 || cfg.level > n + 1 {
        let e = Error::InvalidParameter(format!("level must lie in 1..={}, got {}", n + 1, cfg.level));
        checks.push(CheckEntry::error("config", &e));
        return SuiteReport { header: header(cfg, cfg.q.as_deref()), checks, sweep: None };
    }
    let witness_depth = (-cfg.spec.evaluate(cfg.spec.interior_witness())).min(1.0);
    let probes = interior_probes(&cfg.spec, cfg.probes, cfg.seed, 1e-2 * witness_depth);
    let psi = match spsh_adjust(&FeffermanLevel::base(cfg.spec.clone()), cfg.spsh_t) {
        Ok(p) => p,
        Err(e) => {
            checks.push(CheckEntry::error("config", &e));
            return SuiteReport { header: header(cfg, cfg.q.as_deref()), checks, sweep: None };
        }
    };
    let ctx = Ctx { cfg, probes, psi };

    ctx.group("jet_finite_differences", 3, &mut checks, |o| check_finite_differences(&ctx, o));
    ctx.group("hermitian_oracles", 0, &mut checks, |o| check_hermitian(&ctx, o));
    ctx.group("reality", 2, &mut checks, |o| check_reality(&ctx, o));
    ctx.group("j_identity", 2, &mut checks, |o| check_j_identity(&ctx, o));
    ctx.group("log_metric", 2, &mut checks, |o| check_log_metric(&ctx, o));
    ctx.group("curvature", 4, &mut checks, |o| check_curvature(&ctx, o));
    if cfg.spec.name() == "ball" {
        ctx.group("ball_fixed_point", 2 * cfg.level + 2, &mut checks, |o| check_ball_fixed_point(&ctx, o));
        ctx.group("ball_einstein", 4, &mut checks, |o| check_ball_einstein(&ctx, o));
        ctx.group("ball_curvature", 4, &mut checks, |o| check_ball_curvature(&ctx, o));
    }

    let q = match &cfg.q {
        Some(q) => Ok(q.clone()),
        None => cfg.spec.boundary_project(&cfg.spec.default_seed()),
    };
    let mut sweep = None;
    match &q {
        Err(e) => checks.push(CheckEntry::error("ray_sweep", e)),
        Ok(q) => ctx.group("ray_sweep", cfg.required_order(), &mut checks, |o| {
            let sc = SweepConfig {
                level: cfg.level,
                ray: cfg.ray,
                directions: cfg.directions,
                seed: cfg.seed,
                spsh_t: cfg.spsh_t,
                normalization: DeviationNormalization::Proof,
            };
            match ray_sweep(&cfg.spec, q, &sc) {
                Ok(rep) => {
                    sweep_entries(&rep, o);
                    sweep = Some(rep);
                }
                Err(e) => o.push(CheckEntry::error("ray_sweep", &e)),
            }
        }),
    }
    SuiteReport { header: header(cfg, q.as_deref().ok()), checks, sweep }
}
