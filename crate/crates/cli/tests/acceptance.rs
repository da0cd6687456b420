//! Acceptance run. Prints one line per criterion and exits non-zero if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::process::Command;
use std::time::{Duration, Instant};

use ake_core::asymptotics::{ray_sweep, AsymptoticsReport, SeriesOutcome, SweepConfig};
use ake_core::domains::{catalog, DomainSpec};
use ake_core::fefferman::{iterate, spsh_adjust, FeffermanLevel, PotentialExpr};
use ake_core::hermitian::HermitianMatrix;
use ake_core::jets::{JetSource, MultiIndex};
use ake_core::kahler::{
    curvature_tensor, curvature_via_rank_one, deviation, metric_from_potential, monge_ampere_residual, ricci_form,
    sample_direction_pairs, sectional, DeviationNormalization, LogMetricData,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Uniform points of `{phi < -margin}` inside the cube of half-width `r`.
fn interior_points(spec: &DomainSpec, count: usize, r: f64, margin: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<C>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<C> = (0..spec.n()).map(|_| C::new(rng.gen_range(-r..r), rng.gen_range(-r..r))).collect();
        if spec.evaluate(&p) < -margin {
            out.push(p);
        }
    }
    out
}

fn ball_exactness() -> Outcome {
    let ball = catalog("ball", &[2.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let pts = interior_points(&ball, 200, 1.0, 0.0, &mut rng);
    let base = FeffermanLevel::base(ball.clone());
    let levels = iterate(&ball, 3).unwrap();
    let potential = PotentialExpr::leaf(ball.clone()).neg_log_neg();
    let (mut j_err, mut fix_err, mut ma_err, mut ric_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let phi = ball.evaluate(p);
        j_err = j_err.max((base.j_value(p).unwrap() - 1.0).abs());
        for lv in &levels {
            fix_err = fix_err.max((lv.phi(p).unwrap() - phi).abs());
        }
        ma_err = ma_err.max(monge_ampere_residual(&potential, p, 2).unwrap().abs());
        let g = metric_from_potential(&potential.jet(p, 2).unwrap()).unwrap().g_lower;
        let ric = ricci_form(&potential, p, 4).unwrap();
        ric_err = ric_err.max(ric.add(&g.scale(3.0)).max_abs());
    }
    let pass = j_err <= 1e-11 && fix_err <= 1e-11 && ma_err <= 1e-9 && ric_err <= 1e-8;
    outcome(
        pass,
        format!("200 points: |J-1| {j_err:.2e}, |phi^(l)-phi| {fix_err:.2e}, MA {ma_err:.2e}, |Ric+3g| {ric_err:.2e}"),
    )
}

fn ball_curvature() -> Outcome {
    let ball = catalog("ball", &[2.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let pts = interior_points(&ball, 20, 1.0, 0.0, &mut rng);
    let pairs = sample_direction_pairs(2, 256, 202);
    let potential = PotentialExpr::leaf(ball).neg_log_neg();
    let (mut h_err, mut d_err) = (0.0f64, 0.0f64);
    for p in &pts {
        let m = metric_from_potential(&potential.jet(p, 2).unwrap()).unwrap();
        let r = curvature_tensor(&potential, p, 4).unwrap();
        for (v, w) in &pairs {
            h_err = h_err.max((sectional(&r, &m, v).unwrap() + 2.0).abs());
            d_err = d_err.max(deviation(&r, &m, v, w, DeviationNormalization::Proof).unwrap().value.abs());
        }
    }
    outcome(h_err <= 1e-8 && d_err <= 1e-8, format!("20 points x 256 pairs: |H+2| {h_err:.2e}, |deviation| {d_err:.2e}"))
}

/// `sum a_i |z_i|^2 + sum b_ij |z_i z_j|^2 + Re(holomorphic quadratic) - 1`,
/// whose complex Hessian is at least `min a_i`.
fn random_spsh_polynomial(rng: &mut ChaCha8Rng, idx: usize) -> DomainSpec {
    let n = 1 + idx % 3;
    let c = |re: f64, im: f64| C::new(re, im);
    let mut terms = vec![(MultiIndex::zero(n), c(-1.0, 0.0))];
    for i in 0..n {
        terms.push((MultiIndex::from_axes(n, &[i], &[i]), c(rng.gen_range(0.5..2.0), 0.0)));
        for j in i..n {
            terms.push((MultiIndex::from_axes(n, &[i, j], &[i, j]), c(rng.gen_range(0.0..0.5), 0.0)));
            let h = c(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15));
            terms.push((MultiIndex::from_axes(n, &[i, j], &[]), h));
            terms.push((MultiIndex::from_axes(n, &[], &[i, j]), h.conj()));
        }
    }
    DomainSpec::new(format!("random{idx}"), n, terms, vec![c(0.0, 0.0); n]).unwrap()
}

#[derive(Default)]
struct MetricStats {
    points: usize,
    skipped: usize,
    inverse: f64,
    rank_one: f64,
    sandwich_violations: usize,
}

fn metric_checks(psi: &FeffermanLevel, pts: &[Vec<C>], st: &mut MetricStats) {
    for p in pts {
        let jet = psi.expr.evaluate(p, 2).unwrap();
        let Ok(data) = LogMetricData::from_jet(&jet) else {
            st.skipped += 1;
            continue;
        };
        st.points += 1;
        let m = &data.metric;
        st.inverse = st.inverse.max(m.inverse_residual());
        let direct = m.g_lower.inverse().unwrap();
        st.rank_one = st.rank_one.max(direct.sub(&m.g_upper).max_abs() / direct.max_abs());
        let (lam, big_lam) = data.psi_upper.eigen_bounds();
        let (lo, hi) = m.g_upper.eigen_bounds();
        let s = data.s;
        let lower = lam * s * s / (s + data.grad_sq);
        let upper = big_lam * s;
        let tol = 1e-12 * upper;
        if lo < lower - tol || hi > upper + tol {
            st.sandwich_violations += 1;
        }
    }
}

fn metric_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut st = MetricStats::default();
    for idx in 0..50 {
        let spec = random_spsh_polynomial(&mut rng, idx);
        let pts = interior_points(&spec, 10, 2.0, 0.0, &mut rng);
        metric_checks(&FeffermanLevel::base(spec), &pts, &mut st);
    }
    let random_points = st.points;
    let mut per_domain = Vec::new();
    for (name, params, t) in [
        ("ball", vec![2.0], 0.0),
        ("ellipsoid", vec![1.0, 2.0], 0.0),
        ("egg", vec![2.0], 0.0),
        // weakly psh defining function: made strictly psh near the boundary
        ("tube", vec![1.0], 1.0),
        ("perturbed_ball", vec![0.05], 0.0),
    ] {
        let spec = catalog(name, &params).unwrap();
        let psi = spsh_adjust(&FeffermanLevel::base(spec.clone()), t).unwrap();
        let before = (st.points, st.skipped);
        let pts = interior_points(&spec, 20, 1.0, 0.0, &mut rng);
        metric_checks(&psi, &pts, &mut st);
        per_domain.push(format!("{name} {}/{}", st.points - before.0, st.points - before.0 + st.skipped - before.1));
    }
    let enough = random_points >= 450 && st.points - random_points >= 60;
    let pass = enough && st.inverse <= 1e-10 && st.rank_one <= 1e-9 && st.sandwich_violations == 0;
    outcome(
        pass,
        format!(
            "{random_points} points on 50 random potentials, catalog used/sampled [{}]: |GH-I| {:.2e}, rank-one vs direct {:.2e}, sandwich violations {}",
            per_domain.join(", "),
            st.inverse,
            st.rank_one,
            st.sandwich_violations
        ),
    )
}

fn rank_one_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    for (name, params) in [("ellipsoid", vec![1.0, 2.0]), ("perturbed_ball", vec![0.05])] {
        let spec = catalog(name, &params).unwrap();
        let leaf = PotentialExpr::leaf(spec.clone());
        let pot = leaf.neg_log_neg();
        for p in interior_points(&spec, 20, 1.0, 0.0, &mut rng) {
            let a = curvature_via_rank_one(&leaf, &p, 4).unwrap();
            let b = curvature_tensor(&pot, &p, 4).unwrap();
            let scale = b.max_abs();
            for (x, y) in a.entries().iter().zip(b.entries()) {
                // components far below the tensor scale are compared at that scale
                let denom = x.norm().max(y.norm()).max(1e-6 * scale);
                worst = worst.max((x - y).norm() / denom);
            }
        }
    }
    outcome(worst <= 1e-8, format!("40 points: max componentwise relative difference {worst:.2e}"))
}

fn sweep(name: &str, params: &[f64]) -> AsymptoticsReport {
    let spec = catalog(name, params).unwrap();
    let q = spec.boundary_project(&spec.default_seed()).unwrap();
    let cfg = SweepConfig { level: 3, ..Default::default() };
    ray_sweep(&spec, &q, &cfg).unwrap()
}

fn series(o: &SeriesOutcome) -> String {
    match o.value() {
        Some(v) => format!("{v:.3} {}", o.label()),
        None => o.label().to_string(),
    }
}

fn order_of_vanishing(rep: &AsymptoticsReport) -> Outcome {
    let pass = rep.levels.iter().all(|l| l.j_decay.passed());
    let parts: Vec<String> = rep.levels.iter().map(|l| format!("l={} {}", l.l, series(&l.j_decay))).collect();
    outcome(pass, format!("{}: {}", rep.domain, parts.join(", ")))
}

fn gradient_bound(rep: &AsymptoticsReport) -> Outcome {
    let pass = rep.levels.iter().all(|l| l.grad_f_growth.passed());
    let parts: Vec<String> = rep
        .levels
        .iter()
        .map(|l| match l.grad_f_variation {
            Some(v) => format!("l={} growth {} (max/min {v:.2})", l.l, series(&l.grad_f_growth)),
            None => format!("l={} {}", l.l, series(&l.grad_f_growth)),
        })
        .collect();
    outcome(pass, format!("{}: {}", rep.domain, parts.join(", ")))
}

fn deviation_decay(reps: &[&AsymptoticsReport]) -> Outcome {
    let pass = reps.iter().all(|r| r.deviation_slope.passed() && r.deviation_shrink.passed());
    let parts: Vec<String> = reps
        .iter()
        .map(|r| format!("{}: slope {}, shrink {}", r.domain, series(&r.deviation_slope), series(&r.deviation_shrink)))
        .collect();
    outcome(pass, parts.join("; "))
}

/// Wirtinger partial from nested five-point stencils in the real coordinates,
/// enumerated with an odometer over stencil offsets.
fn fd_partial(f: &dyn Fn(&[C]) -> f64, p: &[C], alpha: &[u32], beta: &[u32], h: f64) -> C {
    let mut factors: Vec<(usize, C, C)> = Vec::new(); // (axis, weight of d/dx, weight of d/dy)
    for k in 0..p.len() {
        for _ in 0..alpha[k] {
            factors.push((k, C::new(0.5, 0.0), C::new(0.0, -0.5)));
        }
        for _ in 0..beta[k] {
            factors.push((k, C::new(0.5, 0.0), C::new(0.0, 0.5)));
        }
    }
    let d = factors.len();
    const OFF: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
    const W: [f64; 4] = [1.0, -8.0, 8.0, -1.0];
    let mut total = C::new(0.0, 0.0);
    for choice in 0..(1usize << d) {
        let mut coef = C::new(1.0, 0.0);
        for (b, &(_, cx, cy)) in factors.iter().enumerate() {
            coef *= if choice >> b & 1 == 0 { cx } else { cy };
        }
        let mut sum = 0.0;
        for odo in 0..4usize.pow(d as u32) {
            let mut q = p.to_vec();
            let mut w = 1.0;
            let mut code = odo;
            for (b, &(k, _, _)) in factors.iter().enumerate() {
                let s = code % 4;
                code /= 4;
                w *= W[s];
                if choice >> b & 1 == 0 {
                    q[k].re += OFF[s] * h;
                } else {
                    q[k].im += OFF[s] * h;
                }
            }
            sum += w * f(&q);
        }
        total += coef * sum / (12.0 * h).powi(d as i32);
    }
    total
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let b: Vec<C> = (0..n * n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    HermitianMatrix::from_fn(n, |i, j| (0..n).map(|k| b[i * n + k] * b[j * n + k].conj()).sum()).unwrap()
}

fn ad_soundness() -> Outcome {
    let spec = catalog("ellipsoid", &[1.0, 2.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let pts = interior_points(&spec, 20, 1.0, 0.0, &mut rng);
    let f = |z: &[C]| -(-spec.evaluate(z)).ln();
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in &pts {
        let jet = PotentialExpr::leaf(spec.clone()).neg_log_neg().jet(p, 3).unwrap();
        // stencil width scaled to the distance from the boundary
        let h = 1e-2 * (-spec.evaluate(p)).min(0.25);
        for a0 in 0..=3u32 {
            for a1 in 0..=3 - a0 {
                for b0 in 0..=3 - a0 - a1 {
                    for b1 in 0..=3 - a0 - a1 - b0 {
                        if a0 + a1 + b0 + b1 == 0 {
                            continue;
                        }
                        let (alpha, beta) = ([a0, a1], [b0, b1]);
                        let ad = jet.extract_partial(&MultiIndex::new(alpha.to_vec(), beta.to_vec())).unwrap();
                        // one Richardson step on top of the fourth-order stencils
                        let coarse = fd_partial(&f, p, &alpha, &beta, h);
                        let fine = fd_partial(&f, p, &alpha, &beta, h / 2.0);
                        let fd = (fine * 16.0 - coarse) / 15.0;
                        worst = worst.max((ad - fd).norm() / ad.norm().max(1.0));
                        count += 1;
                    }
                }
            }
        }
    }

    let mut sqrt_err = 0.0f64;
    let mut eig_err = 0.0f64;
    let mut bracket_ok = true;
    let mut trace_ok = true;
    for trial in 0..60 {
        let n = 1 + trial % 4;
        let a = random_hermitian(&mut rng, n);
        let r = a.sqrt_psd().unwrap();
        let rr = HermitianMatrix::from_entries(n, r.matmul(&r)).unwrap();
        sqrt_err = sqrt_err.max(rr.sub(&a).max_abs() / a.max_abs());
        let (lo, hi) = a.eigen_bounds();
        for _ in 0..20 {
            let v: Vec<C> = (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let rq = a.quad_form(&v) / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            bracket_ok &= rq >= lo - 1e-12 * hi.abs().max(1.0) && rq <= hi + 1e-12 * hi.abs().max(1.0);
        }
        if n == 2 {
            // closed-form eigenvalues of a 2x2 Hermitian matrix
            let (p, q, s) = (a.get(0, 0).re, a.get(1, 1).re, a.get(0, 1).norm());
            let disc = (((p - q) / 2.0).powi(2) + s * s).sqrt();
            let m = (p + q) / 2.0;
            eig_err = eig_err.max((lo - (m - disc)).abs().max((hi - (m + disc)).abs()) / a.max_abs());
        }
        trace_ok &= a.trace_bound_check();
    }
    let indefinite = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
    trace_ok &= !indefinite.trace_bound_check();

    let pass = worst <= 1e-6 && sqrt_err <= 1e-10 && eig_err <= 1e-10 && bracket_ok && trace_ok;
    outcome(
        pass,
        format!(
            "{count} partials at 20 points: max relative error {worst:.2e}; hermitian: sqrt {sqrt_err:.2e}, 2x2 eigen {eig_err:.2e}, bracket {bracket_ok}, trace bound {trace_ok}"
        ),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ake"))
            .args(["verify", "--domain", "ball", "--seed", "7"])
            .output()
            .expect("run ake")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let codes = (a.status.code(), b.status.code());
    outcome(same && codes == (Some(0), Some(0)), format!("identical reports {same}, exit codes {codes:?}"))
}

fn main() {
    let mut failed = 0;
    let mut report = |num: usize, title: &str, limit: Option<u64>, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = run();
        let el = t.elapsed();
        let in_time = limit.is_none_or(|s| el <= Duration::from_secs(s));
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map(|s| format!(" (limit {s} s)")).unwrap_or_default();
        println!(
            "criterion {num} [{}] {title}: {} [{:.2} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            el.as_secs_f64()
        );
    };

    report(1, "ball exactness", Some(10), &mut ball_exactness);
    report(2, "ball curvature", Some(30), &mut ball_curvature);
    report(3, "metric consistency and sandwich", Some(30), &mut metric_consistency);
    report(4, "rank-one curvature formula", Some(60), &mut rank_one_formula);

    let mut ell = None;
    report(5, "order of vanishing", Some(120), &mut || {
        let rep = sweep("ellipsoid", &[1.0, 2.0]);
        let o = order_of_vanishing(&rep);
        ell = Some(rep);
        o
    });
    let ell = ell.expect("sweep ran");
    let pert = sweep("perturbed_ball", &[0.05]);
    report(6, "gradient bound surrogate", None, &mut || gradient_bound(&ell));
    report(7, "deviation decay at desk scale", None, &mut || deviation_decay(&[&ell, &pert]));
    report(8, "AD soundness and hermitian oracles", None, &mut ad_soundness);
    report(9, "determinism", None, &mut determinism);

    // same measurements on a domain with a non-degenerate expansion
    let info5 = order_of_vanishing(&pert);
    let info6 = gradient_bound(&pert);
    println!("info: criterion 5 on {}", info5.detail);
    println!("info: criterion 6 on {}", info6.detail);

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
