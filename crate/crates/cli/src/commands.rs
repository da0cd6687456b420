//! The five subcommands. Each returns the rendered output and whether the run
//! counts as a numerical success.

use std::fmt::Write as _;

use ake_core::asymptotics::suite::{verify_suite, SuiteConfig};
use ake_core::asymptotics::{fmt_num, ray_sweep, SweepConfig};
use ake_core::domains::{format_point, DomainSpec, CATALOG};
use ake_core::fefferman::{iterate, spsh_adjust, FeffermanLevel};
use ake_core::hermitian::HermitianMatrix;
use ake_core::kahler::{
    curvature_from_jet, deviation, metric_from_potential, neg_log_neg, sectional, DeviationNormalization,
    RankOneCurvature,
};
use ake_core::Error;
use num_complex::Complex64;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn numeric(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn params_text(spec: &DomainSpec) -> String {
    let p: Vec<String> = spec.params().iter().map(|x| fmt_num(*x)).collect();
    if p.is_empty() { "none".into() } else { p.join(",") }
}

fn order_text(order: Option<usize>) -> String {
    order.map(|o| o.to_string()).unwrap_or_else(|| "auto".into())
}

fn check_order(cfg: &RunConfig, required: usize) -> Result<(), CliError> {
    match cfg.order {
        Some(o) if o < required => Err(numeric(Error::InsufficientOrder { required, available: o })),
        _ => Ok(()),
    }
}

/// Levels `0..=l` with the spsh adjustment applied to each.
fn levels_upto(cfg: &RunConfig, l: usize) -> Result<Vec<FeffermanLevel>, CliError> {
    let mut out = vec![FeffermanLevel::base(cfg.spec.clone())];
    if l > 0 {
        out.extend(iterate(&cfg.spec, l).map_err(numeric)?);
    }
    out.iter().map(|lv| spsh_adjust(lv, cfg.spsh_t).map_err(numeric)).collect()
}

fn level_in_range(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    let n = cfg.spec.n();
    let l = cfg.level.unwrap_or(default);
    if l > n + 1 {
        return Err(CliError::Usage(format!("--level must lie in 0..={}, got {l}", n + 1)));
    }
    Ok(l)
}

fn header_kv(cfg: &RunConfig, s: &mut String, extra: &[(&str, String)]) {
    writeln!(s, "domain = {}", cfg.spec.name()).unwrap();
    writeln!(s, "n = {}", cfg.spec.n()).unwrap();
    writeln!(s, "params = {}", params_text(&cfg.spec)).unwrap();
    for (k, v) in extra {
        writeln!(s, "{k} = {v}").unwrap();
    }
    writeln!(s, "spsh_t = {}", fmt_num(cfg.spsh_t)).unwrap();
    writeln!(s, "order = {}", order_text(cfg.order)).unwrap();
}

pub fn domains() -> Output {
    let mut s = String::from("name            parameters            defaults\n");
    for (name, desc, defaults) in CATALOG {
        writeln!(s, "{name:<15} {desc:<21} {defaults}").unwrap();
    }
    Output { text: s, ok: true }
}

pub fn iterate_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    let l = level_in_range(cfg, 1)?;
    check_order(cfg, 2 * l + 2)?;
    let levels = levels_upto(cfg, l)?;
    let j_exprs: Vec<_> = levels.iter().map(|lv| lv.j_expr()).collect();
    let points = if cfg.points.is_empty() { vec![cfg.spec.interior_witness().to_vec()] } else { cfg.points.clone() };

    struct Row {
        point: usize,
        l: usize,
        phi: f64,
        j: f64,
        f: f64,
        status: String,
    }
    let mut rows = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for (lv, je) in levels.iter().zip(&j_exprs) {
            let r = lv.phi(p).and_then(|phi| Ok((phi, je.evaluate(p, 0)?.value().re)));
            rows.push(match r {
                Ok((phi, j)) => Row { point: i, l: lv.l, phi, j, f: if j > 0.0 { j.ln() } else { f64::NAN }, status: "ok".into() },
                Err(e) => Row { point: i, l: lv.l, phi: f64::NAN, j: f64::NAN, f: f64::NAN, status: e.to_string() },
            });
        }
    }
    let ok = rows.iter().all(|r| r.status == "ok");

    let mut s = String::new();
    match cfg.format {
        Format::Csv => {
            s.push_str("point,l,phi,J,F,status\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{},\"{}\"", r.point, r.l, fmt_num(r.phi), fmt_num(r.j), fmt_num(r.f), r.status.replace('"', "'")).unwrap();
            }
        }
        Format::Kv => {
            header_kv(cfg, &mut s, &[("level", l.to_string())]);
            for (i, p) in points.iter().enumerate() {
                writeln!(s, "point.{i} = {}", format_point(p)).unwrap();
            }
            for r in &rows {
                let pre = format!("point.{}.l{}", r.point, r.l);
                writeln!(s, "{pre}.phi = {}", fmt_num(r.phi)).unwrap();
                writeln!(s, "{pre}.J = {}", fmt_num(r.j)).unwrap();
                writeln!(s, "{pre}.F = {}", fmt_num(r.f)).unwrap();
                writeln!(s, "{pre}.status = {}", r.status).unwrap();
            }
        }
        Format::Text => {
            writeln!(s, "iteration on {} (params {}), levels 0..={l}, spsh_t {}, order {}", cfg.spec.name(), params_text(&cfg.spec), fmt_num(cfg.spsh_t), order_text(cfg.order)).unwrap();
            for (i, p) in points.iter().enumerate() {
                writeln!(s, "point {i} = {}", format_point(p)).unwrap();
            }
            writeln!(s, "{:>5} {:>2} {:>24} {:>24} {:>24}  status", "point", "l", "phi", "J", "F").unwrap();
            for r in &rows {
                writeln!(s, "{:>5} {:>2} {:>24} {:>24} {:>24}  {}", r.point, r.l, fmt_num(r.phi), fmt_num(r.j), fmt_num(r.f), r.status).unwrap();
            }
        }
    }
    Ok(Output { text: s, ok })
}

fn unit(n: usize, i: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[i.min(n - 1)] = Complex64::new(1.0, 0.0);
    e
}

fn cnum(z: Complex64) -> String {
    format!("{},{}", fmt_num(z.re), fmt_num(z.im))
}

fn matrix_lines(name: &str, m: &HermitianMatrix, out: &mut Vec<(String, String)>) {
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.push((format!("{name}.{i}.{j}"), cnum(m.get(i, j))));
        }
    }
}

pub fn curvature_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    let n = cfg.spec.n();
    let l = level_in_range(cfg, 0)?;
    check_order(cfg, 4 + 2 * l)?;
    let level = levels_upto(cfg, l)?.pop().expect("level 0 always present");
    let p = cfg.points.first().cloned().unwrap_or_else(|| cfg.spec.interior_witness().to_vec());
    let v = cfg.v.clone().unwrap_or_else(|| unit(n, 0));
    let w = cfg.w.clone().unwrap_or_else(|| unit(n, 1));

    let psi = level.expr.evaluate(&p, 4).map_err(numeric)?;
    let pot = neg_log_neg(&psi).map_err(numeric)?;
    let m = metric_from_potential(&pot).map_err(numeric)?;
    if !m.positive_definite {
        return Err(numeric(Error::NotPositiveDefinite { min_eigenvalue: m.min_eigenvalue }));
    }
    let r = curvature_from_jet(&pot).map_err(numeric)?;
    let proof = deviation(&r, &m, &v, &w, DeviationNormalization::Proof).map_err(numeric)?;
    let display = deviation(&r, &m, &v, &w, DeviationNormalization::Display).map_err(numeric)?;
    let hv = sectional(&r, &m, &v).map_err(numeric)?;
    let hw = sectional(&r, &m, &w).map_err(numeric)?;
    // t2/t3 need a strictly psh potential
    let parts = RankOneCurvature::from_jet(&psi).ok().and_then(|c| c.decomposition(&v, &w, DeviationNormalization::Proof).ok());

    let mut items: Vec<(String, String)> = Vec::new();
    matrix_lines("g_lower", &m.g_lower, &mut items);
    matrix_lines("g_upper", &m.g_upper, &mut items);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for q in 0..n {
                    items.push((format!("R.{i}.{j}.{k}.{q}"), cnum(r.get(i, j, k, q))));
                }
            }
        }
    }
    items.push(("bis".into(), fmt_num(proof.bis)));
    items.push(("H_v".into(), fmt_num(hv)));
    items.push(("H_w".into(), fmt_num(hw)));
    items.push(("deviation".into(), fmt_num(proof.value)));
    items.push(("deviation_display".into(), fmt_num(display.value)));
    items.push(("t1".into(), fmt_num(proof.t1)));
    if let Some(d) = parts {
        items.push(("t2".into(), fmt_num(d.t2.unwrap_or(f64::NAN))));
        items.push(("t3".into(), fmt_num(d.t3.unwrap_or(f64::NAN))));
    }

    let mut s = String::new();
    match cfg.format {
        Format::Csv => {
            s.push_str("quantity,value\n");
            for (k, v) in &items {
                writeln!(s, "{k},\"{v}\"").unwrap();
            }
        }
        Format::Kv | Format::Text => {
            if cfg.format == Format::Text {
                writeln!(s, "curvature of -log(-phi^({l})) on {}", cfg.spec.name()).unwrap();
            }
            header_kv(
                cfg,
                &mut s,
                &[("level", l.to_string()), ("point", format_point(&p)), ("v", format_point(&v)), ("w", format_point(&w))],
            );
            for (k, v) in &items {
                writeln!(s, "{k} = {v}").unwrap();
            }
        }
    }
    Ok(Output { text: s, ok: true })
}

fn boundary_point(cfg: &RunConfig) -> Result<Vec<Complex64>, CliError> {
    match &cfg.q {
        Some(q) => Ok(q.clone()),
        None => cfg.spec.boundary_project(&cfg.spec.default_seed()).map_err(numeric),
    }
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<(Output, Option<String>), CliError> {
    let level = cfg.sweep_level()?;
    let ray = cfg.checked_ray()?;
    check_order(cfg, 4 + 2 * level)?;
    let q = boundary_point(cfg)?;
    let sc = SweepConfig {
        level,
        ray,
        directions: cfg.dirs,
        seed: cfg.seed,
        spsh_t: cfg.spsh_t,
        normalization: DeviationNormalization::Proof,
    };
    let rep = ray_sweep(&cfg.spec, &q, &sc).map_err(numeric)?;
    let ok = rep.levels.iter().all(|l| l.j_decay.passed() && l.grad_f_growth.passed())
        && rep.deviation_slope.passed()
        && rep.deviation_shrink.passed();
    let kv = || format!("order = {}\n{}", order_text(cfg.order), rep.to_kv());
    let (text, csv_file) = match (&cfg.out, cfg.format) {
        (Some(_), Format::Kv) => (kv(), Some(rep.to_csv())),
        (Some(_), _) => {
            let full = rep.to_text();
            let summary = full.split(ake_core::asymptotics::CSV_HEADER).next().unwrap_or("").to_string();
            (summary, Some(rep.to_csv()))
        }
        (None, Format::Csv) => (rep.to_csv(), None),
        (None, Format::Kv) => (kv(), None),
        (None, Format::Text) => (rep.to_text(), None),
    };
    Ok((Output { text, ok }, csv_file))
}

pub fn verify_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut sc = SuiteConfig::new(cfg.spec.clone());
    sc.level = cfg.sweep_level()?;
    sc.ray = cfg.checked_ray()?;
    sc.q = cfg.q.clone();
    sc.directions = cfg.dirs;
    sc.seed = cfg.seed;
    sc.order = cfg.order;
    sc.spsh_t = cfg.spsh_t;
    sc.probes = cfg.probes;
    let rep = verify_suite(&sc);
    let text = match cfg.format {
        Format::Text => rep.to_text(),
        Format::Kv => rep.to_kv(),
        Format::Csv => {
            let mut s = String::from("check,status,detail\n");
            for c in &rep.checks {
                writeln!(s, "{},{},\"{}\"", c.name, c.status.label(), c.detail.replace('"', "'")).unwrap();
            }
            s
        }
    };
    Ok(Output { text, ok: rep.passed() })
}
