//! End-to-end behaviour of the `ake` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ake")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ake-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn domains_lists_the_catalog() {
    let o = ake(&["domains"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["ball", "ellipsoid", "egg", "tube", "perturbed_ball"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["iterate", "--domain", "nonesuch"][..],
        &["iterate", "--point", "1,2,3"][..],
        &["sweep", "--tmin", "0.5", "--tmax", "0.1"][..],
        &["verify", "--format", "yaml"][..],
        &["frobnicate"][..],
    ] {
        let o = ake(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn points_outside_the_domain_are_numerical_failures() {
    let o = ake(&["curvature", "--domain", "ball", "--point", "2,0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ball_curvature_is_constant() {
    let o = ake(&["curvature", "--domain", "ball", "--point", "0.1,0.2,-0.3,0", "--format", "kv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("{key} missing"))
            .trim()
            .parse()
            .unwrap()
    };
    assert!((value("H_v") + 2.0).abs() < 1e-10);
    assert!(value("deviation").abs() < 1e-10);
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let cfg = scratch("iterate.conf");
    fs::write(&cfg, "# iterate setup\ndomain = ellipsoid\nparams = 1,2\nlevel = 1\nformat = csv\n").unwrap();
    let from_file = ake(&["iterate", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success());
    let text = stdout(&from_file);
    assert!(text.starts_with("point,l,phi,J,F,status"), "{text}");
    assert_eq!(text.lines().count(), 3);

    let overridden = ake(&["iterate", "--config", cfg.to_str().unwrap(), "--level", "2"]);
    assert_eq!(stdout(&overridden).lines().count(), 4);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(ake(&["iterate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--domain", "perturbed_ball", "--level", "2", "--count", "8", "--dirs", "16", "--seed", "4"];
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    for path in [&a, &b] {
        let mut full = args.to_vec();
        full.extend(["--out", path.to_str().unwrap()]);
        assert!(ake(&full).status.success());
    }
    let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("t,neg_phi,J,"));
    assert_eq!(ta.lines().count(), 9);
}

#[test]
fn spec_file_domains_are_accepted() {
    let path = scratch("ball.poly");
    let text = stdout(&ake(&["verify", "--domain", "ball", "--format", "kv"]));
    assert!(text.contains("domain = ball"));
    let spec = ake_spec_file_for_ball();
    fs::write(&path, spec).unwrap();
    let o = ake(&["iterate", "--spec-file", path.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(ake(&["iterate", "--spec-file", path.to_str().unwrap(), "--domain", "ball"]).status.code(), Some(2));
}

fn ake_spec_file_for_ball() -> String {
    use ake_core::domains::catalog;
    catalog("ball", &[]).unwrap().to_spec_file()
}
