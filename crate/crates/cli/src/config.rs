//! Run configuration: command-line flags layered over an optional flat
//! `key = value` config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use ake_core::asymptotics::DEFAULT_DIRECTIONS;
use ake_core::asymptotics::suite::DEFAULT_PROBES;
use ake_core::domains::{catalog, parse_point, DomainSpec, RayParams};
use clap::Args;
use num_complex::Complex64;

use crate::CliError;

/// Flags shared by every subcommand. Values stay as text until resolution so
/// that flags and config-file entries go through the same parser.
#[derive(Debug, Clone, Default, Args)]
pub struct RawArgs {
    /// Flat `key = value` file; explicit flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Catalog domain name (see `ake domains`)
    #[arg(long)]
    pub domain: Option<String>,
    /// Comma-separated catalog parameters
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Polynomial defining function in the domain file format
    #[arg(long = "spec-file")]
    pub spec_file: Option<String>,
    /// Iteration level l
    #[arg(long)]
    pub level: Option<String>,
    /// Point as re1,im1,...; may be repeated for `iterate`
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
    /// Boundary point of the ray; projected from a default seed when absent
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// First direction, as re1,im1,...
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Second direction, as re1,im1,...
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long)]
    pub tmin: Option<String>,
    #[arg(long)]
    pub tmax: Option<String>,
    /// Number of ray points
    #[arg(long)]
    pub count: Option<String>,
    /// Number of direction pairs
    #[arg(long)]
    pub dirs: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Cap on the jet order of the defining function
    #[arg(long)]
    pub order: Option<String>,
    /// Strict plurisubharmonicity adjustment phi (1 + t phi)
    #[arg(long = "spsh-t")]
    pub spsh_t: Option<String>,
    /// Interior sample points per pointwise check in `verify`
    #[arg(long)]
    pub probes: Option<String>,
    /// Output path (sweep: the CSV table)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: text, csv or kv
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Kv,
}

/// Fully parsed configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: DomainSpec,
    pub level: Option<usize>,
    pub points: Vec<Vec<Complex64>>,
    pub q: Option<Vec<Complex64>>,
    pub v: Option<Vec<Complex64>>,
    pub w: Option<Vec<Complex64>>,
    pub ray: RayParams,
    pub dirs: usize,
    pub seed: u64,
    pub order: Option<usize>,
    pub spsh_t: f64,
    pub probes: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected `key = value`", path.display(), i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "domain", "params", "spec-file", "level", "point", "q", "v", "w", "tmin", "tmax", "count", "dirs", "seed", "order",
    "spsh-t", "probes", "out", "format",
];

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| usage(format!("--{key}: cannot parse `{s}`: {e}")))
}

fn parse_vec(key: &str, s: &str, n: usize) -> Result<Vec<Complex64>, CliError> {
    let p = parse_point(s).map_err(|e| usage(format!("--{key}: {e}")))?;
    if p.len() != n {
        return Err(usage(format!("--{key}: expected {} reals for dimension {n}, got {}", 2 * n, 2 * p.len())));
    }
    Ok(p)
}

impl RawArgs {
    /// Merges the config file under the flags and parses every value.
    pub fn resolve(mut self) -> Result<RunConfig, CliError> {
        if let Some(path) = self.config.clone() {
            let file = read_config_file(&path)?;
            for key in file.keys() {
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return Err(usage(format!("{}: unknown key `{key}`", path.display())));
                }
            }
            let get = |k: &str| file.get(k).cloned();
            macro_rules! fill {
                ($field:ident, $key:literal) => {
                    if self.$field.is_none() {
                        self.$field = get($key);
                    }
                };
            }
            fill!(domain, "domain");
            fill!(params, "params");
            fill!(spec_file, "spec-file");
            fill!(level, "level");
            fill!(q, "q");
            fill!(v, "v");
            fill!(w, "w");
            fill!(tmin, "tmin");
            fill!(tmax, "tmax");
            fill!(count, "count");
            fill!(dirs, "dirs");
            fill!(seed, "seed");
            fill!(order, "order");
            fill!(spsh_t, "spsh-t");
            fill!(probes, "probes");
            fill!(format, "format");
            if self.point.is_empty() {
                self.point.extend(get("point"));
            }
            if self.out.is_none() {
                self.out = get("out").map(PathBuf::from);
            }
        }

        let spec = match (&self.domain, &self.spec_file) {
            (Some(_), Some(_)) => return Err(usage("give either --domain or --spec-file, not both")),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
                DomainSpec::parse(&text).map_err(|e| usage(e.to_string()))?
            }
            (domain, None) => {
                let name = domain.as_deref().unwrap_or("ball");
                let params: Vec<f64> = match &self.params {
                    Some(s) => s
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| parse_num::<f64>("params", t))
                        .collect::<Result<_, _>>()?,
                    None => Vec::new(),
                };
                catalog(name, &params).map_err(|e| usage(e.to_string()))?
            }
        };
        let n = spec.n();

        let level = self.level.as_deref().map(|s| parse_num::<usize>("level", s)).transpose()?;
        let points = self.point.iter().map(|s| parse_vec("point", s, n)).collect::<Result<Vec<_>, _>>()?;
        let q = self.q.as_deref().map(|s| parse_vec("q", s, n)).transpose()?;
        let v = self.v.as_deref().map(|s| parse_vec("v", s, n)).transpose()?;
        let w = self.w.as_deref().map(|s| parse_vec("w", s, n)).transpose()?;

        let mut ray = RayParams::default();
        if let Some(s) = &self.tmin {
            ray.t_min = parse_num("tmin", s)?;
        }
        if let Some(s) = &self.tmax {
            ray.t_max = parse_num("tmax", s)?;
        }
        if let Some(s) = &self.count {
            ray.count = parse_num("count", s)?;
        }
        let dirs = self.dirs.as_deref().map(|s| parse_num("dirs", s)).transpose()?.unwrap_or(DEFAULT_DIRECTIONS);
        let seed = self.seed.as_deref().map(|s| parse_num("seed", s)).transpose()?.unwrap_or(0);
        let order = self.order.as_deref().map(|s| parse_num("order", s)).transpose()?;
        let spsh_t = self.spsh_t.as_deref().map(|s| parse_num("spsh-t", s)).transpose()?.unwrap_or(0.0);
        let probes = self.probes.as_deref().map(|s| parse_num("probes", s)).transpose()?.unwrap_or(DEFAULT_PROBES);
        let format = match self.format.as_deref() {
            None | Some("text") => Format::Text,
            Some("csv") => Format::Csv,
            Some("kv") => Format::Kv,
            Some(other) => return Err(usage(format!("--format: expected text, csv or kv, got `{other}`"))),
        };
        if !(spsh_t >= 0.0 && f64::is_finite(spsh_t)) {
            return Err(usage(format!("--spsh-t must be a finite value >= 0, got {spsh_t}")));
        }
        Ok(RunConfig { spec, level, points, q, v, w, ray, dirs, seed, order, spsh_t, probes, out: self.out, format })
    }
}

impl RunConfig {
    /// Level for sweeps and verification: defaults to `n + 1`, must lie in `1..=n+1`.
    pub fn sweep_level(&self) -> Result<usize, CliError> {
        let n = self.spec.n();
        let l = self.level.unwrap_or(n + 1);
        if l == 0 || l > n + 1 {
            return Err(usage(format!("--level must lie in 1..={}, got {l}", n + 1)));
        }
        Ok(l)
    }

    /// Ray parameters with `t_min < t_max` and at least three points.
    pub fn checked_ray(&self) -> Result<RayParams, CliError> {
        self.ray.validate().map_err(|e| usage(e.to_string()))?;
        if self.ray.count < 3 {
            return Err(usage(format!("--count must be at least 3, got {}", self.ray.count)));
        }
        if self.ray.t_min >= self.ray.t_max {
            return Err(usage("--tmin must be smaller than --tmax"));
        }
        if self.dirs == 0 {
            return Err(usage("--dirs must be positive"));
        }
        Ok(self.ray)
    }
}
