//! `key = value` experiment configs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use wcauchy::weights::ScanPolicy;
use wcauchy::{make_weight_family, Complex64, FormalSeries, SpaceConfig};

const KEYS: &[&str] = &[
    "p",
    "degree",
    "beta.family",
    "delta.family",
    "scan.nmax",
    "scan.window",
    "scan.threshold",
    "i",
    "M",
    "k",
    "N",
    "q",
    "K",
    "lambda",
    "imax",
    "series.f",
    "series.g",
];

#[derive(Debug, Clone)]
pub struct Config {
    pub p: f64,
    pub degree: usize,
    pub beta_family: String,
    pub delta_family: String,
    pub scan: ScanPolicy,
    pub i: usize,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub q: Option<f64>,
    pub krylov_k: Option<usize>,
    pub lambda: Option<Complex64>,
    pub imax: Option<usize>,
    pub series_f: Option<PathBuf>,
    pub series_g: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            p: 2.0,
            degree: 32,
            beta_family: "one".into(),
            delta_family: "one".into(),
            scan: ScanPolicy::default(),
            i: 0,
            m: None,
            k: None,
            n: None,
            q: None,
            krylov_k: None,
            lambda: None,
            imax: None,
            series_f: None,
            series_g: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| anyhow!("config key `{key}`: cannot parse `{raw}`: {e}"))
}

fn parse_complex(raw: &str) -> Result<Complex64> {
    let parts: Vec<&str> = raw.split_whitespace().collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_num("lambda", re)?, 0.0)),
        [re, im] => Ok(Complex64::new(
            parse_num("lambda", re)?,
            parse_num("lambda", im)?,
        )),
        _ => bail!("config key `lambda`: expected `re` or `re im`, got `{raw}`"),
    }
}

/// Relative paths resolve against the config file's directory.
fn resolve(base: &Path, raw: &str) -> PathBuf {
    let path = Path::new(raw);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

impl Config {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                bail!("config line {}: unknown key `{key}`", lineno + 1);
            }
            if seen.insert(key.to_string(), value.to_string()).is_some() {
                bail!("config line {}: duplicate key `{key}`", lineno + 1);
            }
        }

        let mut cfg = Self::default();
        for (key, value) in &seen {
            let v = value.as_str();
            match key.as_str() {
                "p" => cfg.p = parse_num(key, v)?,
                "degree" => cfg.degree = parse_num(key, v)?,
                "beta.family" => cfg.beta_family = family_path(base, v),
                "delta.family" => cfg.delta_family = family_path(base, v),
                "scan.nmax" => cfg.scan.n_max = parse_num(key, v)?,
                "scan.window" => cfg.scan.window = parse_num(key, v)?,
                "scan.threshold" => cfg.scan.divergence_threshold = parse_num(key, v)?,
                "i" => cfg.i = parse_num(key, v)?,
                "M" => cfg.m = Some(parse_num(key, v)?),
                "k" => cfg.k = Some(parse_num(key, v)?),
                "N" => cfg.n = Some(parse_num(key, v)?),
                "q" => cfg.q = Some(parse_num(key, v)?),
                "K" => cfg.krylov_k = Some(parse_num(key, v)?),
                "lambda" => cfg.lambda = Some(parse_complex(v)?),
                "imax" => cfg.imax = Some(parse_num(key, v)?),
                "series.f" => cfg.series_f = Some(resolve(base, v)),
                "series.g" => cfg.series_g = Some(resolve(base, v)),
                _ => unreachable!("key list and match arms disagree"),
            }
        }
        cfg.scan.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Weight tables long enough for both the series and the scans.
    pub fn space(&self) -> Result<SpaceConfig> {
        let n_max = self.scan.n_max.max(self.degree);
        let beta = make_weight_family(&self.beta_family, n_max)?;
        let delta = make_weight_family(&self.delta_family, n_max)?;
        Ok(SpaceConfig::new(self.p, beta, delta, self.degree)?)
    }

    /// Explicit `q`, else the conjugate of `p` when `p > 1`.
    pub fn holder_q(&self) -> Option<f64> {
        self.q
            .or_else(|| (self.p > 1.0 && self.p.is_finite()).then(|| self.p / (self.p - 1.0)))
    }

    pub fn series(&self, which: &str) -> Result<FormalSeries> {
        let path = match which {
            "f" => self.series_f.as_ref(),
            _ => self.series_g.as_ref(),
        }
        .ok_or_else(|| anyhow!("config key `series.{which}` is required"))?;
        Ok(FormalSeries::load(path, self.degree)?)
    }
}

fn family_path(base: &Path, spec: &str) -> String {
    match spec.strip_prefix("custom:") {
        Some(path) => format!("custom:{}", resolve(base, path).display()),
        None => spec.to_string(),
    }
}
