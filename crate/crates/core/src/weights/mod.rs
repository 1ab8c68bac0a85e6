//! Weight sequences and the scalar condition constants built from them.
//!
//! A [`WeightSequence`] stores `ln w(n)` as its primary table. Factorial-type
//! families leave the double range near `n = 171`, so every weight ratio is
//! evaluated from log differences and only exponentiated at the end.

mod conditions;

pub(crate) use conditions::SeriesScan;

pub use conditions::{
    holder_constant, p1_product_bound, p1_tail_sum, shift_norm_constant, tail_constant,
    ConditionReport, ScanPolicy,
};

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A positive weight sequence `w(0..=n_max)` with `w(0) = 1`.
#[derive(Clone, PartialEq)]
pub struct WeightSequence {
    values: Vec<f64>,
    logcum: Vec<f64>,
    family: String,
}

impl fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSequence")
            .field("family", &self.family)
            .field("n_max", &self.n_max())
            .finish()
    }
}

impl WeightSequence {
    /// Builds a sequence from its log table. `logs[0]` must be exactly zero.
    pub fn from_logs(logs: Vec<f64>, family: impl Into<String>) -> Result<Self> {
        let family = family.into();
        if logs.is_empty() {
            return Err(Error::InvalidFamily {
                spec: family,
                reason: "empty weight table".into(),
            });
        }
        if logs[0] != 0.0 {
            return Err(Error::InvalidFamily {
                spec: family,
                reason: format!("w(0) must be 1, got exp({})", logs[0]),
            });
        }
        if let Some(n) = logs.iter().position(|l| !l.is_finite()) {
            return Err(Error::InvalidFamily {
                spec: family,
                reason: format!("log weight at n={n} is not finite"),
            });
        }
        let values = logs.iter().map(|l| l.exp()).collect();
        Ok(Self {
            values,
            logcum: logs,
            family,
        })
    }

    /// Builds a sequence from explicit values. `values[0]` must be exactly 1.
    pub fn from_values(values: Vec<f64>, family: impl Into<String>) -> Result<Self> {
        let family = family.into();
        if values.first() != Some(&1.0) {
            return Err(Error::InvalidFamily {
                spec: family,
                reason: "w(0) must be exactly 1".into(),
            });
        }
        if let Some(n) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidFamily {
                spec: family,
                reason: format!("w({n}) = {} is not a positive finite number", values[n]),
            });
        }
        let logcum = values.iter().map(|v| v.ln()).collect();
        Ok(Self {
            values,
            logcum,
            family,
        })
    }

    pub fn n_max(&self) -> usize {
        self.logcum.len() - 1
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    /// `w(n)`; may be `inf` or `0` where the weight leaves the double range.
    #[inline]
    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `ln w(n)`.
    #[inline]
    pub fn log(&self, n: usize) -> f64 {
        self.logcum[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn logs(&self) -> &[f64] {
        &self.logcum
    }

    pub fn check_index(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            Err(Error::OutOfRange {
                index: n,
                n_max: self.n_max(),
            })
        } else {
            Ok(())
        }
    }

    /// `δₙ / (δₖ δ_{n-k+i})` for `i ≤ k ≤ n`, without range checks.
    ///
    /// The boundary terms `k = i` and `k = n` cancel to `1/δᵢ`, which is
    /// exactly `1.0` when `i = 0`.
    #[inline]
    /// Bitwise symmetric under `k ↔ n-k+i`.
    pub(crate) fn ratio(&self, n: usize, k: usize, i: usize) -> f64 {
        if k == i || k == n {
            if i == 0 {
                1.0
            } else {
                (-self.logcum[i]).exp()
            }
        } else {
            (self.logcum[n] - (self.logcum[k] + self.logcum[n - k + i])).exp()
        }
    }

    /// `δ_{n+shift} / (δₙ δ₁^shift)`, the gain of the `shift`-th power of the
    /// weighted shift at input degree `n`.
    #[inline]
    pub(crate) fn shift_gain(&self, n: usize, shift: usize) -> f64 {
        if shift == 0 {
            return 1.0;
        }
        (self.logcum[n + shift] - self.logcum[n] - shift as f64 * self.logcum[1]).exp()
    }
}

/// Builds one of the named weight families on `0..=n_max`.
///
/// Accepted descriptors: `one`, `poly:a`, `geometric:r`, `factorial`,
/// `invfactorial`, `custom:path` (one decimal per line, line `n` is `w(n)`).
/// A custom file is truncated to `n_max` if longer.
pub fn make_weight_family(spec: &str, n_max: usize) -> Result<WeightSequence> {
    if n_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "weight table needs n_max >= 1, got {n_max}"
        )));
    }
    let spec = spec.trim();
    let (tag, arg) = match spec.split_once(':') {
        Some((t, a)) => (t, Some(a)),
        None => (spec, None),
    };
    let invalid = |reason: String| Error::InvalidFamily {
        spec: spec.to_string(),
        reason,
    };
    let parse_arg = || -> Result<f64> {
        let a = arg.ok_or_else(|| invalid("missing parameter".into()))?;
        a.trim()
            .parse::<f64>()
            .map_err(|e| invalid(format!("bad parameter `{a}`: {e}")))
    };

    match (tag, arg) {
        ("one", None) => WeightSequence::from_logs(vec![0.0; n_max + 1], spec),
        ("poly", Some(_)) => {
            let a = parse_arg()?;
            if !a.is_finite() {
                return Err(invalid("exponent must be finite".into()));
            }
            let logs = (0..=n_max)
                .map(|n| {
                    if n == 0 {
                        0.0
                    } else {
                        a * ((n + 1) as f64).ln()
                    }
                })
                .collect();
            WeightSequence::from_logs(logs, spec)
        }
        ("geometric", Some(_)) => {
            let r = parse_arg()?;
            if !(r.is_finite() && r > 0.0) {
                return Err(invalid(format!("ratio must be positive, got {r}")));
            }
            let ln_r = r.ln();
            let logs = (0..=n_max).map(|n| n as f64 * ln_r).collect();
            WeightSequence::from_logs(logs, spec)
        }
        ("factorial", None) => WeightSequence::from_logs(log_factorials(n_max), spec),
        ("invfactorial", None) => {
            let logs = log_factorials(n_max).into_iter().map(|l| -l).collect();
            WeightSequence::from_logs(logs, spec)
        }
        ("custom", Some(path)) => load_custom(spec, Path::new(path.trim()), n_max),
        ("one" | "factorial" | "invfactorial", Some(_)) => {
            Err(invalid("family takes no parameter".into()))
        }
        ("poly" | "geometric" | "custom", None) => Err(invalid("missing parameter".into())),
        _ => Err(Error::UnknownFamily(spec.to_string())),
    }
}

/// `ln n!` for `n = 0..=n_max` by compensated cumulative summation of `ln k`.
fn log_factorials(n_max: usize) -> Vec<f64> {
    let mut acc = crate::series::NeumaierSum::default();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0.0);
    for k in 1..=n_max {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

fn load_custom(spec: &str, path: &Path, n_max: usize) -> Result<WeightSequence> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| Error::InvalidFamily {
            spec: spec.to_string(),
            reason: format!("line {}: `{line}`: {e}", lineno + 1),
        })?;
        values.push(v);
        if values.len() > n_max {
            break;
        }
    }
    if values.len() < n_max + 1 {
        return Err(Error::InvalidFamily {
            spec: spec.to_string(),
            reason: format!(
                "file holds {} weights, need {} for n_max={n_max}",
                values.len(),
                n_max + 1
            ),
        });
    }
    WeightSequence::from_values(values, spec)
}

/// `δₙ / (δₖ δ_{n-k+i})`, the coefficient weight of the `⋄ᵢ` product.
pub fn diamond_ratio(delta: &WeightSequence, n: usize, k: usize, i: usize) -> Result<f64> {
    delta.check_index(n)?;
    if !(i <= k && k <= n) {
        return Err(Error::InvalidArgument(format!(
            "diamond_ratio needs i <= k <= n, got i={i}, k={k}, n={n}"
        )));
    }
    Ok(delta.ratio(n, k, i))
}

/// The weight `β̃(n) = δ_{n+1} β(n) / (δₙ δ₁)` under which the `⋄`-shift
/// becomes the ordinary shift.
///
/// `lᵖ(β)` and `lᵖ(β̃)` are generally not unitarily equivalent, since
/// `β̃(n)/β(n)` need not be constant.
pub fn beta_tilde(beta: &WeightSequence, delta: &WeightSequence) -> Result<WeightSequence> {
    if delta.n_max() < 1 {
        return Err(Error::InvalidArgument("delta needs n_max >= 1".into()));
    }
    let n_max = beta.n_max().min(delta.n_max() - 1);
    let logs = (0..=n_max)
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                delta.log(n + 1) + beta.log(n) - delta.log(n) - delta.log(1)
            }
        })
        .collect();
    WeightSequence::from_logs(logs, format!("tilde({},{})", beta.family(), delta.family()))
}
