//! Finite-scan evaluation of the supremum and series condition constants.
//!
//! Every constant here ranges over an infinite index set. A scan visits
//! indices up to a ceiling, keeps a monotone running estimate (so the
//! reported value is always a lower bound of the true one), and decides
//! from the behaviour over the last `window` points whether the estimate
//! has stabilized.

use super::WeightSequence;
use crate::error::{Error, Result};

/// Relative change below which a running supremum counts as unchanged.
const SUP_STABLE_RTOL: f64 = 1e-12;
/// Relative size below which a series contribution counts as negligible.
const SERIES_NEGLIGIBLE_RTOL: f64 = 1e-12;
/// Fitted power-law decay exponent at or above which a series is summable.
const SUMMABLE_EXPONENT: f64 = 1.25;
/// Fitted exponent at or below which the series is treated as divergent.
const DIVERGENT_EXPONENT: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPolicy {
    pub n_max: usize,
    pub window: usize,
    pub divergence_threshold: f64,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        Self {
            n_max: 2048,
            window: 16,
            divergence_threshold: 1e12,
        }
    }
}

impl ScanPolicy {
    pub fn new(n_max: usize, window: usize, divergence_threshold: f64) -> Result<Self> {
        let policy = Self {
            n_max,
            window,
            divergence_threshold,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn with_n_max(self, n_max: usize) -> Result<Self> {
        Self::new(
            n_max,
            self.window.min(n_max.max(1)),
            self.divergence_threshold,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_max >= self.window && self.window >= 1) {
            return Err(Error::InvalidArgument(format!(
                "scan policy needs n_max >= window >= 1, got n_max={}, window={}",
                self.n_max, self.window
            )));
        }
        if self.divergence_threshold.is_nan() || self.divergence_threshold <= 0.0 {
            return Err(Error::InvalidArgument(
                "divergence threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    fn limit(&self, beta: &WeightSequence, delta: &WeightSequence) -> usize {
        self.n_max.min(beta.n_max()).min(delta.n_max())
    }
}

/// Outcome of a supremum or series scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Running maximum or partial sum; a lower estimate of the true constant.
    pub value: f64,
    pub converged: bool,
    /// Set when the scan found evidence that the constant is infinite.
    pub divergent: bool,
    /// Index attaining the supremum, or where divergence was detected.
    pub witness: Option<usize>,
    /// Inclusive index range actually scanned.
    pub scanned: (usize, usize),
}

impl ConditionReport {
    pub fn require_converged(&self, name: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged(name.to_string()))
        }
    }
}

/// Running supremum with stabilization tracking.
struct SupScan {
    window: usize,
    threshold: f64,
    flag_monotone_growth: bool,
    best: f64,
    argmax: Option<usize>,
    last_change: usize,
    count: usize,
    first: Option<usize>,
    last: usize,
    prev: f64,
    rising: usize,
    exceeded: Option<usize>,
}

impl SupScan {
    fn new(policy: &ScanPolicy, flag_monotone_growth: bool) -> Self {
        Self {
            window: policy.window,
            threshold: policy.divergence_threshold,
            flag_monotone_growth,
            best: f64::NEG_INFINITY,
            argmax: None,
            last_change: 0,
            count: 0,
            first: None,
            last: 0,
            prev: f64::NEG_INFINITY,
            rising: 0,
            exceeded: None,
        }
    }

    /// Returns false once the divergence threshold has been crossed.
    fn push(&mut self, n: usize, v: f64) -> bool {
        self.first.get_or_insert(n);
        self.last = n;
        self.count += 1;
        if v > self.best {
            let changed =
                !(self.best.is_finite() && (v - self.best) <= SUP_STABLE_RTOL * self.best.abs());
            self.best = v;
            self.argmax = Some(n);
            if changed {
                self.last_change = self.count;
            }
        }
        self.rising = if v > self.prev { self.rising + 1 } else { 0 };
        self.prev = v;
        if v.is_nan() || v > self.threshold {
            self.exceeded = Some(n);
            return false;
        }
        true
    }

    fn finish(self) -> Result<ConditionReport> {
        let first = self
            .first
            .ok_or_else(|| Error::EmptyScan("no admissible index".into()))?;
        let scanned = (first, self.last);
        if let Some(n) = self.exceeded {
            return Ok(ConditionReport {
                value: self.best,
                converged: false,
                divergent: true,
                witness: Some(n),
                scanned,
            });
        }
        let stable = self.count - self.last_change >= self.window;
        let growing = self.flag_monotone_growth && self.rising >= self.window;
        Ok(ConditionReport {
            value: self.best,
            converged: stable && !growing,
            divergent: growing,
            witness: if growing {
                Some(self.last)
            } else {
                self.argmax
            },
            scanned,
        })
    }
}

/// Partial sums of a nonnegative series, one contribution per index.
pub(crate) struct SeriesScan {
    window: usize,
    threshold: f64,
    total: f64,
    comp: f64,
    recent: Vec<(usize, f64)>,
    first: Option<usize>,
    last: usize,
    exceeded: Option<usize>,
}

impl SeriesScan {
    pub(crate) fn new(policy: &ScanPolicy) -> Self {
        Self {
            window: policy.window,
            threshold: policy.divergence_threshold,
            total: 0.0,
            comp: 0.0,
            recent: Vec::new(),
            first: None,
            last: 0,
            exceeded: None,
        }
    }

    pub(crate) fn push(&mut self, index: usize, contribution: f64) -> bool {
        self.first.get_or_insert(index);
        self.last = index;
        let t = self.total + contribution;
        if self.total.abs() >= contribution.abs() {
            self.comp += (self.total - t) + contribution;
        } else {
            self.comp += (contribution - t) + self.total;
        }
        self.total = t;
        self.recent.push((index, contribution));
        if self.recent.len() > self.window + 1 {
            self.recent.remove(0);
        }
        let total = self.total + self.comp;
        if total.is_nan() || total > self.threshold {
            self.exceeded = Some(index);
            return false;
        }
        true
    }

    /// Power-law exponent `α` in `c(s) ≈ A s^{-α}` fitted across the window.
    fn decay_exponent(&self) -> Option<f64> {
        let (s0, c0) = *self.recent.first()?;
        let (s1, c1) = *self.recent.last()?;
        if self.recent.len() < 2 || s0 == 0 || !(c0 > 0.0 && c1 > 0.0) {
            return None;
        }
        Some(-(c1.ln() - c0.ln()) / ((s1 as f64).ln() - (s0 as f64).ln()))
    }

    pub(crate) fn finish(self) -> ConditionReport {
        let value = self.total + self.comp;
        let Some(first) = self.first else {
            return ConditionReport {
                value: 0.0,
                converged: true,
                divergent: false,
                witness: None,
                scanned: (0, 0),
            };
        };
        let scanned = (first, self.last);
        if let Some(s) = self.exceeded {
            return ConditionReport {
                value,
                converged: false,
                divergent: true,
                witness: Some(s),
                scanned,
            };
        }
        let full_window = self.recent.len() > self.window;
        let tail = &self.recent[self.recent.len().saturating_sub(self.window)..];
        let negligible = full_window
            && tail
                .iter()
                .all(|&(_, c)| c <= SERIES_NEGLIGIBLE_RTOL * value);
        let nonincreasing = tail.windows(2).all(|w| w[1].1 <= w[0].1);
        let exponent = self.decay_exponent();
        let summable =
            full_window && nonincreasing && exponent.is_some_and(|a| a >= SUMMABLE_EXPONENT);
        let divergent = full_window
            && !negligible
            && (!nonincreasing || exponent.is_some_and(|a| a <= DIVERGENT_EXPONENT));
        ConditionReport {
            value,
            converged: negligible || summable,
            divergent: divergent && !summable,
            witness: Some(self.last),
            scanned,
        }
    }
}

/// `Cᵢ = sup_{n≥i} Σ_{k=i}^{n} (δₙβ(n) / (δₖ δ_{n-k+i} β(k) β(n-k+i)))^q`.
///
/// `i = 0` gives the constant `C₀` controlling `‖f ⋄ g‖ ≤ C₀^{1/q} ‖f‖ ‖g‖`.
pub fn holder_constant(
    beta: &WeightSequence,
    delta: &WeightSequence,
    q: f64,
    i: usize,
    scan: &ScanPolicy,
) -> Result<ConditionReport> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "conjugate exponent must be in (1, inf), got {q}"
        )));
    }
    scan.validate()?;
    let limit = scan.limit(beta, delta);
    if i > limit {
        return Err(Error::EmptyScan(format!(
            "i={i} beyond scan ceiling {limit}"
        )));
    }
    let (lb, ld) = (beta.logs(), delta.logs());
    let mut sup = SupScan::new(scan, true);
    for n in i..=limit {
        let top = ld[n] + lb[n];
        let inner: f64 = (i..=n)
            .map(|k| {
                let j = n - k + i;
                (q * (top - ld[k] - ld[j] - lb[k] - lb[j])).exp()
            })
            .sum();
        if !sup.push(n, inner) {
            break;
        }
    }
    sup.finish()
}

/// `bⁱ_{M,k} = sup_{n≥M+i+1} δ_{n+k}β(n+k) / (δₙ δ_{k+i} β(n) β(k+i))`.
pub fn tail_constant(
    beta: &WeightSequence,
    delta: &WeightSequence,
    m: usize,
    k: usize,
    i: usize,
    scan: &ScanPolicy,
) -> Result<ConditionReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("tail constant needs k >= 1".into()));
    }
    scan.validate()?;
    let limit = scan.limit(beta, delta);
    let start = m + i + 1;
    if start + k > limit || k + i > limit {
        return Err(Error::EmptyScan(format!(
            "b^{i}_{{{m},{k}}}: need n >= {start} with n + {k} <= {limit}"
        )));
    }
    let (lb, ld) = (beta.logs(), delta.logs());
    let base = ld[k + i] + lb[k + i];
    let mut sup = SupScan::new(scan, false);
    for n in start..=(limit - k) {
        let r = (ld[n + k] + lb[n + k] - ld[n] - lb[n] - base).exp();
        if !sup.push(n, r) {
            break;
        }
    }
    sup.finish()
}

/// The `p = 1` double tail `Σ_{n,m≥N+1} δ_{n+m-i}β(n+m-i) / (δₙδₘβ(n)β(m))`,
/// accumulated by anti-diagonals `s = n + m`.
///
/// Convergence is accepted when the last `window` anti-diagonal
/// contributions are negligible relative to the total, or when they decay
/// monotonically at a fitted power-law rate `s^{-α}` with `α ≥ 1.25`.
pub fn p1_tail_sum(
    beta: &WeightSequence,
    delta: &WeightSequence,
    n_floor: usize,
    i: usize,
    scan: &ScanPolicy,
) -> Result<ConditionReport> {
    if n_floor < i {
        return Err(Error::InvalidArgument(format!(
            "p=1 tail needs N >= i, got N={n_floor}, i={i}"
        )));
    }
    scan.validate()?;
    let limit = scan.limit(beta, delta);
    let (lb, ld) = (beta.logs(), delta.logs());
    let mut series = SeriesScan::new(scan);
    let lo = n_floor + 1;
    for s in (2 * lo)..=(limit + i) {
        let top = ld[s - i] + lb[s - i];
        let c: f64 = (lo..=(s - lo))
            .filter(|&n| n <= limit && s - n <= limit)
            .map(|n| {
                let m = s - n;
                (top - ld[n] - ld[m] - lb[n] - lb[m]).exp()
            })
            .sum();
        if !series.push(s, c) {
            break;
        }
    }
    Ok(series.finish())
}

/// `sup_{n≥0} β(n+N)δ_{n+N} / (β(n)δₙδ₁^N)`, the norm of the `N`-th power of
/// the `⋄`-shift on `lᵖ(β)`.
pub fn shift_norm_constant(
    beta: &WeightSequence,
    delta: &WeightSequence,
    power: usize,
    scan: &ScanPolicy,
) -> Result<ConditionReport> {
    if power == 0 {
        return Err(Error::InvalidArgument("shift power must be >= 1".into()));
    }
    scan.validate()?;
    let limit = scan.limit(beta, delta);
    if power > limit {
        return Err(Error::EmptyScan(format!(
            "N={power} beyond ceiling {limit}"
        )));
    }
    let (lb, ld) = (beta.logs(), delta.logs());
    let d1 = power as f64 * ld[1];
    let mut sup = SupScan::new(scan, false);
    for n in 0..=(limit - power) {
        let r = (lb[n + power] + ld[n + power] - lb[n] - ld[n] - d1).exp();
        if !sup.push(n, r) {
            break;
        }
    }
    sup.finish()
}

/// The `p = 1` product constant
/// `2 Σ_{k=0}^{N} δ₁ᵏ/(β(k)δₖ) ‖M^k_{⋄,z}‖ + Σ_{n,m≥N+1} δ_{n+m}β(n+m)/(δₙδₘβ(n)β(m))`.
pub fn p1_product_bound(
    beta: &WeightSequence,
    delta: &WeightSequence,
    n_floor: usize,
    scan: &ScanPolicy,
) -> Result<f64> {
    let tail = p1_tail_sum(beta, delta, n_floor, 0, scan)?
        .require_converged(&format!("p1 tail sum (N={n_floor})"))?;
    let mut head = 1.0;
    for k in 1..=n_floor {
        let norm = shift_norm_constant(beta, delta, k, scan)?
            .require_converged(&format!("shift norm (N={k})"))?;
        let scale = (k as f64 * delta.log(1) - beta.log(k) - delta.log(k)).exp();
        head += scale * norm;
    }
    Ok(2.0 * head + tail)
}
