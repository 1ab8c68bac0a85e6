//! Truncated formal power series and the weighted `lᵖ(β)` norm.

use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A formal power series modulo `z^{D+1}`, stored densely as `ĉ(0..=D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    coeffs: Vec<Complex64>,
}

impl FormalSeries {
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        Self { coeffs }
    }

    pub fn zeros(degree_cap: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); degree_cap + 1])
    }

    pub fn one(degree_cap: usize) -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0), degree_cap)
    }

    /// `c·zⁿ`; zero if `n > degree_cap`.
    pub fn monomial(n: usize, c: Complex64, degree_cap: usize) -> Self {
        let mut s = Self::zeros(degree_cap);
        if n <= degree_cap {
            s.coeffs[n] = c;
        }
        s
    }

    /// Real coefficients, zero-padded (or truncated) to `degree_cap`.
    pub fn from_real(values: &[f64], degree_cap: usize) -> Self {
        let mut s = Self::zeros(degree_cap);
        for (c, &v) in s.coeffs.iter_mut().zip(values) {
            *c = Complex64::new(v, 0.0);
        }
        s
    }

    /// Parses the series literal format: one coefficient per line, `re im`
    /// or `re`, line index = degree. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, degree_cap: usize) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| {
                Error::InvalidArgument(format!("series line {}: {what}: `{line}`", lineno + 1))
            };
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .ok_or_else(|| bad("missing value"))?
                .parse()
                .map_err(|_| bad("bad real part"))?;
            let im: f64 = match parts.next() {
                Some(t) => t.parse().map_err(|_| bad("bad imaginary part"))?,
                None => 0.0,
            };
            if parts.next().is_some() {
                return Err(bad("expected `re` or `re im`"));
            }
            coeffs.push(Complex64::new(re, im));
        }
        if coeffs.len() > degree_cap + 1 {
            return Err(Error::InvalidArgument(format!(
                "series has {} coefficients but the degree cap is {degree_cap}",
                coeffs.len()
            )));
        }
        coeffs.resize(degree_cap + 1, Complex64::new(0.0, 0.0));
        Ok(Self { coeffs })
    }

    pub fn load(path: &Path, degree_cap: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, degree_cap)
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    /// The graded truncation to `degree_cap` (zero-extends if larger).
    pub fn truncated(&self, degree_cap: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree_cap + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// `R_N(f) = Σ_{n≥N} f̂(n) zⁿ`.
    pub fn tail(&self, from: usize) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut().take(from) {
            *c = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Least degree with a nonzero coefficient (exact test), `None` for zero.
    pub fn min_support(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.re != 0.0 || c.im != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.min_support().is_none()
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * lambda).collect(),
        }
    }

    /// Errors unless every coefficient below `floor` is exactly zero.
    pub fn check_support(&self, floor: usize) -> Result<()> {
        match self.min_support() {
            Some(d) if d < floor => Err(Error::SupportViolation { degree: d, floor }),
            _ => Ok(()),
        }
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(
            self.degree_cap(),
            rhs.degree_cap(),
            "series degree caps differ"
        );
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: Self) -> FormalSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: Self) -> FormalSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: Complex64) -> FormalSeries {
        self.scale(rhs)
    }
}

/// The ambient truncated algebra: exponent `p`, weights `β` and `δ`, and the
/// degree cap `D`.
#[derive(Debug, Clone)]
pub struct SpaceConfig {
    pub p: f64,
    pub beta: WeightSequence,
    pub delta: WeightSequence,
    pub degree: usize,
}

impl SpaceConfig {
    pub fn new(p: f64, beta: WeightSequence, delta: WeightSequence, degree: usize) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "p must be in [1, inf), got {p}"
            )));
        }
        if degree > beta.n_max() || degree > delta.n_max() {
            return Err(Error::InvalidArgument(format!(
                "degree cap {degree} exceeds the weight tables (beta to {}, delta to {})",
                beta.n_max(),
                delta.n_max()
            )));
        }
        Ok(Self {
            p,
            beta,
            delta,
            degree,
        })
    }

    /// The conjugate exponent `q = p/(p-1)`; `None` at `p = 1`.
    pub fn q(&self) -> Option<f64> {
        (self.p > 1.0).then(|| self.p / (self.p - 1.0))
    }

    pub fn zeros(&self) -> FormalSeries {
        FormalSeries::zeros(self.degree)
    }

    pub fn one(&self) -> FormalSeries {
        FormalSeries::one(self.degree)
    }

    pub fn check(&self, f: &FormalSeries) -> Result<()> {
        if f.degree_cap() != self.degree {
            return Err(Error::DegreeMismatch(f.degree_cap(), self.degree));
        }
        Ok(())
    }

    pub fn norm(&self, f: &FormalSeries) -> Result<f64> {
        lp_norm(f, self)
    }
}

/// `|c|·β(n)` without overflowing through an infinite `β(n)`.
#[inline]
pub(crate) fn weighted_abs(c: Complex64, beta: &WeightSequence, n: usize) -> f64 {
    let a = c.norm();
    if a == 0.0 {
        return 0.0;
    }
    let w = beta.value(n);
    if w.is_finite() && w > 0.0 {
        a * w
    } else {
        (a.ln() + beta.log(n)).exp()
    }
}

/// `‖f‖_β = (Σ_{n=0}^{D} |f̂(n)|ᵖ β(n)ᵖ)^{1/p}`, summed in ascending `n`
/// with compensation.
pub fn lp_norm(f: &FormalSeries, cfg: &SpaceConfig) -> Result<f64> {
    if f.degree_cap() > cfg.degree {
        return Err(Error::DegreeMismatch(f.degree_cap(), cfg.degree));
    }
    Ok(weighted_p_norm(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, &c)| weighted_abs(c, &cfg.beta, n)),
        cfg.p,
    ))
}

/// `(Σ aₙᵖ)^{1/p}` for nonnegative `aₙ`.
pub(crate) fn weighted_p_norm(terms: impl Iterator<Item = f64>, p: f64) -> f64 {
    let mut acc = NeumaierSum::default();
    if p == 1.0 {
        terms.for_each(|a| acc.add(a));
        acc.value()
    } else if p == 2.0 {
        // scale by the largest term to keep squares in range
        let terms: Vec<f64> = terms.collect();
        let big = terms.iter().cloned().fold(0.0f64, f64::max);
        if big == 0.0 || !big.is_finite() {
            return big;
        }
        terms.iter().for_each(|a| acc.add((a / big) * (a / big)));
        big * acc.value().sqrt()
    } else {
        let terms: Vec<f64> = terms.collect();
        let big = terms.iter().cloned().fold(0.0f64, f64::max);
        if big == 0.0 || !big.is_finite() {
            return big;
        }
        terms.iter().for_each(|a| acc.add((a / big).powf(p)));
        big * acc.value().powf(1.0 / p)
    }
}

/// `R_N(f)`.
pub fn tail(f: &FormalSeries, from: usize) -> FormalSeries {
    f.tail(from)
}

pub fn min_support(f: &FormalSeries) -> Option<usize> {
    f.min_support()
}
