//! Matrix realizations of `⋄`-multiplication and the weighted shift,
//! finite-rank approximants `K_M`, and induced norms on `lᵖ(β)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{weighted_p_norm, FormalSeries, NeumaierSum, SpaceConfig};
use crate::weights::{holder_constant, p1_tail_sum, tail_constant, ScanPolicy};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

const POWER_RTOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 20_000;
const RANDOM_PROBES: usize = 64;
const PROBE_SEED: u64 = 0x005e_ed0f_d1a0;
const RANK_RTOL: f64 = 1e-12;

/// A dense `(D+1) × (D+1)` complex matrix in the monomial basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(degree_cap: usize) -> Self {
        let dim = degree_cap + 1;
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(degree_cap: usize) -> Self {
        let mut a = Self::zeros(degree_cap);
        for n in 0..a.dim {
            a.set(n, n, Complex64::new(1.0, 0.0));
        }
        a
    }

    /// Builds a matrix from rows; panics if not square.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let dim = rows.len();
        assert!(
            dim > 0 && rows.iter().all(|r| r.len() == dim),
            "matrix must be square"
        );
        Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.dim - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.dim + m]
    }

    #[inline]
    pub fn set(&mut self, n: usize, m: usize, v: Complex64) {
        self.entries[n * self.dim + m] = v;
    }

    pub fn column(&self, m: usize) -> Vec<Complex64> {
        (0..self.dim).map(|n| self.get(n, m)).collect()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        for (row, &yn) in self.entries.chunks_exact(self.dim).zip(y) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * yn;
            }
        }
        out
    }

    pub fn apply_series(&self, f: &FormalSeries) -> FormalSeries {
        FormalSeries::new(self.apply(f.coeffs()))
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for n in 0..d {
            for k in 0..d {
                let a = self.entries[n * d + k];
                if a == ZERO {
                    continue;
                }
                for m in 0..d {
                    out[n * d + m] += a * rhs.entries[k * d + m];
                }
            }
        }
        Self {
            dim: d,
            entries: out,
        }
    }

    /// Whether every entry above the diagonal is exactly zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.dim).all(|n| ((n + 1)..self.dim).all(|m| self.get(n, m) == ZERO))
    }

    /// Numerical rank by Gaussian elimination with column pivoting; a column
    /// counts as zero below `1e-12 ·` the largest initial column 2-norm.
    pub fn rank(&self) -> usize {
        let d = self.dim;
        let mut a = self.entries.clone();
        let col_norm = |a: &[Complex64], m: usize, from: usize| -> f64 {
            (from..d)
                .map(|n| a[n * d + m].norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let scale = (0..d).map(|m| col_norm(&a, m, 0)).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let tol = RANK_RTOL * scale;
        let mut cols: Vec<usize> = (0..d).collect();
        let mut rank = 0;
        for step in 0..d {
            // pick the heaviest remaining column
            let (pos, best) = cols[step..]
                .iter()
                .enumerate()
                .map(|(j, &m)| (j + step, col_norm(&a, m, step)))
                .fold((step, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= tol {
                break;
            }
            cols.swap(step, pos);
            let m = cols[step];
            let piv_row = (step..d)
                .max_by(|&x, &y| a[x * d + m].norm().total_cmp(&a[y * d + m].norm()))
                .unwrap();
            if piv_row != step {
                for c in 0..d {
                    a.swap(step * d + c, piv_row * d + c);
                }
            }
            let piv = a[step * d + m];
            for r in (step + 1)..d {
                let factor = a[r * d + m] / piv;
                if factor == ZERO {
                    continue;
                }
                for c in 0..d {
                    let v = a[step * d + c];
                    a[r * d + c] -= factor * v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// `W A W⁻¹` with `W = diag(β(n))`, formed in log space.
    fn weighted(&self, cfg: &SpaceConfig) -> Self {
        let d = self.dim;
        let lb = cfg.beta.logs();
        let mut out = self.clone();
        for n in 0..d {
            for m in 0..d {
                let a = self.entries[n * d + m];
                if a != ZERO {
                    out.entries[n * d + m] = a * (lb[n] - lb[m]).exp();
                }
            }
        }
        out
    }
}

fn check_matrix(a: &OperatorMatrix, cfg: &SpaceConfig) -> Result<()> {
    if a.degree_cap() != cfg.degree {
        return Err(Error::DegreeMismatch(a.degree_cap(), cfg.degree));
    }
    Ok(())
}

/// The matrix of `g ↦ f ⋄ g`: `A(n,m) = δₙ/(δₘδ_{n-m}) f̂(n-m)` for `n ≥ m`.
pub fn mult_matrix(f: &FormalSeries, cfg: &SpaceConfig) -> Result<OperatorMatrix> {
    mult_matrix_i(f, 0, cfg)
}

/// The matrix of `g ↦ f ⋄ᵢ g` on series supported on `≥ i`:
/// `A(n,m) = δₙ/(δ_{n-m+i}δₘ) f̂(n-m+i)` for `n ≥ m ≥ i`, zero elsewhere.
pub fn mult_matrix_i(f: &FormalSeries, i: usize, cfg: &SpaceConfig) -> Result<OperatorMatrix> {
    cfg.check(f)?;
    f.check_support(i)?;
    let d = cfg.degree;
    let mut a = OperatorMatrix::zeros(d);
    for m in i..=d {
        for n in m..=d {
            let k = n - m + i;
            let c = f.coeff(k);
            if c != ZERO {
                a.set(n, m, c * cfg.delta.ratio(n, k, i));
            }
        }
    }
    Ok(a)
}

/// `M^N_{⋄,z} f`: coefficient `n+N` is `δ_{n+N}/(δₙ δ₁ᴺ) f̂(n)`.
pub fn shift_apply(f: &FormalSeries, power: usize, cfg: &SpaceConfig) -> Result<FormalSeries> {
    cfg.check(f)?;
    let d = cfg.degree;
    let mut out = cfg.zeros();
    if power <= d {
        let oc = out.coeffs_mut();
        for n in 0..=(d - power) {
            let c = f.coeff(n);
            if c != ZERO {
                oc[n + power] = c * cfg.delta.shift_gain(n, power);
            }
        }
    }
    Ok(out)
}

/// The matrix of `M^N_{⋄,z}`.
pub fn shift_matrix(power: usize, cfg: &SpaceConfig) -> OperatorMatrix {
    let d = cfg.degree;
    let mut a = OperatorMatrix::zeros(d);
    if power <= d {
        for n in 0..=(d - power) {
            a.set(
                n + power,
                n,
                Complex64::new(cfg.delta.shift_gain(n, power), 0.0),
            );
        }
    }
    a
}

/// The finite-rank approximant `Kᵢ_M`: the `⋄ᵢ`-action of `f` on input
/// columns `m ≤ i + M`, with every later column zero.
pub fn k_m_matrix(
    f: &FormalSeries,
    m: usize,
    i: usize,
    cfg: &SpaceConfig,
) -> Result<OperatorMatrix> {
    let mut a = mult_matrix_i(f, i, cfg)?;
    let keep = i + m;
    for n in 0..a.dim {
        for col in (keep + 1)..a.dim {
            a.set(n, col, ZERO);
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// `p = 1`: maximum weighted column sum.
    ColumnSum,
    /// `p = 2`: power iteration on `B*B`.
    PowerIteration,
    /// Other `p`: probe gains below, Riesz–Thorin interpolation above.
    ProbeInterpolation,
    /// `p = 2` power iteration hit its cap; probe gains and the
    /// Frobenius/interpolation bound.
    Degraded,
}

impl NormMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ColumnSum => "p1-column-sum",
            Self::PowerIteration => "p2-power-iteration",
            Self::ProbeInterpolation => "probe-interpolation",
            Self::Degraded => "degraded",
        }
    }
}

/// Two-sided bounds on an induced operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
}

fn p_norm(x: &[Complex64], p: f64) -> f64 {
    weighted_p_norm(x.iter().map(|c| c.norm()), p)
}

fn max_column_sum(b: &OperatorMatrix) -> f64 {
    (0..b.dim)
        .map(|m| {
            let mut acc = NeumaierSum::default();
            (0..b.dim).for_each(|n| acc.add(b.get(n, m).norm()));
            acc.value()
        })
        .fold(0.0, f64::max)
}

fn max_row_sum(b: &OperatorMatrix) -> f64 {
    b.entries
        .chunks_exact(b.dim)
        .map(|row| {
            let mut acc = NeumaierSum::default();
            row.iter().for_each(|c| acc.add(c.norm()));
            acc.value()
        })
        .fold(0.0, f64::max)
}

/// `‖A e_m‖_β / ‖e_m‖_β` for every input degree `m`.
pub fn basis_gains(a: &OperatorMatrix, cfg: &SpaceConfig) -> Result<Vec<f64>> {
    check_matrix(a, cfg)?;
    let b = a.weighted(cfg);
    Ok((0..b.dim).map(|m| p_norm(&b.column(m), cfg.p)).collect())
}

fn probe_lower(b: &OperatorMatrix, p: f64) -> f64 {
    let mut best = (0..b.dim)
        .map(|m| p_norm(&b.column(m), p))
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..RANDOM_PROBES {
        let x: Vec<Complex64> = (0..b.dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let nx = p_norm(&x, p);
        if nx > 0.0 {
            best = best.max(p_norm(&b.apply(&x), p) / nx);
        }
    }
    best
}

/// Largest singular value by power iteration on `B*B`; the flag is false if
/// the eigen-residual `‖B*Bx - σ²x‖` never fell below `POWER_RTOL·σ²`. The
/// running estimate is attained by an explicit vector, so it is a valid
/// lower bound either way.
fn spectral_norm(b: &OperatorMatrix) -> (f64, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut x: Vec<Complex64> = (0..b.dim)
        .map(|_| Complex64::new(1.0 + 0.01 * rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    let mut best = 0.0f64;
    let mut prev = 0.0f64;
    let mut settled = 0;
    for _ in 0..POWER_MAX_ITERS {
        let nx = p_norm(&x, 2.0);
        if nx == 0.0 {
            return (best, true);
        }
        x.iter_mut().for_each(|c| *c /= nx);
        let bx = b.apply(&x);
        let sigma = p_norm(&bx, 2.0);
        best = best.max(sigma);
        if sigma == 0.0 {
            return (best, true);
        }
        let y = b.apply_adjoint(&bx);
        let lambda = sigma * sigma;
        let residual = p_norm(
            &y.iter()
                .zip(&x)
                .map(|(yi, xi)| yi - xi * lambda)
                .collect::<Vec<_>>(),
            2.0,
        );
        let change = (sigma - prev).abs();
        if residual <= POWER_RTOL * lambda {
            settled += 1;
            // keep iterating until the estimate stops moving at all
            if change <= 4.0 * f64::EPSILON * sigma || settled >= 200 {
                return (best, true);
            }
        } else {
            settled = 0;
        }
        prev = sigma;
        x = y;
    }
    (best, false)
}

/// Bounds on the induced norm of `A` on `lᵖ(β)` over degrees `0..=D`,
/// i.e. the `p`-norm of `W A W⁻¹` with `W = diag(β(n))`.
pub fn induced_norm_bounds(a: &OperatorMatrix, cfg: &SpaceConfig) -> Result<NormBounds> {
    check_matrix(a, cfg)?;
    let b = a.weighted(cfg);
    let p = cfg.p;
    if p == 1.0 {
        let v = max_column_sum(&b);
        return Ok(NormBounds {
            lower: v,
            upper: v,
            method: NormMethod::ColumnSum,
        });
    }
    let one = max_column_sum(&b);
    let inf = max_row_sum(&b);
    let interpolated = one.powf(1.0 / p) * inf.powf(1.0 - 1.0 / p);
    if p == 2.0 {
        let (sigma, converged) = spectral_norm(&b);
        if converged {
            return Ok(NormBounds {
                lower: sigma,
                upper: sigma,
                method: NormMethod::PowerIteration,
            });
        }
        let frob = b.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        return Ok(NormBounds {
            lower: sigma.max(probe_lower(&b, 2.0)),
            upper: frob.min(interpolated),
            method: NormMethod::Degraded,
        });
    }
    Ok(NormBounds {
        lower: probe_lower(&b, p),
        upper: interpolated,
        method: NormMethod::ProbeInterpolation,
    })
}

/// One row of a compactness profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactnessRow {
    pub m: usize,
    /// Bounds on `‖M_{⋄ᵢ,f} - Kᵢ_M‖`.
    pub measured: NormBounds,
    /// The analytic error bound for this `M`.
    pub lemma_bound: f64,
    /// Whether every condition constant inside `lemma_bound` converged.
    pub converged: bool,
}

/// Measures `‖M_{⋄ᵢ,f} - Kᵢ_M‖` for each `M` in `ms` and pairs it with the
/// analytic error bound.
///
/// For `p > 1` the bound is
/// `Cᵢ^{1/q} ‖R_{M+i} f‖ + ‖f‖ Σ_{k=1}^{M} bⁱ_{M,k}`; for `p = 1` it is
/// `‖f‖` times the weight sums over input pairs `(n, m)` with
/// `m ≥ i+M+1` and `n ≥ i+1`. Requires `f̂(j) = 0` for `j ≤ i`.
pub fn compactness_profile(
    f: &FormalSeries,
    i: usize,
    ms: &[usize],
    cfg: &SpaceConfig,
    scan: &ScanPolicy,
) -> Result<Vec<CompactnessRow>> {
    cfg.check(f)?;
    f.check_support(i + 1)?;
    let full = mult_matrix_i(f, i, cfg)?;
    let f_norm = cfg.norm(f)?;
    let (beta, delta) = (&cfg.beta, &cfg.delta);

    let holder = match cfg.q() {
        Some(q) => Some(holder_constant(beta, delta, q, i, scan)?),
        None => None,
    };

    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        let approx = k_m_matrix(f, m, i, cfg)?;
        let measured = induced_norm_bounds(&full.sub(&approx), cfg)?;
        let (lemma_bound, converged) = match (&holder, cfg.q()) {
            (Some(c_i), Some(q)) => {
                let mut converged = c_i.converged;
                let mut tails = 0.0;
                for k in 1..=m {
                    let b = tail_constant(beta, delta, m, k, i, scan)?;
                    converged &= b.converged;
                    tails += b.value;
                }
                let head = c_i.value.powf(1.0 / q) * cfg.norm(&f.tail(m + i))?;
                (head + f_norm * tails, converged)
            }
            _ => {
                let double = p1_tail_sum(beta, delta, m + i, i, scan)?;
                let mut converged = double.converged;
                let mut total = double.value;
                for n in (i + 1)..=(i + m) {
                    let row = p1_cross_row(cfg, n, i + m + 1, i, scan);
                    converged &= row.converged;
                    total += row.value;
                }
                (total * f_norm, converged)
            }
        };
        rows.push(CompactnessRow {
            m,
            measured,
            lemma_bound,
            converged,
        });
    }
    Ok(rows)
}

/// `Σ_{m≥from} δ_{n+m-i}β(n+m-i) / (δₙδₘβ(n)β(m))` for a fixed `n`.
fn p1_cross_row(
    cfg: &SpaceConfig,
    n: usize,
    from: usize,
    i: usize,
    scan: &ScanPolicy,
) -> crate::weights::ConditionReport {
    let (lb, ld) = (cfg.beta.logs(), cfg.delta.logs());
    let limit = scan.n_max.min(cfg.beta.n_max()).min(cfg.delta.n_max());
    let mut series = crate::weights::SeriesScan::new(scan);
    let mut m = from;
    while n + m - i <= limit {
        let s = n + m - i;
        let c = (ld[s] + lb[s] - ld[n] - ld[m] - lb[n] - lb[m]).exp();
        if !series.push(m, c) {
            break;
        }
        m += 1;
    }
    series.finish()
}
