//! Invariant subspaces of the `⋄`-shift: Krylov echelon structure, cyclic
//! vectors, and the closed-ideal index.
//!
//! On the truncation the closed span of `{M^j_{⋄,z} f}` is decided exactly:
//! if `f` has least support `i`, the `j`-th iterate has least support
//! `i + j` with leading coefficient `δ_{i+j} f̂(i) / (δ₁ʲ δᵢ)`, so the iterates
//! form an echelon basis of the coordinates `i..=D`.

use crate::error::{Error, Result};
use crate::operators::{shift_apply, OperatorMatrix};
use crate::series::{FormalSeries, SpaceConfig};
use crate::weights::{holder_constant, tail_constant, ConditionReport, ScanPolicy, WeightSequence};

/// Columns `f, M_{⋄,z} f, …, M^K_{⋄,z} f` and their echelon data.
#[derive(Debug, Clone)]
pub struct KrylovProfile {
    pub columns: Vec<FormalSeries>,
    /// `min_support` of each column.
    pub leading_indices: Vec<Option<usize>>,
    pub rank: usize,
    /// `min_support(f)`.
    pub index: Option<usize>,
    /// Whether column `j` has least support `index + j` whenever that
    /// degree fits under the cap (and is zero otherwise).
    pub echelon: bool,
}

impl KrylovProfile {
    /// The columns as a `(D+1) × (D+1)` matrix, unused columns zero.
    pub fn matrix(&self) -> OperatorMatrix {
        let d = self.columns.first().map_or(0, |c| c.degree_cap());
        let mut a = OperatorMatrix::zeros(d);
        for (j, col) in self.columns.iter().enumerate().take(d + 1) {
            for (n, &v) in col.coeffs().iter().enumerate() {
                a.set(n, j, v);
            }
        }
        a
    }

    /// Whether the span is exactly the coordinates `index..=D`.
    pub fn spans_tail(&self, degree_cap: usize) -> bool {
        let Some(i) = self.index else {
            return self.rank == 0;
        };
        let mut leads: Vec<usize> = self.leading_indices.iter().flatten().copied().collect();
        leads.sort_unstable();
        leads.dedup();
        self.echelon && leads == (i..=degree_cap).collect::<Vec<_>>()
    }
}

/// Builds the first `K + 1` shift iterates of `f`.
///
/// The rank is read off the leading indices when the echelon structure
/// holds, and falls back to numerical elimination otherwise.
pub fn krylov_profile(f: &FormalSeries, k: usize, cfg: &SpaceConfig) -> Result<KrylovProfile> {
    cfg.check(f)?;
    let d = cfg.degree;
    if k > d {
        return Err(Error::InvalidArgument(format!(
            "Krylov depth {k} exceeds degree cap {d}"
        )));
    }
    let index = f.min_support();
    let columns = (0..=k)
        .map(|j| shift_apply(f, j, cfg))
        .collect::<Result<Vec<_>>>()?;
    let leading_indices: Vec<Option<usize>> = columns.iter().map(|c| c.min_support()).collect();
    let echelon = match index {
        None => leading_indices.iter().all(Option::is_none),
        Some(i) => leading_indices.iter().enumerate().all(|(j, lead)| {
            if i + j <= d {
                *lead == Some(i + j)
            } else {
                lead.is_none()
            }
        }),
    };
    let mut profile = KrylovProfile {
        columns,
        leading_indices,
        rank: 0,
        index,
        echelon,
    };
    profile.rank = if echelon {
        profile.leading_indices.iter().flatten().count()
    } else {
        profile.matrix().rank()
    };
    Ok(profile)
}

/// Whether `f` is cyclic for `M_{⋄,z}`, i.e. `f̂(0) ≠ 0`, cross-checked
/// against the full-depth Krylov rank.
pub fn is_cyclic(f: &FormalSeries, cfg: &SpaceConfig) -> Result<bool> {
    let c0 = f.coeff(0);
    let criterion = c0.re != 0.0 || c0.im != 0.0;
    let profile = krylov_profile(f, cfg.degree, cfg)?;
    let full = profile.rank == cfg.degree + 1;
    if criterion != full {
        return Err(Error::Inconsistent(format!(
            "f(0) != 0 is {criterion} but Krylov rank is {} of {}",
            profile.rank,
            cfg.degree + 1
        )));
    }
    Ok(criterion)
}

/// The `i` for which the closed ideal generated by `f` is `lᵖᵢ(β)`, i.e.
/// `min_support(f)`; `None` for `f = 0` (the ideal `{0}`).
///
/// Witnessed on the truncation by the Krylov span being exactly the
/// coordinates `i..=D`.
pub fn ideal_closure_index(f: &FormalSeries, cfg: &SpaceConfig) -> Result<Option<usize>> {
    let index = f.min_support();
    let depth = cfg.degree - index.unwrap_or(0).min(cfg.degree);
    let profile = krylov_profile(f, depth, cfg)?;
    if !profile.spans_tail(cfg.degree) {
        return Err(Error::Inconsistent(format!(
            "Krylov span of a series with least support {index:?} is not the tail subspace"
        )));
    }
    Ok(index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Supported,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Supported => "supported",
            Self::Refuted => "refuted",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// `bⁱ_{M,k}` along the ladder `M = 2⁰, 2¹, …`.
#[derive(Debug, Clone)]
pub struct TailTrend {
    pub k: usize,
    pub ladder: Vec<(usize, ConditionReport)>,
    /// Value at the last rung.
    pub last: f64,
    /// Last rung divided by the one before it.
    pub ratio: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct UnicellularityRow {
    pub i: usize,
    pub c_i: ConditionReport,
    pub tails: Vec<TailTrend>,
    pub verdict: Verdict,
}

/// Rung-over-rung shrink factor at or below which `bⁱ_{M,k}` is read as
/// tending to zero (doubling `M` cuts it by at least a quarter).
const DECAY_RATIO: f64 = 0.75;
/// Relative rung-over-rung change below which the ladder is read as
/// stalled at its current value.
const STALL_RTOL: f64 = 1e-2;
/// Values at or below this count as zero outright.
const ZERO_FLOOR: f64 = 1e-12;

fn ladder_verdict(last: f64, prev: f64, reports_ok: bool) -> Verdict {
    if last <= ZERO_FLOOR {
        return Verdict::Supported;
    }
    if !reports_ok {
        return Verdict::Inconclusive;
    }
    let ratio = last / prev;
    if ratio <= DECAY_RATIO {
        Verdict::Supported
    } else if ((last - prev) / last).abs() < STALL_RTOL {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    }
}

/// Numerical evidence for the hypotheses `Cᵢ < ∞` and `bⁱ_{M,k} → 0`,
/// per `i ≤ i_max` and `1 ≤ k ≤ k_max`, on the ladder `M ∈ {2⁰, …, 2¹⁰}`
/// (rungs beyond the scan ceiling are dropped).
pub fn check_unicellularity_conditions(
    beta: &WeightSequence,
    delta: &WeightSequence,
    q: f64,
    i_max: usize,
    k_max: usize,
    scan: &ScanPolicy,
) -> Result<Vec<UnicellularityRow>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let c_i = holder_constant(beta, delta, q, i, scan)?;
        let mut tails = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let mut ladder = Vec::new();
            for e in 0..=10 {
                let m = 1usize << e;
                match tail_constant(beta, delta, m, k, i, scan) {
                    Ok(r) => ladder.push((m, r)),
                    Err(Error::EmptyScan(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            let (last, prev, ok) = match ladder.as_slice() {
                [.., (_, a), (_, b)] => (
                    b.value,
                    a.value,
                    a.converged && b.converged && !a.divergent && !b.divergent,
                ),
                _ => (f64::NAN, f64::NAN, false),
            };
            let verdict = if ladder.iter().any(|(_, r)| r.divergent) {
                Verdict::Refuted
            } else if ladder.len() < 2 {
                Verdict::Inconclusive
            } else {
                ladder_verdict(last, prev, ok)
            };
            tails.push(TailTrend {
                k,
                ladder,
                last,
                ratio: last / prev,
                verdict,
            });
        }
        let verdict = if c_i.divergent || tails.iter().any(|t| t.verdict == Verdict::Refuted) {
            Verdict::Refuted
        } else if c_i.converged && tails.iter().all(|t| t.verdict == Verdict::Supported) {
            Verdict::Supported
        } else {
            Verdict::Inconclusive
        };
        rows.push(UnicellularityRow {
            i,
            c_i,
            tails,
            verdict,
        });
    }
    Ok(rows)
}
