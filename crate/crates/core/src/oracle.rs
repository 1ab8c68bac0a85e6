//! Brute-force reference implementations.
//!
//! Nothing here calls into the `algebra` or `operators` kernels: weight
//! ratios come from direct division of the tabulated values (falling back to
//! log differences only outside the double range), traversal is by input
//! pairs rather than by output degree, and inversion goes through a generic
//! dense triangular solve. Clarity over speed; intended for `D ≤ 64`-ish.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::FormalSeries;
use crate::weights::WeightSequence;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `δ_{a+b} / (δ_a δ_b)` by direct division where representable.
fn pair_weight(delta: &WeightSequence, a: usize, b: usize) -> f64 {
    let (top, x, y) = (delta.value(a + b), delta.value(a), delta.value(b));
    let direct = top / x / y;
    if top.is_finite() && x.is_normal() && y.is_normal() && direct.is_normal() {
        direct
    } else {
        (delta.log(a + b) - delta.log(a) - delta.log(b)).exp()
    }
}

fn coeff_or_zero(f: &FormalSeries, n: usize) -> Complex64 {
    f.coeffs().get(n).copied().unwrap_or(ZERO)
}

/// The literal double sum `Σ_n Σ_m δ_{n+m}/(δₙδₘ) f̂(n) ĝ(m) z^{n+m}`, pairs
/// visited in lexicographic `(n, m)` order, degrees above `D` dropped.
pub fn brute_diamond(
    f: &FormalSeries,
    g: &FormalSeries,
    delta: &WeightSequence,
    degree_cap: usize,
) -> FormalSeries {
    let mut out = vec![ZERO; degree_cap + 1];
    for n in 0..=degree_cap {
        for m in 0..=(degree_cap - n) {
            let w = pair_weight(delta, n, m);
            out[n + m] += coeff_or_zero(f, n) * coeff_or_zero(g, m) * w;
        }
    }
    FormalSeries::new(out)
}

/// `ln C(n, k)` as a sum of logs of the factors `(n-k+j)/j`.
fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum()
}

/// Pascal rows `C(n, ·)` in exact integers for `n ≤ 64`.
fn pascal(n_max: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![1u128; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// `Σ_k C(n,k) f̂(k) ĝ(n-k)`: the product at `δₙ = n!`.
pub fn binomial_convolution(f: &FormalSeries, g: &FormalSeries, degree_cap: usize) -> FormalSeries {
    let exact = pascal(degree_cap.min(64));
    let out = (0..=degree_cap)
        .map(|n| {
            (0..=n).fold(ZERO, |acc, k| {
                let b = if n <= 64 {
                    exact[n][k] as f64
                } else {
                    ln_binomial(n, k).exp()
                };
                acc + coeff_or_zero(f, k) * coeff_or_zero(g, n - k) * b
            })
        })
        .collect();
    FormalSeries::new(out)
}

/// Ordinary Cauchy convolution, `k` ascending.
pub fn cauchy_convolution(f: &FormalSeries, g: &FormalSeries, degree_cap: usize) -> FormalSeries {
    let out = (0..=degree_cap)
        .map(|n| {
            (0..=n).fold(ZERO, |acc, k| {
                acc + coeff_or_zero(f, k) * coeff_or_zero(g, n - k)
            })
        })
        .collect();
    FormalSeries::new(out)
}

/// Solves `A g = e₀` where `A(n,m) = δₙ/(δₘδ_{n-m}) f̂(n-m)` is the dense
/// lower-triangular multiplication matrix, by row-scaled forward substitution.
pub fn brute_invert(
    f: &FormalSeries,
    delta: &WeightSequence,
    degree_cap: usize,
) -> Result<FormalSeries> {
    let dim = degree_cap + 1;
    let mut a = vec![vec![ZERO; dim]; dim];
    for (n, row) in a.iter_mut().enumerate() {
        for (m, entry) in row.iter_mut().enumerate().take(n + 1) {
            *entry = coeff_or_zero(f, n - m) * pair_weight(delta, m, n - m);
        }
    }
    let mut rhs = vec![ZERO; dim];
    rhs[0] = Complex64::new(1.0, 0.0);

    // scale each row by its largest entry before substituting
    for (row, b) in a.iter_mut().zip(rhs.iter_mut()) {
        let s = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            row.iter_mut().for_each(|c| *c /= s);
            *b /= s;
        }
    }

    let mut x = vec![ZERO; dim];
    for n in 0..dim {
        let diag = a[n][n];
        if diag == ZERO {
            return Err(Error::NotInvertible { degree: 0 });
        }
        let s: Complex64 = (0..n).map(|m| a[n][m] * x[m]).sum();
        x[n] = (rhs[n] - s) / diag;
    }
    Ok(FormalSeries::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::make_weight_family;

    fn real(v: &[f64], d: usize) -> FormalSeries {
        FormalSeries::from_real(v, d)
    }

    #[test]
    fn examples() {
        let fact = make_weight_family("factorial", 8).unwrap();
        let one = make_weight_family("one", 8).unwrap();
        let f = real(&[1.0, 1.0], 8);

        let got = brute_diamond(&f, &f, &fact, 8);
        assert_eq!(got, real(&[1.0, 2.0, 2.0], 8));
        let g = real(&[0.3, -2.0, 5.0, 0.25], 8);
        assert_eq!(brute_diamond(&FormalSeries::one(8), &g, &one, 8), g);

        let z = real(&[0.0, 1.0], 8);
        assert_eq!(binomial_convolution(&z, &z, 8), real(&[0.0, 0.0, 2.0], 8));
        assert_eq!(cauchy_convolution(&f, &f, 8), real(&[1.0, 2.0, 1.0], 8));
        assert_eq!(cauchy_convolution(&FormalSeries::one(8), &g, 8), g);
    }

    #[test]
    fn binomial_identity_with_factorials() {
        let d = 20;
        let mut fact = vec![1.0];
        for n in 1..=d {
            fact.push(fact[n - 1] * n as f64);
        }
        let g = real(&fact, d);
        let prod = binomial_convolution(&real(&[1.0, -1.0], d), &g, d);
        for (n, scale) in fact.iter().enumerate() {
            let expect = if n == 0 { 1.0 } else { 0.0 };
            assert!((prod.coeff(n).re - expect).abs() <= 1e-12 * scale, "n={n}");
        }
    }

    #[test]
    fn log_binomial_beyond_exact_range() {
        let b = ln_binomial(70, 35).exp();
        // C(70,35) = 112186277816662845432
        assert!((b - 112_186_277_816_662_845_432.0).abs() <= 1e-12 * b);
    }

    #[test]
    fn brute_invert_examples() {
        let one = make_weight_family("one", 12).unwrap();
        assert_eq!(
            brute_invert(&FormalSeries::one(12), &one, 12).unwrap(),
            FormalSeries::one(12)
        );
        let g = brute_invert(&real(&[1.0, -1.0], 12), &one, 12).unwrap();
        assert_eq!(g, real(&[1.0; 13], 12));
        assert!(brute_invert(&real(&[0.0, 1.0], 12), &one, 12).is_err());
    }
}
