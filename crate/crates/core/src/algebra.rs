//! The weighted Cauchy products `⋄` and `⋄ᵢ`, inversion, and the single
//! character `φ(f) = f̂(0)`.
//!
//! Coefficient `n` of a product sums the mirrored term pairs
//! `(k, n-k+i)` with `k` ascending. Each pair is bitwise symmetric in
//! `f ↔ g`, so `f ⋄ g` and `g ⋄ f` agree bit for bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{FormalSeries, SpaceConfig};
use crate::weights::WeightSequence;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[inline]
fn is_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

/// `Σ_{k=i}^{n} ratio(n,k,i) f̂(k) ĝ(n-k+i)` for every `n` in `i..=D`.
///
/// Exactly-zero terms are skipped, so a single surviving term is returned
/// unchanged; that is what makes the unity bit-exact.
fn product_kernel(
    f: &FormalSeries,
    g: &FormalSeries,
    i: usize,
    delta: &WeightSequence,
) -> FormalSeries {
    let d = f.degree_cap();
    let (fc, gc) = (f.coeffs(), g.coeffs());
    let term = |n: usize, k: usize, r: f64| -> Option<Complex64> {
        let (a, b) = (fc[k], gc[n - k + i]);
        (!is_zero(a) && !is_zero(b)).then(|| (a * b) * r)
    };
    let mut out = FormalSeries::zeros(d);
    for (n, slot) in out.coeffs_mut().iter_mut().enumerate().skip(i) {
        let mut acc: Option<Complex64> = None;
        let mut push = |t: Option<Complex64>| {
            if let Some(t) = t {
                acc = Some(acc.map_or(t, |s| s + t));
            }
        };
        let (mut lo, mut hi) = (i, n);
        while lo < hi {
            let r = delta.ratio(n, lo, i);
            push(match (term(n, lo, r), term(n, hi, r)) {
                (Some(x), Some(y)) => Some(x + y),
                (x, y) => x.or(y),
            });
            lo += 1;
            hi -= 1;
        }
        if lo == hi {
            push(term(n, lo, delta.ratio(n, lo, i)));
        }
        *slot = acc.unwrap_or(ZERO);
    }
    out
}

fn check_pair(f: &FormalSeries, g: &FormalSeries, cfg: &SpaceConfig) -> Result<()> {
    cfg.check(f)?;
    cfg.check(g)
}

/// `f ⋄ g` modulo `z^{D+1}`.
pub fn diamond(f: &FormalSeries, g: &FormalSeries, cfg: &SpaceConfig) -> Result<FormalSeries> {
    check_pair(f, g, cfg)?;
    Ok(product_kernel(f, g, 0, &cfg.delta))
}

/// `f ⋄ᵢ g`, the product on series supported on degrees `≥ i`:
/// `(f ⋄ᵢ g)^(n) = Σ_{k=i}^{n} δₙ/(δₖ δ_{n-k+i}) f̂(k) ĝ(n-k+i)`.
pub fn diamond_i(
    f: &FormalSeries,
    g: &FormalSeries,
    i: usize,
    cfg: &SpaceConfig,
) -> Result<FormalSeries> {
    check_pair(f, g, cfg)?;
    f.check_support(i)?;
    g.check_support(i)?;
    Ok(product_kernel(f, g, i, &cfg.delta))
}

/// The unity `δᵢ zⁱ` of `⋄ᵢ`; the constant `1` for `i = 0`.
pub fn unity(i: usize, delta: &WeightSequence, degree_cap: usize) -> Result<FormalSeries> {
    if i > degree_cap {
        return Err(Error::InvalidArgument(format!(
            "unity index {i} exceeds degree cap {degree_cap}"
        )));
    }
    delta.check_index(i)?;
    Ok(FormalSeries::monomial(
        i,
        Complex64::new(delta.value(i), 0.0),
        degree_cap,
    ))
}

/// `f^{⋄n}` by repeated left multiplication; `f^{⋄0} = 1`.
pub fn diamond_power(f: &FormalSeries, n: usize, cfg: &SpaceConfig) -> Result<FormalSeries> {
    cfg.check(f)?;
    let mut acc = cfg.one();
    for _ in 0..n {
        acc = product_kernel(f, &acc, 0, &cfg.delta);
    }
    Ok(acc)
}

/// The `⋄`-inverse, which exists exactly when `f̂(0) ≠ 0`.
pub fn invert(f: &FormalSeries, cfg: &SpaceConfig) -> Result<FormalSeries> {
    invert_i(f, 0, cfg)
}

/// The `⋄ᵢ`-inverse of `f` supported on `≥ i` with `f̂(i) ≠ 0`, i.e. the `g`
/// with `f ⋄ᵢ g = δᵢ zⁱ`.
///
/// Solves the triangular coefficient system directly:
/// `ĝ(i) = δᵢ² / f̂(i)` and, for `n > i`,
/// `ĝ(n) = -(δᵢ / f̂(i)) Σ_{k=i+1}^{n} ratio(n,k,i) f̂(k) ĝ(n-k+i)`.
pub fn invert_i(f: &FormalSeries, i: usize, cfg: &SpaceConfig) -> Result<FormalSeries> {
    cfg.check(f)?;
    f.check_support(i)?;
    let d = cfg.degree;
    if i > d || is_zero(f.coeff(i)) {
        return Err(Error::NotInvertible { degree: i });
    }
    let delta = &cfg.delta;
    let fc = f.coeffs();
    let lead = f.coeff(i);
    let delta_i = delta.value(i);
    // δᵢ / f̂(i); exactly 1 / f̂(0) when i = 0
    let pivot = if i == 0 {
        lead.inv()
    } else {
        Complex64::new(delta_i, 0.0) / lead
    };
    let mut g = FormalSeries::zeros(d);
    {
        let gc = g.coeffs_mut();
        gc[i] = pivot * delta_i;
        for n in (i + 1)..=d {
            let mut acc = ZERO;
            for k in (i + 1)..=n {
                let (a, b) = (fc[k], gc[n - k + i]);
                if is_zero(a) || is_zero(b) {
                    continue;
                }
                acc += (a * delta.ratio(n, k, i)) * b;
            }
            gc[n] = -(pivot * acc);
        }
    }
    Ok(g)
}

/// The only character of the algebra: `φ(f) = f̂(0)`.
pub fn gelfand(f: &FormalSeries) -> Complex64 {
    f.coeff(0)
}

/// Whether `λ ∈ σ(f)`, i.e. `λ = f̂(0)` exactly.
///
/// For `λ ≠ f̂(0)` the inverse of `f - λ` is computed as a witness, and for
/// `λ = f̂(0)` its absence is confirmed; any disagreement is reported as
/// [`Error::Inconsistent`].
pub fn spectrum_membership(f: &FormalSeries, lambda: Complex64, cfg: &SpaceConfig) -> Result<bool> {
    cfg.check(f)?;
    let member = f.coeff(0) == lambda;
    let mut shifted = f.clone();
    shifted.coeffs_mut()[0] -= lambda;
    match (member, invert(&shifted, cfg)) {
        (true, Err(Error::NotInvertible { .. })) | (false, Ok(_)) => Ok(member),
        (true, Ok(_)) => Err(Error::Inconsistent(format!(
            "f - {lambda} inverted although f(0) = {lambda}"
        ))),
        (true, Err(e)) => Err(e),
        (false, Err(e)) => Err(Error::Inconsistent(format!(
            "f - {lambda} failed to invert although f(0) = {}: {e}",
            f.coeff(0)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::make_weight_family;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg(delta: &str, d: usize) -> SpaceConfig {
        SpaceConfig::new(
            2.0,
            make_weight_family("invfactorial", d).unwrap(),
            make_weight_family(delta, d).unwrap(),
            d,
        )
        .unwrap()
    }

    fn real(v: &[f64], d: usize) -> FormalSeries {
        FormalSeries::from_real(v, d)
    }

    fn close(a: &FormalSeries, b: &FormalSeries, tol: f64) -> bool {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    #[test]
    fn unity_is_bit_exact() {
        let k = cfg("factorial", 8);
        let g = FormalSeries::new(
            (0..9)
                .map(|n| Complex64::new((n as f64).sin(), -(n as f64).sqrt()))
                .collect(),
        );
        assert_eq!(diamond(&k.one(), &g, &k).unwrap(), g);
    }

    #[test]
    fn product_examples() {
        let k = cfg("one", 4);
        let f = real(&[1.0, 1.0], 4);
        assert_eq!(diamond(&f, &f, &k).unwrap(), real(&[1.0, 2.0, 1.0], 4));

        let k = cfg("factorial", 4);
        let z = real(&[0.0, 1.0], 4);
        let zz = diamond(&z, &z, &k).unwrap();
        assert!(close(&zz, &real(&[0.0, 0.0, 2.0], 4), 1e-15));
    }

    #[test]
    fn product_discards_high_degrees() {
        let k = cfg("one", 2);
        let f = real(&[0.0, 1.0, 1.0], 2);
        assert_eq!(diamond(&f, &f, &k).unwrap(), real(&[0.0, 0.0, 1.0], 2));
    }

    #[test]
    fn diamond_i_examples() {
        let k = cfg("one", 5);
        let z = real(&[0.0, 1.0], 5);
        let g = real(&[0.0, 1.0, 1.0], 5);
        assert_eq!(diamond_i(&z, &g, 1, &k).unwrap(), g);
        assert_eq!(diamond_i(&z, &z, 1, &k).unwrap(), z);
        assert!(matches!(
            diamond_i(&real(&[1.0, 1.0], 5), &z, 1, &k),
            Err(Error::SupportViolation {
                degree: 0,
                floor: 1
            })
        ));
    }

    #[test]
    fn diamond_i_unity_acts_as_identity() {
        let k = cfg("factorial", 12);
        for i in 0..4 {
            let u = unity(i, &k.delta, 12).unwrap();
            let g = FormalSeries::new(
                (0..13)
                    .map(|n| {
                        if n < i {
                            c(0.0)
                        } else {
                            Complex64::new(n as f64 - 3.5, 1.0)
                        }
                    })
                    .collect(),
            );
            assert!(close(&diamond_i(&u, &g, i, &k).unwrap(), &g, 1e-14));
        }
    }

    #[test]
    fn unity_examples() {
        let fact = make_weight_family("factorial", 6).unwrap();
        let one = make_weight_family("one", 6).unwrap();
        assert_eq!(unity(0, &fact, 6).unwrap(), FormalSeries::one(6));
        assert_eq!(unity(1, &one, 6).unwrap(), real(&[0.0, 1.0], 6));
        let u = unity(3, &fact, 6).unwrap();
        assert!((u.coeff(3).re - 6.0).abs() < 1e-14);
        assert!(unity(7, &fact, 6).is_err());
    }

    #[test]
    fn power_examples() {
        let k = cfg("one", 6);
        let f = real(&[1.0, 1.0], 6);
        assert_eq!(diamond_power(&f, 0, &k).unwrap(), k.one());
        assert_eq!(diamond_power(&f, 2, &k).unwrap(), real(&[1.0, 2.0, 1.0], 6));

        let k = cfg("factorial", 6);
        let z3 = diamond_power(&real(&[0.0, 1.0], 6), 3, &k).unwrap();
        assert!(close(&z3, &real(&[0.0, 0.0, 0.0, 6.0], 6), 1e-14));
    }

    #[test]
    fn invert_examples() {
        let k = cfg("one", 10);
        assert_eq!(invert(&k.one(), &k).unwrap(), k.one());
        let g = invert(&real(&[1.0, -1.0], 10), &k).unwrap();
        assert_eq!(g, real(&[1.0; 11], 10));

        let k = cfg("factorial", 10);
        let g = invert(&real(&[1.0, -1.0], 10), &k).unwrap();
        let mut fact = 1.0;
        for n in 0..=10 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((g.coeff(n).re - fact).abs() <= 1e-13 * fact, "n={n}");
        }

        assert!(matches!(
            invert(&real(&[0.0, 1.0], 10), &k),
            Err(Error::NotInvertible { degree: 0 })
        ));
    }

    #[test]
    fn invert_i_examples() {
        let k = cfg("one", 8);
        let f = real(&[0.0, 1.0, -1.0], 8);
        let g = invert_i(&f, 1, &k).unwrap();
        let mut expect = vec![1.0; 9];
        expect[0] = 0.0;
        assert_eq!(g, real(&expect, 8));

        let k = cfg("factorial", 8);
        for i in 0..4 {
            let u = unity(i, &k.delta, 8).unwrap();
            assert!(close(&invert_i(&u, i, &k).unwrap(), &u, 1e-14));
        }

        let f = real(&[2.0, 0.5, -0.25, 3.0], 8);
        assert_eq!(invert_i(&f, 0, &k).unwrap(), invert(&f, &k).unwrap());
        assert!(matches!(
            invert_i(&real(&[0.0, 0.0, 1.0], 8), 1, &k),
            Err(Error::NotInvertible { degree: 1 })
        ));
    }

    #[test]
    fn invert_i_roundtrip() {
        let k = cfg("factorial", 16);
        for i in 0..4 {
            let f = FormalSeries::new(
                (0..17)
                    .map(|n| {
                        if n < i {
                            c(0.0)
                        } else {
                            Complex64::new(1.0 / (n as f64 + 1.0), (n as f64).cos())
                        }
                    })
                    .collect(),
            );
            let g = invert_i(&f, i, &k).unwrap();
            let u = unity(i, &k.delta, 16).unwrap();
            let back = diamond_i(&f, &g, i, &k).unwrap();
            let scale = k.norm(&f).unwrap() * k.norm(&g).unwrap();
            let err = k.norm(&(&back - &u)).unwrap();
            assert!(err <= 1e-9 * (1.0 + scale), "i={i} err={err}");
        }
    }

    #[test]
    fn gelfand_examples() {
        assert_eq!(gelfand(&FormalSeries::one(3)), c(1.0));
        assert_eq!(gelfand(&real(&[0.5, 1.0], 3)), c(0.5));
    }

    #[test]
    fn spectrum_examples() {
        let k = cfg("one", 8);
        let f = real(&[0.5, 1.0], 8);
        assert!(spectrum_membership(&f, c(0.5), &k).unwrap());
        assert!(!spectrum_membership(&f, c(0.0), &k).unwrap());
        assert!(spectrum_membership(&real(&[0.0, 1.0], 8), c(0.0), &k).unwrap());
        assert!(!spectrum_membership(&f, Complex64::new(0.5, 1e-300), &k).unwrap());
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let k = cfg("one", 8);
        assert!(matches!(
            diamond(&FormalSeries::one(4), &k.one(), &k),
            Err(Error::DegreeMismatch(4, 8))
        ));
    }
}
