//! The invariant suite behind `wcauchy verify`: seeded property checks over
//! a fixed set of weight families, one pass/fail row per (check, family).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{diamond, gelfand, invert, spectrum_membership, unity};
use crate::error::Result;
use crate::lattice::{ideal_closure_index, is_cyclic, krylov_profile};
use crate::operators::{induced_norm_bounds, mult_matrix, shift_matrix};
use crate::oracle::{binomial_convolution, brute_diamond, brute_invert, cauchy_convolution};
use crate::series::{FormalSeries, SpaceConfig};
use crate::weights::{make_weight_family, shift_norm_constant, ScanPolicy};

/// Uniform coefficients in the unit square, seeded by the caller.
pub fn random_series(rng: &mut impl Rng, degree_cap: usize) -> FormalSeries {
    FormalSeries::new(
        (0..=degree_cap)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

/// `max_n |aₙ - bₙ| / |bₙ|`, with coefficients where both are zero skipped
/// and a zero reference compared absolutely.
pub fn max_rel_err(a: &FormalSeries, b: &FormalSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| {
            let diff = (x - y).norm();
            if diff == 0.0 {
                0.0
            } else if y.norm() == 0.0 {
                diff
            } else {
                diff / y.norm()
            }
        })
        .fold(0.0, f64::max)
}

/// Coefficient magnitudes as a real series.
pub fn magnitudes(f: &FormalSeries) -> FormalSeries {
    FormalSeries::new(
        f.coeffs()
            .iter()
            .map(|c| Complex64::new(c.norm(), 0.0))
            .collect(),
    )
}

/// `max_n |aₙ - bₙ| / scaleₙ`, where `scale` is the same computation run on
/// coefficient magnitudes (so cancellation in `bₙ` does not inflate it).
pub fn max_scaled_err(a: &FormalSeries, b: &FormalSeries, scale: &FormalSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .zip(scale.coeffs())
        .map(|((x, y), s)| {
            let diff = (x - y).norm();
            if diff == 0.0 {
                0.0
            } else {
                diff / s.norm()
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub check: &'static str,
    pub family: String,
    pub passed: bool,
    /// Worst observed error or count, for the report.
    pub detail: f64,
}

/// The `(β, δ)` fixture pairs.
pub const FIXTURES: &[(&str, &str)] = &[
    ("invfactorial", "one"),
    ("poly:2", "one"),
    ("invfactorial", "factorial"),
    ("geometric:0.5", "poly:1"),
];

const SEED: u64 = 20_240_917;
const DEGREE: usize = 32;
const TRIALS: usize = 25;

/// Runs every check on every fixture, in a fixed order.
pub fn run_suite() -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for &(beta, delta) in FIXTURES {
        rows.extend(run_fixture(beta, delta)?);
    }
    Ok(rows)
}

fn run_fixture(beta: &str, delta: &str) -> Result<Vec<VerifyRow>> {
    let family = format!("{beta}/{delta}");
    let mk = |p: f64, d: usize| -> Result<SpaceConfig> {
        SpaceConfig::new(
            p,
            make_weight_family(beta, 4 * d)?,
            make_weight_family(delta, 4 * d)?,
            d,
        )
    };
    let cfg = mk(2.0, DEGREE)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rows = Vec::new();
    let mut push = |check: &'static str, passed: bool, detail: f64| {
        rows.push(VerifyRow {
            check,
            family: family.clone(),
            passed,
            detail,
        })
    };

    // unity is bit-exact
    let mut mismatches = 0usize;
    for _ in 0..TRIALS {
        let f = random_series(&mut rng, DEGREE);
        if diamond(&cfg.one(), &f, &cfg)? != f {
            mismatches += 1;
        }
    }
    push("unity_bit_exact", mismatches == 0, mismatches as f64);

    // product agrees with the brute-force double sum (and the closed-form
    // convolutions where they apply)
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let (f, g) = (
            random_series(&mut rng, DEGREE),
            random_series(&mut rng, DEGREE),
        );
        let got = diamond(&f, &g, &cfg)?;
        worst = worst.max(max_rel_err(
            &got,
            &brute_diamond(&f, &g, &cfg.delta, DEGREE),
        ));
        match delta {
            "one" => worst = worst.max(max_rel_err(&got, &cauchy_convolution(&f, &g, DEGREE))),
            "factorial" => {
                worst = worst.max(max_rel_err(&got, &binomial_convolution(&f, &g, DEGREE)))
            }
            _ => {}
        }
    }
    push("product_vs_oracle", worst <= 1e-10, worst);

    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let (f, g) = (
            random_series(&mut rng, DEGREE),
            random_series(&mut rng, DEGREE),
        );
        worst = worst.max(max_rel_err(
            &diamond(&f, &g, &cfg)?,
            &diamond(&g, &f, &cfg)?,
        ));
    }
    push("commutativity", worst <= 1e-10, worst);

    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let f = random_series(&mut rng, DEGREE);
        let g = random_series(&mut rng, DEGREE);
        let h = random_series(&mut rng, DEGREE);
        let left = diamond(&diamond(&f, &g, &cfg)?, &h, &cfg)?;
        let right = diamond(&f, &diamond(&g, &h, &cfg)?, &cfg)?;
        worst = worst.max(max_rel_err(&left, &right));
    }
    push("associativity", worst <= 1e-9, worst);

    // inversion round trip and agreement with the dense triangular solve
    let mut worst_rt = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for _ in 0..TRIALS {
        let mut f = random_series(&mut rng, DEGREE);
        f.coeffs_mut()[0] = Complex64::from_polar(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let g = invert(&f, &cfg)?;
        let resid = cfg.norm(&(&diamond(&f, &g, &cfg)? - &cfg.one()))?;
        let scale = 1.0 + cfg.norm(&f)? * cfg.norm(&g)?;
        worst_rt = worst_rt.max(resid / scale);
        worst_oracle = worst_oracle.max(max_rel_err(&g, &brute_invert(&f, &cfg.delta, DEGREE)?));
    }
    push("inversion_roundtrip", worst_rt <= 1e-9, worst_rt);
    push("inversion_vs_oracle", worst_oracle <= 1e-8, worst_oracle);

    let mut failures = 0usize;
    for _ in 0..TRIALS {
        let mut f = random_series(&mut rng, DEGREE);
        f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        if invert(&f, &cfg).is_ok() {
            failures += 1;
        }
    }
    push(
        "non_invertible_without_constant",
        failures == 0,
        failures as f64,
    );

    // the single character is multiplicative
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let (f, g) = (
            random_series(&mut rng, DEGREE),
            random_series(&mut rng, DEGREE),
        );
        let lhs = gelfand(&diamond(&f, &g, &cfg)?);
        let rhs = gelfand(&f) * gelfand(&g);
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE));
    }
    push("gelfand_multiplicative", worst <= 1e-15, worst);

    // spectrum = {f(0)}
    let mut bad = 0usize;
    for _ in 0..TRIALS {
        let f = random_series(&mut rng, DEGREE);
        let other = f.coeff(0) + Complex64::new(rng.gen_range(0.1..1.0), 0.0);
        if !spectrum_membership(&f, f.coeff(0), &cfg)? || spectrum_membership(&f, other, &cfg)? {
            bad += 1;
        }
    }
    push("spectrum_single_point", bad == 0, bad as f64);

    // multiplication matrix reproduces the product
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let (f, g) = (
            random_series(&mut rng, DEGREE),
            random_series(&mut rng, DEGREE),
        );
        let via_matrix = mult_matrix(&f, &cfg)?.apply_series(&g);
        worst = worst.max(max_rel_err(&via_matrix, &diamond(&f, &g, &cfg)?));
    }
    push("matrix_matches_product", worst <= 1e-10, worst);

    // ‖M^N_{⋄,z}‖ equals the shift-norm constant on the same range
    let mut worst = 0.0f64;
    for p in [1.0, 2.0] {
        let k = mk(p, DEGREE)?;
        for n in 1..=3 {
            let bounds = induced_norm_bounds(&shift_matrix(n, &k), &k)?;
            let scan = ScanPolicy::new(DEGREE, 4, 1e12)?;
            let c = shift_norm_constant(&k.beta, &k.delta, n, &scan)?.value;
            worst = worst
                .max((bounds.upper - c).abs() / c)
                .max((bounds.lower - c).abs() / c);
        }
    }
    push("shift_norm_equality", worst <= 1e-10, worst);

    // the unity of ⋄ᵢ is δᵢ zⁱ with δ₀ z⁰ = 1
    push(
        "unity_index_zero",
        unity(0, &cfg.delta, DEGREE)? == cfg.one(),
        0.0,
    );

    // Krylov echelon, ideal index, and cyclicity agree
    let mut bad = 0usize;
    for t in 0..TRIALS {
        let i = t % 4;
        let mut f = random_series(&mut rng, DEGREE);
        for c in f.coeffs_mut().iter_mut().take(i) {
            *c = Complex64::new(0.0, 0.0);
        }
        let profile = krylov_profile(&f, DEGREE - i, &cfg)?;
        let ok = profile.echelon
            && profile.rank == DEGREE - i + 1
            && ideal_closure_index(&f, &cfg)? == Some(i)
            && is_cyclic(&f, &cfg)? == (i == 0)
            && invert(&f, &cfg).is_ok() == (i == 0);
        if !ok {
            bad += 1;
        }
    }
    push("lattice_consistency", bad == 0, bad as f64);

    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let rows = run_suite().unwrap();
        let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn rel_err_basics() {
        let a = FormalSeries::from_real(&[1.0, 0.0, 2.0], 2);
        assert_eq!(max_rel_err(&a, &a), 0.0);
        let b = FormalSeries::from_real(&[1.0, 0.0, 4.0], 2);
        assert_eq!(max_rel_err(&a, &b), 0.5);
    }
}
