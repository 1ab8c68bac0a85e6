//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion. Exits non-zero
//! if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wcauchy::oracle::{binomial_convolution, cauchy_convolution};
use wcauchy::verify::{magnitudes, max_rel_err, max_scaled_err, random_series};
use wcauchy::weights::{holder_constant, p1_tail_sum, shift_norm_constant, ScanPolicy};
use wcauchy::{
    compactness_profile, diamond, diamond_power, ideal_closure_index, induced_norm_bounds, invert,
    is_cyclic, krylov_profile, make_weight_family, shift_matrix, Complex64, Error, FormalSeries,
    SpaceConfig,
};

type Outcome = Result<(bool, String), Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn space(p: f64, beta: &str, delta: &str, degree: usize) -> SpaceConfig {
    let n_max = degree.max(ScanPolicy::default().n_max);
    SpaceConfig::new(
        p,
        make_weight_family(beta, n_max).unwrap(),
        make_weight_family(delta, n_max).unwrap(),
        degree,
    )
    .unwrap()
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn with_floor(mut f: FormalSeries, floor: usize) -> FormalSeries {
    f.coeffs_mut()[..floor].fill(Complex64::new(0.0, 0.0));
    f
}

fn c01_reduction() -> Outcome {
    let d = 32;
    let ones = space(2.0, "invfactorial", "one", d);
    let facts = space(2.0, "invfactorial", "factorial", d);
    let mut rng = rng(1);
    let start = Instant::now();
    let (mut e_one, mut e_fact) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (f, g) = (random_series(&mut rng, d), random_series(&mut rng, d));
        e_one = e_one.max(max_rel_err(
            &diamond(&f, &g, &ones)?,
            &cauchy_convolution(&f, &g, d),
        ));
        e_fact = e_fact.max(max_rel_err(
            &diamond(&f, &g, &facts)?,
            &binomial_convolution(&f, &g, d),
        ));
    }
    let elapsed = start.elapsed();
    Ok((
        e_one <= 1e-12 && e_fact <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("cauchy {e_one:.2e}, binomial {e_fact:.2e}, {elapsed:.2?}"),
    ))
}

fn c02_unity() -> Outcome {
    let mut mismatches = 0;
    for (tag, delta) in [(2, "one"), (3, "factorial")] {
        let cfg = space(2.0, "invfactorial", delta, 64);
        let mut rng = rng(tag);
        for _ in 0..100 {
            let f = random_series(&mut rng, 64);
            if diamond(&cfg.one(), &f, &cfg)? != f || diamond(&f, &cfg.one(), &cfg)? != f {
                mismatches += 1;
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches over 200 series"),
    ))
}

fn c03_assoc_comm() -> Outcome {
    let d = 64;
    let (mut comm, mut assoc, mut naive) = (0.0f64, 0.0f64, 0.0f64);
    for (tag, delta) in [(4, "one"), (5, "factorial")] {
        let cfg = space(2.0, "invfactorial", delta, d);
        let mut rng = rng(tag);
        for _ in 0..100 {
            let f = random_series(&mut rng, d);
            let g = random_series(&mut rng, d);
            let h = random_series(&mut rng, d);
            comm = comm.max(max_rel_err(
                &diamond(&f, &g, &cfg)?,
                &diamond(&g, &f, &cfg)?,
            ));
            let left = diamond(&diamond(&f, &g, &cfg)?, &h, &cfg)?;
            let right = diamond(&f, &diamond(&g, &h, &cfg)?, &cfg)?;
            let (fa, ga, ha) = (magnitudes(&f), magnitudes(&g), magnitudes(&h));
            let scale = diamond(&diamond(&fa, &ga, &cfg)?, &ha, &cfg)?;
            assoc = assoc.max(max_scaled_err(&left, &right, &scale));
            naive = naive.max(max_rel_err(&left, &right));
        }
    }
    Ok((
        comm <= 1e-12 && assoc <= 1e-12,
        format!(
            "commutativity {comm:.2e}, associativity {assoc:.2e} (vs |f|⋄|g|⋄|h|; plain per-coefficient {naive:.2e})"
        ),
    ))
}

fn c04_dichotomy() -> Outcome {
    let d = 64;
    let (mut wrongly_inverted, mut failed, mut worst) = (0, 0, 0.0f64);
    for (tag, delta) in [(6, "one"), (7, "factorial")] {
        let cfg = space(2.0, "invfactorial", delta, d);
        let mut rng = rng(tag);
        for _ in 0..100 {
            let f = with_floor(random_series(&mut rng, d), 1);
            if !matches!(invert(&f, &cfg), Err(Error::NotInvertible { degree: 0 })) {
                wrongly_inverted += 1;
            }
        }
        for _ in 0..100 {
            let mut f = random_series(&mut rng, d);
            let r = rng.gen_range(0.5..=2.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            f.coeffs_mut()[0] = Complex64::from_polar(r, theta);
            match invert(&f, &cfg) {
                Ok(g) => {
                    let residual = cfg.norm(&(&diamond(&f, &g, &cfg)? - &cfg.one()))?;
                    let scale = 1.0 + cfg.norm(&f)? * cfg.norm(&g)?;
                    let ratio = residual / scale;
                    worst = worst.max(ratio);
                    if ratio > 1e-9 {
                        failed += 1;
                    }
                }
                Err(_) => failed += 1,
            }
        }
    }
    Ok((
        wrongly_inverted == 0 && failed == 0,
        format!(
            "{wrongly_inverted} of 200 non-units inverted, {failed} of 200 units failed, worst scaled residual {worst:.2e}"
        ),
    ))
}

fn c05_holder_regression() -> Outcome {
    let scan = ScanPolicy::default();
    let beta = make_weight_family("invfactorial", scan.n_max)?;
    let delta = make_weight_family("one", scan.n_max)?;
    let r = holder_constant(&beta, &delta, 2.0, 0, &scan)?;
    Ok((
        (r.value - 2.25).abs() <= 1e-12 && r.converged && r.witness == Some(2),
        format!(
            "value {:?}, converged {}, witness {:?}",
            r.value, r.converged, r.witness
        ),
    ))
}

fn c06_submultiplicative() -> Outcome {
    let d = 64;
    let cfg = space(2.0, "invfactorial", "one", d);
    let scan = ScanPolicy::default();
    let c0 = holder_constant(
        &make_weight_family("invfactorial", scan.n_max)?,
        &make_weight_family("one", scan.n_max)?,
        2.0,
        0,
        &scan,
    )?
    .require_converged("C_o")?;
    let mut rng = rng(8);
    let (mut violations, mut tightest) = (0, 0.0f64);
    for _ in 0..1000 {
        let (f, g) = (random_series(&mut rng, d), random_series(&mut rng, d));
        let lhs = cfg.norm(&diamond(&f, &g, &cfg)?)?;
        let rhs = c0.sqrt() * cfg.norm(&f)? * cfg.norm(&g)?;
        tightest = tightest.max(lhs / rhs);
        if lhs > rhs {
            violations += 1;
        }
    }
    Ok((
        violations == 0,
        format!("{violations} violations, max lhs/rhs {tightest:.4}"),
    ))
}

fn c07_shift_norm() -> Outcome {
    let d = 512;
    let scan = ScanPolicy::new(d, 16, 1e12)?;
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    for p in [1.0, 2.0] {
        for beta in ["invfactorial", "poly:2"] {
            let cfg = space(p, beta, "one", d);
            for n in 1..=3 {
                let bounds = induced_norm_bounds(&shift_matrix(n, &cfg), &cfg)?;
                let c = shift_norm_constant(&cfg.beta, &cfg.delta, n, &scan)?;
                let gap = (bounds.upper - bounds.lower).abs() / bounds.upper;
                let err = (bounds.lower - c.value).abs() / c.value;
                worst = worst.max(gap).max(err);
                ok &= c.converged && gap <= 1e-12 && err <= 1e-12;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok((
        ok && elapsed < Duration::from_secs(5),
        format!("worst relative gap {worst:.2e}, {elapsed:.2?}"),
    ))
}

fn c08_compactness() -> Outcome {
    let cfg = space(2.0, "invfactorial", "one", 64);
    let f = FormalSeries::monomial(1, Complex64::new(1.0, 0.0), 64);
    let ms: Vec<usize> = (1..=32).collect();
    let rows = compactness_profile(&f, 0, &ms, &cfg, &ScanPolicy::default())?;
    let mut worst = 0.0f64;
    let mut dominated = true;
    let mut decreasing = true;
    for (idx, row) in rows.iter().enumerate() {
        let exact = 1.0 / (row.m as f64 + 2.0);
        worst = worst
            .max((row.measured.lower - exact).abs())
            .max((row.measured.upper - exact).abs());
        dominated &= row.lemma_bound >= row.measured.upper;
        if idx > 0 {
            decreasing &= row.measured.upper < rows[idx - 1].measured.lower;
        }
    }
    Ok((
        rows.len() == 32 && worst <= 1e-12 && dominated && decreasing,
        format!("max |measured - 1/(M+2)| {worst:.2e}, decreasing {decreasing}, bound dominates {dominated}"),
    ))
}

fn c09_unicellular_shadow() -> Outcome {
    let d = 128;
    let cfg = space(2.0, "invfactorial", "one", d);
    let mut rng = rng(9);
    let start = Instant::now();
    let mut bad = 0;
    for trial in 0..50 {
        let i = trial % 4;
        let mut f = with_floor(random_series(&mut rng, d), i);
        if f.coeff(i) == Complex64::new(0.0, 0.0) {
            f.coeffs_mut()[i] = Complex64::new(1.0, 0.0);
        }
        let profile = krylov_profile(&f, d, &cfg)?;
        let index = ideal_closure_index(&f, &cfg)?;
        if !(profile.echelon && index == Some(i) && profile.rank == d - i + 1) {
            bad += 1;
        }
    }
    let elapsed = start.elapsed();
    Ok((
        bad == 0 && elapsed < Duration::from_secs(2),
        format!("{bad} of 50 off-pattern, {elapsed:.2?}"),
    ))
}

fn c10_cyclicity() -> Outcome {
    let d = 64;
    let cfg = space(2.0, "invfactorial", "one", d);
    let mut rng = rng(10);
    let (mut disagreements, mut cyclic) = (0, 0);
    for trial in 0..200 {
        let f = with_floor(random_series(&mut rng, d), trial % 3);
        let c = is_cyclic(&f, &cfg)?;
        let full = krylov_profile(&f, d, &cfg)?.rank == d + 1;
        cyclic += usize::from(c);
        if c != full {
            disagreements += 1;
        }
    }
    Ok((
        disagreements == 0,
        format!("{disagreements} disagreements, {cyclic} of 200 cyclic"),
    ))
}

fn c11_spectral_ratio() -> Outcome {
    let cfg = space(2.0, "invfactorial", "one", 192);
    let f = FormalSeries::from_real(&[0.5, 1.0], 192);
    let a = cfg.norm(&diamond_power(&f, 48, &cfg)?)?;
    let b = cfg.norm(&diamond_power(&f, 49, &cfg)?)?;
    let ratio = b / a;
    Ok((
        (ratio - 0.5).abs() <= 0.025,
        format!("ratio {ratio:.6} vs 0.5 (tolerance 5%)"),
    ))
}

fn c12_p1_tail() -> Outcome {
    let scan = ScanPolicy::default();
    let beta = make_weight_family("invfactorial", scan.n_max)?;
    let delta = make_weight_family("one", scan.n_max)?;
    let n0 = p1_tail_sum(&beta, &delta, 0, 0, &scan)?;
    let n1 = p1_tail_sum(&beta, &delta, 1, 0, &scan)?;
    Ok((
        !n0.converged && n1.converged,
        format!(
            "N=0 converged {} (partial {:.4}), N=1 converged {} (value {:.6})",
            n0.converged, n0.value, n1.converged, n1.value
        ),
    ))
}

fn c13_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_wcauchy");
    let run = || {
        Command::new(bin)
            .arg("verify")
            .output()
            .expect("spawn wcauchy")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.success() && b.status.success();
    Ok((
        same && ok,
        format!(
            "byte-identical {same}, exit codes {:?}/{:?}, {} bytes",
            a.status.code(),
            b.status.code(),
            a.stdout.len()
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 13] = [
        (
            "reduction to Cauchy and binomial convolution",
            c01_reduction,
        ),
        ("unity is bit-exact", c02_unity),
        ("associativity and commutativity", c03_assoc_comm),
        ("invertibility dichotomy", c04_dichotomy),
        ("Holder constant regression", c05_holder_regression),
        ("Holder submultiplicativity", c06_submultiplicative),
        ("shift-norm equality", c07_shift_norm),
        ("compactness of M_z", c08_compactness),
        ("Krylov echelon and ideal index", c09_unicellular_shadow),
        ("cyclic vectors", c10_cyclicity),
        ("spectral radius ratio", c11_spectral_ratio),
        ("p=1 tail dichotomy", c12_p1_tail),
        ("CLI determinism", c13_cli_determinism),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += usize::from(!passed);
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2} {name}: {detail}", n + 1);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
