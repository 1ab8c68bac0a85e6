//! One handler per subcommand; each returns the report and whether every
//! requested constant converged.

use anyhow::{bail, Result};
use wcauchy::weights::{
    holder_constant, p1_product_bound, p1_tail_sum, shift_norm_constant, tail_constant,
    ConditionReport,
};
use wcauchy::{
    check_unicellularity_conditions, compactness_profile, diamond, diamond_i, gelfand,
    ideal_closure_index, induced_norm_bounds, invert, invert_i, is_cyclic, krylov_profile,
    mult_matrix, mult_matrix_i, shift_matrix, spectrum_membership, Error, FormalSeries,
};

use crate::config::Config;
use crate::report::{num, opt, Table};

pub struct Outcome {
    pub table: Table,
    pub converged: bool,
    pub failed: bool,
}

impl Outcome {
    fn done(table: Table) -> Self {
        Self {
            table,
            converged: true,
            failed: false,
        }
    }
}

fn coefficient_table(h: &FormalSeries) -> Table {
    let mut t = Table::new(&["n", "re", "im"]);
    for (n, c) in h.coeffs().iter().enumerate() {
        t.push(vec![n.to_string(), num(c.re), num(c.im)]);
    }
    t
}

pub fn product(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let (f, g) = (cfg.series("f")?, cfg.series("g")?);
    let h = if cfg.i == 0 {
        diamond(&f, &g, &space)?
    } else {
        diamond_i(&f, &g, cfg.i, &space)?
    };
    Ok(Outcome::done(coefficient_table(&h)))
}

pub fn invert_cmd(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let f = cfg.series("f")?;
    let g = if cfg.i == 0 {
        invert(&f, &space)?
    } else {
        invert_i(&f, cfg.i, &space)?
    };
    Ok(Outcome::done(coefficient_table(&g)))
}

fn condition_row(t: &mut Table, name: String, r: &ConditionReport) -> bool {
    t.push(vec![
        name,
        num(r.value),
        r.converged.to_string(),
        opt(r.witness),
    ]);
    r.converged
}

pub fn conditions(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let (beta, delta, scan, i) = (&space.beta, &space.delta, &cfg.scan, cfg.i);
    let mut t = Table::new(&["constant", "value", "converged", "witness"]);
    let mut all = true;
    let mut any = false;

    if let Some(q) = cfg.holder_q() {
        let name = if i == 0 {
            "C_o".to_string()
        } else {
            format!("C_{i}")
        };
        all &= condition_row(&mut t, name, &holder_constant(beta, delta, q, i, scan)?);
        any = true;
    }
    if let (Some(m), Some(k)) = (cfg.m, cfg.k) {
        let name = format!("b[i={i},M={m},k={k}]");
        all &= condition_row(&mut t, name, &tail_constant(beta, delta, m, k, i, scan)?);
        any = true;
    }
    if let Some(n) = cfg.n {
        let name = format!("B[i={i},N={n}]");
        all &= condition_row(&mut t, name, &p1_tail_sum(beta, delta, n, i, scan)?);
        if n >= 1 {
            let name = format!("shift[N={n}]");
            all &= condition_row(&mut t, name, &shift_norm_constant(beta, delta, n, scan)?);
        }
        if cfg.p == 1.0 && i == 0 {
            match p1_product_bound(beta, delta, n, scan) {
                Ok(v) => t.push(vec![
                    format!("p1_bound[N={n}]"),
                    num(v),
                    "true".into(),
                    "-".into(),
                ]),
                Err(Error::NotConverged(_)) => {
                    t.push(vec![
                        format!("p1_bound[N={n}]"),
                        num(f64::INFINITY),
                        "false".into(),
                        "-".into(),
                    ]);
                    all = false;
                }
                Err(e) => return Err(e.into()),
            }
        }
        any = true;
    }
    if let Some(imax) = cfg.imax {
        let q = cfg
            .holder_q()
            .ok_or_else(|| anyhow::anyhow!("`imax` needs `q` or p > 1"))?;
        let rows = check_unicellularity_conditions(beta, delta, q, imax, cfg.k.unwrap_or(1), scan)?;
        for row in rows {
            t.push(vec![
                format!("unicellular[i={}]", row.i),
                row.verdict.tag().to_string(),
                row.c_i.converged.to_string(),
                opt(row.c_i.witness),
            ]);
            all &= row.c_i.converged;
        }
        any = true;
    }
    if !any {
        bail!("conditions: nothing requested; set q (or p > 1), M and k, N, or imax");
    }
    Ok(Outcome {
        table: t,
        converged: all,
        failed: false,
    })
}

pub fn opnorm(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let mut t = Table::new(&["operator", "lower", "upper", "method"]);
    let push = |t: &mut Table, name: String, a| -> Result<()> {
        let b = induced_norm_bounds(&a, &space)?;
        t.push(vec![
            name,
            num(b.lower),
            num(b.upper),
            b.method.tag().to_string(),
        ]);
        Ok(())
    };
    if cfg.series_f.is_some() {
        let f = cfg.series("f")?;
        let a = if cfg.i == 0 {
            mult_matrix(&f, &space)?
        } else {
            mult_matrix_i(&f, cfg.i, &space)?
        };
        push(&mut t, format!("M_f[i={}]", cfg.i), a)?;
    }
    if let Some(n) = cfg.n {
        push(&mut t, format!("shift[N={n}]"), shift_matrix(n, &space))?;
    }
    if cfg.series_f.is_none() && cfg.n.is_none() {
        bail!("opnorm: set series.f and/or N");
    }
    Ok(Outcome::done(t))
}

pub fn compactness(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let f = cfg.series("f")?;
    let m_max = cfg
        .m
        .ok_or_else(|| anyhow::anyhow!("config key `M` is required"))?;
    let ms: Vec<usize> = (1..=m_max).collect();
    let rows = compactness_profile(&f, cfg.i, &ms, &space, &cfg.scan)?;
    let mut t = Table::new(&["M", "lower", "upper", "bound", "converged"]);
    let mut all = true;
    for r in rows {
        all &= r.converged;
        t.push(vec![
            r.m.to_string(),
            num(r.measured.lower),
            num(r.measured.upper),
            num(r.lemma_bound),
            r.converged.to_string(),
        ]);
    }
    Ok(Outcome {
        table: t,
        converged: all,
        failed: false,
    })
}

pub fn krylov(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let f = cfg.series("f")?;
    let profile = krylov_profile(&f, cfg.krylov_k.unwrap_or(cfg.degree), &space)?;
    let leads = profile
        .leading_indices
        .iter()
        .map(|l| opt(*l))
        .collect::<Vec<_>>()
        .join(",");
    let mut t = Table::new(&["key", "value"]);
    t.push(vec!["index".into(), opt(profile.index)]);
    t.push(vec!["rank".into(), profile.rank.to_string()]);
    t.push(vec!["echelon".into(), profile.echelon.to_string()]);
    t.push(vec![
        "spans_tail".into(),
        profile.spans_tail(cfg.degree).to_string(),
    ]);
    t.push(vec!["cyclic".into(), is_cyclic(&f, &space)?.to_string()]);
    t.push(vec![
        "ideal_index".into(),
        opt(ideal_closure_index(&f, &space)?),
    ]);
    t.push(vec!["leading".into(), leads]);
    Ok(Outcome::done(t))
}

pub fn spectrum(cfg: &Config) -> Result<Outcome> {
    let space = cfg.space()?;
    let f = cfg.series("f")?;
    let phi = gelfand(&f);
    let lambda = cfg.lambda.unwrap_or(phi);
    let mut t = Table::new(&["key", "value"]);
    t.push(vec!["gelfand_re".into(), num(phi.re)]);
    t.push(vec!["gelfand_im".into(), num(phi.im)]);
    t.push(vec!["lambda_re".into(), num(lambda.re)]);
    t.push(vec!["lambda_im".into(), num(lambda.im)]);
    t.push(vec![
        "member".into(),
        spectrum_membership(&f, lambda, &space)?.to_string(),
    ]);
    Ok(Outcome::done(t))
}

pub fn verify() -> Result<Outcome> {
    let rows = wcauchy::verify::run_suite()?;
    let mut t = Table::new(&["check", "family", "passed", "detail"]);
    let mut failed = false;
    for r in rows {
        failed |= !r.passed;
        t.push(vec![
            r.check.to_string(),
            r.family,
            r.passed.to_string(),
            num(r.detail),
        ]);
    }
    Ok(Outcome {
        table: t,
        converged: true,
        failed,
    })
}
