use std::fs::File;
use std::io::BufWriter;

use dedekind_core::coefficients::{b_via_prime_ideals, partial_sums, CoefficientTable};
use dedekind_core::field::L1_DEFAULT_BUDGET;
use dedekind_core::lfunction::{argument_principle_count, expansion_data, find_zeros, ZeroScanOptions};
use dedekind_core::mellin::{z_closed_form, z_line_integral, KernelSpec};
use dedekind_core::modular::{verify_relation, RelationOptions};
use dedekind_core::report::{self, Check, RunConfig};
use dedekind_core::riesz::{self, MellinOptions, RieszOptions};
use dedekind_core::{class_number_data, Complex64, Error, Result};
use serde_json::{json, Value};

/// Largest `N` for which `coeffs` checks against the prime-ideal oracle.
const ORACLE_LIMIT: usize = 10_000;

/// Rows of `a_n`, `b_n` echoed in the JSON report.
const PREVIEW_ROWS: usize = 30;

pub struct Outcome {
    pub result: Value,
    pub checks: Vec<Check>,
}

pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got `{s}`")),
    }
}

fn csv_writer(cfg: &RunConfig) -> Result<Option<BufWriter<File>>> {
    cfg.csv
        .as_ref()
        .map(|p| File::create(p).map(BufWriter::new))
        .transpose()
        .map_err(Error::from)
}

pub fn field(cfg: &RunConfig) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let expansion = expansion_data(&k)?;
    let mut checks = Vec::new();
    let invariants = if k.is_rational() {
        checks.push(Check::at_most("zeta(0) = -1/2", (expansion.leading_at_0 + 0.5).abs(), 1e-10));
        None
    } else {
        let inv = class_number_data(&k, L1_DEFAULT_BUDGET)?;
        if let Some(raw) = inv.h_raw {
            checks.push(Check::at_most("class number rounding residual", (raw - raw.round()).abs(), 1e-6));
        }
        checks.push(Check::at_most(
            "leading coefficient at 0 vs -hR/w",
            expansion.class_number_gap.unwrap_or(f64::INFINITY),
            1e-6,
        ));
        Some(inv)
    };
    checks.push(Check::at_most(
        "extrapolation residual at 0",
        expansion.leading_at_0_err,
        1e-6 * expansion.leading_at_0.abs().max(1.0),
    ));
    Ok(Outcome {
        result: json!({ "invariants": invariants, "expansion": expansion }),
        checks,
    })
}

pub fn coeffs(cfg: &RunConfig) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let n = cfg.n_terms;
    let table = CoefficientTable::build(&k, n, cfg.precision)?;
    let mut conv = vec![0i64; n + 1];
    for i in 1..=n {
        let ai = table.a(i);
        if ai != 0 {
            for j in (i..=n).step_by(i) {
                conv[j] += ai * table.b(j / i);
            }
        }
    }
    let conv_bad = (1..=n).filter(|&m| conv[m] != i64::from(m == 1)).count();
    let lim = n.min(ORACLE_LIMIT);
    let oracle = b_via_prime_ideals(&k, lim)?;
    let oracle_bad = (1..=lim).filter(|&m| oracle[m] != table.b(m)).count();
    let (big_m, small_m) = partial_sums(&table, cfg.precision);
    let rows = n.min(PREVIEW_ROWS);
    if let Some(w) = csv_writer(cfg)? {
        table.write_csv(w)?;
    }
    Ok(Outcome {
        result: json!({
            "field": k.label(),
            "N": n,
            "a": &table.a_slice()[1..=rows],
            "b": &table.b_slice()[1..=rows],
            "M_K(N)": big_m[n],
            "m_K(N)": small_m[n],
        }),
        checks: vec![
            Check::at_most("convolution identity mismatches", conv_bad as f64, 0.0),
            Check::at_most("prime-ideal oracle mismatches", oracle_bad as f64, 0.0),
        ],
    })
}

pub fn kernel_eval(cfg: &RunConfig, r1: u32, r2: u32, x: f64, abscissa: f64) -> Result<Outcome> {
    let mut spec = KernelSpec::new(r1, r2)?;
    spec.quad_step = cfg.quad_step;
    spec.t_max = cfg.t_max;
    spec.validate()?;
    let li = z_line_integral(&spec, x, abscissa)?;
    let in_strip = abscissa > -0.5 && abscissa < 0.0;
    let closed = z_closed_form(r1, r2, x).filter(|_| in_strip);
    let mut checks = vec![Check::at_most("quadrature error estimate", li.err_est, 1e-8)];
    if let Some(c) = closed {
        checks.push(Check::at_most("line integral vs closed form", (li.value - c).abs(), 1e-8));
    }
    Ok(Outcome {
        result: json!({
            "r1": r1,
            "r2": r2,
            "x": x,
            "value": li.value,
            "line_integral": li,
            "closed_form": closed,
        }),
        checks,
    })
}

fn scan_options(cfg: &RunConfig) -> ZeroScanOptions {
    ZeroScanOptions {
        c0: cfg.c0,
        ..ZeroScanOptions::default()
    }
}

pub fn zeros_scan(cfg: &RunConfig) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let zl = find_zeros(&k, cfg.t, scan_options(cfg))?;
    let count = argument_principle_count(&k, cfg.t)? / 2.0;
    let gap = zl.zeros.iter().filter(|z| !z.excluded).map(|z| z.derivative_gap).fold(0.0, f64::max);
    let loc = zl.zeros.iter().map(|z| z.localization_err).fold(0.0, f64::max);
    if let Some(w) = csv_writer(cfg)? {
        zl.write_csv(w)?;
    }
    let checks = vec![
        Check::at_most("argument principle count vs stored", (count - zl.len() as f64).abs(), 0.5),
        Check::at_most("zeta_K'(rho) route gap", gap, 1e-6),
        Check::at_most("localization error", loc, zl.options.tolerance),
    ];
    Ok(Outcome {
        result: json!({ "argument_principle_count": count, "zeros": zl }),
        checks,
    })
}

pub fn verify_modular(cfg: &RunConfig) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let opts = RelationOptions {
        precision: cfg.precision,
        scan: scan_options(cfg),
    };
    let rep = verify_relation(&k, cfg.alpha, cfg.t, cfg.n_terms, &opts)?;
    if let Some(w) = csv_writer(cfg)? {
        rep.write_partials_csv(w)?;
    }
    let checks = vec![
        Check::holds("discrepancy trend", rep.trend_pass),
        Check::at_most("alpha beta = eta", rep.eta_defect, 1e-12),
    ];
    Ok(Outcome {
        result: serde_json::to_value(&rep)?,
        checks,
    })
}

pub fn riesz_scan(cfg: &RunConfig) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let opts = RieszOptions {
        precision: cfg.precision,
        n_max: Some(cfg.n_terms),
    };
    let scan = riesz::riesz_scan(&k, cfg.y_min, cfg.y_max, cfg.points, cfg.eps, &opts)?;
    if let Some(w) = csv_writer(cfg)? {
        scan.write_csv(w)?;
    }
    let mut checks = Vec::new();
    if k.r() >= 1 {
        let p = riesz::envelope_fit(&scan.y_grid, &scan.p_values, cfg.y_min, cfg.y_max)?;
        let c = riesz::envelope_fit(&scan.y_grid, &scan.corrected, cfg.y_min, cfg.y_max)?;
        checks.push(Check {
            name: "envelope slope of |P - main| minus that of |P|".into(),
            achieved: c.slope - p.slope,
            tolerance: 0.0,
            pass: c.slope < p.slope,
        });
    }
    Ok(Outcome {
        result: serde_json::to_value(&scan)?,
        checks,
    })
}

pub fn mellin_check(cfg: &RunConfig, s: Complex64) -> Result<Outcome> {
    let k = cfg.field_descriptor()?;
    let opts = MellinOptions {
        precision: cfg.precision,
        ..MellinOptions::default()
    };
    let rep = riesz::mellin_identity_check(&k, s, &opts)?;
    let checks = vec![Check::at_most(
        "relative discrepancy",
        rep.relative_discrepancy,
        riesz::MELLIN_TOL,
    )];
    Ok(Outcome {
        result: serde_json::to_value(&rep)?,
        checks,
    })
}

pub fn selftest() -> Result<Outcome> {
    let st = report::selftest()?;
    Ok(Outcome {
        checks: st.checks.clone(),
        result: serde_json::to_value(&st)?,
    })
}
