//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use dedekind_core::coefficients::{b_via_prime_ideals, CoefficientTable};
use dedekind_core::field::L1_DEFAULT_BUDGET;
use dedekind_core::lfunction::{argument_principle_count, completed_lambda, expansion_data, find_zeros, ZeroScanOptions};
use dedekind_core::mellin::{
    residue_at_zero, residue_calibrate, z_closed_form, z_line_integral, KernelEvaluator, KernelSpec, MatchedPower,
    EULER_GAMMA,
};
use dedekind_core::modular::{lhs_sum, verify_relation, RelationOptions};
use dedekind_core::report::{selftest, Report, RunConfig};
use dedekind_core::riesz::{envelope_fit, mellin_identity_check, riesz_scan, MellinOptions, RieszOptions};
use dedekind_core::{class_number_data, make_field, Complex64, FieldDescriptor, Precision, Result};

const KERNEL_GRID: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fields() -> Vec<FieldDescriptor> {
    [None, Some(-1), Some(5), Some(-3)]
        .into_iter()
        .map(|d| make_field(d).unwrap())
        .collect()
}

/// `K_0(x) = ∫_0^∞ exp(-x cosh t) dt`, trapezoid rule.
fn k0_oracle(x: f64) -> f64 {
    let h = 1e-3;
    let mut acc = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let v = (-x * (k as f64 * h).cosh()).exp();
        if v < 1e-30 {
            break;
        }
        acc += v;
        k += 1;
    }
    acc * h
}

fn mobius_oracle(n: usize) -> i64 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn kernel_oracle() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (r1, r2) in [(1, 0), (0, 1), (2, 0)] {
        let spec = KernelSpec::new(r1, r2)?;
        for x in KERNEL_GRID {
            let li = z_line_integral(&spec, x, spec.c)?.value;
            worst = worst.max((li - z_closed_form(r1, r2, x).unwrap()).abs());
        }
    }
    Ok(outcome(worst <= 1e-8, format!("max abs error {worst:.2e} (tol 1e-8)")))
}

fn bessel_identity() -> Result<Outcome> {
    let spec = KernelSpec::new(2, 0)?;
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.0] {
        let li = z_line_integral(&spec, x / 2.0, -0.5)?.value / 4.0;
        let target = k0_oracle(x) + EULER_GAMMA + (x / 2.0).ln();
        worst = worst.max((li - target).abs());
    }
    Ok(outcome(worst <= 1e-8, format!("max abs error {worst:.2e} (tol 1e-8)")))
}

fn residue_decomposition() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut powers = Vec::new();
    for (r1, r2) in [(1, 0), (0, 1), (2, 0)] {
        let consts = residue_calibrate(r1, r2)?;
        let ev = KernelEvaluator::line_integral_only(KernelSpec::new(r1, r2)?);
        for x in KERNEL_GRID {
            let gap = ev.z(x)?.value - (ev.z_tilde(x)?.value - residue_at_zero(&consts, x));
            worst = worst.max(gap.abs());
        }
        if (r1, r2) != (1, 0) {
            powers.push(((r1, r2), consts.matched_power));
        }
    }
    let resolved = powers.iter().all(|(_, p)| *p != MatchedPower::Both);
    let power_20 = powers.iter().find(|(k, _)| *k == (2, 0)).map(|(_, p)| *p);
    let pass = worst <= 1e-8 && resolved && power_20 == Some(MatchedPower::TwoPowR1);
    Ok(outcome(
        pass,
        format!("max abs error {worst:.2e} (tol 1e-8); matched powers {powers:?}"),
    ))
}

fn coefficient_correctness() -> Result<Outcome> {
    let n = 100_000;
    let mut conv_bad = 0usize;
    let mut ideal_bad = 0usize;
    let mut mobius_bad = 0usize;
    for k in fields() {
        let t = CoefficientTable::build(&k, n, Precision::Standard)?;
        let mut conv = vec![0i64; n + 1];
        for i in 1..=n {
            let ai = t.a(i);
            if ai == 0 {
                continue;
            }
            let mut j = i;
            while j <= n {
                conv[j] += ai * t.b(j / i);
                j += i;
            }
        }
        conv_bad += (1..=n).filter(|&m| conv[m] != i64::from(m == 1)).count();
        let oracle = b_via_prime_ideals(&k, 10_000)?;
        ideal_bad += (1..=10_000).filter(|&m| oracle[m] != t.b(m)).count();
        if k.is_rational() {
            mobius_bad += (1..=n).filter(|&m| mobius_oracle(m) != t.b(m)).count();
        }
    }
    Ok(outcome(
        conv_bad + ideal_bad + mobius_bad == 0,
        format!("mismatches: convolution {conv_bad}, prime ideals {ideal_bad}, Mobius {mobius_bad}"),
    ))
}

fn functional_equation() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for k in fields() {
        for i in 0..20 {
            let s = Complex64::new(-0.7 + 0.11 * i as f64, 0.5 + 1.9 * i as f64);
            let a = completed_lambda(s, &k)?;
            let b = completed_lambda(Complex64::new(1.0, 0.0) - s, &k)?;
            worst = worst.max((a - b).norm() / a.norm().max(b.norm()));
        }
    }
    Ok(outcome(worst <= 1e-8, format!("max relative defect {worst:.2e} (tol 1e-8)")))
}

fn zero_finding() -> Result<Outcome> {
    let q = make_field(None)?;
    let zl = find_zeros(&q, 30.0, ZeroScanOptions::default())?;
    let known = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_69];
    let loc = if zl.len() == 3 {
        zl.gammas().iter().zip(known).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let q_count = argument_principle_count(&q, 30.0)? / 2.0;
    let g = make_field(Some(-1))?;
    let gl = find_zeros(&g, 30.0, ZeroScanOptions::default())?;
    let g_count = argument_principle_count(&g, 30.0)? / 2.0;
    let pass = loc <= 1e-9 && q_count.round() as usize == zl.len() && g_count.round() as usize == gl.len();
    Ok(outcome(
        pass,
        format!(
            "Q: {} stored, count {q_count:.4}, max gamma error {loc:.2e}; Q(i): {} stored, count {g_count:.4}",
            zl.len(),
            gl.len()
        ),
    ))
}

fn derivative_routes() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut short = Vec::new();
    for k in fields() {
        let zl = find_zeros(&k, 80.0, ZeroScanOptions::default())?;
        let first: Vec<_> = zl.zeros.iter().filter(|z| !z.excluded).take(20).collect();
        if first.len() < 20 {
            short.push(k.label());
        }
        worst = first.iter().map(|z| z.derivative_gap).fold(worst, f64::max);
    }
    Ok(outcome(
        worst <= 1e-6 && short.is_empty(),
        format!("max relative route gap {worst:.2e} (tol 1e-6); fields short of 20 zeros: {short:?}"),
    ))
}

fn class_number_checks() -> Result<Outcome> {
    let g = class_number_data(&make_field(Some(-1))?, L1_DEFAULT_BUDGET)?;
    let residual = (g.h_raw.unwrap_or(f64::NAN) - 1.0).abs();
    let k = make_field(Some(5))?;
    let e = expansion_data(&k)?;
    let golden_log = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let via_l1 = e.class_number_gap.unwrap_or(f64::INFINITY);
    let via_unit = (e.leading_at_0 + golden_log / 2.0).abs() / (golden_log / 2.0);
    let pass = g.h == Some(1) && residual <= 1e-6 && via_l1 <= 1e-6 && via_unit <= 1e-6;
    Ok(outcome(
        pass,
        format!(
            "Q(i): h = {:?}, residual {residual:.2e}; Q(sqrt 5): limit vs L(1) {via_l1:.2e}, vs log unit {via_unit:.2e}",
            g.h
        ),
    ))
}

fn modular_relation() -> Result<Outcome> {
    let opts = RelationOptions::default();
    let mut notes = Vec::new();
    let mut pass = true;

    for k in [make_field(None)?, make_field(Some(-1))?, make_field(Some(5))?] {
        let table = CoefficientTable::build(&k, 100_000, Precision::Standard)?;
        let kernel = KernelEvaluator::new(KernelSpec::new(k.r1(), k.r2())?);
        let sym = lhs_sum(&k, k.eta().sqrt(), &table, &kernel, Precision::Standard)?;
        let rep = verify_relation(&k, k.eta().sqrt(), 40.0, 100_000, &opts)?;
        let rhs = rep.rhs_s1 + rep.rhs_s0 + rep.rhs_zero_partial.last().map_or(0.0, |p| p.partial);
        pass &= sym.value.abs() <= 1e-12;
        notes.push(format!("{} sym LHS {:.1e} RHS {:.1e}", k.label(), sym.value, rhs));
    }

    let q = verify_relation(&make_field(None)?, 1.0, 60.0, 1_000_000, &opts)?;
    pass &= q.trend_pass;
    notes.push(format!(
        "Q trend {} ({:.2e} -> {:.2e})",
        q.trend_pass, q.checkpoints[0].discrepancy, q.discrepancy
    ));

    let g = verify_relation(&make_field(Some(-1))?, 1.0, 60.0, 1_000_000, &opts)?;
    let g_residues_zero = g.rhs_s1 == 0.0 && g.rhs_s0 == 0.0;
    pass &= g.trend_pass && g_residues_zero;
    notes.push(format!(
        "Q(i) trend {} ({:.2e} -> {:.2e}), residues zero {g_residues_zero}",
        g.trend_pass, g.checkpoints[0].discrepancy, g.discrepancy
    ));

    let r = verify_relation(&make_field(Some(5))?, 1.0, 60.0, 1_000_000, &opts)?;
    let r_residues_active = r.rhs_s1 != 0.0 && r.rhs_s0 != 0.0;
    pass &= r.trend_pass && r_residues_active;
    notes.push(format!(
        "Q(sqrt 5) trend {} ({:.2e} -> {:.2e}), residues {:.4} {:.4}",
        r.trend_pass, r.checkpoints[0].discrepancy, r.discrepancy, r.rhs_s1, r.rhs_s0
    ));
    Ok(outcome(pass, notes.join("; ")))
}

fn mellin_identity() -> Result<Outcome> {
    let samples = [
        Complex64::new(0.15, 0.0),
        Complex64::new(0.25, 0.0),
        Complex64::new(0.35, 0.0),
        Complex64::new(0.25, 0.1),
    ];
    let mut worst: f64 = 0.0;
    let mut hl = None;
    for d in [None, Some(-1)] {
        let k = make_field(d)?;
        for s in samples {
            let rep = mellin_identity_check(&k, s, &MellinOptions::default())?;
            worst = worst.max(rep.relative_discrepancy);
            if k.is_rational() && s == samples[1] {
                hl = rep.hardy_littlewood_ratio;
            }
        }
    }
    let hl_ok = hl.is_some_and(|h| (h - 2.0).norm() < 1e-3);
    Ok(outcome(
        worst <= 1e-3 && hl_ok,
        format!("max relative discrepancy {worst:.2e} (tol 1e-3); Hardy-Littlewood factor {hl:?}"),
    ))
}

fn riesz_structure() -> Result<Outcome> {
    let k = make_field(Some(5))?;
    let scan = riesz_scan(&k, 1e2, 1e6, 200, 0.1, &RieszOptions::default())?;
    let p = envelope_fit(&scan.y_grid, &scan.p_values, 1e2, 1e6)?;
    let c = envelope_fit(&scan.y_grid, &scan.corrected, 1e2, 1e6)?;
    Ok(outcome(
        c.slope < p.slope,
        format!("envelope slopes: |P| {:.3}, |P - main| {:.3}", p.slope, c.slope),
    ))
}

fn selftest_json() -> Result<String> {
    let st = selftest()?;
    let cfg = RunConfig::default();
    Report::new("selftest", &cfg, &st.checks, &st).to_json()
}

fn determinism() -> Result<Outcome> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = selftest_json()?;
    let b = selftest_json()?;
    let c = single.install(selftest_json)?;
    let d = wide.install(selftest_json)?;
    let same = a == b && a == c && a == d;
    Ok(outcome(same, format!("{} bytes, four runs identical: {same}", a.len())))
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("kernel oracle equivalence", Duration::from_secs(10), kernel_oracle),
        ("Bessel Mellin identity", Duration::from_secs(5), bessel_identity),
        ("residue decomposition", Duration::from_secs(10), residue_decomposition),
        ("coefficient correctness", Duration::from_secs(60), coefficient_correctness),
        ("functional equation", Duration::from_secs(10), functional_equation),
        ("zero finding", Duration::from_secs(120), zero_finding),
        ("zeta_K'(rho) dual routes", Duration::from_secs(60), derivative_routes),
        ("class number formula", Duration::from_secs(10), class_number_checks),
        ("modular relation", Duration::from_secs(900), modular_relation),
        ("Mellin identity for P", Duration::from_secs(300), mellin_identity),
        ("Riesz structure", Duration::from_secs(600), riesz_structure),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 12 passed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
