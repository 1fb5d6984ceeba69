//! Run configuration, the versioned JSON report envelope, and the self-test.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::{b_via_prime_ideals, CoefficientTable};
use crate::error::{Error, Result};
use crate::field::{class_number_data, make_field, parse_field, FieldDescriptor, L1_DEFAULT_BUDGET};
use crate::lfunction::expansion::expansion_data;
use crate::lfunction::zeros::{argument_principle_count, find_zeros, ZeroScanOptions};
use crate::lfunction::zeta::completed_lambda;
use crate::mellin::bessel::bessel_k0;
use crate::mellin::gamma::EULER_GAMMA;
use crate::mellin::kernel::{z_closed_form, z_line_integral, KernelEvaluator, KernelSpec};
use crate::mellin::residue::{residue_at_zero, residue_calibrate, MatchedPower};
use crate::modular::{lhs_sum, verify_relation, RelationOptions};
use crate::numeric::log_grid;
use crate::riesz::{envelope_fit, mellin_identity_check, MellinOptions};
use crate::summation::Precision;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Everything a run depends on. All computation is deterministic, so a
/// config fully determines the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// `"Q"` or a squarefree integer `d`.
    pub field: String,
    pub precision: Precision,
    /// Coefficient bound `N`.
    pub n_terms: usize,
    /// Zero-scan height `T`.
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    pub quad_step: f64,
    pub c0: f64,
    pub alpha: f64,
    pub eps: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Always true: no randomness anywhere.
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: "Q".into(),
            precision: Precision::Standard,
            n_terms: 1_000_000,
            t: 60.0,
            t_max: None,
            quad_step: 0.01,
            c0: 0.01,
            alpha: 1.0,
            eps: 0.1,
            y_min: 1e2,
            y_max: 1e6,
            points: 200,
            output: None,
            csv: None,
            deterministic: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        parse_field(&self.field)?;
        let positive = [
            ("T", self.t),
            ("quad_step", self.quad_step),
            ("c0", self.c0),
            ("alpha", self.alpha),
            ("y_min", self.y_min),
            ("y_max", self.y_max),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0) {
                return Err(Error::invalid(format!("t_max must be positive, got {t}")));
            }
        }
        if self.n_terms == 0 || self.points < 2 {
            return Err(Error::invalid("n_terms must be positive and points at least 2"));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::invalid(format!("eps must lie in (0, 1/2), got {}", self.eps)));
        }
        if self.y_max <= self.y_min {
            return Err(Error::invalid("y_max must exceed y_min"));
        }
        if !self.deterministic {
            return Err(Error::invalid("deterministic cannot be disabled"));
        }
        Ok(())
    }

    pub fn field_descriptor(&self) -> Result<FieldDescriptor> {
        parse_field(&self.field)
    }

    pub fn kernel_spec(&self, field: &FieldDescriptor) -> Result<KernelSpec> {
        let mut spec = KernelSpec::new(field.r1(), field.r2())?;
        spec.quad_step = self.quad_step;
        spec.t_max = self.t_max;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }
}

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub achieved: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `achieved ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, achieved: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            achieved,
            tolerance,
            pass: achieved <= tolerance,
        }
    }

    /// A yes/no outcome, recorded as `0` (holds) or `1` (fails).
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            achieved: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// The JSON document written by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub status: Status,
    pub checks: &'a [Check],
    pub result: &'a T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, config: &'a RunConfig, checks: &'a [Check], result: &'a T) -> Self {
        let status = if checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        Report {
            schema: SCHEMA_VERSION,
            command,
            config,
            status,
            checks,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn kernel_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (r1, r2) in [(1, 0), (0, 1), (2, 0)] {
        let spec = KernelSpec::new(r1, r2)?;
        for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let li = z_line_integral(&spec, x, spec.c)?;
            let cf = z_closed_form(r1, r2, x).unwrap_or(f64::NAN);
            worst = worst.max((li.value - cf).abs());
        }
    }
    out.push(Check::at_most("kernel line integral vs closed form", worst, 1e-8));

    let spec = KernelSpec::new(2, 0)?;
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.0] {
        let li = z_line_integral(&spec, x / 2.0, -0.5)?.value / 4.0;
        worst = worst.max((li - (bessel_k0(x)? + EULER_GAMMA + (x / 2.0).ln())).abs());
    }
    out.push(Check::at_most("Bessel Mellin identity at c = -1/2", worst, 1e-8));

    let mut worst: f64 = 0.0;
    let mut powers_ok = true;
    for (r1, r2) in [(1, 0), (0, 1), (2, 0)] {
        let consts = residue_calibrate(r1, r2)?;
        let ev = KernelEvaluator::line_integral_only(KernelSpec::new(r1, r2)?);
        for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let gap = ev.z(x)?.value - (ev.z_tilde(x)?.value - residue_at_zero(&consts, x));
            worst = worst.max(gap.abs());
        }
        if (r1, r2) == (2, 0) {
            powers_ok &= consts.matched_power == MatchedPower::TwoPowR1;
        }
    }
    out.push(Check::at_most("Z = Z~ - residue", worst, 1e-8));
    out.push(Check::holds("residue leading power is 2^r1", powers_ok));
    Ok(())
}

fn coefficient_checks(out: &mut Vec<Check>) -> Result<()> {
    let n = 5000;
    let mut mismatches = 0usize;
    for d in [None, Some(-1), Some(5), Some(-3)] {
        let k = make_field(d)?;
        let t = CoefficientTable::build(&k, n, Precision::Standard)?;
        let mut conv = vec![0i64; n + 1];
        for i in 1..=n {
            let mut j = i;
            while j <= n {
                conv[j] += t.a(i) * t.b(j / i);
                j += i;
            }
        }
        mismatches += (1..=n).filter(|&m| conv[m] != i64::from(m == 1)).count();
        let oracle = b_via_prime_ideals(&k, n)?;
        mismatches += (1..=n).filter(|&m| oracle[m] != t.b(m)).count();
    }
    out.push(Check::at_most("coefficient identities (mismatches)", mismatches as f64, 0.0));
    Ok(())
}

fn lfunction_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst: f64 = 0.0;
    for d in [None, Some(-1), Some(5), Some(-3)] {
        let k = make_field(d)?;
        for i in 0..20 {
            let s = Complex64::new(-0.4 + 0.07 * i as f64, 1.0 + 2.3 * i as f64);
            let a = completed_lambda(s, &k)?;
            let b = completed_lambda(Complex64::new(1.0, 0.0) - s, &k)?;
            worst = worst.max((a - b).norm() / a.norm().max(b.norm()));
        }
    }
    out.push(Check::at_most("functional equation defect", worst, 1e-8));

    let q = make_field(None)?;
    let zeros = find_zeros(&q, 30.0, ZeroScanOptions::default())?;
    let expected = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_69];
    let gap = if zeros.len() == 3 {
        zeros.gammas().iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    out.push(Check::at_most("first Riemann zeros", gap, 1e-9));
    let count = argument_principle_count(&q, 30.0)?;
    out.push(Check::at_most("argument principle vs scan", (count - 2.0 * zeros.len() as f64).abs(), 0.1));

    let gauss = make_field(Some(-1))?;
    let zl = find_zeros(&gauss, 30.0, ZeroScanOptions::default())?;
    let worst = zl.zeros.iter().take(20).map(|z| z.derivative_gap).fold(0.0, f64::max);
    out.push(Check::at_most("zeta_K'(rho) route gap, Q(i)", worst, 1e-6));

    let inv = class_number_data(&gauss, L1_DEFAULT_BUDGET)?;
    let residual = (inv.h_raw.unwrap_or(f64::NAN) - 1.0).abs();
    out.push(Check::at_most("class number of Q(i)", residual, 1e-6));
    let e = expansion_data(&make_field(Some(5))?)?;
    out.push(Check::at_most(
        "zeta_K'(0) vs -hR/2 for Q(sqrt 5)",
        e.class_number_gap.unwrap_or(f64::INFINITY),
        1e-6,
    ));
    Ok(())
}

fn relation_checks(out: &mut Vec<Check>) -> Result<()> {
    let q = make_field(None)?;
    let table = CoefficientTable::build(&q, 10_000, Precision::Standard)?;
    let kernel = KernelEvaluator::new(KernelSpec::new(1, 0)?);
    let sym = lhs_sum(&q, q.eta().sqrt(), &table, &kernel, Precision::Standard)?;
    out.push(Check::at_most("symmetric point LHS", sym.value.abs(), 1e-12));
    let rep = verify_relation(&q, 1.0, 40.0, 100_000, &RelationOptions::default())?;
    out.push(Check::holds("modular relation trend, Q", rep.trend_pass));

    let m = mellin_identity_check(
        &q,
        Complex64::new(0.25, 0.0),
        &MellinOptions {
            u_max: (1e6f64).ln(),
            step: 0.05,
            ..MellinOptions::default()
        },
    )?;
    out.push(Check::at_most("Mellin identity, Q, s = 1/4", m.relative_discrepancy, 1e-3));

    let ys = log_grid(1e2, 1e6, 120);
    let synthetic: Vec<f64> = ys.iter().map(|y| y.powf(-0.25) * (3.0 * y.ln()).cos()).collect();
    let fit = envelope_fit(&ys, &synthetic, 1e4, 1e6)?;
    out.push(Check::at_most("envelope fit of y^(-1/4)", (fit.slope + 0.25).abs(), 0.01));
    Ok(())
}

/// A fast pass over the main invariants of every module.
pub fn selftest() -> Result<SelftestReport> {
    let mut checks = Vec::new();
    kernel_checks(&mut checks).map_err(|e| e.in_component("kernels"))?;
    coefficient_checks(&mut checks).map_err(|e| e.in_component("coefficients"))?;
    lfunction_checks(&mut checks).map_err(|e| e.in_component("lfunctions"))?;
    relation_checks(&mut checks).map_err(|e| e.in_component("relation"))?;
    let pass = checks.iter().all(|c| c.pass);
    Ok(SelftestReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let mut cfg = RunConfig {
            field: "-7".into(),
            t_max: Some(80.0),
            csv: Some(PathBuf::from("out.csv")),
            ..RunConfig::default()
        };
        cfg.precision = Precision::Extended;
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), cfg);
        let plain = RunConfig::default();
        assert_eq!(RunConfig::from_toml_str(&plain.to_toml_string().unwrap()).unwrap(), plain);
    }

    #[test]
    fn config_rejects_bad_budgets() {
        assert!(RunConfig::from_toml_str("T = -1.0").is_err());
        assert!(RunConfig::from_toml_str("field = \"4\"").is_err());
        assert!(RunConfig::from_toml_str("eps = 0.7").is_err());
        assert!(RunConfig::from_toml_str("unknown = 1").is_err());
        assert!(RunConfig::from_toml_str("field = \"5\"\nalpha = 2.0").is_ok());
    }

    #[test]
    fn report_envelope_status() {
        let cfg = RunConfig::default();
        let checks = vec![Check::at_most("a", 1.0, 2.0), Check::at_most("b", 3.0, 2.0)];
        let r = Report::new("x", &cfg, &checks, &42);
        assert_eq!(r.status, Status::Fail);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"schema\": 1") && json.contains("\"status\": \"FAIL\""));
    }
}
