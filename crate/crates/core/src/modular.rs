//! Both sides of the modular relation
//!
//! `√α Σ b_n/n Z(α/n) - √β Σ b_n/n Z(β/n) = R_1 + R_0 - (1/√β) Σ_ρ β^ρ G(1-ρ)/ζ_K'(ρ)`
//!
//! with `αβ = η`, `G(s) = Γ^{r1}(s/2) Γ^{r2}(s)` and residue terms `R_1`, `R_0`
//! coming from `s = 1` and `s = 0`. The zero sum is only known to converge
//! when bracketed, so it is reported as running partial sums and judged by
//! its trend.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldSummary};
use crate::lfunction::expansion::{expansion_data, ExpansionData, RING_POINTS, RING_RADIUS};
use crate::lfunction::zeros::{find_zeros, ZeroList, ZeroScanOptions};
use crate::lfunction::zeta::dedekind_unchecked;
use crate::mellin::gamma::log_gamma_unchecked;
use crate::mellin::kernel::{KernelEvaluator, KernelSpec};
use crate::numeric::{binomial, cauchy_taylor, factorial};
use crate::summation::{ordered_par_sum, NeumaierSum, Precision};

/// Required agreement of the two routes for each residue term.
pub const RESIDUE_ROUTE_TOL: f64 = 1e-6;

/// Largest imaginary part tolerated in a combined conjugate pair.
pub const PAIR_IMAG_TOL: f64 = 1e-9;

/// Desk budgets for a full run.
pub const MAX_RELATION_HEIGHT: f64 = 100.0;
pub const MAX_RELATION_TERMS: usize = 10_000_000;

/// `Γ^{r1}((1 - s)/2) Γ^{r2}(1 - s)`.
fn reflected_gamma(field: &FieldDescriptor, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    if field.r1() > 0 {
        acc += log_gamma_unchecked((one - s) * 0.5) * field.r1() as f64;
    }
    if field.r2() > 0 {
        acc += log_gamma_unchecked(one - s) * field.r2() as f64;
    }
    acc.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhsSum {
    pub value: f64,
    /// `√α Σ b_n/n Z(α/n)`.
    pub alpha_part: f64,
    /// `√β Σ b_n/n Z(β/n)`.
    pub beta_part: f64,
    /// Estimated size of the neglected terms `n > N`.
    pub tail_estimate: f64,
    pub target: f64,
    pub n_terms: usize,
}

fn kernel_series(table: &CoefficientTable, kernel: &KernelEvaluator, x: f64, precision: Precision) -> Result<f64> {
    let n = table.n_max();
    if kernel.z_fast(x).is_some() {
        return Ok(ordered_par_sum(1..n + 1, precision, |k| {
            let b = table.b(k);
            if b == 0 {
                0.0
            } else {
                b as f64 / k as f64 * kernel.z_fast(x / k as f64).unwrap_or(0.0)
            }
        }));
    }
    let terms: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let b = table.b(k);
            if b == 0 {
                Ok(0.0)
            } else {
                Ok(b as f64 / k as f64 * kernel.z(x / k as f64)?.value)
            }
        })
        .collect::<Result<_>>()?;
    let mut acc = crate::summation::Accumulator::new(precision);
    for t in terms {
        acc.add(t);
    }
    Ok(acc.value())
}

/// Left-hand side with `β = η / α`, summed over `n ≤ N` in ascending order.
pub fn lhs_sum(
    field: &FieldDescriptor,
    alpha: f64,
    table: &CoefficientTable,
    kernel: &KernelEvaluator,
    precision: Precision,
) -> Result<LhsSum> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let beta = field.eta() / alpha;
    let s_alpha = kernel_series(table, kernel, alpha, precision)?;
    let s_beta = if beta == alpha {
        s_alpha
    } else {
        kernel_series(table, kernel, beta, precision)?
    };
    let alpha_part = alpha.sqrt() * s_alpha;
    let beta_part = beta.sqrt() * s_beta;
    let n = table.n_max() as f64;
    let kappa = kernel.small_x_exponent();
    let log_factor = n.ln().max(1.0);
    let tail = |x: f64| -> Result<f64> { Ok(kernel.z(x / n)?.value.abs() * log_factor / kappa) };
    let tail_estimate = alpha.sqrt() * tail(alpha)? + beta.sqrt() * tail(beta)?;
    let target = 1e-8 * alpha.max(beta).sqrt();
    if tail_estimate > target {
        log::warn!("kernel-sum tail estimate {tail_estimate:e} exceeds target {target:e} at N = {}", table.n_max());
    }
    Ok(LhsSum {
        value: alpha_part - beta_part,
        alpha_part,
        beta_part,
        tail_estimate,
        target,
        n_terms: table.n_max(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueTerm {
    pub value: f64,
    /// Difference between two sampling rings.
    pub err_est: f64,
    /// Closed evaluation through the class number formula, when available.
    pub closed_form: Option<f64>,
    pub route_gap: Option<f64>,
}

impl ResidueTerm {
    fn zero() -> Self {
        ResidueTerm {
            value: 0.0,
            err_est: 0.0,
            closed_form: None,
            route_gap: None,
        }
    }
}

fn leibniz(derivs: &[f64], beta: f64, beta_power: f64, r: u32) -> f64 {
    let m = r as usize - 1;
    let lb = beta.ln();
    let mut acc = 0.0;
    for (i, d) in derivs.iter().enumerate().take(m + 1) {
        acc += binomial(m, i) * d * lb.powi((m - i) as i32);
    }
    -beta_power * acc / (beta.sqrt() * factorial(m))
}

fn check_routes(what: &'static str, value: f64, closed: f64) -> Result<f64> {
    let gap = (value - closed).abs() / closed.abs();
    if gap > RESIDUE_ROUTE_TOL {
        return Err(Error::RouteDisagreement {
            what,
            a: value,
            b: closed,
            gap,
            tolerance: RESIDUE_ROUTE_TOL,
        });
    }
    Ok(gap)
}

/// `M^{(i)}(1)` for `M(s) = (s-1)^r Γ^{r1}((1-s)/2) Γ^{r2}(1-s) / ζ_K(s)`.
pub fn d_constants(field: &FieldDescriptor, order: usize, radius: f64) -> Vec<f64> {
    let r = field.r() as i32;
    let one = Complex64::new(1.0, 0.0);
    let m = |s: Complex64| (s - one).powi(r) * reflected_gamma(field, s) / dedekind_unchecked(s, field);
    cauchy_taylor(m, one, radius, RING_POINTS, order)
        .iter()
        .enumerate()
        .map(|(i, c)| c.re * factorial(i))
        .collect()
}

/// Residue term at `s = 1`; zero when `r = 0`.
pub fn residue_term_s1(field: &FieldDescriptor, beta: f64, expansion: &ExpansionData) -> Result<ResidueTerm> {
    let r = field.r();
    if r == 0 {
        return Ok(ResidueTerm::zero());
    }
    let order = r as usize - 1;
    let d = d_constants(field, order, RING_RADIUS);
    let d_small = d_constants(field, order, 0.8 * RING_RADIUS);
    let value = leibniz(&d, beta, beta, r);
    let err_est = (value - leibniz(&d_small, beta, beta, r)).abs();
    let (closed_form, route_gap) = match (field.is_real_quadratic(), expansion.field.h_r) {
        (true, Some(h_r)) => {
            let closed = -2.0 * (beta * field.d_k() as f64).sqrt() / h_r;
            (Some(closed), Some(check_routes("residue term at s = 1", value, closed)?))
        }
        _ => (None, None),
    };
    Ok(ResidueTerm {
        value,
        err_est,
        closed_form,
        route_gap,
    })
}

/// `N^{(i)}(0)` for `N(s) = s^r Γ^{r1}((1-s)/2) Γ^{r2}(1-s) / ζ_K(s)`, by
/// dividing the gamma-factor series by the Taylor series of `ζ_K(s)/s^r`.
pub fn e_constants(field: &FieldDescriptor, expansion: &ExpansionData, order: usize) -> Result<Vec<f64>> {
    let q = expansion.reduced_taylor_at_0();
    if q.len() <= order || q[0] == 0.0 {
        return Err(Error::invalid("expansion data too short for the requested order"));
    }
    let g: Vec<f64> = cauchy_taylor(
        |s| reflected_gamma(field, s),
        Complex64::new(0.0, 0.0),
        RING_RADIUS,
        RING_POINTS,
        order,
    )
    .iter()
    .map(|c| c.re)
    .collect();
    let mut n = vec![0.0; order + 1];
    for k in 0..=order {
        let mut acc = g[k];
        for j in 0..k {
            acc -= n[j] * q[k - j];
        }
        n[k] = acc / q[0];
    }
    Ok(n.iter().enumerate().map(|(i, c)| c * factorial(i)).collect())
}

/// Residue term at `s = 0`; zero when `r = 0`.
pub fn residue_term_s0(field: &FieldDescriptor, beta: f64, expansion: &ExpansionData) -> Result<ResidueTerm> {
    let r = field.r();
    if r == 0 {
        return Ok(ResidueTerm::zero());
    }
    let order = r as usize - 1;
    let e = e_constants(field, expansion, order)?;
    let value = leibniz(&e, beta, 1.0, r);
    let err_est = expansion.leading_at_0_err / expansion.leading_at_0.abs() * value.abs();
    let (closed_form, route_gap) = match (field.is_real_quadratic(), expansion.class_number_leading) {
        (true, Some(zeta_prime_0)) => {
            let closed = -std::f64::consts::PI / (beta.sqrt() * zeta_prime_0);
            (Some(closed), Some(check_routes("residue term at s = 0", value, closed)?))
        }
        _ => (None, None),
    };
    Ok(ResidueTerm {
        value,
        err_est,
        closed_form,
        route_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketPartial {
    pub bracket_id: usize,
    pub size: usize,
    /// Largest ordinate in the bracket.
    pub gamma_max: f64,
    /// Contribution of the bracket, conjugates included.
    pub term: f64,
    /// Running sum through this bracket.
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSum {
    pub partials: Vec<BracketPartial>,
    /// Largest `|Im|` of a combined conjugate pair before it was dropped.
    pub max_pair_imag: f64,
    pub excluded: usize,
}

impl ZeroSum {
    pub fn total(&self) -> f64 {
        self.partials.last().map_or(0.0, |p| p.partial)
    }

    /// Partial sum over brackets lying entirely below `t`.
    pub fn partial_at(&self, t: f64) -> (f64, usize) {
        let mut value = 0.0;
        let mut zeros = 0;
        for p in &self.partials {
            if p.gamma_max > t {
                break;
            }
            value = p.partial;
            zeros += p.size;
        }
        (value, zeros)
    }
}

/// `-(1/√β) β^ρ Γ^{r1}((1-ρ)/2) Γ^{r2}(1-ρ) / ζ_K'(ρ)` for `ρ` and `ρ̄`.
fn pair_term(field: &FieldDescriptor, beta: f64, rho: Complex64, zeta_k_prime: Complex64) -> Complex64 {
    let lb = beta.ln();
    let term = |z: Complex64, dz: Complex64| -(z * lb).exp() * reflected_gamma(field, z) / dz / beta.sqrt();
    term(rho, zeta_k_prime) + term(rho.conj(), zeta_k_prime.conj())
}

/// Running bracket sums of the zero term, in increasing height.
pub fn zero_sum(field: &FieldDescriptor, beta: f64, zeros: &ZeroList) -> Result<ZeroSum> {
    let terms: Vec<Complex64> = zeros
        .zeros
        .par_iter()
        .map(|z| {
            if z.excluded {
                Complex64::new(0.0, 0.0)
            } else {
                pair_term(field, beta, z.rho(), z.zeta_k_prime)
            }
        })
        .collect();
    let mut max_pair_imag: f64 = 0.0;
    let mut running = NeumaierSum::new();
    let mut partials = Vec::with_capacity(zeros.brackets.len());
    for (id, bracket) in zeros.brackets.iter().enumerate() {
        let mut acc = NeumaierSum::new();
        for &i in bracket {
            let t = terms[i];
            max_pair_imag = max_pair_imag.max(t.im.abs() / t.norm().max(1.0));
            acc.add(t.re);
        }
        running.add(acc.value());
        partials.push(BracketPartial {
            bracket_id: id,
            size: bracket.len(),
            gamma_max: bracket.iter().map(|&i| zeros.zeros[i].gamma).fold(0.0, f64::max),
            term: acc.value(),
            partial: running.value(),
        });
    }
    if max_pair_imag > PAIR_IMAG_TOL {
        return Err(Error::RouteDisagreement {
            what: "conjugate zero pair is not real",
            a: max_pair_imag,
            b: 0.0,
            gap: max_pair_imag,
            tolerance: PAIR_IMAG_TOL,
        });
    }
    Ok(ZeroSum {
        partials,
        max_pair_imag,
        excluded: zeros.zeros.iter().filter(|z| z.excluded).count(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationOptions {
    pub precision: Precision,
    pub scan: ZeroScanOptions,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions {
            precision: Precision::Standard,
            scan: ZeroScanOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    #[serde(rename = "T")]
    pub t: f64,
    pub n_zeros: usize,
    pub zero_partial: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    #[serde(rename = "N_terms")]
    pub n_terms: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub n_zeros: usize,
    pub bracket_count: usize,
    pub largest_bracket: usize,
}

/// The identity rescaled to one of the specialised displays for a
/// particular field type. `lhs` and `rhs` are in that display's units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedForm {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    /// Whether the display is as consistent as the general identity.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub field: FieldSummary,
    pub alpha: f64,
    pub beta: f64,
    /// `|αβ/η - 1|`.
    pub eta_defect: f64,
    pub lhs: f64,
    pub lhs_detail: LhsSum,
    pub rhs_s1: f64,
    pub rhs_s1_detail: ResidueTerm,
    pub rhs_s0: f64,
    pub rhs_s0_detail: ResidueTerm,
    pub rhs_zero_partial: Vec<BracketPartial>,
    pub zero_sum_max_pair_imag: f64,
    pub discrepancy: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// `|disc(T)| ≤ |disc(T/4)|` or `|disc(T)| < 10⁻³ (1 + |lhs|)`.
    pub trend_pass: bool,
    pub truncation: Truncation,
    pub printed_forms: Vec<PrintedForm>,
    pub flags: Vec<String>,
}

impl RelationReport {
    /// CSV of the bracket partial sums.
    pub fn write_partials_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for p in &self.rhs_zero_partial {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn printed_forms(field: &FieldDescriptor, lhs: f64, s1: f64, s0: f64, zeros: f64, main_disc: f64, expansion: &ExpansionData) -> Vec<PrintedForm> {
    let form = |name: &str, scale: f64, rhs: f64| {
        let lhs = lhs / scale;
        let discrepancy = lhs - rhs;
        PrintedForm {
            name: name.to_string(),
            lhs,
            rhs,
            discrepancy,
            consistent: discrepancy.abs() <= (10.0 * main_disc.abs() / scale).max(1e-6 * (1.0 + lhs.abs())),
        }
    };
    if field.is_rational() {
        // Gaussian kernel: Z = 2(e^{-x²} - 1), and Σ μ(n)/n = 0 removes the -1.
        vec![
            form("rational, -1/(2 sqrt(beta)) over all zeros", 2.0, zeros / 2.0),
            form("rational, -1/(2 sqrt(beta)) over zeros with gamma > 0", 2.0, zeros / 4.0),
        ]
    } else if field.is_real_quadratic() {
        // Z = 4(K0(2x) + γ + log x).
        let h_r = expansion.field.h_r.unwrap_or(f64::NAN);
        let beta_dk = s1 / (-2.0 / h_r);
        let printed_s1 = -beta_dk / (2.0 * h_r);
        vec![
            form("real quadratic, specialised display", 4.0, printed_s1 + s0 + zeros / 4.0),
            form("real quadratic, general identity divided by 4", 4.0, (s1 + s0 + zeros) / 4.0),
        ]
    } else {
        // Z = e^{-x} - 1.
        vec![
            form("imaginary quadratic, specialised display", 1.0, zeros / 2.0),
            form("imaginary quadratic, general identity", 1.0, zeros),
        ]
    }
}

/// Assemble both sides up to height `t` with `n` coefficients.
pub fn verify_relation(field: &FieldDescriptor, alpha: f64, t: f64, n: usize, options: &RelationOptions) -> Result<RelationReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(t > 0.0) || t > MAX_RELATION_HEIGHT {
        return Err(Error::invalid(format!("T = {t} outside (0, {MAX_RELATION_HEIGHT}]")));
    }
    if n == 0 || n > MAX_RELATION_TERMS {
        return Err(Error::invalid(format!("N = {n} outside [1, {MAX_RELATION_TERMS}]")));
    }
    let beta = field.eta() / alpha;
    let kernel = KernelEvaluator::new(KernelSpec::new(field.r1(), field.r2())?);

    let (lhs, (zeros, expansion)) = rayon::join(
        || -> Result<LhsSum> {
            let table = CoefficientTable::build(field, n, options.precision).map_err(|e| e.in_component("coefficients"))?;
            lhs_sum(field, alpha, &table, &kernel, options.precision).map_err(|e| e.in_component("lhs_sum"))
        },
        || {
            rayon::join(
                || find_zeros(field, t, options.scan).map_err(|e| e.in_component("find_zeros")),
                || expansion_data(field).map_err(|e| e.in_component("expansion_data")),
            )
        },
    );
    let (lhs, zeros, expansion) = (lhs?, zeros?, expansion?);

    let s1 = residue_term_s1(field, beta, &expansion).map_err(|e| e.in_component("residue_term_s1"))?;
    let s0 = residue_term_s0(field, beta, &expansion).map_err(|e| e.in_component("residue_term_s0"))?;
    let zs = zero_sum(field, beta, &zeros).map_err(|e| e.in_component("zero_sum"))?;

    let residues = s1.value + s0.value;
    let discrepancy = lhs.value - (residues + zs.total());
    let checkpoints: Vec<Checkpoint> = [0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|f| {
            let tc = f * t;
            let (zero_partial, n_zeros) = zs.partial_at(tc);
            Checkpoint {
                t: tc,
                n_zeros,
                zero_partial,
                discrepancy: lhs.value - (residues + zero_partial),
            }
        })
        .collect();
    let first = checkpoints[0].discrepancy.abs();
    let last = checkpoints[3].discrepancy.abs();
    let trend_pass = last <= first || last < 1e-3 * (1.0 + lhs.value.abs());

    let mut flags = zeros.flags.clone();
    if lhs.tail_estimate > lhs.target {
        flags.push(format!(
            "kernel-sum tail estimate {:e} exceeds target {:e}",
            lhs.tail_estimate, lhs.target
        ));
    }
    if let Some(leading) = zs.partials.first().map(|p| p.term.abs()) {
        if lhs.tail_estimate > 0.1 * leading {
            flags.push(format!(
                "kernel-sum tail {:e} is not below 10% of the first bracket term {:e}",
                lhs.tail_estimate, leading
            ));
        }
    }
    let printed = printed_forms(field, lhs.value, s1.value, s0.value, zs.total(), discrepancy, &expansion);
    let field_summary = expansion.field.clone();
    Ok(RelationReport {
        field: field_summary,
        alpha,
        beta,
        eta_defect: (alpha * beta / field.eta() - 1.0).abs(),
        lhs: lhs.value,
        lhs_detail: lhs,
        rhs_s1: s1.value,
        rhs_s1_detail: s1,
        rhs_s0: s0.value,
        rhs_s0_detail: s0,
        zero_sum_max_pair_imag: zs.max_pair_imag,
        rhs_zero_partial: zs.partials,
        discrepancy,
        checkpoints,
        trend_pass,
        truncation: Truncation {
            n_terms: n,
            t,
            n_zeros: zeros.zeros.iter().filter(|z| !z.excluded).count(),
            bracket_count: zeros.brackets.len(),
            largest_bracket: zeros.brackets.iter().map(Vec::len).max().unwrap_or(0),
        },
        printed_forms: printed,
        flags,
    })
}
