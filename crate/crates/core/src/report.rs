//! θ scans, bound tables and the self-verification suite behind the
//! `nonlocality` command-line tool.
//!
//! CSV output uses a comma delimiter, `.` decimals, LF line endings and a
//! header row. Numbers are written in scientific notation with 12
//! significant digits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cumulant::{
    classify, cumulants_from_moments, lhvt_cumulant_bounds, CumulantReport, MomentSequence,
    SKEWNESS_BOUND,
};
use crate::error::{usage, Result};
use crate::hidden_variable::{
    enumerate_strategies, lhvt_chsh_range, lhvt_s_distribution, nonsteering_quadratic, pr_box,
    toy_steering_max, HiddenState, HiddenStateEnsemble, HiddenVariableMixture,
    NONSTEERING_QUADRATIC_BOUND, QUANTUM_QUADRATIC_BOUND,
};
use crate::linalg::{commutator, hermitian_eigenvalues, kron, ComplexMatrix};
use crate::scenario::{
    canonical_scenario, correlator, product_state, random_unit_bloch, singlet, Bloch,
    BipartiteScenario, DensityMatrix, QubitObservable,
};
use crate::uncertainty::{
    expectation_diff_bound, expectation_sum_bound, horn_margin, majorization_bound, majorizes,
    max_pure_state_expectation, observable_pair, ProbabilityPair, HORN_TOL,
};

/// Default seed of the randomized checks in [`verify`].
pub const DEFAULT_SEED: u64 = 20_190_917;

/// Formats a number with 12 significant digits.
pub fn format_number(x: f64) -> String {
    // Avoid printing "-0".
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Singlet,
    Product,
    /// Werner state with the configured visibility; visibility 0 is the
    /// maximally mixed state.
    Mixed,
}

impl std::str::FromStr for StateKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singlet" => Ok(Self::Singlet),
            "product" => Ok(Self::Product),
            "mixed" => Ok(Self::Mixed),
            other => Err(usage(format!(
                "unknown state '{other}' (expected singlet, product or mixed)"
            ))),
        }
    }
}

/// Parameters of a θ scan. Deserializes from a flat JSON object; missing
/// keys take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub theta_start: f64,
    pub theta_end: f64,
    pub steps: usize,
    pub state: StateKind,
    pub bloch_a: Bloch,
    pub bloch_b: Bloch,
    pub visibility: f64,
    pub max_order: u32,
    pub output_path: Option<String>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            theta_start: 0.0,
            theta_end: FRAC_PI_2,
            steps: 101,
            state: StateKind::Singlet,
            bloch_a: [0.0, 0.0, 1.0],
            bloch_b: [0.0, 0.0, 1.0],
            visibility: 0.0,
            max_order: 3,
            output_path: None,
        }
    }
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| usage(format!("invalid scan config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(usage(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !(self.theta_start < self.theta_end) {
            return Err(usage("theta_start must be smaller than theta_end"));
        }
        if self.theta_start < 0.0 || self.theta_end > PI {
            return Err(usage("theta range must lie within [0, π]"));
        }
        if !(2..=4).contains(&self.max_order) {
            return Err(usage(format!(
                "max_order must be 2, 3 or 4, got {}",
                self.max_order
            )));
        }
        self.density_matrix().map(|_| ())
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        match self.state {
            StateKind::Singlet => Ok(singlet()),
            StateKind::Product => product_state(self.bloch_a, self.bloch_b),
            StateKind::Mixed => DensityMatrix::werner(self.visibility),
        }
    }

    /// Grid points, both endpoints included exactly.
    pub fn thetas(&self) -> Vec<f64> {
        let step = (self.theta_end - self.theta_start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.theta_end
                } else {
                    self.theta_start + step * i as f64
                }
            })
            .collect()
    }
}

/// One grid point of a θ scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub theta: f64,
    pub mean_s: f64,
    pub abs_mean_s: f64,
    pub chsh_violated: bool,
    pub skew_witness: f64,
    pub skew_violated: bool,
    pub kappa2_qm: f64,
    pub kappa3_qm: f64,
    pub kappa4_qm: Option<f64>,
}

impl ScanRow {
    fn from_report(r: &CumulantReport, with_kappa4: bool) -> Self {
        let skew = r.skewness.expect("scan classifies to order >= 3");
        Self {
            theta: r.theta,
            mean_s: r.mean_s,
            abs_mean_s: r.chsh.value,
            chsh_violated: r.chsh.violated,
            skew_witness: skew.value,
            skew_violated: skew.violated,
            kappa2_qm: r.cumulants[1],
            kappa3_qm: r.cumulants[2],
            kappa4_qm: with_kappa4.then(|| r.cumulants[3]),
        }
    }
}

pub fn scan_rows(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    cfg.validate()?;
    let rho = cfg.density_matrix()?;
    let order = cfg.max_order.max(3);
    let with_kappa4 = cfg.max_order >= 4;
    cfg.thetas()
        .into_par_iter()
        .map(|theta| {
            let report = classify(&rho, &canonical_scenario(theta)?, order)?;
            Ok(ScanRow::from_report(&report, with_kappa4))
        })
        .collect()
}

pub const SCAN_HEADER: &str =
    "theta,mean_s,abs_mean_s,chsh_violated,skew_witness,skew_violated,kappa2_qm,kappa3_qm";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let with_kappa4 = rows.first().is_some_and(|r| r.kappa4_qm.is_some());
    let mut out = String::from(SCAN_HEADER);
    if with_kappa4 {
        out.push_str(",kappa4_qm");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_number(r.theta),
            format_number(r.mean_s),
            format_number(r.abs_mean_s),
            r.chsh_violated,
            format_number(r.skew_witness),
            r.skew_violated,
            format_number(r.kappa2_qm),
            format_number(r.kappa3_qm),
        );
        if let Some(k4) = r.kappa4_qm {
            let _ = write!(out, ",{}", format_number(k4));
        }
        out.push('\n');
    }
    out
}

/// Runs a scan and returns the CSV text.
pub fn run_scan(cfg: &ScanConfig) -> Result<String> {
    Ok(scan_csv(&scan_rows(cfg)?))
}

/// One line of the bounds table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub quantity: String,
    pub min: Option<f64>,
    pub max: f64,
}

pub fn bounds_table() -> Result<Vec<BoundRow>> {
    let row = |q: &str, min: Option<f64>, max: f64| BoundRow {
        quantity: q.to_string(),
        min,
        max,
    };
    let mut rows = Vec::new();
    for (n, label) in [
        (2, "kappa2 LHVT"),
        (3, "kappa3 LHVT"),
        (4, "kappa4 LHVT (numeric)"),
    ] {
        let b = lhvt_cumulant_bounds(n)?;
        rows.push(row(label, Some(b.min), b.max));
    }
    let (lo, hi) = lhvt_chsh_range();
    rows.push(row("CHSH LHVT", Some(lo), hi));
    let s = canonical_scenario(FRAC_PI_4)?.s_operator();
    rows.push(row(
        "CHSH quantum (largest eigenvalue of S)",
        None,
        hermitian_eigenvalues(&s)?.largest(),
    ));
    rows.push(row("CHSH toy steering", None, toy_steering_max(FRAC_PI_2)?));
    rows.push(row("CHSH superquantum (PR box)", None, pr_box().chsh()));
    rows.push(row("quadratic non-steering", None, NONSTEERING_QUADRATIC_BOUND));
    rows.push(row("quadratic quantum", None, QUANTUM_QUADRATIC_BOUND));
    rows.push(row("skewness witness |<S>^3-8<S>|", None, SKEWNESS_BOUND));
    Ok(rows)
}

pub fn render_bounds(rows: &[BoundRow]) -> String {
    let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
    let mut out = format!("{:<width$}  {:>18}  {:>18}\n", "quantity", "min", "max");
    for r in rows {
        let min = r.min.map(format_number).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<width$}  {:>18}  {:>18}",
            r.quantity,
            min,
            format_number(r.max)
        );
    }
    out
}

pub fn run_bounds() -> Result<String> {
    Ok(render_bounds(&bounds_table()?))
}

/// `κ₃ = 2s³ − 8s` under local hidden variables, defined for `|s| ≤ 2`.
pub fn kappa3_lhvt(s: f64) -> Option<f64> {
    (s.abs() <= 2.0).then(|| 2.0 * s.powi(3) - 8.0 * s)
}

/// `κ₃ = 2s³ − 16s` for the singlet.
pub fn kappa3_singlet(s: f64) -> f64 {
    2.0 * s.powi(3) - 16.0 * s
}

/// `κ₃ = 2s³ − 4s` for pure product states with planar Bloch vectors,
/// defined for `|s| ≤ 2`.
pub fn kappa3_product(s: f64) -> Option<f64> {
    (s.abs() <= 2.0).then(|| 2.0 * s.powi(3) - 4.0 * s)
}

pub const KAPPA3_HEADER: &str = "mean_s,kappa3_lhvt,kappa3_singlet,kappa3_product";

/// κ₃ of the three models on `steps` points of `⟨S⟩ ∈ [−2√2, 2√2]`; masked
/// entries are empty fields.
pub fn run_kappa3_models(steps: usize) -> Result<String> {
    if steps < 2 {
        return Err(usage("steps must be at least 2"));
    }
    let lim = 2.0 * SQRT_2;
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    let mut out = format!("{KAPPA3_HEADER}\n");
    for i in 0..steps {
        let s = if i == steps - 1 {
            lim
        } else {
            -lim + 2.0 * lim * i as f64 / (steps - 1) as f64
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_number(s),
            opt(kappa3_lhvt(s)),
            format_number(kappa3_singlet(s)),
            opt(kappa3_product(s))
        );
    }
    Ok(out)
}

/// Deliberate defects for exercising the verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flips the sign of the `X⊗Y′` term of `S`.
    FlipSSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("seed: {}\n", self.seed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {}: {}", c.name, c.detail);
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        );
        out
    }
}

type Check = fn(&mut ChaCha8Rng, Option<Fault>) -> Result<(bool, String)>;

fn scenario_s(sc: &BipartiteScenario, fault: Option<Fault>) -> Result<ComplexMatrix> {
    match fault {
        Some(Fault::FlipSSign) => Ok(sc.with_coefficients([[1.0, 1.0], [1.0, 1.0]])?.s_operator()),
        None => Ok(sc.s_operator()),
    }
}

fn theta_grid(n: usize, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| hi * i as f64 / (n - 1) as f64)
}

fn check_s2_identity(_: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for theta in theta_grid(50, PI) {
        let sc = canonical_scenario(theta)?;
        let s = scenario_s(&sc, fault)?;
        let cx = commutator(&sc.x().matrix(), &sc.x_prime().matrix())?;
        let cy = commutator(&sc.y().matrix(), &sc.y_prime().matrix())?;
        let rhs = ComplexMatrix::identity(4)? * 4.0 + kron(&cx, &cy)?;
        worst = worst.max((s * s).max_abs_diff(&rhs));
    }
    Ok((worst <= 1e-12, format!("max |S^2 - (4 + [X,X']⊗[Y,Y'])| = {worst:.3e}")))
}

fn check_s3_identity(_: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for theta in theta_grid(50, PI) {
        let s = scenario_s(&canonical_scenario(theta)?, fault)?;
        worst = worst.max(s.pow(3).max_abs_diff(&(s * 8.0)));
    }
    Ok((worst <= 1e-12, format!("max |S^3 - 8S| = {worst:.3e}")))
}

fn check_tsirelson_spectrum(_: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for theta in theta_grid(50, PI) {
        let s = scenario_s(&canonical_scenario(theta)?, fault)?;
        worst = worst.max((hermitian_eigenvalues(&s)?.largest() - 2.0 * SQRT_2).abs());
    }
    Ok((worst <= 1e-9, format!("max |lambda_max(S) - 2√2| = {worst:.3e}")))
}

fn check_singlet_covariance(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let rho = singlet();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = QubitObservable::new(random_unit_bloch(rng))?;
        let b = QubitObservable::new(random_unit_bloch(rng))?;
        worst = worst.max((correlator(&rho, &a, &b)? + a.dot(&b)).abs());
    }
    Ok((worst <= 1e-10, format!("100 pairs, max |E(a,b) + a·b| = {worst:.3e}")))
}

fn check_kron_algebra(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let mut worst_mixed: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut worst_spec: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c, d] = [(); 4].map(|_| ComplexMatrix::random_hermitian(2, rng).expect("dim 2"));
        let lhs = kron(&a, &b)? * kron(&c, &d)?;
        let rhs = kron(&(a * c), &(b * d))?;
        worst_mixed = worst_mixed.max(lhs.max_abs_diff(&rhs));
        worst_trace = worst_trace.max((kron(&a, &b)?.trace() - a.trace() * b.trace()).norm());
        let ea = hermitian_eigenvalues(&a)?;
        let eb = hermitian_eigenvalues(&b)?;
        let mut products: Vec<f64> = ea
            .eigenvalues()
            .iter()
            .flat_map(|x| eb.eigenvalues().iter().map(move |y| x * y))
            .collect();
        products.sort_by(|x, y| y.total_cmp(x));
        let ek = hermitian_eigenvalues(&kron(&a, &b)?)?;
        for (p, e) in products.iter().zip(ek.eigenvalues()) {
            worst_spec = worst_spec.max((p - e).abs());
        }
    }
    let ok = worst_mixed <= 1e-12 && worst_trace <= 1e-12 && worst_spec <= 1e-9;
    Ok((
        ok,
        format!(
            "mixed product {worst_mixed:.3e}, trace {worst_trace:.3e}, spectrum {worst_spec:.3e}"
        ),
    ))
}

fn check_horn(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    let mut full_level: f64 = 0.0;
    for i in 0..500 {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let a = ComplexMatrix::random_hermitian(dim, rng)?;
        let b = ComplexMatrix::random_hermitian(dim, rng)?;
        for l in 1..=dim {
            let m = horn_margin(&a, &b, l)?;
            worst = worst.min(m);
            if l == dim {
                full_level = full_level.max(m.abs());
            }
        }
    }
    let ok = worst >= -HORN_TOL && full_level <= 1e-10;
    Ok((
        ok,
        format!("500 pairs, min margin {worst:.3e}, |margin at l=dim| <= {full_level:.3e}"),
    ))
}

fn random_pure_qubit(rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    DensityMatrix::qubit(random_unit_bloch(rng))
}

fn check_majorization(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let states: Vec<DensityMatrix> = (0..1000)
        .map(|_| random_pure_qubit(rng))
        .collect::<Result<_>>()?;
    let mut violations = 0;
    for theta in theta_grid(20, FRAC_PI_2) {
        let s = majorization_bound(theta)?;
        let (y, yp) = observable_pair(theta);
        for rho in &states {
            if !majorizes(&ProbabilityPair::from_state(rho, &y, &yp)?, &s) {
                violations += 1;
            }
        }
    }
    Ok((violations == 0, format!("1000 states x 20 angles, {violations} violations")))
}

fn check_expectation_bounds(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let states: Vec<DensityMatrix> = (0..1000)
        .map(|_| random_pure_qubit(rng))
        .collect::<Result<_>>()?;
    let mut excess = f64::NEG_INFINITY;
    let mut gap: f64 = 0.0;
    for theta in theta_grid(5, FRAC_PI_2) {
        let (y, yp) = observable_pair(theta);
        let sum = y.matrix() + yp.matrix();
        let diff = y.matrix() - yp.matrix();
        let (bs, bd) = (expectation_sum_bound(theta)?, expectation_diff_bound(theta)?);
        for rho in &states {
            excess = excess.max(rho.expectation(&sum)? - bs);
            excess = excess.max(rho.expectation(&diff)? - bd);
        }
        gap = gap.max((max_pure_state_expectation(&sum)?.value - bs).abs());
        gap = gap.max((max_pure_state_expectation(&diff)?.value - bd).abs());
    }
    Ok((
        excess <= 1e-9 && gap <= 1e-6,
        format!("max excess over bound {excess:.3e}, grid maximizer gap {gap:.3e}"),
    ))
}

fn check_lhvt_enumeration(_: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let all = enumerate_strategies();
    let values_ok = all.iter().all(|s| s.s_value().abs() == 2);
    let range = lhvt_chsh_range();
    Ok((
        all.len() == 16 && values_ok && range == (-2.0, 2.0),
        format!("{} strategies, range [{}, {}]", all.len(), range.0, range.1),
    ))
}

fn check_lhvt_closed_forms(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut max_k3: f64 = 0.0;
    for _ in 0..10_000 {
        let raw: [f64; 16] = std::array::from_fn(|_| rng.gen::<f64>().powi(4));
        let mix = HiddenVariableMixture::from_unnormalized(raw)?;
        let d = lhvt_s_distribution(&mix);
        let s = mix.mean_s();
        let k = cumulants_from_moments(&MomentSequence::new(d.moments(3))?);
        worst = worst.max((k[0] - s).abs());
        worst = worst.max((k[1] - (4.0 - s * s)).abs());
        worst = worst.max((k[2] - (2.0 * s.powi(3) - 8.0 * s)).abs());
        max_k3 = max_k3.max(k[2].abs());
    }
    let ok = worst <= 1e-12 && max_k3 <= SKEWNESS_BOUND * 2.0 + 1e-9;
    Ok((ok, format!("10000 mixtures, max deviation {worst:.3e}, max |k3| {max_k3:.6}")))
}

fn check_cumulant_bounds(_: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let b2 = lhvt_cumulant_bounds(2)?;
    let b3 = lhvt_cumulant_bounds(3)?;
    let m3 = 32.0 * 3f64.sqrt() / 9.0;
    let err = (b2.min.abs())
        .max((b2.max - 4.0).abs())
        .max((b3.max - m3).abs())
        .max((b3.min + m3).abs());
    Ok((err <= 1e-9, format!("k2 in [{:.9}, {:.9}], k3 in [{:.9}, {:.9}]", b2.min, b2.max, b3.min, b3.max)))
}

fn check_quantum_closed_forms(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<(bool, String)> {
    let rho = singlet();
    let mut worst: f64 = 0.0;
    for theta in theta_grid(200, PI) {
        let s_op = scenario_s(&canonical_scenario(theta)?, fault)?;
        let m = crate::scenario::moments(&rho, &s_op, 3)?;
        let k = cumulants_from_moments(&MomentSequence::new(m.clone())?);
        let s = m[0];
        worst = worst.max((k[1] - (8.0 - s * s)).abs());
        worst = worst.max((k[2] - (2.0 * s.powi(3) - 16.0 * s)).abs());
    }
    for _ in 0..200 {
        let theta = rng.gen_range(0.0..=PI);
        let (pa, pb) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
        let rho = product_state(
            QubitObservable::in_xz_plane(pa).bloch(),
            QubitObservable::in_xz_plane(pb).bloch(),
        )?;
        let s_op = scenario_s(&canonical_scenario(theta)?, fault)?;
        let m = crate::scenario::moments(&rho, &s_op, 3)?;
        let k = cumulants_from_moments(&MomentSequence::new(m.clone())?);
        let s = m[0];
        worst = worst.max((k[1] - (4.0 - s * s)).abs());
        worst = worst.max((k[2] - (2.0 * s.powi(3) - 4.0 * s)).abs());
    }
    Ok((worst <= 1e-9, format!("singlet and planar products, max deviation {worst:.3e}")))
}

fn check_pr_box(_: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let b = pr_box();
    let q = nonsteering_quadratic(&b.correlators())?;
    let ok = b.chsh() == 4.0 && b.signaling() <= 1e-12 && b.normalization_error() <= 1e-12;
    Ok((ok && q > QUANTUM_QUADRATIC_BOUND, format!("CHSH {}, quadratic {q}, signaling {:.1e}", b.chsh(), b.signaling())))
}

fn check_nonsteering(rng: &mut ChaCha8Rng, _: Option<Fault>) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let ens = random_ensemble(rng)?;
        let sc = canonical_scenario(rng.gen_range(0.0..=PI))?;
        let c = ens.correlators(sc.y(), sc.y_prime())?;
        worst = worst.max(nonsteering_quadratic(&c)?);
    }
    Ok((
        worst <= NONSTEERING_QUADRATIC_BOUND + 1e-12,
        format!("10000 ensembles, max quadratic form {worst:.9}"),
    ))
}

/// A random local hidden-state ensemble with 1 to 6 components.
pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R) -> Result<HiddenStateEnsemble> {
    let k = rng.gen_range(1..=6);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let states = raw
        .iter()
        .map(|w| {
            let deterministic = rng.gen_bool(0.5);
            let (rx, rxp) = if deterministic {
                (sign(rng), sign(rng))
            } else {
                (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
            };
            let radius: f64 = if rng.gen_bool(0.5) { 1.0 } else { rng.gen() };
            HiddenState {
                weight: w / total,
                response_x: rx,
                response_x_prime: rxp,
                bloch: random_unit_bloch(rng).map(|c| c * radius),
            }
        })
        .collect();
    HiddenStateEnsemble::new(states)
}

const CHECKS: &[(&str, Check)] = &[
    ("s2-identity", check_s2_identity),
    ("s3-identity", check_s3_identity),
    ("tsirelson-spectrum", check_tsirelson_spectrum),
    ("singlet-covariance", check_singlet_covariance),
    ("kron-algebra", check_kron_algebra),
    ("horn-partial-sums", check_horn),
    ("majorization-sweep", check_majorization),
    ("expectation-bounds", check_expectation_bounds),
    ("lhvt-enumeration", check_lhvt_enumeration),
    ("lhvt-closed-forms", check_lhvt_closed_forms),
    ("lhvt-cumulant-bounds", check_cumulant_bounds),
    ("quantum-closed-forms", check_quantum_closed_forms),
    ("pr-box", check_pr_box),
    ("nonsteering-ensembles", check_nonsteering),
];

/// Runs the invariant suite. Each check draws from its own generator seeded
/// with `seed + index`, so results do not depend on execution order.
pub fn verify(opts: &VerifyOptions) -> VerifySummary {
    let checks = CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let (passed, detail) = match check(&mut rng, opts.fault) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    VerifySummary {
        seed: opts.seed,
        checks,
    }
}
