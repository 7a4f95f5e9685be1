//! Cumulant-order nonlocality witnesses.
//!
//! A theory shows order-`n` nonlocality when it predicts a value of `κ_n(S)`
//! outside the range `[M−, M+]` reachable by local hidden variables. For the
//! CHSH operator every deterministic strategy gives `S = ±2`, so the LHVT
//! cumulants are polynomials in `⟨S⟩` alone:
//!
//! * `κ₂ = 4 − ⟨S⟩²`, whose non-negativity is the CHSH inequality `|⟨S⟩| ≤ 2`;
//! * `κ₃ = 2⟨S⟩³ − 8⟨S⟩`, bounded by `±32√3/9`, which gives the skewness
//!   inequality `|⟨S⟩³ − 8⟨S⟩| ≤ 16√3/9`.
//!
//! The witnesses evaluate these LHVT functionals at the measured `⟨S⟩`. The
//! quantum cumulants computed from `Tr[ρ S^k]` are reported alongside but are
//! a different quantity.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::hidden_variable::{lhvt_s_values, TwoPointDistribution};
use crate::optimize::{golden_section_max, grid_golden_max};
use crate::scenario::{moments, BipartiteScenario, DensityMatrix, MAX_MOMENT_ORDER};

/// Tolerance of every witness comparison.
pub const WITNESS_TOL: f64 = 1e-10;
/// `|⟨S⟩| ≤ 2` for local hidden variables.
pub const CHSH_BOUND: f64 = 2.0;
/// `16√3/9 ≈ 3.0792`.
pub const SKEWNESS_BOUND: f64 = 16.0 * 1.732_050_807_568_877_2 / 9.0;
/// Grid points over `p₊ ∈ [0, 1]` before golden-section refinement.
pub const BOUNDS_GRID: usize = 10_000;
/// Final bracket width of the refinement over `p₊`.
pub const BOUNDS_TOL: f64 = 1e-10;
/// Largest `|⟨S⟩|` accepted by the witnesses.
pub const MAX_ABS_MEAN: f64 = 4.0;

/// Raw moments `m_1..m_n` of a random variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence(Vec<f64>);

impl MomentSequence {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.is_empty() || m.len() > MAX_MOMENT_ORDER as usize {
            return Err(usage(format!(
                "moment sequence length must lie in 1..={MAX_MOMENT_ORDER}, got {}",
                m.len()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(usage("moments must be finite"));
        }
        Ok(Self(m))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `κ_n = m_n − Σ_{k=1}^{n−1} C(n−1, k−1) κ_k m_{n−k}`.
pub fn cumulants_from_moments(m: &MomentSequence) -> Vec<f64> {
    let m = m.as_slice();
    let mut kappa: Vec<f64> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let mut k_n = m[n - 1];
        for k in 1..n {
            k_n -= binomial(n - 1, k - 1) * kappa[k - 1] * m[n - k - 1];
        }
        kappa.push(k_n);
    }
    kappa
}

fn cumulant_of(moments: Vec<f64>, n: u32) -> f64 {
    let seq = MomentSequence(moments);
    cumulants_from_moments(&seq)[n as usize - 1]
}

/// `κ_n` of the two-point LHVT distribution on `{−2, +2}` with mean `mean_s`.
///
/// The moments are `2^k` for even `k` and `2^(k−1)·⟨S⟩` for odd `k`, so the
/// result is a polynomial in `⟨S⟩` that can be evaluated outside `[−2, 2]`.
pub fn lhvt_cumulant_functional(mean_s: f64, n: u32) -> f64 {
    let m = (1..=n)
        .map(|k| {
            if k % 2 == 0 {
                2f64.powi(k as i32)
            } else {
                2f64.powi(k as i32 - 1) * mean_s
            }
        })
        .collect();
    cumulant_of(m, n)
}

/// Extremes `M− ≤ κ_n ≤ M+` over hidden-variable mixtures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantBounds {
    pub order: u32,
    pub min: f64,
    pub max: f64,
    /// `⟨S⟩` at which the minimum is attained.
    pub argmin_mean: f64,
    /// `⟨S⟩` at which the maximum is attained.
    pub argmax_mean: f64,
}

fn check_bound_order(n: u32) -> Result<()> {
    if (2..=4).contains(&n) {
        Ok(())
    } else {
        Err(usage(format!("cumulant bounds are available for orders 2..=4, got {n}")))
    }
}

/// LHVT range of `κ_n(S)` for the CHSH operator, by a grid over
/// `p₊ = P(S = +2)` refined with golden-section search.
pub fn lhvt_cumulant_bounds(n: u32) -> Result<CumulantBounds> {
    check_bound_order(n)?;
    static CACHE: OnceLock<[CumulantBounds; 3]> = OnceLock::new();
    let cache = CACHE.get_or_init(|| [2, 3, 4].map(two_point_bounds));
    Ok(cache[n as usize - 2])
}

fn two_point_bounds(n: u32) -> CumulantBounds {
    let kappa = |p: f64| {
        let d = TwoPointDistribution {
            p_plus: p,
            p_minus: 1.0 - p,
        };
        cumulant_of(d.moments(n), n)
    };
    let (p_max, max) = grid_golden_max(kappa, 0.0, 1.0, BOUNDS_GRID, BOUNDS_TOL);
    let (p_min, neg_min) = grid_golden_max(|p| -kappa(p), 0.0, 1.0, BOUNDS_GRID, BOUNDS_TOL);
    CumulantBounds {
        order: n,
        min: -neg_min,
        max,
        argmin_mean: 4.0 * p_min - 2.0,
        argmax_mean: 4.0 * p_max - 2.0,
    }
}

/// A finite distribution: support points and probabilities.
fn cumulant_of_distribution(values: &[f64], weights: &[f64], n: u32) -> f64 {
    let m = (1..=n)
        .map(|k| {
            values
                .iter()
                .zip(weights)
                .map(|(v, w)| w * v.powi(k as i32))
                .sum()
        })
        .collect();
    cumulant_of(m, n)
}

/// Maximizes `sign·κ_n` over distributions on `values`. Two-point supports
/// are searched exhaustively on a grid, then mass transfers between every
/// pair of support points are refined by golden section until no move helps.
fn simplex_extreme(values: &[f64], n: u32, sign: f64) -> (f64, f64) {
    let k = values.len();
    let f = |w: &[f64]| sign * cumulant_of_distribution(values, w, n);
    let mut best_w = vec![0.0; k];
    best_w[0] = 1.0;
    let mut best = f(&best_w);
    for i in 0..k {
        for j in i + 1..k {
            let g = |p: f64| {
                let mut w = vec![0.0; k];
                w[i] = p;
                w[j] = 1.0 - p;
                f(&w)
            };
            let (p, v) = grid_golden_max(g, 0.0, 1.0, 1_000, BOUNDS_TOL);
            if v > best {
                best = v;
                best_w = vec![0.0; k];
                best_w[i] = p;
                best_w[j] = 1.0 - p;
            }
        }
    }
    for _ in 0..200 {
        let start = best;
        for i in 0..k {
            for j in 0..k {
                if i == j || best_w[i] <= 0.0 {
                    continue;
                }
                let moved = |t: f64| {
                    let mut w = best_w.clone();
                    w[i] -= t;
                    w[j] += t;
                    w
                };
                let (t, v) = golden_section_max(|t| f(&moved(t)), 0.0, best_w[i], BOUNDS_TOL);
                if v > best {
                    best = v;
                    best_w = moved(t);
                }
            }
        }
        if best - start <= 1e-14 {
            break;
        }
    }
    let mean = values.iter().zip(&best_w).map(|(v, w)| v * w).sum();
    (sign * best, mean)
}

/// LHVT range of `κ_n(S)` for `S = Σ m_ij X_i ⊗ Y_j` with arbitrary
/// coefficients.
pub fn lhvt_cumulant_bounds_with(coefficients: &[[f64; 2]; 2], n: u32) -> Result<CumulantBounds> {
    check_bound_order(n)?;
    let values = lhvt_s_values(coefficients);
    if values.len() == 1 {
        return Ok(CumulantBounds {
            order: n,
            min: 0.0,
            max: 0.0,
            argmin_mean: values[0],
            argmax_mean: values[0],
        });
    }
    let (max, argmax_mean) = simplex_extreme(&values, n, 1.0);
    let (min, argmin_mean) = simplex_extreme(&values, n, -1.0);
    Ok(CumulantBounds {
        order: n,
        min,
        max,
        argmin_mean,
        argmax_mean,
    })
}

/// A witness value, its LHVT bound, and whether the bound is exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
}

fn check_mean(mean_s: f64) -> Result<()> {
    if mean_s.is_finite() && mean_s.abs() <= MAX_ABS_MEAN + 1e-12 {
        Ok(())
    } else {
        Err(usage(format!("|<S>| must not exceed 4, got {mean_s}")))
    }
}

/// `|⟨S⟩|` against the CHSH bound 2.
pub fn chsh_witness(mean_s: f64) -> Result<WitnessOutcome> {
    check_mean(mean_s)?;
    let value = mean_s.abs();
    Ok(WitnessOutcome {
        value,
        bound: CHSH_BOUND,
        violated: value > CHSH_BOUND + WITNESS_TOL,
    })
}

/// `|⟨S⟩³ − 8⟨S⟩|` against `16√3/9`.
pub fn skewness_witness(mean_s: f64) -> Result<WitnessOutcome> {
    check_mean(mean_s)?;
    let value = (mean_s.powi(3) - 8.0 * mean_s).abs();
    Ok(WitnessOutcome {
        value,
        bound: SKEWNESS_BOUND,
        violated: value > SKEWNESS_BOUND + WITNESS_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "order-2 nonlocal")]
    Order2,
    #[serde(rename = "order-3 nonlocal")]
    Order3,
    #[serde(rename = "higher")]
    Higher,
}

impl Verdict {
    fn from_order(order: Option<u32>) -> Self {
        match order {
            None => Verdict::Classical,
            Some(2) => Verdict::Order2,
            Some(3) => Verdict::Order3,
            Some(_) => Verdict::Higher,
        }
    }
}

/// One cumulant order: the LHVT range, the witness value tested against it,
/// and the quantum cumulant of the same order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub order: u32,
    pub classical_min: f64,
    pub classical_max: f64,
    pub witness_value: f64,
    pub quantum_cumulant: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantReport {
    pub theta: f64,
    pub mean_s: f64,
    pub moments: MomentSequence,
    /// Quantum cumulants `κ_1..κ_n` of `S` in the given state.
    pub cumulants: Vec<f64>,
    pub orders: Vec<OrderCheck>,
    pub chsh: WitnessOutcome,
    pub skewness: Option<WitnessOutcome>,
    pub violated_orders: Vec<u32>,
    /// Range and witness of the order named by the verdict (the highest
    /// tested order when classical).
    pub classical_min: f64,
    pub classical_max: f64,
    pub witness_value: f64,
    /// The highest violated order.
    pub verdict: Verdict,
}

/// Computes the quantum moments and cumulants of `S` and tests every order
/// from 2 to `max_order` against its LHVT range.
///
/// For the CHSH coefficients the order-`n` witness is the LHVT functional
/// `κ_n(⟨S⟩)` evaluated at the measured mean; orders 2 and 3 are decided by
/// [`chsh_witness`] and [`skewness_witness`]. For other coefficients the
/// quantum `κ_n` is compared with bounds from [`lhvt_cumulant_bounds_with`].
pub fn classify(
    rho: &DensityMatrix,
    sc: &BipartiteScenario,
    max_order: u32,
) -> Result<CumulantReport> {
    if !(2..=4).contains(&max_order) {
        return Err(usage(format!("max_order must be 2, 3 or 4, got {max_order}")));
    }
    if rho.dim() != 4 {
        return Err(usage("classification needs a two-qubit state"));
    }
    let m = moments(rho, &sc.s_operator(), max_order)?;
    let mean_s = m[0];
    let seq = MomentSequence::new(m)?;
    let cumulants = cumulants_from_moments(&seq);
    let chsh = chsh_witness(mean_s)?;
    let skewness = if max_order >= 3 {
        Some(skewness_witness(mean_s)?)
    } else {
        None
    };

    let mut orders = Vec::new();
    for n in 2..=max_order {
        let quantum = cumulants[n as usize - 1];
        let check = if sc.has_chsh_coefficients() {
            let b = lhvt_cumulant_bounds(n)?;
            let witness_value = lhvt_cumulant_functional(mean_s, n);
            let violated = match n {
                2 => chsh.violated,
                3 => skewness.map(|w| w.violated).unwrap_or(false),
                _ => witness_value < b.min - WITNESS_TOL || witness_value > b.max + WITNESS_TOL,
            };
            OrderCheck {
                order: n,
                classical_min: b.min,
                classical_max: b.max,
                witness_value,
                quantum_cumulant: quantum,
                violated,
            }
        } else {
            let b = lhvt_cumulant_bounds_with(&sc.coefficients(), n)?;
            OrderCheck {
                order: n,
                classical_min: b.min,
                classical_max: b.max,
                witness_value: quantum,
                quantum_cumulant: quantum,
                violated: quantum < b.min - WITNESS_TOL || quantum > b.max + WITNESS_TOL,
            }
        };
        orders.push(check);
    }

    let violated_orders: Vec<u32> = orders.iter().filter(|o| o.violated).map(|o| o.order).collect();
    let deciding = violated_orders.last().copied();
    let shown = orders
        .iter()
        .find(|o| Some(o.order) == deciding)
        .unwrap_or_else(|| orders.last().expect("at least order 2"));
    Ok(CumulantReport {
        theta: sc.theta(),
        mean_s,
        moments: seq,
        cumulants,
        classical_min: shown.classical_min,
        classical_max: shown.classical_max,
        witness_value: shown.witness_value,
        orders,
        chsh,
        skewness,
        verdict: Verdict::from_order(deciding),
        violated_orders,
    })
}
