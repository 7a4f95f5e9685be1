//! Classical and post-quantum correlation models for the CHSH scenario.
//!
//! Settings are indexed `0 → X, 1 → X′` for Alice and `0 → Y, 1 → Y′` for
//! Bob. Outcomes are ±1.

use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Result};
use crate::linalg::ComplexMatrix;
use crate::scenario::{dot, norm, Bloch, QubitObservable, CHSH_COEFFICIENTS, UNIT_TOL};

/// Probability tolerance for mixtures and no-signaling boxes.
pub const PROBABILITY_TOL: f64 = 1e-12;
/// Bound on `[E(X,Y) − E(X,Y′)]² + [E(X′,Y) + E(X′,Y′)]²` for non-steering
/// correlations with orthogonal `Y, Y′`.
pub const NONSTEERING_QUADRATIC_BOUND: f64 = 2.0;
/// Quantum bound on the same quadratic form.
pub const QUANTUM_QUADRATIC_BOUND: f64 = 4.0;
/// CHSH bound when `Y` and `Y′` obey no uncertainty relation.
pub const SUPERQUANTUM_CHSH_BOUND: f64 = 4.0;

/// The four correlators entering the CHSH combination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub xy: f64,
    pub xy_prime: f64,
    pub x_prime_y: f64,
    pub x_prime_y_prime: f64,
}

impl Correlators {
    pub fn from_array(e: [f64; 4]) -> Self {
        Self {
            xy: e[0],
            xy_prime: e[1],
            x_prime_y: e[2],
            x_prime_y_prime: e[3],
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.xy, self.xy_prime, self.x_prime_y, self.x_prime_y_prime]
    }

    /// `E(X,Y) − E(X,Y′) + E(X′,Y) + E(X′,Y′)`.
    pub fn chsh(&self) -> f64 {
        self.xy - self.xy_prime + self.x_prime_y + self.x_prime_y_prime
    }

    /// `Σ m_ij E(X_i, Y_j)`.
    pub fn combine(&self, m: &[[f64; 2]; 2]) -> f64 {
        m[0][0] * self.xy + m[0][1] * self.xy_prime + m[1][0] * self.x_prime_y
            + m[1][1] * self.x_prime_y_prime
    }
}

/// A deterministic local assignment of ±1 outcomes to all four settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub a_x: i8,
    pub a_x_prime: i8,
    pub b_y: i8,
    pub b_y_prime: i8,
}

impl DeterministicStrategy {
    pub fn alice(&self) -> [i8; 2] {
        [self.a_x, self.a_x_prime]
    }

    pub fn bob(&self) -> [i8; 2] {
        [self.b_y, self.b_y_prime]
    }

    /// `A(X)[B(Y) − B(Y′)] + A(X′)[B(Y) + B(Y′)]`.
    pub fn s_value(&self) -> i32 {
        let (ax, axp) = (self.a_x as i32, self.a_x_prime as i32);
        let (by, byp) = (self.b_y as i32, self.b_y_prime as i32);
        ax * (by - byp) + axp * (by + byp)
    }

    /// `Σ m_ij A(X_i) B(Y_j)` for arbitrary coefficients.
    pub fn s_value_with(&self, m: &[[f64; 2]; 2]) -> f64 {
        let mut s = 0.0;
        for (i, a) in self.alice().into_iter().enumerate() {
            for (j, b) in self.bob().into_iter().enumerate() {
                s += m[i][j] * f64::from(a) * f64::from(b);
            }
        }
        s
    }

    pub fn correlators(&self) -> Correlators {
        let e = |a: i8, b: i8| f64::from(a * b);
        Correlators {
            xy: e(self.a_x, self.b_y),
            xy_prime: e(self.a_x, self.b_y_prime),
            x_prime_y: e(self.a_x_prime, self.b_y),
            x_prime_y_prime: e(self.a_x_prime, self.b_y_prime),
        }
    }
}

/// All 16 deterministic strategies in lexicographic order of
/// `(a_x, a_x′, b_y, b_y′)` with `−1 < +1`.
pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    const VALUES: [i8; 2] = [-1, 1];
    let mut out = Vec::with_capacity(16);
    for a_x in VALUES {
        for a_x_prime in VALUES {
            for b_y in VALUES {
                for b_y_prime in VALUES {
                    out.push(DeterministicStrategy {
                        a_x,
                        a_x_prime,
                        b_y,
                        b_y_prime,
                    });
                }
            }
        }
    }
    out
}

/// Range of the CHSH combination over all hidden-variable mixtures, i.e. the
/// convex hull of the deterministic S-values.
pub fn lhvt_chsh_range() -> (f64, f64) {
    lhvt_range_with(&CHSH_COEFFICIENTS)
}

pub fn lhvt_range_with(m: &[[f64; 2]; 2]) -> (f64, f64) {
    enumerate_strategies()
        .iter()
        .map(|s| s.s_value_with(m))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Distinct S-values of the deterministic strategies, ascending.
pub fn lhvt_s_values(m: &[[f64; 2]; 2]) -> Vec<f64> {
    let mut v: Vec<f64> = enumerate_strategies()
        .iter()
        .map(|s| s.s_value_with(m))
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    v
}

/// A probability distribution `ξ_λ` over the 16 deterministic strategies,
/// indexed as in [`enumerate_strategies`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenVariableMixture {
    weights: [f64; 16],
}

impl HiddenVariableMixture {
    pub fn new(weights: [f64; 16]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(domain(format!("mixture weight {w} is not a probability")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(domain(format!("mixture weights sum to {total}, expected 1")));
        }
        Ok(Self { weights })
    }

    /// Normalizes non-negative raw weights.
    pub fn from_unnormalized(raw: [f64; 16]) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) || total <= 0.0 {
            return Err(domain("raw weights must be non-negative with positive sum"));
        }
        Self::new(raw.map(|w| w / total))
    }

    pub fn uniform() -> Self {
        Self {
            weights: [1.0 / 16.0; 16],
        }
    }

    /// All weight on strategy `index`.
    pub fn point(index: usize) -> Result<Self> {
        if index >= 16 {
            return Err(usage(format!("strategy index {index} out of range 0..16")));
        }
        let mut weights = [0.0; 16];
        weights[index] = 1.0;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    fn weighted_sum(&self, f: impl Fn(&DeterministicStrategy) -> f64) -> f64 {
        self.weights
            .iter()
            .zip(enumerate_strategies().iter())
            .map(|(w, s)| w * f(s))
            .sum()
    }

    pub fn correlators(&self) -> Correlators {
        let e = |k: usize| self.weighted_sum(|s| s.correlators().to_array()[k]);
        Correlators::from_array([e(0), e(1), e(2), e(3)])
    }

    /// `⟨S⟩ = Σ_λ ξ_λ S(λ)`.
    pub fn mean_s(&self) -> f64 {
        self.weighted_sum(|s| f64::from(s.s_value()))
    }

    pub fn mean_s_with(&self, m: &[[f64; 2]; 2]) -> f64 {
        self.weighted_sum(|s| s.s_value_with(m))
    }
}

/// Distribution of `S` under a hidden-variable mixture: `S = +2` with
/// probability `p_plus`, `S = −2` with probability `p_minus`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointDistribution {
    pub p_plus: f64,
    pub p_minus: f64,
}

impl TwoPointDistribution {
    /// The distribution with `P(S = +2) = p_plus`.
    pub fn from_p_plus(p_plus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(domain(format!("p_plus must lie in [0, 1], got {p_plus}")));
        }
        Ok(Self {
            p_plus,
            p_minus: 1.0 - p_plus,
        })
    }

    pub fn mean(&self) -> f64 {
        2.0 * (self.p_plus - self.p_minus)
    }

    /// `m_k = 2^k (p₊ + (−1)^k p₋)`.
    pub fn moment(&self, k: u32) -> f64 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        2f64.powi(k as i32) * (self.p_plus + sign * self.p_minus)
    }

    pub fn moments(&self, n: u32) -> Vec<f64> {
        (1..=n).map(|k| self.moment(k)).collect()
    }
}

pub fn lhvt_s_distribution(mix: &HiddenVariableMixture) -> TwoPointDistribution {
    let mut d = TwoPointDistribution {
        p_plus: 0.0,
        p_minus: 0.0,
    };
    for (w, s) in mix.weights.iter().zip(enumerate_strategies()) {
        match s.s_value() {
            2 => d.p_plus += w,
            -2 => d.p_minus += w,
            other => unreachable!("deterministic CHSH value {other} is not ±2"),
        }
    }
    d
}

/// `[E(X,Y) − E(X,Y′)]² + [E(X′,Y) + E(X′,Y′)]²`.
///
/// Non-steering correlations with orthogonal `Y, Y′` keep this at or below
/// [`NONSTEERING_QUADRATIC_BOUND`]; quantum correlations at or below
/// [`QUANTUM_QUADRATIC_BOUND`]. Single deterministic strategies can reach 4:
/// the bound constrains hidden-state ensembles, not ±1 point assignments.
pub fn nonsteering_quadratic(e: &Correlators) -> Result<f64> {
    for v in e.to_array() {
        if !(v.abs() <= 1.0 + PROBABILITY_TOL) {
            return Err(domain(format!("correlator {v} lies outside [-1, 1]")));
        }
    }
    Ok((e.xy - e.xy_prime).powi(2) + (e.x_prime_y + e.x_prime_y_prime).powi(2))
}

/// Largest CHSH value of the toy steering model when `Y, Y′` are at relative
/// angle `theta`: the two Bob-side terms reach `2 sin(θ/2)` and `2 cos(θ/2)`
/// independently.
pub fn toy_steering_max(theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(usage(format!("theta must lie in [0, π], got {theta}")));
    }
    Ok(2.0 * (0.5 * theta).sin() + 2.0 * (0.5 * theta).cos())
}

/// Correlators of the toy steering model: the assemblage for `X` is steered
/// along `Y − Y′` and the one for `X′` along `Y + Y′`, from two independent
/// hidden-state ensembles.
pub fn toy_steering_correlators(y: &QubitObservable, y_prime: &QubitObservable) -> Correlators {
    let (yb, ypb) = (y.bloch(), y_prime.bloch());
    let unit = |v: Bloch| {
        let n = norm(&v);
        if n < 1e-15 {
            [0.0; 3]
        } else {
            v.map(|c| c / n)
        }
    };
    let r_x = unit([yb[0] - ypb[0], yb[1] - ypb[1], yb[2] - ypb[2]]);
    let r_xp = unit([yb[0] + ypb[0], yb[1] + ypb[1], yb[2] + ypb[2]]);
    Correlators {
        xy: dot(&r_x, &yb),
        xy_prime: dot(&r_x, &ypb),
        x_prime_y: dot(&r_xp, &yb),
        x_prime_y_prime: dot(&r_xp, &ypb),
    }
}

/// One element of a local hidden-state ensemble: weight `ξ_λ`, Alice's
/// expected outcomes for `X` and `X′`, and Bob's hidden state `σ^(λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenState {
    pub weight: f64,
    pub response_x: f64,
    pub response_x_prime: f64,
    pub bloch: Bloch,
}

/// A non-steering assemblage `σ_{i|x} = Σ_λ ξ_λ p_i^(λ)(x) σ^(λ)` generated
/// from one fixed ensemble of hidden states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenStateEnsemble {
    states: Vec<HiddenState>,
}

impl HiddenStateEnsemble {
    pub fn new(states: Vec<HiddenState>) -> Result<Self> {
        if states.is_empty() {
            return Err(usage("ensemble needs at least one hidden state"));
        }
        let mut total = 0.0;
        for s in &states {
            if !(s.weight >= 0.0) {
                return Err(domain(format!("weight {} is negative", s.weight)));
            }
            if !(s.response_x.abs() <= 1.0 && s.response_x_prime.abs() <= 1.0) {
                return Err(domain("outcome expectations must lie in [-1, 1]"));
            }
            if !(norm(&s.bloch) <= 1.0 + UNIT_TOL) {
                return Err(domain("hidden state Bloch vector outside the unit ball"));
            }
            total += s.weight;
        }
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(domain(format!("ensemble weights sum to {total}, expected 1")));
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[HiddenState] {
        &self.states
    }

    /// `[σ_{+|x}, σ_{−|x}]` for Alice's setting `x` (0 → X, 1 → X′).
    pub fn assemblage(&self, x: usize) -> Result<[ComplexMatrix; 2]> {
        if x > 1 {
            return Err(usage(format!("setting index {x} out of range 0..2")));
        }
        let mut plus = ComplexMatrix::zeros(2)?;
        let mut minus = ComplexMatrix::zeros(2)?;
        let id = ComplexMatrix::identity(2)?;
        for s in &self.states {
            let a = if x == 0 { s.response_x } else { s.response_x_prime };
            let sigma = (id + ComplexMatrix::bloch_operator(s.bloch)) * 0.5;
            plus = plus + sigma * (s.weight * 0.5 * (1.0 + a));
            minus = minus + sigma * (s.weight * 0.5 * (1.0 - a));
        }
        Ok([plus, minus])
    }

    /// `E(X_i, Y_j) = Tr[(σ_{+|i} − σ_{−|i}) Y_j]`.
    pub fn correlators(&self, y: &QubitObservable, y_prime: &QubitObservable) -> Result<Correlators> {
        let mut e = [0.0; 4];
        for x in 0..2 {
            let [plus, minus] = self.assemblage(x)?;
            let diff = plus - minus;
            for (j, b) in [y, y_prime].into_iter().enumerate() {
                e[2 * x + j] = (diff * b.matrix()).trace().re;
            }
        }
        Ok(Correlators::from_array(e))
    }
}

/// Conditional table `p(a, b | x, y)` indexed `[x][y][a][b]`, with outcome
/// bit `0 → +1` and `1 → −1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoSignalingBox {
    table: [[[[f64; 2]; 2]; 2]; 2],
}

impl NoSignalingBox {
    pub fn new(table: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self> {
        let b = Self { table };
        if table.iter().flatten().flatten().flatten().any(|p| !(*p >= 0.0)) {
            return Err(domain("box probabilities must be non-negative"));
        }
        let norm_err = b.normalization_error();
        if norm_err > PROBABILITY_TOL {
            return Err(domain(format!(
                "conditional distributions deviate from 1 by {norm_err:e}"
            )));
        }
        let sig = b.signaling();
        if sig > PROBABILITY_TOL {
            return Err(domain(format!("box signals (marginal deviation {sig:e})")));
        }
        Ok(b)
    }

    /// Box of a deterministic strategy.
    pub fn from_strategy(s: &DeterministicStrategy) -> Self {
        let bit = |v: i8| usize::from(v < 0);
        let mut table = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                table[x][y][bit(s.alice()[x])][bit(s.bob()[y])] = 1.0;
            }
        }
        Self { table }
    }

    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.table[x][y][a][b]
    }

    /// `E(x, y) = Σ_{a,b} (−1)^{a⊕b} p(a, b | x, y)`.
    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        let t = &self.table[x][y];
        t[0][0] + t[1][1] - t[0][1] - t[1][0]
    }

    pub fn correlators(&self) -> Correlators {
        Correlators::from_array([
            self.correlator(0, 0),
            self.correlator(0, 1),
            self.correlator(1, 0),
            self.correlator(1, 1),
        ])
    }

    pub fn chsh(&self) -> f64 {
        self.correlators().chsh()
    }

    /// Largest deviation of a conditional distribution's total from 1.
    pub fn normalization_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let total: f64 = self.table[x][y].iter().flatten().sum();
                err = err.max((total - 1.0).abs());
            }
        }
        err
    }

    /// Largest change of either party's marginal under a change of the other
    /// party's setting.
    pub fn signaling(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for x in 0..2 {
            for a in 0..2 {
                let m = |y: usize| self.table[x][y][a][0] + self.table[x][y][a][1];
                dev = dev.max((m(0) - m(1)).abs());
            }
        }
        for y in 0..2 {
            for b in 0..2 {
                let m = |x: usize| self.table[x][y][0][b] + self.table[x][y][1][b];
                dev = dev.max((m(0) - m(1)).abs());
            }
        }
        dev
    }
}

/// The PR box `p(a, b | x, y) = 1/2` iff `a ⊕ b = (1 ⊕ x)·y`.
///
/// With `x = 0 ↔ X` and `y = 1 ↔ Y′` the anticorrelated pair is `(X, Y′)`,
/// the term that enters the CHSH combination with a minus sign, so
/// `E(X,Y) − E(X,Y′) + E(X′,Y) + E(X′,Y′) = 4`.
pub fn pr_box() -> NoSignalingBox {
    let mut table = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    if a ^ b == (1 ^ x) & y {
                        table[x][y][a][b] = 0.5;
                    }
                }
            }
        }
    }
    NoSignalingBox { table }
}
