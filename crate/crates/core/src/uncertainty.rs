//! Majorization uncertainty bounds for pairs of qubit observables and the
//! partial-sum eigenvalue inequality for sums of Hermitian operators.
//!
//! The pair studied here is `Y = σ_z` and `Y′ = cosθ σ_z + sinθ σ_x` with
//! `θ ∈ [0, π/2]`. The outcome distributions of any state satisfy
//! `p⃗_y ⊕ p⃗_y′ ≺ s⃗(θ) = (1, cos(θ/2), 1 − cos(θ/2), 0)`, which caps
//! `⟨Y + Y′⟩` at `2cos(θ/2)`. For `θ ∈ (π/2, π]` fold with `θ → π − θ` and
//! `Y′ → −Y′`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::optimize::golden_section_max;
use crate::scenario::{DensityMatrix, QubitObservable};

/// Tolerance on majorization prefix sums.
pub const MAJORIZATION_TOL: f64 = 1e-10;
/// Slack allowed in the partial-sum eigenvalue inequality.
pub const HORN_TOL: f64 = 1e-9;
/// Bloch-sphere grid used by [`max_pure_state_expectation`]
/// (polar × azimuthal points).
pub const BLOCH_GRID: usize = 100;
/// Final bracket width of the golden-section refinement on the sphere.
pub const BLOCH_REFINE_TOL: f64 = 1e-8;

fn check_half_range(theta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&theta) {
        Ok(())
    } else {
        Err(usage(format!("theta must lie in [0, π/2], got {theta}")))
    }
}

/// `Y = σ_z`, `Y′ = cosθ σ_z + sinθ σ_x`.
pub fn observable_pair(theta: f64) -> (QubitObservable, QubitObservable) {
    (QubitObservable::sigma_z(), QubitObservable::in_xz_plane(theta))
}

/// The majorization bound `s⃗(θ)` for the outcome distributions of `Y, Y′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVector {
    pub theta: f64,
    pub s: [f64; 4],
}

impl MajorizationVector {
    pub fn prefix_sums(&self) -> [f64; 4] {
        let mut acc = 0.0;
        self.s.map(|x| {
            acc += x;
            acc
        })
    }

    /// `(y⃗ ⊕ y⃗′)↓ · s⃗` with eigenvalues `(1, 1, −1, −1)`: the largest
    /// `⟨Y + Y′⟩` compatible with the majorization bound.
    pub fn expectation_bound(&self) -> f64 {
        [1.0, 1.0, -1.0, -1.0]
            .iter()
            .zip(self.s.iter())
            .map(|(y, s)| y * s)
            .sum()
    }
}

pub fn majorization_bound(theta: f64) -> Result<MajorizationVector> {
    check_half_range(theta)?;
    let c = (0.5 * theta).cos();
    Ok(MajorizationVector {
        theta,
        s: [1.0, c, 1.0 - c, 0.0],
    })
}

/// Outcome distributions `p⃗` of `Y` and `q⃗` of `Y′`, ordered `(+1, −1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityPair {
    pub p: [f64; 2],
    pub q: [f64; 2],
}

impl ProbabilityPair {
    pub fn new(p: [f64; 2], q: [f64; 2]) -> Result<Self> {
        for d in [p, q] {
            if d.iter().any(|x| !(*x >= 0.0)) || (d[0] + d[1] - 1.0).abs() > 1e-12 {
                return Err(domain(format!("{d:?} is not a probability distribution")));
            }
        }
        Ok(Self { p, q })
    }

    /// Born-rule outcome distributions of two ±1 observables on a qubit state.
    pub fn from_state(
        rho: &DensityMatrix,
        y: &QubitObservable,
        y_prime: &QubitObservable,
    ) -> Result<Self> {
        let dist = |o: &QubitObservable| -> Result<[f64; 2]> {
            let e = rho.expectation(&o.matrix())?;
            let up = (0.5 * (1.0 + e)).clamp(0.0, 1.0);
            Ok([up, 1.0 - up])
        };
        Ok(Self {
            p: dist(y)?,
            q: dist(y_prime)?,
        })
    }

    pub fn concatenated(&self) -> [f64; 4] {
        [self.p[0], self.p[1], self.q[0], self.q[1]]
    }
}

/// `a ≺ b` in the prefix-sum sense: after sorting both descending, every
/// prefix sum of `a` is at most the matching prefix sum of `b` (plus `tol`).
pub fn is_majorized_by(a: &[f64], b: &[f64], tol: f64) -> bool {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let (mut pa, mut pb) = (0.0, 0.0);
    for k in 0..a.len().max(b.len()) {
        pa += a.get(k).copied().unwrap_or(0.0);
        pb += b.get(k).copied().unwrap_or(0.0);
        if pa > pb + tol {
            return false;
        }
    }
    true
}

/// `p⃗ ⊕ q⃗ ≺ s⃗`.
pub fn majorizes(pp: &ProbabilityPair, s: &MajorizationVector) -> bool {
    is_majorized_by(&pp.concatenated(), &s.s, MAJORIZATION_TOL)
}

/// `2cos(θ/2)`, the largest `⟨Y + Y′⟩` over qubit states.
pub fn expectation_sum_bound(theta: f64) -> Result<f64> {
    check_half_range(theta)?;
    Ok(2.0 * (0.5 * theta).cos())
}

/// `2sin(θ/2)`, the largest `⟨Y − Y′⟩` over qubit states.
pub fn expectation_diff_bound(theta: f64) -> Result<f64> {
    check_half_range(theta)?;
    Ok(2.0 * (0.5 * theta).sin())
}

/// Best pure state found for a single-qubit observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochMaximum {
    pub value: f64,
    pub polar: f64,
    pub azimuth: f64,
}

impl BlochMaximum {
    pub fn bloch(&self) -> [f64; 3] {
        sphere_point(self.polar, self.azimuth)
    }
}

fn sphere_point(polar: f64, azimuth: f64) -> [f64; 3] {
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    [sp * ca, sp * sa, cp]
}

/// Maximizes `⟨ψ|obs|ψ⟩` over pure qubit states: a `BLOCH_GRID × BLOCH_GRID`
/// sweep of (polar, azimuth) followed by alternating golden-section
/// refinement of each angle around the best grid point.
pub fn max_pure_state_expectation(obs: &ComplexMatrix) -> Result<BlochMaximum> {
    if obs.dim() != 2 {
        return Err(usage("pure-state maximization is defined for qubit observables"));
    }
    if !obs.is_hermitian() {
        return Err(domain("observable is not Hermitian"));
    }
    // ⟨ψ|obs|ψ⟩ = (Tr obs + r⃗·o⃗)/2 with o_k = Tr[obs σ_k].
    let pauli = [
        ComplexMatrix::pauli_x(),
        ComplexMatrix::pauli_y(),
        ComplexMatrix::pauli_z(),
    ];
    let o = pauli.map(|p| (obs * &p).trace().re);
    let tr = obs.trace().re;
    let value = |polar: f64, azimuth: f64| {
        let r = sphere_point(polar, azimuth);
        0.5 * (tr + r[0] * o[0] + r[1] * o[1] + r[2] * o[2])
    };

    let n = BLOCH_GRID;
    let d_polar = PI / (n - 1) as f64;
    let d_azimuth = 2.0 * PI / n as f64;
    let (mut polar, mut azimuth, mut best) = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = d_polar * i as f64;
            (0..n)
                .map(|j| {
                    let a = d_azimuth * j as f64;
                    (p, a, value(p, a))
                })
                .fold((0.0, 0.0, f64::NEG_INFINITY), |acc, c| {
                    if c.2 > acc.2 {
                        c
                    } else {
                        acc
                    }
                })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, f64::NEG_INFINITY), |acc, c| {
            if c.2 > acc.2 {
                c
            } else {
                acc
            }
        });

    let mut w_polar = d_polar;
    let mut w_azimuth = d_azimuth;
    for _ in 0..60 {
        let (p, v) = golden_section_max(
            |t| value(t, azimuth),
            (polar - w_polar).max(0.0),
            (polar + w_polar).min(PI),
            BLOCH_REFINE_TOL,
        );
        if v >= best {
            polar = p;
            best = v;
        }
        let (a, v) = golden_section_max(
            |t| value(polar, t),
            azimuth - w_azimuth,
            azimuth + w_azimuth,
            BLOCH_REFINE_TOL,
        );
        if v >= best {
            azimuth = a;
            best = v;
        }
        w_polar = (w_polar * 0.5).max(BLOCH_REFINE_TOL);
        w_azimuth = (w_azimuth * 0.5).max(BLOCH_REFINE_TOL);
    }
    Ok(BlochMaximum {
        value: best,
        polar,
        azimuth,
    })
}

/// `Σ_{i≤l} α_i + Σ_{j≤l} β_j ≥ Σ_{k≤l} γ_k` for the descending eigenvalues
/// `α` of `a`, `β` of `b` and `γ` of `a + b`.
pub fn horn_check(a: &ComplexMatrix, b: &ComplexMatrix, l: usize) -> Result<bool> {
    Ok(horn_margin(a, b, l)? >= -HORN_TOL)
}

/// Left side minus right side of the partial-sum inequality at level `l`.
pub fn horn_margin(a: &ComplexMatrix, b: &ComplexMatrix, l: usize) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(usage("operators must have the same dimension"));
    }
    if !(1..=a.dim()).contains(&l) {
        return Err(usage(format!(
            "partial-sum level must lie in 1..={}, got {l}",
            a.dim()
        )));
    }
    let alpha = hermitian_eigenvalues(a)?;
    let beta = hermitian_eigenvalues(b)?;
    let gamma = hermitian_eigenvalues(&(*a + *b))?;
    Ok(alpha.partial_sum(l) + beta.partial_sum(l) - gamma.partial_sum(l))
}

/// For orthogonal `Y ⊥ Y′`, writes `⟨Y + Y′⟩ = a√2` and `⟨Y − Y′⟩ = a′√2`
/// and returns the largest `√(a² + a′²)` over `states`. Quantum states keep
/// it at or below 1.
pub fn max_constraint_norm<'a>(
    y: &QubitObservable,
    y_prime: &QubitObservable,
    states: impl IntoIterator<Item = &'a DensityMatrix>,
) -> Result<f64> {
    if y.dot(y_prime).abs() > 1e-12 {
        return Err(usage("the constraint is defined for orthogonal observables"));
    }
    let sum = y.matrix() + y_prime.matrix();
    let diff = y.matrix() - y_prime.matrix();
    let mut best: f64 = 0.0;
    for rho in states {
        let a = rho.expectation(&sum)? / SQRT_2;
        let a_prime = rho.expectation(&diff)? / SQRT_2;
        best = best.max(a.hypot(a_prime));
    }
    Ok(best)
}
