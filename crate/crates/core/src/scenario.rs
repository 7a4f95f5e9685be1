//! Qubit observables, the joint CHSH operator `S`, and two-qubit states.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Result};
use crate::linalg::{expectation_unchecked, kron, validate_density, ComplexMatrix, C64};

/// Allowed deviation of an observable's Bloch vector from unit length.
pub const UNIT_TOL: f64 = 1e-12;
/// Highest moment order supported by [`moment`].
pub const MAX_MOMENT_ORDER: u32 = 8;

pub type Bloch = [f64; 3];

pub(crate) fn dot(a: &Bloch, b: &Bloch) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &Bloch) -> f64 {
    dot(a, a).sqrt()
}

/// Uniformly distributed point on the unit sphere.
pub fn random_unit_bloch<R: Rng + ?Sized>(rng: &mut R) -> Bloch {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// A ±1-valued qubit observable `n⃗·σ⃗` with unit Bloch vector `n⃗`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitObservable {
    bloch: Bloch,
}

impl QubitObservable {
    pub fn new(bloch: Bloch) -> Result<Self> {
        let n = norm(&bloch);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(domain(format!(
                "observable Bloch vector must have unit length, got |n| = {n}"
            )));
        }
        Ok(Self { bloch })
    }

    /// `sinφ·σ_x + cosφ·σ_z`, the observable at angle `φ` from `σ_z` in the x–z plane.
    pub fn in_xz_plane(angle: f64) -> Self {
        Self {
            bloch: [angle.sin(), 0.0, angle.cos()],
        }
    }

    pub fn sigma_x() -> Self {
        Self {
            bloch: [1.0, 0.0, 0.0],
        }
    }

    pub fn sigma_y() -> Self {
        Self {
            bloch: [0.0, 1.0, 0.0],
        }
    }

    pub fn sigma_z() -> Self {
        Self {
            bloch: [0.0, 0.0, 1.0],
        }
    }

    pub fn bloch(&self) -> Bloch {
        self.bloch
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::bloch_operator(self.bloch)
    }

    pub fn negated(&self) -> Self {
        Self {
            bloch: self.bloch.map(|x| -x),
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.bloch, &other.bloch)
    }
}

/// Coefficients of `S = X⊗Y − X⊗Y′ + X′⊗Y + X′⊗Y′`; row indexes Alice's
/// setting `(X, X′)`, column Bob's `(Y, Y′)`.
pub const CHSH_COEFFICIENTS: [[f64; 2]; 2] = [[1.0, -1.0], [1.0, 1.0]];

/// Two settings per party and the coefficients `m_ij` of the joint observable
/// `S = Σ m_ij X_i ⊗ Y_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteScenario {
    x: QubitObservable,
    x_prime: QubitObservable,
    y: QubitObservable,
    y_prime: QubitObservable,
    theta: f64,
    coefficients: [[f64; 2]; 2],
}

impl BipartiteScenario {
    /// Arbitrary settings with the CHSH coefficients; `theta` is recorded as
    /// the angle between `x` and `y`.
    pub fn new(
        x: QubitObservable,
        x_prime: QubitObservable,
        y: QubitObservable,
        y_prime: QubitObservable,
    ) -> Self {
        let theta = x.dot(&y).clamp(-1.0, 1.0).acos();
        Self {
            x,
            x_prime,
            y,
            y_prime,
            theta,
            coefficients: CHSH_COEFFICIENTS,
        }
    }

    /// `X = σ_z`, `X′ = σ_x`, `Y = sinθ σ_x + cosθ σ_z`, `Y′ = cosθ σ_x − sinθ σ_z`.
    pub fn canonical(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(usage(format!("theta must lie in [0, π], got {theta}")));
        }
        let (s, c) = theta.sin_cos();
        Ok(Self {
            x: QubitObservable::sigma_z(),
            x_prime: QubitObservable::sigma_x(),
            y: QubitObservable { bloch: [s, 0.0, c] },
            y_prime: QubitObservable {
                bloch: [c, 0.0, -s],
            },
            theta,
            coefficients: CHSH_COEFFICIENTS,
        })
    }

    pub fn with_coefficients(mut self, coefficients: [[f64; 2]; 2]) -> Result<Self> {
        if coefficients.iter().flatten().any(|m| !m.is_finite()) {
            return Err(usage("S coefficients must be finite"));
        }
        self.coefficients = coefficients;
        Ok(self)
    }

    pub fn x(&self) -> &QubitObservable {
        &self.x
    }

    pub fn x_prime(&self) -> &QubitObservable {
        &self.x_prime
    }

    pub fn y(&self) -> &QubitObservable {
        &self.y
    }

    pub fn y_prime(&self) -> &QubitObservable {
        &self.y_prime
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn coefficients(&self) -> [[f64; 2]; 2] {
        self.coefficients
    }

    pub fn has_chsh_coefficients(&self) -> bool {
        self.coefficients == CHSH_COEFFICIENTS
    }

    pub fn alice(&self) -> [&QubitObservable; 2] {
        [&self.x, &self.x_prime]
    }

    pub fn bob(&self) -> [&QubitObservable; 2] {
        [&self.y, &self.y_prime]
    }

    /// `Σ m_ij X_i ⊗ Y_j` as a 4×4 Hermitian matrix.
    pub fn s_operator(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(4).expect("4 is a valid dimension");
        for (i, a) in self.alice().into_iter().enumerate() {
            for (j, b) in self.bob().into_iter().enumerate() {
                let m = self.coefficients[i][j];
                if m != 0.0 {
                    s = s + kron(&a.matrix(), &b.matrix()).expect("qubit factors") * m;
                }
            }
        }
        s
    }
}

pub fn canonical_scenario(theta: f64) -> Result<BipartiteScenario> {
    BipartiteScenario::canonical(theta)
}

pub fn s_operator(sc: &BipartiteScenario) -> ComplexMatrix {
    sc.s_operator()
}

/// A validated density matrix of one or two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        validate_density(&mat)?;
        Ok(Self { mat })
    }

    /// `(𝟙 + r⃗·σ⃗)/2` with `|r⃗| ≤ 1`.
    pub fn qubit(bloch: Bloch) -> Result<Self> {
        let n = norm(&bloch);
        if !n.is_finite() || n > 1.0 + UNIT_TOL {
            return Err(domain(format!(
                "state Bloch vector must lie in the unit ball, got |r| = {n}"
            )));
        }
        let id = ComplexMatrix::identity(2)?;
        Ok(Self {
            mat: (id + ComplexMatrix::bloch_operator(bloch)) * 0.5,
        })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector of length 2 or 4.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let dim = amplitudes.len();
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(domain("state vector must be non-zero and finite"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for a in amplitudes {
            for b in amplitudes {
                entries.push(a * b.conj() / n2);
            }
        }
        Self::new(ComplexMatrix::from_entries(dim, &entries)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self {
            mat: ComplexMatrix::identity(dim)? * (1.0 / dim as f64),
        })
    }

    /// `v·|ψ⁻⟩⟨ψ⁻| + (1 − v)·𝟙/4` for visibility `v ∈ [0, 1]`.
    pub fn werner(visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(domain(format!(
                "Werner visibility must lie in [0, 1], got {visibility}"
            )));
        }
        let mixed = Self::maximally_mixed(4)?.mat;
        Ok(Self {
            mat: singlet().mat * visibility + mixed * (1.0 - visibility),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `Tr[ρ·obs]`.
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        if obs.dim() != self.dim() {
            return Err(usage(format!(
                "state is {0}x{0} but observable is {1}x{1}",
                self.dim(),
                obs.dim()
            )));
        }
        expectation_unchecked(&self.mat, obs)
    }
}

/// The spin singlet `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> DensityMatrix {
    let h = C64::new(0.5, 0.0);
    let mut e = [C64::new(0.0, 0.0); 16];
    e[5] = h;
    e[10] = h;
    e[6] = -h;
    e[9] = -h;
    DensityMatrix {
        mat: ComplexMatrix::from_entries(4, &e).expect("4x4"),
    }
}

/// `ρ_A ⊗ ρ_B` with single-qubit states `(𝟙 + r⃗·σ⃗)/2`.
pub fn product_state(bloch_a: Bloch, bloch_b: Bloch) -> Result<DensityMatrix> {
    let a = DensityMatrix::qubit(bloch_a)?;
    let b = DensityMatrix::qubit(bloch_b)?;
    Ok(DensityMatrix {
        mat: kron(&a.mat, &b.mat)?,
    })
}

/// `E(A, B) = Tr[ρ (A⊗B)]`.
pub fn correlator(rho: &DensityMatrix, a: &QubitObservable, b: &QubitObservable) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(usage("correlators need a two-qubit (4x4) state"));
    }
    rho.expectation(&kron(&a.matrix(), &b.matrix())?)
}

/// `Tr[ρ S^k]` for `1 ≤ k ≤ 8`.
pub fn moment(rho: &DensityMatrix, s: &ComplexMatrix, k: u32) -> Result<f64> {
    if !(1..=MAX_MOMENT_ORDER).contains(&k) {
        return Err(usage(format!(
            "moment order must lie in 1..={MAX_MOMENT_ORDER}, got {k}"
        )));
    }
    rho.expectation(&s.pow(k))
}

/// Raw moments `Tr[ρ S^k]` for `k = 1..=n`.
pub fn moments(rho: &DensityMatrix, s: &ComplexMatrix, n: u32) -> Result<Vec<f64>> {
    if !(1..=MAX_MOMENT_ORDER).contains(&n) {
        return Err(usage(format!(
            "moment order must lie in 1..={MAX_MOMENT_ORDER}, got {n}"
        )));
    }
    if s.dim() != rho.dim() {
        return Err(usage("state and operator dimensions differ"));
    }
    let mut power = *s;
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(rho.expectation(&power)?);
        power = &power * s;
    }
    Ok(out)
}

/// The four correlators `E(X,Y), E(X,Y′), E(X′,Y), E(X′,Y′)` of a scenario.
pub fn scenario_correlators(rho: &DensityMatrix, sc: &BipartiteScenario) -> Result<[f64; 4]> {
    Ok([
        correlator(rho, sc.x(), sc.y())?,
        correlator(rho, sc.x(), sc.y_prime())?,
        correlator(rho, sc.x_prime(), sc.y())?,
        correlator(rho, sc.x_prime(), sc.y_prime())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn canonical_endpoints() {
        let sc = canonical_scenario(0.0).unwrap();
        assert_eq!(sc.y().bloch(), [0.0, 0.0, 1.0]);
        assert_eq!(sc.y_prime().bloch(), [1.0, 0.0, -0.0]);
        let sc = canonical_scenario(FRAC_PI_2).unwrap();
        assert!(sc.y().matrix().max_abs_diff(&ComplexMatrix::pauli_x()) < 1e-15);
        assert!(
            sc.y_prime()
                .matrix()
                .max_abs_diff(&(-ComplexMatrix::pauli_z()))
                < 1e-15
        );
    }

    #[test]
    fn canonical_pairs_are_orthogonal() {
        for i in 0..=50 {
            let sc = canonical_scenario(PI * i as f64 / 50.0).unwrap();
            assert!(sc.y().dot(sc.y_prime()).abs() <= 1e-12);
            assert!(sc.x().dot(sc.x_prime()).abs() <= 1e-12);
            for o in sc.alice().into_iter().chain(sc.bob()) {
                assert!((norm(&o.bloch()) - 1.0).abs() <= UNIT_TOL);
            }
        }
    }

    #[test]
    fn canonical_rejects_out_of_range() {
        assert!(matches!(
            canonical_scenario(-0.1),
            Err(crate::Error::Usage(_))
        ));
        assert!(canonical_scenario(PI + 1e-9).is_err());
        assert!(canonical_scenario(f64::NAN).is_err());
    }

    #[test]
    fn observable_requires_unit_vector() {
        assert!(QubitObservable::new([1.0, 1.0, 0.0]).is_err());
        assert!(QubitObservable::new([0.6, 0.0, 0.8]).is_ok());
    }

    #[test]
    fn singlet_basics() {
        let rho = singlet();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        let z = QubitObservable::sigma_z();
        assert_eq!(correlator(&rho, &z, &z).unwrap(), -1.0);
    }

    #[test]
    fn singlet_correlator_at_pi_over_four() {
        let sc = canonical_scenario(FRAC_PI_4).unwrap();
        let e = correlator(&singlet(), sc.x(), sc.y()).unwrap();
        assert!((e + SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_has_no_correlations() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        let sc = canonical_scenario(0.3).unwrap();
        assert_eq!(scenario_correlators(&rho, &sc).unwrap(), [0.0; 4]);
        assert_eq!(product_state([0.0; 3], [0.0; 3]).unwrap(), rho);
        let s = sc.s_operator();
        assert!(rho.expectation(&s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn product_eigenstate() {
        let rho = product_state([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        let z = QubitObservable::sigma_z();
        assert_eq!(correlator(&rho, &z, &z).unwrap(), 1.0);
    }

    #[test]
    fn product_rejects_outside_ball() {
        assert!(matches!(
            product_state([1.0, 0.1, 0.0], [0.0; 3]),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn correlator_needs_two_qubits() {
        let rho = DensityMatrix::qubit([0.0, 0.0, 1.0]).unwrap();
        let z = QubitObservable::sigma_z();
        assert!(matches!(
            correlator(&rho, &z, &z),
            Err(crate::Error::Usage(_))
        ));
    }

    #[test]
    fn s_expectation_on_singlet() {
        let sc = canonical_scenario(FRAC_PI_4).unwrap();
        let s = s_operator(&sc);
        assert!(s.trace().norm() < 1e-15);
        assert!(s.is_hermitian());
        let mean = singlet().expectation(&s).unwrap();
        assert!((mean + 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn moment_examples() {
        let rho = singlet();
        for theta in [0.0, 0.4, FRAC_PI_4, 1.3, 2.9] {
            let sc = canonical_scenario(theta).unwrap();
            let s = sc.s_operator();
            let m1 = moment(&rho, &s, 1).unwrap();
            let e: f64 = {
                let c = scenario_correlators(&rho, &sc).unwrap();
                c[0] - c[1] + c[2] + c[3]
            };
            assert!((m1 - e).abs() < 1e-12);
            assert!((moment(&rho, &s, 2).unwrap() - 8.0).abs() < 1e-12);
            assert!((moment(&rho, &s, 3).unwrap() - 8.0 * m1).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_order_range() {
        let s = canonical_scenario(0.0).unwrap().s_operator();
        assert!(matches!(
            moment(&singlet(), &s, 0),
            Err(crate::Error::Usage(_))
        ));
        assert!(moment(&singlet(), &s, 9).is_err());
        assert!(moment(&singlet(), &s, 8).is_ok());
    }

    #[test]
    fn werner_interpolates() {
        assert_eq!(
            DensityMatrix::werner(0.0).unwrap(),
            DensityMatrix::maximally_mixed(4).unwrap()
        );
        let w = DensityMatrix::werner(1.0).unwrap();
        assert!(w.matrix().max_abs_diff(singlet().matrix()) < 1e-15);
        assert!(DensityMatrix::werner(1.5).is_err());
    }

    #[test]
    fn pure_state_from_amplitudes() {
        let h = C64::new(1.0, 0.0);
        let rho = DensityMatrix::pure(&[C64::new(0.0, 0.0), h, -h, C64::new(0.0, 0.0)]).unwrap();
        assert!(rho.matrix().max_abs_diff(singlet().matrix()) < 1e-15);
    }
}
