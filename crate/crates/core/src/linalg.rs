//! Dense complex linear algebra for qubit (2×2) and two-qubit (4×4) operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{domain, usage, Error, Result};

pub type C64 = num_complex::Complex64;

/// Entrywise tolerance used to decide Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest tolerated imaginary part of an expectation value.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;
/// Trace tolerance of a density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest allowed eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Sweep limit of the Jacobi eigenvalue iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm at which the Jacobi iteration stops, relative
/// to `max(1, ‖A‖_F)`.
pub const JACOBI_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(usage(format!("matrix dimension must be 2 or 4, got {dim}")))
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim)?;
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    /// Builds a real matrix from `dim * dim` row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let v: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_entries(dim, &v)
    }

    pub fn pauli_x() -> Self {
        Self::qubit([ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::qubit([ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::qubit([ONE, ZERO, ZERO, -ONE])
    }

    fn qubit(entries: [C64; 4]) -> Self {
        let mut data = [ZERO; 16];
        data[..4].copy_from_slice(&entries);
        Self { dim: 2, data }
    }

    /// `b·σ⃗ = b_x σ_x + b_y σ_y + b_z σ_z`.
    pub fn bloch_operator(b: [f64; 3]) -> Self {
        Self::pauli_x() * b[0] + Self::pauli_y() * b[1] + Self::pauli_z() * b[2]
    }

    /// Uniformly random Hermitian matrix with entries in `[-1, 1] + i[-1, 1]`.
    pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            m.data[r * dim + r] = C64::new(rng.gen_range(-1.0..=1.0), 0.0);
            for c in r + 1..dim {
                let z = C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
                m.data[r * dim + c] = z;
                m.data[c * dim + r] = z.conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[r * self.dim + c] = self.data[c * self.dim + r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_abs_diff(&self.adjoint()) <= HERMITIAN_TOL
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= k);
        out
    }

    /// `self^k` by repeated multiplication; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim).expect("dimension already validated");
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = *self;
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = f(*o, *b);
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, k: C64) -> Self {
        self.scale(k)
    }
}

/// Matrix product. Panics on dimension mismatch; see [`matmul`] for the
/// checked form.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        matmul(self, rhs).expect("dimension mismatch in matrix product")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        matmul(&self, &rhs).expect("dimension mismatch in matrix product")
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != b.dim {
        return Err(usage(format!(
            "cannot multiply {0}x{0} by {1}x{1}",
            a.dim, b.dim
        )));
    }
    let n = a.dim;
    let mut out = ComplexMatrix::zeros(n)?;
    for r in 0..n {
        for c in 0..n {
            out.data[r * n + c] = (0..n).map(|k| a.data[r * n + k] * b.data[k * n + c]).sum();
        }
    }
    Ok(out)
}

/// Kronecker product of two qubit operators; block `(i, j)` is `a[i][j]·b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(usage(format!(
            "kron is defined for 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.data[(2 * i + k) * 4 + (2 * j + l)] = a.data[i * 2 + j] * b.data[k * 2 + l];
                }
            }
        }
    }
    Ok(out)
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(matmul(a, b)? - matmul(b, a)?)
}

/// Real eigenvalues of a Hermitian operator, sorted non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    fn from_unsorted(mut v: Vec<f64>) -> Self {
        v.sort_by(|a, b| b.total_cmp(a));
        Self(v)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.0[0]
    }

    pub fn smallest(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Sum of the `l` largest eigenvalues.
    pub fn partial_sum(&self, l: usize) -> f64 {
        self.0.iter().take(l).sum()
    }
}

/// Eigenvalues of a Hermitian matrix, closed form for 2×2 and cyclic complex
/// Jacobi rotations for 4×4.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Spectrum> {
    if !a.is_finite() {
        return Err(domain("matrix has non-finite entries"));
    }
    if !a.is_hermitian() {
        return Err(domain(format!(
            "matrix is not Hermitian (max |A - A†| = {:e})",
            a.max_abs_diff(&a.adjoint())
        )));
    }
    match a.dim {
        2 => {
            let p = a.get(0, 0).re;
            let q = a.get(1, 1).re;
            let b = a.get(0, 1);
            let mean = 0.5 * (p + q);
            let radius = (0.5 * (p - q)).hypot(b.norm());
            Ok(Spectrum(vec![mean + radius, mean - radius]))
        }
        _ => jacobi_eigenvalues(a).map(Spectrum::from_unsorted),
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += m.data[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim;
    let tol = JACOBI_TOL * a.frobenius_norm().max(1.0);
    let mut m = *a;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= tol {
            return Ok((0..n).map(|i| m.data[i * n + i].re).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.data[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // A phase on basis vector q makes the pivot real, then a real
                // Givens rotation annihilates it.
                let phase = (apq / r).conj();
                let app = m.data[p * n + p].re;
                let aqq = m.data[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let mut v = ComplexMatrix::identity(n)?;
                v.data[p * n + p] = C64::new(c, 0.0);
                v.data[p * n + q] = C64::new(s, 0.0);
                v.data[q * n + p] = phase * -s;
                v.data[q * n + q] = phase * c;
                m = (v.adjoint() * m) * v;
            }
        }
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
        off_norm: off_diagonal_norm(&m),
    })
}

/// Checks that `rho` is Hermitian, unit-trace and positive semidefinite.
pub fn validate_density(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_hermitian() {
        return Err(domain("density matrix is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(domain(format!("density matrix trace is {tr}, expected 1")));
    }
    let lowest = hermitian_eigenvalues(rho)?.smallest();
    if lowest < -POSITIVITY_TOL {
        return Err(domain(format!(
            "density matrix has negative eigenvalue {lowest:e}"
        )));
    }
    Ok(())
}

/// `Tr[ρ·obs]` for a density matrix `rho` and Hermitian `obs`.
pub fn trace_expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if rho.dim != obs.dim {
        return Err(usage(format!(
            "state is {0}x{0} but observable is {1}x{1}",
            rho.dim, obs.dim
        )));
    }
    validate_density(rho)?;
    if !obs.is_hermitian() {
        return Err(domain("observable is not Hermitian"));
    }
    expectation_unchecked(rho, obs)
}

/// `Tr[ρ·obs]` without validating `rho`; only the imaginary part is checked.
pub(crate) fn expectation_unchecked(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64> {
    let n = rho.dim;
    let mut tr = ZERO;
    for r in 0..n {
        for k in 0..n {
            tr += rho.data[r * n + k] * obs.data[k * n + r];
        }
    }
    if tr.im.abs() > EXPECTATION_IMAG_TOL {
        return Err(domain(format!(
            "expectation value has imaginary part {:e}",
            tr.im
        )));
    }
    Ok(tr.re)
}
