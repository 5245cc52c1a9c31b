//! Dense 2×2 complex linear algebra for single-qubit states and operators.
//!
//! Basis convention used throughout the crate: index 0 is the ground state
//! `|g⟩`, index 1 is the excited state `|e⟩`. With this ordering
//! `σz = diag(1, −1)` satisfies `σz|g⟩ = |g⟩`, and the lowering operator
//! `σ₋ = |g⟩⟨e|` is the matrix `[[0, 1], [0, 0]]`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Traces below this magnitude take the closed traceless path in [`mat_exp_2x2`].
pub const TRACELESS_TOL: f64 = 1e-12;

/// Below this `|μ|` the closed form switches to its Taylor series.
const SMALL_MU: f64 = 1e-4;

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat2 {
    pub entries: [[C64; 2]; 2],
}

impl ComplexMat2 {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            entries: [[m00, m01], [m10, m11]],
        }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self::new(
            C64::from(m[0][0]),
            C64::from(m[0][1]),
            C64::from(m[1][0]),
            C64::from(m[1][1]),
        )
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn pauli_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn pauli_y() -> Self {
        Self::new(ZERO, C64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn pauli_z() -> Self {
        Self::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0))
    }

    /// `σ₋ = |g⟩⟨e|`.
    pub const fn sigma_minus() -> Self {
        Self::new(ZERO, ONE, ZERO, ZERO)
    }

    /// `σ₊ = |e⟩⟨g|`.
    pub const fn sigma_plus() -> Self {
        Self::new(ZERO, ZERO, ONE, ZERO)
    }

    /// `|g⟩⟨g|`.
    pub const fn ground_projector() -> Self {
        Self::new(ONE, ZERO, ZERO, ZERO)
    }

    /// `|e⟩⟨e|`.
    pub const fn excited_projector() -> Self {
        Self::new(ZERO, ZERO, ZERO, ONE)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Ket2, v: &Ket2) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] = u.0[r] * v.0[c].conj();
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let m = &self.entries;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> C64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.entries.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::from(s))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.is_finite())
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.dagger()).scale_real(0.5)
    }

    pub fn apply(&self, v: &Ket2) -> Ket2 {
        let m = &self.entries;
        Ket2([m[0][0] * v.0[0] + m[0][1] * v.0[1], m[1][0] * v.0[0] + m[1][1] * v.0[1]])
    }

    /// Eigenvalues of a general 2×2 matrix from the characteristic polynomial.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let half_tr = self.trace() * 0.5;
        let disc = (half_tr * half_tr - self.det()).sqrt();
        [half_tr - disc, half_tr + disc]
    }

    pub fn exp(&self) -> Self {
        mat_exp_2x2(self)
    }
}

impl Index<(usize, usize)> for ComplexMat2 {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r][c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat2 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r][c]
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMat2 {
    fn add_assign(&mut self, rhs: Self) {
        for r in 0..2 {
            for c in 0..2 {
                self.entries[r][c] += rhs.entries[r][c];
            }
        }
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        mat_mul(&self, &rhs)
    }
}

impl Mul<C64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_real(rhs)
    }
}

pub fn mat_mul(x: &ComplexMat2, y: &ComplexMat2) -> ComplexMat2 {
    let (a, b) = (&x.entries, &y.entries);
    ComplexMat2::new(
        a[0][0] * b[0][0] + a[0][1] * b[1][0],
        a[0][0] * b[0][1] + a[0][1] * b[1][1],
        a[1][0] * b[0][0] + a[1][1] * b[1][0],
        a[1][0] * b[0][1] + a[1][1] * b[1][1],
    )
}

/// Matrix exponential of a 2×2 complex matrix.
///
/// A traceless `m` satisfies `m² = μ²I` with `μ² = −det m`, so
/// `exp(m) = cosh(μ)I + sinh(μ)/μ · m`; `sinh(μ)/μ` falls back to its series
/// for small `|μ|`. Any other input is shifted to traceless first, since the
/// scalar part commutes: `exp(m) = e^{tr/2} · exp(m − (tr/2)I)`.
pub fn mat_exp_2x2(m: &ComplexMat2) -> ComplexMat2 {
    let tr = m.trace();
    if tr.norm() < TRACELESS_TOL {
        return exp_traceless(m);
    }
    let half = tr * 0.5;
    let shifted = *m - ComplexMat2::identity().scale(half);
    exp_traceless(&shifted).scale(half.exp())
}

fn exp_traceless(m: &ComplexMat2) -> ComplexMat2 {
    let mu_sq = -m.det();
    let mu = mu_sq.sqrt();
    let (cosh, sinhc) = if mu.norm() < SMALL_MU {
        (
            ONE + mu_sq / 2.0 + mu_sq * mu_sq / 24.0,
            ONE + mu_sq / 6.0 + mu_sq * mu_sq / 120.0,
        )
    } else {
        (mu.cosh(), mu.sinh() / mu)
    };
    ComplexMat2::identity().scale(cosh) + m.scale(sinhc)
}

/// A two-component complex vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ket2(pub [C64; 2]);

impl Ket2 {
    pub const fn new(c0: C64, c1: C64) -> Self {
        Self([c0, c1])
    }

    pub fn ground() -> Self {
        Self([ONE, ZERO])
    }

    pub fn excited() -> Self {
        Self([ZERO, ONE])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(C64::from(1.0 / self.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self([self.0[0] * s, self.0[1] * s])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self([self.0[0] - other.0[0], self.0[1] - other.0[1]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

/// Spectral decomposition of a Hermitian 2×2 matrix, eigenvalues ascending.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen {
    pub values: [f64; 2],
    pub vectors: [Ket2; 2],
}

/// Closed-form eigendecomposition of a Hermitian 2×2 matrix. Only the
/// Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &ComplexMat2) -> HermitianEigen {
    let h = m.hermitian_part();
    let p = h[(0, 0)].re;
    let r = h[(1, 1)].re;
    let c = h[(0, 1)];
    let mean = 0.5 * (p + r);
    let half_diff = 0.5 * (p - r);
    let radius = half_diff.hypot(c.norm());
    if radius == 0.0 {
        return HermitianEigen {
            values: [mean, mean],
            vectors: [Ket2::ground(), Ket2::excited()],
        };
    }
    // Eigenvector of the upper eigenvalue; pick the form without cancellation.
    let upper = if half_diff >= 0.0 {
        Ket2::new(C64::from(radius + half_diff), c.conj())
    } else {
        Ket2::new(c, C64::from(radius - half_diff))
    }
    .normalized();
    let lower = Ket2::new(-upper.0[1].conj(), upper.0[0].conj());
    HermitianEigen {
        values: [mean - radius, mean + radius],
        vectors: [lower, upper],
    }
}
