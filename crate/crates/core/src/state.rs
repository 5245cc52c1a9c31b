use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMat2, Ket2, C64};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A physical qubit state: Hermitian, unit trace, positive semidefinite.
///
/// Entry `(0, 0)` is the ground-state population `⟨g|ρ|g⟩` and entry
/// `(0, 1)` is the coherence `⟨g|ρ|e⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat2,
}

impl DensityMatrix {
    /// Validates the invariants and wraps `mat`.
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        check_physical(&mat)?;
        Ok(Self { mat })
    }

    /// Builds the state from its ground population and coherence `⟨g|ρ|e⟩`.
    pub fn from_populations(rho_gg: f64, coherence: C64) -> Result<Self> {
        Self::new(ComplexMat2::new(
            C64::from(rho_gg),
            coherence,
            coherence.conj(),
            C64::from(1.0 - rho_gg),
        ))
    }

    pub fn pure(psi: &Ket2) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(ComplexMat2::outer(psi, psi))
    }

    /// `(|g⟩ + |e⟩)/√2`, the initial state of the feedback model.
    pub fn plus_state() -> Self {
        Self {
            mat: ComplexMat2::from_real([[0.5, 0.5], [0.5, 0.5]]),
        }
    }

    pub fn ground() -> Self {
        Self {
            mat: ComplexMat2::ground_projector(),
        }
    }

    pub fn excited() -> Self {
        Self {
            mat: ComplexMat2::excited_projector(),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMat2::identity().scale_real(0.5),
        }
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMat2 {
        self.mat
    }

    /// Ground-state population `⟨g|ρ|g⟩`.
    pub fn rho11(&self) -> f64 {
        self.mat[(0, 0)].re
    }

    /// Coherence `⟨g|ρ|e⟩`.
    pub fn rho12(&self) -> C64 {
        self.mat[(0, 1)]
    }

    pub fn excited_population(&self) -> f64 {
        self.mat[(1, 1)].re
    }

    pub fn det(&self) -> f64 {
        self.mat.det().re
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigen(&self.mat).values
    }
}

fn check_physical(mat: &ComplexMat2) -> Result<()> {
    if !mat.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = mat.hermiticity_defect();
    if herm > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let tr = mat.trace().re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotUnit(tr));
    }
    let lowest = hermitian_eigen(mat).values[0];
    if lowest < -PSD_TOL {
        return Err(Error::NotPositive(lowest));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_plus_state() {
        let rho = DensityMatrix::new(*DensityMatrix::plus_state().matrix()).unwrap();
        assert_eq!(rho.rho11(), 0.5);
        assert!(rho.det().abs() < 1e-16);
    }

    #[test]
    fn rejects_non_unit_trace() {
        let m = ComplexMat2::identity().scale_real(0.6);
        assert!(matches!(DensityMatrix::new(m), Err(Error::TraceNotUnit(_))));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMat2::from_real([[0.5, 0.2], [0.1, 0.5]]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = ComplexMat2::from_real([[0.5, 0.7], [0.7, 0.5]]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive(_))));
    }

    #[test]
    fn rejects_nan() {
        let m = ComplexMat2::from_real([[f64::NAN, 0.0], [0.0, 0.5]]);
        assert_eq!(DensityMatrix::new(m), Err(Error::NonFinite));
    }

    #[test]
    fn pure_requires_normalization() {
        let psi = Ket2::new(C64::from(1.0), C64::from(1.0));
        assert!(matches!(DensityMatrix::pure(&psi), Err(Error::NotNormalized(_))));
        assert!(DensityMatrix::pure(&psi.normalized()).is_ok());
    }
}
