//! Fisher information of the damping rate `γ`.
//!
//! Four routes are provided and cross-checked against each other:
//!
//! * [`qfi_pure`]: `4[⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²]` for pure-state families;
//! * [`qfi_spectral`]: the eigen-decomposition form, valid at any rank;
//! * [`qfi_closed_2x2`]: `Tr[(∂ρ)²] + Tr[(ρ∂ρ)²]/det ρ`, full-rank qubits only;
//! * [`classical_fisher_projective`]: Fisher information of the fixed
//!   `{|g⟩⟨g|, |e⟩⟨e|}` measurement.
//!
//! Parameter derivatives are central finite differences on a [`StateFamily`].

use serde::Serialize;

use crate::dynamics::{feedback_factor, rho_no_feedback, AnalyticSolution};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMat2, Ket2};
use crate::regime::FeedbackConfig;
use crate::search::maximize_refined;
use crate::state::DensityMatrix;

/// `det ρ` at or below which the closed 2×2 formula is refused.
pub const NEAR_SINGULAR_DET: f64 = 1e-12;
/// Eigenvalues at or below this are dropped from the spectral sums.
pub const SPECTRAL_LAMBDA_TOL: f64 = 1e-12;
/// Outcome probabilities below this are excluded from the classical sum.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// Default central-difference step for a derivative in `γ`.
pub fn default_step(gamma: f64) -> f64 {
    1e-5 * gamma.max(1.0)
}

/// A one-parameter family of qubit states `ρ(γ, t)`.
pub trait StateFamily: Sync {
    fn state(&self, gamma: f64, t: f64) -> Result<DensityMatrix>;
    fn label(&self) -> String;
}

/// Closed-form feedback dynamics with fixed `(a, b, δt)` and `Ω = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackFamily {
    pub a: f64,
    pub b: f64,
    pub delta_t: f64,
}

impl FeedbackFamily {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b, delta_t: 1.0 }
    }

    pub fn from_config(cfg: &FeedbackConfig) -> Self {
        Self {
            a: cfg.a,
            b: cfg.b,
            delta_t: cfg.delta_t,
        }
    }

    pub fn config(&self, gamma: f64) -> Result<FeedbackConfig> {
        FeedbackConfig::new(self.a, self.b, gamma)?.with_delta_t(self.delta_t)
    }
}

impl StateFamily for FeedbackFamily {
    fn state(&self, gamma: f64, t: f64) -> Result<DensityMatrix> {
        AnalyticSolution::new(&self.config(gamma)?)?.state(t)
    }

    fn label(&self) -> String {
        format!("feedback(a={}, b={})", self.a, self.b)
    }
}

/// Amplitude damping without feedback.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoFeedbackFamily;

impl StateFamily for NoFeedbackFamily {
    fn state(&self, gamma: f64, t: f64) -> Result<DensityMatrix> {
        rho_no_feedback(gamma, t)
    }

    fn label(&self) -> String {
        "no_feedback".into()
    }
}

/// Adapter for ad-hoc families given as closures.
pub struct FnFamily<F> {
    f: F,
    label: String,
}

impl<F> FnFamily<F>
where
    F: Fn(f64, f64) -> Result<DensityMatrix> + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self { f, label: label.into() }
    }
}

impl<F> StateFamily for FnFamily<F>
where
    F: Fn(f64, f64) -> Result<DensityMatrix> + Sync,
{
    fn state(&self, gamma: f64, t: f64) -> Result<DensityMatrix> {
        (self.f)(gamma, t)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FisherMethod {
    Pure,
    Spectral,
    Closed2x2,
    Classical,
}

/// A Fisher-information value in units of time².
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherResult {
    pub value: f64,
    pub method: FisherMethod,
    pub gamma: f64,
    pub t: f64,
}

/// Central difference `(ρ(γ+h) − ρ(γ−h)) / 2h`.
pub fn drho_dgamma(family: &dyn StateFamily, gamma: f64, t: f64, h: f64) -> Result<ComplexMat2> {
    if !(h > 0.0) || !(gamma - h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need h > 0 and gamma - h > 0 (gamma = {gamma}, h = {h})"
        )));
    }
    let up = family.state(gamma + h, t)?;
    let down = family.state(gamma - h, t)?;
    Ok((*up.matrix() - *down.matrix()).scale_real(0.5 / h))
}

/// `Tr[(∂ρ)²] + Tr[(ρ∂ρ)²] / det ρ`.
pub fn qfi_closed_2x2(rho: &DensityMatrix, drho: &ComplexMat2) -> Result<f64> {
    let det = rho.det();
    if det <= NEAR_SINGULAR_DET {
        return Err(Error::NearSingular(det));
    }
    let rd = *rho.matrix() * *drho;
    Ok((*drho * *drho).trace().re + (rd * rd).trace().re / det)
}

/// Spectral form
/// `Σ_k (∂λ_k)²/λ_k + Σ_{k≠k'} 2(λ_k − λ_k')²/(λ_k + λ_k') · |⟨k|∂k'⟩|²`.
///
/// Eigenvalue derivatives are `⟨k|∂ρ|k⟩`; for `k ≠ k'` the eigenvector
/// overlap follows from `⟨k|∂ρ|k'⟩ = (λ_k' − λ_k)⟨k|∂k'⟩`.
pub fn qfi_spectral(rho: &DensityMatrix, drho: &ComplexMat2) -> f64 {
    let eig = hermitian_eigen(rho.matrix());
    let element = |k: usize, l: usize| eig.vectors[k].inner(&drho.apply(&eig.vectors[l]));
    let mut total = 0.0;
    for k in 0..2 {
        let lambda = eig.values[k];
        if lambda > SPECTRAL_LAMBDA_TOL {
            total += element(k, k).re.powi(2) / lambda;
        }
    }
    for k in 0..2 {
        for l in 0..2 {
            if k == l {
                continue;
            }
            let (lk, ll) = (eig.values[k], eig.values[l]);
            if lk + ll <= SPECTRAL_LAMBDA_TOL {
                continue;
            }
            // (λ_k − λ_k')² |⟨k|∂k'⟩|² = |⟨k|∂ρ|k'⟩|², which stays finite at degeneracy.
            total += 2.0 * element(k, l).norm_sqr() / (lk + ll);
        }
    }
    total
}

/// QFI routed to the closed form for full-rank states, spectral otherwise.
pub fn qfi_auto(rho: &DensityMatrix, drho: &ComplexMat2) -> (f64, FisherMethod) {
    match qfi_closed_2x2(rho, drho) {
        Ok(v) => (v, FisherMethod::Closed2x2),
        Err(_) => (qfi_spectral(rho, drho), FisherMethod::Spectral),
    }
}

/// QFI of `family` at `(γ, t)`.
pub fn quantum_fisher(family: &dyn StateFamily, gamma: f64, t: f64, h: f64) -> Result<FisherResult> {
    let rho = family.state(gamma, t)?;
    let drho = drho_dgamma(family, gamma, t, h)?;
    let (value, method) = qfi_auto(&rho, &drho);
    Ok(FisherResult {
        value,
        method,
        gamma,
        t,
    })
}

/// Spectral QFI of `family` at `(γ, t)`, regardless of rank.
pub fn quantum_fisher_spectral(family: &dyn StateFamily, gamma: f64, t: f64, h: f64) -> Result<FisherResult> {
    let rho = family.state(gamma, t)?;
    let drho = drho_dgamma(family, gamma, t, h)?;
    Ok(FisherResult {
        value: qfi_spectral(&rho, &drho),
        method: FisherMethod::Spectral,
        gamma,
        t,
    })
}

/// The two inner products entering the pure-state QFI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PureFisherTerms {
    /// `⟨∂ψ|∂ψ⟩`
    pub velocity: f64,
    /// `|⟨∂ψ|ψ⟩|²`
    pub overlap: f64,
}

impl PureFisherTerms {
    pub fn qfi(&self) -> f64 {
        4.0 * (self.velocity - self.overlap)
    }

    /// `4⟨∂ψ|∂ψ⟩` without the overlap correction.
    pub fn velocity_only(&self) -> f64 {
        4.0 * self.velocity
    }
}

pub fn pure_fisher_terms<F>(psi: F, gamma: f64, h: f64) -> Result<PureFisherTerms>
where
    F: Fn(f64) -> Ket2,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("h must be > 0 (got {h})")));
    }
    let (mid, up, down) = (psi(gamma), psi(gamma + h), psi(gamma - h));
    for v in [&mid, &up, &down] {
        let n = v.norm();
        if !((n - 1.0).abs() <= 1e-10) {
            return Err(Error::NotNormalized(n));
        }
    }
    let d = up.sub(&down).scale((0.5 / h).into());
    Ok(PureFisherTerms {
        velocity: d.inner(&d).re,
        overlap: d.inner(&mid).norm_sqr(),
    })
}

/// `4[⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²]` with `|∂ψ⟩` by central difference.
pub fn qfi_pure<F>(psi: F, gamma: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Ket2,
{
    pure_fisher_terms(psi, gamma, h).map(|terms| terms.qfi())
}

/// Outcome probabilities `(p_g, p_e)` of the computational-basis measurement.
pub fn projective_probabilities(rho: &DensityMatrix) -> [f64; 2] {
    [rho.rho11(), rho.excited_population()]
}

/// `Σ_k p_k (∂ ln p_k)²` for the `{|g⟩⟨g|, |e⟩⟨e|}` measurement.
pub fn classical_fisher_projective(family: &dyn StateFamily, gamma: f64, t: f64, h: f64) -> Result<FisherResult> {
    if !(h > 0.0) || !(gamma - h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need h > 0 and gamma - h > 0 (gamma = {gamma}, h = {h})"
        )));
    }
    let p = projective_probabilities(&family.state(gamma, t)?);
    let up = projective_probabilities(&family.state(gamma + h, t)?);
    let down = projective_probabilities(&family.state(gamma - h, t)?);
    let value = (0..2)
        .filter(|&k| p[k] >= PROBABILITY_FLOOR)
        .map(|k| {
            let dp = (up[k] - down[k]) / (2.0 * h);
            dp * dp / p[k]
        })
        .sum();
    Ok(FisherResult {
        value,
        method: FisherMethod::Classical,
        gamma,
        t,
    })
}

/// `e^{−γtK²} t² K⁴ / (2 − e^{−γtK²})` for feedback factor `K²`.
pub fn fisher_projective_from_factor(factor: f64, gamma: f64, t: f64) -> f64 {
    let decay = (-gamma * t * factor).exp();
    decay * t * t * factor * factor / (2.0 - decay)
}

/// Closed-form projective Fisher information with the regime-appropriate `K²`.
pub fn fisher_projective_closed(a: f64, b: f64, gamma: f64, t: f64) -> f64 {
    fisher_projective_from_factor(feedback_factor(a, b), gamma, t)
}

/// Approximate and numerically located maximum of `f(t)/t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePeak {
    pub factor: f64,
    /// `1 / (γK²)`
    pub t_approx: f64,
    /// `K² / ((2e − 1)γ)`
    pub rate_approx: f64,
    pub t_numeric: f64,
    pub rate_numeric: f64,
}

pub fn fisher_rate_peak_from_factor(factor: f64, gamma: f64) -> Result<RatePeak> {
    if !(factor > 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need K² > 0 and gamma > 0 (K² = {factor}, gamma = {gamma})"
        )));
    }
    let t_approx = 1.0 / (gamma * factor);
    let rate_approx = factor / ((2.0 * std::f64::consts::E - 1.0) * gamma);
    let rate = |t: f64| fisher_projective_from_factor(factor, gamma, t) / t;
    let (t_numeric, rate_numeric) = maximize_refined(rate, 1e-6 * t_approx, 10.0 * t_approx);
    Ok(RatePeak {
        factor,
        t_approx,
        rate_approx,
        t_numeric,
        rate_numeric,
    })
}

pub fn fisher_rate_peak(a: f64, b: f64, gamma: f64) -> Result<RatePeak> {
    fisher_rate_peak_from_factor(feedback_factor(a, b), gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    struct Constant(DensityMatrix);

    impl StateFamily for Constant {
        fn state(&self, _: f64, _: f64) -> Result<DensityMatrix> {
            Ok(self.0)
        }
        fn label(&self) -> String {
            "constant".into()
        }
    }

    fn diagonal_family(gamma: f64, _t: f64) -> Result<DensityMatrix> {
        let p = 0.3 + 0.4 * (gamma * 2.0).sin().powi(2) * 0.5;
        DensityMatrix::from_populations(p, C64::from(0.0))
    }

    #[test]
    fn constant_family_has_zero_derivative_and_information() {
        let fam = Constant(DensityMatrix::maximally_mixed());
        let d = drho_dgamma(&fam, 0.1, 1.0, 1e-5).unwrap();
        assert_eq!(d, ComplexMat2::zero());
        let rho = DensityMatrix::maximally_mixed();
        assert_eq!(qfi_closed_2x2(&rho, &d).unwrap(), 0.0);
        assert_eq!(qfi_spectral(&rho, &d), 0.0);
        assert_eq!(qfi_spectral(&DensityMatrix::plus_state(), &d), 0.0);
        assert_eq!(classical_fisher_projective(&fam, 0.1, 1.0, 1e-5).unwrap().value, 0.0);
    }

    #[test]
    fn derivative_preconditions() {
        let fam = NoFeedbackFamily;
        assert!(drho_dgamma(&fam, 0.1, 1.0, 0.0).is_err());
        assert!(drho_dgamma(&fam, 0.1, 1.0, 0.2).is_err());
    }

    #[test]
    fn no_feedback_population_derivative() {
        let d = drho_dgamma(&NoFeedbackFamily, 0.1, 1.0, default_step(0.1)).unwrap();
        // d(1 − ρ_gg)/dγ = d(½e^{−γt})/dγ = −(t/2)e^{−γt}
        let expected = -0.5 * (-0.1f64).exp();
        assert!((-d[(0, 0)].re - expected).abs() < 1e-9);
        assert!((expected + 0.452_418_709_017_979_8).abs() < 1e-15);
        assert!(d.hermiticity_defect() < 1e-8);
        assert!(d.trace().norm() < 1e-8);
    }

    #[test]
    fn diagonal_family_reduces_to_population_formula() {
        let fam = FnFamily::new("diag", diagonal_family);
        let (gamma, h) = (0.7, 1e-5);
        let rho = fam.state(gamma, 0.0).unwrap();
        let d = drho_dgamma(&fam, gamma, 0.0, h).unwrap();
        let p = rho.rho11();
        let dp = d[(0, 0)].re;
        let expected = dp * dp / (p * (1.0 - p));
        // d[(1,1)] = −d[(0,0)] only up to ε/h, hence the 1e-9 slack.
        assert!((qfi_closed_2x2(&rho, &d).unwrap() - expected).abs() < 1e-9 * expected);
        assert!((qfi_spectral(&rho, &d) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn closed_refuses_pure_state() {
        let rho = DensityMatrix::plus_state();
        assert!(matches!(
            qfi_closed_2x2(&rho, &ComplexMat2::zero()),
            Err(Error::NearSingular(_))
        ));
        let (_, method) = qfi_auto(&rho, &ComplexMat2::zero());
        assert_eq!(method, FisherMethod::Spectral);
    }

    #[test]
    fn closed_and_spectral_agree_without_feedback() {
        let fam = NoFeedbackFamily;
        let rho = fam.state(0.1, 1.0).unwrap();
        let d = drho_dgamma(&fam, 0.1, 1.0, default_step(0.1)).unwrap();
        let closed = qfi_closed_2x2(&rho, &d).unwrap();
        assert!((closed - qfi_spectral(&rho, &d)).abs() < 1e-8);
    }

    #[test]
    fn pure_qfi_of_rotating_state_is_four() {
        let psi = |g: f64| Ket2::new(C64::from(g.cos()), C64::from(g.sin()));
        assert!((qfi_pure(psi, 0.4, 1e-5).unwrap() - 4.0).abs() < 1e-8);
        let fixed = |_: f64| Ket2::ground();
        assert_eq!(qfi_pure(fixed, 0.4, 1e-5).unwrap(), 0.0);
    }

    #[test]
    fn pure_qfi_requires_normalized_family() {
        let psi = |g: f64| Ket2::new(C64::from(1.0 + g), C64::from(0.0));
        assert!(matches!(qfi_pure(psi, 0.4, 1e-5), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn classical_matches_closed_form_without_feedback() {
        let (gamma, t) = (0.1, 10.0);
        let f = classical_fisher_projective(&NoFeedbackFamily, gamma, t, default_step(gamma)).unwrap();
        let e = (-1.0f64).exp();
        let expected = e * 100.0 / (2.0 - e);
        assert!((expected - 22.539_967_356_056_408).abs() < 1e-12);
        assert!((f.value - expected).abs() < 1e-6 * expected);
        assert!((fisher_projective_closed(0.0, 0.0, gamma, t) - expected).abs() < 1e-12);
    }

    #[test]
    fn closed_projective_vanishes_at_origin() {
        assert_eq!(fisher_projective_closed(10.0 * 2f64.sqrt(), 10.0, 0.1, 0.0), 0.0);
    }

    #[test]
    fn fig2_factor_enters_projective_formula() {
        let k2 = (10f64.cos() + 10f64.sin()).powi(2);
        assert!((feedback_factor(10.0 * 2f64.sqrt(), 10.0) - k2).abs() < 1e-12);
        let t = 3.0;
        let x = 0.1 * t * k2;
        let expected = (-x).exp() * t * t * k2 * k2 / (2.0 - (-x).exp());
        assert!((fisher_projective_closed(10.0 * 2f64.sqrt(), 10.0, 0.1, t) - expected).abs() < 1e-12);
    }

    #[test]
    fn rate_peak_approximation_scales_with_factor() {
        let one = fisher_rate_peak_from_factor(1.0, 0.1).unwrap();
        assert!((one.t_approx - 10.0).abs() < 1e-12);
        assert!((one.rate_approx - 2.253_996_735_605_641).abs() < 1e-12);
        let two = fisher_rate_peak_from_factor(2.0, 0.1).unwrap();
        assert_eq!(two.rate_approx, 2.0 * one.rate_approx);
        assert!(fisher_rate_peak_from_factor(0.0, 0.1).is_err());
    }
}
