//! Time evolution of the feedback-controlled qubit.
//!
//! The unconditional master equation is
//!
//! ```text
//! dρ/dt = −i[Ωσx, ρ] + γ (Lρ L† − ½{L†L, ρ}),    L = U σ₋,   U = exp(−iBδt)
//! ```
//!
//! with `B = aσx + i bσz`. For `Ω = 0` and the initial state `(|g⟩ + |e⟩)/√2`
//! it has the closed-form solution implemented by [`AnalyticSolution`]; the
//! RK4 integrator below is its independent oracle.
//!
//! Writing `K = ⟨g|U|g⟩` and `A = i⟨e|U|g⟩` (both real for every PT regime),
//! the excited population decays at `γK²` and the coherence `⟨g|ρ|e⟩` is
//!
//! ```text
//! ρ12(t) = Γ e^{−γK²t} + (½ − Γ) e^{−γ(K²+A²)t/2},    Γ = iKA / (A² − K²)
//! ```

use crate::error::{Error, Result};
use crate::linalg::{mat_exp_2x2, ComplexMat2, C64, I};
use crate::regime::{classify_regime, FeedbackConfig, PtRegime};
use crate::state::DensityMatrix;

/// Below this `q` the trigonometric/hyperbolic quotients use their series.
pub const NEAR_EP_Q: f64 = 1e-4;
/// Smallest admissible `|A² − K²|` (or `|2b + 1|` at the exceptional point).
pub const SINGULAR_TOL: f64 = 1e-9;
pub const DEFAULT_DT: f64 = 1e-4;
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

/// `U = exp(−i(aσx + i bσz)δt)`. Not unitary for `b ≠ 0`.
pub fn feedback_propagator(cfg: &FeedbackConfig) -> ComplexMat2 {
    let (a, b) = cfg.effective_ab();
    let generator = ComplexMat2::pauli_x().scale_real(a) + ComplexMat2::pauli_z().scale(I * b);
    mat_exp_2x2(&generator.scale(-I))
}

/// The two real amplitudes of `U|g⟩ = K|g⟩ − iA|e⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackFactors {
    pub k: f64,
    pub amp: f64,
}

impl FeedbackFactors {
    /// `(cos q + (b/q) sin q, (a/q) sin q)`.
    pub fn unbroken(a: f64, b: f64, q: f64) -> Self {
        let sinc = if q < NEAR_EP_Q {
            let q2 = q * q;
            1.0 - q2 / 6.0 + q2 * q2 / 120.0
        } else {
            q.sin() / q
        };
        Self {
            k: q.cos() + b * sinc,
            amp: a * sinc,
        }
    }

    /// `q → 0` limit: `(1 + b, a)`.
    pub fn exceptional(a: f64, b: f64) -> Self {
        Self { k: 1.0 + b, amp: a }
    }

    /// Hyperbolic continuation with `q = √(b² − a²)`.
    pub fn broken(a: f64, b: f64, q: f64) -> Self {
        let sinhc = if q < NEAR_EP_Q {
            let q2 = q * q;
            1.0 + q2 / 6.0 + q2 * q2 / 120.0
        } else {
            q.sinh() / q
        };
        Self {
            k: q.cosh() + b * sinhc,
            amp: a * sinhc,
        }
    }

    pub fn for_regime(regime: PtRegime, a: f64, b: f64) -> Self {
        match regime {
            PtRegime::Unbroken { q } => Self::unbroken(a, b, q),
            PtRegime::ExceptionalPoint => Self::exceptional(a, b),
            PtRegime::Broken { q } => Self::broken(a, b, q),
        }
    }

    /// The feedback factor `K²` rescaling the decay rate.
    pub fn factor(&self) -> f64 {
        self.k * self.k
    }
}

/// `K²` for the regime of `(a, b)`.
pub fn feedback_factor(a: f64, b: f64) -> f64 {
    FeedbackFactors::for_regime(classify_regime(a, b), a, b).factor()
}

/// Closed-form `ρ(t)` of the undriven feedback model from `(|g⟩ + |e⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticSolution {
    pub regime: PtRegime,
    pub gamma: f64,
    pub factors: FeedbackFactors,
    /// The coefficient `Γ` of the fast coherence term.
    pub coefficient: C64,
}

impl AnalyticSolution {
    pub fn new(cfg: &FeedbackConfig) -> Result<Self> {
        if cfg.omega != 0.0 {
            return Err(Error::DrivenAnalytic(cfg.omega));
        }
        let (a, b) = cfg.effective_ab();
        match classify_regime(a, b) {
            PtRegime::Unbroken { .. } => Self::unbroken(a, b, cfg.gamma),
            PtRegime::ExceptionalPoint => Self::exceptional(a, b, cfg.gamma),
            PtRegime::Broken { .. } => Self::broken(a, b, cfg.gamma),
        }
    }

    /// Trigonometric branch, `q = √(a² − b²)`; `a² ≥ b²` required.
    pub fn unbroken(a: f64, b: f64, gamma: f64) -> Result<Self> {
        let gap = a * a - b * b;
        if gap < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "unbroken branch needs a² ≥ b² (a² − b² = {gap:e})"
            )));
        }
        let q = gap.sqrt();
        Self::with_factors(PtRegime::Unbroken { q }, gamma, FeedbackFactors::unbroken(a, b, q))
    }

    /// Hyperbolic branch, `q = √(b² − a²)`; `b² ≥ a²` required.
    pub fn broken(a: f64, b: f64, gamma: f64) -> Result<Self> {
        let gap = b * b - a * a;
        if gap < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "broken branch needs b² ≥ a² (b² − a² = {gap:e})"
            )));
        }
        let q = gap.sqrt();
        Self::with_factors(PtRegime::Broken { q }, gamma, FeedbackFactors::broken(a, b, q))
    }

    /// `a² = b²`: `K = 1 + b`, `A = a`, `A² − K² = −(2b + 1)`.
    pub fn exceptional(a: f64, b: f64, gamma: f64) -> Result<Self> {
        let denom = 2.0 * b + 1.0;
        if denom.abs() < SINGULAR_TOL {
            return Err(Error::SingularExceptional(denom.abs()));
        }
        let factors = FeedbackFactors::exceptional(a, b);
        let coefficient = -I * ((1.0 + b) * a / denom);
        Ok(Self {
            regime: PtRegime::ExceptionalPoint,
            gamma,
            factors,
            coefficient,
        })
    }

    fn with_factors(regime: PtRegime, gamma: f64, factors: FeedbackFactors) -> Result<Self> {
        let FeedbackFactors { k, amp } = factors;
        let denom = amp * amp - k * k;
        if denom.abs() < SINGULAR_TOL {
            return Err(Error::SingularGamma(denom.abs()));
        }
        Ok(Self {
            regime,
            gamma,
            factors,
            coefficient: I * (k * amp / denom),
        })
    }

    pub fn feedback_factor(&self) -> f64 {
        self.factors.factor()
    }

    /// Decay rate of the excited population, `γK²`.
    pub fn population_rate(&self) -> f64 {
        self.gamma * self.factors.factor()
    }

    /// Decay rate of the slow coherence term, `γ(K² + A²)/2`.
    pub fn coherence_rate(&self) -> f64 {
        let FeedbackFactors { k, amp } = self.factors;
        0.5 * self.gamma * (k * k + amp * amp)
    }

    /// Ground-state population `1 − ½e^{−γK²t}`.
    pub fn rho11(&self, t: f64) -> f64 {
        1.0 - 0.5 * (-self.population_rate() * t).exp()
    }

    /// Coherence `⟨g|ρ|e⟩`.
    pub fn rho12(&self, t: f64) -> C64 {
        let fast = (-self.population_rate() * t).exp();
        let slow = (-self.coherence_rate() * t).exp();
        self.coefficient * fast + (C64::from(0.5) - self.coefficient) * slow
    }

    pub fn matrix(&self, t: f64) -> ComplexMat2 {
        let r11 = self.rho11(t);
        let r12 = self.rho12(t);
        ComplexMat2::new(C64::from(r11), r12, r12.conj(), C64::from(1.0 - r11))
    }

    pub fn state(&self, t: f64) -> Result<DensityMatrix> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        DensityMatrix::new(self.matrix(t))
    }
}

/// Closed-form `ρ(t)` for `Ω = 0`.
pub fn rho_analytic(cfg: &FeedbackConfig, t: f64) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    AnalyticSolution::new(cfg)?.state(t)
}

/// Amplitude damping of `(|g⟩ + |e⟩)/√2` without feedback.
pub fn rho_no_feedback(gamma: f64, t: f64) -> Result<DensityMatrix> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be > 0 (got {gamma})")));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let decay = (-gamma * t).exp();
    DensityMatrix::from_populations(1.0 - 0.5 * decay, C64::from(0.5 * (-0.5 * gamma * t).exp()))
}

/// Generator of the unconditional master equation with precomputed operators.
#[derive(Clone, Copy, Debug)]
pub struct MasterEquation {
    hamiltonian: ComplexMat2,
    jump: ComplexMat2,
    jump_dag: ComplexMat2,
    jump_dag_jump: ComplexMat2,
}

impl MasterEquation {
    pub fn new(cfg: &FeedbackConfig) -> Self {
        let u = feedback_propagator(cfg);
        let jump = (u * ComplexMat2::sigma_minus()).scale_real(cfg.gamma.sqrt());
        let jump_dag = jump.dagger();
        Self {
            hamiltonian: ComplexMat2::pauli_x().scale_real(cfg.omega),
            jump,
            jump_dag,
            jump_dag_jump: jump_dag * jump,
        }
    }

    pub fn rhs(&self, rho: &ComplexMat2) -> ComplexMat2 {
        let coherent = self.hamiltonian.commutator(rho).scale(-I);
        let jump = self.jump * *rho * self.jump_dag;
        let drain = self.jump_dag_jump.anticommutator(rho).scale_real(0.5);
        coherent + jump - drain
    }

    fn rk4_step(&self, rho: &ComplexMat2, dt: f64) -> ComplexMat2 {
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(*rho + k1 * (0.5 * dt)));
        let k3 = self.rhs(&(*rho + k2 * (0.5 * dt)));
        let k4 = self.rhs(&(*rho + k3 * dt));
        let incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        (*rho + incr).hermitian_part()
    }
}

/// Right-hand side of the unconditional feedback master equation.
pub fn lindblad_rhs(rho: &ComplexMat2, cfg: &FeedbackConfig) -> ComplexMat2 {
    MasterEquation::new(cfg).rhs(rho)
}

/// Classic RK4 from `rho0` at `t = 0` to `t_final`. The step is shrunk so an
/// integer number of steps lands exactly on `t_final`.
pub fn integrate_master(cfg: &FeedbackConfig, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    integrate_master_at(cfg, rho0, &[t_final], dt).map(|mut v| v.remove(0))
}

/// RK4 sampled at ascending checkpoints `times`, reusing one trajectory.
pub fn integrate_master_at(
    cfg: &FeedbackConfig,
    rho0: &DensityMatrix,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DensityMatrix>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be > 0 (got {dt})")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("checkpoints must be ascending".into()));
    }
    let eq = MasterEquation::new(cfg);
    let trace0 = rho0.matrix().trace().re;
    let mut rho = *rho0.matrix();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target < 0.0 {
            return Err(Error::NegativeTime(target));
        }
        let span = target - now;
        if span > 0.0 {
            let steps = (span / dt).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for i in 0..steps {
                rho = eq.rk4_step(&rho, h);
                let drift = (rho.trace().re - trace0).abs();
                if drift > TRACE_DRIFT_TOL || !rho.is_finite() {
                    return Err(Error::TraceDrift {
                        drift,
                        t: now + (i + 1) as f64 * h,
                    });
                }
            }
            now = target;
        }
        out.push(DensityMatrix::new(rho)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> FeedbackConfig {
        FeedbackConfig::new(10.0 * 2f64.sqrt(), 10.0, 0.1).unwrap()
    }

    #[test]
    fn propagator_special_cases() {
        let u = feedback_propagator(&FeedbackConfig::new(0.0, 0.0, 0.1).unwrap());
        assert_eq!(u, ComplexMat2::identity());

        let u = feedback_propagator(&FeedbackConfig::new(std::f64::consts::PI, 0.0, 0.1).unwrap());
        assert!(u.max_abs_diff(&ComplexMat2::identity().scale_real(-1.0)) < 1e-15);

        let cfg = FeedbackConfig::new(0.8, 0.8, 0.1).unwrap();
        let b = ComplexMat2::pauli_x().scale_real(0.8) + ComplexMat2::pauli_z().scale(I * 0.8);
        let expected = ComplexMat2::identity() - b.scale(I);
        assert!(feedback_propagator(&cfg).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn factors_are_propagator_entries() {
        for (a, b) in [
            (10.0 * 2f64.sqrt(), 10.0),
            (0.8, -0.8),
            (1.0, -2.0),
            (5.0, 4.0),
            (4.0, 5.0),
            (0.3, 0.0),
        ] {
            let cfg = FeedbackConfig::new(a, b, 0.1).unwrap();
            let u = feedback_propagator(&cfg);
            let f = FeedbackFactors::for_regime(cfg.regime(), a, b);
            let scale = 1.0 + f.k.abs();
            assert!((u[(0, 0)] - C64::from(f.k)).norm() < 1e-13 * scale, "K for {a},{b}");
            assert!(
                (u[(1, 0)] - C64::new(0.0, -f.amp)).norm() < 1e-13 * scale,
                "A for {a},{b}"
            );
        }
    }

    #[test]
    fn initial_state_in_every_regime() {
        for (a, b) in [(10.0 * 2f64.sqrt(), 10.0), (0.8, -0.8), (1.0, -2.0)] {
            let cfg = FeedbackConfig::new(a, b, 0.1).unwrap();
            let rho = rho_analytic(&cfg, 0.0).unwrap();
            assert!(rho.matrix().max_abs_diff(DensityMatrix::plus_state().matrix()) < 1e-15);
        }
    }

    #[test]
    fn fig2_population_matches_closed_form() {
        let cfg = fig2();
        let k2 = (10f64.cos() + 10f64.sin()).powi(2);
        for t in [0.5, 3.0, 17.0] {
            let expected = 1.0 - 0.5 * (-0.1 * t * k2).exp();
            assert!((rho_analytic(&cfg, t).unwrap().rho11() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_feedback_population() {
        let a = 0.3;
        let cfg = FeedbackConfig::new(a, 0.0, 0.1).unwrap();
        for t in [1.0, 10.0] {
            let expected = 1.0 - 0.5 * (-0.1 * t * a.cos().powi(2)).exp();
            assert!((rho_analytic(&cfg, t).unwrap().rho11() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_drive_and_negative_time() {
        let cfg = fig2().with_omega(0.5).unwrap();
        assert_eq!(rho_analytic(&cfg, 1.0), Err(Error::DrivenAnalytic(0.5)));
        assert_eq!(rho_analytic(&fig2(), -1.0), Err(Error::NegativeTime(-1.0)));
        assert!(rho_no_feedback(0.1, -1.0).is_err());
    }

    #[test]
    fn exceptional_point_guard_at_half() {
        let cfg = FeedbackConfig::new(0.5, -0.5, 0.1).unwrap();
        assert!(matches!(rho_analytic(&cfg, 1.0), Err(Error::SingularExceptional(_))));
    }

    #[test]
    fn gamma_singularity_is_reported() {
        // b = 0, a = π/4: (a sin q / q)² = cos² q.
        let cfg = FeedbackConfig::new(std::f64::consts::FRAC_PI_4, 0.0, 0.1).unwrap();
        assert!(matches!(rho_analytic(&cfg, 1.0), Err(Error::SingularGamma(_))));
    }

    #[test]
    fn no_feedback_limits() {
        let rho = rho_no_feedback(0.1, 0.0).unwrap();
        assert_eq!(rho, DensityMatrix::plus_state());
        let late = rho_no_feedback(0.1, 1e4).unwrap();
        assert!(late.matrix().max_abs_diff(&ComplexMat2::ground_projector()) < 1e-15);
        assert!((rho_no_feedback(0.1, 10.0).unwrap().rho11() - 0.816_060_279_414_278_8).abs() < 1e-15);
    }

    #[test]
    fn dark_state_is_stationary() {
        let rho = ComplexMat2::ground_projector();
        for cfg in [fig2(), FeedbackConfig::new(1.0, -2.0, 0.3).unwrap()] {
            assert!(lindblad_rhs(&rho, &cfg).norm() < 1e-15);
        }
    }

    #[test]
    fn excited_state_decay_without_feedback() {
        let cfg = FeedbackConfig::without_feedback(0.1).unwrap();
        let out = lindblad_rhs(&ComplexMat2::excited_projector(), &cfg);
        let expected = (ComplexMat2::ground_projector() - ComplexMat2::excited_projector()).scale_real(0.1);
        assert!(out.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn integrate_zero_time_is_identity() {
        let rho0 = DensityMatrix::plus_state();
        assert_eq!(integrate_master(&fig2(), &rho0, 0.0, 1e-3).unwrap(), rho0);
    }

    #[test]
    fn integrator_matches_no_feedback() {
        let cfg = FeedbackConfig::without_feedback(0.1).unwrap();
        let rho = integrate_master(&cfg, &DensityMatrix::plus_state(), 5.0, DEFAULT_DT).unwrap();
        let exact = rho_no_feedback(0.1, 5.0).unwrap();
        assert!(rho.matrix().max_abs_diff(exact.matrix()) < 1e-6);
    }

    #[test]
    fn integrator_matches_fig2_at_one() {
        let cfg = fig2();
        let rho = integrate_master(&cfg, &DensityMatrix::plus_state(), 1.0, DEFAULT_DT).unwrap();
        let exact = rho_analytic(&cfg, 1.0).unwrap();
        assert!(rho.matrix().max_abs_diff(exact.matrix()) < 1e-6);
    }

    #[test]
    fn integrator_rejects_bad_step() {
        let rho0 = DensityMatrix::plus_state();
        assert!(integrate_master(&fig2(), &rho0, 1.0, 0.0).is_err());
        assert!(integrate_master(&fig2(), &rho0, 1.0, -1e-3).is_err());
    }

    #[test]
    fn trace_drift_guard_trips_on_unstable_step() {
        // γK² ≈ 72 for this setting; a step of 1 is far outside RK4 stability.
        let cfg = FeedbackConfig::new(4.0, 5.0, 0.1).unwrap();
        let res = integrate_master(&cfg, &DensityMatrix::plus_state(), 50.0, 1.0);
        assert!(res.is_err(), "{res:?}");
    }

    #[test]
    fn driven_integration_stays_physical() {
        let cfg = fig2().with_omega(0.7).unwrap();
        let rho = integrate_master(&cfg, &DensityMatrix::plus_state(), 3.0, 1e-3).unwrap();
        assert!(rho.det() >= -1e-12);
    }
}
