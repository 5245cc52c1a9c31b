//! Damping-rate estimation under no-jump (postselected) evolution.
//!
//! Conditioned on no detected decay, each qubit evolves under
//! `H_eff = Ωσx − iγ|e⟩⟨e|`. For `Ω = 0` the entangled probe
//! `cosθ|e⟩^⊗N + sinθ|g⟩^⊗N` stays in the span of `|e⟩^⊗N` and `|g⟩^⊗N`,
//! so it is tracked as two real amplitudes no matter how large `N` is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{default_step, pure_fisher_terms, PureFisherTerms};
use crate::linalg::{ComplexMat2, Ket2, C64, I};
use crate::search::maximize_refined;

/// Relative distance `|Ω − γ|/Ω` treated as the exceptional point.
pub const EP_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Probe angle in radians.
    pub theta: f64,
    pub n_qubits: u32,
    /// Damping rate, inverse time.
    pub gamma: f64,
    /// Evolution time.
    pub t: f64,
    /// Drive strength, inverse time.
    pub omega: f64,
    /// Total interrogation time `T`.
    pub total_time: f64,
}

impl ProbeConfig {
    pub fn new(theta: f64, n_qubits: u32, gamma: f64, t: f64) -> Result<Self> {
        Self {
            theta,
            n_qubits,
            gamma,
            t,
            omega: 0.0,
            total_time: 1.0,
        }
        .validated()
    }

    pub fn with_total_time(mut self, total_time: f64) -> Result<Self> {
        self.total_time = total_time;
        self.validated()
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validated()
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        if self.n_qubits == 0 {
            return Err(Error::InvalidParameter("n_qubits must be >= 1".into()));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be > 0 (got {})",
                self.gamma
            )));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be >= 0 (got {})", self.t)));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be >= 0 (got {})",
                self.omega
            )));
        }
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total_time must be > 0 (got {})",
                self.total_time
            )));
        }
        Ok(self)
    }

    /// `γNt`.
    pub fn decay_exponent(&self) -> f64 {
        self.gamma * self.n_qubits as f64 * self.t
    }

    fn require_undriven(&self) -> Result<()> {
        if self.omega != 0.0 {
            return Err(Error::DrivenAnalytic(self.omega));
        }
        Ok(())
    }
}

/// Normalized amplitudes on `|e⟩^⊗N` and `|g⟩^⊗N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectiveProbeState {
    pub amp_e: f64,
    pub amp_g: f64,
}

impl EffectiveProbeState {
    pub fn as_ket(&self) -> Ket2 {
        Ket2::new(C64::from(self.amp_e), C64::from(self.amp_g))
    }
}

/// `H_eff = Ωσx − iγ|e⟩⟨e|` for a single qubit.
pub fn heff(omega: f64, gamma: f64) -> ComplexMat2 {
    ComplexMat2::pauli_x().scale_real(omega) + ComplexMat2::excited_projector().scale(-I * gamma)
}

/// No-jump evolution of the entangled probe, renormalized.
pub fn evolve_probe(cfg: &ProbeConfig) -> Result<EffectiveProbeState> {
    cfg.require_undriven()?;
    Ok(probe_amplitudes(cfg.theta, cfg.decay_exponent()))
}

// (cosθ e^{−x}, sinθ) normalized, evaluated in log space so large x cannot underflow to 0/0.
fn probe_amplitudes(theta: f64, x: f64) -> EffectiveProbeState {
    let (s, c) = theta.sin_cos();
    if c == 0.0 || s == 0.0 {
        return EffectiveProbeState {
            amp_e: c.signum() * (c != 0.0) as u8 as f64,
            amp_g: s.signum() * (s != 0.0) as u8 as f64,
        };
    }
    let log_e = c.abs().ln() - x;
    let log_g = s.abs().ln();
    let top = log_e.max(log_g);
    let (me, mg) = ((log_e - top).exp(), (log_g - top).exp());
    let norm = me.hypot(mg);
    EffectiveProbeState {
        amp_e: c.signum() * me / norm,
        amp_g: s.signum() * mg / norm,
    }
}

/// `2cos²θ sin²θ e^{2γNt}(Nt)² / (cos²θ + sin²θ e^{2γNt})²`, written with
/// `e^{−2γNt}` so it stays finite for large `γNt`.
pub fn qfi_probe_closed(cfg: &ProbeConfig) -> Result<f64> {
    cfg.require_undriven()?;
    Ok(qfi_probe_closed_sin2(
        cfg.theta.sin().powi(2),
        cfg.n_qubits,
        cfg.gamma,
        cfg.t,
    ))
}

/// Same closed form parameterized by `sin²θ`.
pub fn qfi_probe_closed_sin2(sin2: f64, n_qubits: u32, gamma: f64, t: f64) -> f64 {
    let cos2 = 1.0 - sin2;
    if sin2 <= 0.0 || cos2 <= 0.0 {
        return 0.0;
    }
    let nt = n_qubits as f64 * t;
    let w = (-2.0 * gamma * nt).exp();
    let denom = cos2 * w + sin2;
    2.0 * cos2 * sin2 * w * nt * nt / (denom * denom)
}

/// Pure-state QFI of the normalized [`evolve_probe`] family.
pub fn qfi_probe_oracle(cfg: &ProbeConfig, h: f64) -> Result<f64> {
    probe_oracle_terms(cfg, h).map(|terms| terms.qfi())
}

pub fn probe_oracle_terms(cfg: &ProbeConfig, h: f64) -> Result<PureFisherTerms> {
    cfg.require_undriven()?;
    let nt = cfg.n_qubits as f64 * cfg.t;
    let theta = cfg.theta;
    pure_fisher_terms(|g| probe_amplitudes(theta, g * nt).as_ket(), cfg.gamma, h)
}

/// Ratio of the pure-state oracle to the closed form at `cfg`.
pub fn probe_qfi_ratio(cfg: &ProbeConfig) -> Result<f64> {
    let closed = qfi_probe_closed(cfg)?;
    if closed == 0.0 {
        return Err(Error::DivergentBound);
    }
    Ok(qfi_probe_oracle(cfg, default_step(cfg.gamma))? / closed)
}

/// Lower bound on `(δγ)²` for a total interrogation time `T`:
/// `1 / ((T/t) F)`.
pub fn precision_bound(cfg: &ProbeConfig) -> Result<f64> {
    let f = qfi_probe_closed(cfg)?;
    if !(f > 0.0) {
        return Err(Error::DivergentBound);
    }
    Ok(cfg.t / (cfg.total_time * f))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimalProbe {
    pub sin2_theta: f64,
    pub theta: f64,
    pub f_max: f64,
}

/// Stationary point of the closed-form QFI in `θ`:
/// `sin²θ* = 1/(e^{2γNt} + 1)`, at which `F = (Nt)²/2`.
pub fn optimal_theta(n_qubits: u32, gamma: f64, t: f64) -> Result<OptimalProbe> {
    let x = gamma * n_qubits as f64 * t;
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!("need gamma N t > 0 (got {x})")));
    }
    let w = (-2.0 * x).exp();
    let sin2 = w / (1.0 + w);
    Ok(OptimalProbe {
        sin2_theta: sin2,
        theta: sin2.sqrt().asin(),
        f_max: qfi_probe_closed_sin2(sin2, n_qubits, gamma, t),
    })
}

/// Numerical maximization of the closed form over `sin²θ ∈ (0, 1)`.
pub fn optimal_theta_search(n_qubits: u32, gamma: f64, t: f64) -> OptimalProbe {
    let (sin2, f_max) = maximize_refined(|u| qfi_probe_closed_sin2(u, n_qubits, gamma, t), 0.0, 1.0);
    OptimalProbe {
        sin2_theta: sin2,
        theta: sin2.sqrt().asin(),
        f_max,
    }
}

/// Non-normalized eigenvector pair `ψ∓ = (−Ω, iγ ∓ √(Ω² − γ²))`.
///
/// These diagonalize `heff(Ω, 2γ) = Ωσx − 2iγ|e⟩⟨e|`, with eigenvalues
/// `λ∓ = ±√(Ω² − γ²) − iγ`, and coalesce at `Ω = γ`. For `Ω < γ` the root is
/// `i√(γ² − Ω²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub minus: Ket2,
    pub plus: Ket2,
    pub lambda_minus: C64,
    pub lambda_plus: C64,
    /// Set at the exceptional point, where `ψ₋ = ψ₊`.
    pub coalesced: bool,
}

pub fn eigenstates_heff(omega: f64, gamma: f64) -> Result<EigenPair> {
    if !(omega >= 0.0 && omega.is_finite()) || !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need omega >= 0 and gamma > 0 (omega = {omega}, gamma = {gamma})"
        )));
    }
    let root = C64::from(omega * omega - gamma * gamma).sqrt();
    let first = C64::from(-omega);
    let ig = I * gamma;
    Ok(EigenPair {
        minus: Ket2::new(first, ig - root),
        plus: Ket2::new(first, ig + root),
        lambda_minus: root - ig,
        lambda_plus: -root - ig,
        coalesced: omega > 0.0 && ((omega - gamma) / omega).abs() < EP_REL_TOL,
    })
}

/// Closed form and finite-difference QFI of the normalized `ψ₋` family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenstateQfi {
    /// `2 / (Ω² − γ²)`
    pub closed: f64,
    /// `4[⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²]`
    pub finite_difference: f64,
    /// `4⟨∂ψ|∂ψ⟩`
    pub velocity_only: f64,
}

pub fn qfi_eigenstate(omega: f64, gamma: f64, h: f64) -> Result<EigenstateQfi> {
    if !(gamma > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need omega > 0 and gamma > 0 (omega = {omega}, gamma = {gamma})"
        )));
    }
    if ((omega - gamma) / omega).abs() < EP_REL_TOL {
        return Err(Error::ExceptionalPoint { omega, gamma });
    }
    if omega < gamma {
        return Err(Error::InvalidParameter(format!(
            "eigenstate QFI requires omega > gamma (omega = {omega}, gamma = {gamma})"
        )));
    }
    if !(h > 0.0 && gamma - h > 0.0 && gamma + h < omega) {
        return Err(Error::InvalidParameter(format!(
            "step h = {h} must keep gamma ± h inside (0, omega)"
        )));
    }
    let psi = |g: f64| {
        let root = (omega * omega - g * g).sqrt();
        Ket2::new(C64::from(-omega), C64::new(-root, g)).normalized()
    };
    let terms = pure_fisher_terms(psi, gamma, h)?;
    Ok(EigenstateQfi {
        closed: 2.0 / (omega * omega - gamma * gamma),
        finite_difference: terms.qfi(),
        velocity_only: terms.velocity_only(),
    })
}
