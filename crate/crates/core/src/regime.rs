//! Feedback-model parameters and PT-phase classification of `B = aσx + i bσz`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classification threshold on `a² − b²`.
pub const REGIME_EPS: f64 = 1e-12;

/// Parameters of the directly-fed-back dissipative qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeedbackConfig {
    /// Strength of the `σx` part of the feedback operator.
    pub a: f64,
    /// Strength of the `iσz` part (the non-Hermitian part).
    pub b: f64,
    /// Damping rate, inverse time.
    pub gamma: f64,
    /// Drive strength `Ω` of `H = Ωσx`, inverse time.
    pub omega: f64,
    /// Feedback pulse duration.
    pub delta_t: f64,
}

impl FeedbackConfig {
    pub fn new(a: f64, b: f64, gamma: f64) -> Result<Self> {
        Self {
            a,
            b,
            gamma,
            omega: 0.0,
            delta_t: 1.0,
        }
        .validated()
    }

    /// `B = 0`, i.e. `U = I`: the plain amplitude-damping baseline.
    pub fn without_feedback(gamma: f64) -> Result<Self> {
        Self::new(0.0, 0.0, gamma)
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validated()
    }

    pub fn with_delta_t(mut self, delta_t: f64) -> Result<Self> {
        self.delta_t = delta_t;
        self.validated()
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::InvalidParameter("a and b must be finite".into()));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be > 0 (got {})",
                self.gamma
            )));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be >= 0 (got {})",
                self.omega
            )));
        }
        if !(self.delta_t.is_finite() && self.delta_t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta_t must be > 0 (got {})",
                self.delta_t
            )));
        }
        Ok(self)
    }

    /// Feedback amplitudes as they enter `U = exp(−iBδt)`.
    pub fn effective_ab(&self) -> (f64, f64) {
        (self.a * self.delta_t, self.b * self.delta_t)
    }

    pub fn regime(&self) -> PtRegime {
        let (a, b) = self.effective_ab();
        classify_regime(a, b)
    }
}

/// PT phase of the feedback operator together with `q = √|a² − b²|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PtRegime {
    Unbroken { q: f64 },
    ExceptionalPoint,
    Broken { q: f64 },
}

impl PtRegime {
    pub fn q_value(&self) -> f64 {
        match *self {
            PtRegime::Unbroken { q } | PtRegime::Broken { q } => q,
            PtRegime::ExceptionalPoint => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PtRegime::Unbroken { .. } => "unbroken",
            PtRegime::ExceptionalPoint => "exceptional_point",
            PtRegime::Broken { .. } => "broken",
        }
    }
}

pub fn classify_regime(a: f64, b: f64) -> PtRegime {
    let gap = a * a - b * b;
    if gap > REGIME_EPS {
        PtRegime::Unbroken { q: gap.sqrt() }
    } else if gap < -REGIME_EPS {
        PtRegime::Broken { q: (-gap).sqrt() }
    } else {
        PtRegime::ExceptionalPoint
    }
}
