//! Damping-rate metrology for a dissipative qubit.
//!
//! Two estimation settings are covered:
//!
//! * a qubit under direct photodetection feedback with the PT-symmetric
//!   feedback operator `B = aσx + i bσz` ([`dynamics`], [`estimation`]);
//! * entangled and eigenstate probes of the no-jump effective Hamiltonian
//!   `H_eff = Ωσx − iγ|e⟩⟨e|` ([`probes`]).
//!
//! Every closed form is paired with an independent numerical route (RK4
//! integration, spectral QFI, finite-difference pure-state QFI,
//! golden-section search) so the two can be compared.
//!
//! Basis convention: index 0 is `|g⟩`, index 1 is `|e⟩`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod probes;
pub mod regime;
pub mod search;
pub mod series;
pub mod state;

pub use dynamics::{
    feedback_factor, feedback_propagator, integrate_master, integrate_master_at, lindblad_rhs, rho_analytic,
    rho_no_feedback, AnalyticSolution, FeedbackFactors, MasterEquation,
};
pub use error::{Error, Result};
pub use estimation::{
    classical_fisher_projective, default_step, drho_dgamma, fisher_projective_closed, fisher_rate_peak, qfi_closed_2x2,
    qfi_pure, qfi_spectral, quantum_fisher, FeedbackFamily, FisherMethod, FisherResult, NoFeedbackFamily, StateFamily,
};
pub use linalg::{mat_exp_2x2, mat_mul, ComplexMat2, Ket2, C64};
pub use probes::{
    eigenstates_heff, evolve_probe, optimal_theta, precision_bound, qfi_eigenstate, qfi_probe_closed, qfi_probe_oracle,
    EffectiveProbeState, ProbeConfig,
};
pub use regime::{classify_regime, FeedbackConfig, PtRegime};
pub use series::TimeSeries;
pub use state::DensityMatrix;
