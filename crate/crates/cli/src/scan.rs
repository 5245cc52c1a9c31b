//! Grid evaluation of a single quantity for one of the three models.

use clap::ValueEnum;
use ptmetro::dynamics::DEFAULT_DT;
use ptmetro::estimation::{classical_fisher_projective, quantum_fisher};
use ptmetro::probes::probe_oracle_terms;
use ptmetro::{
    default_step, integrate_master_at, precision_bound, qfi_eigenstate, qfi_probe_closed, AnalyticSolution,
    DensityMatrix, FeedbackFamily, TimeSeries,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Grid, Params};
use crate::error::CliError;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Directly fed-back qubit (`--a --b --gamma --omega --delta-t`).
    Feedback,
    /// Entangled no-jump probe (`--theta --n-qubits --gamma --t --total-time`).
    Probe,
    /// `ψ₋` eigenstate of the effective Hamiltonian (`--omega --gamma`).
    Eigenstate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// Quantum Fisher information.
    #[value(name = "F")]
    #[serde(rename = "F")]
    Qfi,
    /// Classical Fisher information of the `{|g⟩, |e⟩}` measurement.
    #[value(name = "f")]
    #[serde(rename = "f")]
    Classical,
    #[value(name = "F_over_t")]
    #[serde(rename = "F_over_t")]
    QfiRate,
    #[value(name = "f_over_t")]
    #[serde(rename = "f_over_t")]
    ClassicalRate,
    #[value(name = "rho11")]
    #[serde(rename = "rho11")]
    Rho11,
    #[value(name = "re_rho12")]
    #[serde(rename = "re_rho12")]
    ReRho12,
    #[value(name = "im_rho12")]
    #[serde(rename = "im_rho12")]
    ImRho12,
    /// Lower bound on `(δγ)²`.
    #[value(name = "bound")]
    #[serde(rename = "bound")]
    Bound,
    /// Finite-difference pure-state QFI, the oracle for the closed forms.
    #[value(name = "F_oracle")]
    #[serde(rename = "F_oracle")]
    QfiOracle,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Qfi => "F",
            Quantity::Classical => "f",
            Quantity::QfiRate => "F_over_t",
            Quantity::ClassicalRate => "f_over_t",
            Quantity::Rho11 => "rho11",
            Quantity::ReRho12 => "re_rho12",
            Quantity::ImRho12 => "im_rho12",
            Quantity::Bound => "bound",
            Quantity::QfiOracle => "F_oracle",
        }
    }
}

/// The scanned variable.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    T,
    /// Number of probe qubits; grid values are rounded to integers.
    N,
    Omega,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::T => "t",
            Axis::N => "N",
            Axis::Omega => "omega",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanSpec {
    pub model: Model,
    pub axis: Axis,
    pub quantity: Quantity,
    pub params: Params,
    pub grid: Grid,
}

impl ScanSpec {
    pub fn axis_values(&self) -> Vec<f64> {
        let mut xs = self.grid.values();
        if self.axis == Axis::N {
            xs.iter_mut().for_each(|x| *x = x.round());
            xs.dedup();
        }
        xs
    }

    fn unsupported(&self) -> CliError {
        CliError::Usage(format!(
            "quantity {} is not available for model {:?} along axis {}",
            self.quantity.name(),
            self.model,
            self.axis.column()
        ))
    }
}

/// Evaluates `spec` on its grid. Points are independent, so the parallel and
/// sequential paths produce bitwise-identical values; the first failing grid
/// point (in grid order) is reported.
pub fn run_scan(spec: &ScanSpec, parallel: bool) -> Result<TimeSeries, CliError> {
    let xs = spec.axis_values();
    let label = format!("{:?}:{}", spec.model, spec.quantity.name()).to_lowercase();
    let driven_rho = spec.model == Model::Feedback
        && spec.params.omega != 0.0
        && matches!(spec.quantity, Quantity::Rho11 | Quantity::ReRho12 | Quantity::ImRho12);
    let values = if driven_rho {
        driven_trajectory(spec, &xs)?
    } else {
        map_points(&xs, parallel, |x| {
            point(spec, x).map_err(|e| e.at(spec.axis.column(), x))
        })?
    };
    Ok(TimeSeries::new(label, xs, values)?)
}

/// Maps `f` over `xs`, in parallel or not, keeping grid order.
pub fn map_points<F>(xs: &[f64], parallel: bool, f: F) -> Result<Vec<f64>, CliError>
where
    F: Fn(f64) -> Result<f64, CliError> + Sync,
{
    if parallel {
        xs.par_iter().map(|&x| f(x)).collect()
    } else {
        xs.iter().map(|&x| f(x)).collect()
    }
}

fn point(spec: &ScanSpec, x: f64) -> Result<f64, CliError> {
    match spec.model {
        Model::Feedback => feedback_point(spec, x),
        Model::Probe => probe_point(spec, x),
        Model::Eigenstate => eigenstate_point(spec, x),
    }
}

fn feedback_point(spec: &ScanSpec, t: f64) -> Result<f64, CliError> {
    if spec.axis != Axis::T {
        return Err(spec.unsupported());
    }
    let cfg = spec.params.feedback()?;
    let family = FeedbackFamily::from_config(&cfg);
    let h = default_step(cfg.gamma);
    let rate = |v: f64| {
        if t > 0.0 {
            Ok(v / t)
        } else {
            Err(CliError::Usage("rates need t > 0".into()))
        }
    };
    let needs_closed_form = || -> Result<(), CliError> {
        if cfg.omega != 0.0 {
            return Err(CliError::Usage(
                "Fisher information is only available for omega = 0".into(),
            ));
        }
        Ok(())
    };
    match spec.quantity {
        Quantity::Rho11 | Quantity::ReRho12 | Quantity::ImRho12 => {
            let sol = AnalyticSolution::new(&cfg)?;
            if t < 0.0 {
                return Err(ptmetro::Error::NegativeTime(t).into());
            }
            Ok(rho_component(
                spec.quantity,
                sol.rho11(t),
                sol.rho12(t).re,
                sol.rho12(t).im,
            ))
        }
        Quantity::Qfi => {
            needs_closed_form()?;
            Ok(quantum_fisher(&family, cfg.gamma, t, h)?.value)
        }
        Quantity::QfiRate => {
            needs_closed_form()?;
            rate(quantum_fisher(&family, cfg.gamma, t, h)?.value)
        }
        Quantity::Classical => {
            needs_closed_form()?;
            Ok(classical_fisher_projective(&family, cfg.gamma, t, h)?.value)
        }
        Quantity::ClassicalRate => {
            needs_closed_form()?;
            rate(classical_fisher_projective(&family, cfg.gamma, t, h)?.value)
        }
        Quantity::Bound | Quantity::QfiOracle => Err(spec.unsupported()),
    }
}

fn rho_component(q: Quantity, rho11: f64, re12: f64, im12: f64) -> f64 {
    match q {
        Quantity::Rho11 => rho11,
        Quantity::ReRho12 => re12,
        _ => im12,
    }
}

fn driven_trajectory(spec: &ScanSpec, ts: &[f64]) -> Result<Vec<f64>, CliError> {
    if spec.axis != Axis::T {
        return Err(spec.unsupported());
    }
    let cfg = spec.params.feedback()?;
    let states = integrate_master_at(&cfg, &DensityMatrix::plus_state(), ts, DEFAULT_DT)?;
    Ok(states
        .iter()
        .map(|s| rho_component(spec.quantity, s.rho11(), s.rho12().re, s.rho12().im))
        .collect())
}

fn probe_point(spec: &ScanSpec, x: f64) -> Result<f64, CliError> {
    let mut p = spec.params;
    match spec.axis {
        Axis::T => p.t = x,
        Axis::N => {
            if x < 1.0 || x > u32::MAX as f64 {
                return Err(CliError::Usage(format!("N must be a positive integer (got {x})")));
            }
            p.n_qubits = x as u32;
        }
        Axis::Omega => return Err(spec.unsupported()),
    }
    let cfg = p.probe()?;
    match spec.quantity {
        Quantity::Qfi => Ok(qfi_probe_closed(&cfg)?),
        Quantity::QfiRate if cfg.t > 0.0 => Ok(qfi_probe_closed(&cfg)? / cfg.t),
        Quantity::QfiRate => Err(CliError::Usage("rates need t > 0".into())),
        Quantity::QfiOracle => Ok(probe_oracle_terms(&cfg, default_step(cfg.gamma))?.qfi()),
        Quantity::Bound => Ok(precision_bound(&cfg)?),
        _ => Err(spec.unsupported()),
    }
}

/// Central-difference step for the eigenstate family: small next to `Ω − γ`.
pub fn eigenstate_step(omega: f64, gamma: f64) -> f64 {
    default_step(gamma).min(1e-3 * (omega - gamma).abs())
}

fn eigenstate_point(spec: &ScanSpec, x: f64) -> Result<f64, CliError> {
    if spec.axis != Axis::Omega {
        return Err(spec.unsupported());
    }
    let gamma = spec.params.gamma;
    let qfi = qfi_eigenstate(x, gamma, eigenstate_step(x, gamma))?;
    match spec.quantity {
        Quantity::Qfi => Ok(qfi.closed),
        Quantity::QfiOracle => Ok(qfi.finite_difference),
        _ => Err(spec.unsupported()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(model: Model, axis: Axis, quantity: Quantity, params: Params) -> ScanSpec {
        ScanSpec {
            model,
            axis,
            quantity,
            params,
            grid: params.grid().unwrap(),
        }
    }

    #[test]
    fn undriven_population_without_feedback() {
        let p = Params {
            t_min: 0.0,
            t_max: 20.0,
            points: 41,
            ..Params::default()
        };
        let s = run_scan(&spec(Model::Feedback, Axis::T, Quantity::Rho11, p), true).unwrap();
        for (t, v) in s.grid.iter().zip(&s.values) {
            assert!((v - (1.0 - 0.5 * (-0.1 * t).exp())).abs() < 1e-15);
        }
    }

    #[test]
    fn two_point_grid_gives_two_values() {
        let p = Params {
            t_min: 1.0,
            t_max: 2.0,
            points: 2,
            ..Params::default()
        };
        let s = run_scan(&spec(Model::Feedback, Axis::T, Quantity::Qfi, p), false).unwrap();
        assert_eq!(s.grid, vec![1.0, 2.0]);
        assert_eq!(s.values.len(), 2);
    }

    #[test]
    fn probe_bound_decreases_in_n() {
        let p = Params {
            // 2cosh²(γN)/N² turns up again near γN ≈ 1.2.
            t_min: 1.0,
            t_max: 8.0,
            points: 8,
            theta: std::f64::consts::FRAC_PI_4,
            ..Params::default()
        };
        let s = run_scan(&spec(Model::Probe, Axis::N, Quantity::Bound, p), true).unwrap();
        assert!(s.values.iter().all(|&v| v > 0.0));
        assert!(s.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn driven_population_uses_integrator() {
        let p = Params {
            omega: 0.5,
            gamma: 0.2,
            t_min: 0.0,
            t_max: 1.0,
            points: 3,
            ..Params::default()
        };
        let s = run_scan(&spec(Model::Feedback, Axis::T, Quantity::Rho11, p), false).unwrap();
        assert!((s.values[0] - 0.5).abs() < 1e-15);
        assert!(s.values[2] > 0.5);
        let err = run_scan(&spec(Model::Feedback, Axis::T, Quantity::Qfi, p), false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn errors_name_the_grid_point() {
        let p = Params {
            gamma: 1.0,
            t_min: 0.5,
            t_max: 1.5,
            points: 3,
            ..Params::default()
        };
        let err = run_scan(&spec(Model::Eigenstate, Axis::Omega, Quantity::Qfi, p), true).unwrap_err();
        assert!(err.to_string().contains("omega = 0.5"), "{err}");
    }

    #[test]
    fn mismatched_axis_is_a_usage_error() {
        let p = Params {
            points: 3,
            ..Params::default()
        };
        let err = run_scan(&spec(Model::Eigenstate, Axis::T, Quantity::Qfi, p), true).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
