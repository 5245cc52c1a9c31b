//! Parameter resolution: command-line flags override a JSON config file,
//! which overrides built-in defaults.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use clap::Args;
use ptmetro::{FeedbackConfig, ProbeConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Every tunable parameter, each optional so layers can be merged.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamLayer {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub n_qubits: Option<u32>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Feedback pulse duration δt.
    #[arg(long)]
    pub delta_t: Option<f64>,
    /// Total interrogation time T of the precision bound.
    #[arg(long)]
    pub total_time: Option<f64>,
}

impl ParamLayer {
    /// Fields set in `self` win over those in `lower`.
    pub fn over(&self, lower: &ParamLayer) -> ParamLayer {
        ParamLayer {
            a: self.a.or(lower.a),
            b: self.b.or(lower.b),
            gamma: self.gamma.or(lower.gamma),
            omega: self.omega.or(lower.omega),
            theta: self.theta.or(lower.theta),
            n_qubits: self.n_qubits.or(lower.n_qubits),
            t: self.t.or(lower.t),
            t_min: self.t_min.or(lower.t_min),
            t_max: self.t_max.or(lower.t_max),
            points: self.points.or(lower.points),
            delta_t: self.delta_t.or(lower.delta_t),
            total_time: self.total_time.or(lower.total_time),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<ParamLayer, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_POINTS: usize = 2000;

/// Fully resolved parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub omega: f64,
    pub theta: f64,
    pub n_qubits: u32,
    pub t: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub delta_t: f64,
    pub total_time: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            a: 0.0,
            b: 0.0,
            gamma: 0.1,
            omega: 0.0,
            theta: FRAC_PI_4,
            n_qubits: 1,
            t: 1.0,
            // First point one grid step above zero, so F/t is defined everywhere.
            t_min: DEFAULT_T_MAX / DEFAULT_POINTS as f64,
            t_max: DEFAULT_T_MAX,
            points: DEFAULT_POINTS,
            delta_t: 1.0,
            total_time: 1.0,
        }
    }
}

impl Params {
    pub fn resolve(flags: &ParamLayer, config: Option<&Path>) -> Result<Params, CliError> {
        let file = match config {
            Some(path) => ParamLayer::from_json_file(path)?,
            None => ParamLayer::default(),
        };
        Ok(Params::default().apply(&flags.over(&file)))
    }

    pub fn apply(&self, layer: &ParamLayer) -> Params {
        Params {
            a: layer.a.unwrap_or(self.a),
            b: layer.b.unwrap_or(self.b),
            gamma: layer.gamma.unwrap_or(self.gamma),
            omega: layer.omega.unwrap_or(self.omega),
            theta: layer.theta.unwrap_or(self.theta),
            n_qubits: layer.n_qubits.unwrap_or(self.n_qubits),
            t: layer.t.unwrap_or(self.t),
            t_min: layer.t_min.unwrap_or(self.t_min),
            t_max: layer.t_max.unwrap_or(self.t_max),
            points: layer.points.unwrap_or(self.points),
            delta_t: layer.delta_t.unwrap_or(self.delta_t),
            total_time: layer.total_time.unwrap_or(self.total_time),
        }
    }

    pub fn feedback(&self) -> Result<FeedbackConfig, CliError> {
        Ok(FeedbackConfig::new(self.a, self.b, self.gamma)?
            .with_omega(self.omega)?
            .with_delta_t(self.delta_t)?)
    }

    pub fn probe(&self) -> Result<ProbeConfig, CliError> {
        Ok(ProbeConfig::new(self.theta, self.n_qubits, self.gamma, self.t)?
            .with_omega(self.omega)?
            .with_total_time(self.total_time)?)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.t_min, self.t_max, self.points)
    }
}

/// Uniform sampling of the scan axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Grid, CliError> {
        if !(min.is_finite() && max.is_finite()) || min < 0.0 || max <= min {
            return Err(CliError::Usage(format!("need 0 <= t_min < t_max (got {min}, {max})")));
        }
        if points < 2 {
            return Err(CliError::Usage(format!("need at least 2 grid points (got {points})")));
        }
        Ok(Grid { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        ptmetro::search::linspace(self.min, self.max, self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let file = ParamLayer {
            a: Some(1.0),
            b: Some(2.0),
            ..Default::default()
        };
        let flags = ParamLayer {
            a: Some(3.0),
            ..Default::default()
        };
        let p = Params::default().apply(&flags.over(&file));
        assert_eq!((p.a, p.b, p.gamma), (3.0, 2.0, 0.1));
    }

    #[test]
    fn default_grid_starts_above_zero() {
        let g = Params::default().grid().unwrap().values();
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 0.025);
        assert_eq!(g[1999], 50.0);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(-1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<ParamLayer>(r#"{"gama": 0.1}"#).is_err());
        let l: ParamLayer = serde_json::from_str(r#"{"gamma": 0.2, "n_qubits": 4}"#).unwrap();
        assert_eq!((l.gamma, l.n_qubits), (Some(0.2), Some(4)));
    }
}
