//! Data behind the six figures: line A with feedback, line B without.

use ptmetro::{
    classify_regime, default_step, quantum_fisher, FeedbackFamily, NoFeedbackFamily, PtRegime, StateFamily, TimeSeries,
};
use serde::Serialize;

use crate::config::Grid;
use crate::error::CliError;
use crate::scan::{map_points, Quantity};

pub const FIG_GAMMA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FigureSpec {
    pub id: u8,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    /// Parameters exactly as they are quoted in the figure caption.
    pub caption: &'static str,
    /// `F` for Figs. 2–4, `F_over_t` for Figs. 5–7.
    pub quantity: Quantity,
}

pub const FIGURES: [FigureSpec; 6] = [
    FigureSpec {
        id: 2,
        a: 10.0 * std::f64::consts::SQRT_2,
        b: 10.0,
        gamma: FIG_GAMMA,
        caption: "a=10√2, b=10, γ=0.1",
        quantity: Quantity::Qfi,
    },
    FigureSpec {
        id: 3,
        a: 0.8,
        b: -0.8,
        gamma: FIG_GAMMA,
        caption: "a=0.8, b=-0.8, γ=0.1",
        quantity: Quantity::Qfi,
    },
    FigureSpec {
        id: 4,
        a: 1.0,
        b: -2.0,
        gamma: FIG_GAMMA,
        caption: "a=1, b=-2, γ=0.1",
        quantity: Quantity::Qfi,
    },
    FigureSpec {
        id: 5,
        a: 5.0,
        b: 4.0,
        gamma: FIG_GAMMA,
        caption: "a=5, b=4, γ=0.1",
        quantity: Quantity::QfiRate,
    },
    FigureSpec {
        id: 6,
        a: 1.0,
        b: 1.0,
        gamma: FIG_GAMMA,
        caption: "a=1, b=1, γ=0.1",
        quantity: Quantity::QfiRate,
    },
    FigureSpec {
        id: 7,
        a: 4.0,
        b: 5.0,
        gamma: FIG_GAMMA,
        caption: "a=4, b=5, γ=0.1",
        quantity: Quantity::QfiRate,
    },
];

pub fn figure_spec(id: u8) -> Result<FigureSpec, CliError> {
    FIGURES
        .iter()
        .find(|f| f.id == id)
        .copied()
        .ok_or_else(|| CliError::Usage(format!("figure must be one of 2..7 (got {id})")))
}

impl FigureSpec {
    pub fn regime(&self) -> PtRegime {
        classify_regime(self.a, self.b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureData {
    pub spec: FigureSpec,
    pub line_a: TimeSeries,
    pub line_b: TimeSeries,
}

/// QFI of `family` at `γ = 0.1` on `ts`, optionally divided by `t`.
pub fn qfi_series(
    family: &dyn StateFamily,
    label: &str,
    ts: &[f64],
    per_time: bool,
    parallel: bool,
) -> Result<TimeSeries, CliError> {
    let h = default_step(FIG_GAMMA);
    let values = map_points(ts, parallel, |t| {
        let f = quantum_fisher(family, FIG_GAMMA, t, h)
            .map_err(|e| CliError::from(e).at("t", t))?
            .value;
        if per_time {
            if t <= 0.0 {
                return Err(CliError::Usage("F/t needs t_min > 0".into()));
            }
            Ok(f / t)
        } else {
            Ok(f)
        }
    })?;
    Ok(TimeSeries::new(label, ts.to_vec(), values)?)
}

pub fn figure(id: u8, grid: &Grid, parallel: bool) -> Result<FigureData, CliError> {
    let spec = figure_spec(id)?;
    let ts = grid.values();
    let per_time = spec.quantity == Quantity::QfiRate;
    let q = spec.quantity.name();
    let line_a = qfi_series(
        &FeedbackFamily::new(spec.a, spec.b),
        &format!("fig{id}_A_feedback_{q}"),
        &ts,
        per_time,
        parallel,
    )?;
    let line_b = qfi_series(
        &NoFeedbackFamily,
        &format!("fig{id}_B_no_feedback_{q}"),
        &ts,
        per_time,
        parallel,
    )?;
    Ok(FigureData { spec, line_a, line_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caption_regimes() {
        assert!(matches!(figure_spec(2).unwrap().regime(), PtRegime::Unbroken { .. }));
        assert_eq!(figure_spec(3).unwrap().regime(), PtRegime::ExceptionalPoint);
        assert!(matches!(figure_spec(4).unwrap().regime(), PtRegime::Broken { .. }));
        assert_eq!(figure_spec(6).unwrap().regime(), PtRegime::ExceptionalPoint);
        assert!(figure_spec(1).is_err());
        assert!(figure_spec(8).is_err());
    }

    #[test]
    fn baseline_is_shared_by_all_figures() {
        let grid = Grid::new(0.5, 10.0, 20).unwrap();
        let b2 = figure(2, &grid, true).unwrap().line_b;
        let b3 = figure(3, &grid, true).unwrap().line_b;
        assert_eq!(b2.values, b3.values);
        let b5 = figure(5, &grid, true).unwrap().line_b;
        for ((f, r), t) in b2.values.iter().zip(&b5.values).zip(&b2.grid) {
            assert_eq!(f / t, *r);
        }
    }
}
