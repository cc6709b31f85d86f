//! Parameter sweeps over acceleration and filter strength.

mod output;
mod presets;

pub use output::{csv_string, svg_string, write_csv, write_svg};
pub use presets::{
    figure_preset, figure_preset_with_mode, figure_r_values, run_figure, FigureRun,
    FIGURE_STRENGTHS, STRENGTH_GRID_POINTS,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{apply_filter, FilterSpec};
use crate::measures::negativity;
use crate::rindler::{accelerate, RindlerParameter};
use crate::states::{one_param_state, FamilyParameter, Party};

pub const DEFAULT_R_STEPS: usize = 101;

/// `n` evenly spaced points from `start` to `end`, both included exactly.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn r_grid(r_min: f64, r_max: f64, steps: usize) -> Result<Vec<RindlerParameter>> {
    linspace(r_min, r_max, steps)
        .into_iter()
        .map(RindlerParameter::new)
        .collect()
}

/// 101 points on `[0, pi/4]`.
pub fn default_r_grid() -> Vec<RindlerParameter> {
    r_grid(0.0, RindlerParameter::MAX, DEFAULT_R_STEPS).expect("default grid is in range")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub mu: FamilyParameter,
    pub accelerated: Party,
    pub filter: Option<FilterSpec>,
    pub r_grid: Vec<RindlerParameter>,
    /// When present, each value replaces the filter strength in turn.
    pub strength_grid: Option<Vec<f64>>,
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let rs: Vec<f64> = self.r_grid.iter().map(|r| r.value()).collect();
        if rs.is_empty() || !strictly_increasing(&rs) {
            return Err(Error::InvalidConfig(
                "r grid must be non-empty and strictly increasing".into(),
            ));
        }
        if let Some(grid) = &self.strength_grid {
            let filter = self.filter.as_ref().ok_or_else(|| {
                Error::InvalidConfig("a strength grid needs a filter to vary".into())
            })?;
            if grid.is_empty() || !strictly_increasing(grid) {
                return Err(Error::InvalidConfig(
                    "strength grid must be non-empty and strictly increasing".into(),
                ));
            }
            for &s in grid {
                filter.with_strength(s)?;
            }
        }
        Ok(())
    }

    /// The x axis of a plot of this scenario.
    pub fn x_label(&self) -> &'static str {
        if self.strength_grid.is_some() {
            "strength"
        } else {
            "r"
        }
    }

    /// Short human-readable curve label.
    pub fn label(&self) -> String {
        let accel = format!("{} accelerated", self.accelerated);
        match (&self.filter, &self.strength_grid) {
            (None, _) => format!("{accel}, unfiltered"),
            (Some(f), Some(_)) => {
                let r = self.r_grid[0].value();
                format!("{accel}, {} filter ({}), r={}", f.target, f.mode, r)
            }
            (Some(f), None) => {
                let symbol = match f.target {
                    Party::Qubit => "kappa",
                    Party::Qutrit => "Q",
                };
                format!("{accel}, {} filter ({}), {symbol}={}", f.target, f.mode, f.strength)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub strength: Option<f64>,
    /// `None` when the filter's success probability vanishes.
    pub negativity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub scenario: ScenarioConfig,
    pub version: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// state -> accelerate -> optional filter -> negativity, at one grid point.
pub fn evaluate_point(
    mu: FamilyParameter,
    accelerated: Party,
    r: RindlerParameter,
    filter: Option<&FilterSpec>,
) -> Result<Option<f64>> {
    let rho = accelerate(&one_param_state(mu), accelerated, r)?;
    let rho = match filter {
        None => rho,
        Some(spec) => match apply_filter(&rho, spec) {
            Ok(filtered) => filtered,
            Err(Error::FilteredToZero { .. }) => return Ok(None),
            Err(other) => return Err(other),
        },
    };
    Ok(Some(negativity(&rho)?.value()))
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SweepResult> {
    run_scenario_with(cfg, Execution::default())
}

/// Rows come back r-major, strength-minor, whatever the execution mode.
pub fn run_scenario_with(cfg: &ScenarioConfig, execution: Execution) -> Result<SweepResult> {
    cfg.validate()?;
    let mut points: Vec<(RindlerParameter, Option<FilterSpec>)> = Vec::new();
    for &r in &cfg.r_grid {
        match (&cfg.filter, &cfg.strength_grid) {
            (Some(filter), Some(grid)) => {
                for &s in grid {
                    points.push((r, Some(filter.with_strength(s)?)));
                }
            }
            (filter, _) => points.push((r, *filter)),
        }
    }
    let eval = |(r, filter): &(RindlerParameter, Option<FilterSpec>)| -> Result<SweepRow> {
        Ok(SweepRow {
            r: r.value(),
            strength: filter.map(|f| f.strength),
            negativity: evaluate_point(cfg.mu, cfg.accelerated, *r, filter.as_ref())?,
        })
    };
    let rows = match execution {
        Execution::Serial => points.iter().map(eval).collect::<Result<Vec<_>>>()?,
        Execution::Parallel => points.par_iter().map(eval).collect::<Result<Vec<_>>>()?,
    };
    Ok(SweepResult {
        scenario: cfg.clone(),
        version: crate::VERSION.to_string(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{FilterMode, PairPolicy};
    use std::f64::consts::FRAC_PI_4;

    fn mu(x: f64) -> FamilyParameter {
        FamilyParameter::new(x).unwrap()
    }

    fn rs(values: &[f64]) -> Vec<RindlerParameter> {
        values.iter().map(|&r| RindlerParameter::new(r).unwrap()).collect()
    }

    #[test]
    fn linspace_endpoints_are_exact() {
        let g = linspace(0.0, FRAC_PI_4, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], FRAC_PI_4);
        assert_eq!(linspace(0.3, 0.9, 1), vec![0.3]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn unfiltered_qubit_sweep() {
        let cfg = ScenarioConfig {
            mu: mu(0.0),
            accelerated: Party::Qubit,
            filter: None,
            r_grid: rs(&[0.0, std::f64::consts::FRAC_PI_8, FRAC_PI_4]),
            strength_grid: None,
        };
        let res = run_scenario(&cfg).unwrap();
        let n: Vec<f64> = res.rows.iter().map(|row| row.negativity.unwrap()).collect();
        assert!((n[0] - 1.0).abs() < 1e-12);
        assert!((n[2] - 0.5).abs() < 1e-12);
        assert!(0.5 < n[1] && n[1] < 1.0);
        assert!(res.rows.iter().all(|row| row.strength.is_none()));
    }

    #[test]
    fn half_kappa_matches_unfiltered_at_rest() {
        let base = ScenarioConfig {
            mu: mu(0.3),
            accelerated: Party::Qubit,
            filter: None,
            r_grid: rs(&[0.0]),
            strength_grid: None,
        };
        let filtered = ScenarioConfig {
            filter: Some(FilterSpec::qubit(0.5).unwrap()),
            ..base.clone()
        };
        let a = run_scenario(&base).unwrap().rows[0].negativity.unwrap();
        let b = run_scenario(&filtered).unwrap().rows[0].negativity.unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn postselect_closed_form_at_rest() {
        let cfg = ScenarioConfig {
            mu: mu(0.5),
            accelerated: Party::Qubit,
            filter: Some(FilterSpec::qutrit(0.49, FilterMode::Postselect, PairPolicy::Discard).unwrap()),
            r_grid: rs(&[0.0]),
            strength_grid: None,
        };
        let row = run_scenario(&cfg).unwrap().rows[0];
        assert_eq!(row.strength, Some(0.49));
        assert!((row.negativity.unwrap() - 2.0 * 0.7 / 2.51).abs() < 1e-12);
        assert!((row.negativity.unwrap() - 0.55777).abs() < 1e-5);
    }

    #[test]
    fn row_order_and_count() {
        let cfg = ScenarioConfig {
            mu: mu(0.25),
            accelerated: Party::Qutrit,
            filter: Some(FilterSpec::qubit(0.5).unwrap()),
            r_grid: rs(&[0.1, 0.2, 0.3]),
            strength_grid: Some(vec![0.2, 0.4]),
        };
        let res = run_scenario_with(&cfg, Execution::Serial).unwrap();
        let keys: Vec<(f64, Option<f64>)> = res.rows.iter().map(|r| (r.r, r.strength)).collect();
        assert_eq!(
            keys,
            vec![
                (0.1, Some(0.2)),
                (0.1, Some(0.4)),
                (0.2, Some(0.2)),
                (0.2, Some(0.4)),
                (0.3, Some(0.2)),
                (0.3, Some(0.4)),
            ]
        );
        assert_eq!(res, run_scenario_with(&cfg, Execution::Parallel).unwrap());
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let mut cfg = ScenarioConfig {
            mu: mu(0.25),
            accelerated: Party::Qubit,
            filter: None,
            r_grid: rs(&[0.2, 0.1]),
            strength_grid: None,
        };
        assert!(run_scenario(&cfg).is_err());
        cfg.r_grid = Vec::new();
        assert!(run_scenario(&cfg).is_err());
        cfg.r_grid = rs(&[0.1]);
        cfg.strength_grid = Some(vec![0.5]);
        assert!(matches!(run_scenario(&cfg), Err(Error::InvalidConfig(_))));
        cfg.filter = Some(FilterSpec::qubit(0.5).unwrap());
        cfg.strength_grid = Some(vec![0.5, 1.0]);
        assert!(run_scenario(&cfg).is_err());
    }
}
