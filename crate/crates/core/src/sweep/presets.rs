use crate::error::{Error, Result};
use crate::filters::{FilterMode, FilterSpec, PairPolicy};
use crate::rindler::RindlerParameter;
use crate::states::{FamilyParameter, Party};

use super::{default_r_grid, linspace, run_scenario_with, Execution, ScenarioConfig, SweepResult};

/// Filter strengths drawn for the negativity-versus-r figures.
pub const FIGURE_STRENGTHS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

pub const STRENGTH_GRID_POINTS: usize = 101;

/// Fixed accelerations of the strength-sweep figures. The largest nominal
/// value, 0.8, lies past `pi/4` and is drawn at `pi/4`.
pub fn figure_r_values() -> [RindlerParameter; 4] {
    [0.2, 0.4, 0.6, RindlerParameter::MAX].map(|r| RindlerParameter::new(r).expect("in range"))
}

fn strength_grid() -> Vec<f64> {
    linspace(0.005, 0.995, STRENGTH_GRID_POINTS)
}

fn filter_for(target: Party, strength: f64, mode: FilterMode) -> FilterSpec {
    match target {
        Party::Qubit => FilterSpec::qubit(strength),
        Party::Qutrit => FilterSpec::qutrit(strength, mode, PairPolicy::Discard),
    }
    .expect("preset strengths lie inside (0, 1)")
}

fn versus_r(mu: FamilyParameter, accelerated: Party, filtered: Party, mode: FilterMode) -> Vec<ScenarioConfig> {
    let base = ScenarioConfig {
        mu,
        accelerated,
        filter: None,
        r_grid: default_r_grid(),
        strength_grid: None,
    };
    let mut configs = vec![base.clone()];
    configs.extend(FIGURE_STRENGTHS.iter().map(|&s| ScenarioConfig {
        filter: Some(filter_for(filtered, s, mode)),
        ..base.clone()
    }));
    configs
}

fn versus_strength(mu: FamilyParameter, accelerated: Party, mode: FilterMode) -> Vec<ScenarioConfig> {
    let mut configs = Vec::new();
    for filtered in [Party::Qubit, Party::Qutrit] {
        for r in figure_r_values() {
            configs.push(ScenarioConfig {
                mu,
                accelerated,
                // Strength is overridden by the grid; 0.5 only fixes the filter kind.
                filter: Some(filter_for(filtered, 0.5, mode)),
                r_grid: vec![r],
                strength_grid: Some(strength_grid()),
            });
        }
    }
    configs
}

/// Scenario set behind figure `id` with the default post-selected qutrit filter.
pub fn figure_preset(id: u8, mu: FamilyParameter) -> Result<Vec<ScenarioConfig>> {
    figure_preset_with_mode(id, mu, FilterMode::Postselect)
}

/// Figures 1, 2, 4, 5 plot negativity against `r` (unfiltered baseline plus
/// five strengths); figures 3 and 6 plot it against filter strength at four
/// fixed accelerations, qubit filter first, then qutrit filter.
pub fn figure_preset_with_mode(id: u8, mu: FamilyParameter, mode: FilterMode) -> Result<Vec<ScenarioConfig>> {
    Ok(match id {
        1 => versus_r(mu, Party::Qubit, Party::Qubit, mode),
        2 => versus_r(mu, Party::Qubit, Party::Qutrit, mode),
        3 => versus_strength(mu, Party::Qubit, mode),
        4 => versus_r(mu, Party::Qutrit, Party::Qubit, mode),
        5 => versus_r(mu, Party::Qutrit, Party::Qutrit, mode),
        6 => versus_strength(mu, Party::Qutrit, mode),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown figure id {other} (expected 1..6)"
            )))
        }
    })
}

#[derive(Clone, Debug)]
pub struct FigureRun {
    pub id: u8,
    pub results: Vec<SweepResult>,
}

impl FigureRun {
    pub fn labels(&self) -> Vec<String> {
        self.results.iter().map(|r| r.scenario.label()).collect()
    }

    pub fn x_label(&self) -> &'static str {
        self.results
            .first()
            .map_or("r", |r| r.scenario.x_label())
    }
}

pub fn run_figure(id: u8, mu: FamilyParameter, mode: FilterMode, execution: Execution) -> Result<FigureRun> {
    let results = figure_preset_with_mode(id, mu, mode)?
        .iter()
        .map(|cfg| run_scenario_with(cfg, execution))
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureRun { id, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu() -> FamilyParameter {
        FamilyParameter::new(0.25).unwrap()
    }

    #[test]
    fn figure_one_structure() {
        let configs = figure_preset(1, mu()).unwrap();
        assert_eq!(configs.len(), 6);
        assert!(configs.iter().all(|c| c.accelerated == Party::Qubit));
        assert!(configs[0].filter.is_none());
        let strengths: Vec<f64> = configs[1..]
            .iter()
            .map(|c| {
                let f = c.filter.unwrap();
                assert_eq!(f.target, Party::Qubit);
                f.strength
            })
            .collect();
        assert_eq!(strengths, FIGURE_STRENGTHS);
        assert_eq!(configs[0].r_grid.len(), 101);
    }

    #[test]
    fn figure_four_accelerates_qutrit_and_filters_qubit() {
        let configs = figure_preset(4, mu()).unwrap();
        assert_eq!(configs.len(), 6);
        for c in &configs {
            assert_eq!(c.accelerated, Party::Qutrit);
        }
        assert!(configs[1..].iter().all(|c| c.filter.unwrap().target == Party::Qubit));
    }

    #[test]
    fn figure_two_and_five_filter_qutrit_in_requested_mode() {
        for id in [2, 5] {
            let configs = figure_preset_with_mode(id, mu(), FilterMode::Channel).unwrap();
            for c in &configs[1..] {
                let f = c.filter.unwrap();
                assert_eq!(f.target, Party::Qutrit);
                assert_eq!(f.mode, FilterMode::Channel);
                assert_eq!(f.pair_policy, PairPolicy::Discard);
            }
        }
    }

    #[test]
    fn strength_figures_sweep_four_fixed_r() {
        for (id, accel) in [(3, Party::Qubit), (6, Party::Qutrit)] {
            let configs = figure_preset(id, mu()).unwrap();
            assert_eq!(configs.len(), 8);
            for (k, c) in configs.iter().enumerate() {
                assert_eq!(c.accelerated, accel);
                assert_eq!(c.r_grid, vec![figure_r_values()[k % 4]]);
                let grid = c.strength_grid.as_ref().unwrap();
                assert_eq!(grid.len(), 101);
                assert_eq!(grid[0], 0.005);
                assert_eq!(grid[100], 0.995);
                let target = if k < 4 { Party::Qubit } else { Party::Qutrit };
                assert_eq!(c.filter.unwrap().target, target);
            }
        }
    }

    #[test]
    fn unknown_figure() {
        assert!(figure_preset(0, mu()).is_err());
        assert!(figure_preset(7, mu()).is_err());
    }
}
