//! Season-level wiring: run expectancy, offensive and defensive ledgers,
//! bundles and valuation.

use serde::Serialize;

use crate::defense::{build_defense_ledger, DefenseLedger, DefenseOptions};
use crate::error::Result;
use crate::numerics::Bandwidth;
use crate::offense::{build_offense_ledger, OffenseLedger};
use crate::pbp::{SeasonDataset, Strictness};
use crate::run_expectancy::{delta, estimate_matrix_with, Coverage, RunValue};
use crate::valuation::{build_bundles, value_players, Bundles, Cutoffs, Valuation, DEFAULT_RUNS_PER_WIN};
use crate::ReMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub cutoffs: Cutoffs,
    pub runs_per_win: f64,
    /// Smoother bandwidth; Scott's rule when absent.
    pub bandwidth: Option<Bandwidth<f64>>,
    #[serde(skip)]
    pub strictness: Strictness,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            cutoffs: Cutoffs::default(),
            runs_per_win: DEFAULT_RUNS_PER_WIN,
            bandwidth: None,
            strictness: Strictness::Strict,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeasonValuation {
    pub matrix: ReMatrix,
    pub run_values: Vec<RunValue<f64>>,
    pub offense: OffenseLedger,
    pub defense: DefenseLedger,
    pub bundles: Bundles,
    pub valuation: Valuation,
    /// Half-innings left out of the run expectancy estimate.
    pub excluded_half_innings: Vec<String>,
}

impl SeasonValuation {
    pub fn deltas(&self) -> Vec<f64> {
        self.run_values.iter().map(|v| v.delta).collect()
    }

    pub fn point_war(&self) -> Vec<f64> {
        self.valuation.players.iter().map(|p| p.war).collect()
    }
}

pub fn evaluate_season(data: &SeasonDataset, config: &PipelineConfig) -> Result<SeasonValuation> {
    let estimate = estimate_matrix_with::<f64>(data, Coverage::Full)?;
    let matrix = estimate.matrix;
    let run_values: Vec<RunValue<f64>> = data
        .plate_appearances
        .iter()
        .map(|pa| delta(pa, &matrix))
        .collect::<Result<_>>()?;
    let deltas: Vec<f64> = run_values.iter().map(|v| v.delta).collect();
    let offense = build_offense_ledger(data, &deltas)?;
    let defense = build_defense_ledger(
        data,
        &deltas,
        DefenseOptions {
            bandwidth: config.bandwidth,
            strictness: config.strictness,
        },
    )?;
    let bundles = build_bundles(&offense.rows, &defense.rows, &data.roster)?;
    let valuation = value_players(&bundles, config.cutoffs, config.runs_per_win)?;
    Ok(SeasonValuation {
        matrix,
        run_values,
        offense,
        defense,
        bundles,
        valuation,
        excluded_half_innings: estimate.excluded,
    })
}
