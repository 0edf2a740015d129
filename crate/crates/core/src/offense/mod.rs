//! Splits each plate appearance's run value between the hitter and the
//! baserunners.
//!
//! The chain of fits is
//! `delta = B alpha + eps`, `eps = S beta + eta`, `mu = eps - eta`,
//! `mu = H gamma + nu`, where `B` holds ballpark and platoon indicators,
//! `S` the starting state and event type, and `H` the batter's fielding
//! position. `nu` is the hitter's runs above average and `eta` is shared
//! among the batter and runners by advancement probability.

mod baserunning;

use std::io::Write;

use serde::Serialize;

use crate::covariates::{add_categorical, park_platoon_design};
use crate::error::{Error, Result};
use crate::numerics::{ols_fit, DesignBuilder};
use crate::pbp::{BatterPosition, EventType, GameState, SeasonDataset};
use crate::OlsFit;

pub use baserunning::{
    advancement_probabilities, advancement_rank, apportion_baserunning, participants,
    AdvancementTable, BaserunnerCredit, StartBase, RANKS,
};

fn check_len(data: &SeasonDataset, y: &[f64]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::EmptyInput("no plate appearances"));
    }
    if y.len() != data.len() {
        return Err(Error::Design(format!(
            "{} plate appearances but {} responses",
            data.len(),
            y.len()
        )));
    }
    Ok(())
}

/// `delta` on ballpark and platoon indicators; residuals are `eps`.
pub fn fit_park_platoon(data: &SeasonDataset, deltas: &[f64]) -> Result<OlsFit> {
    check_len(data, deltas)?;
    ols_fit(&park_platoon_design(&data.plate_appearances)?, deltas)
}

/// `eps` on starting state and event type; residuals are `eta`.
pub fn fit_baserunner_expectation(data: &SeasonDataset, eps: &[f64]) -> Result<OlsFit> {
    check_len(data, eps)?;
    let pas = &data.plate_appearances;
    let states: Vec<GameState> = pas.iter().map(|p| p.start_state).collect();
    let events: Vec<EventType> = pas.iter().map(|p| p.event_type).collect();
    let b = DesignBuilder::new(pas.len()).intercept();
    let b = add_categorical(b, "state:", &states, |s| s.to_string());
    let b = add_categorical(b, "event:", &events, |e| e.label().to_string());
    ols_fit(&b.build()?, eps)
}

/// `mu` on the hitter's fielding position; residuals are the hitter's runs
/// above average.
pub fn fit_position_adjustment(data: &SeasonDataset, mu: &[f64]) -> Result<OlsFit> {
    check_len(data, mu)?;
    let pas = &data.plate_appearances;
    let positions: Vec<BatterPosition> = pas.iter().map(|p| p.batter_position).collect();
    let b = DesignBuilder::new(pas.len()).intercept();
    let b = add_categorical(b, "position:", &positions, |p| p.code().to_string());
    ols_fit(&b.build()?, mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffenseLedgerRow {
    pub game_id: String,
    pub pa_index: u32,
    pub batter_id: String,
    pub delta: f64,
    /// Ballpark and platoon fitted mean.
    pub park_platoon_mean: f64,
    pub eps_hat: f64,
    pub eta_hat: f64,
    pub mu_hat: f64,
    /// Batting position fitted mean.
    pub position_mean: f64,
    pub raa_hit: f64,
    pub credits: Vec<BaserunnerCredit>,
}

impl OffenseLedgerRow {
    pub fn raa_br_total(&self) -> f64 {
        self.credits.iter().map(|c| c.credit).sum()
    }
}

#[derive(Debug, Clone)]
pub struct OffenseLedger {
    pub rows: Vec<OffenseLedgerRow>,
    pub park_platoon: OlsFit,
    pub baserunner: OlsFit,
    pub position: OlsFit,
    pub advancement: AdvancementTable,
}

/// Runs the offensive chain over a season given each plate appearance's
/// run value.
pub fn build_offense_ledger(data: &SeasonDataset, deltas: &[f64]) -> Result<OffenseLedger> {
    let park_platoon = fit_park_platoon(data, deltas)?;
    let eps = &park_platoon.residuals;
    let baserunner = fit_baserunner_expectation(data, eps)?;
    let eta = &baserunner.residuals;
    let mu: Vec<f64> = eps.iter().zip(eta).map(|(e, h)| e - h).collect();
    let position = fit_position_adjustment(data, &mu)?;
    let advancement = advancement_probabilities(data);

    let rows = data
        .plate_appearances
        .iter()
        .enumerate()
        .map(|(i, pa)| OffenseLedgerRow {
            game_id: pa.game_id.clone(),
            pa_index: pa.pa_index,
            batter_id: pa.batter_id.clone(),
            delta: deltas[i],
            park_platoon_mean: park_platoon.fitted[i],
            eps_hat: eps[i],
            eta_hat: eta[i],
            mu_hat: mu[i],
            position_mean: position.fitted[i],
            raa_hit: position.residuals[i],
            credits: apportion_baserunning(pa, eta[i], &advancement),
        })
        .collect();
    Ok(OffenseLedger {
        rows,
        park_platoon,
        baserunner,
        position,
        advancement,
    })
}

impl OffenseLedger {
    /// One `pa` row per plate appearance followed by one `br` row per
    /// baserunning credit.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "game_id", "pa_index", "row", "player_id", "delta", "eps_hat", "eta_hat", "mu_hat",
            "raa_hit", "start_base", "dest", "kappa", "raa_br",
        ])?;
        for r in &self.rows {
            let idx = r.pa_index.to_string();
            out.write_record([
                r.game_id.as_str(),
                &idx,
                "pa",
                &r.batter_id,
                &r.delta.to_string(),
                &r.eps_hat.to_string(),
                &r.eta_hat.to_string(),
                &r.mu_hat.to_string(),
                &r.raa_hit.to_string(),
                "",
                "",
                "",
                "",
            ])?;
            for c in &r.credits {
                out.write_record([
                    r.game_id.as_str(),
                    &idx,
                    "br",
                    &c.runner_id,
                    "",
                    "",
                    "",
                    "",
                    "",
                    c.start.code(),
                    c.dest.code(),
                    &c.kappa.to_string(),
                    &c.credit.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
