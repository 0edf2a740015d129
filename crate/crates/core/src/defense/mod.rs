//! Splits `-delta` between the pitcher and the fielders.
//!
//! A kernel smoother over batted-ball locations gives the probability `p`
//! that a ball in play becomes an out; the fielders take `-delta * p` and the
//! pitcher the rest. Plays without a ball in play go entirely to the
//! pitcher. Per-position logistic models share the fielders' part among the
//! nine positions, and both sides are then adjusted for ballpark (and, for
//! pitchers, platoon).

mod fielding;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::covariates::{park_design, park_platoon_design};
use crate::error::{Error, Result};
use crate::numerics::{ols_fit, scott_bandwidth, smooth_out_probability, Bandwidth};
use crate::pbp::field::clip_to_fair;
use crate::pbp::{FieldPosition, PlateAppearance, SeasonDataset, Strictness};
use crate::{OlsFit, OutSurface};

pub use fielding::{
    apportion_fielding, fielding_observations, fielding_terms, fit_fielding_models, shares_from,
    FieldingModel, FieldingModels, FieldingResponsibility, FIELDING_TERMS, MIN_TOTAL_PROBABILITY,
};

/// Pitcher and fielder shares of one plate appearance's defensive value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefenseSplit {
    pub p_hat: f64,
    pub delta_p: f64,
    pub delta_f: f64,
}

/// Out-probability surface over balls in play, clipped to fair territory.
/// Without a bandwidth, Scott's rule is used per axis.
pub fn fit_out_surface(data: &SeasonDataset, bandwidth: Option<Bandwidth<f64>>) -> Result<OutSurface> {
    let points: Vec<((f64, f64), bool)> = data
        .plate_appearances
        .iter()
        .filter(|pa| pa.event_type.ball_in_play())
        .filter_map(|pa| {
            pa.bip_location
                .map(|(x, y)| (clip_to_fair(x, y), pa.outs_on_play() > 0))
        })
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyInput("no balls in play with coordinates"));
    }
    let bw = match bandwidth {
        Some(b) => b,
        None => {
            let locs: Vec<(f64, f64)> = points.iter().map(|p| p.0).collect();
            scott_bandwidth(&locs).ok_or(Error::Bandwidth(0.0, 0.0))?
        }
    };
    smooth_out_probability(&points, bw)
}

pub fn split_responsibility(
    pa: &PlateAppearance,
    delta: f64,
    surface: &OutSurface,
    strictness: Strictness,
) -> Result<DefenseSplit> {
    if !pa.event_type.ball_in_play() {
        return Ok(DefenseSplit {
            p_hat: 0.0,
            delta_p: -delta,
            delta_f: 0.0,
        });
    }
    let p_hat = match (pa.bip_location, strictness) {
        (Some((x, y)), _) => {
            let (x, y) = clip_to_fair(x, y);
            surface.evaluate(x, y)
        }
        (None, Strictness::Lenient) => surface.global_rate(),
        (None, Strictness::Strict) => {
            return Err(Error::Record {
                game_id: pa.game_id.clone(),
                pa_index: pa.pa_index,
                reason: "ball in play without coordinates".into(),
            })
        }
    };
    Ok(split_with(delta, p_hat))
}

pub fn split_with(delta: f64, p_hat: f64) -> DefenseSplit {
    let delta_f = -delta * p_hat;
    DefenseSplit {
        p_hat,
        delta_p: -delta - delta_f,
        delta_f,
    }
}

/// Per-fielder values on ballpark indicators; residuals are fielding runs
/// above average.
pub fn fit_fielding_park_adjustment(parks: &[&str], values: &[f64]) -> Result<OlsFit> {
    if parks.len() != values.len() {
        return Err(Error::Design(format!("{} parks but {} values", parks.len(), values.len())));
    }
    ols_fit(&park_design(parks)?, values)
}

/// Pitcher shares on ballpark and platoon indicators; residuals are pitching
/// runs above average.
pub fn fit_pitching_adjustment(data: &SeasonDataset, delta_p: &[f64]) -> Result<OlsFit> {
    if data.is_empty() {
        return Err(Error::EmptyInput("no plate appearances"));
    }
    if delta_p.len() != data.len() {
        return Err(Error::Design(format!(
            "{} plate appearances but {} responses",
            data.len(),
            delta_p.len()
        )));
    }
    ols_fit(&park_platoon_design(&data.plate_appearances)?, delta_p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldingCredit {
    pub position: FieldPosition,
    pub fielder_id: String,
    pub probability: f64,
    pub share: f64,
    pub value: f64,
    pub park_mean: f64,
    pub raa_field: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefenseLedgerRow {
    pub game_id: String,
    pub pa_index: u32,
    pub pitcher_id: String,
    pub delta: f64,
    pub split: DefenseSplit,
    pub pitch_mean: f64,
    pub raa_pitch: f64,
    /// Nine rows for a ball in play, none otherwise.
    pub fielding: Vec<FieldingCredit>,
}

impl DefenseLedgerRow {
    pub fn raa_field_total(&self) -> f64 {
        self.fielding.iter().map(|f| f.raa_field).sum()
    }
}

#[derive(Debug, Clone)]
pub struct DefenseLedger {
    pub rows: Vec<DefenseLedgerRow>,
    pub surface: OutSurface,
    pub models: FieldingModels,
    pub pitching: OlsFit,
    /// `None` when the season has no balls in play.
    pub fielding_park: Option<OlsFit>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DefenseOptions {
    pub bandwidth: Option<Bandwidth<f64>>,
    pub strictness: Strictness,
}

pub fn build_defense_ledger(
    data: &SeasonDataset,
    deltas: &[f64],
    opts: DefenseOptions,
) -> Result<DefenseLedger> {
    if deltas.len() != data.len() {
        return Err(Error::Design(format!(
            "{} plate appearances but {} run values",
            data.len(),
            deltas.len()
        )));
    }
    let surface = fit_out_surface(data, opts.bandwidth)?;
    let models = fit_fielding_models(data)?;
    let pas = &data.plate_appearances;

    let splits: Vec<DefenseSplit> = pas
        .par_iter()
        .zip(deltas.par_iter())
        .map(|(pa, &d)| split_responsibility(pa, d, &surface, opts.strictness))
        .collect::<Result<_>>()?;
    let responsibilities: Vec<Option<FieldingResponsibility>> = pas
        .par_iter()
        .zip(splits.par_iter())
        .map(|(pa, s)| {
            pa.event_type
                .ball_in_play()
                .then(|| apportion_fielding(pa.bip_location, s.delta_f, &models))
        })
        .collect();

    let delta_p: Vec<f64> = splits.iter().map(|s| s.delta_p).collect();
    let pitching = fit_pitching_adjustment(data, &delta_p)?;

    let mut parks = Vec::new();
    let mut values = Vec::new();
    for (pa, r) in pas.iter().zip(&responsibilities) {
        if let Some(r) = r {
            for v in r.values {
                parks.push(pa.ballpark_id.as_str());
                values.push(v);
            }
        }
    }
    let fielding_park = if values.is_empty() {
        None
    } else {
        Some(fit_fielding_park_adjustment(&parks, &values)?)
    };

    let mut k = 0;
    let mut rows = Vec::with_capacity(pas.len());
    for (i, pa) in pas.iter().enumerate() {
        let mut fielding = Vec::new();
        if let (Some(r), Some(fit)) = (&responsibilities[i], &fielding_park) {
            for pos in FieldPosition::ALL {
                let j = pos.index();
                fielding.push(FieldingCredit {
                    position: pos,
                    fielder_id: pa.fielder(pos).to_string(),
                    probability: r.probabilities[j],
                    share: r.shares[j],
                    value: r.values[j],
                    park_mean: fit.fitted[k],
                    raa_field: fit.residuals[k],
                });
                k += 1;
            }
        }
        rows.push(DefenseLedgerRow {
            game_id: pa.game_id.clone(),
            pa_index: pa.pa_index,
            pitcher_id: pa.pitcher_id.clone(),
            delta: deltas[i],
            split: splits[i],
            pitch_mean: pitching.fitted[i],
            raa_pitch: pitching.residuals[i],
            fielding,
        });
    }
    Ok(DefenseLedger {
        rows,
        surface,
        models,
        pitching,
        fielding_park,
    })
}

/// Regular grid over the playing field for contour plots.
pub fn surface_grid(step: f64) -> (Vec<f64>, Vec<f64>) {
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        let n = ((hi - lo) / step).floor() as usize;
        (0..=n).map(|i| lo + i as f64 * step).collect()
    };
    (axis(-330.0, 330.0), axis(0.0, 450.0))
}

/// CSV `x,y,p_hat` of the out-probability surface on a grid.
pub fn write_surface_grid<W: Write>(surface: &OutSurface, step: f64, w: W) -> Result<()> {
    let (gx, gy) = surface_grid(step);
    let values = surface.evaluate_grid(&gx, &gy);
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "y", "p_hat"])?;
    for (iy, y) in gy.iter().enumerate() {
        for (ix, x) in gx.iter().enumerate() {
            let v = values[iy * gx.len() + ix];
            out.write_record([x.to_string(), y.to_string(), v.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}
