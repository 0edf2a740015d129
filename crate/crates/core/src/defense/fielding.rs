use std::io::Write;

use log::warn;
use serde::Serialize;

use crate::error::Result;
use crate::numerics::{logistic_fit, DesignMatrix, LogisticOptions};
use crate::pbp::field::clip_to_fair;
use crate::pbp::{FieldPosition, SeasonDataset};
use crate::LogitFit;

pub const FIELDING_TERMS: [&str; 6] = ["(intercept)", "x", "y", "x^2", "y^2", "xy"];

/// Probabilities below this for all nine positions trigger an equal split.
pub const MIN_TOTAL_PROBABILITY: f64 = 1e-12;

pub fn fielding_terms(x: f64, y: f64) -> [f64; 6] {
    [1.0, x, y, x * x, y * y, x * y]
}

/// Probability that one position converts a ball in play at `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldingModel {
    pub position: FieldPosition,
    pub fit: Option<LogitFit>,
    /// Empirical rate used instead of a fit when the position's response
    /// has a single class.
    pub constant: Option<f64>,
}

impl FieldingModel {
    pub fn degenerate(&self) -> bool {
        self.fit.is_none()
    }

    pub fn predict(&self, x: f64, y: f64) -> f64 {
        match (&self.fit, self.constant) {
            (Some(f), _) => f.predict(&fielding_terms(x, y)),
            (None, Some(c)) => c,
            (None, None) => 0.0,
        }
    }

    /// `(term, coefficient)` pairs; a degenerate model reports its rate as
    /// the intercept on the probability scale.
    pub fn coefficients(&self) -> Vec<(&'static str, f64)> {
        match &self.fit {
            Some(f) => FIELDING_TERMS.iter().copied().zip(f.coefficients.iter().copied()).collect(),
            None => vec![("rate", self.constant.unwrap_or(0.0))],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldingModels {
    pub models: Vec<FieldingModel>,
    /// Outs on balls in play with no credited position.
    pub uncredited_outs: usize,
}

impl FieldingModels {
    pub fn probabilities(&self, x: f64, y: f64) -> [f64; 9] {
        let mut p = [0.0; 9];
        for m in &self.models {
            p[m.position.index()] = m.predict(x, y);
        }
        p
    }

    pub fn write_coefficients_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["position", "term", "coefficient"])?;
        for m in &self.models {
            for (term, c) in m.coefficients() {
                out.write_record([m.position.code(), term, &c.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Balls in play with coordinates, clipped to fair territory, with the
/// position credited for converting them (if any out was made).
pub fn fielding_observations(data: &SeasonDataset) -> (Vec<(f64, f64)>, Vec<Option<FieldPosition>>, usize) {
    let mut points = Vec::new();
    let mut credited = Vec::new();
    let mut uncredited = 0;
    for pa in &data.plate_appearances {
        if !pa.event_type.ball_in_play() {
            continue;
        }
        let Some((x, y)) = pa.bip_location else { continue };
        points.push(clip_to_fair(x, y));
        let made_out = pa.outs_on_play() > 0;
        if made_out && pa.credited_fielder.is_none() {
            uncredited += 1;
        }
        credited.push(if made_out { pa.credited_fielder } else { None });
    }
    (points, credited, uncredited)
}

/// One logistic model per position on `[1, x, y, x^2, y^2, xy]`.
pub fn fit_fielding_models(data: &SeasonDataset) -> Result<FieldingModels> {
    let (points, credited, uncredited_outs) = fielding_observations(data);
    if uncredited_outs > 0 {
        warn!("{uncredited_outs} outs on balls in play have no credited fielder; treated as unconverted");
    }
    let n = points.len();
    let values: Vec<f64> = points.iter().flat_map(|&(x, y)| fielding_terms(x, y)).collect();
    let design = if n > 0 {
        Some(DesignMatrix::new(
            FIELDING_TERMS.iter().map(|s| s.to_string()).collect(),
            n,
            values,
            true,
        )?)
    } else {
        None
    };
    let mut models = Vec::with_capacity(9);
    for pos in FieldPosition::ALL {
        let y: Vec<bool> = credited.iter().map(|c| *c == Some(pos)).collect();
        let hits = y.iter().filter(|&&v| v).count();
        let model = match &design {
            Some(d) if hits > 0 && hits < n => FieldingModel {
                position: pos,
                fit: Some(logistic_fit(d, &y, LogisticOptions::default())?),
                constant: None,
            },
            _ => {
                let rate = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
                warn!("position {} has a single-class response; using constant rate {rate}", pos.code());
                FieldingModel {
                    position: pos,
                    fit: None,
                    constant: Some(rate),
                }
            }
        };
        models.push(model);
    }
    let capped: Vec<&str> = models
        .iter()
        .filter(|m| m.fit.as_ref().is_some_and(|f| f.separated))
        .map(|m| m.position.code())
        .collect();
    if !capped.is_empty() {
        warn!("fielding models at {capped:?} reached the separation cap; coefficients capped");
    }
    Ok(FieldingModels {
        models,
        uncredited_outs,
    })
}

/// Per-position responsibility for one ball in play.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldingResponsibility {
    pub probabilities: [f64; 9],
    pub shares: [f64; 9],
    pub values: [f64; 9],
    /// All nine probabilities were negligible and the value was split evenly.
    pub equal_split: bool,
}

/// Normalizes the position probabilities at `location` into shares and
/// splits `delta_f` accordingly. Without a location the split is even.
pub fn apportion_fielding(
    location: Option<(f64, f64)>,
    delta_f: f64,
    models: &FieldingModels,
) -> FieldingResponsibility {
    let probabilities = match location {
        Some((x, y)) => {
            let (x, y) = clip_to_fair(x, y);
            models.probabilities(x, y)
        }
        None => [0.0; 9],
    };
    shares_from(probabilities, delta_f)
}

pub fn shares_from(probabilities: [f64; 9], delta_f: f64) -> FieldingResponsibility {
    let total: f64 = probabilities.iter().sum();
    let equal_split = !(total >= MIN_TOTAL_PROBABILITY);
    let shares = if equal_split {
        warn!("fielding probabilities all negligible; splitting evenly");
        [1.0 / 9.0; 9]
    } else {
        probabilities.map(|p| p / total)
    };
    FieldingResponsibility {
        probabilities,
        shares,
        values: shares.map(|s| s * delta_f),
        equal_split,
    }
}
