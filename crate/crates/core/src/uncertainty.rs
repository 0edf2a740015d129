//! Resampled WAR distributions.
//!
//! Each replicate draws the season's plate appearances with replacement,
//! carrying every drawn plate appearance's whole bundle of run values, and
//! re-prices the shadows at the resampled event counts with the replacement
//! rates held fixed. Replicate `r` draws from its own ChaCha stream derived
//! from the master seed, so results do not depend on scheduling.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{quantile_sorted, SeededRng};
use crate::valuation::{Bundles, ReplacementPool, Totals};

pub const DEFAULT_REPLICATES: usize = 3500;
pub const DEFAULT_PROBS: [f64; 7] = [0.0, 0.025, 0.25, 0.5, 0.75, 0.975, 1.0];
/// Largest players x replicates matrix kept in full.
pub const FULL_MATRIX_LIMIT: usize = 10_000_000;
/// Replicates retained by the reservoir beyond that limit.
pub const RESERVOIR_SIZE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub master_seed: u64,
    pub probs: Vec<f64>,
    pub full_matrix_limit: usize,
    pub reservoir_size: usize,
}

impl BootstrapConfig {
    pub fn new(replicates: usize, master_seed: u64) -> Self {
        Self {
            replicates,
            master_seed,
            ..Self::default()
        }
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicates: DEFAULT_REPLICATES,
            master_seed: 0,
            probs: DEFAULT_PROBS.to_vec(),
            full_matrix_limit: FULL_MATRIX_LIMIT,
            reservoir_size: RESERVOIR_SIZE,
        }
    }
}

/// Player totals for replicate `r` and the plate appearances it drew.
pub fn resample(bundles: &Bundles, master_seed: u64, r: u64) -> (Vec<Totals>, Vec<usize>) {
    let n = bundles.len();
    let mut rng = SeededRng::for_replicate(master_seed, r);
    let mut totals = vec![Totals::default(); bundles.players.len()];
    let mut drawn = Vec::with_capacity(n);
    for _ in 0..n {
        let i = rng.below(n);
        drawn.push(i);
        for e in &bundles.bundles[i] {
            totals[e.player as usize].add(e);
        }
    }
    (totals, drawn)
}

fn replicate_war(
    bundles: &Bundles,
    pool: &ReplacementPool,
    runs_per_win: f64,
    master_seed: u64,
    r: u64,
) -> Vec<f64> {
    resample(bundles, master_seed, r)
        .0
        .iter()
        .map(|t| (t.raa_total() - pool.shadow(t)) / runs_per_win)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WarDistribution {
    pub players: Vec<String>,
    pub names: Vec<String>,
    pub point: Vec<f64>,
    pub probs: Vec<f64>,
    /// `quantiles[player][k]` at `probs[k]`.
    pub quantiles: Vec<Vec<f64>>,
    /// Indices of the retained replicates, ascending.
    pub retained: Vec<u64>,
    /// `draws[player][j]` is the WAR in replicate `retained[j]`.
    pub draws: Vec<Vec<f64>>,
    pub replicates: usize,
}

/// Resamples the season `config.replicates` times with the fits and the
/// replacement pool frozen. `point` holds each player's full-season WAR.
pub fn bootstrap_war(
    bundles: &Bundles,
    pool: &ReplacementPool,
    runs_per_win: f64,
    point: &[f64],
    config: &BootstrapConfig,
) -> Result<WarDistribution> {
    if bundles.is_empty() {
        return Err(Error::EmptyInput("no plate appearances to resample"));
    }
    if config.replicates == 0 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    if config.probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Probability(format!("{:?}", config.probs)));
    }
    let players = bundles.players.len();
    let reps = config.replicates;
    let seed = config.master_seed;
    let run = |r: u64| replicate_war(bundles, pool, runs_per_win, seed, r);

    let (retained, rows): (Vec<u64>, Vec<Vec<f64>>) =
        if players.saturating_mul(reps) <= config.full_matrix_limit || reps <= config.reservoir_size {
            let rows: Vec<Vec<f64>> = (0..reps as u64).into_par_iter().map(run).collect();
            ((0..reps as u64).collect(), rows)
        } else {
            reservoir(reps, config.reservoir_size, seed, run)
        };

    let mut draws = vec![Vec::with_capacity(rows.len()); players];
    for row in &rows {
        for (p, &w) in row.iter().enumerate() {
            draws[p].push(w);
        }
    }
    let quantiles = draws
        .iter()
        .map(|d| {
            let mut s = d.clone();
            s.sort_by(f64::total_cmp);
            config.probs.iter().map(|&p| quantile_sorted(&s, p)).collect()
        })
        .collect();
    Ok(WarDistribution {
        players: bundles.players.clone(),
        names: bundles.names.clone(),
        point: point.to_vec(),
        probs: config.probs.clone(),
        quantiles,
        retained,
        draws,
        replicates: reps,
    })
}

/// Uniform sample of `k` replicates (algorithm R), computed in parallel
/// batches and admitted in replicate order.
fn reservoir<F>(reps: usize, k: usize, seed: u64, run: F) -> (Vec<u64>, Vec<Vec<f64>>)
where
    F: Fn(u64) -> Vec<f64> + Sync,
{
    let mut rng = SeededRng::new(seed ^ 0x5eed_5eed_5eed_5eed);
    let mut kept: Vec<(u64, Vec<f64>)> = Vec::with_capacity(k);
    let batch = 1024;
    let mut start = 0usize;
    while start < reps {
        let end = (start + batch).min(reps);
        // decide admissions first so only kept replicates are computed
        let mut slots = Vec::new();
        for r in start..end {
            if r < k {
                slots.push((r as u64, r));
            } else {
                let j = rng.gen_range(0..=r);
                if j < k {
                    slots.push((r as u64, j));
                }
            }
        }
        let computed: Vec<Vec<f64>> = slots.par_iter().map(|&(r, _)| run(r)).collect();
        for ((r, slot), row) in slots.into_iter().zip(computed) {
            if slot == kept.len() {
                kept.push((r, row));
            } else {
                kept[slot] = (r, row);
            }
        }
        start = end;
    }
    kept.sort_by_key(|(r, _)| *r);
    kept.into_iter().unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub player_a: String,
    pub player_b: String,
    /// Fraction of replicates in which `a` strictly exceeds `b`.
    pub prob_a_greater: f64,
    pub replicates: usize,
}

impl WarDistribution {
    fn index(&self, id: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::MissingPlayer(id.to_string()))
    }

    pub fn draws_for(&self, id: &str) -> Result<&[f64]> {
        Ok(&self.draws[self.index(id)?])
    }

    pub fn write_quantiles_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["player_id".to_string(), "name".to_string()];
        header.extend(self.probs.iter().map(|p| format!("q{}", (p * 1e6).round() / 1e4)));
        out.write_record(&header)?;
        for (i, id) in self.players.iter().enumerate() {
            let mut rec = vec![id.clone(), self.names[i].clone()];
            rec.extend(self.quantiles[i].iter().map(|q| q.to_string()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Pr(WAR_a > WAR_b)` over the joint replicates.
pub fn compare_players(dist: &WarDistribution, a: &str, b: &str) -> Result<Comparison> {
    let da = dist.draws_for(a)?;
    let db = dist.draws_for(b)?;
    let wins = da.iter().zip(db).filter(|(x, y)| x > y).count();
    Ok(Comparison {
        player_a: a.to_string(),
        player_b: b.to_string(),
        prob_a_greater: wins as f64 / da.len() as f64,
        replicates: da.len(),
    })
}
