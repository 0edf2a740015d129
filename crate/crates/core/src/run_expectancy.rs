//! Expected runs to the end of the half-inning for each base-out state, and
//! the per-plate-appearance run value `delta = rho(end) - rho(start) + runs`.

use std::fmt::{Debug, Display};
use std::io::Write;

use log::warn;
use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pbp::{GameState, PlateAppearance, SeasonDataset};

/// Scalars the matrix can be estimated in: floats, or exact rationals.
pub trait RunScalar: Num + Copy + FromPrimitive + PartialOrd + Debug + Send + Sync {}

impl<T: Num + Copy + FromPrimitive + PartialOrd + Debug + Send + Sync> RunScalar for T {}

/// `rho(outs, bases)` over the 24 live states. The three-out state is worth
/// zero by definition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunExpectancyMatrix<T> {
    rho: [[Option<T>; 8]; 3],
    counts: [[u32; 8]; 3],
}

/// Whether every live state must be observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Full,
    Partial,
}

#[derive(Debug, Clone)]
pub struct Estimate<T> {
    pub matrix: RunExpectancyMatrix<T>,
    /// Half-innings left out because they end short of three outs without
    /// being a walk-off.
    pub excluded: Vec<String>,
}

/// One plate appearance's run value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunValue<T> {
    pub delta_rho: T,
    pub runs: T,
    pub delta: T,
}

impl<T: RunScalar> RunExpectancyMatrix<T> {
    /// Matrix with given values for every live state (sample counts zero).
    pub fn from_values(rho: [[T; 8]; 3]) -> Self {
        Self {
            rho: rho.map(|row| row.map(Some)),
            counts: [[0; 8]; 3],
        }
    }

    pub fn get(&self, state: GameState) -> Option<T> {
        if state.is_absorbing() {
            return Some(T::zero());
        }
        self.rho[state.outs() as usize][state.bases() as usize]
    }

    /// `rho(outs, bases)`; `None` for unobserved states or out-of-range
    /// arguments.
    pub fn rho(&self, outs: u8, bases: u8) -> Option<T> {
        GameState::new(outs, bases).and_then(|s| self.get(s))
    }

    pub fn count(&self, state: GameState) -> u32 {
        if state.is_absorbing() {
            return 0;
        }
        self.counts[state.outs() as usize][state.bases() as usize]
    }

    pub fn missing_states(&self) -> Vec<GameState> {
        GameState::live_states().filter(|s| self.get(*s).is_none()).collect()
    }

    /// States where adding a runner lowers expected runs at fixed outs.
    /// Empirical matrices need not be monotone; this is a diagnostic only.
    pub fn monotonicity_warnings(&self) -> Vec<(GameState, GameState)> {
        let mut out = Vec::new();
        for s in GameState::live_states() {
            for bit in 0..3 {
                let more = s.bases() | (1 << bit);
                if more == s.bases() {
                    continue;
                }
                let t = GameState::new(s.outs(), more).expect("live state");
                if let (Some(a), Some(b)) = (self.get(s), self.get(t)) {
                    if b < a {
                        out.push((s, t));
                    }
                }
            }
        }
        out
    }
}

impl<T: RunScalar + Display> RunExpectancyMatrix<T> {
    /// CSV with columns `outs,bases_mask,rho,n`; unobserved states leave
    /// `rho` empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "outs,bases_mask,rho,n")?;
        for s in GameState::live_states() {
            let rho = self.get(s).map(|v| v.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{}", s.outs(), s.bases(), rho, self.count(s))?;
        }
        Ok(())
    }
}

/// Estimates the matrix and requires every live state to be observed.
pub fn estimate_matrix<T: RunScalar>(data: &SeasonDataset) -> Result<RunExpectancyMatrix<T>> {
    estimate_matrix_with(data, Coverage::Full).map(|e| e.matrix)
}

/// Each state's value is the mean, over plate appearances starting in it, of
/// the runs scored from that plate appearance (inclusive) to the end of its
/// half-inning. Walk-off half-innings count as observed.
pub fn estimate_matrix_with<T: RunScalar>(
    data: &SeasonDataset,
    coverage: Coverage,
) -> Result<Estimate<T>> {
    let mut sums = [[0u64; 8]; 3];
    let mut counts = [[0u32; 8]; 3];
    let mut excluded = Vec::new();
    let pas = &data.plate_appearances;
    for hi in data.half_innings() {
        if !(hi.complete || hi.walk_off) {
            let first = &pas[hi.range.start];
            let what = format!("{} inning {} {}", first.game_id, first.inning, first.half.code());
            warn!("half-inning {what} ends short of three outs; excluded from run expectancy");
            excluded.push(what);
            continue;
        }
        let mut remaining: u64 = pas[hi.range.clone()].iter().map(|p| u64::from(p.runs_scored)).sum();
        for pa in &pas[hi.range.clone()] {
            let s = pa.start_state;
            sums[s.outs() as usize][s.bases() as usize] += remaining;
            counts[s.outs() as usize][s.bases() as usize] += 1;
            remaining -= u64::from(pa.runs_scored);
        }
    }
    let mut rho = [[None; 8]; 3];
    for o in 0..3 {
        for b in 0..8 {
            if counts[o][b] > 0 {
                let num = T::from_u64(sums[o][b]).expect("run total representable");
                let den = T::from_u32(counts[o][b]).expect("count representable");
                rho[o][b] = Some(num / den);
            }
        }
    }
    let matrix = RunExpectancyMatrix { rho, counts };
    if coverage == Coverage::Full {
        let missing = matrix.missing_states();
        if !missing.is_empty() {
            return Err(Error::EmptyStates(missing));
        }
    }
    Ok(Estimate { matrix, excluded })
}

pub fn delta<T: RunScalar>(pa: &PlateAppearance, matrix: &RunExpectancyMatrix<T>) -> Result<RunValue<T>> {
    let start = matrix
        .get(pa.start_state)
        .ok_or(Error::StateNotInMatrix(pa.start_state))?;
    let end = matrix
        .get(pa.end_state)
        .ok_or(Error::StateNotInMatrix(pa.end_state))?;
    let delta_rho = end - start;
    let runs = T::from_u32(pa.runs_scored).expect("runs representable");
    Ok(RunValue {
        delta_rho,
        runs,
        delta: delta_rho + runs,
    })
}
