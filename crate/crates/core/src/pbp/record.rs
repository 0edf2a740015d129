use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{Base, BatterPosition, Destination, EventType, FieldPosition, GameState, Half, Hand};

/// A runner on base at the start of the plate appearance and where he ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runner {
    pub id: String,
    pub dest: Destination,
}

/// One plate appearance: the atomic event of the valuation model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateAppearance {
    pub game_id: String,
    pub pa_index: u32,
    pub inning: u32,
    pub half: Half,
    pub batter_id: String,
    pub pitcher_id: String,
    pub start_state: GameState,
    pub end_state: GameState,
    /// Runners indexed by starting base (first, second, third).
    pub runners: [Option<Runner>; 3],
    pub batter_dest: Destination,
    pub runs_scored: u32,
    pub event_type: EventType,
    pub ballpark_id: String,
    pub batter_hand: Hand,
    pub pitcher_hand: Hand,
    pub batter_position: BatterPosition,
    /// Defensive alignment indexed by [`FieldPosition::index`].
    pub fielders: [String; 9],
    /// Batted ball location in feet, home plate at the origin and `y`
    /// pointing to center field.
    pub bip_location: Option<(f64, f64)>,
    /// Position credited with converting the ball in play into an out.
    pub credited_fielder: Option<FieldPosition>,
    pub away_team: Option<String>,
    pub home_team: Option<String>,
}

impl PlateAppearance {
    pub fn runner(&self, base: Base) -> Option<&Runner> {
        self.runners[base as usize].as_ref()
    }

    pub fn runners_on(&self) -> impl Iterator<Item = (Base, &Runner)> {
        Base::ALL
            .into_iter()
            .filter_map(move |b| self.runner(b).map(|r| (b, r)))
    }

    pub fn fielder(&self, pos: FieldPosition) -> &str {
        &self.fielders[pos.index()]
    }

    pub fn outs_on_play(&self) -> u32 {
        let runner_outs = self
            .runners_on()
            .filter(|(_, r)| r.dest == Destination::Out)
            .count() as u32;
        runner_outs + u32::from(self.batter_dest == Destination::Out)
    }

    pub fn scored_on_play(&self) -> u32 {
        let runner_runs = self
            .runners_on()
            .filter(|(_, r)| r.dest == Destination::Scored)
            .count() as u32;
        runner_runs + u32::from(self.batter_dest == Destination::Scored)
    }

    /// Team at bat. Falls back to a per-game side key when the record does
    /// not name the teams.
    pub fn batting_team(&self) -> String {
        let named = match self.half {
            Half::Top => self.away_team.as_ref(),
            Half::Bottom => self.home_team.as_ref(),
        };
        named
            .cloned()
            .unwrap_or_else(|| format!("{}:{}", self.game_id, self.half.code()))
    }

    pub fn half_inning_key(&self) -> (&str, u32, Half) {
        (&self.game_id, self.inning, self.half)
    }

    /// Record-level invariants. Returns every violated rule.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.inning == 0 {
            out.push("inning must be positive".to_string());
        }
        if self.start_state.is_absorbing() {
            out.push("plate appearance cannot start with three outs".to_string());
        }
        for base in Base::ALL {
            let occupied = self.start_state.occupied(base);
            let present = self.runner(base).is_some();
            if occupied != present {
                out.push(format!(
                    "runner on {} {} but start_bases says {}",
                    Destination::Base(base).code(),
                    if present { "listed" } else { "missing" },
                    if occupied { "occupied" } else { "empty" }
                ));
            }
            if let Some(r) = self.runner(base) {
                if let Some(reached) = r.dest.reached() {
                    if reached < base.number() {
                        out.push(format!("runner from {} moved backwards", base.number()));
                    }
                }
            }
        }
        if self.scored_on_play() != self.runs_scored {
            out.push(format!(
                "runs_scored {} but {} scoring destinations",
                self.runs_scored,
                self.scored_on_play()
            ));
        }
        let start = u32::from(self.start_state.outs());
        let end = u32::from(self.end_state.outs());
        let outs = self.outs_on_play();
        let consistent = if end == 3 {
            start + outs >= 3
        } else {
            end >= start && end - start == outs
        };
        if !consistent {
            out.push(format!("{outs} outs recorded but outs went {start} -> {end}"));
        }
        if !self.end_state.is_absorbing() {
            let mut mask = 0u8;
            let dests = self
                .runners_on()
                .map(|(_, r)| r.dest)
                .chain(std::iter::once(self.batter_dest));
            for d in dests {
                if let Destination::Base(b) = d {
                    if mask & b.mask() != 0 {
                        out.push(format!("two runners end on {}", d.code()));
                    }
                    mask |= b.mask();
                }
            }
            if mask != self.end_state.bases() {
                out.push(format!(
                    "end_bases {:03b} disagrees with destinations {:03b}",
                    self.end_state.bases(),
                    mask
                ));
            }
        }
        match (self.event_type.ball_in_play(), self.bip_location) {
            (true, None) => out.push(format!("{} requires a batted ball location", self.event_type)),
            (false, Some(_)) => out.push(format!("{} cannot carry a batted ball location", self.event_type)),
            (_, Some((x, y))) if !(x.is_finite() && y.is_finite()) => {
                out.push("batted ball location must be finite".to_string())
            }
            _ => {}
        }
        if self.credited_fielder.is_some() && !self.event_type.ball_in_play() {
            out.push("credited fielder on a play without a ball in play".to_string());
        }
        out
    }
}

/// A parsed or generated season of plate appearances.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SeasonDataset {
    pub plate_appearances: Vec<PlateAppearance>,
    /// Player id to display name.
    pub roster: BTreeMap<String, String>,
    pub parks: BTreeSet<String>,
}

impl SeasonDataset {
    /// Builds the roster and park set from the records. Display names default
    /// to the player id.
    pub fn from_records(plate_appearances: Vec<PlateAppearance>) -> Self {
        let mut roster = BTreeMap::new();
        let mut parks = BTreeSet::new();
        for pa in &plate_appearances {
            parks.insert(pa.ballpark_id.clone());
            let ids = [&pa.batter_id, &pa.pitcher_id]
                .into_iter()
                .chain(pa.runners_on().map(|(_, r)| &r.id))
                .chain(pa.fielders.iter());
            for id in ids {
                roster.entry(id.clone()).or_insert_with(|| id.clone());
            }
        }
        Self {
            plate_appearances,
            roster,
            parks,
        }
    }

    pub fn len(&self) -> usize {
        self.plate_appearances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plate_appearances.is_empty()
    }

    /// Maximal runs of consecutive records sharing (game, inning, half).
    pub fn half_innings(&self) -> Vec<HalfInning> {
        let pas = &self.plate_appearances;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=pas.len() {
            if i == pas.len() || pas[i].half_inning_key() != pas[start].half_inning_key() {
                if i > start {
                    let last = &pas[i - 1];
                    out.push(HalfInning {
                        range: start..i,
                        complete: last.end_state.is_absorbing(),
                        walk_off: !last.end_state.is_absorbing()
                            && last.half == Half::Bottom
                            && last.inning >= 9,
                    });
                }
                start = i;
            }
        }
        out
    }
}

/// Index range of one half-inning within [`SeasonDataset::plate_appearances`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfInning {
    pub range: Range<usize>,
    /// Ended with the third out.
    pub complete: bool,
    /// Bottom of the ninth or later, cut short because the home team won.
    pub walk_off: bool,
}
