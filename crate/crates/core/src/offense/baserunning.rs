use std::collections::BTreeMap;

use serde::Serialize;

use crate::pbp::{Base, Destination, EventType, PlateAppearance, SeasonDataset};

/// Where a participant in the play started: the batter's box or a base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StartBase {
    Batter,
    Base(Base),
}

impl StartBase {
    pub fn number(self) -> u8 {
        match self {
            StartBase::Batter => 0,
            StartBase::Base(b) => b.number(),
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            StartBase::Batter => "B",
            StartBase::Base(Base::First) => "1B",
            StartBase::Base(Base::Second) => "2B",
            StartBase::Base(Base::Third) => "3B",
        }
    }
}

/// Number of distinct advancement ranks (out, hold, +1 .. +4).
pub const RANKS: usize = 6;

/// Advancement ordering: out < hold < +1 < +2 < ... < scored.
pub fn advancement_rank(start: StartBase, dest: Destination) -> u8 {
    match dest.reached() {
        None => 0,
        Some(to) => to.saturating_sub(start.number()) + 1,
    }
}

/// Empirical cumulative advancement distribution per (event, start) cell.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AdvancementTable {
    cells: BTreeMap<(EventType, StartBase), [u64; RANKS]>,
    pooled: BTreeMap<EventType, [u64; RANKS]>,
}

impl AdvancementTable {
    pub fn observe(&mut self, event: EventType, start: StartBase, rank: u8) {
        let r = usize::from(rank).min(RANKS - 1);
        self.cells.entry((event, start)).or_default()[r] += 1;
        self.pooled.entry(event).or_default()[r] += 1;
    }

    pub fn counts(&self, event: EventType, start: StartBase) -> Option<&[u64; RANKS]> {
        self.cells.get(&(event, start))
    }

    /// `Pr(K <= rank | event, start)`. Unobserved cells fall back to the
    /// event's distribution pooled over start bases, then to zero.
    pub fn kappa(&self, event: EventType, start: StartBase, rank: u8) -> f64 {
        let counts = match self.cells.get(&(event, start)) {
            Some(c) => c,
            None => match self.pooled.get(&event) {
                Some(c) => c,
                None => return 0.0,
            },
        };
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let upto = usize::from(rank).min(RANKS - 1);
        let below: u64 = counts[..=upto].iter().sum();
        below as f64 / total as f64
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(EventType, StartBase), &[u64; RANKS])> {
        self.cells.iter()
    }
}

/// Participants in a play: the batter first, then runners by base.
pub fn participants(pa: &PlateAppearance) -> Vec<(&str, StartBase, Destination)> {
    let mut out = vec![(pa.batter_id.as_str(), StartBase::Batter, pa.batter_dest)];
    for (base, r) in pa.runners_on() {
        out.push((r.id.as_str(), StartBase::Base(base), r.dest));
    }
    out
}

pub fn advancement_probabilities(data: &SeasonDataset) -> AdvancementTable {
    let mut table = AdvancementTable::default();
    for pa in &data.plate_appearances {
        for (_, start, dest) in participants(pa) {
            table.observe(pa.event_type, start, advancement_rank(start, dest));
        }
    }
    table
}

/// Baserunning credit for one participant of one plate appearance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaserunnerCredit {
    pub runner_id: String,
    pub start: StartBase,
    pub dest: Destination,
    pub rank: u8,
    pub kappa: f64,
    pub credit: f64,
}

/// Splits `eta` over the batter and runners in proportion to their
/// advancement probabilities; equal shares when every probability is zero.
/// The last share absorbs rounding so the credits sum to `eta`.
pub fn apportion_baserunning(
    pa: &PlateAppearance,
    eta: f64,
    table: &AdvancementTable,
) -> Vec<BaserunnerCredit> {
    let parts = participants(pa);
    let kappas: Vec<(u8, f64)> = parts
        .iter()
        .map(|&(_, start, dest)| {
            let rank = advancement_rank(start, dest);
            (rank, table.kappa(pa.event_type, start, rank))
        })
        .collect();
    let total: f64 = kappas.iter().map(|k| k.1).sum();
    let n = parts.len();
    let mut assigned = 0.0;
    parts
        .into_iter()
        .zip(kappas)
        .enumerate()
        .map(|(j, ((id, start, dest), (rank, kappa)))| {
            let credit = if j + 1 == n {
                eta - assigned
            } else if total > 0.0 {
                kappa / total * eta
            } else {
                eta / n as f64
            };
            assigned += credit;
            BaserunnerCredit {
                runner_id: id.to_string(),
                start,
                dest,
                rank,
                kappa,
                credit,
            }
        })
        .collect()
}
