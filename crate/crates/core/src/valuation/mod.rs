//! Per-player runs above average, replacement level and wins above
//! replacement.
//!
//! Every plate appearance contributes a bundle of entries: the hitter's
//! batting value, one baserunning credit per participant, one fielding value
//! per position on balls in play and the pitcher's value. Summing bundles
//! gives each player's four component totals together with the number of
//! events behind each, which is what the replacement shadow is priced on.

mod pythag;

use std::collections::BTreeMap;
use std::io::Write;

use log::warn;
use serde::Serialize;

use crate::defense::DefenseLedgerRow;
use crate::error::{Error, Result};
use crate::offense::OffenseLedgerRow;

pub use pythag::{pythag_wpct, runs_per_win, PythagWpct};

pub const DEFAULT_RUNS_PER_WIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Hit,
    Baserunning,
    Fielding,
    Pitching,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::Hit,
        Component::Baserunning,
        Component::Fielding,
        Component::Pitching,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub player: u32,
    pub component: Component,
    pub value: f64,
}

/// Run values of every plate appearance, keyed by player index.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundles {
    /// Player ids, sorted.
    pub players: Vec<String>,
    pub names: Vec<String>,
    pub bundles: Vec<Vec<Entry>>,
}

impl Bundles {
    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn player_index(&self, id: &str) -> Option<usize> {
        self.players.binary_search_by(|p| p.as_str().cmp(id)).ok()
    }
}

/// Collects per-plate-appearance bundles from aligned offense and defense
/// ledgers. Every player in the roster gets an index.
pub fn build_bundles(
    offense: &[OffenseLedgerRow],
    defense: &[DefenseLedgerRow],
    roster: &BTreeMap<String, String>,
) -> Result<Bundles> {
    if offense.len() != defense.len() {
        return Err(Error::Design(format!(
            "offense ledger has {} rows, defense ledger {}",
            offense.len(),
            defense.len()
        )));
    }
    let players: Vec<String> = roster.keys().cloned().collect();
    let names: Vec<String> = roster.values().cloned().collect();
    let index = |id: &str| -> Result<u32> {
        players
            .binary_search_by(|p| p.as_str().cmp(id))
            .map(|i| i as u32)
            .map_err(|_| Error::UnknownPlayer(id.to_string()))
    };
    let mut bundles = Vec::with_capacity(offense.len());
    for (o, d) in offense.iter().zip(defense) {
        if o.game_id != d.game_id || o.pa_index != d.pa_index {
            return Err(Error::Design(format!(
                "ledgers out of step at {} pa {} / {} pa {}",
                o.game_id, o.pa_index, d.game_id, d.pa_index
            )));
        }
        let mut b = Vec::with_capacity(2 + o.credits.len() + d.fielding.len());
        b.push(Entry {
            player: index(&o.batter_id)?,
            component: Component::Hit,
            value: o.raa_hit,
        });
        for c in &o.credits {
            b.push(Entry {
                player: index(&c.runner_id)?,
                component: Component::Baserunning,
                value: c.credit,
            });
        }
        for f in &d.fielding {
            b.push(Entry {
                player: index(&f.fielder_id)?,
                component: Component::Fielding,
                value: f.raa_field,
            });
        }
        b.push(Entry {
            player: index(&d.pitcher_id)?,
            component: Component::Pitching,
            value: d.raa_pitch,
        });
        bundles.push(b);
    }
    Ok(Bundles {
        players,
        names,
        bundles,
    })
}

/// Component run totals and event counts for one player.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Totals {
    pub raa: [f64; 4],
    pub events: [u64; 4],
}

impl Totals {
    pub fn add(&mut self, e: &Entry) {
        let c = e.component.index();
        self.raa[c] += e.value;
        self.events[c] += 1;
    }

    pub fn raa_total(&self) -> f64 {
        self.raa.iter().sum()
    }

    pub fn plate_appearances(&self) -> u64 {
        self.events[Component::Hit.index()]
    }

    pub fn batters_faced(&self) -> u64 {
        self.events[Component::Pitching.index()]
    }

    pub fn role(&self) -> Role {
        if self.batters_faced() > self.plate_appearances() {
            Role::Pitcher
        } else {
            Role::PositionPlayer
        }
    }
}

/// Sums every bundle once.
pub fn tabulate_raa(bundles: &Bundles) -> Vec<Totals> {
    let mut totals = vec![Totals::default(); bundles.players.len()];
    for b in &bundles.bundles {
        for e in b {
            totals[e.player as usize].add(e);
        }
    }
    totals
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    PositionPlayer,
    Pitcher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    MajorLeague,
    Replacement,
}

impl Tier {
    pub fn code(self) -> &'static str {
        match self {
            Tier::MajorLeague => "major_league",
            Tier::Replacement => "replacement",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cutoffs {
    pub position_players: usize,
    pub pitchers: usize,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Self {
            position_players: 30 * 13,
            pitchers: 30 * 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplacementPool {
    pub cutoffs: Cutoffs,
    /// Per player index.
    pub tiers: Vec<Tier>,
    pub roles: Vec<Role>,
    /// Replacement runs per event, by component.
    pub rates: [f64; 4],
    /// Components with no replacement-tier events; their rate is zero.
    pub empty_components: Vec<Component>,
    /// Roles with no more players than the cutoff, so no replacement tier.
    pub unfilled_roles: Vec<Role>,
}

impl ReplacementPool {
    pub fn replacement_count(&self) -> usize {
        self.tiers.iter().filter(|&&t| t == Tier::Replacement).count()
    }

    pub fn shadow(&self, totals: &Totals) -> f64 {
        (0..4).map(|c| self.rates[c] * totals.events[c] as f64).sum()
    }
}

/// Top players by playing time within each role are major leaguers (ties
/// broken by id); the rest form the replacement tier, whose pooled
/// per-event rates price the shadows.
pub fn build_replacement_pool(totals: &[Totals], player_ids: &[String], cutoffs: Cutoffs) -> ReplacementPool {
    assert_eq!(totals.len(), player_ids.len(), "one id per player");
    let roles: Vec<Role> = totals.iter().map(Totals::role).collect();
    let mut tiers = vec![Tier::MajorLeague; totals.len()];
    let mut unfilled_roles = Vec::new();
    for (role, cutoff) in [
        (Role::PositionPlayer, cutoffs.position_players),
        (Role::Pitcher, cutoffs.pitchers),
    ] {
        let time = |i: usize| match role {
            Role::PositionPlayer => totals[i].plate_appearances(),
            Role::Pitcher => totals[i].batters_faced(),
        };
        let mut members: Vec<usize> = (0..totals.len()).filter(|&i| roles[i] == role).collect();
        if members.len() <= cutoff {
            warn!("{} {role:?}s at or below cutoff {cutoff}; no replacement tier", members.len());
            unfilled_roles.push(role);
            continue;
        }
        members.sort_by(|&a, &b| time(b).cmp(&time(a)).then_with(|| player_ids[a].cmp(&player_ids[b])));
        for &i in &members[cutoff..] {
            tiers[i] = Tier::Replacement;
        }
    }

    let mut runs = [0.0; 4];
    let mut events = [0u64; 4];
    for (t, tier) in totals.iter().zip(&tiers) {
        if *tier == Tier::Replacement {
            for c in 0..4 {
                runs[c] += t.raa[c];
                events[c] += t.events[c];
            }
        }
    }
    let mut rates = [0.0; 4];
    let mut empty_components = Vec::new();
    for c in Component::ALL {
        let i = c.index();
        if events[i] == 0 {
            warn!("no replacement-tier {c:?} events; shadow component set to zero");
            empty_components.push(c);
        } else {
            rates[i] = runs[i] / events[i] as f64;
        }
    }
    ReplacementPool {
        cutoffs,
        tiers,
        roles,
        rates,
        empty_components,
        unfilled_roles,
    }
}

/// `(shadow, war)` for one player.
pub fn shadow_and_war(totals: &Totals, pool: &ReplacementPool, runs_per_win: f64) -> (f64, f64) {
    let shadow = pool.shadow(totals);
    (shadow, (totals.raa_total() - shadow) / runs_per_win)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerValuation {
    pub player_id: String,
    pub name: String,
    #[serde(rename = "PA")]
    pub pa: u64,
    #[serde(rename = "BF")]
    pub bf: u64,
    pub raa_hit: f64,
    pub raa_br: f64,
    pub raa_field: f64,
    pub raa_pitch: f64,
    pub raa: f64,
    pub tier: Tier,
    pub raa_repl: f64,
    pub war: f64,
    #[serde(skip)]
    pub role: Role,
    #[serde(skip)]
    pub totals: Totals,
}

#[derive(Debug, Clone)]
pub struct Valuation {
    pub players: Vec<PlayerValuation>,
    pub pool: ReplacementPool,
    pub runs_per_win: f64,
}

pub const VALUATION_COLUMNS: [&str; 12] = [
    "player_id", "name", "PA", "BF", "raa_hit", "raa_br", "raa_field", "raa_pitch", "raa", "tier",
    "raa_repl", "war",
];

pub fn value_players(bundles: &Bundles, cutoffs: Cutoffs, runs_per_win: f64) -> Result<Valuation> {
    if !(runs_per_win > 0.0) {
        return Err(Error::NonPositive("runs per win"));
    }
    let totals = tabulate_raa(bundles);
    let pool = build_replacement_pool(&totals, &bundles.players, cutoffs);
    let players = totals
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let (shadow, war) = shadow_and_war(t, &pool, runs_per_win);
            PlayerValuation {
                player_id: bundles.players[i].clone(),
                name: bundles.names[i].clone(),
                pa: t.plate_appearances(),
                bf: t.batters_faced(),
                raa_hit: t.raa[0],
                raa_br: t.raa[1],
                raa_field: t.raa[2],
                raa_pitch: t.raa[3],
                raa: t.raa_total(),
                tier: pool.tiers[i],
                raa_repl: shadow,
                war,
                role: pool.roles[i],
                totals: *t,
            }
        })
        .collect();
    Ok(Valuation {
        players,
        pool,
        runs_per_win,
    })
}

impl Valuation {
    pub fn total_war(&self) -> f64 {
        self.players.iter().map(|p| p.war).sum()
    }

    pub fn total_raa(&self) -> f64 {
        self.players.iter().map(|p| p.raa).sum()
    }

    pub fn player(&self, id: &str) -> Option<&PlayerValuation> {
        self.players.iter().find(|p| p.player_id == id)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(VALUATION_COLUMNS)?;
        for p in &self.players {
            out.write_record([
                p.player_id.clone(),
                p.name.clone(),
                p.pa.to_string(),
                p.bf.to_string(),
                p.raa_hit.to_string(),
                p.raa_br.to_string(),
                p.raa_field.to_string(),
                p.raa_pitch.to_string(),
                p.raa.to_string(),
                p.tier.code().to_string(),
                p.raa_repl.to_string(),
                p.war.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
