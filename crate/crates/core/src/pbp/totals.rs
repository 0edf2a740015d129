use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::SeasonDataset;

/// Batting counting statistics for one team.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TeamTotals {
    pub team: String,
    pub g: u32,
    pub pa: u32,
    pub ab: u32,
    pub r: u32,
    pub h: u32,
    pub hr: u32,
    pub bb: u32,
    pub k: u32,
}

/// Team batting totals, sorted by team id.
pub fn aggregate_team_totals(data: &SeasonDataset) -> Vec<TeamTotals> {
    let mut teams: BTreeMap<String, (TeamTotals, BTreeSet<&str>)> = BTreeMap::new();
    for pa in &data.plate_appearances {
        let team = pa.batting_team();
        let (t, games) = teams.entry(team.clone()).or_insert_with(|| {
            (
                TeamTotals {
                    team,
                    ..Default::default()
                },
                BTreeSet::new(),
            )
        });
        games.insert(&pa.game_id);
        let e = pa.event_type;
        t.pa += 1;
        t.ab += u32::from(e.is_at_bat());
        t.r += pa.runs_scored;
        t.h += u32::from(e.is_hit());
        t.hr += u32::from(e == super::EventType::HomeRun);
        t.bb += u32::from(e.is_walk());
        t.k += u32::from(e.is_strikeout());
    }
    teams
        .into_values()
        .map(|(mut t, games)| {
            t.g = games.len() as u32;
            t
        })
        .collect()
}
