mod common;

use std::collections::BTreeMap;

use common::{pa, PaExt};
use openwar::defense::{build_defense_ledger, DefenseOptions};
use openwar::numerics::SeededRng;
use openwar::offense::build_offense_ledger;
use openwar::pbp::{
    generate_synthetic_season, Base, Destination, EventType, FieldPosition, SeasonDataset,
    SynthConfig,
};
use openwar::pipeline::{evaluate_season, PipelineConfig};
use openwar::valuation::{
    build_bundles, pythag_wpct, runs_per_win, tabulate_raa, value_players, Component, Cutoffs,
    Tier,
};
use openwar::Error;

fn season(games: usize, seed: u64) -> SeasonDataset {
    generate_synthetic_season(&SynthConfig::new(games, seed)).unwrap()
}

fn config(pos: usize, pitch: usize) -> PipelineConfig {
    PipelineConfig {
        cutoffs: Cutoffs {
            position_players: pos,
            pitchers: pitch,
        },
        ..PipelineConfig::default()
    }
}

#[test]
fn league_raa_sums_to_zero() {
    let data = season(50, 17);
    let s = evaluate_season(&data, &config(40, 40)).unwrap();
    let scale: f64 = s.deltas().iter().map(|d| d.abs()).sum();
    assert!(s.valuation.total_raa().abs() < 1e-8 * scale);
    for p in &s.valuation.players {
        let parts = p.raa_hit + p.raa_br + p.raa_field + p.raa_pitch;
        assert!((parts - p.raa).abs() < 1e-12);
        let war = (p.raa - p.raa_repl) / 10.0;
        assert!((war - p.war).abs() < 1e-15);
    }
}

/// Ten plate appearances, two pitchers who never bat or field.
fn ten_pa_fixture() -> SeasonDataset {
    use EventType::*;
    let first = Destination::Base(Base::First);
    let recs = vec![
        pa("g", 1, (0, 0), (1, 0), Strikeout).pitcher("pa").batter("x1", Destination::Out),
        pa("g", 2, (1, 0), (1, 1), Single).pitcher("pa").batter("x2", first).at(-60.0, 180.0),
        pa("g", 3, (1, 1), (2, 2), Groundout)
            .pitcher("pa")
            .batter("x3", Destination::Out)
            .runner(Base::First, "x2", Destination::Base(Base::Second))
            .at(20.0, 110.0)
            .credited(FieldPosition::SS),
        pa("g", 4, (2, 2), (3, 0), Flyout).pitcher("pa").batter("x4", Destination::Out).at(0.0, 300.0).credited(FieldPosition::CF),
        pa("g", 5, (0, 0), (0, 0), HomeRun).pitcher("pb").batter("y1", Destination::Scored).runs(1),
        pa("g", 6, (0, 0), (0, 1), Walk).pitcher("pb").batter("y2", first),
        pa("g", 7, (0, 1), (1, 1), Lineout)
            .pitcher("pb")
            .batter("y3", Destination::Out)
            .runner(Base::First, "y2", first)
            .at(-90.0, 250.0)
            .credited(FieldPosition::LF),
        pa("g", 8, (1, 1), (1, 3), Single)
            .pitcher("pb")
            .batter("y4", first)
            .runner(Base::First, "y2", Destination::Base(Base::Second))
            .at(70.0, 170.0),
        pa("g", 9, (1, 3), (2, 3), PopOut)
            .pitcher("pb")
            .batter("y5", Destination::Out)
            .runner(Base::First, "y4", first)
            .runner(Base::Second, "y2", Destination::Base(Base::Second))
            .at(5.0, 60.0)
            .credited(FieldPosition::FirstBase),
        pa("g", 10, (2, 3), (3, 0), Groundout)
            .pitcher("pb")
            .batter("y6", Destination::Out)
            .runner(Base::First, "y4", first)
            .runner(Base::Second, "y2", Destination::Base(Base::Second))
            .at(-30.0, 120.0)
            .credited(FieldPosition::SecondBase),
    ];
    SeasonDataset::from_records(recs)
}

#[test]
fn pitcher_only_player_hand_sum() {
    let data = ten_pa_fixture();
    let d = [-0.25, 0.27, -0.35, -0.21, 1.0, 0.38, -0.27, 0.37, -0.31, -0.45];
    let offense = build_offense_ledger(&data, &d).unwrap();
    let defense = build_defense_ledger(&data, &d, DefenseOptions::default()).unwrap();
    let bundles = build_bundles(&offense.rows, &defense.rows, &data.roster).unwrap();
    let totals = tabulate_raa(&bundles);
    for pid in ["pa", "pb"] {
        let t = totals[bundles.player_index(pid).unwrap()];
        let manual: f64 = defense
            .rows
            .iter()
            .filter(|r| r.pitcher_id == pid)
            .map(|r| r.raa_pitch)
            .sum();
        assert_eq!(t.raa[Component::Pitching.index()], manual);
        assert_eq!(t.raa[Component::Hit.index()], 0.0);
        assert_eq!(t.raa[Component::Baserunning.index()], 0.0);
        assert_eq!(t.raa[Component::Fielding.index()], 0.0);
        assert_eq!(t.batters_faced(), if pid == "pa" { 4 } else { 6 });
    }
    // a hitter who also ran the bases
    let y2 = totals[bundles.player_index("y2").unwrap()];
    let br: f64 = offense
        .rows
        .iter()
        .flat_map(|r| &r.credits)
        .filter(|c| c.runner_id == "y2")
        .map(|c| c.credit)
        .sum();
    assert_eq!(y2.raa[Component::Baserunning.index()], br);
    assert_eq!(y2.events[Component::Baserunning.index()], 5);
}

#[test]
fn empty_ledgers_value_nobody() {
    let b = build_bundles(&[], &[], &BTreeMap::new()).unwrap();
    let v = value_players(&b, Cutoffs::default(), 10.0).unwrap();
    assert!(v.players.is_empty());
}

#[test]
fn unknown_player_is_rejected() {
    let data = ten_pa_fixture();
    let d = [0.0, 0.1, -0.1, -0.2, 1.0, 0.3, -0.2, 0.3, -0.3, -0.4];
    let offense = build_offense_ledger(&data, &d).unwrap();
    let defense = build_defense_ledger(&data, &d, DefenseOptions::default()).unwrap();
    let mut roster = data.roster.clone();
    roster.remove("pb");
    assert!(matches!(
        build_bundles(&offense.rows, &defense.rows, &roster),
        Err(Error::UnknownPlayer(id)) if id == "pb"
    ));
}

#[test]
fn uniform_rates_give_zero_war() {
    let data = season(30, 2);
    let s = evaluate_season(&data, &config(30, 30)).unwrap();
    let mut bundles = s.bundles.clone();
    let rate = [0.013, -0.021, 0.0037, -0.009];
    for b in &mut bundles.bundles {
        for e in b {
            e.value = rate[e.component.index()];
        }
    }
    let v = value_players(&bundles, Cutoffs { position_players: 30, pitchers: 30 }, 10.0).unwrap();
    assert!(v.pool.replacement_count() > 0);
    for p in &v.players {
        assert!(p.war.abs() < 1e-9, "{} {}", p.player_id, p.war);
    }
}

#[test]
fn replacement_tier_at_pool_average_has_zero_war() {
    let data = season(30, 2);
    let s = evaluate_season(&data, &config(30, 30)).unwrap();
    let mut bundles = s.bundles.clone();
    let v = &s.valuation;
    let target = v.players.iter().position(|p| p.tier == Tier::Replacement).unwrap();
    for b in &mut bundles.bundles {
        for e in b.iter_mut().filter(|e| e.player as usize == target) {
            e.value = v.pool.rates[e.component.index()];
        }
    }
    let t = tabulate_raa(&bundles)[target];
    let (_, war) = openwar::valuation::shadow_and_war(&t, &v.pool, 10.0);
    assert!(war.abs() < 1e-12);
}

#[test]
fn more_replacement_players_lower_total_war() {
    // regulars plus rotation and late relievers, then half of that
    let data = season(50, 17);
    let s = evaluate_season(&data, &config(48, 42)).unwrap();
    let designed = s.valuation.total_war();
    let halved = value_players(&s.bundles, Cutoffs { position_players: 24, pitchers: 21 }, 10.0)
        .unwrap()
        .total_war();
    assert!(halved <= designed, "{halved} > {designed}");
    let everyone = value_players(&s.bundles, Cutoffs { position_players: 0, pitchers: 0 }, 10.0).unwrap();
    assert!(everyone.total_war().abs() < 1e-9);
}

#[test]
fn doubling_runs_per_win_halves_war() {
    let data = season(30, 4);
    let s = evaluate_season(&data, &config(30, 30)).unwrap();
    let v20 = value_players(&s.bundles, s.valuation.pool.cutoffs, 20.0).unwrap();
    for (a, b) in s.valuation.players.iter().zip(&v20.players) {
        assert_eq!(a.war / 2.0, b.war);
    }
}

fn relabel(data: &SeasonDataset, f: impl Fn(&str) -> String) -> SeasonDataset {
    let recs = data
        .plate_appearances
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.batter_id = f(&p.batter_id);
            p.pitcher_id = f(&p.pitcher_id);
            for r in p.runners.iter_mut().flatten() {
                r.id = f(&r.id);
            }
            for x in p.fielders.iter_mut() {
                *x = f(x);
            }
            p
        })
        .collect();
    SeasonDataset::from_records(recs)
}

#[test]
fn total_war_ignores_player_labels() {
    let data = season(40, 9);
    let base = evaluate_season(&data, &config(40, 40)).unwrap();
    // a fixed random relabelling of every id
    let ids: Vec<String> = data.roster.keys().cloned().collect();
    let mut perm: Vec<usize> = (0..ids.len()).collect();
    let mut rng = SeededRng::new(99);
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.below(i + 1));
    }
    let map: BTreeMap<String, String> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), format!("q{:04}", perm[i])))
        .collect();
    let renamed = relabel(&data, |id| map[id].clone());
    let other = evaluate_season(&renamed, &config(40, 40)).unwrap();
    assert!((base.valuation.total_war() - other.valuation.total_war()).abs() < 1e-9);
    for p in &base.valuation.players {
        let q = other.valuation.player(&map[&p.player_id]).unwrap();
        assert!((p.war - q.war).abs() < 1e-9);
    }
}

#[test]
fn valuation_csv_columns() {
    let data = season(20, 1);
    let s = evaluate_season(&data, &config(20, 20)).unwrap();
    let mut buf = Vec::new();
    s.valuation.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("player_id,name,PA,BF,raa_hit,raa_br,raa_field,raa_pitch,raa,tier,raa_repl,war\n"));
    assert_eq!(text.lines().count(), 1 + s.valuation.players.len());
}

#[test]
fn runs_per_win_values() {
    assert_eq!(runs_per_win(2.0, 810.0).unwrap(), 10.0);
    let direct: f64 = 2.0 * 714.0 / (81.0 * 1.83);
    assert!((runs_per_win(1.83, 714.0).unwrap() - direct).abs() < 1e-9);
    assert!((direct - 9.633).abs() < 1e-3);
    assert!(matches!(runs_per_win(-2.0, 810.0), Err(Error::NonPositive(_))));
}

#[test]
fn wpct_gradient_matches_finite_differences() {
    let mut rng = SeededRng::new(2024);
    for _ in 0..10 {
        let rs = rng.uniform_in(550.0, 900.0);
        let ra = rng.uniform_in(550.0, 900.0);
        let p = rng.uniform_in(1.5, 2.2);
        let g = pythag_wpct(rs, ra, p).unwrap().gradient;
        let h = 1e-5 * rs;
        let f = |a: f64, b: f64| pythag_wpct(a, b, p).unwrap().wpct;
        let d_rs = (f(rs + h, ra) - f(rs - h, ra)) / (2.0 * h);
        let d_ra = (f(rs, ra + h) - f(rs, ra - h)) / (2.0 * h);
        assert!(((g[0] - d_rs) / d_rs).abs() < 1e-6);
        assert!(((g[1] - d_ra) / d_ra).abs() < 1e-6);
    }
}

#[test]
fn wpct_at_equal_runs() {
    let r: f64 = 761.0;
    let w = pythag_wpct(r, r, 1.86).unwrap();
    assert_eq!(w.wpct, 0.5);
    let h = 1e-5 * r;
    let fd = (pythag_wpct(r + h, r, 1.86).unwrap().wpct - pythag_wpct(r - h, r, 1.86).unwrap().wpct) / (2.0 * h);
    assert!(((w.gradient[0] - fd) / fd).abs() < 1e-6);
    assert!((w.gradient[0] - 1.86 / (4.0 * r)).abs() < 1e-15);
}
