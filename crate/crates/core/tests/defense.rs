mod common;

use common::{pa, PaExt};
use openwar::defense::{
    apportion_fielding, build_defense_ledger, fit_fielding_models, fit_fielding_park_adjustment,
    fit_out_surface, fit_pitching_adjustment, shares_from, split_responsibility, split_with,
    write_surface_grid, DefenseOptions,
};
use openwar::numerics::Bandwidth;
use openwar::pbp::{
    generate_synthetic_season, Base, Destination, EventType, FieldPosition, Hand, PlateAppearance,
    SeasonDataset, Strictness, SynthConfig,
};
use openwar::run_expectancy::{delta, estimate_matrix};
use openwar::Error;

fn synthetic(games: usize, seed: u64) -> (SeasonDataset, Vec<f64>) {
    let data = generate_synthetic_season(&SynthConfig::new(games, seed)).unwrap();
    let m = estimate_matrix::<f64>(&data).unwrap();
    let d = data
        .plate_appearances
        .iter()
        .map(|p| delta(p, &m).unwrap().delta)
        .collect();
    (data, d)
}

/// Balls on a grid; center field converts everything deeper than 300 ft.
fn deep_center_field() -> SeasonDataset {
    let mut recs = Vec::new();
    let mut i = 0;
    for xi in -4..=4 {
        for yi in 1..=16 {
            let (x, y) = (10.0 * f64::from(xi), 25.0 * f64::from(yi));
            let p = if y > 300.0 {
                pa("g", i, (0, 0), (1, 0), EventType::Flyout).at(x, y).credited(FieldPosition::CF)
            } else {
                pa("g", i, (0, 0), (0, 1), EventType::Single)
                    .batter("b1", Destination::Base(Base::First))
                    .at(x, y)
            };
            recs.push(p);
            i += 1;
        }
    }
    SeasonDataset::from_records(recs)
}

#[test]
fn strikeout_goes_to_pitcher() {
    let (data, _) = synthetic(10, 1);
    let surface = fit_out_surface(&data, None).unwrap();
    let k = pa("g", 1, (0, 0), (1, 0), EventType::Strikeout);
    let s = split_responsibility(&k, -0.3, &surface, Strictness::Strict).unwrap();
    assert_eq!((s.p_hat, s.delta_p, s.delta_f), (0.0, 0.3, 0.0));
}

#[test]
fn split_formula() {
    let s = split_with(0.4, 0.5);
    assert!((s.delta_p + 0.2).abs() < 1e-15 && (s.delta_f + 0.2).abs() < 1e-15);
    let s = split_with(0.8, 1.0);
    assert_eq!((s.delta_f, s.delta_p), (-0.8, 0.0));
}

#[test]
fn missing_coordinates() {
    let (data, _) = synthetic(10, 1);
    let surface = fit_out_surface(&data, None).unwrap();
    let mut g = pa("g", 1, (0, 0), (1, 0), EventType::Groundout);
    g.bip_location = None;
    assert!(matches!(
        split_responsibility(&g, -0.2, &surface, Strictness::Strict),
        Err(Error::Record { .. })
    ));
    let s = split_responsibility(&g, -0.2, &surface, Strictness::Lenient).unwrap();
    assert_eq!(s.p_hat, surface.global_rate());
}

#[test]
fn center_field_model_prefers_deep_balls() {
    let data = deep_center_field();
    let models = fit_fielding_models(&data).unwrap();
    let cf = &models.models[FieldPosition::CF.index()];
    assert!(!cf.degenerate());
    assert!(cf.predict(0.0, 350.0) > cf.predict(0.0, 100.0));
    for pos in FieldPosition::ALL.into_iter().filter(|&p| p != FieldPosition::CF) {
        let m = &models.models[pos.index()];
        assert!(m.degenerate());
        assert_eq!(m.constant, Some(0.0));
        assert_eq!(m.predict(0.0, 350.0), 0.0);
    }
    assert_eq!(fit_fielding_models(&data).unwrap(), models);
}

#[test]
fn uncredited_outs_count_as_unconverted() {
    let mut recs = deep_center_field().plate_appearances;
    recs.push(pa("h", 1, (0, 0), (1, 0), EventType::Groundout).at(5.0, 90.0));
    let models = fit_fielding_models(&SeasonDataset::from_records(recs)).unwrap();
    assert_eq!(models.uncredited_outs, 1);
}

#[test]
fn shares_are_normalized() {
    let mut p = [0.01; 9];
    p[FieldPosition::CF.index()] = 0.9;
    let r = shares_from(p, -0.5);
    assert!(r.shares[FieldPosition::CF.index()] > 0.9);
    assert!((r.shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((r.values.iter().sum::<f64>() + 0.5).abs() < 1e-12);

    let zero = shares_from(p, 0.0);
    assert!(zero.values.iter().all(|&v| v == 0.0));

    let flat = shares_from([1e-14; 9], 0.9);
    assert!(flat.equal_split);
    assert!(flat.shares.iter().all(|&s| s == 1.0 / 9.0));
}

#[test]
fn apportion_uses_models_at_location() {
    let data = deep_center_field();
    let models = fit_fielding_models(&data).unwrap();
    let r = apportion_fielding(Some((0.0, 380.0)), -0.3, &models);
    assert!((r.shares[FieldPosition::CF.index()] - 1.0).abs() < 1e-12);
    // nothing converts shallow balls here except a sliver of the CF model
    let r = apportion_fielding(Some((0.0, 30.0)), -0.3, &models);
    assert!((r.shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn fielding_park_adjustment() {
    let vals = [0.02, -0.01, 0.03, 0.0];
    let fit = fit_fielding_park_adjustment(&["a"; 4], &vals).unwrap();
    assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-15);

    let mut parks = Vec::new();
    let mut values = Vec::new();
    for (i, v) in [0.02, -0.01, 0.03, 0.0, -0.04, 0.01].into_iter().enumerate() {
        parks.push(if i % 2 == 0 { "a" } else { "b" });
        values.push(v);
        parks.push(if i % 2 == 0 { "b" } else { "a" });
        values.push(v);
    }
    for (p, v) in parks.iter().zip(values.iter_mut()) {
        if *p == "b" {
            *v += 0.01;
        }
    }
    let fit = fit_fielding_park_adjustment(&parks, &values).unwrap();
    assert!((fit.coefficient("park:b").unwrap() - 0.01).abs() < 1e-8);
    assert_eq!(fit_fielding_park_adjustment(&parks, &values).unwrap(), fit);
}

#[test]
fn pitching_adjustment() {
    let recs: Vec<PlateAppearance> = (0..4).map(|i| pa("g", i, (0, 0), (1, 0), EventType::Groundout)).collect();
    let data = SeasonDataset::from_records(recs);
    let dp = [0.1, 0.3, -0.2, 0.0];
    let fit = fit_pitching_adjustment(&data, &dp).unwrap();
    let m = dp.iter().sum::<f64>() / 4.0;
    for (r, v) in fit.residuals.iter().zip(dp) {
        assert!((r - (v - m)).abs() < 1e-15);
    }

    let mut recs = Vec::new();
    let mut dp = Vec::new();
    for i in 0..10u32 {
        let adv = i % 2 == 1;
        let hand = if adv { Hand::L } else { Hand::R };
        recs.push(pa("g", i, (0, 0), (1, 0), EventType::Groundout).hands(hand, Hand::R));
        let noise = if (i / 2) % 2 == 0 { 0.05 } else { -0.05 };
        dp.push(noise + if adv { -0.02 } else { 0.0 });
    }
    let data = SeasonDataset::from_records(recs);
    let fit = fit_pitching_adjustment(&data, &dp).unwrap();
    assert!((fit.coefficient("platoon").unwrap() + 0.02).abs() < 1e-8);
    assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-15);
}

#[test]
fn defensive_conservation_on_a_season() {
    let (data, d) = synthetic(50, 13);
    let ledger = build_defense_ledger(&data, &d, DefenseOptions::default()).unwrap();
    let mut pitch_sum = 0.0;
    let mut field_sum = 0.0;
    let scale: f64 = d.iter().map(|x| x.abs()).sum();
    for (row, pa) in ledger.rows.iter().zip(&data.plate_appearances) {
        let park_means: f64 = row.fielding.iter().map(|f| f.park_mean).sum();
        let total = row.raa_pitch + row.raa_field_total() + row.pitch_mean + park_means;
        assert!((total + row.delta).abs() < 1e-10);
        assert!((row.split.delta_p + row.split.delta_f + row.delta).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&row.split.p_hat));
        if pa.event_type.ball_in_play() {
            assert_eq!(row.fielding.len(), 9);
            let shares: f64 = row.fielding.iter().map(|f| f.share).sum();
            assert!((shares - 1.0).abs() < 1e-12);
            for f in &row.fielding {
                assert!((0.0..=1.0).contains(&f.probability) && (0.0..=1.0).contains(&f.share));
            }
        } else {
            assert!(row.fielding.is_empty());
            assert_eq!(row.split.delta_f, 0.0);
        }
        pitch_sum += row.raa_pitch;
        field_sum += row.raa_field_total();
    }
    assert!(pitch_sum.abs() < 1e-9 * scale);
    assert!(field_sum.abs() < 1e-9 * scale);
    assert!(data
        .plate_appearances
        .iter()
        .zip(&ledger.rows)
        .filter(|(p, _)| p.event_type == EventType::HomeRun)
        .all(|(_, r)| r.fielding.is_empty()));
}

#[test]
fn explicit_bandwidth_is_used() {
    let (data, _) = synthetic(20, 3);
    let bw = Bandwidth { x: 12.0, y: 15.0 };
    let surface = fit_out_surface(&data, Some(bw)).unwrap();
    assert_eq!(surface.bandwidth(), bw);
    assert!(matches!(
        fit_out_surface(&data, Some(Bandwidth { x: 0.0, y: 1.0 })),
        Err(Error::Bandwidth(..))
    ));
}

#[test]
fn exports() {
    let (data, d) = synthetic(20, 3);
    let ledger = build_defense_ledger(&data, &d, DefenseOptions::default()).unwrap();
    let mut grid = Vec::new();
    write_surface_grid(&ledger.surface, 30.0, &mut grid).unwrap();
    let text = String::from_utf8(grid).unwrap();
    assert!(text.starts_with("x,y,p_hat\n"));
    assert_eq!(text.lines().count(), 1 + 23 * 16);
    let mut coef = Vec::new();
    ledger.models.write_coefficients_csv(&mut coef).unwrap();
    let text = String::from_utf8(coef).unwrap();
    assert!(text.starts_with("position,term,coefficient\n"));
    assert!(text.lines().any(|l| l.starts_with("CF,xy,")));
}
